#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace noncyclic {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline BigInt big(std::int64_t v)
{
    BigInt r;
    mpz_set_si(r.get_mpz_t(), static_cast<long>(v));
    return r;
}

inline BigInt big_u(std::uint64_t v)
{
    BigInt r;
    mpz_set_ui(r.get_mpz_t(), static_cast<unsigned long>(v));
    return r;
}

inline bool fits_u64(const BigInt & v)
{
    return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

inline bool fits_i64(const BigInt & v)
{
    return mpz_fits_slong_p(v.get_mpz_t()) != 0;
}

inline std::uint64_t to_u64(const BigInt & v)
{
    return static_cast<std::uint64_t>(mpz_get_ui(v.get_mpz_t()));
}

inline std::int64_t to_i64(const BigInt & v)
{
    return static_cast<std::int64_t>(mpz_get_si(v.get_mpz_t()));
}

inline BigInt pow(const BigInt & base, unsigned long e)
{
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline unsigned bit_length(const BigInt & v)
{
    return sgn(v) == 0 ? 0U : static_cast<unsigned>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

inline std::string to_string(const BigInt & v)
{
    return v.get_str(10);
}

inline BigInt parse_bigint(const std::string & s)
{
    BigInt r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("not a decimal integer: '" + s + "'");
    return r;
}

} // namespace noncyclic
