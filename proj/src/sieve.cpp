#include "noncyclic/sieve.hpp"

#include <algorithm>

namespace noncyclic::arith {

std::vector<std::uint32_t> primes_up_to(std::uint64_t n)
{
    std::vector<std::uint32_t> primes;
    if (n < 2)
        return primes;
    std::vector<bool> composite(n + 1, false);
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (composite[i])
            continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= n; j += i)
            composite[j] = true;
    }
    return primes;
}

FactorSieve::FactorSieve(std::uint32_t limit)
    : spf_(static_cast<std::size_t>(limit) + 1, 0)
{
    if (limit >= 1)
        spf_[1] = 1;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (spf_[i] != 0)
            continue;
        for (std::uint64_t j = i; j <= limit; j += i) {
            if (spf_[j] == 0)
                spf_[j] = static_cast<std::uint32_t>(i);
        }
    }
}

std::vector<PrimePower> FactorSieve::factor(std::uint32_t m) const
{
    std::vector<PrimePower> out;
    while (m > 1) {
        const std::uint32_t p = spf_[m];
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    return out;
}

std::vector<std::int8_t> mobius_sieve(std::uint64_t n)
{
    std::vector<std::int8_t> mu(n + 1, 0);
    if (n == 0)
        return mu;
    std::vector<std::uint32_t> primes;
    std::vector<bool> composite(n + 1, false);
    mu[1] = 1;
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (!composite[i]) {
            primes.push_back(static_cast<std::uint32_t>(i));
            mu[i] = -1;
        }
        for (std::uint32_t p : primes) {
            const std::uint64_t ip = i * p;
            if (ip > n)
                break;
            composite[ip] = true;
            if (i % p == 0) {
                mu[ip] = 0;
                break;
            }
            mu[ip] = static_cast<std::int8_t>(-mu[i]);
        }
    }
    return mu;
}

std::vector<std::uint8_t> squarefree_sieve(std::uint64_t n, Exec exec)
{
    std::vector<std::uint8_t> flags(n + 1, 1);
    flags[0] = 0;
    const std::vector<std::uint32_t> primes = primes_up_to(isqrt(n));

    constexpr std::uint64_t segment = std::uint64_t{1} << 16;
    const auto segments = static_cast<std::int64_t>(n / segment + 1);

    auto sieve_segment = [&](std::int64_t s) {
        const std::uint64_t lo = static_cast<std::uint64_t>(s) * segment;
        const std::uint64_t hi = std::min(n + 1, lo + segment);
        for (std::uint32_t p : primes) {
            const std::uint64_t q = std::uint64_t{p} * p;
            if (q >= hi)
                break;
            for (std::uint64_t k = std::max<std::uint64_t>(q, (lo + q - 1) / q * q); k < hi; k += q)
                flags[k] = 0;
        }
    };

    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t s = 0; s < segments; ++s)
            sieve_segment(s);
    } else {
        for (std::int64_t s = 0; s < segments; ++s)
            sieve_segment(s);
    }
    flags[0] = 0;
    return flags;
}

} // namespace noncyclic::arith
