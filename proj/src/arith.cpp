#include "noncyclic/arith.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "noncyclic/errors.hpp"

namespace noncyclic::arith {

namespace {

__extension__ typedef unsigned __int128 u128;

constexpr unsigned kTrialBound = 1000;

std::uint64_t sub_abs(std::uint64_t a, std::uint64_t b)
{
    return a > b ? a - b : b - a;
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m)
{
    // extended Euclid on signed 128-bit; caller guarantees gcd(a, m) = 1
    __extension__ typedef __int128 i128;
    i128 old_r = static_cast<i128>(a % m), r = static_cast<i128>(m);
    i128 old_s = 1, s = 0;
    while (r != 0) {
        i128 q = old_r / r;
        i128 t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    i128 res = old_s % static_cast<i128>(m);
    if (res < 0)
        res += m;
    return static_cast<std::uint64_t>(res);
}

// Pollard-Brent; returns a nontrivial factor of composite n or 0 on failure
// with this constant.
std::uint64_t brent_u64(std::uint64_t n, std::uint64_t c, std::uint64_t & iterations_left)
{
    auto step = [&](std::uint64_t x) {
        std::uint64_t y = mulmod(x, x, n) + c;
        return y >= n ? y - n : y;
    };
    constexpr std::uint64_t block = 128;
    std::uint64_t y = 2, x = 2, ys = 2, q = 1, g = 1;
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i)
            y = step(y);
        for (std::uint64_t k = 0; k < r && g == 1; k += block) {
            ys = y;
            const std::uint64_t lim = std::min(block, r - k);
            for (std::uint64_t i = 0; i < lim; ++i) {
                y = step(y);
                q = mulmod(q, sub_abs(x, y), n);
            }
            g = std::gcd(q, n);
            if (iterations_left < lim)
                throw BudgetError("factoring budget exhausted (Pollard-Brent iterations) on " +
                                  std::to_string(n));
            iterations_left -= lim;
        }
    }
    if (g == n) {
        do {
            ys = step(ys);
            g = std::gcd(sub_abs(x, ys), n);
        } while (g == 1);
    }
    return g == n ? 0 : g;
}

void split_u64(std::uint64_t n, std::map<std::uint64_t, unsigned> & out, std::uint64_t & iterations_left)
{
    if (n == 1)
        return;
    if (is_prime_u64(n)) {
        ++out[n];
        return;
    }
    if (is_square(n)) {
        std::uint64_t r = isqrt(n);
        split_u64(r, out, iterations_left);
        split_u64(r, out, iterations_left);
        return;
    }
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t d = brent_u64(n, c, iterations_left);
        if (d != 0) {
            split_u64(d, out, iterations_left);
            split_u64(n / d, out, iterations_left);
            return;
        }
    }
}

BigInt brent_big(const BigInt & n, unsigned long c, std::uint64_t & iterations_left)
{
    auto step = [&](const BigInt & x) {
        BigInt y = x * x + c;
        mpz_mod(y.get_mpz_t(), y.get_mpz_t(), n.get_mpz_t());
        return y;
    };
    constexpr std::uint64_t block = 128;
    BigInt y = 2, x = 2, ys = 2, q = 1, g = 1, diff;
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i)
            y = step(y);
        for (std::uint64_t k = 0; k < r && g == 1; k += block) {
            ys = y;
            const std::uint64_t lim = std::min(block, r - k);
            for (std::uint64_t i = 0; i < lim; ++i) {
                y = step(y);
                diff = abs(x - y);
                q = q * diff % n;
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            if (iterations_left < lim)
                throw BudgetError("factoring budget exhausted (Pollard-Brent iterations) on " +
                                  n.get_str());
            iterations_left -= lim;
        }
    }
    if (g == n) {
        do {
            ys = step(ys);
            diff = abs(x - ys);
            mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    return g == n ? BigInt(0) : g;
}

void split_big(const BigInt & n, std::map<BigInt, unsigned> & out, std::uint64_t & iterations_left)
{
    if (n == 1)
        return;
    if (fits_u64(n)) {
        std::map<std::uint64_t, unsigned> small;
        split_u64(to_u64(n), small, iterations_left);
        for (auto [p, e] : small)
            out[big_u(p)] += e;
        return;
    }
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        BigInt r = sqrt(n);
        split_big(r, out, iterations_left);
        split_big(r, out, iterations_left);
        return;
    }
    for (unsigned long c = 1;; ++c) {
        BigInt d = brent_big(n, c, iterations_left);
        if (d != 0) {
            split_big(d, out, iterations_left);
            split_big(n / d, out, iterations_left);
            return;
        }
    }
}

// Square roots of a unit modulo an odd prime power.
std::vector<std::uint64_t> unit_sqrt_odd(std::uint64_t u, std::uint64_t p, unsigned e, std::uint64_t pe)
{
    std::uint64_t up = u % p;
    if (powmod(up, (p - 1) / 2, p) != 1)
        return {};
    // Tonelli-Shanks mod p
    std::uint64_t x;
    if (p % 4 == 3) {
        x = powmod(up, (p + 1) / 4, p);
    } else {
        std::uint64_t q = p - 1;
        unsigned s = 0;
        while (q % 2 == 0) {
            q /= 2;
            ++s;
        }
        std::uint64_t z = 2;
        while (powmod(z, (p - 1) / 2, p) != p - 1)
            ++z;
        std::uint64_t c = powmod(z, q, p);
        x = powmod(up, (q + 1) / 2, p);
        std::uint64_t t = powmod(up, q, p);
        unsigned m = s;
        while (t != 1) {
            unsigned i = 0;
            std::uint64_t tt = t;
            while (tt != 1) {
                tt = mulmod(tt, tt, p);
                ++i;
            }
            std::uint64_t b = c;
            for (unsigned j = 0; j + i + 1 < m; ++j)
                b = mulmod(b, b, p);
            x = mulmod(x, b, p);
            c = mulmod(b, b, p);
            t = mulmod(t, c, p);
            m = i;
        }
    }
    // Hensel lift one power at a time
    std::uint64_t q = p;
    for (unsigned j = 1; j < e; ++j) {
        const std::uint64_t next = q * p;
        const std::uint64_t ux = u % next;
        const std::uint64_t x2 = mulmod(x, x, next);
        // (x^2 - u) / q mod p
        const std::uint64_t diff = (x2 + next - ux) % next;
        const std::uint64_t k = (diff / q) % p;
        const std::uint64_t inv = inverse_mod((2 * x) % p, p);
        const std::uint64_t t = (p - mulmod(k, inv, p)) % p;
        x = (x + t * q) % next;
        q = next;
    }
    std::vector<std::uint64_t> roots{x, (pe - x) % pe};
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

std::vector<std::uint64_t> unit_sqrt_two(std::uint64_t u, unsigned e)
{
    const std::uint64_t pe = std::uint64_t{1} << e;
    u %= pe;
    if (e == 1)
        return {1};
    if (e == 2)
        return u % 4 == 1 ? std::vector<std::uint64_t>{1, 3} : std::vector<std::uint64_t>{};
    if (u % 8 != 1)
        return {};
    std::uint64_t x = 1;
    for (unsigned j = 3; j < e; ++j) {
        const std::uint64_t mod = std::uint64_t{1} << (j + 1);
        if ((mulmod(x, x, mod) + mod - u % mod) % mod != 0)
            x += std::uint64_t{1} << (j - 1);
    }
    const std::uint64_t half = pe / 2;
    std::vector<std::uint64_t> roots{x % pe, (pe - x) % pe, (x + half) % pe, (pe - x + half) % pe};
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

} // namespace

BigInt Factorization::product() const
{
    BigInt r = 1;
    for (const auto & [p, e] : factors)
        r *= pow(p, e);
    return r;
}

std::vector<PrimePower> Factorization::as_u64() const
{
    std::vector<PrimePower> out;
    out.reserve(factors.size());
    for (const auto & [p, e] : factors) {
        if (!fits_u64(p))
            throw DomainError("prime does not fit in 64 bits: " + p.get_str());
        out.push_back({to_u64(p), e});
    }
    return out;
}

std::string Factorization::to_string() const
{
    if (factors.empty())
        return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto & [p, e] : factors) {
        if (!first)
            os << " * ";
        first = false;
        os << p.get_str();
        if (e > 1)
            os << '^' << e;
    }
    return os.str();
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1)
            r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

std::uint64_t isqrt(std::uint64_t n)
{
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n)
        --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

bool is_square(std::uint64_t n)
{
    const std::uint64_t r = isqrt(n);
    return r * r == n;
}

bool is_prime_u64(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0)
            return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    // bases sufficient for every n < 2^64
    for (std::uint64_t a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
        a %= n;
        if (a == 0)
            continue;
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

bool is_prime(const BigInt & n)
{
    if (sgn(n) <= 0)
        return false;
    if (fits_u64(n))
        return is_prime_u64(to_u64(n));
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

std::vector<PrimePower> factorize_u64(std::uint64_t n)
{
    if (n == 0)
        throw DomainError("factorize: n must be positive");
    std::map<std::uint64_t, unsigned> acc;
    for (std::uint64_t p = 2; p < kTrialBound && p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            ++acc[p];
            n /= p;
        }
    }
    if (n > 1) {
        std::uint64_t iterations = FactorBudget{}.rho_iterations;
        split_u64(n, acc, iterations);
    }
    std::vector<PrimePower> out;
    out.reserve(acc.size());
    for (auto [p, e] : acc)
        out.push_back({p, e});
    return out;
}

Factorization factorize(const BigInt & n, const FactorBudget & budget)
{
    if (sgn(n) <= 0)
        throw DomainError("factorize: n must be positive, got " + n.get_str());
    if (bit_length(n) > budget.max_bits)
        throw BudgetError("factorize: " + std::to_string(bit_length(n)) + "-bit input exceeds budget of " +
                          std::to_string(budget.max_bits) + " bits");
    Factorization result{n, {}};
    std::map<BigInt, unsigned> acc;
    BigInt rest = n;
    for (unsigned long p = 2; p < kTrialBound; p += (p == 2 ? 1 : 2)) {
        if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            unsigned e = 0;
            while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
                mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
                ++e;
            }
            acc[BigInt(p)] = e;
        }
        if (rest < BigInt(p) * p)
            break;
    }
    std::uint64_t iterations = budget.rho_iterations;
    split_big(rest, acc, iterations);
    result.factors.assign(acc.begin(), acc.end());
    return result;
}

bool is_squarefree(const BigInt & n, const FactorBudget & budget)
{
    const Factorization f = factorize(n, budget);
    return std::all_of(f.factors.begin(), f.factors.end(), [](const auto & pe) { return pe.second == 1; });
}

int mobius(const BigInt & n, const FactorBudget & budget)
{
    const Factorization f = factorize(n, budget);
    int sign = 1;
    for (const auto & [p, e] : f.factors) {
        if (e > 1)
            return 0;
        sign = -sign;
    }
    return sign;
}

unsigned omega(const BigInt & n, const FactorBudget & budget)
{
    if (sgn(n) == 0)
        throw DomainError("omega: n must be nonzero");
    return static_cast<unsigned>(factorize(abs(n), budget).factors.size());
}

Congruence crt_solve(std::span<const Congruence> pairs)
{
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (sgn(pairs[i].modulus) <= 0)
            throw DomainError("crt_solve: modulus #" + std::to_string(i) + " must be positive");
        for (std::size_t j = i + 1; j < pairs.size(); ++j) {
            BigInt g = gcd(pairs[i].modulus, pairs[j].modulus);
            if (g != 1)
                throw DomainError("crt_solve: moduli " + pairs[i].modulus.get_str() + " (#" + std::to_string(i) +
                                  ") and " + pairs[j].modulus.get_str() + " (#" + std::to_string(j) +
                                  ") share the factor " + g.get_str());
        }
    }
    Congruence acc{0, 1};
    for (const auto & c : pairs) {
        BigInt r = c.residue % c.modulus;
        if (sgn(r) < 0)
            r += c.modulus;
        // acc.residue + acc.modulus * k = r (mod c.modulus)
        BigInt inv;
        mpz_invert(inv.get_mpz_t(), acc.modulus.get_mpz_t(), c.modulus.get_mpz_t());
        BigInt k = (r - acc.residue) * inv % c.modulus;
        if (sgn(k) < 0)
            k += c.modulus;
        acc.residue += acc.modulus * k;
        acc.modulus *= c.modulus;
    }
    return acc;
}

std::vector<std::uint64_t> sqrt_mod_prime_power(std::uint64_t a, std::uint64_t p, unsigned e)
{
    std::uint64_t pe = 1;
    for (unsigned i = 0; i < e; ++i)
        pe *= p;
    a %= pe;
    std::vector<std::uint64_t> roots;
    if (a == 0) {
        // x = 0 mod p^ceil(e/2)
        std::uint64_t step = 1;
        for (unsigned i = 0; i < (e + 1) / 2; ++i)
            step *= p;
        for (std::uint64_t x = 0; x < pe; x += step)
            roots.push_back(x);
        return roots;
    }
    unsigned k = 0;
    std::uint64_t u = a;
    while (u % p == 0) {
        u /= p;
        ++k;
    }
    if (k % 2 == 1)
        return {};
    const unsigned h = k / 2;
    const unsigned rest = e - k;
    std::uint64_t prest = 1, ph = 1;
    for (unsigned i = 0; i < rest; ++i)
        prest *= p;
    for (unsigned i = 0; i < h; ++i)
        ph *= p;
    const std::vector<std::uint64_t> unit_roots = p == 2 ? unit_sqrt_two(u, rest) : unit_sqrt_odd(u % prest, p, rest, prest);
    for (std::uint64_t y0 : unit_roots) {
        for (std::uint64_t j = 0; j < ph; ++j) {
            const std::uint64_t y = y0 + j * prest; // < p^(e-h)
            roots.push_back(static_cast<std::uint64_t>(static_cast<u128>(ph) * y % pe));
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

std::vector<std::uint64_t> sqrt_mod(std::int64_t a, std::uint64_t m, std::span<const PrimePower> factors)
{
    if (m == 0)
        throw DomainError("sqrt_mod: modulus must be positive");
    std::uint64_t check = 1;
    for (const auto & pp : factors) {
        if (pp.exponent == 0 || !is_prime_u64(pp.prime))
            throw DomainError("sqrt_mod: malformed factorization of modulus");
        for (unsigned i = 0; i < pp.exponent; ++i)
            check *= pp.prime;
    }
    if (check != m)
        throw DomainError("sqrt_mod: factorization does not multiply to " + std::to_string(m));

    std::int64_t ar = a % static_cast<std::int64_t>(m);
    if (ar < 0)
        ar += static_cast<std::int64_t>(m);
    return detail::sqrt_mod_trusted(static_cast<std::uint64_t>(ar), m, factors);
}

namespace detail {

std::vector<std::uint64_t> sqrt_mod_trusted(std::uint64_t au, std::uint64_t m, std::span<const PrimePower> factors)
{
    au %= m;
    std::vector<std::uint64_t> acc{0};
    std::uint64_t acc_mod = 1;
    for (const auto & pp : factors) {
        std::uint64_t q = 1;
        for (unsigned i = 0; i < pp.exponent; ++i)
            q *= pp.prime;
        const std::vector<std::uint64_t> local = sqrt_mod_prime_power(au % q, pp.prime, pp.exponent);
        if (local.empty())
            return {};
        const std::uint64_t inv = inverse_mod(acc_mod % q, q);
        std::vector<std::uint64_t> next;
        next.reserve(acc.size() * local.size());
        for (std::uint64_t r : acc) {
            for (std::uint64_t s : local) {
                const std::uint64_t k = mulmod((s + q - r % q) % q, inv, q);
                next.push_back(r + acc_mod * k);
            }
        }
        acc = std::move(next);
        acc_mod *= q;
    }
    std::sort(acc.begin(), acc.end());
    return acc;
}

} // namespace detail

int kronecker(const BigInt & D, const BigInt & n)
{
    if (sgn(n) <= 0)
        throw DomainError("kronecker: n must be positive");
    return mpz_kronecker(D.get_mpz_t(), n.get_mpz_t());
}

} // namespace noncyclic::arith
