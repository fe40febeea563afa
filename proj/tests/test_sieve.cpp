#include <doctest.h>

#include "noncyclic/sieve.hpp"

using namespace noncyclic;
using namespace noncyclic::arith;

namespace {

bool squarefree_naive(std::uint64_t n)
{
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % (p * p) == 0)
            return false;
    }
    return n != 0;
}

int mobius_naive(std::uint64_t n)
{
    int mu = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0)
                return 0;
            mu = -mu;
        }
    }
    if (n > 1)
        mu = -mu;
    return mu;
}

} // namespace

TEST_CASE("primes_up_to")
{
    CHECK(primes_up_to(1).empty());
    CHECK(primes_up_to(2) == std::vector<std::uint32_t>{2});
    CHECK(primes_up_to(30) == std::vector<std::uint32_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    CHECK(primes_up_to(1'000'000).size() == 78498);
}

TEST_CASE("FactorSieve reproduces its input")
{
    const FactorSieve fs(100000);
    for (std::uint32_t m = 2; m <= 100000; ++m) {
        std::uint64_t prod = 1;
        std::uint64_t last = 1;
        for (const auto & [p, e] : fs.factor(m)) {
            CHECK(p > last);
            CHECK(is_prime_u64(p));
            last = p;
            for (unsigned i = 0; i < e; ++i)
                prod *= p;
        }
        CHECK(prod == m);
    }
    CHECK(fs.factor(1).empty());
}

TEST_CASE("mobius sieve matches the naive definition")
{
    const auto mu = mobius_sieve(20000);
    CHECK(mu[0] == 0);
    for (std::uint64_t n = 1; n <= 20000; ++n)
        CHECK(mu[n] == mobius_naive(n));
}

TEST_CASE("square-free sieve: parallel equals serial equals naive")
{
    // sizes straddling the 2^16 segment boundary
    for (std::uint64_t n : {0ULL, 1ULL, 10ULL, 65535ULL, 65536ULL, 65537ULL, 200003ULL}) {
        const auto s = squarefree_sieve(n, Exec::serial);
        const auto p = squarefree_sieve(n, Exec::parallel);
        REQUIRE(s.size() == n + 1);
        CHECK(s == p);
        CHECK(s[0] == 0);
        if (n <= 65537) {
            for (std::uint64_t k = 1; k <= n; ++k)
                CHECK(static_cast<bool>(s[k]) == squarefree_naive(k));
        }
    }
    std::uint64_t count = 0;
    const auto s = squarefree_sieve(100);
    for (std::uint64_t k = 1; k <= 100; ++k)
        count += s[k];
    CHECK(count == 61);
}
