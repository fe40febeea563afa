#pragma once

// Exact integer kernel: factoring, square-freeness, Moebius, CRT, modular
// square roots and the Kronecker symbol.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "noncyclic/bigint.hpp"

namespace noncyclic::arith {

struct PrimePower {
    std::uint64_t prime;
    unsigned exponent;

    bool operator==(const PrimePower &) const = default;
};

/// Prime decomposition of a positive integer. Primes are strictly increasing.
struct Factorization {
    BigInt value;
    std::vector<std::pair<BigInt, unsigned>> factors;

    BigInt product() const;
    /// Only valid when every prime fits in 64 bits.
    std::vector<PrimePower> as_u64() const;
    std::string to_string() const;
};

struct FactorBudget {
    /// Inputs with more bits than this are refused outright.
    unsigned max_bits = 192;
    /// Per-split cap on Pollard-Brent iterations.
    std::uint64_t rho_iterations = std::uint64_t{1} << 24;
};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
std::uint64_t isqrt(std::uint64_t n);
bool is_square(std::uint64_t n);

/// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);
/// Deterministic below 2^64, probabilistic (GMP, 40 rounds) beyond.
bool is_prime(const BigInt & n);

std::vector<PrimePower> factorize_u64(std::uint64_t n);
Factorization factorize(const BigInt & n, const FactorBudget & budget = {});

bool is_squarefree(const BigInt & n, const FactorBudget & budget = {});
int mobius(const BigInt & n, const FactorBudget & budget = {});
/// Number of distinct prime divisors of |n|, n != 0.
unsigned omega(const BigInt & n, const FactorBudget & budget = {});

struct Congruence {
    BigInt residue;
    BigInt modulus;
};

/// Unique residue modulo the product of pairwise coprime moduli.
/// Throws DomainError naming the first non-coprime pair.
Congruence crt_solve(std::span<const Congruence> pairs);

/// All x in [0, m) with x^2 = a (mod m), sorted. `factors` must be the
/// factorization of m (empty for m = 1). m < 2^62.
std::vector<std::uint64_t> sqrt_mod(std::int64_t a, std::uint64_t m,
                                    std::span<const PrimePower> factors);
std::vector<std::uint64_t> sqrt_mod_prime_power(std::uint64_t a, std::uint64_t p, unsigned e);

namespace detail {
/// sqrt_mod without validating the factorization.
std::vector<std::uint64_t> sqrt_mod_trusted(std::uint64_t a, std::uint64_t m, std::span<const PrimePower> factors);
} // namespace detail

/// Kronecker symbol (D/n) for n >= 1.
int kronecker(const BigInt & D, const BigInt & n);

} // namespace noncyclic::arith
