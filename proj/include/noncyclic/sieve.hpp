#pragma once

#include <cstdint>
#include <vector>

#include "noncyclic/arith.hpp"
#include "noncyclic/exec.hpp"

namespace noncyclic::arith {

std::vector<std::uint32_t> primes_up_to(std::uint64_t n);

/// Smallest-prime-factor table; factors any m <= limit() in O(log m).
class FactorSieve {
public:
    explicit FactorSieve(std::uint32_t limit);

    std::uint32_t limit() const { return static_cast<std::uint32_t>(spf_.size() - 1); }
    std::vector<PrimePower> factor(std::uint32_t m) const;
    std::uint32_t smallest_factor(std::uint32_t m) const { return spf_[m]; }

private:
    std::vector<std::uint32_t> spf_;
};

/// Linear sieve for mu(1..n); entry 0 is 0.
std::vector<std::int8_t> mobius_sieve(std::uint64_t n);

/// flags[k] = 1 iff k is square-free, for 0 <= k <= n (flags[0] = 0).
/// Parallel path sieves disjoint segments by the squares p^2, p <= sqrt(n).
std::vector<std::uint8_t> squarefree_sieve(std::uint64_t n, Exec exec = Exec::parallel);

} // namespace noncyclic::arith
