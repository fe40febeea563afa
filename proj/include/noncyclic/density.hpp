#pragma once

// Square-free values of polynomials and class-group censuses:
//   rho_P(m)    zeros of P over (Z/m)^n
//   C_P         prod_p (1 - rho_P(p^2) / p^(2n)), truncated at p_max
//   N_P(B)      lattice points of a box where P is a nonzero square-free value
//   N_H(X)      square-free d <= X with H inside Cl(-d)
// plus the first and second moments feeding the Cauchy-Schwarz lower bounds.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noncyclic/arith.hpp"
#include "noncyclic/bigint.hpp"
#include "noncyclic/classgroup.hpp"
#include "noncyclic/exec.hpp"
#include "noncyclic/families.hpp"
#include "noncyclic/polynomial.hpp"

namespace noncyclic::density {

using classgroup::AbelianStructure;
using families::IntRange;

struct PolySpec {
    poly::Polynomial poly;
    std::vector<std::string> names;

    unsigned n_vars() const { return poly.n_vars(); }
    unsigned degree() const { return poly.total_degree(); }

    /// f(x, y, z) of the rank-2 family.
    static PolySpec rank2(unsigned g);
    static PolySpec parse(std::string_view text);
};

struct RhoBudget {
    /// Most residue points enumerated by one rho call.
    std::uint64_t max_points = std::uint64_t{1} << 32;
};

/// Exhaustive count over (Z/m)^n.
std::uint64_t rho(const PolySpec & P, std::uint64_t m, Exec exec = Exec::parallel, const RhoBudget & budget = {});

/// rho_P(p^2) from the zeros mod p: a nonsingular zero has p^(n-1) lifts,
/// a singular one has p^n or none according to P(x0) mod p^2.
std::uint64_t rho_hensel(const PolySpec & P, std::uint64_t p, Exec exec = Exec::parallel,
                         const RhoBudget & budget = {});

enum class RhoMode { brute, hensel };

struct PrimeFactor {
    std::uint64_t p = 0;
    std::uint64_t rho = 0;
    BigRational local_factor;
};

struct DensityReport {
    std::uint64_t p_max = 0;
    unsigned n_vars = 0;
    RhoMode mode = RhoMode::brute;
    BigRational partial_product{1};
    std::vector<PrimeFactor> per_prime;
    std::string tail_note;
};

DensityReport euler_constant(const PolySpec & P, std::uint64_t p_max, RhoMode mode = RhoMode::hensel,
                             Exec exec = Exec::parallel, const RhoBudget & budget = {});

/// Truncates q >= 0 to `digits` decimals, e.g. "0.267912".
std::string decimal(const BigRational & q, unsigned digits);

struct BoxBudget {
    std::uint64_t max_volume = std::uint64_t{1} << 24;
};

/// Points of the inclusive box where P is nonzero and square-free.
std::uint64_t n_p_empirical(const PolySpec & P, std::span<const IntRange> box, Exec exec = Exec::parallel,
                            const BoxBudget & box_budget = {}, const arith::FactorBudget & factor = {});

struct CensusRow {
    std::uint64_t X = 0;
    AbelianStructure H;
    std::uint64_t count = 0;
    /// Square-free d <= X in total.
    std::uint64_t squarefree_total = 0;
    std::optional<std::uint64_t> smallest_d;
};

struct CensusBudget {
    std::uint64_t max_X = 10'000'000;
    classgroup::EngineBudget engine;
};

CensusRow census_nh(std::uint64_t X, const AbelianStructure & H, Exec exec = Exec::parallel,
                    const CensusBudget & budget = {});

/// Rows at X / 2^k for k = checkpoints-1, ..., 0 (ascending X, duplicates and
/// zero dropped), one series per entry of `groups`, from a single sweep.
std::vector<CensusRow> census_series(std::uint64_t X, std::span<const AbelianStructure> groups, unsigned checkpoints,
                                     Exec exec = Exec::parallel, const CensusBudget & budget = {});

struct H2Moments {
    BigInt S1, S2;
    /// S1^2 / (S1 + S2), 0 when S1 = 0.
    BigRational lower_bound;
    std::uint64_t nonzero = 0;

    bool cauchy_holds() const { return lower_bound <= BigRational(big_u(nonzero)); }
};

/// S1 = sum R(d), S2 = sum R(d)(R(d) - 1).
H2Moments moments_h2(const std::map<BigInt, std::uint64_t> & R);

struct H3Moments {
    BigInt S1, S2;
    /// S1^2 / S2, 0 when S2 = 0.
    BigRational lower_bound;
    std::uint64_t distinct = 0;
};

/// S1 = sum mu(D)^2 r(D), S2 = sum mu(D)^2 r(D)^2 over positive D.
H3Moments moments_h3(const std::map<BigInt, std::uint64_t> & r, const arith::FactorBudget & budget = {});

} // namespace noncyclic::density
