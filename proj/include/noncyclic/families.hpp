#pragma once

// Two explicit discriminant families:
//
//  * rank-2 g-torsion: D = f(a, b, n) with
//      f1(a, b)   = sum_{i<g} a^(g-1-i) b^i
//      f(a, b, n) = 2(a^g + b^g) n^g - (a - b)^2 n^(2g) - f1(a, b)^2
//    and witnesses X1 = f1 + (a-b)n^g, Y1 = an, X2 = f1 - (a-b)n^g, Y2 = bn
//    satisfying X_i^2 - 4 Y_i^g = -D. When D is admissible the ideal classes
//    behind (Y_i, X_i, Y_i^(g-1)) generate (Z/g)^2 inside Cl(-D).
//
//  * (Z/2)^l x Z/g1: square-free d with m^g1 = n^2 + t^2 d, where (n, m)
//    obey congruences modulo 18 and p_i^2 that force 3 | d and p_i || d.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noncyclic/arith.hpp"
#include "noncyclic/bigint.hpp"
#include "noncyclic/classgroup.hpp"
#include "noncyclic/exec.hpp"
#include "noncyclic/polynomial.hpp"

namespace noncyclic::families {

using classgroup::AbelianStructure;
using classgroup::QuadForm;

/// Inclusive integer range; empty when lo > hi.
struct IntRange {
    BigInt lo;
    BigInt hi;

    bool empty() const { return lo > hi; }
    BigInt size() const { return empty() ? BigInt(0) : BigInt(hi - lo + 1); }
};

// ---------------------------------------------------------------------------
// rank-2 family

BigInt f1_eval(const BigInt & a, const BigInt & b, unsigned g);
BigInt f_eval(const BigInt & a, const BigInt & b, const BigInt & n, unsigned g);

struct Witness {
    BigInt X1, Y1, X2, Y2;
};

/// Throws ContractViolation if either identity X_i^2 - 4 Y_i^g = -D fails.
Witness witness(const BigInt & a, const BigInt & b, const BigInt & n, unsigned g);

struct Rank2Instance {
    unsigned g = 0;
    BigInt a, b, n;
    BigInt D;
    Witness w;

    static Rank2Instance make(const BigInt & a, const BigInt & b, const BigInt & n, unsigned g);
};

enum class Reason { ok, a_equals_b, ab_not_above_one, nonpositive, size_bound, not_squarefree };

std::string_view reason_name(Reason r);

struct Admissibility {
    bool admissible = false;
    Reason reason = Reason::ok;

    explicit operator bool() const { return admissible; }
};

/// Clauses are checked in the order a != b, ab > 1, D > 0,
/// D >= 4 max(b a^(g-2) n^(g-1), a b^(g-2) n^(g-1)), D square-free.
Admissibility admissible(const Rank2Instance & inst, const arith::FactorBudget & budget = {});

/// reduce((Y_i, X_i, Y_i^(g-1))) for i = 1, 2; discriminant -D.
std::pair<QuadForm, QuadForm> instance_forms(const Rank2Instance & inst);

struct Rank2Verification {
    bool verified = false;
    std::uint64_t class_number = 0;
    AbelianStructure structure;
    std::uint64_t order1 = 0;
    std::uint64_t order2 = 0;
    std::uint64_t subgroup_order = 0;
    bool structure_embeds = false;
};

/// Throws DomainError when the instance is not admissible.
Rank2Verification verify_rank2(const Rank2Instance & inst, const classgroup::EngineBudget & engine = {},
                               const arith::FactorBudget & factor = {});

struct Rank2Row {
    Rank2Instance instance;
    Admissibility admissibility;
    std::optional<Rank2Verification> verification;
    /// Budget or evaluation error for this row; empty when none.
    std::string error;
};

struct ScanOptions {
    bool verify = true;
    Exec exec = Exec::parallel;
    classgroup::EngineBudget engine;
    arith::FactorBudget factor;
    /// Refuse boxes with more tuples than this.
    std::uint64_t max_tuples = std::uint64_t{1} << 24;
};

/// Every (a, b, n) of the box in lexicographic order.
std::vector<Rank2Row> scan_rank2(unsigned g, const IntRange & a_range, const IntRange & b_range,
                                 const IntRange & n_range, const ScanOptions & options = {});

/// r(D): how many scanned tuples produced each value D. With
/// `admissible_only` rows failing admissibility are skipped.
std::map<BigInt, std::uint64_t> value_multiplicities(std::span<const Rank2Row> rows, bool admissible_only = true);

/// Integer points of the open box
///   x, y in (X^(1/(2(g-1))) / (16 g^2), (2^(2g-4) g^(g-2) + 1) / (2^(2g) g^g) X^(1/(2(g-1))))
///   z    in (X^((g-2)/(2g(g-1))) / 2, X^((g-2)/(2g(g-1))))
/// as inclusive ranges (possibly empty).
struct BoxR {
    IntRange x, y, z;
    long double x_lower, x_upper, z_lower, z_upper;
};
BoxR box_R(long double X, unsigned g);

/// f(x, y, z) as a polynomial in three variables.
poly::Polynomial rank2_polynomial(unsigned g);

// ---------------------------------------------------------------------------
// (Z/2)^l x Z/g1 family

struct CongruenceSpec {
    unsigned l = 0;
    unsigned g1 = 0;
    std::vector<std::uint64_t> primes;
    std::vector<BigInt> a_offsets;
    std::vector<BigInt> b_offsets;
    BigInt n0, m0, modulus;
};

/// Validates p_i > 3 prime and distinct, g1 odd >= 3, p_i not dividing
/// 2 a_i - g1 b_i; merges n = 2, m = 1 (mod 18) and n = 1 + a_i p_i,
/// m = 1 + b_i p_i (mod p_i^2).
CongruenceSpec congruence_spec(unsigned l, unsigned g1, std::span<const std::uint64_t> primes,
                               std::span<const BigInt> a_offsets, std::span<const BigInt> b_offsets);

struct WindowParams {
    long double X = 0, T = 0, M = 0, N = 0;
    unsigned g1 = 0;

    IntRange m_range() const; // M < m <= 2M
    IntRange n_range() const; // N < n <= 2N
    IntRange t_range() const; // T < t <= 2T
};

/// T defaults to X^((g1-2)/(4g1+4)); M = T^(2/g1) X^(1/g1) / 2,
/// N = T X^(1/2) / 2^(g1+1). Rejects T > X^(1/2) / 64.
WindowParams windows(long double X, unsigned g1, std::optional<long double> T = std::nullopt);

struct SolutionTriple {
    BigInt m, n, t, d;

    auto operator<=>(const SolutionTriple &) const = default;
};

/// R(d): solutions of m^g1 = n^2 + t^2 d with m, n in the spec classes,
/// t not dividing m, gcd(m, n) = 1 unless `literal`, and (m, n, t) inside
/// the windows. 0 for non-square-free d.
std::uint64_t count_R(const BigInt & d, const CongruenceSpec & spec, const WindowParams & w,
                      const arith::FactorBudget & budget = {}, bool literal = false);

struct SearchOptions {
    /// Allow t | m (in particular t = 1).
    bool relaxed = false;
    /// Drop the gcd(m, n) = 1 requirement. Without it the ideal
    /// (n + t sqrt(-d)) need not be primitive and the g1-torsion can vanish,
    /// e.g. d = 43782975285 from (m, n, t) = (132301, 37688456, 143).
    bool literal = false;
    /// Only emit d <= max_d when set.
    std::optional<BigInt> max_d;
};

/// All (m, n, t) in the ranges satisfying the spec congruences, t not dividing m
/// (unless relaxed), gcd(m, n) = 1 (unless literal) and t^2 | m^g1 - n^2 > 0;
/// d = (m^g1 - n^2) / t^2.
/// Sorted by (d, m, n, t).
std::vector<SolutionTriple> search_H2(const CongruenceSpec & spec, const IntRange & m_range, const IntRange & n_range,
                                      const IntRange & t_range, const SearchOptions & options = {});

/// R(d) over a list of triples, restricted to square-free d.
std::map<BigInt, std::uint64_t> r_counts(std::span<const SolutionTriple> triples, const arith::FactorBudget & budget = {});

/// (Z/2)^l x Z/g1 as an AbelianStructure.
AbelianStructure h2_structure(unsigned l, unsigned g1);

struct H2Verification {
    bool verified = false;
    std::uint64_t class_number = 0;
    AbelianStructure structure;
    unsigned genus_two_rank = 0;
};

H2Verification verify_H2(const BigInt & d, unsigned l, unsigned g1, const classgroup::EngineBudget & engine = {},
                         const arith::FactorBudget & factor = {});

// ---------------------------------------------------------------------------
// numeric square-free witness for f(x, y, z)

struct LineTrial {
    std::vector<BigInt> point;
    std::vector<BigInt> direction;
    int degree = 0;
    int gcd_degree = 0;
    bool squarefree = false;
    /// u * (t - k)^2 was flagged as having a repeated factor.
    bool control_detected = false;
    std::int64_t control_root = 0;
};

struct LineWitnessReport {
    unsigned g = 0;
    std::uint64_t seed = 0;
    std::vector<LineTrial> trials;
    unsigned degenerate_redraws = 0;

    bool all_squarefree() const;
    bool all_controls_detected() const;
};

LineWitnessReport poly_squarefree_witness(unsigned g, unsigned trials, std::uint64_t seed);

} // namespace noncyclic::families
