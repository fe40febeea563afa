#pragma once

// Class groups of imaginary quadratic fields through reduced binary
// quadratic forms. Forms carry 64-bit coefficients; discriminants are
// bounded by EngineBudget so every intermediate product fits in 128 bits.

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "noncyclic/arith.hpp"
#include "noncyclic/bigint.hpp"
#include "noncyclic/exec.hpp"

namespace noncyclic::classgroup {

/// Hard ceiling for |delta|: keeps b^2 and 4ac below 2^127 during composition.
inline constexpr std::uint64_t kMaxAbsDelta = std::uint64_t{1} << 60;

struct EngineBudget {
    /// Largest |delta| for which forms are enumerated.
    std::uint64_t max_abs_delta = std::uint64_t{1} << 40;
};

/// Fundamental discriminant of Q(sqrt(-d)) together with its radicand d.
struct Discriminant {
    BigInt radicand;
    BigInt delta;

    /// delta as a machine integer; throws BudgetError beyond kMaxAbsDelta.
    std::int64_t value() const;
    std::uint64_t abs_value() const { return static_cast<std::uint64_t>(-value()); }
};

Discriminant fundamental_discriminant(const BigInt & d);
/// Accepts a negative fundamental discriminant and recovers its radicand.
Discriminant discriminant_from_delta(const BigInt & delta);

/// (a, b, c) stands for a x^2 + b xy + c y^2.
struct QuadForm {
    std::int64_t a = 1;
    std::int64_t b = 0;
    std::int64_t c = 1;

    auto operator<=>(const QuadForm &) const = default;

    std::int64_t discriminant() const;
    bool is_reduced() const;
    bool is_primitive() const;
    std::string to_string() const;
};

struct QuadFormHash {
    std::size_t operator()(const QuadForm & f) const noexcept
    {
        std::uint64_t h = static_cast<std::uint64_t>(f.a) * 0x9E3779B97F4A7C15ULL;
        h ^= static_cast<std::uint64_t>(f.b) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

QuadForm principal_form(std::int64_t delta);

/// Reduced representative: |b| <= a <= c, and b >= 0 when |b| = a or a = c.
/// Rejects forms that are not positive definite.
QuadForm reduce(const QuadForm & f);
/// Reduces an arbitrary-precision form, then narrows it.
QuadForm reduce(const BigInt & a, const BigInt & b, const BigInt & c);

QuadForm compose(const QuadForm & f, const QuadForm & g);
QuadForm inverse(const QuadForm & f);
QuadForm power(const QuadForm & f, std::uint64_t e);
inline bool is_principal(const QuadForm & f) { return f.a == 1; }

/// One reduced form per class, ordered by (a, b). Enumerates a up to
/// sqrt(|delta|/3) and solves b^2 = delta (mod 4a).
std::vector<QuadForm> enumerate_reduced_forms(const Discriminant & D, const EngineBudget & budget = {});

/// Finite abelian group as invariant factors d1 | d2 | ... | dk, each >= 2.
struct AbelianStructure {
    std::vector<std::uint64_t> invariant_factors;

    bool operator==(const AbelianStructure &) const = default;

    std::uint64_t order() const;
    /// Number of invariant factors divisible by m.
    unsigned count_divisible_by(std::uint64_t m) const;
    unsigned p_rank(std::uint64_t p) const { return count_divisible_by(p); }
    /// #{x : x^m = 1}.
    std::uint64_t torsion_count(std::uint64_t m) const;
    std::string to_string() const;

    /// Normalizes any list of cyclic orders, e.g. {2, 2, 5} -> [2, 10].
    static AbelianStructure from_cyclic_orders(std::span<const std::uint64_t> orders);
    /// Recovers the group from N(p^j) = #{x : x^(p^j) = 1}. `counts[j]` is
    /// N(p^j) for j = 0..; one entry per prime.
    static AbelianStructure from_prime_torsion_counts(
        std::span<const std::pair<std::uint64_t, std::vector<std::uint64_t>>> counts);
};

/// Least n >= 1 with f^n principal; `class_number` must be a multiple of the order.
std::uint64_t element_order(const QuadForm & f, std::uint64_t class_number);
std::uint64_t element_order(const QuadForm & f, const EngineBudget & budget = {});

/// Closure of the subgroup generated by `generators`; throws BudgetError once
/// it exceeds `limit` elements.
std::vector<QuadForm> generated_subgroup(std::span<const QuadForm> generators, std::size_t limit);

/// Structure from the full list of reduced forms. The fast path isolates each
/// Sylow subgroup as the image of x -> x^(h/p^v) and counts its torsion; the
/// reference path computes every element order and counts N(m) directly.
AbelianStructure structure_from_forms(std::span<const QuadForm> forms);
AbelianStructure structure_from_forms_reference(std::span<const QuadForm> forms);

AbelianStructure group_structure(const Discriminant & D, const EngineBudget & budget = {});

/// True iff H injects into G: for every prime p and j >= 1, G has at least
/// as many invariant factors divisible by p^j as H does.
bool embeds(const AbelianStructure & H, const AbelianStructure & G);

/// omega(|delta|) - 1.
unsigned two_rank_genus(const Discriminant & D, const arith::FactorBudget & budget = {});

struct ClassGroupSummary {
    std::int64_t delta = 0;
    std::uint64_t class_number = 0;
    AbelianStructure structure;
};

/// Class number and structure for a batch of discriminants, in input order.
std::vector<ClassGroupSummary> sweep(std::span<const Discriminant> discriminants, Exec exec = Exec::parallel,
                                     const EngineBudget & budget = {});

} // namespace noncyclic::classgroup
