#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noncyclic/bigint.hpp"

namespace noncyclic::poly {

/// Sparse multivariate polynomial with integer coefficients.
class Polynomial {
public:
    using Exponents = std::vector<unsigned>;

    explicit Polynomial(unsigned n_vars = 0) : n_vars_(n_vars) {}

    static Polynomial constant(unsigned n_vars, const BigInt & c);
    static Polynomial variable(unsigned n_vars, unsigned index);

    unsigned n_vars() const { return n_vars_; }
    unsigned total_degree() const;
    /// Largest exponent of variable `var` in any term.
    unsigned degree_in(unsigned var) const;
    bool is_zero() const { return terms_.empty(); }
    const std::map<Exponents, BigInt> & terms() const { return terms_; }

    Polynomial & operator+=(const Polynomial & o);
    Polynomial & operator-=(const Polynomial & o);
    friend Polynomial operator+(Polynomial a, const Polynomial & b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial & b) { return a -= b; }
    friend Polynomial operator*(const Polynomial & a, const Polynomial & b);
    friend Polynomial operator*(const BigInt & k, const Polynomial & p);
    Polynomial operator-() const;
    Polynomial pow(unsigned e) const;
    bool operator==(const Polynomial &) const = default;

    Polynomial derivative(unsigned var) const;
    BigInt evaluate(std::span<const BigInt> point) const;
    std::string to_string(std::span<const std::string> names) const;

private:
    void add_term(const Exponents & e, const BigInt & c);

    unsigned n_vars_;
    std::map<Exponents, BigInt> terms_;
};

/// Evaluates a polynomial at residues modulo a fixed m using precomputed
/// power tables; intended for exhaustive enumeration of (Z/m)^n.
class ModularEvaluator {
public:
    ModularEvaluator(const Polynomial & p, std::uint64_t m);

    std::uint64_t modulus() const { return m_; }
    std::uint64_t operator()(std::span<const std::uint64_t> point) const;

private:
    struct Term {
        std::uint64_t coef;
        std::vector<unsigned> exps;
    };
    std::uint64_t m_;
    unsigned n_vars_;
    std::vector<Term> terms_;
    // powers_[var][value * (max_exp + 1) + e]
    std::vector<std::vector<std::uint64_t>> powers_;
    std::vector<unsigned> max_exp_;
};

struct ParsedPolynomial {
    Polynomial poly;
    std::vector<std::string> variables; // sorted; index = variable position
};

/// Parses sums of products with integer literals, identifiers, + - * ^ and
/// parentheses, e.g. "2*(x^5+y^5)*z^5 - (x-y)^2*z^10". Throws DomainError.
ParsedPolynomial parse_polynomial(std::string_view text);

/// Univariate polynomial over Q, coefficients from degree 0 upward, trimmed.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<BigRational> coeffs);
    static UniPoly from_integers(std::span<const BigInt> coeffs);

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<BigRational> & coeffs() const { return coeffs_; }
    UniPoly derivative() const;
    friend UniPoly operator*(const UniPoly & a, const UniPoly & b);

    /// Monic gcd; zero only if both inputs are zero.
    static UniPoly gcd(UniPoly a, UniPoly b);
    /// gcd(u, u') constant, i.e. no repeated root over the algebraic closure.
    bool is_squarefree() const;

private:
    void trim();
    std::vector<BigRational> coeffs_;
};

/// Restricts p to the line point + t * direction.
UniPoly restrict_to_line(const Polynomial & p, std::span<const BigInt> point, std::span<const BigInt> direction);

} // namespace noncyclic::poly
