#include "noncyclic/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "noncyclic/errors.hpp"

namespace noncyclic::poly {

Polynomial Polynomial::constant(unsigned n_vars, const BigInt & c)
{
    Polynomial p(n_vars);
    p.add_term(Exponents(n_vars, 0), c);
    return p;
}

Polynomial Polynomial::variable(unsigned n_vars, unsigned index)
{
    if (index >= n_vars)
        throw DomainError("variable index out of range");
    Polynomial p(n_vars);
    Exponents e(n_vars, 0);
    e[index] = 1;
    p.add_term(e, 1);
    return p;
}

void Polynomial::add_term(const Exponents & e, const BigInt & c)
{
    if (c == 0)
        return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second == 0)
        terms_.erase(it);
}

unsigned Polynomial::total_degree() const
{
    unsigned d = 0;
    for (const auto & [e, c] : terms_) {
        unsigned s = 0;
        for (unsigned x : e)
            s += x;
        d = std::max(d, s);
    }
    return d;
}

unsigned Polynomial::degree_in(unsigned var) const
{
    unsigned d = 0;
    for (const auto & [e, c] : terms_)
        d = std::max(d, e[var]);
    return d;
}

Polynomial & Polynomial::operator+=(const Polynomial & o)
{
    if (o.n_vars_ != n_vars_)
        throw DomainError("polynomial arity mismatch");
    for (const auto & [e, c] : o.terms_)
        add_term(e, c);
    return *this;
}

Polynomial & Polynomial::operator-=(const Polynomial & o)
{
    if (o.n_vars_ != n_vars_)
        throw DomainError("polynomial arity mismatch");
    for (const auto & [e, c] : o.terms_)
        add_term(e, -c);
    return *this;
}

Polynomial operator*(const Polynomial & a, const Polynomial & b)
{
    if (a.n_vars_ != b.n_vars_)
        throw DomainError("polynomial arity mismatch");
    Polynomial r(a.n_vars_);
    Polynomial::Exponents e(a.n_vars_);
    for (const auto & [ea, ca] : a.terms_) {
        for (const auto & [eb, cb] : b.terms_) {
            for (unsigned i = 0; i < a.n_vars_; ++i)
                e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

Polynomial operator*(const BigInt & k, const Polynomial & p)
{
    Polynomial r(p.n_vars_);
    for (const auto & [e, c] : p.terms_)
        r.add_term(e, k * c);
    return r;
}

Polynomial Polynomial::operator-() const
{
    return BigInt(-1) * *this;
}

Polynomial Polynomial::pow(unsigned e) const
{
    Polynomial result = constant(n_vars_, 1);
    Polynomial base = *this;
    while (e) {
        if (e & 1)
            result = result * base;
        e >>= 1;
        if (e)
            base = base * base;
    }
    return result;
}

Polynomial Polynomial::derivative(unsigned var) const
{
    Polynomial r(n_vars_);
    for (const auto & [e, c] : terms_) {
        if (e[var] == 0)
            continue;
        Exponents d = e;
        --d[var];
        r.add_term(d, c * e[var]);
    }
    return r;
}

BigInt Polynomial::evaluate(std::span<const BigInt> point) const
{
    if (point.size() != n_vars_)
        throw DomainError("evaluate: expected " + std::to_string(n_vars_) + " coordinates");
    BigInt sum = 0, term;
    for (const auto & [e, c] : terms_) {
        term = c;
        for (unsigned i = 0; i < n_vars_; ++i) {
            if (e[i])
                term *= noncyclic::pow(point[i], e[i]);
        }
        sum += term;
    }
    return sum;
}

std::string Polynomial::to_string(std::span<const std::string> names) const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto & [e, c] = *it;
        BigInt mag = abs(c);
        if (first)
            os << (sgn(c) < 0 ? "-" : "");
        else
            os << (sgn(c) < 0 ? " - " : " + ");
        first = false;
        bool is_const = std::all_of(e.begin(), e.end(), [](unsigned x) { return x == 0; });
        bool wrote = false;
        if (mag != 1 || is_const) {
            os << mag.get_str();
            wrote = true;
        }
        for (unsigned i = 0; i < n_vars_; ++i) {
            if (!e[i])
                continue;
            os << (wrote ? "*" : "") << names[i];
            if (e[i] > 1)
                os << '^' << e[i];
            wrote = true;
        }
    }
    return os.str();
}

ModularEvaluator::ModularEvaluator(const Polynomial & p, std::uint64_t m)
    : m_(m), n_vars_(p.n_vars())
{
    if (m == 0 || m > (std::uint64_t{1} << 32))
        throw DomainError("ModularEvaluator: modulus must lie in [1, 2^32]");
    max_exp_.assign(n_vars_, 0);
    const BigInt bm = big_u(m);
    for (const auto & [e, c] : p.terms()) {
        BigInt r = c % bm;
        if (sgn(r) < 0)
            r += bm;
        terms_.push_back({to_u64(r), e});
        for (unsigned i = 0; i < n_vars_; ++i)
            max_exp_[i] = std::max(max_exp_[i], e[i]);
    }
    powers_.resize(n_vars_);
    for (unsigned v = 0; v < n_vars_; ++v) {
        const unsigned stride = max_exp_[v] + 1;
        auto & table = powers_[v];
        table.resize(m * stride);
        for (std::uint64_t x = 0; x < m; ++x) {
            std::uint64_t acc = 1 % m;
            for (unsigned k = 0; k < stride; ++k) {
                table[x * stride + k] = acc;
                acc = acc * x % m;
            }
        }
    }
}

std::uint64_t ModularEvaluator::operator()(std::span<const std::uint64_t> point) const
{
    std::uint64_t sum = 0;
    for (const Term & t : terms_) {
        std::uint64_t v = t.coef;
        for (unsigned i = 0; i < n_vars_ && v != 0; ++i) {
            if (t.exps[i])
                v = v * powers_[i][point[i] * (max_exp_[i] + 1) + t.exps[i]] % m_;
        }
        sum += v;
        if (sum >= m_)
            sum -= m_;
    }
    return sum;
}

namespace {

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string> & vars)
        : text_(text), vars_(vars)
    {
    }

    Polynomial parse()
    {
        Polynomial p = expr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected character");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string & what) const
    {
        throw DomainError("polynomial parse error at offset " + std::to_string(pos_) + ": " + what);
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool eat(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    unsigned n() const { return static_cast<unsigned>(vars_.size()); }

    Polynomial expr()
    {
        Polynomial acc = term();
        for (;;) {
            if (eat('+'))
                acc += term();
            else if (eat('-'))
                acc -= term();
            else
                return acc;
        }
    }

    Polynomial term()
    {
        Polynomial acc = unary();
        while (eat('*'))
            acc = acc * unary();
        return acc;
    }

    Polynomial unary()
    {
        if (eat('-'))
            return -unary();
        if (eat('+'))
            return unary();
        return power();
    }

    Polynomial power()
    {
        Polynomial base = atom();
        if (eat('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (start == pos_)
                fail("exponent must be a non-negative integer literal");
            const unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
            if (e > 4096)
                fail("exponent too large");
            return base.pow(static_cast<unsigned>(e));
        }
        return base;
    }

    Polynomial atom()
    {
        skip_ws();
        if (pos_ >= text_.size())
            fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial p = expr();
            if (!eat(')'))
                fail("expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            return Polynomial::constant(n(), parse_bigint(std::string(text_.substr(start, pos_ - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            const std::string name(text_.substr(start, pos_ - start));
            const auto it = std::find(vars_.begin(), vars_.end(), name);
            return Polynomial::variable(n(), static_cast<unsigned>(it - vars_.begin()));
        }
        fail(std::string("unexpected '") + c + "'");
    }

    std::string_view text_;
    const std::vector<std::string> & vars_;
    std::size_t pos_ = 0;
};

} // namespace

ParsedPolynomial parse_polynomial(std::string_view text)
{
    std::set<std::string> names;
    for (std::size_t i = 0; i < text.size();) {
        const char c = text[i];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            names.emplace(text.substr(i, j - i));
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                ++j;
            if (j < text.size() && (std::isalpha(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                throw DomainError("polynomial parse error: implicit multiplication is not supported near offset " +
                                  std::to_string(j));
            i = j;
        } else {
            ++i;
        }
    }
    if (names.empty())
        throw DomainError("polynomial has no variables");
    ParsedPolynomial out{Polynomial(static_cast<unsigned>(names.size())), {names.begin(), names.end()}};
    out.poly = Parser(text, out.variables).parse();
    return out;
}

UniPoly::UniPoly(std::vector<BigRational> coeffs)
    : coeffs_(std::move(coeffs))
{
    trim();
}

UniPoly UniPoly::from_integers(std::span<const BigInt> coeffs)
{
    std::vector<BigRational> q;
    q.reserve(coeffs.size());
    for (const BigInt & c : coeffs)
        q.emplace_back(c);
    return UniPoly(std::move(q));
}

void UniPoly::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0)
        coeffs_.pop_back();
}

UniPoly UniPoly::derivative() const
{
    std::vector<BigRational> d;
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        d.push_back(coeffs_[i] * static_cast<unsigned long>(i));
    return UniPoly(std::move(d));
}

UniPoly operator*(const UniPoly & a, const UniPoly & b)
{
    if (a.coeffs_.empty() || b.coeffs_.empty())
        return {};
    std::vector<BigRational> r(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
            r[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return UniPoly(std::move(r));
}

UniPoly UniPoly::gcd(UniPoly a, UniPoly b)
{
    while (!b.coeffs_.empty()) {
        // a <- a mod b
        std::vector<BigRational> & r = a.coeffs_;
        const auto & d = b.coeffs_;
        const BigRational lead = d.back();
        while (r.size() >= d.size() && !r.empty()) {
            const BigRational q = r.back() / lead;
            const std::size_t shift = r.size() - d.size();
            for (std::size_t i = 0; i < d.size(); ++i)
                r[shift + i] -= q * d[i];
            r.pop_back();
            a.trim();
        }
        std::swap(a, b);
    }
    if (!a.coeffs_.empty()) {
        const BigRational lead = a.coeffs_.back();
        for (auto & c : a.coeffs_) {
            c /= lead;
            c.canonicalize();
        }
    }
    return a;
}

bool UniPoly::is_squarefree() const
{
    if (coeffs_.empty())
        return false;
    return gcd(*this, derivative()).degree() == 0;
}

UniPoly restrict_to_line(const Polynomial & p, std::span<const BigInt> point, std::span<const BigInt> direction)
{
    const unsigned n = p.n_vars();
    if (point.size() != n || direction.size() != n)
        throw DomainError("restrict_to_line: dimension mismatch");
    // powers[v][k] = (point_v + t * direction_v)^k as integer coefficient vectors
    std::vector<std::vector<std::vector<BigInt>>> powers(n);
    for (unsigned v = 0; v < n; ++v) {
        const unsigned dmax = p.degree_in(v);
        powers[v].push_back({BigInt(1)});
        for (unsigned k = 1; k <= dmax; ++k) {
            const auto & prev = powers[v].back();
            std::vector<BigInt> next(prev.size() + 1, 0);
            for (std::size_t i = 0; i < prev.size(); ++i) {
                next[i] += prev[i] * point[v];
                next[i + 1] += prev[i] * direction[v];
            }
            powers[v].push_back(std::move(next));
        }
    }
    std::vector<BigInt> acc(p.total_degree() + 1, 0);
    for (const auto & [e, c] : p.terms()) {
        std::vector<BigInt> term{c};
        for (unsigned v = 0; v < n; ++v) {
            if (!e[v])
                continue;
            const auto & f = powers[v][e[v]];
            std::vector<BigInt> next(term.size() + f.size() - 1, 0);
            for (std::size_t i = 0; i < term.size(); ++i)
                for (std::size_t j = 0; j < f.size(); ++j)
                    next[i + j] += term[i] * f[j];
            term = std::move(next);
        }
        for (std::size_t i = 0; i < term.size(); ++i)
            acc[i] += term[i];
    }
    return UniPoly::from_integers(acc);
}

} // namespace noncyclic::poly
