#include "noncyclic/classgroup.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "noncyclic/errors.hpp"
#include "noncyclic/sieve.hpp"

namespace noncyclic::classgroup {

namespace {

__extension__ typedef __int128 i128;

i128 floor_div(i128 n, i128 d)
{
    i128 q = n / d;
    if ((n % d != 0) && ((n < 0) != (d < 0)))
        --q;
    return q;
}

i128 mod_nonneg(i128 x, i128 m)
{
    i128 r = x % m;
    return r < 0 ? r + m : r;
}

struct Xgcd {
    i128 u, v, d;
};

// u*a + v*b = d = gcd(a, b) >= 0
Xgcd xgcd(i128 a, i128 b)
{
    i128 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        const i128 q = old_r / r;
        i128 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0)
        return {-old_s, -old_t, -old_r};
    return {old_s, old_t, old_r};
}

std::int64_t narrow(i128 v)
{
    if (v > INT64_MAX || v < INT64_MIN)
        throw BudgetError("form coefficient exceeds 64 bits");
    return static_cast<std::int64_t>(v);
}

QuadForm reduce_wide(i128 a, i128 b, i128 c)
{
    if (a <= 0 || c <= 0 || b * b - 4 * a * c >= 0)
        throw DomainError("reduce: form is not positive definite");
    for (;;) {
        if (b <= -a || b > a) {
            const i128 r = floor_div(a - b, 2 * a);
            c = a * r * r + b * r + c;
            b += 2 * a * r;
        }
        if (a > c) {
            std::swap(a, c);
            b = -b;
            continue;
        }
        if (a == c && b < 0)
            b = -b;
        break;
    }
    return {narrow(a), narrow(b), narrow(c)};
}

std::uint64_t ipow(std::uint64_t p, unsigned e)
{
    std::uint64_t r = 1;
    while (e--)
        r *= p;
    return r;
}

using FormSet = std::unordered_set<QuadForm, QuadFormHash>;

// Extends subgroup `group` (with membership set `members`) by y.
void extend_subgroup(std::vector<QuadForm> & group, FormSet & members, const QuadForm & y, std::size_t limit)
{
    const std::vector<QuadForm> base = group;
    const FormSet base_members = members;
    QuadForm z = y;
    while (!base_members.contains(z)) {
        for (const QuadForm & k : base) {
            const QuadForm e = compose(z, k);
            group.push_back(e);
            members.insert(e);
        }
        if (group.size() > limit)
            throw BudgetError("subgroup closure exceeds " + std::to_string(limit) + " elements");
        z = compose(z, y);
    }
}

} // namespace

std::int64_t Discriminant::value() const
{
    if (sgn(delta) >= 0 || abs(delta) > big_u(kMaxAbsDelta))
        throw BudgetError("discriminant " + delta.get_str() + " outside the engine range |delta| <= 2^60");
    return to_i64(delta);
}

Discriminant fundamental_discriminant(const BigInt & d)
{
    if (sgn(d) <= 0)
        throw DomainError("radicand must be positive, got " + d.get_str());
    if (!arith::is_squarefree(d))
        throw DomainError("radicand " + d.get_str() + " is not square-free");
    BigInt r = d % 4;
    return {d, r == 3 ? BigInt(-d) : BigInt(-4 * d)};
}

Discriminant discriminant_from_delta(const BigInt & delta)
{
    if (sgn(delta) >= 0)
        throw DomainError("discriminant must be negative, got " + delta.get_str());
    const BigInt n = -delta;
    const BigInt r = n % 4;
    if (r == 3) {
        if (!arith::is_squarefree(n))
            throw DomainError(delta.get_str() + " is not fundamental (radicand not square-free)");
        return {n, delta};
    }
    if (r == 0) {
        const BigInt m = n / 4;
        const BigInt mr = m % 4;
        if ((mr == 1 || mr == 2) && arith::is_squarefree(m))
            return {m, delta};
    }
    throw DomainError(delta.get_str() + " is not a fundamental discriminant");
}

std::int64_t QuadForm::discriminant() const
{
    return narrow(static_cast<i128>(b) * b - static_cast<i128>(4) * a * c);
}

bool QuadForm::is_reduced() const
{
    if (a <= 0)
        return false;
    const std::int64_t ab = b < 0 ? -b : b;
    if (ab > a || a > c)
        return false;
    if ((ab == a || a == c) && b < 0)
        return false;
    return true;
}

bool QuadForm::is_primitive() const
{
    return std::gcd(std::gcd(a, b), c) == 1;
}

std::string QuadForm::to_string() const
{
    std::ostringstream os;
    os << '(' << a << ',' << b << ',' << c << ')';
    return os.str();
}

QuadForm principal_form(std::int64_t delta)
{
    if (delta >= 0 || (delta % 4 != 0 && delta % 4 != -3))
        throw DomainError("not a negative discriminant: " + std::to_string(delta));
    if (delta % 4 == 0)
        return {1, 0, -delta / 4};
    return {1, 1, (1 - delta) / 4};
}

QuadForm reduce(const QuadForm & f)
{
    return reduce_wide(f.a, f.b, f.c);
}

QuadForm reduce(const BigInt & a0, const BigInt & b0, const BigInt & c0)
{
    BigInt a = a0, b = b0, c = c0;
    const BigInt disc = b * b - 4 * a * c;
    if (sgn(a) <= 0 || sgn(c) <= 0 || sgn(disc) >= 0)
        throw DomainError("reduce: form is not positive definite");
    if (abs(disc) > big_u(kMaxAbsDelta))
        throw BudgetError("reduce: |discriminant| " + BigInt(abs(disc)).get_str() + " exceeds 2^60");
    BigInt r, two_a;
    for (;;) {
        if (b <= -a || b > a) {
            two_a = 2 * a;
            r = a - b;
            mpz_fdiv_q(r.get_mpz_t(), r.get_mpz_t(), two_a.get_mpz_t());
            c = a * r * r + b * r + c;
            b += two_a * r;
        }
        if (a > c) {
            std::swap(a, c);
            b = -b;
            continue;
        }
        if (a == c && sgn(b) < 0)
            b = -b;
        break;
    }
    return {to_i64(a), to_i64(b), to_i64(c)};
}

QuadForm compose(const QuadForm & f, const QuadForm & g)
{
    const std::int64_t delta = f.discriminant();
    if (g.discriminant() != delta)
        throw DomainError("compose: discriminant mismatch " + f.to_string() + " vs " + g.to_string());
    QuadForm x = f.is_reduced() ? f : reduce(f);
    QuadForm y = g.is_reduced() ? g : reduce(g);
    if (x.a > y.a)
        std::swap(x, y);
    const i128 a1 = x.a, b1 = x.b, a2 = y.a, b2 = y.b, c2 = y.c;
    const i128 s = (b1 + b2) / 2;
    const i128 n = b2 - s;
    i128 y1, d;
    if (a2 % a1 == 0) {
        y1 = 0;
        d = a1;
    } else {
        const Xgcd e = xgcd(a2, a1);
        y1 = e.u;
        d = e.d;
    }
    i128 x2, y2, d1;
    if (s % d == 0) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        const Xgcd e = xgcd(s, d);
        x2 = e.u;
        y2 = -e.v;
        d1 = e.d;
    }
    const i128 v1 = a1 / d1;
    const i128 v2 = a2 / d1;
    const i128 r = mod_nonneg(mod_nonneg(y1 * y2, v1) * mod_nonneg(n, v1) - mod_nonneg(x2, v1) * mod_nonneg(c2, v1), v1);
    const i128 a3 = v1 * v2;
    i128 b3 = b2 + 2 * v2 * r;
    b3 = mod_nonneg(b3 + a3, 2 * a3) - a3; // into [-a3, a3)
    const i128 num = b3 * b3 - delta;
    if (num % (4 * a3) != 0)
        throw ContractViolation("compose: non-integral c for " + f.to_string() + " * " + g.to_string());
    return reduce_wide(a3, b3, num / (4 * a3));
}

QuadForm inverse(const QuadForm & f)
{
    return reduce_wide(f.a, -static_cast<i128>(f.b), f.c);
}

QuadForm power(const QuadForm & f, std::uint64_t e)
{
    QuadForm result = principal_form(f.discriminant());
    QuadForm base = f.is_reduced() ? f : reduce(f);
    while (e) {
        if (e & 1)
            result = compose(result, base);
        e >>= 1;
        if (e)
            base = compose(base, base);
    }
    return result;
}

std::vector<QuadForm> enumerate_reduced_forms(const Discriminant & D, const EngineBudget & budget)
{
    const std::int64_t delta = D.value();
    const std::uint64_t n = D.abs_value();
    if (n > budget.max_abs_delta)
        throw BudgetError("enumeration budget exceeded: |delta| = " + std::to_string(n) + " > " +
                          std::to_string(budget.max_abs_delta));
    const auto amax = static_cast<std::uint32_t>(arith::isqrt(n / 3));
    const arith::FactorSieve sieve(std::max<std::uint32_t>(amax, 1));

    std::vector<QuadForm> forms;
    std::vector<arith::PrimePower> fac;
    std::vector<std::int64_t> bs;
    for (std::uint32_t a32 = 1; a32 <= amax; ++a32) {
        const std::int64_t a = a32;
        fac = sieve.factor(a32);
        if (!fac.empty() && fac.front().prime == 2)
            fac.front().exponent += 2;
        else
            fac.insert(fac.begin(), arith::PrimePower{2, 2});
        const std::uint64_t m = 4 * static_cast<std::uint64_t>(a);
        const std::int64_t dm = delta % static_cast<std::int64_t>(m);
        const auto target = static_cast<std::uint64_t>(dm < 0 ? dm + static_cast<std::int64_t>(m) : dm);
        const std::vector<std::uint64_t> roots = arith::detail::sqrt_mod_trusted(target, m, fac);
        bs.clear();
        for (std::uint64_t r : roots) {
            std::int64_t b = static_cast<std::int64_t>(r % (2 * static_cast<std::uint64_t>(a)));
            if (b > a)
                b -= 2 * a;
            bs.push_back(b);
        }
        std::sort(bs.begin(), bs.end());
        bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
        for (std::int64_t b : bs) {
            const i128 num = static_cast<i128>(b) * b - delta;
            const std::int64_t c = narrow(num / (4 * a));
            if (c < a)
                continue;
            if (b < 0 && (-b == a || a == c))
                continue;
            if (std::gcd(std::gcd(a, b), c) != 1)
                continue;
            forms.push_back({a, b, c});
        }
    }
    return forms;
}

std::uint64_t AbelianStructure::order() const
{
    std::uint64_t r = 1;
    for (std::uint64_t d : invariant_factors)
        r *= d;
    return r;
}

unsigned AbelianStructure::count_divisible_by(std::uint64_t m) const
{
    return static_cast<unsigned>(
        std::count_if(invariant_factors.begin(), invariant_factors.end(), [m](std::uint64_t d) { return d % m == 0; }));
}

std::uint64_t AbelianStructure::torsion_count(std::uint64_t m) const
{
    std::uint64_t r = 1;
    for (std::uint64_t d : invariant_factors)
        r *= std::gcd(d, m);
    return r;
}

std::string AbelianStructure::to_string() const
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < invariant_factors.size(); ++i)
        os << (i ? "," : "") << invariant_factors[i];
    os << ']';
    return os.str();
}

AbelianStructure AbelianStructure::from_cyclic_orders(std::span<const std::uint64_t> orders)
{
    std::map<std::uint64_t, std::vector<unsigned>> by_prime;
    for (std::uint64_t o : orders) {
        if (o == 0)
            throw DomainError("cyclic order must be positive");
        for (const auto & pp : arith::factorize_u64(o))
            by_prime[pp.prime].push_back(pp.exponent);
    }
    std::size_t k = 0;
    for (auto & [p, exps] : by_prime) {
        std::sort(exps.rbegin(), exps.rend());
        k = std::max(k, exps.size());
    }
    std::vector<std::uint64_t> factors(k, 1);
    for (const auto & [p, exps] : by_prime) {
        for (std::size_t i = 0; i < exps.size(); ++i)
            factors[i] *= ipow(p, exps[i]);
    }
    std::reverse(factors.begin(), factors.end());
    return AbelianStructure{factors};
}

AbelianStructure AbelianStructure::from_prime_torsion_counts(
    std::span<const std::pair<std::uint64_t, std::vector<std::uint64_t>>> counts)
{
    std::vector<std::uint64_t> cyclic;
    for (const auto & [p, n] : counts) {
        // ranks[j] = number of cyclic p-factors of order >= p^j, j >= 1
        std::vector<unsigned> ranks;
        for (std::size_t j = 1; j < n.size(); ++j) {
            if (n[j - 1] == 0 || n[j] % n[j - 1] != 0)
                throw ContractViolation("torsion counts are not a tower of p-powers");
            std::uint64_t q = n[j] / n[j - 1];
            unsigned r = 0;
            while (q % p == 0) {
                q /= p;
                ++r;
            }
            if (q != 1)
                throw ContractViolation("torsion count ratio is not a power of " + std::to_string(p));
            ranks.push_back(r);
        }
        ranks.push_back(0);
        for (std::size_t j = 0; j + 1 < ranks.size(); ++j) {
            if (ranks[j] < ranks[j + 1])
                throw ContractViolation("torsion ranks must be non-increasing");
            const unsigned exact = ranks[j] - ranks[j + 1];
            for (unsigned i = 0; i < exact; ++i)
                cyclic.push_back(ipow(p, static_cast<unsigned>(j + 1)));
        }
    }
    return from_cyclic_orders(cyclic);
}

std::uint64_t element_order(const QuadForm & f, std::uint64_t class_number)
{
    if (!is_principal(power(f, class_number)))
        throw ContractViolation("element_order: " + f.to_string() + "^" + std::to_string(class_number) +
                                " is not principal");
    std::uint64_t e = class_number;
    for (const auto & pp : arith::factorize_u64(class_number)) {
        while (e % pp.prime == 0 && is_principal(power(f, e / pp.prime)))
            e /= pp.prime;
    }
    return e;
}

std::uint64_t element_order(const QuadForm & f, const EngineBudget & budget)
{
    const Discriminant D = discriminant_from_delta(big(f.discriminant()));
    const auto h = enumerate_reduced_forms(D, budget).size();
    return element_order(f, h);
}

std::vector<QuadForm> generated_subgroup(std::span<const QuadForm> generators, std::size_t limit)
{
    if (generators.empty())
        throw DomainError("generated_subgroup: need at least one generator");
    const QuadForm id = principal_form(generators.front().discriminant());
    std::vector<QuadForm> group{id};
    FormSet members{id};
    for (const QuadForm & g : generators) {
        const QuadForm y = reduce(g);
        if (!members.contains(y))
            extend_subgroup(group, members, y, limit);
    }
    return group;
}

AbelianStructure structure_from_forms(std::span<const QuadForm> forms)
{
    const std::uint64_t h = forms.size();
    if (h == 0)
        throw DomainError("structure_from_forms: empty form list");
    std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>> counts;
    std::vector<std::uint64_t> cyclic;
    for (const auto & pp : arith::factorize_u64(h)) {
        const std::uint64_t p = pp.prime;
        if (pp.exponent == 1) {
            cyclic.push_back(p);
            continue;
        }
        const std::uint64_t sylow_order = ipow(p, pp.exponent);
        const std::uint64_t cofactor = h / sylow_order;
        const QuadForm id = principal_form(forms.front().discriminant());
        std::vector<QuadForm> sylow{id};
        FormSet members{id};
        for (const QuadForm & x : forms) {
            if (sylow.size() == sylow_order)
                break;
            const QuadForm y = power(x, cofactor);
            if (!members.contains(y))
                extend_subgroup(sylow, members, y, sylow_order);
        }
        if (sylow.size() != sylow_order)
            throw ContractViolation("Sylow " + std::to_string(p) + "-subgroup has " + std::to_string(sylow.size()) +
                                    " elements, expected " + std::to_string(sylow_order));
        // N(p^j) inside the Sylow subgroup equals N(p^j) in the whole group
        std::vector<std::uint64_t> n(pp.exponent + 1, 0);
        for (const QuadForm & y : sylow) {
            unsigned j = 0;
            for (QuadForm z = y; !is_principal(z); z = power(z, p))
                ++j;
            for (unsigned k = j; k <= pp.exponent; ++k)
                ++n[k];
        }
        counts.emplace_back(p, std::move(n));
    }
    AbelianStructure sylow_part = AbelianStructure::from_prime_torsion_counts(counts);
    cyclic.insert(cyclic.end(), sylow_part.invariant_factors.begin(), sylow_part.invariant_factors.end());
    return AbelianStructure::from_cyclic_orders(cyclic);
}

AbelianStructure structure_from_forms_reference(std::span<const QuadForm> forms)
{
    if (forms.empty())
        throw DomainError("structure_from_forms_reference: empty form list");
    std::vector<std::uint64_t> orders;
    orders.reserve(forms.size());
    for (const QuadForm & x : forms) {
        std::uint64_t o = 1;
        for (QuadForm z = x; !is_principal(z); z = compose(z, x)) {
            if (++o > forms.size())
                throw ContractViolation("element order exceeds class number for " + x.to_string());
        }
        orders.push_back(o);
    }
    std::uint64_t exponent = 1;
    for (std::uint64_t o : orders)
        exponent = std::lcm(exponent, o);
    std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>> counts;
    for (const auto & pp : arith::factorize_u64(exponent)) {
        std::vector<std::uint64_t> n;
        for (unsigned j = 0; j <= pp.exponent; ++j) {
            const std::uint64_t m = ipow(pp.prime, j);
            n.push_back(static_cast<std::uint64_t>(
                std::count_if(orders.begin(), orders.end(), [m](std::uint64_t o) { return m % o == 0; })));
        }
        counts.emplace_back(pp.prime, std::move(n));
    }
    return AbelianStructure::from_prime_torsion_counts(counts);
}

AbelianStructure group_structure(const Discriminant & D, const EngineBudget & budget)
{
    const std::vector<QuadForm> forms = enumerate_reduced_forms(D, budget);
    return structure_from_forms(forms);
}

bool embeds(const AbelianStructure & H, const AbelianStructure & G)
{
    if (H.order() > G.order())
        return false;
    std::vector<std::uint64_t> primes;
    for (std::uint64_t d : H.invariant_factors) {
        for (const auto & pp : arith::factorize_u64(d))
            primes.push_back(pp.prime);
    }
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    for (std::uint64_t p : primes) {
        for (std::uint64_t q = p;; q *= p) {
            const unsigned need = H.count_divisible_by(q);
            if (need == 0)
                break;
            if (G.count_divisible_by(q) < need)
                return false;
        }
    }
    return true;
}

unsigned two_rank_genus(const Discriminant & D, const arith::FactorBudget & budget)
{
    return arith::omega(D.delta, budget) - 1;
}

std::vector<ClassGroupSummary> sweep(std::span<const Discriminant> discriminants, Exec exec,
                                     const EngineBudget & budget)
{
    const auto n = static_cast<std::int64_t>(discriminants.size());
    std::vector<ClassGroupSummary> out(discriminants.size());
    std::vector<std::exception_ptr> errors(discriminants.size());
    auto one = [&](std::int64_t i) {
        try {
            const Discriminant & D = discriminants[static_cast<std::size_t>(i)];
            const std::vector<QuadForm> forms = enumerate_reduced_forms(D, budget);
            out[static_cast<std::size_t>(i)] = {D.value(), forms.size(), structure_from_forms(forms)};
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < n; ++i)
            one(i);
    } else {
        for (std::int64_t i = 0; i < n; ++i)
            one(i);
    }
    for (const auto & e : errors) {
        if (e)
            std::rethrow_exception(e);
    }
    return out;
}

} // namespace noncyclic::classgroup
