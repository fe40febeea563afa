#include "noncyclic/density.hpp"

#include <algorithm>
#include <exception>

#include "noncyclic/errors.hpp"
#include "noncyclic/sieve.hpp"

namespace noncyclic::density {

namespace {

// base^e, or nullopt past `cap`.
std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned e, std::uint64_t cap)
{
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (base != 0 && r > cap / base)
            return std::nullopt;
        r *= base;
    }
    return r;
}

// Calls visit(point) for every point of (Z/m)^n whose first coordinate is x0.
template <class Visit>
void for_each_with_head(unsigned n, std::uint64_t m, std::uint64_t x0, Visit && visit)
{
    std::vector<std::uint64_t> pt(n, 0);
    pt[0] = x0;
    for (;;) {
        visit(std::span<const std::uint64_t>(pt));
        unsigned i = n;
        while (i > 1) {
            --i;
            if (++pt[i] < m)
                break;
            pt[i] = 0;
            if (i == 1)
                return;
        }
        if (n == 1)
            return;
    }
}

template <class Body>
std::uint64_t sum_over_heads(std::uint64_t m, Exec exec, Body && body)
{
    std::uint64_t total = 0;
    const auto count = static_cast<std::int64_t>(m);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : total)
        for (std::int64_t x0 = 0; x0 < count; ++x0)
            total += body(static_cast<std::uint64_t>(x0));
    } else {
        for (std::int64_t x0 = 0; x0 < count; ++x0)
            total += body(static_cast<std::uint64_t>(x0));
    }
    return total;
}

void require_points(std::uint64_t m, unsigned n, const RhoBudget & budget, const char * what)
{
    if (n == 0)
        throw DomainError(std::string(what) + ": polynomial has no variables");
    if (!checked_pow(m, n, budget.max_points))
        throw BudgetError(std::string(what) + ": " + std::to_string(m) + "^" + std::to_string(n) +
                          " points exceed the budget of " + std::to_string(budget.max_points));
}

} // namespace

PolySpec PolySpec::rank2(unsigned g)
{
    return {families::rank2_polynomial(g), {"x", "y", "z"}};
}

PolySpec PolySpec::parse(std::string_view text)
{
    poly::ParsedPolynomial parsed = poly::parse_polynomial(text);
    return {std::move(parsed.poly), std::move(parsed.variables)};
}

std::uint64_t rho(const PolySpec & P, std::uint64_t m, Exec exec, const RhoBudget & budget)
{
    if (m == 0)
        throw DomainError("rho: modulus must be positive");
    const unsigned n = P.n_vars();
    require_points(m, n, budget, "rho");
    const poly::ModularEvaluator eval(P.poly, m);
    return sum_over_heads(m, exec, [&](std::uint64_t x0) {
        std::uint64_t c = 0;
        for_each_with_head(n, m, x0, [&](std::span<const std::uint64_t> pt) { c += eval(pt) == 0; });
        return c;
    });
}

std::uint64_t rho_hensel(const PolySpec & P, std::uint64_t p, Exec exec, const RhoBudget & budget)
{
    if (!arith::is_prime_u64(p))
        throw DomainError("rho_hensel: " + std::to_string(p) + " is not prime");
    if (p > 65535)
        throw BudgetError("rho_hensel: p^2 must stay below 2^32");
    const unsigned n = P.n_vars();
    require_points(p, n, budget, "rho_hensel");
    const std::uint64_t p2 = p * p;
    const poly::ModularEvaluator value(P.poly, p2);
    std::vector<poly::ModularEvaluator> grad;
    for (unsigned i = 0; i < n; ++i)
        grad.emplace_back(P.poly.derivative(i), p);
    const std::uint64_t smooth_lifts = *checked_pow(p, n - 1, ~std::uint64_t{0});
    const std::uint64_t singular_lifts = smooth_lifts * p;
    return sum_over_heads(p, exec, [&](std::uint64_t x0) {
        std::uint64_t c = 0;
        for_each_with_head(n, p, x0, [&](std::span<const std::uint64_t> pt) {
            const std::uint64_t v = value(pt);
            if (v % p != 0)
                return;
            const bool singular =
                std::all_of(grad.begin(), grad.end(), [&](const poly::ModularEvaluator & d) { return d(pt) == 0; });
            if (!singular)
                c += smooth_lifts;
            else if (v == 0)
                c += singular_lifts;
        });
        return c;
    });
}

DensityReport euler_constant(const PolySpec & P, std::uint64_t p_max, RhoMode mode, Exec exec,
                             const RhoBudget & budget)
{
    DensityReport report;
    report.p_max = p_max;
    report.n_vars = P.n_vars();
    report.mode = mode;
    report.tail_note = "primes above p_max are not included; for p of good reduction the local factor is "
                       "1 - O(p^-2), so the omitted tail is a convergent product close to 1";
    if (p_max > (std::uint64_t{1} << 16))
        throw BudgetError("euler_constant: p_max above 65536");
    for (std::uint32_t p : arith::primes_up_to(p_max)) {
        const std::uint64_t r = mode == RhoMode::hensel ? rho_hensel(P, p, exec, budget) : rho(P, std::uint64_t{p} * p, exec, budget);
        const BigRational denom(pow(big_u(p), 2 * P.n_vars()));
        BigRational local = 1 - BigRational(big_u(r)) / denom;
        local.canonicalize();
        if (local < 0 || local > 1)
            throw ContractViolation("euler_constant: local factor outside [0, 1]");
        report.partial_product *= local;
        report.per_prime.push_back({p, r, local});
    }
    report.partial_product.canonicalize();
    return report;
}

std::string decimal(const BigRational & q, unsigned digits)
{
    if (q < 0)
        throw DomainError("decimal: negative value");
    const BigInt scale = pow(BigInt(10), digits);
    const BigInt scaled = BigInt(q.get_num() * scale) / q.get_den();
    const BigInt whole = scaled / scale;
    std::string frac = BigInt(scaled % scale).get_str();
    if (digits == 0)
        return whole.get_str();
    frac.insert(0, digits - frac.size(), '0');
    return whole.get_str() + "." + frac;
}

std::uint64_t n_p_empirical(const PolySpec & P, std::span<const IntRange> box, Exec exec,
                            const BoxBudget & box_budget, const arith::FactorBudget & factor)
{
    if (box.size() != P.n_vars())
        throw DomainError("n_p_empirical: box has " + std::to_string(box.size()) + " sides, polynomial has " +
                          std::to_string(P.n_vars()) + " variables");
    BigInt volume = 1;
    for (const IntRange & r : box)
        volume *= r.size();
    if (volume == 0)
        return 0;
    if (volume > big_u(box_budget.max_volume))
        throw BudgetError("n_p_empirical: box volume " + volume.get_str() + " exceeds the budget of " +
                          std::to_string(box_budget.max_volume));
    const std::uint64_t total = to_u64(volume);
    const unsigned n = P.n_vars();

    std::uint64_t count = 0;
    std::exception_ptr failure;
    auto body = [&](std::uint64_t index) -> std::uint64_t {
        // mixed-radix decode, last coordinate fastest
        std::vector<BigInt> pt(n);
        for (unsigned i = n; i-- > 0;) {
            const std::uint64_t side = to_u64(box[i].size());
            pt[i] = box[i].lo + big_u(index % side);
            index /= side;
        }
        BigInt v = P.poly.evaluate(pt);
        if (sgn(v) == 0)
            return 0;
        return arith::is_squarefree(abs(v), factor) ? 1 : 0;
    };
    const auto n_points = static_cast<std::int64_t>(total);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 256) reduction(+ : count)
        for (std::int64_t i = 0; i < n_points; ++i) {
            try {
                count += body(static_cast<std::uint64_t>(i));
            } catch (...) {
#pragma omp critical
                if (!failure)
                    failure = std::current_exception();
            }
        }
    } else {
        for (std::int64_t i = 0; i < n_points; ++i)
            count += body(static_cast<std::uint64_t>(i));
    }
    if (failure)
        std::rethrow_exception(failure);
    return count;
}

std::vector<CensusRow> census_series(std::uint64_t X, std::span<const AbelianStructure> groups, unsigned checkpoints,
                                     Exec exec, const CensusBudget & budget)
{
    if (X > budget.max_X)
        throw BudgetError("census: X = " + std::to_string(X) + " exceeds the sweep budget of " +
                          std::to_string(budget.max_X));
    if (checkpoints == 0)
        throw DomainError("census: need at least one checkpoint");

    std::vector<std::uint64_t> marks;
    for (unsigned k = checkpoints; k-- > 0;) {
        const std::uint64_t x = k >= 64 ? 0 : X >> k;
        if (x > 0 && (marks.empty() || marks.back() != x))
            marks.push_back(x);
    }

    const std::vector<std::uint8_t> sqf = arith::squarefree_sieve(X, exec);
    std::vector<std::uint64_t> ds;
    std::vector<classgroup::Discriminant> discs;
    for (std::uint64_t d = 1; d <= X; ++d) {
        if (sqf[d]) {
            ds.push_back(d);
            discs.push_back(classgroup::fundamental_discriminant(big_u(d)));
        }
    }
    const std::vector<classgroup::ClassGroupSummary> groups_found = classgroup::sweep(discs, exec, budget.engine);

    std::vector<CensusRow> rows;
    for (const AbelianStructure & H : groups) {
        std::size_t i = 0;
        std::uint64_t count = 0;
        std::optional<std::uint64_t> smallest;
        for (std::uint64_t mark : marks) {
            for (; i < ds.size() && ds[i] <= mark; ++i) {
                if (classgroup::embeds(H, groups_found[i].structure)) {
                    ++count;
                    if (!smallest)
                        smallest = ds[i];
                }
            }
            rows.push_back({mark, H, count, static_cast<std::uint64_t>(i), smallest});
        }
    }
    return rows;
}

CensusRow census_nh(std::uint64_t X, const AbelianStructure & H, Exec exec, const CensusBudget & budget)
{
    if (X == 0)
        return {0, H, 0, 0, std::nullopt};
    const AbelianStructure groups[] = {H};
    return census_series(X, groups, 1, exec, budget).back();
}

H2Moments moments_h2(const std::map<BigInt, std::uint64_t> & R)
{
    H2Moments m;
    for (const auto & [d, r] : R) {
        const BigInt br = big_u(r);
        m.S1 += br;
        if (r > 0) {
            m.S2 += br * (br - 1);
            ++m.nonzero;
        }
    }
    if (m.S1 > 0) {
        m.lower_bound = BigRational(m.S1 * m.S1, m.S1 + m.S2);
        m.lower_bound.canonicalize();
    }
    return m;
}

H3Moments moments_h3(const std::map<BigInt, std::uint64_t> & r, const arith::FactorBudget & budget)
{
    H3Moments m;
    for (const auto & [D, mult] : r) {
        if (mult == 0 || sgn(D) <= 0 || !arith::is_squarefree(D, budget))
            continue;
        const BigInt bm = big_u(mult);
        m.S1 += bm;
        m.S2 += bm * bm;
        ++m.distinct;
    }
    if (m.S2 > 0) {
        m.lower_bound = BigRational(m.S1 * m.S1, m.S2);
        m.lower_bound.canonicalize();
    }
    return m;
}

} // namespace noncyclic::density
