#include "noncyclic/families.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>

#include "noncyclic/errors.hpp"

namespace noncyclic::families {

namespace {

void require_g(unsigned g)
{
    if (g < 3 || g % 2 == 0)
        throw DomainError("g must be an odd integer >= 3, got " + std::to_string(g));
}

void require_positive(const BigInt & v, const char * name)
{
    if (sgn(v) <= 0)
        throw DomainError(std::string(name) + " must be positive, got " + v.get_str());
}

BigInt floor_to_big(long double v)
{
    v = std::floor(v);
    if (std::fabs(v) < 9.0e18L)
        return big(static_cast<std::int64_t>(v));
    char buf[6000];
    std::snprintf(buf, sizeof buf, "%.0Lf", v);
    return parse_bigint(buf);
}

BigInt ceil_to_big(long double v)
{
    return floor_to_big(std::ceil(v));
}

BigInt mod_nonneg(const BigInt & x, const BigInt & m)
{
    BigInt r = x % m;
    if (sgn(r) < 0)
        r += m;
    return r;
}

// Smallest v >= lo with v = residue (mod modulus).
BigInt first_in_class(const BigInt & lo, const BigInt & residue, const BigInt & modulus)
{
    return lo + mod_nonneg(residue - lo, modulus);
}

// x = r1 (mod m1), x = r2 (mod m2) with arbitrary moduli.
std::optional<arith::Congruence> crt_general(const BigInt & r1, const BigInt & m1, const BigInt & r2, const BigInt & m2)
{
    const BigInt g = gcd(m1, m2);
    const BigInt diff = r2 - r1;
    if (diff % g != 0)
        return std::nullopt;
    const BigInt m1g = m1 / g, m2g = m2 / g;
    BigInt inv;
    if (m2g == 1)
        inv = 0;
    else
        mpz_invert(inv.get_mpz_t(), m1g.get_mpz_t(), m2g.get_mpz_t());
    const BigInt k = mod_nonneg(BigInt(diff / g) * inv, m2g);
    const BigInt l = m1g * m2;
    return arith::Congruence{mod_nonneg(r1 + m1 * k, l), l};
}

} // namespace

BigInt f1_eval(const BigInt & a, const BigInt & b, unsigned g)
{
    if (g < 3)
        throw DomainError("f1_eval: g must be >= 3");
    if (sgn(a) < 0 || sgn(b) < 0)
        throw DomainError("f1_eval: a, b must be non-negative");
    BigInt sum = 0;
    for (unsigned i = 0; i < g; ++i)
        sum += pow(a, g - 1 - i) * pow(b, i);
    return sum;
}

BigInt f_eval(const BigInt & a, const BigInt & b, const BigInt & n, unsigned g)
{
    require_g(g);
    require_positive(a, "a");
    require_positive(b, "b");
    require_positive(n, "n");
    const BigInt ng = pow(n, g);
    const BigInt f1 = f1_eval(a, b, g);
    const BigInt amb = a - b;
    return 2 * (pow(a, g) + pow(b, g)) * ng - amb * amb * ng * ng - f1 * f1;
}

Witness witness(const BigInt & a, const BigInt & b, const BigInt & n, unsigned g)
{
    const BigInt D = f_eval(a, b, n, g);
    const BigInt f1 = f1_eval(a, b, g);
    const BigInt shift = (a - b) * pow(n, g);
    Witness w{f1 + shift, a * n, f1 - shift, b * n};
    if (w.X1 * w.X1 - 4 * pow(w.Y1, g) != -D || w.X2 * w.X2 - 4 * pow(w.Y2, g) != -D)
        throw ContractViolation("witness identity failed for (a,b,n,g) = (" + a.get_str() + "," + b.get_str() + "," +
                                n.get_str() + "," + std::to_string(g) + ")");
    return w;
}

Rank2Instance Rank2Instance::make(const BigInt & a, const BigInt & b, const BigInt & n, unsigned g)
{
    return {g, a, b, n, f_eval(a, b, n, g), witness(a, b, n, g)};
}

std::string_view reason_name(Reason r)
{
    switch (r) {
    case Reason::ok:
        return "ok";
    case Reason::a_equals_b:
        return "a_equals_b";
    case Reason::ab_not_above_one:
        return "ab_not_above_one";
    case Reason::nonpositive:
        return "nonpositive";
    case Reason::size_bound:
        return "size_bound";
    case Reason::not_squarefree:
        return "not_squarefree";
    }
    return "unknown";
}

Admissibility admissible(const Rank2Instance & inst, const arith::FactorBudget & budget)
{
    if (inst.a == inst.b)
        return {false, Reason::a_equals_b};
    if (inst.a * inst.b <= 1)
        return {false, Reason::ab_not_above_one};
    if (sgn(inst.D) <= 0)
        return {false, Reason::nonpositive};
    const unsigned g = inst.g;
    const BigInt ng1 = pow(inst.n, g - 1);
    const BigInt left = inst.b * pow(inst.a, g - 2) * ng1;
    const BigInt right = inst.a * pow(inst.b, g - 2) * ng1;
    if (inst.D < 4 * std::max(left, right))
        return {false, Reason::size_bound};
    if (!arith::is_squarefree(inst.D, budget))
        return {false, Reason::not_squarefree};
    return {true, Reason::ok};
}

std::pair<QuadForm, QuadForm> instance_forms(const Rank2Instance & inst)
{
    if (mod_nonneg(inst.D, 4) != 3)
        throw DomainError("instance_forms: D = " + inst.D.get_str() + " is not 3 mod 4; instance is not admissible");
    auto make = [&](const BigInt & X, const BigInt & Y) {
        if (gcd(X, Y) != 1)
            throw ContractViolation("instance_forms: raw form (" + Y.get_str() + "," + X.get_str() +
                                    ",Y^(g-1)) is imprimitive");
        return classgroup::reduce(Y, X, pow(Y, inst.g - 1));
    };
    return {make(inst.w.X1, inst.w.Y1), make(inst.w.X2, inst.w.Y2)};
}

Rank2Verification verify_rank2(const Rank2Instance & inst, const classgroup::EngineBudget & engine,
                               const arith::FactorBudget & factor)
{
    if (!admissible(inst, factor))
        throw DomainError("verify_rank2: instance (" + inst.a.get_str() + "," + inst.b.get_str() + "," +
                          inst.n.get_str() + ") is not admissible");
    const classgroup::Discriminant D = classgroup::discriminant_from_delta(-inst.D);
    const std::vector<QuadForm> forms = classgroup::enumerate_reduced_forms(D, engine);
    const auto [F1, F2] = instance_forms(inst);

    Rank2Verification v;
    v.class_number = forms.size();
    v.structure = classgroup::structure_from_forms(forms);
    v.order1 = classgroup::element_order(F1, v.class_number);
    v.order2 = classgroup::element_order(F2, v.class_number);
    const std::vector<QuadForm> gens{F1, F2};
    v.subgroup_order = classgroup::generated_subgroup(gens, forms.size()).size();
    if (v.class_number % v.subgroup_order != 0)
        throw ContractViolation("subgroup order does not divide the class number");
    const std::uint64_t gg = inst.g;
    const std::vector<std::uint64_t> target{gg, gg};
    v.structure_embeds = classgroup::embeds(AbelianStructure::from_cyclic_orders(target), v.structure);
    v.verified = v.order1 == gg && v.order2 == gg && v.subgroup_order == gg * gg && v.structure_embeds;
    return v;
}

std::vector<Rank2Row> scan_rank2(unsigned g, const IntRange & a_range, const IntRange & b_range,
                                 const IntRange & n_range, const ScanOptions & options)
{
    require_g(g);
    for (const IntRange * r : {&a_range, &b_range, &n_range}) {
        if (!r->empty() && sgn(r->lo) <= 0)
            throw DomainError("scan_rank2: ranges must contain positive integers only");
    }
    const BigInt total = a_range.size() * b_range.size() * n_range.size();
    if (total > big_u(options.max_tuples))
        throw BudgetError("scan_rank2: box has " + total.get_str() + " tuples, budget is " +
                          std::to_string(options.max_tuples));

    std::vector<Rank2Row> rows;
    rows.reserve(to_u64(total));
    for (BigInt a = a_range.lo; a <= a_range.hi; ++a)
        for (BigInt b = b_range.lo; b <= b_range.hi; ++b)
            for (BigInt n = n_range.lo; n <= n_range.hi; ++n)
                rows.push_back({Rank2Instance::make(a, b, n, g), {}, std::nullopt, {}});

    const auto count = static_cast<std::int64_t>(rows.size());
    std::vector<std::exception_ptr> hard(rows.size());
    auto process = [&](std::int64_t i) {
        Rank2Row & row = rows[static_cast<std::size_t>(i)];
        try {
            row.admissibility = admissible(row.instance, options.factor);
            if (row.admissibility && options.verify)
                row.verification = verify_rank2(row.instance, options.engine, options.factor);
        } catch (const BudgetError & e) {
            row.error = e.what();
        } catch (...) {
            hard[static_cast<std::size_t>(i)] = std::current_exception();
        }
    };
    if (options.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < count; ++i)
            process(i);
    } else {
        for (std::int64_t i = 0; i < count; ++i)
            process(i);
    }
    for (const auto & e : hard) {
        if (e)
            std::rethrow_exception(e);
    }
    return rows;
}

std::map<BigInt, std::uint64_t> value_multiplicities(std::span<const Rank2Row> rows, bool admissible_only)
{
    std::map<BigInt, std::uint64_t> r;
    for (const Rank2Row & row : rows) {
        if (!admissible_only || row.admissibility)
            ++r[row.instance.D];
    }
    return r;
}

BoxR box_R(long double X, unsigned g)
{
    if (X < 1)
        throw DomainError("box_R: X must be >= 1");
    if (g < 5)
        throw DomainError("box_R: g must be >= 5");
    const long double gl = g;
    const long double xy_scale = std::pow(X, 1.0L / (2.0L * (gl - 1)));
    const long double z_scale = std::pow(X, (gl - 2) / (2.0L * gl * (gl - 1)));
    const long double lower_coef = 1.0L / (16.0L * gl * gl);
    const long double upper_coef = (std::ldexp(std::pow(gl, gl - 2), static_cast<int>(2 * g - 4)) + 1.0L) /
                                   std::ldexp(std::pow(gl, gl), static_cast<int>(2 * g));
    BoxR box;
    box.x_lower = lower_coef * xy_scale;
    box.x_upper = upper_coef * xy_scale;
    box.z_lower = z_scale / 2;
    box.z_upper = z_scale;
    auto open_interval = [](long double lo, long double hi) {
        return IntRange{floor_to_big(lo) + 1, ceil_to_big(hi) - 1};
    };
    box.x = open_interval(box.x_lower, box.x_upper);
    box.y = box.x;
    box.z = open_interval(box.z_lower, box.z_upper);
    return box;
}

poly::Polynomial rank2_polynomial(unsigned g)
{
    require_g(g);
    using poly::Polynomial;
    const Polynomial x = Polynomial::variable(3, 0);
    const Polynomial y = Polynomial::variable(3, 1);
    const Polynomial z = Polynomial::variable(3, 2);
    Polynomial f1(3);
    for (unsigned i = 0; i < g; ++i)
        f1 += x.pow(g - 1 - i) * y.pow(i);
    const Polynomial zg = z.pow(g);
    return BigInt(2) * (x.pow(g) + y.pow(g)) * zg - (x - y).pow(2) * zg * zg - f1 * f1;
}

CongruenceSpec congruence_spec(unsigned l, unsigned g1, std::span<const std::uint64_t> primes,
                               std::span<const BigInt> a_offsets, std::span<const BigInt> b_offsets)
{
    if (l == 0)
        throw DomainError("congruence_spec: l must be >= 1");
    require_g(g1);
    if (primes.size() != l || a_offsets.size() != l || b_offsets.size() != l)
        throw DomainError("congruence_spec: need exactly l = " + std::to_string(l) + " primes and offsets");
    for (std::size_t i = 0; i < l; ++i) {
        if (primes[i] <= 3 || !arith::is_prime_u64(primes[i]))
            throw DomainError("congruence_spec: p_" + std::to_string(i + 1) + " = " + std::to_string(primes[i]) +
                              " must be a prime > 3");
        for (std::size_t j = 0; j < i; ++j) {
            if (primes[i] == primes[j])
                throw DomainError("congruence_spec: primes must be distinct");
        }
        const BigInt p = big_u(primes[i]);
        if ((2 * a_offsets[i] - BigInt(g1) * b_offsets[i]) % p == 0)
            throw DomainError("congruence_spec: hypothesis fails at index " + std::to_string(i + 1) + ": p = " +
                              p.get_str() + " divides 2a - g1*b = " +
                              BigInt(2 * a_offsets[i] - BigInt(g1) * b_offsets[i]).get_str());
    }
    std::vector<arith::Congruence> ns{{2, 18}}, ms{{1, 18}};
    for (std::size_t i = 0; i < l; ++i) {
        const BigInt p = big_u(primes[i]);
        const BigInt p2 = p * p;
        const BigInt ni = 1 + a_offsets[i] * p, mi = 1 + b_offsets[i] * p;
        const BigInt gap = ni * ni - pow(mi, g1);
        if (gap % p != 0 || gap % p2 == 0)
            throw ContractViolation("congruence_spec: p_i does not exactly divide n_i^2 - m_i^g1");
        ns.push_back({ni, p2});
        ms.push_back({mi, p2});
    }
    const arith::Congruence n = arith::crt_solve(ns);
    const arith::Congruence m = arith::crt_solve(ms);
    return {l, g1, {primes.begin(), primes.end()}, {a_offsets.begin(), a_offsets.end()},
            {b_offsets.begin(), b_offsets.end()}, n.residue, m.residue, n.modulus};
}

IntRange WindowParams::m_range() const
{
    return {floor_to_big(M) + 1, floor_to_big(2 * M)};
}

IntRange WindowParams::n_range() const
{
    return {floor_to_big(N) + 1, floor_to_big(2 * N)};
}

IntRange WindowParams::t_range() const
{
    return {floor_to_big(T) + 1, floor_to_big(2 * T)};
}

WindowParams windows(long double X, unsigned g1, std::optional<long double> T)
{
    require_g(g1);
    if (X < 1)
        throw DomainError("windows: X must be >= 1");
    if (T && *T <= 0)
        throw DomainError("windows: T must be positive");
    const long double lx = std::log2(X);
    const long double lt = T ? std::log2(*T) : lx * static_cast<long double>(g1 - 2) / static_cast<long double>(4 * g1 + 4);
    if (lt > lx / 2 - 6)
        throw DomainError("windows: T exceeds X^(1/2)/64");
    const long double lm = (2 * lt + lx) / g1 - 1;
    const long double ln = lt + lx / 2 - static_cast<long double>(g1 + 1);
    return {X, std::exp2(lt), std::exp2(lm), std::exp2(ln), g1};
}

std::uint64_t count_R(const BigInt & d, const CongruenceSpec & spec, const WindowParams & w,
                      const arith::FactorBudget & budget, bool literal)
{
    if (sgn(d) <= 0 || !arith::is_squarefree(d, budget))
        return 0;
    const IntRange mr = w.m_range(), nr = w.n_range(), tr = w.t_range();
    std::uint64_t count = 0;
    BigInt n;
    for (BigInt t = std::max(tr.lo, BigInt(1)); t <= tr.hi; ++t) {
        const BigInt t2d = t * t * d;
        for (BigInt m = first_in_class(mr.lo, spec.m0, spec.modulus); m <= mr.hi; m += spec.modulus) {
            if (m % t == 0)
                continue;
            const BigInt val = pow(m, spec.g1) - t2d;
            if (sgn(val) <= 0 || !mpz_perfect_square_p(val.get_mpz_t()))
                continue;
            n = sqrt(val);
            if (n < nr.lo || n > nr.hi || mod_nonneg(n - spec.n0, spec.modulus) != 0)
                continue;
            if (!literal && gcd(m, n) != 1)
                continue;
            ++count;
        }
    }
    return count;
}

std::vector<SolutionTriple> search_H2(const CongruenceSpec & spec, const IntRange & m_range, const IntRange & n_range,
                                      const IntRange & t_range, const SearchOptions & options)
{
    std::vector<SolutionTriple> out;
    if (m_range.empty() || n_range.empty() || t_range.empty())
        return out;
    const BigInt t_lo = std::max(t_range.lo, BigInt(1));
    if (t_range.hi > BigInt(1U << 30))
        throw BudgetError("search_H2: t range must stay below 2^30");
    const BigInt n_lo = std::max(n_range.lo, BigInt(1));
    for (BigInt m = first_in_class(std::max(m_range.lo, BigInt(1)), spec.m0, spec.modulus); m <= m_range.hi;
         m += spec.modulus) {
        const BigInt mg = pow(m, spec.g1);
        const BigInt n_top_sq = sqrt(BigInt(mg - 1));
        const BigInt n_top = std::min(n_range.hi, n_top_sq);
        if (n_top < n_lo)
            continue;
        for (BigInt t = t_lo; t <= t_range.hi; ++t) {
            if (!options.relaxed && m % t == 0)
                continue;
            const std::uint64_t tu = to_u64(t);
            const std::uint64_t t2 = tu * tu;
            std::vector<arith::PrimePower> fac = arith::factorize_u64(tu);
            for (auto & pp : fac)
                pp.exponent *= 2;
            const BigInt bt2 = big_u(t2);
            const std::vector<std::uint64_t> roots =
                arith::detail::sqrt_mod_trusted(to_u64(mod_nonneg(mg, bt2)), t2, fac);
            for (std::uint64_t r : roots) {
                const auto merged = crt_general(big_u(r), bt2, spec.n0, spec.modulus);
                if (!merged)
                    continue;
                // walk n downward from the top so that d grows monotonically
                BigInt n = n_top - mod_nonneg(n_top - merged->residue, merged->modulus);
                for (; n >= n_lo; n -= merged->modulus) {
                    const BigInt d = (mg - n * n) / bt2;
                    if (options.max_d && d > *options.max_d)
                        break;
                    if (!options.literal && gcd(m, n) != 1)
                        continue;
                    out.push_back({m, n, t, d});
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const SolutionTriple & x, const SolutionTriple & y) {
        return std::tie(x.d, x.m, x.n, x.t) < std::tie(y.d, y.m, y.n, y.t);
    });
    return out;
}

std::map<BigInt, std::uint64_t> r_counts(std::span<const SolutionTriple> triples, const arith::FactorBudget & budget)
{
    std::map<BigInt, std::uint64_t> r;
    std::map<BigInt, bool> squarefree;
    for (const SolutionTriple & s : triples) {
        auto it = squarefree.find(s.d);
        if (it == squarefree.end())
            it = squarefree.emplace(s.d, sgn(s.d) > 0 && arith::is_squarefree(s.d, budget)).first;
        if (it->second)
            ++r[s.d];
    }
    return r;
}

AbelianStructure h2_structure(unsigned l, unsigned g1)
{
    std::vector<std::uint64_t> orders(l, 2);
    orders.push_back(g1);
    return AbelianStructure::from_cyclic_orders(orders);
}

H2Verification verify_H2(const BigInt & d, unsigned l, unsigned g1, const classgroup::EngineBudget & engine,
                         const arith::FactorBudget & factor)
{
    require_g(g1);
    const classgroup::Discriminant D = classgroup::fundamental_discriminant(d);
    const std::vector<QuadForm> forms = classgroup::enumerate_reduced_forms(D, engine);
    H2Verification v;
    v.class_number = forms.size();
    v.structure = classgroup::structure_from_forms(forms);
    v.genus_two_rank = classgroup::two_rank_genus(D, factor);
    if (v.genus_two_rank != v.structure.p_rank(2))
        throw ContractViolation("genus 2-rank disagrees with the computed structure for d = " + d.get_str());
    v.verified = classgroup::embeds(h2_structure(l, g1), v.structure);
    return v;
}

bool LineWitnessReport::all_squarefree() const
{
    return std::all_of(trials.begin(), trials.end(), [](const LineTrial & t) { return t.squarefree; });
}

bool LineWitnessReport::all_controls_detected() const
{
    return std::all_of(trials.begin(), trials.end(), [](const LineTrial & t) { return t.control_detected; });
}

LineWitnessReport poly_squarefree_witness(unsigned g, unsigned trials, std::uint64_t seed)
{
    require_g(g);
    if (trials == 0)
        throw DomainError("poly_squarefree_witness: trials must be >= 1");
    const poly::Polynomial f = rank2_polynomial(g);
    // mt19937_64's output sequence is fixed by the standard; the mapping
    // below avoids the implementation-defined distributions.
    // Small boxes hit special lines too often: any line whose (x, y) shadow
    // passes through the origin picks up a factor x^g.
    std::mt19937_64 rng(seed);
    auto draw = [&rng]() { return static_cast<std::int64_t>(rng() % 2001) - 1000; };

    LineWitnessReport report;
    report.g = g;
    report.seed = seed;
    while (report.trials.size() < trials) {
        LineTrial t;
        for (int i = 0; i < 3; ++i)
            t.point.push_back(big(draw()));
        for (int i = 0; i < 3; ++i)
            t.direction.push_back(big(draw()));
        const poly::UniPoly u = poly::restrict_to_line(f, t.point, t.direction);
        if (u.degree() <= 0) {
            ++report.degenerate_redraws;
            continue;
        }
        t.degree = u.degree();
        t.gcd_degree = poly::UniPoly::gcd(u, u.derivative()).degree();
        t.squarefree = t.gcd_degree == 0;
        t.control_root = draw();
        const poly::UniPoly linear(std::vector<BigRational>{BigRational(-t.control_root), BigRational(1)});
        t.control_detected = !(u * linear * linear).is_squarefree();
        report.trials.push_back(std::move(t));
    }
    return report;
}

} // namespace noncyclic::families
