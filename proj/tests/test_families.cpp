#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "noncyclic/errors.hpp"
#include "noncyclic/families.hpp"

using namespace noncyclic;
using namespace noncyclic::families;

namespace {

// direct sums, no shared code with the library
BigInt f1_naive(long a, long b, unsigned g)
{
    BigInt s = 0;
    for (unsigned i = 0; i < g; ++i)
        s += pow(BigInt(a), g - 1 - i) * pow(BigInt(b), i);
    return s;
}

std::vector<BigInt> big_list(std::initializer_list<long> v)
{
    std::vector<BigInt> out;
    for (long x : v)
        out.push_back(BigInt(x));
    return out;
}

} // namespace

TEST_CASE("f1 and f examples")
{
    CHECK(f1_eval(1, 1, 5) == 5);
    CHECK(f1_eval(1, 0, 3) == 1);
    CHECK(f1_eval(1, 0, 9) == 1);
    CHECK(f1_eval(2, 1, 5) == 31);
    CHECK(f1_eval(5, 3, 5) == 1441);
    CHECK(f_eval(1, 1, 1, 5) == -21);
    CHECK(f_eval(2, 1, 2, 5) == 127);
    CHECK(f_eval(5, 3, 4, 5) == 626879);
    CHECK_THROWS_AS(f_eval(0, 1, 1, 5), DomainError);
    CHECK_THROWS_AS(f_eval(1, 2, 1, 4), DomainError);
}

TEST_CASE("witness examples")
{
    Witness w = witness(2, 1, 2, 5);
    CHECK(w.X1 == 63);
    CHECK(w.Y1 == 4);
    CHECK(w.X2 == -1);
    CHECK(w.Y2 == 2);

    w = witness(1, 1, 7, 5);
    CHECK(w.X1 == 5);
    CHECK(w.X2 == 5);
    CHECK(w.Y1 == 7);
    CHECK(w.Y2 == 7);

    w = witness(5, 3, 4, 5);
    CHECK(w.Y1 == 20);
    CHECK(w.Y2 == 12);
    CHECK(w.X1 == 3489);
    CHECK(w.X2 == -607);
}

TEST_CASE("symmetry and witness identities on random tuples")
{
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 2000; ++i) {
        const unsigned g = 3 + 2 * static_cast<unsigned>(rng() % 4);
        const long a = static_cast<long>(rng() % 60 + 1), b = static_cast<long>(rng() % 60 + 1),
                   n = static_cast<long>(rng() % 20 + 1);
        const BigInt D = f_eval(a, b, n, g);
        CHECK(D == f_eval(b, a, n, g));
        const BigInt f1 = f1_naive(a, b, g);
        CHECK(f1 == f1_eval(a, b, g));
        CHECK(D == 2 * (pow(BigInt(a), g) + pow(BigInt(b), g)) * pow(BigInt(n), g) -
                       BigInt((a - b) * (a - b)) * pow(BigInt(n), 2 * g) - f1 * f1);
        const Witness w = witness(a, b, n, g);
        CHECK(w.X1 * w.X1 - 4 * pow(w.Y1, g) == -D);
        CHECK(w.X2 * w.X2 - 4 * pow(w.Y2, g) == -D);
    }
}

TEST_CASE("admissibility reasons")
{
    CHECK(admissible(Rank2Instance::make(2, 1, 2, 5)).reason == Reason::size_bound);
    CHECK(admissible(Rank2Instance::make(1, 1, 3, 5)).reason == Reason::a_equals_b);
    CHECK(admissible(Rank2Instance::make(1, 1, 1, 3)).reason == Reason::a_equals_b);
    CHECK(admissible(Rank2Instance::make(1, 2, 1, 5)).reason == Reason::nonpositive);

    const Rank2Instance big = Rank2Instance::make(5, 3, 4, 5);
    // 626879 = 11 * 56989 passes the size bound 384000; square-free decides
    CHECK(big.D >= 384000);
    const Admissibility adm = admissible(big);
    CHECK(adm.admissible == arith::is_squarefree(626879));
    CHECK(adm.admissible);
    CHECK(reason_name(Reason::size_bound) == "size_bound");
}

TEST_CASE("instance forms and verification")
{
    const Rank2Instance inst = Rank2Instance::make(5, 3, 4, 5);
    const auto [F1, F2] = instance_forms(inst);
    CHECK(F1.discriminant() == -626879);
    CHECK(F2.discriminant() == -626879);
    CHECK(classgroup::element_order(F1) == 5);
    CHECK(classgroup::element_order(F2) == 5);
    const Rank2Verification v = verify_rank2(inst);
    CHECK(v.verified);
    CHECK(v.subgroup_order == 25);
    CHECK(v.class_number % 25 == 0);
    CHECK(v.structure.p_rank(5) >= 2);

    CHECK_THROWS_AS(verify_rank2(Rank2Instance::make(2, 1, 2, 5)), DomainError);
    CHECK_THROWS_AS(instance_forms(Rank2Instance::make(1, 2, 1, 5)), DomainError);
}

TEST_CASE("scan_rank2")
{
    const auto empty = scan_rank2(5, {1, 0}, {1, 2}, {1, 2});
    CHECK(empty.empty());

    const auto tiny = scan_rank2(5, {1, 2}, {1, 2}, {1, 2});
    REQUIRE(tiny.size() == 8);
    bool found = false;
    for (const auto & r : tiny) {
        CHECK_FALSE(r.admissibility.admissible);
        CHECK_FALSE(r.verification.has_value());
        if (r.instance.a == 2 && r.instance.b == 1 && r.instance.n == 2) {
            found = true;
            CHECK(r.instance.D == 127);
        }
    }
    CHECK(found);
    // lexicographic order
    CHECK(tiny[1].instance.n == 2);
    CHECK(tiny[2].instance.b == 2);
    CHECK(tiny[4].instance.a == 2);

    ScanOptions serial;
    serial.exec = Exec::serial;
    const auto s = scan_rank2(3, {1, 8}, {1, 8}, {1, 5}, serial);
    const auto p = scan_rank2(3, {1, 8}, {1, 8}, {1, 5});
    REQUIRE(s.size() == p.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s[i].instance.D == p[i].instance.D);
        CHECK(s[i].admissibility.reason == p[i].admissibility.reason);
        CHECK(s[i].verification.has_value() == p[i].verification.has_value());
        if (s[i].verification && p[i].verification) {
            CHECK(s[i].verification->verified);
            CHECK(p[i].verification->verified);
        }
    }

    // (a, b) and (b, a) give the same D, so r(D) >= 2 for admissible values
    const auto r = value_multiplicities(p);
    for (const auto & [D, m] : r)
        CHECK(m % 2 == 0);

    ScanOptions tight;
    tight.max_tuples = 10;
    CHECK_THROWS_AS(scan_rank2(5, {1, 3}, {1, 3}, {1, 3}, tight), BudgetError);
}

TEST_CASE("per-row budget errors are recorded, not thrown")
{
    ScanOptions o;
    o.engine.max_abs_delta = 1000;
    const auto rows = scan_rank2(5, {5, 5}, {3, 3}, {4, 4}, o);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].admissibility.admissible);
    CHECK_FALSE(rows[0].error.empty());
    CHECK_FALSE(rows[0].verification.has_value());
}

TEST_CASE("box_R")
{
    const BoxR b = box_R(1e10L, 5);
    CHECK(b.x_lower > 0.044L);
    CHECK(b.x_upper < 0.045L);
    CHECK(b.x.empty());
    CHECK(b.y.empty());
    CHECK(std::fabs(static_cast<double>(b.x_upper / b.x_lower) - 8001.0 / 3200000.0 * 400.0) < 1e-12);

    const BoxR z = box_R(1e30L, 5);
    CHECK_FALSE(z.z.empty());
    CHECK(z.z_upper == doctest::Approx(std::pow(1e30, 3.0 / 40.0)).epsilon(1e-12));

    long double prev_lo = 0, prev_hi = 0;
    for (long double X = 1; X < 1e60L; X *= 1000) {
        const BoxR w = box_R(X, 7);
        CHECK(w.x_lower >= prev_lo);
        CHECK(w.x_upper >= prev_hi);
        prev_lo = w.x_lower;
        prev_hi = w.x_upper;
    }
    CHECK_THROWS_AS(box_R(10, 3), DomainError);
    CHECK_THROWS_AS(box_R(0.5L, 5), DomainError);
}

TEST_CASE("congruence_spec")
{
    const std::uint64_t p5[] = {5};
    CongruenceSpec s = congruence_spec(1, 3, p5, big_list({1}), big_list({0}));
    CHECK(s.n0 == 56);
    CHECK(s.m0 == 1);
    CHECK(s.modulus == 450);
    CHECK_THROWS_AS(congruence_spec(1, 3, p5, big_list({0}), big_list({0})), DomainError);

    const std::uint64_t p57[] = {5, 7};
    s = congruence_spec(2, 3, p57, big_list({1, 1}), big_list({0, 0}));
    CHECK(s.modulus == 22050);
    CHECK(s.n0 % 18 == 2);
    CHECK(s.m0 % 18 == 1);
    CHECK(s.n0 % 25 == 6);
    CHECK(s.n0 % 49 == 8);

    try {
        congruence_spec(2, 3, p57, big_list({1, 3}), big_list({0, 2}));
        FAIL("expected a hypothesis violation");
    } catch (const DomainError & e) {
        CHECK(std::string(e.what()).find("index 2") != std::string::npos);
    }
    const std::uint64_t bad[] = {3};
    CHECK_THROWS_AS(congruence_spec(1, 3, bad, big_list({1}), big_list({0})), DomainError);
    const std::uint64_t dup[] = {5, 5};
    CHECK_THROWS_AS(congruence_spec(2, 3, dup, big_list({1, 1}), big_list({0, 0})), DomainError);
    CHECK_THROWS_AS(congruence_spec(1, 4, p5, big_list({1}), big_list({0})), DomainError);
}

TEST_CASE("windows")
{
    const WindowParams w = windows(std::ldexp(1.0L, 48), 3);
    CHECK(w.T == 8.0L);
    CHECK(w.M == 131072.0L);
    CHECK(w.N == 8388608.0L);
    CHECK(w.t_range().lo == 9);
    CHECK(w.t_range().hi == 16);
    CHECK(w.m_range().lo == 131073);
    CHECK(w.m_range().hi == 262144);
    CHECK_THROWS_AS(windows(1e12L, 3, std::sqrt(1e12L)), DomainError);
    CHECK_NOTHROW(windows(1e12L, 3, std::sqrt(1e12L) / 64));
}

namespace {

// every (m, n, t) by direct enumeration of n in its class
std::vector<SolutionTriple> brute_triples(const CongruenceSpec & s, const IntRange & mr, const IntRange & nr,
                                          const IntRange & tr, bool literal)
{
    std::vector<SolutionTriple> out;
    for (BigInt m = mr.lo; m <= mr.hi; ++m) {
        if ((m - s.m0) % s.modulus != 0)
            continue;
        const BigInt mg = pow(m, s.g1);
        for (BigInt t = tr.lo; t <= tr.hi; ++t) {
            if (m % t == 0)
                continue;
            for (BigInt n = s.n0; n <= nr.hi && n * n < mg; n += s.modulus) {
                if (n < nr.lo)
                    continue;
                const BigInt diff = mg - n * n;
                if (diff % (t * t) != 0)
                    continue;
                if (!literal && gcd(m, n) != 1)
                    continue;
                out.push_back({m, n, t, diff / (t * t)});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const SolutionTriple & a, const SolutionTriple & b) {
        return std::tie(a.d, a.m, a.n, a.t) < std::tie(b.d, b.m, b.n, b.t);
    });
    return out;
}

} // namespace

TEST_CASE("search_H2 equals brute-force triple enumeration")
{
    const std::uint64_t p5[] = {5};
    const CongruenceSpec s = congruence_spec(1, 3, p5, big_list({1}), big_list({0}));
    const IntRange mr{1, 6000}, nr{1, 1000000}, tr{2, 40};
    for (bool literal : {false, true}) {
        SearchOptions o;
        o.literal = literal;
        const auto got = search_H2(s, mr, nr, tr, o);
        const auto expect = brute_triples(s, mr, nr, tr, literal);
        CHECK(got.size() == expect.size());
        CHECK(got == expect);
        CHECK_FALSE(got.empty());
        for (const auto & x : got) {
            CHECK(pow(x.m, 3) == x.n * x.n + x.t * x.t * x.d);
            CHECK(x.d % 3 == 0);
            CHECK(x.d % 9 != 0);
            CHECK(x.d % 5 == 0);
            CHECK(x.d % 25 != 0);
        }
    }
    CHECK(search_H2(s, {1, 0}, nr, tr).empty());
}

TEST_CASE("count_R agrees with the search over a window")
{
    const std::uint64_t p5[] = {5};
    const CongruenceSpec s = congruence_spec(1, 3, p5, big_list({1}), big_list({0}));
    WindowParams w;
    w.g1 = 3;
    w.M = 2000;
    w.N = 20000;
    w.T = 6;
    const auto triples = search_H2(s, w.m_range(), w.n_range(), w.t_range());
    const auto R = r_counts(triples);
    REQUIRE_FALSE(R.empty());
    for (const auto & [d, c] : R)
        CHECK(count_R(d, s, w) == c);
    std::set<BigInt> non_sqf;
    for (const auto & x : triples) {
        if (!R.contains(x.d))
            non_sqf.insert(x.d);
    }
    for (const auto & d : non_sqf)
        CHECK(count_R(d, s, w) == 0);
    CHECK(count_R(12, s, w) == 0);
}

TEST_CASE("construction conditions: gcd(m, n) = 1 matters")
{
    // literal conditions admit (132301, 37688456, 143); gcd(m, n) = 13
    const std::uint64_t p57[] = {5, 7};
    const CongruenceSpec s = congruence_spec(2, 3, p57, big_list({1, 1}), big_list({0, 0}));
    const BigInt m(132301), n(37688456), t(143);
    const BigInt d(BigInt("43782975285"));
    CHECK(pow(m, 3) == n * n + t * t * d);
    CHECK((m - s.m0) % s.modulus == 0);
    CHECK((n - s.n0) % s.modulus == 0);
    CHECK(m % t != 0);
    CHECK(gcd(m, n) == 13);
    CHECK(arith::is_squarefree(d));

    const H2Verification v = verify_H2(d, 2, 3);
    CHECK_FALSE(v.verified);
    CHECK(v.structure.p_rank(3) == 0);
    CHECK(v.genus_two_rank == 4);
    CHECK(v.structure.p_rank(2) == 4);

    SearchOptions literal;
    literal.literal = true;
    const auto with = search_H2(s, {m, m}, {n, n}, {t, t}, literal);
    CHECK(with.size() == 1);
    CHECK(search_H2(s, {m, m}, {n, n}, {t, t}).empty());
}

TEST_CASE("verify_H2 basics")
{
    CHECK_FALSE(verify_H2(3, 2, 3).verified);
    const H2Verification v = verify_H2(249713835, 2, 3);
    CHECK(v.verified);
    CHECK(v.structure.invariant_factors == std::vector<std::uint64_t>{2, 2, 2, 438});
    CHECK(h2_structure(2, 3).invariant_factors == std::vector<std::uint64_t>{2, 6});
    CHECK_THROWS_AS(verify_H2(12, 2, 3), DomainError);
}

TEST_CASE("line witness is deterministic and catches planted squares")
{
    const LineWitnessReport a = poly_squarefree_witness(5, 8, 42);
    const LineWitnessReport b = poly_squarefree_witness(5, 8, 42);
    REQUIRE(a.trials.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(a.trials[i].point == b.trials[i].point);
        CHECK(a.trials[i].direction == b.trials[i].direction);
        CHECK(a.trials[i].gcd_degree == b.trials[i].gcd_degree);
    }
    CHECK(a.all_controls_detected());
    CHECK(a.all_squarefree());
    CHECK_THROWS_AS(poly_squarefree_witness(4, 1, 0), DomainError);
    CHECK_THROWS_AS(poly_squarefree_witness(5, 0, 0), DomainError);
}
