#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "common.hpp"
#include "noncyclic/cli.hpp"
#include "noncyclic/density.hpp"
#include "noncyclic/errors.hpp"
#include "noncyclic/families.hpp"

namespace noncyclic::cli {

namespace {

using classgroup::AbelianStructure;
using families::IntRange;

Exec exec_of(const Context & ctx)
{
    return ctx.serial ? Exec::serial : Exec::parallel;
}

Json range_json(const IntRange & r)
{
    return Json{{"lo", r.lo.get_str()}, {"hi", r.hi.get_str()}};
}

std::string bool_str(bool b)
{
    return b ? "true" : "false";
}

std::vector<BigInt> parse_big_list(const std::string & text, const std::string & flag)
{
    std::vector<BigInt> out;
    for (const std::string & s : split_list(text)) {
        try {
            out.push_back(parse_bigint(s));
        } catch (const std::invalid_argument &) {
            throw DomainError(flag + ": '" + s + "' is not an integer");
        }
    }
    return out;
}

AbelianStructure parse_group(const std::string & text)
{
    std::vector<std::uint64_t> orders = parse_u64_list(text, "--h");
    std::erase(orders, 1);
    for (std::uint64_t o : orders) {
        if (o == 0)
            throw DomainError("--h: cyclic orders must be positive");
    }
    return AbelianStructure::from_cyclic_orders(orders);
}

} // namespace

int cmd_classgroup(Context & ctx, const std::optional<std::string> & d, const std::optional<std::string> & delta,
                   bool list_forms)
{
    if (d.has_value() == delta.has_value())
        throw DomainError("classgroup: give exactly one of --d and --delta");
    const classgroup::Discriminant D = d ? classgroup::fundamental_discriminant(parse_bigint(*d))
                                         : classgroup::discriminant_from_delta(parse_bigint(*delta));
    const std::vector<classgroup::QuadForm> forms = classgroup::enumerate_reduced_forms(D, ctx.budgets.engine());
    const AbelianStructure s = classgroup::structure_from_forms(forms);
    const unsigned genus = classgroup::two_rank_genus(D, ctx.budgets.factor());
    if (genus != s.p_rank(2))
        throw ContractViolation("2-rank " + std::to_string(s.p_rank(2)) + " disagrees with genus count " +
                                std::to_string(genus));
    ctx.parameters["d"] = D.radicand.get_str();
    ctx.parameters["delta"] = D.delta.get_str();

    std::ostream & out = *ctx.out;
    out << "d = " << D.radicand << ", delta = " << D.delta << "\n"
        << "h = " << forms.size() << "\n"
        << "invariant factors = " << s.to_string() << "\n"
        << "2-rank = " << s.p_rank(2) << " (genus count " << genus << ")\n"
        << "reduced forms = " << forms.size() << "\n";
    if (list_forms) {
        for (const auto & f : forms)
            out << "  " << f.to_string() << "\n";
    }

    if (!ctx.out_path.empty()) {
        if (ctx.format_or(Format::json) == Format::csv) {
            std::string text = "#schema=" + schema_name("classgroup") + "\n";
            text += csv_row({"d", "delta", "h", "invariant_factors", "two_rank", "reduced_forms"});
            text += csv_row({D.radicand.get_str(), D.delta.get_str(), std::to_string(forms.size()), s.to_string(),
                             std::to_string(s.p_rank(2)), std::to_string(forms.size())});
            ctx.emit(ctx.out_path, text);
        } else {
            Json j{{"schema", schema_name("classgroup")},
                   {"d", D.radicand.get_str()},
                   {"delta", D.delta.get_str()},
                   {"class_number", std::to_string(forms.size())},
                   {"invariant_factors", structure_json(s)},
                   {"two_rank", std::to_string(s.p_rank(2))},
                   {"genus_two_rank", std::to_string(genus)},
                   {"reduced_forms", std::to_string(forms.size())}};
            if (list_forms) {
                Json fs = Json::array();
                for (const auto & f : forms)
                    fs.push_back(Json::array({std::to_string(f.a), std::to_string(f.b), std::to_string(f.c)}));
                j["forms"] = fs;
            }
            ctx.emit(ctx.out_path, j.dump(2) + "\n");
        }
    }
    return ExitCode::ok;
}

int cmd_rank2(Context & ctx, unsigned g, const std::string & a_text, const std::string & b_text,
              const std::string & n_text, bool verify)
{
    const IntRange ar = parse_range(a_text, "--a-range");
    const IntRange br = parse_range(b_text, "--b-range");
    const IntRange nr = parse_range(n_text, "--n-range");
    ctx.parameters["g"] = std::to_string(g);
    ctx.parameters["a_range"] = range_json(ar);
    ctx.parameters["b_range"] = range_json(br);
    ctx.parameters["n_range"] = range_json(nr);
    ctx.parameters["verify"] = verify;

    families::ScanOptions opt;
    opt.verify = verify;
    opt.exec = exec_of(ctx);
    opt.engine = ctx.budgets.engine();
    opt.factor = ctx.budgets.factor();
    opt.max_tuples = ctx.budgets.tuples;
    const std::vector<families::Rank2Row> rows = families::scan_rank2(g, ar, br, nr, opt);

    std::uint64_t n_adm = 0, n_ver = 0, n_fail = 0, n_err = 0;
    std::map<std::string, std::uint64_t> reasons;
    BigInt max_D = 0;
    for (const auto & row : rows) {
        ++reasons[std::string(families::reason_name(row.admissibility.reason))];
        if (!row.error.empty())
            ++n_err;
        if (row.admissibility) {
            ++n_adm;
            max_D = std::max(max_D, row.instance.D);
            if (row.verification) {
                if (row.verification->verified)
                    ++n_ver;
                else
                    ++n_fail;
            }
        }
    }
    const std::map<BigInt, std::uint64_t> r = families::value_multiplicities(rows);
    std::map<std::uint64_t, std::uint64_t> hist;
    for (const auto & [D, m] : r) {
        if (sgn(D) > 0)
            ++hist[m];
    }
    const density::H3Moments mom = density::moments_h3(r, ctx.budgets.factor());

    std::ostream & out = *ctx.out;
    out << "g = " << g << ": " << rows.size() << " tuples, " << n_adm << " admissible, " << n_ver << " verified";
    if (verify)
        out << ", " << n_fail << " failed";
    out << "\n";
    if (n_err)
        *ctx.err << "warning: " << n_err << " rows hit a budget limit (see the error column)\n";
    out << "r(D) over admissible tuples (multiplicity:#D):";
    for (const auto & [m, c] : hist)
        out << " " << m << ":" << c;
    out << "\nS1 = " << mom.S1 << ", S2 = " << mom.S2 << ", S1^2/S2 = " << rational_string(mom.lower_bound) << "\n";

    if (!ctx.out_path.empty()) {
        std::string text;
        const Format fmt = ctx.format_or(Format::csv);
        if (fmt == Format::csv) {
            text = "#schema=" + schema_name("rank2") + "\n";
            text += csv_row({"g", "a", "b", "n", "D", "admissible", "reason", "verified", "h", "invariant_factors",
                             "subgroup_order", "error"});
        }
        for (const auto & row : rows) {
            const auto & in = row.instance;
            const auto & v = row.verification;
            if (fmt == Format::csv) {
                text += csv_row({std::to_string(g), in.a.get_str(), in.b.get_str(), in.n.get_str(), in.D.get_str(),
                                 bool_str(row.admissibility.admissible),
                                 std::string(families::reason_name(row.admissibility.reason)),
                                 bool_str(v && v->verified), v ? std::to_string(v->class_number) : "",
                                 v ? v->structure.to_string() : "", v ? std::to_string(v->subgroup_order) : "",
                                 row.error});
            } else {
                Json j{{"schema", schema_name("rank2")},
                       {"g", std::to_string(g)},
                       {"a", in.a.get_str()},
                       {"b", in.b.get_str()},
                       {"n", in.n.get_str()},
                       {"D", in.D.get_str()},
                       {"admissible", row.admissibility.admissible},
                       {"reason", families::reason_name(row.admissibility.reason)},
                       {"verified", v && v->verified},
                       {"h", v ? Json(std::to_string(v->class_number)) : Json()},
                       {"invariant_factors", v ? structure_json(v->structure) : Json()},
                       {"subgroup_order", v ? Json(std::to_string(v->subgroup_order)) : Json()},
                       {"error", row.error.empty() ? Json() : Json(row.error)}};
                text += j.dump() + "\n";
            }
        }
        ctx.emit(ctx.out_path, text);

        Json h = Json::array();
        for (const auto & [m, c] : hist)
            h.push_back(Json{{"multiplicity", std::to_string(m)}, {"values", std::to_string(c)}});
        Json rs = Json::object();
        for (const auto & [k, c] : reasons)
            rs[k] = std::to_string(c);
        Json summary{{"schema", schema_name("rank2.summary")},
                     {"g", std::to_string(g)},
                     {"tuples", std::to_string(rows.size())},
                     {"admissible", std::to_string(n_adm)},
                     {"verified", std::to_string(n_ver)},
                     {"failed", std::to_string(n_fail)},
                     {"budget_errors", std::to_string(n_err)},
                     {"reasons", rs},
                     {"r_histogram", h},
                     {"moments_h3",
                      Json{{"S1", mom.S1.get_str()},
                           {"S2", mom.S2.get_str()},
                           {"lower_bound", rational_string(mom.lower_bound)},
                           {"lower_bound_decimal", density::decimal(mom.lower_bound, 6)},
                           {"distinct_squarefree", std::to_string(mom.distinct)}}},
                     {"max_admissible_D", max_D.get_str()}};
        ctx.emit(ctx.out_path + ".summary.json", summary.dump(2) + "\n");
    }
    return n_fail ? ExitCode::contract : ExitCode::ok;
}

int cmd_h2(Context & ctx, const H2Args & a)
{
    const std::vector<std::uint64_t> primes = parse_u64_list(a.primes, "--primes");
    const std::vector<BigInt> ao = parse_big_list(a.a_offsets, "--a-offsets");
    const std::vector<BigInt> bo = parse_big_list(a.b_offsets, "--b-offsets");
    const families::CongruenceSpec spec = families::congruence_spec(a.l, a.g1, primes, ao, bo);

    IntRange mr, nr, tr;
    if (a.x) {
        const families::WindowParams w =
            families::windows(static_cast<long double>(*a.x), a.g1,
                              a.t ? std::optional<long double>(static_cast<long double>(*a.t)) : std::nullopt);
        mr = w.m_range();
        nr = w.n_range();
        tr = w.t_range();
        ctx.parameters["x"] = *a.x;
    } else if (!a.m_range || !a.n_range || !a.t_range) {
        throw DomainError("h2: give --x or all of --m-range, --n-range, --t-range");
    }
    if (a.m_range)
        mr = parse_range(*a.m_range, "--m-range");
    if (a.n_range)
        nr = parse_range(*a.n_range, "--n-range");
    if (a.t_range)
        tr = parse_range(*a.t_range, "--t-range");

    families::SearchOptions opt;
    opt.relaxed = a.relaxed;
    opt.literal = a.literal;
    if (a.max_d)
        opt.max_d = parse_bigint(*a.max_d);

    ctx.parameters["l"] = std::to_string(a.l);
    ctx.parameters["g1"] = std::to_string(a.g1);
    ctx.parameters["primes"] = a.primes;
    ctx.parameters["a_offsets"] = a.a_offsets;
    ctx.parameters["b_offsets"] = a.b_offsets;
    ctx.parameters["m_range"] = range_json(mr);
    ctx.parameters["n_range"] = range_json(nr);
    ctx.parameters["t_range"] = range_json(tr);
    ctx.parameters["relaxed"] = a.relaxed;
    ctx.parameters["literal"] = a.literal;
    if (opt.max_d)
        ctx.parameters["max_d"] = opt.max_d->get_str();

    const BigInt m_count = mr.empty() ? BigInt(0) : BigInt(mr.size() / spec.modulus + 1);
    const BigInt work = m_count * tr.size();
    if (work > big_u(ctx.budgets.search))
        throw BudgetError("h2: search covers about " + work.get_str() + " (m, t) pairs, budget is " +
                          std::to_string(ctx.budgets.search));

    const std::vector<families::SolutionTriple> triples = families::search_H2(spec, mr, nr, tr, opt);
    const std::map<BigInt, std::uint64_t> R = families::r_counts(triples, ctx.budgets.factor());
    const density::H2Moments mom = density::moments_h2(R);

    std::ostream & out = *ctx.out;
    out << "congruences: n = " << spec.n0 << ", m = " << spec.m0 << " (mod " << spec.modulus << ")\n";
    out << triples.size() << " triples, " << R.size() << " square-free d\n";

    bool all_ok = mom.cauchy_holds();
    Json verdicts = Json::array();
    for (const auto & [d, count] : R) {
        const families::H2Verification v = families::verify_H2(d, a.l, a.g1, ctx.budgets.engine(), ctx.budgets.factor());
        const bool three = d % 3 == 0;
        Json exact = Json::array();
        bool all_exact = true;
        for (std::uint64_t p : primes) {
            const BigInt bp = big_u(p);
            const bool e = d % bp == 0 && d % (bp * bp) != 0;
            all_exact = all_exact && e;
            exact.push_back(e);
        }
        const bool good = v.verified && three && all_exact;
        all_ok = all_ok && good;
        out << "  d = " << d << "  R = " << count << "  Cl = " << v.structure.to_string()
            << (good ? "  ok" : "  FAILED") << "\n";
        verdicts.push_back(Json{{"d", d.get_str()},
                                {"R", std::to_string(count)},
                                {"class_number", std::to_string(v.class_number)},
                                {"invariant_factors", structure_json(v.structure)},
                                {"genus_two_rank", std::to_string(v.genus_two_rank)},
                                {"verified", v.verified},
                                {"three_divides", three},
                                {"primes_exact", exact}});
    }
    out << "S1 = " << mom.S1 << ", S2 = " << mom.S2 << ", S1^2/(S1+S2) = " << rational_string(mom.lower_bound)
        << " <= " << mom.nonzero << (mom.cauchy_holds() ? "" : "  VIOLATED") << "\n";

    if (!ctx.out_path.empty()) {
        std::map<BigInt, bool> sqf;
        for (const auto & [d, c] : R)
            sqf[d] = true;
        std::string text;
        const Format fmt = ctx.format_or(Format::csv);
        if (fmt == Format::csv) {
            text = "#schema=" + schema_name("h2") + "\n";
            text += csv_row({"m", "n", "t", "d", "squarefree"});
        }
        for (const auto & s : triples) {
            const bool q = sqf.contains(s.d);
            if (fmt == Format::csv) {
                text += csv_row({s.m.get_str(), s.n.get_str(), s.t.get_str(), s.d.get_str(), bool_str(q)});
            } else {
                text += Json{{"schema", schema_name("h2")},
                             {"m", s.m.get_str()},
                             {"n", s.n.get_str()},
                             {"t", s.t.get_str()},
                             {"d", s.d.get_str()},
                             {"squarefree", q}}
                            .dump() +
                        "\n";
            }
        }
        ctx.emit(ctx.out_path, text);
        Json summary{{"schema", schema_name("h2.summary")},
                     {"spec",
                      Json{{"n0", spec.n0.get_str()}, {"m0", spec.m0.get_str()}, {"modulus", spec.modulus.get_str()}}},
                     {"triples", std::to_string(triples.size())},
                     {"squarefree_d", verdicts},
                     {"moments_h2",
                      Json{{"S1", mom.S1.get_str()},
                           {"S2", mom.S2.get_str()},
                           {"lower_bound", rational_string(mom.lower_bound)},
                           {"nonzero", std::to_string(mom.nonzero)},
                           {"cauchy_holds", mom.cauchy_holds()}}}};
        ctx.emit(ctx.out_path + ".summary.json", summary.dump(2) + "\n");
    }
    return all_ok ? ExitCode::ok : ExitCode::contract;
}

int cmd_density(Context & ctx, const DensityArgs & a)
{
    if (a.g && a.poly)
        throw DomainError("density: give at most one of --g and --poly");
    const density::PolySpec P = a.poly ? density::PolySpec::parse(*a.poly) : density::PolySpec::rank2(a.g.value_or(5));
    density::RhoMode mode;
    if (a.mode == "brute")
        mode = density::RhoMode::brute;
    else if (a.mode == "hensel")
        mode = density::RhoMode::hensel;
    else
        throw DomainError("--mode must be brute or hensel");
    ctx.parameters["polynomial"] = P.poly.to_string(P.names);
    ctx.parameters["p_max"] = std::to_string(a.p_max);
    ctx.parameters["mode"] = a.mode;
    ctx.parameters["digits"] = std::to_string(a.digits);

    const density::DensityReport rep = density::euler_constant(P, a.p_max, mode, exec_of(ctx), {ctx.budgets.points});

    std::ostream & out = *ctx.out;
    out << "P = " << P.poly.to_string(P.names) << "  (n = " << P.n_vars() << ", degree " << P.degree() << ")\n";
    out << std::setw(8) << "p" << std::setw(16) << "rho(p^2)" << "  local factor\n";
    BigRational running = 1;
    Json table = Json::array();
    std::string csv = "#schema=" + schema_name("density") + "\n" +
                      csv_row({"p", "rho", "local_factor", "local_factor_decimal", "partial_product_decimal"});
    for (const auto & row : rep.per_prime) {
        const BigRational before = running;
        running *= row.local_factor;
        if (running > before || running <= 0)
            throw ContractViolation("density: partial products are not positive and non-increasing");
        out << std::setw(8) << row.p << std::setw(16) << row.rho << "  " << density::decimal(row.local_factor, a.digits)
            << "\n";
        table.push_back(Json{{"p", std::to_string(row.p)},
                             {"rho", std::to_string(row.rho)},
                             {"local_factor", rational_string(row.local_factor)},
                             {"local_factor_decimal", density::decimal(row.local_factor, a.digits)},
                             {"partial_product_decimal", density::decimal(running, a.digits)}});
        csv += csv_row({std::to_string(row.p), std::to_string(row.rho), rational_string(row.local_factor),
                        density::decimal(row.local_factor, a.digits), density::decimal(running, a.digits)});
    }
    out << "partial product = " << density::decimal(rep.partial_product, a.digits) << "\n";
    out << "note: " << rep.tail_note << "\n";

    Json j{{"schema", schema_name("density")},
           {"polynomial", P.poly.to_string(P.names)},
           {"variables", P.names},
           {"n_vars", std::to_string(P.n_vars())},
           {"degree", std::to_string(P.degree())},
           {"p_max", std::to_string(rep.p_max)},
           {"mode", a.mode},
           {"per_prime", table},
           {"partial_product", rational_string(rep.partial_product)},
           {"partial_product_decimal", density::decimal(rep.partial_product, a.digits)},
           {"tail_note", rep.tail_note}};

    if (a.box) {
        std::vector<IntRange> box;
        for (const std::string & side : split_list(*a.box))
            box.push_back(parse_range(side, "--box"));
        ctx.parameters["box"] = *a.box;
        const std::uint64_t count =
            density::n_p_empirical(P, box, exec_of(ctx), {ctx.budgets.box}, ctx.budgets.factor());
        BigInt volume = 1;
        Json sides = Json::array();
        for (const auto & r : box) {
            volume *= r.size();
            sides.push_back(range_json(r));
        }
        out << "N_P(box) = " << count << " of " << volume << " points\n";
        j["empirical"] = Json{{"box", sides}, {"volume", volume.get_str()}, {"count", std::to_string(count)}};
    }

    if (!ctx.out_path.empty())
        ctx.emit(ctx.out_path, ctx.format_or(Format::json) == Format::csv ? csv : j.dump(2) + "\n");
    return ExitCode::ok;
}

int cmd_census(Context & ctx, std::uint64_t X, const std::vector<std::string> & group_texts, unsigned checkpoints)
{
    std::vector<AbelianStructure> groups;
    for (const auto & t : group_texts)
        groups.push_back(parse_group(t));
    if (groups.empty())
        groups.emplace_back();
    ctx.parameters["x"] = std::to_string(X);
    Json hs = Json::array();
    for (const auto & H : groups)
        hs.push_back(H.to_string());
    ctx.parameters["groups"] = hs;
    ctx.parameters["checkpoints"] = std::to_string(checkpoints);

    const std::vector<density::CensusRow> rows =
        density::census_series(X, groups, checkpoints, exec_of(ctx), {ctx.budgets.census_x, ctx.budgets.engine()});

    std::ostream & out = *ctx.out;
    const density::CensusRow * prev = nullptr;
    for (const auto & row : rows) {
        if (prev && prev->H == row.H && prev->count > row.count)
            throw ContractViolation("census counts decreased between checkpoints");
        if (!prev || !(prev->H == row.H))
            out << "H = " << row.H.to_string() << "\n" << std::setw(12) << "X" << std::setw(12) << "count"
                << std::setw(12) << "slope" << "  smallest d\n";
        out << std::setw(12) << row.X << std::setw(12) << row.count;
        if (prev && prev->H == row.H && prev->count > 0 && row.count > 0 && row.X > prev->X) {
            const double slope = std::log(static_cast<double>(row.count) / static_cast<double>(prev->count)) /
                                 std::log(static_cast<double>(row.X) / static_cast<double>(prev->X));
            out << std::setw(12) << std::fixed << std::setprecision(4) << slope;
            out.unsetf(std::ios::floatfield);
        } else {
            out << std::setw(12) << "-";
        }
        out << "  " << (row.smallest_d ? std::to_string(*row.smallest_d) : "-") << "\n";
        prev = &row;
    }

    if (!ctx.out_path.empty()) {
        std::string text;
        const Format fmt = ctx.format_or(Format::csv);
        if (fmt == Format::csv) {
            text = "#schema=" + schema_name("census") + "\n";
            text += csv_row({"X", "H", "count", "squarefree_total", "smallest_d"});
        }
        for (const auto & row : rows) {
            const std::string smallest = row.smallest_d ? std::to_string(*row.smallest_d) : "";
            if (fmt == Format::csv) {
                text += csv_row({std::to_string(row.X), row.H.to_string(), std::to_string(row.count),
                                 std::to_string(row.squarefree_total), smallest});
            } else {
                text += Json{{"schema", schema_name("census")},
                             {"X", std::to_string(row.X)},
                             {"H", structure_json(row.H)},
                             {"count", std::to_string(row.count)},
                             {"squarefree_total", std::to_string(row.squarefree_total)},
                             {"smallest_d", row.smallest_d ? Json(smallest) : Json()}}
                            .dump() +
                        "\n";
            }
        }
        ctx.emit(ctx.out_path, text);
    }
    return ExitCode::ok;
}

int cmd_lemma32(Context & ctx, const std::vector<unsigned> & gs, unsigned trials)
{
    Json gj = Json::array();
    for (unsigned g : gs)
        gj.push_back(std::to_string(g));
    ctx.parameters["g"] = gj;
    ctx.parameters["trials"] = std::to_string(trials);

    bool all_ok = true;
    Json results = Json::array();
    std::string csv = "#schema=" + schema_name("lemma32") + "\n" +
                      csv_row({"g", "trial", "point", "direction", "degree", "gcd_degree", "squarefree",
                               "control_root", "control_detected"});
    auto vec_str = [](const std::vector<BigInt> & v) {
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + v[i].get_str();
        return s + ")";
    };
    for (unsigned g : gs) {
        const families::LineWitnessReport rep = families::poly_squarefree_witness(g, trials, ctx.seed);
        const bool ok = rep.all_squarefree() && rep.all_controls_detected();
        all_ok = all_ok && ok;
        std::uint64_t sqf = 0, ctl = 0;
        Json ts = Json::array();
        for (std::size_t i = 0; i < rep.trials.size(); ++i) {
            const auto & t = rep.trials[i];
            sqf += t.squarefree;
            ctl += t.control_detected;
            ts.push_back(Json{{"point", vec_str(t.point)},
                              {"direction", vec_str(t.direction)},
                              {"degree", std::to_string(t.degree)},
                              {"gcd_degree", std::to_string(t.gcd_degree)},
                              {"squarefree", t.squarefree},
                              {"control_root", std::to_string(t.control_root)},
                              {"control_detected", t.control_detected}});
            csv += csv_row({std::to_string(g), std::to_string(i), vec_str(t.point), vec_str(t.direction),
                            std::to_string(t.degree), std::to_string(t.gcd_degree), bool_str(t.squarefree),
                            std::to_string(t.control_root), bool_str(t.control_detected)});
        }
        *ctx.out << "g = " << g << ": " << sqf << "/" << rep.trials.size() << " square-free, " << ctl << "/"
                 << rep.trials.size() << " controls detected, " << rep.degenerate_redraws << " redraws"
                 << (ok ? "" : "  FAILED") << "\n";
        results.push_back(Json{{"g", std::to_string(g)},
                               {"degenerate_redraws", std::to_string(rep.degenerate_redraws)},
                               {"all_squarefree", rep.all_squarefree()},
                               {"all_controls_detected", rep.all_controls_detected()},
                               {"trials", ts}});
    }
    if (!ctx.out_path.empty()) {
        if (ctx.format_or(Format::json) == Format::csv) {
            ctx.emit(ctx.out_path, csv);
        } else {
            Json j{{"schema", schema_name("lemma32")},
                   {"seed", std::to_string(ctx.seed)},
                   {"trials", std::to_string(trials)},
                   {"results", results}};
            ctx.emit(ctx.out_path, j.dump(2) + "\n");
        }
    }
    return all_ok ? ExitCode::ok : ExitCode::contract;
}

} // namespace noncyclic::cli
