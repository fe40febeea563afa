#include <algorithm>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "common.hpp"
#include "noncyclic/cli.hpp"
#include "noncyclic/errors.hpp"

#ifndef NONCYCLIC_VERSION
#define NONCYCLIC_VERSION "0.0.0"
#endif

namespace noncyclic::cli {

namespace {

void add_common(CLI::App * s, Context & ctx, std::string & format)
{
    s->add_option("--out", ctx.out_path, "data file to write (a manifest is written beside it)");
    s->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--seed", ctx.seed, "seed for randomized checks");
    s->add_flag("--serial", ctx.serial, "run the serial reference kernels");
    Budgets & b = ctx.budgets;
    s->add_option("--budget-delta", b.delta, "largest |delta| for form enumeration")->capture_default_str();
    s->add_option("--budget-factor-bits", b.factor_bits, "largest composite (bits) handed to Pollard rho")
        ->capture_default_str();
    s->add_option("--budget-rho-iterations", b.rho_iterations, "Pollard rho iterations per factor")
        ->capture_default_str();
    s->add_option("--budget-tuples", b.tuples, "largest rank2 box")->capture_default_str();
    s->add_option("--budget-points", b.points, "largest residue enumeration for rho")->capture_default_str();
    s->add_option("--budget-box", b.box, "largest box volume for N_P")->capture_default_str();
    s->add_option("--budget-x", b.census_x, "largest census bound")->capture_default_str();
    s->add_option("--budget-search", b.search, "largest (m, t) grid for h2")->capture_default_str();
}

void write_manifest(const Context & ctx, const std::string & started, int code)
{
    if (ctx.written.empty())
        return;
    Json outputs = Json::array();
    for (const auto & p : ctx.written)
        outputs.push_back(p);
    Json m{{"schema", schema_name("manifest")},
           {"command", ctx.command},
           {"argv", ctx.args},
           {"parameters", ctx.parameters},
           {"seed", std::to_string(ctx.seed)},
           {"version", NONCYCLIC_VERSION},
           {"started_at", started},
           {"finished_at", utc_now()},
           {"budgets", ctx.budgets.to_json()},
           {"exit_code", code},
           {"outputs", outputs}};
    write_atomic(ctx.out_path + ".manifest.json", m.dump(2) + "\n");
}

std::vector<std::string> replay_args(const std::string & manifest_path, const std::optional<std::string> & out)
{
    std::ifstream f(manifest_path);
    if (!f)
        throw DomainError("replay: cannot read " + manifest_path);
    Json m;
    try {
        m = Json::parse(f);
    } catch (const Json::exception & e) {
        throw DomainError("replay: " + manifest_path + " is not valid JSON: " + e.what());
    }
    if (!m.contains("schema") || m["schema"] != schema_name("manifest") || !m.contains("argv"))
        throw DomainError("replay: " + manifest_path + " is not a run manifest");
    std::vector<std::string> args = m["argv"].get<std::vector<std::string>>();
    if (!args.empty() && args.front() == "replay")
        throw DomainError("replay: manifest records another replay");
    if (out) {
        bool replaced = false;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--out" && i + 1 < args.size()) {
                args[i + 1] = *out;
                replaced = true;
            } else if (args[i].starts_with("--out=")) {
                args[i] = "--out=" + *out;
                replaced = true;
            }
        }
        if (!replaced) {
            args.push_back("--out");
            args.push_back(*out);
        }
    }
    return args;
}

} // namespace

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
    CLI::App app{"Imaginary quadratic fields with non-cyclic class group subgroups"};
    app.name("noncyclic");
    app.require_subcommand(1);
    app.set_version_flag("--version", NONCYCLIC_VERSION);

    Context ctx;
    ctx.args = args;
    ctx.out = &out;
    ctx.err = &err;
    std::string format;

    auto * cg = app.add_subcommand("classgroup", "class number and structure of Q(sqrt(-d))");
    std::optional<std::string> cg_d, cg_delta;
    bool cg_forms = false;
    cg->add_option("--d", cg_d, "square-free d > 0");
    cg->add_option("--delta", cg_delta, "negative fundamental discriminant");
    cg->add_flag("--forms", cg_forms, "list the reduced forms");
    add_common(cg, ctx, format);

    auto * r2 = app.add_subcommand("rank2", "scan the rank-2 g-torsion family");
    unsigned r2_g = 5;
    std::string r2_a = "1:15", r2_b = "1:15", r2_n = "1:8";
    bool r2_no_verify = false;
    r2->add_option("--g", r2_g)->capture_default_str();
    r2->add_option("--a-range", r2_a)->capture_default_str();
    r2->add_option("--b-range", r2_b)->capture_default_str();
    r2->add_option("--n-range", r2_n)->capture_default_str();
    r2->add_flag("--no-verify", r2_no_verify, "admissibility only");
    add_common(r2, ctx, format);

    auto * h2 = app.add_subcommand("h2", "search the (Z/2)^l x Z/g1 congruence family");
    H2Args h2a;
    h2->add_option("--l", h2a.l)->capture_default_str();
    h2->add_option("--g1", h2a.g1)->capture_default_str();
    h2->add_option("--primes", h2a.primes, "comma-separated p_1..p_l")->capture_default_str();
    h2->add_option("--a-offsets", h2a.a_offsets, "n = 1 + a_i p_i (mod p_i^2)")->capture_default_str();
    h2->add_option("--b-offsets", h2a.b_offsets, "m = 1 + b_i p_i (mod p_i^2)")->capture_default_str();
    h2->add_option("--m-range", h2a.m_range);
    h2->add_option("--n-range", h2a.n_range);
    h2->add_option("--t-range", h2a.t_range);
    h2->add_option("--x", h2a.x, "derive the windows from X");
    h2->add_option("--t", h2a.t, "override T when deriving windows");
    h2->add_option("--max-d", h2a.max_d, "drop d above this bound");
    h2->add_flag("--relaxed", h2a.relaxed, "allow t | m");
    h2->add_flag("--literal", h2a.literal, "do not require gcd(m, n) = 1");
    add_common(h2, ctx, format);

    auto * dn = app.add_subcommand("density", "Euler product of local square-free densities");
    DensityArgs da;
    dn->add_option("--g", da.g, "use f(x, y, z) of the rank-2 family (default 5)");
    dn->add_option("--poly", da.poly, "custom polynomial, e.g. 'x^2+y^3'");
    dn->add_option("--p-max", da.p_max)->capture_default_str();
    dn->add_option("--mode", da.mode, "brute or hensel")->capture_default_str();
    dn->add_option("--box", da.box, "lo:hi per variable, comma-separated");
    dn->add_option("--digits", da.digits)->capture_default_str();
    add_common(dn, ctx, format);

    auto * cs = app.add_subcommand("census", "count square-free d <= X with H inside Cl(-d)");
    cs->set_help_flag("--help", "Print this help message and exit");
    std::uint64_t cs_x = 0;
    std::vector<std::string> cs_h;
    unsigned cs_k = 8;
    cs->add_option("--x", cs_x)->required();
    cs->add_option("--h", cs_h, "cyclic orders of H, e.g. 3,3 (repeatable)");
    cs->add_option("--checkpoints", cs_k, "dyadic checkpoints X/2^k")->capture_default_str();
    add_common(cs, ctx, format);

    auto * lm = app.add_subcommand("verify-lemma32", "numeric square-free witness for f(x, y, z)");
    std::vector<unsigned> lm_g{3, 5, 7};
    unsigned lm_trials = 100;
    lm->add_option("--g", lm_g)->delimiter(',')->capture_default_str();
    lm->add_option("--trials", lm_trials)->capture_default_str();
    add_common(lm, ctx, format);

    auto * rp = app.add_subcommand("replay", "re-run a manifest");
    std::string rp_manifest;
    std::optional<std::string> rp_out;
    rp->add_option("manifest", rp_manifest)->required();
    rp->add_option("--out", rp_out, "write to this path instead of the recorded one");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError & e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ExitCode::ok : ExitCode::usage;
    }

    if (rp->parsed()) {
        try {
            return run(replay_args(rp_manifest, rp_out), out, err);
        } catch (const std::invalid_argument & e) {
            err << "error: " << e.what() << "\n";
            return ExitCode::usage;
        }
    }

    if (!format.empty())
        ctx.format = format == "csv" ? Format::csv : Format::json;
    if (!args.empty())
        ctx.command = args.front();

    const std::string started = utc_now();
    int code = ExitCode::ok;
    bool reported = false;
    try {
        if (cg->parsed())
            code = cmd_classgroup(ctx, cg_d, cg_delta, cg_forms);
        else if (r2->parsed())
            code = cmd_rank2(ctx, r2_g, r2_a, r2_b, r2_n, !r2_no_verify);
        else if (h2->parsed())
            code = cmd_h2(ctx, h2a);
        else if (dn->parsed())
            code = cmd_density(ctx, da);
        else if (cs->parsed())
            code = cmd_census(ctx, cs_x, cs_h, cs_k);
        else if (lm->parsed())
            code = cmd_lemma32(ctx, lm_g, lm_trials);
        ctx.command = app.get_subcommands().front()->get_name();
    } catch (const BudgetError & e) {
        err << "budget exceeded: " << e.what() << "\n";
        return ExitCode::budget;
    } catch (const ContractViolation & e) {
        err << "contract violation: " << e.what() << "\n";
        code = ExitCode::contract;
        reported = true;
    } catch (const std::invalid_argument & e) {
        err << "usage error: " << e.what() << "\n";
        return ExitCode::usage;
    } catch (const std::exception & e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::usage;
    }
    try {
        write_manifest(ctx, started, code);
    } catch (const std::exception & e) {
        err << "error: cannot write manifest: " << e.what() << "\n";
        return code == ExitCode::ok ? ExitCode::usage : code;
    }
    if (code == ExitCode::contract && !reported)
        err << "contract violation: see the output above\n";
    return code;
}

} // namespace noncyclic::cli
