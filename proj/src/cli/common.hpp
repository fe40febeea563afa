#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "noncyclic/arith.hpp"
#include "noncyclic/bigint.hpp"
#include "noncyclic/classgroup.hpp"
#include "noncyclic/families.hpp"

namespace noncyclic::cli {

using Json = nlohmann::ordered_json;

enum class Format { csv, json };

struct Budgets {
    std::uint64_t delta = std::uint64_t{1} << 40;
    unsigned factor_bits = 192;
    std::uint64_t rho_iterations = std::uint64_t{1} << 24;
    std::uint64_t tuples = std::uint64_t{1} << 24;
    std::uint64_t points = std::uint64_t{1} << 32;
    std::uint64_t box = std::uint64_t{1} << 24;
    std::uint64_t census_x = 10'000'000;
    std::uint64_t search = std::uint64_t{1} << 26;

    arith::FactorBudget factor() const { return {factor_bits, rho_iterations}; }
    classgroup::EngineBudget engine() const { return {delta}; }
    Json to_json() const;
};

struct Context {
    std::vector<std::string> args;
    std::string command;
    Json parameters = Json::object();
    Budgets budgets;
    std::uint64_t seed = 0;
    std::optional<Format> format;
    std::string out_path;
    bool serial = false;
    std::vector<std::string> written;
    std::ostream * out = nullptr;
    std::ostream * err = nullptr;

    Format format_or(Format fallback) const { return format.value_or(fallback); }
    /// Writes a data file next to --out and records it for the manifest.
    void emit(const std::string & path, const std::string & content);
};

// "lo:hi", "lo..hi" or a single value; inclusive.
families::IntRange parse_range(const std::string & text, const std::string & flag);
std::vector<std::string> split_list(const std::string & text);
std::vector<std::uint64_t> parse_u64_list(const std::string & text, const std::string & flag);

std::string csv_field(const std::string & s);
std::string csv_row(const std::vector<std::string> & fields);
std::string rational_string(const BigRational & q);
Json structure_json(const classgroup::AbelianStructure & s);
std::string schema_name(const std::string & what);
std::string utc_now();

int cmd_classgroup(Context & ctx, const std::optional<std::string> & d, const std::optional<std::string> & delta,
                   bool list_forms);
int cmd_rank2(Context & ctx, unsigned g, const std::string & a_range, const std::string & b_range,
              const std::string & n_range, bool verify);

struct H2Args {
    unsigned l = 2;
    unsigned g1 = 3;
    std::string primes = "5,7";
    std::string a_offsets = "1,1";
    std::string b_offsets = "0,0";
    std::optional<std::string> m_range, n_range, t_range;
    std::optional<double> x;
    std::optional<double> t;
    std::optional<std::string> max_d;
    bool relaxed = false;
    bool literal = false;
};
int cmd_h2(Context & ctx, const H2Args & a);

struct DensityArgs {
    std::optional<unsigned> g;
    std::optional<std::string> poly;
    std::uint64_t p_max = 13;
    std::string mode = "brute";
    std::optional<std::string> box;
    unsigned digits = 12;
};
int cmd_density(Context & ctx, const DensityArgs & a);
int cmd_census(Context & ctx, std::uint64_t X, const std::vector<std::string> & groups, unsigned checkpoints);
int cmd_lemma32(Context & ctx, const std::vector<unsigned> & gs, unsigned trials);

} // namespace noncyclic::cli
