#include "common.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "noncyclic/cli.hpp"
#include "noncyclic/errors.hpp"

namespace noncyclic::cli {

void write_atomic(const std::string & path, const std::string & content)
{
    const std::filesystem::path target(path);
    if (target.has_parent_path())
        std::filesystem::create_directories(target.parent_path());
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot open " + tmp + " for writing");
        f << content;
        f.flush();
        if (!f)
            throw std::runtime_error("write to " + tmp + " failed");
    }
    std::filesystem::rename(tmp, target);
}

void Context::emit(const std::string & path, const std::string & content)
{
    write_atomic(path, content);
    written.push_back(path);
}

Json Budgets::to_json() const
{
    return Json{{"delta", std::to_string(delta)},       {"factor_bits", std::to_string(factor_bits)},
                {"rho_iterations", std::to_string(rho_iterations)}, {"tuples", std::to_string(tuples)},
                {"points", std::to_string(points)},     {"box", std::to_string(box)},
                {"census_x", std::to_string(census_x)}, {"search", std::to_string(search)}};
}

std::vector<std::string> split_list(const std::string & text)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty() || !parts.empty())
        parts.push_back(cur);
    return parts;
}

families::IntRange parse_range(const std::string & text, const std::string & flag)
{
    std::string lo = text, hi = text;
    if (auto pos = text.find(".."); pos != std::string::npos) {
        lo = text.substr(0, pos);
        hi = text.substr(pos + 2);
    } else if (auto colon = text.find(':'); colon != std::string::npos) {
        lo = text.substr(0, colon);
        hi = text.substr(colon + 1);
    }
    try {
        return {parse_bigint(lo), parse_bigint(hi)};
    } catch (const std::invalid_argument &) {
        throw DomainError(flag + ": expected lo:hi, got '" + text + "'");
    }
}

std::vector<std::uint64_t> parse_u64_list(const std::string & text, const std::string & flag)
{
    std::vector<std::uint64_t> out;
    for (const std::string & s : split_list(text)) {
        BigInt v;
        try {
            v = parse_bigint(s);
        } catch (const std::invalid_argument &) {
            throw DomainError(flag + ": '" + s + "' is not an integer");
        }
        if (sgn(v) < 0 || !fits_u64(v))
            throw DomainError(flag + ": '" + s + "' out of range");
        out.push_back(to_u64(v));
    }
    return out;
}

std::string csv_field(const std::string & s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + "\"";
}

std::string csv_row(const std::vector<std::string> & fields)
{
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            row += ',';
        row += csv_field(fields[i]);
    }
    return row + "\n";
}

std::string rational_string(const BigRational & q)
{
    return q.get_den() == 1 ? q.get_num().get_str() : q.get_num().get_str() + "/" + q.get_den().get_str();
}

Json structure_json(const classgroup::AbelianStructure & s)
{
    Json arr = Json::array();
    for (std::uint64_t d : s.invariant_factors)
        arr.push_back(std::to_string(d));
    return arr;
}

std::string schema_name(const std::string & what)
{
    return "noncyclic." + what + ".v1";
}

std::string utc_now()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace noncyclic::cli
