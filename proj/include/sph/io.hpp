#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "sph/grid.hpp"
#include "sph/solver.hpp"

namespace sph {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);
/// Whole-string decimal parse; throws InvalidInput on trailing characters.
double parse_double(const std::string& s);

/// Two header lines (`# n h origin... dims...` names, then values), then one row per
/// active node: index coordinates and value.
void write_field_csv(std::ostream& os, const ScalarField& u);
ScalarField read_field_csv(std::istream& is);

nlohmann::ordered_json report_json(const SolveReport& r);

/// key = value file with [section] headers; keys are addressed as "section.key".
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::optional<std::string> get(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double number(const std::string& key, double fallback) const;
    long integer(const std::string& key, long fallback) const;
    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace sph
