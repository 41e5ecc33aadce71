#include "sph/io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sph/errors.hpp"

namespace sph {

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) throw InvalidInput("empty number");
    if (s[a] == '+') ++a;
    double v = 0.0;
    const auto r = std::from_chars(s.data() + a, s.data() + b + 1, v);
    if (r.ec != std::errc() || r.ptr != s.data() + b + 1) throw InvalidInput("not a number: '" + s + "'");
    return v;
}

void write_field_csv(std::ostream& os, const ScalarField& u) {
    const GridGeometry& g = u.geom;
    const int n = g.n;
    os << "# n h";
    for (int k = 0; k < n; ++k) os << " origin_" << k;
    for (int k = 0; k < n; ++k) os << " dims_" << k;
    os << "\n# " << n << ' ' << format_double(g.h);
    for (int k = 0; k < n; ++k) os << ' ' << format_double(g.origin[k]);
    for (int k = 0; k < n; ++k) os << ' ' << g.dims[k];
    os << '\n';
    for (int k = 0; k < n; ++k) os << "ijk"[k] << ',';
    os << "kind,value\n";
    for (long i = 0; i < g.size(); ++i) {
        if (u.kind[i] == NodeKind::inactive) continue;
        const auto m = g.multi(i);
        for (int k = 0; k < n; ++k) os << m[k] << ',';
        os << (u.kind[i] == NodeKind::interior ? 'i' : 'd') << ',' << format_double(u.values[i]) << '\n';
    }
}

ScalarField read_field_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# n h", 0) != 0) throw InvalidInput("missing field header");
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw InvalidInput("missing field header values");
    std::istringstream hs(line.substr(2));
    std::string tok;
    ScalarField u;
    GridGeometry& g = u.geom;
    hs >> tok;
    g.n = static_cast<int>(parse_double(tok));
    if (g.n < 2 || g.n > 3) throw InvalidInput("field dimension must be 2 or 3");
    hs >> tok;
    g.h = parse_double(tok);
    g.origin.resize(g.n);
    for (int k = 0; k < g.n; ++k) {
        if (!(hs >> tok)) throw InvalidInput("truncated field header");
        g.origin[k] = parse_double(tok);
    }
    for (int k = 0; k < g.n; ++k) {
        if (!(hs >> tok)) throw InvalidInput("truncated field header");
        g.dims[k] = static_cast<long>(parse_double(tok));
    }
    u.kind.assign(g.size(), NodeKind::inactive);
    u.values.assign(g.size(), 0.0);
    std::getline(is, line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream rs(line);
        std::array<long, 3> m{0, 0, 0};
        for (int k = 0; k < g.n; ++k) {
            std::getline(rs, tok, ',');
            m[k] = static_cast<long>(parse_double(tok));
            if (m[k] < 0 || m[k] >= g.dims[k]) throw InvalidInput("field row index out of range");
        }
        std::getline(rs, tok, ',');
        const long i = g.index(m);
        u.kind[i] = tok == "i" ? NodeKind::interior : NodeKind::dirichlet;
        std::getline(rs, tok);
        u.values[i] = parse_double(tok);
    }
    return u;
}

nlohmann::ordered_json report_json(const SolveReport& r) {
    nlohmann::ordered_json j;
    j["energy"] = r.energy;
    j["iters"] = r.iterations;
    j["grad_norm"] = r.grad_norm;
    j["eps_schedule"] = r.eps_schedule;
    j["min"] = r.u_min;
    j["max"] = r.u_max;
    j["converged"] = r.converged;
    j["p"] = r.p;
    j["unknowns"] = r.unknowns;
    j["active_cells"] = r.active_cells;
    j["stage_iterations"] = r.stage_iterations;
    j["pcg_iterations"] = r.pcg_iterations;
    j["data_min"] = r.data_min;
    j["data_max"] = r.data_max;
    j["message"] = r.message;
    return j;
}

Config Config::parse(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream is(text);
    try {
        pt::ini_parser::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw InvalidInput(std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
    }
    Config c;
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            c.values_[name] = node.data();
            continue;
        }
        for (const auto& [key, leaf] : node) c.values_[name + "." + key] = leaf.data();
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidInput("cannot read config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::optional<std::string> Config::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

double Config::number(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
        return parse_double(*v);
    } catch (const InvalidInput&) {
        throw InvalidInput("config key " + key + " is not a number: '" + *v + "'");
    }
}

long Config::integer(const std::string& key, long fallback) const {
    const double v = number(key, static_cast<double>(fallback));
    if (v != std::floor(v)) throw InvalidInput("config key " + key + " must be an integer");
    return static_cast<long>(v);
}

}  // namespace sph
