#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "sph/barrier.hpp"
#include "sph/errors.hpp"
#include "sph/io.hpp"
#include "sph/measures.hpp"
#include "sph/perron.hpp"
#include "sph/problems.hpp"
#include "sph/regularity.hpp"
#include "sph/transforms.hpp"

using namespace sph;
using json = nlohmann::ordered_json;

namespace {

// Exit codes beyond 0.
constexpr int kBadInput = 1;
constexpr int kNotConverged = 4;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        if (cur.find_first_not_of(" \t") != std::string::npos) out.push_back(cur);
    return out;
}

Vec parse_vec(const std::string& s) {
    Vec v;
    for (const auto& t : split(s, ',')) v.push_back(parse_double(t));
    return v;
}

PointOrInfinity parse_point(const std::string& s, int n) {
    const auto a = s.find_first_not_of(" \t");
    if (a != std::string::npos && s.compare(a, 3, "inf") == 0) return PointOrInfinity::infinity(n);
    PointOrInfinity x(parse_vec(s));
    if (x.dim() != n) throw DimensionMismatch("point '" + s + "' is not in dimension " + std::to_string(n));
    return x;
}

std::string point_text(const PointOrInfinity& x) {
    if (x.is_infinity()) return "inf";
    std::string s;
    for (double c : x.coords()) s += (s.empty() ? "" : " ") + format_double(c);
    return s;
}

/// Config values with command-line overrides; every value read is recorded.
class Settings {
public:
    Config cfg;
    json used = json::object();

    double number(const std::string& key, double fallback) {
        const double v = cfg.number(key, fallback);
        used[key] = v;
        return v;
    }
    long integer(const std::string& key, long fallback) {
        const long v = cfg.integer(key, fallback);
        used[key] = v;
        return v;
    }
    std::string text(const std::string& key, const std::string& fallback) {
        const std::string v = cfg.get(key, fallback);
        used[key] = v;
        return v;
    }
    bool flag(const std::string& key, bool fallback) {
        const std::string v = cfg.get(key, fallback ? "true" : "false");
        if (v != "true" && v != "false" && v != "1" && v != "0")
            throw InvalidInput("config key " + key + " must be true or false");
        used[key] = v == "true" || v == "1";
        return v == "true" || v == "1";
    }
    Vec vec(const std::string& key, const Vec& fallback) {
        const auto s = cfg.get(key);
        Vec v = s ? parse_vec(*s) : fallback;
        used[key] = v;
        return v;
    }
    std::vector<std::string> list(const std::string& key) {
        const auto s = cfg.get(key);
        std::vector<std::string> v = s ? split(*s, ';') : std::vector<std::string>{};
        used[key] = v;
        return v;
    }
};

struct Output {
    std::string dir;

    std::string path(const std::string& name) const { return (std::filesystem::path(dir) / name).string(); }

    void write(const std::string& name, const std::string& content) const {
        if (dir.empty()) {
            std::cout << content;
            return;
        }
        std::filesystem::create_directories(dir);
        std::ofstream f(path(name), std::ios::binary);
        f << content;
        if (!f) throw InvalidInput("cannot write " + path(name));
    }
};

Output output(Settings& s) { return Output{s.text("output.dir", "")}; }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int dimension(Settings& s) {
    const long n = s.integer("n", 2);
    if (n < 2 || n > 3) throw InvalidInput("n must be 2 or 3");
    return static_cast<int>(n);
}

Domain load(Settings& s, int n) {
    const std::string file = s.text("domain.file", "");
    Domain d = file.empty() ? examples::by_name(s.text("domain.name", "half-space"), n) : load_domain(file);
    if (d.dim() != n) throw DimensionMismatch("domain dimension differs from n");
    return d;
}

double exponent(Settings& s, int n) {
    const double p = s.number("p", 2.0);
    if (!(p > 1.0) || !admissibility_check(p, n)) throw HypothesisViolation("p must exceed max(1, n/2)");
    return p;
}

SolverOptions solver_options(Settings& s) {
    SolverOptions o;
    o.grad_tol = s.number("solver.grad_tol", o.grad_tol);
    o.max_iterations = static_cast<int>(s.integer("solver.max_iterations", o.max_iterations));
    const double eps_final = s.number("solver.eps_final", o.eps_schedule.back());
    while (o.eps_schedule.size() > 1 && o.eps_schedule.back() < eps_final * (1 - 1e-12)) o.eps_schedule.pop_back();
    o.verbose = s.flag("solver.verbose", false);
    return o;
}

PipelineOptions pipeline_options(Settings& s, int n) {
    PipelineOptions o;
    const std::string t = s.text("transform.kind", "inversion");
    if (t == "inversion") {
        o.transform = TransformKind::inversion;
    } else if (t == "sphericalization") {
        o.transform = TransformKind::sphericalization;
    } else {
        throw InvalidInput("transform.kind must be inversion or sphericalization");
    }
    Vec c(n, 0.0);
    c[n - 1] = -1.0;
    o.center = s.vec("transform.center", c);
    o.base = s.vec("transform.base", Vec(n, 0.0));
    o.h = s.number("grid.h", 1.0 / 64);
    o.truncation = s.number("grid.truncation", 64.0);
    return o;
}

/// Bounded domains are solved directly unless a transform is requested explicitly.
std::shared_ptr<ProblemFamily> family(Settings& s, const Domain& dom, double p, int n) {
    if (dom.bounded() && !s.cfg.has("transform.kind"))
        return std::make_shared<BoundedFamily>(dom, p, s.number("grid.h", 1.0 / 64));
    require_om_condition(dom, p);
    return std::make_shared<PipelineFamily>(dom, p, pipeline_options(s, n));
}

int cmd_sphericalize(Settings& s) {
    const int n = dimension(s);
    const SphericalizationContext ctx(s.vec("sphericalize.base", Vec(n, 0.0)), s.number("p", 2.0));
    std::vector<std::pair<PointOrInfinity, PointOrInfinity>> pairs;
    for (const auto& t : s.list("sphericalize.pairs")) {
        const auto ends = split(t, ':');
        if (ends.size() != 2) throw InvalidInput("pair '" + t + "' must be x:y");
        pairs.emplace_back(parse_point(ends[0], n), parse_point(ends[1], n));
    }
    const double R = s.number("sphericalize.disc_radius", 0.0);
    const long m = s.integer("sphericalize.disc_steps", 8);
    if (R > 0.0) {
        if (m < 1) throw InvalidInput("disc_steps must be positive");
        for (long i = 0; i <= m; ++i) {
            Vec x = ctx.base();
            x[0] += R * static_cast<double>(i) / static_cast<double>(m);
            pairs.emplace_back(PointOrInfinity(x), PointOrInfinity::infinity(n));
        }
    }
    std::ostringstream os;
    os << "x,y,d_a,dhat_lo,dhat_hi,mu_a_density_x,muhat_density_x,arc_density_x\n";
    for (const auto& [x, y] : pairs) {
        const Interval b = dhat_bounds(ctx, x, y);
        os << point_text(x) << ',' << point_text(y) << ',' << format_double(d_a(ctx, x, y)) << ','
           << format_double(b.lo) << ',' << format_double(b.hi);
        if (x.is_infinity()) {
            os << ",,,\n";
            continue;
        }
        os << ',' << format_double(mu_a_density(ctx, x.coords())) << ','
           << format_double(muhat_density(ctx, x.coords())) << ',' << format_double(arc_length_density(ctx, x))
           << '\n';
    }
    os << "mu_a_total," << format_double(mu_a_total_mass(ctx)) << ",bound," << format_double(mu_a_mass_bound(n))
       << ",,,,\n";
    output(s).write("sphericalize.csv", os.str());
    return 0;
}

int cmd_check_weight(Settings& s) {
    const int n = dimension(s);
    const double p = s.number("p", 2.0);
    const std::string kind = s.text("weight.kind", "power");
    WeightSpec w = kind == "power"      ? WeightSpec::power(s.vec("weight.center", Vec(n, 0.0)), s.number("weight.alpha", 0.0))
                   : kind == "inversion" ? WeightSpec::inversion(s.number("weight.p", p), n)
                   : kind == "sphericalization"
                       ? WeightSpec::sphericalization(SphericalizationContext(s.vec("weight.base", Vec(n, 0.0)), p))
                       : throw InvalidInput("weight.kind must be power, inversion or sphericalization");
    BallSamplerConfig c;
    c.seed = static_cast<std::uint64_t>(s.integer("sampler.seed", static_cast<long>(c.seed)));
    c.radius_min = s.number("sampler.radius_min", c.radius_min);
    c.radius_max = s.number("sampler.radius_max", c.radius_max);
    c.balls_per_decade = static_cast<int>(s.integer("sampler.balls_per_decade", c.balls_per_decade));
    c.nodes_per_ball = static_cast<int>(s.integer("sampler.nodes_per_ball", c.nodes_per_ball));
    const ApReport r = check_ap(w, p, c);
    json j;
    j["weight"] = r.weight.describe();
    j["p"] = r.p;
    j["verdict"] = to_string(r.verdict);
    j["max_quotient"] = r.max_quotient;
    j["prediction"] = r.prediction;
    j["center_slope"] = r.center_slope;
    j["radii"] = r.radii;
    j["ball_types"] = r.ball_types;
    j["quotients"] = r.quotients;
    j["config"] = s.used;
    output(s).write("weight.json", dump(j));
    return r.verdict == ApVerdict::bounded ? 0 : r.verdict == ApVerdict::diverging ? 2 : 3;
}

std::function<double(const double*)> boundary_data(Settings& s, int n, double p) {
    const std::string kind = s.text("data.kind", "constant");
    if (kind == "constant") {
        const double c = s.number("data.value", 0.0);
        return [c](const double*) { return c; };
    }
    if (kind == "step") {
        const double w = s.number("data.width", 0.25);
        if (!(w > 0.0)) throw InvalidInput("data.width must be positive");
        return [w](const double* x) { return 0.5 + 0.5 * std::tanh(x[0] / w); };
    }
    if (kind == "radial") {
        const double r0 = s.number("data.r0", 1.0), r1 = s.number("data.r1", 2.0);
        return [n, p, r0, r1](const double* x) {
            return radial_pharmonic(n, p, norm(std::span<const double>(x, n)), r0, r1);
        };
    }
    throw InvalidInput("data.kind must be constant, step or radial");
}

std::vector<PointOrInfinity> eval_points(Settings& s, int n) {
    std::vector<PointOrInfinity> pts;
    for (const auto& t : s.list("eval.points")) pts.push_back(parse_point(t, n));
    return pts;
}

int cmd_solve(Settings& s) {
    const int n = dimension(s);
    const Domain dom = load(s, n);
    const double p = exponent(s, n);
    const auto f = boundary_data(s, n, p);
    std::optional<double> at_inf;
    if (s.cfg.has("data.infinity")) at_inf = s.number("data.infinity", 0.0);
    const auto fam = family(s, dom, p, n);
    const auto pts = eval_points(s, n);
    const SolverOptions opt = solver_options(s);
    json j;
    if (auto* pf = dynamic_cast<PipelineFamily*>(fam.get())) {
        if (pf->infinity_node_active() && !at_inf) throw InvalidInput("data.infinity is required when p < n");
        j["infinity_node_active"] = pf->infinity_node_active();
    }
    const double vinf = at_inf.value_or(0.0);
    const GridProblem P = fam->build([&](const NodePoint& q) { return q.infinity ? vinf : f(q.x); });
    Output out = output(s);
    try {
        const Solution sol = solve_dirichlet(P, opt);
        j["report"] = report_json(sol.report);
        json vals = json::array();
        for (const auto& x : pts) vals.push_back({{"x", point_text(x)}, {"u", fam->evaluate(sol.field, x)}});
        j["values"] = vals;
        j["config"] = s.used;
        std::ostringstream csv;
        write_field_csv(csv, sol.field);
        if (!out.dir.empty()) out.write("field.csv", csv.str());
        out.write("report.json", dump(j));
        return 0;
    } catch (const SolveFailure& e) {
        j["report"] = report_json(e.report());
        j["config"] = s.used;
        out.write("report.json", dump(j));
        std::cerr << "error kind=SolveFailure message=\"" << e.what() << "\"\n";
        return kNotConverged;
    }
}

std::vector<Box> boxes(Settings& s, const std::string& key, int n) {
    std::vector<Box> out;
    for (const auto& t : s.list(key)) {
        const auto ends = split(t, ':');
        if (ends.size() != 2) throw InvalidInput("box '" + t + "' must be lo:hi");
        Box b{parse_vec(ends[0]), parse_vec(ends[1])};
        require_same_dim(b.lo.size(), static_cast<std::size_t>(n), "box");
        require_same_dim(b.hi.size(), static_cast<std::size_t>(n), "box");
        out.push_back(std::move(b));
    }
    return out;
}

int cmd_harmonic_measure(Settings& s) {
    const int n = dimension(s);
    const Domain dom = load(s, n);
    const double p = exponent(s, n);
    const auto fam = family(s, dom, p, n);
    const std::string set = s.text("measure.set", "boxes");
    BoundarySet E;
    if (set == "boxes") {
        E = BoundarySet::boxes(n, boxes(s, "measure.boxes", n), s.flag("measure.infinity", false));
        E.zero_measure = s.flag("measure.zero_measure", false);
        auto rest = boxes(s, "measure.complement_boxes", n);
        if (!rest.empty())
            E.complement = std::make_shared<BoundarySet>(
                BoundarySet::boxes(n, std::move(rest), s.flag("measure.complement_infinity", !E.includes_infinity)));
    } else if (set == "infinity") {
        E = BoundarySet::infinity_only();
    } else if (set == "all") {
        E = BoundarySet::everything();
    } else if (set == "none") {
        E = BoundarySet::empty();
    } else {
        throw InvalidInput("measure.set must be boxes, infinity, all or none");
    }
    std::vector<double> deltas;
    for (const auto& t : s.list("measure.deltas")) deltas.push_back(parse_double(t));
    if (deltas.empty()) deltas = {0.2, 0.1, 0.05, 0.025};
    s.used["measure.deltas"] = deltas;
    const std::string side = s.text("measure.side", "upper");
    if (side != "upper" && side != "lower") throw InvalidInput("measure.side must be upper or lower");
    const auto pts = eval_points(s, n);
    const SolverOptions opt = solver_options(s);
    const PerronResult R = perron_indicator(*fam, E, side == "upper" ? PerronSide::upper : PerronSide::lower,
                                            deltas, opt);
    std::ostringstream csv;
    csv << "x";
    for (double d : R.deltas) csv << ",delta_" << format_double(d);
    csv << ",value\n";
    bool in_range = true;
    for (const auto& x : pts) {
        csv << point_text(x);
        for (const auto& f : R.fields) csv << ',' << format_double(fam->evaluate(f, x));
        const double v = fam->evaluate(R.field, x);
        in_range = in_range && v >= -1e-9 && v <= 1 + 1e-9;
        csv << ',' << format_double(std::clamp(v, 0.0, 1.0)) << '\n';
    }
    json j;
    j["side"] = side;
    j["monotone"] = R.monotone;
    j["max_violation"] = R.max_violation;
    j["last_decrement"] = R.last_decrement;
    j["limit_certified"] = R.limit_certified;
    j["within_unit_interval"] = in_range;
    j["config"] = s.used;
    Output out = output(s);
    out.write("values.csv", csv.str());
    if (!out.dir.empty()) out.write("perron.json", dump(j));
    return 0;
}

int cmd_check_regularity(Settings& s) {
    const int n = dimension(s);
    const Domain dom = load(s, n);
    const double p = exponent(s, n);
    RegularityOptions ro;
    ro.base = s.vec("regularity.base", Vec(n, 0.0));
    ro.k = s.number("regularity.k", ro.k);
    ro.components.h = s.number("regularity.h", ro.components.h);
    ro.components.R_max = s.number("regularity.R_max", ro.components.R_max);
    ro.porosity.witness_count = static_cast<int>(s.integer("regularity.witness_count", ro.porosity.witness_count));
    const RegularityReport r = regularity_at_infinity_verdict(dom, p, ro);
    json j;
    j["verdict"] = to_string(r.verdict);
    j["gate"] = {{"passes", r.gate.passes}, {"reason", r.gate.reason}};
    json comps = json::array();
    for (const auto& c : r.components)
        comps.push_back({{"id", c.id}, {"bounded", c.bounded}, {"cells", c.cells}, {"max_radius", c.max_radius}});
    j["components"] = comps;
    if (r.porosity) {
        json w = json::array();
        for (const auto& x : r.porosity->witnesses) w.push_back({{"shell", x.shell}, {"x", x.x}, {"theta", x.theta}});
        j["porosity"] = {{"is_porous", r.porosity->is_porous}, {"theta", r.porosity->theta}, {"witnesses", w}};
    }
    j["evidence"] = r.evidence;
    if (s.flag("regularity.parabolicity", false)) {
        ParabolicityOptions po;
        po.base = ro.base;
        po.inner_radius = s.number("parabolicity.inner_radius", po.inner_radius);
        po.levels = static_cast<int>(s.integer("parabolicity.levels", po.levels));
        po.h = s.number("parabolicity.h", po.h);
        po.slope_tol = s.number("parabolicity.slope_tol", po.slope_tol);
        po.symmetric = s.flag("parabolicity.symmetric", false);
        po.solver = solver_options(s);
        const ParabolicityResult pr = p_parabolicity_estimate(dom, p, po);
        j["parabolicity"] = {{"verdict", to_string(pr.verdict)}, {"outer_radii", pr.outer_radii},
                             {"cap_estimates", pr.cap_estimates}, {"slope", pr.slope},
                             {"nonincreasing", pr.nonincreasing}};
    }
    if (s.flag("regularity.barrier", false)) {
        BarrierGrid g;
        g.h = s.number("barrier.h", g.h);
        g.extent = s.number("barrier.extent", g.extent);
        const BarrierFormula f = barrier_formula_for(n, p);
        json b = json::array();
        for (const auto& t : s.list("barrier.k")) {
            const BarrierReport br = barrier_check(f, n, p, parse_double(t), g);
            b.push_back({{"formula", to_string(f)}, {"k", br.k}, {"residual_ok", br.residual_ok},
                         {"min_scaled_residual", br.min_scaled_residual}, {"boundary_ok", br.boundary_ok},
                         {"infinity_ok", br.infinity_ok}, {"decay_ok", br.decay_ok}, {"passes", br.passes()}});
        }
        j["barriers"] = b;
    }
    j["config"] = s.used;
    output(s).write("regularity.json", dump(j));
    return 0;
}

int cmd_invert(Settings& s) {
    const int n = dimension(s);
    const Domain dom = load(s, n);
    const double p = exponent(s, n);
    Vec c(n, 0.0);
    c[n - 1] = -1.0;
    const InversionMap map(p, n, s.vec("transform.center", c));
    const Domain img = invert_domain(map, dom);
    json j;
    j["center"] = map.center();
    j["image"] = img.to_text();
    j["image_bounded"] = img.bounded();
    j["weight"] = map.image_weight().describe();
    j["infinity_has_zero_capacity"] = infinity_has_zero_capacity(p, n);
    json pts = json::array();
    for (const auto& x : eval_points(s, n)) pts.push_back({{"x", point_text(x)}, {"y", point_text(map.forward_point(x))}});
    j["points"] = pts;
    j["config"] = s.used;
    output(s).write("invert.json", dump(j));
    return 0;
}

int cmd_capacity(Settings& s) {
    const int n = dimension(s);
    const double p = exponent(s, n);
    const double r = s.number("capacity.inner_radius", 1.0);
    const double R = s.number("capacity.window_radius", 8.0);
    if (!(r > 0.0) || !(R > r)) throw InvalidInput("capacity needs 0 < inner_radius < window_radius");
    Condenser c;
    c.n = n;
    c.window_radius = R;
    c.symmetric = s.flag("capacity.symmetric", true);
    c.inner = [n, r](const double* x) { return norm(std::span<const double>(x, n)) <= r; };
    const double h = s.number("grid.h", 1.0 / 64);
    const CapacityResult res = variational_capacity(c, p, h, solver_options(s));
    const double exact = annulus_capacity(n, p, r, R);
    json j;
    j["capacity"] = res.capacity;
    j["closed_form"] = exact;
    j["relative_error"] = std::abs(res.capacity - exact) / exact;
    j["report"] = report_json(res.report);
    j["config"] = s.used;
    output(s).write("capacity.json", dump(j));
    return 0;
}

struct Flag {
    const char* name;
    const char* key;
    const char* help;
};

const std::vector<Flag> kCommon{
    {"--out", "output.dir", "output directory (stdout when empty)"},
    {"--n", "n", "dimension (2 or 3)"},
    {"--p", "p", "exponent p"},
    {"--grad-tol", "solver.grad_tol", "relative gradient tolerance"},
    {"--max-iterations", "solver.max_iterations", "Newton steps per continuation stage"},
    {"--eps-final", "solver.eps_final", "last regularization in the continuation"},
};

const std::vector<Flag> kDomain{
    {"--domain", "domain.name", "example domain name"},
    {"--domain-file", "domain.file", "domain description file"},
    {"--spacing", "grid.h", "grid spacing"},
    {"--transform", "transform.kind", "inversion or sphericalization"},
    {"--center", "transform.center", "inversion center, comma separated"},
    {"--base", "transform.base", "sphericalization base point"},
    {"--truncation", "grid.truncation", "sphericalization truncation radius"},
};

const std::map<std::string, std::vector<Flag>> kSpecific{
    {"sphericalize",
     {{"--base", "sphericalize.base", "base point a"},
      {"--disc-radius", "sphericalize.disc_radius", "probe points on [a, a + R e_1]"},
      {"--disc-steps", "sphericalize.disc_steps", "number of disc probe intervals"}}},
    {"check-weight",
     {{"--weight", "weight.kind", "power, inversion or sphericalization"},
      {"--alpha", "weight.alpha", "power weight exponent"},
      {"--center", "weight.center", "power weight center"},
      {"--seed", "sampler.seed", "sampler seed"},
      {"--radius-min", "sampler.radius_min", "smallest ball radius"},
      {"--radius-max", "sampler.radius_max", "largest ball radius"},
      {"--balls-per-decade", "sampler.balls_per_decade", "balls per decade of radii"},
      {"--nodes-per-ball", "sampler.nodes_per_ball", "quadrature nodes per ball"}}},
    {"solve",
     {{"--data", "data.kind", "constant, step or radial"},
      {"--value", "data.value", "constant data value"},
      {"--width", "data.width", "step width"},
      {"--infinity", "data.infinity", "value at infinity"}}},
    {"harmonic-measure",
     {{"--set", "measure.set", "boxes, infinity, all or none"},
      {"--side", "measure.side", "upper or lower"},
      {"--with-infinity", "measure.infinity", "E contains infinity (true/false)"}}},
    {"check-regularity",
     {{"--k", "regularity.k", "components outside B(a, k)"},
      {"--R-max", "regularity.R_max", "component grid truncation radius"},
      {"--grid-h", "regularity.h", "component grid spacing"},
      {"--parabolicity", "regularity.parabolicity", "also estimate p-parabolicity (true/false)"},
      {"--levels", "parabolicity.levels", "condenser levels"},
      {"--barrier", "regularity.barrier", "also check barriers at infinity (true/false)"}}},
    {"invert", {}},
    {"capacity",
     {{"--spacing", "grid.h", "grid spacing"},
      {"--inner-radius", "capacity.inner_radius", "radius of E"},
      {"--window-radius", "capacity.window_radius", "window radius"},
      {"--symmetric", "capacity.symmetric", "solve on one orthant (true/false)"}}},
};

const std::map<std::string, std::vector<Flag>> kLists{
    {"sphericalize", {{"--pair", "sphericalize.pairs", "probe pair x:y, 'inf' for infinity"}}},
    {"solve", {{"--eval", "eval.points", "evaluation point"}}},
    {"harmonic-measure",
     {{"--box", "measure.boxes", "closed box lo:hi in E"},
      {"--complement-box", "measure.complement_boxes", "closed box lo:hi of the complement"},
      {"--delta", "measure.deltas", "envelope width (repeat, decreasing)"},
      {"--eval", "eval.points", "evaluation point"}}},
    {"check-regularity", {{"--k-barrier", "barrier.k", "barrier parameter k (repeat)"}}},
    {"invert", {{"--eval", "eval.points", "point to map"}}},
};

using Command = int (*)(Settings&);

const std::map<std::string, std::pair<Command, const char*>> kCommands{
    {"sphericalize", {cmd_sphericalize, "tabulate d_a, chain-metric bounds and densities"}},
    {"check-weight", {cmd_check_weight, "A_p check of a weight; exit 0 bounded, 2 diverging, 3 inconclusive"}},
    {"solve", {cmd_solve, "p-harmonic Dirichlet solve, bounded or through a transform"}},
    {"harmonic-measure", {cmd_harmonic_measure, "Perron envelopes of an indicator"}},
    {"check-regularity", {cmd_check_regularity, "regularity at infinity verdict"}},
    {"invert", {cmd_invert, "image of a domain under inversion"}},
    {"capacity", {cmd_capacity, "variational capacity of a ball in a ball"}},
};

bool uses_domain(const std::string& name) {
    return name == "solve" || name == "harmonic-measure" || name == "check-regularity" || name == "invert";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted p-harmonic solver for unbounded domains via sphericalization and inversion"};
    app.require_subcommand(1);
    struct Bound {
        CLI::App* app;
        std::string config;
        std::map<std::string, std::pair<CLI::Option*, std::string>> values;
        std::map<std::string, std::pair<CLI::Option*, std::vector<std::string>>> lists;
    };
    std::map<std::string, Bound> bound;
    for (const auto& [name, cmd] : kCommands) {
        Bound& b = bound[name];
        b.app = app.add_subcommand(name, cmd.second);
        b.app->add_option("--config", b.config, "key = value config file with [sections]");
        auto add = [&](const std::vector<Flag>& flags) {
            for (const Flag& f : flags) {
                auto& slot = b.values[f.key];
                slot.first = b.app->add_option(f.name, slot.second, f.help);
            }
        };
        add(kCommon);
        if (uses_domain(name)) add(kDomain);
        if (auto it = kSpecific.find(name); it != kSpecific.end()) add(it->second);
        if (auto it = kLists.find(name); it != kLists.end())
            for (const Flag& f : it->second) {
                auto& slot = b.lists[f.key];
                slot.first = b.app->add_option(f.name, slot.second, f.help);
            }
    }
    CLI11_PARSE(app, argc, argv);
    for (auto& [name, b] : bound) {
        if (!b.app->parsed()) continue;
        try {
            Settings s;
            if (!b.config.empty()) s.cfg = Config::load(b.config);
            for (auto& [key, slot] : b.values)
                if (slot.first->count() > 0) s.cfg.set(key, slot.second);
            for (auto& [key, slot] : b.lists) {
                if (slot.first->count() == 0) continue;
                std::string joined;
                for (const auto& v : slot.second) joined += (joined.empty() ? "" : ";") + v;
                s.cfg.set(key, joined);
            }
            return kCommands.at(name).first(s);
        } catch (const std::exception& e) {
            std::string kind = "Error";
            if (dynamic_cast<const DimensionMismatch*>(&e)) kind = "DimensionMismatch";
            else if (dynamic_cast<const HypothesisViolation*>(&e)) kind = "HypothesisViolation";
            else if (dynamic_cast<const NotLocallyIntegrable*>(&e)) kind = "NotLocallyIntegrable";
            else if (dynamic_cast<const InvalidInput*>(&e)) kind = "InvalidInput";
            else if (dynamic_cast<const SolveFailure*>(&e)) kind = "SolveFailure";
            std::string msg = e.what();
            for (char& c : msg)
                if (c == '\n' || c == '"') c = '\'';
            std::cerr << "error kind=" << kind << " message=\"" << msg << "\"\n";
            return kind == "SolveFailure" ? kNotConverged : kBadInput;
        }
    }
    return kBadInput;
}
