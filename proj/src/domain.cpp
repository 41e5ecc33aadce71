#include "sph/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <variant>

namespace sph {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct SpaceP {};
struct HalfSpaceP {
    Vec normal;
    double offset;
};
struct BallP {
    Vec c;
    double r;
};
struct RayP {
    Vec base;
    Vec dir;
    double t0;
};
struct SegmentP {
    Vec a;
    Vec b;
};
struct UnionP {
    std::vector<Domain> parts;
};
struct IntersectP {
    std::vector<Domain> parts;
};
struct MinusP {
    Domain a;
    Domain b;
};
struct PullbackP {
    Domain inner;
    Vec c;
    double radius;
};

Vec unit(Vec v) {
    const double s = norm(v);
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidInput("direction vector must be nonzero");
    for (auto& c : v) c /= s;
    return v;
}

double dist_ray(const RayP& r, std::span<const double> x) {
    const std::size_t n = x.size();
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) t += (x[i] - r.base[i]) * r.dir[i];
    t = std::max(r.t0, t);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - r.base[i] - t * r.dir[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double dist_segment(const SegmentP& sg, std::span<const double> x) {
    const std::size_t n = x.size();
    double L2 = 0.0, t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ab = sg.b[i] - sg.a[i];
        L2 += ab * ab;
        t += (x[i] - sg.a[i]) * ab;
    }
    t = L2 == 0.0 ? 0.0 : std::clamp(t / L2, 0.0, 1.0);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - sg.a[i] - t * (sg.b[i] - sg.a[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

void check_finite(const Vec& v, const char* what) {
    for (double c : v)
        if (!std::isfinite(c)) throw InvalidInput(std::string(what) + " must be finite");
}
}  // namespace

struct DomainNode {
    int n;
    std::variant<SpaceP, HalfSpaceP, BallP, RayP, SegmentP, UnionP, IntersectP, MinusP, PullbackP> v;
    std::optional<double> feature;
};

bool Box::finite() const {
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) return false;
    return true;
}

double Box::max_abs() const {
    double m = 0.0;
    for (std::size_t i = 0; i < lo.size(); ++i) m = std::max({m, std::abs(lo[i]), std::abs(hi[i])});
    return m;
}

Domain Domain::space(int n) {
    if (n < 2) throw InvalidInput("domains need n >= 2");
    return Domain(std::make_shared<DomainNode>(DomainNode{n, SpaceP{}, {}}));
}

Domain Domain::halfspace(Vec normal, double offset) {
    check_finite(normal, "normal");
    const int n = static_cast<int>(normal.size());
    if (n < 2) throw InvalidInput("domains need n >= 2");
    const double s = norm(normal);
    if (!(s > 0.0)) throw InvalidInput("half-space normal must be nonzero");
    return Domain(std::make_shared<DomainNode>(DomainNode{n, HalfSpaceP{unit(std::move(normal)), offset / s}, {}}));
}

Domain Domain::ball(Vec center, double r) {
    check_finite(center, "ball center");
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidInput("ball radius must be positive");
    const int n = static_cast<int>(center.size());
    if (n < 2) throw InvalidInput("domains need n >= 2");
    return Domain(std::make_shared<DomainNode>(DomainNode{n, BallP{std::move(center), r}, {}}));
}

Domain Domain::ray(Vec base, Vec dir, double t0) {
    check_finite(base, "ray base");
    require_same_dim(base.size(), dir.size(), "ray");
    const int n = static_cast<int>(base.size());
    if (n < 2) throw InvalidInput("domains need n >= 2");
    return Domain(std::make_shared<DomainNode>(DomainNode{n, RayP{std::move(base), unit(std::move(dir)), t0}, {}}));
}

Domain Domain::segment(Vec a, Vec b) {
    check_finite(a, "segment end");
    check_finite(b, "segment end");
    require_same_dim(a.size(), b.size(), "segment");
    const int n = static_cast<int>(a.size());
    if (n < 2) throw InvalidInput("domains need n >= 2");
    return Domain(std::make_shared<DomainNode>(DomainNode{n, SegmentP{std::move(a), std::move(b)}, {}}));
}

namespace {
std::optional<double> min_feature(const std::vector<Domain>& parts) {
    std::optional<double> f;
    for (const auto& d : parts)
        if (auto g = d.feature_size()) f = f ? std::min(*f, *g) : *g;
    return f;
}

int common_dim(const std::vector<Domain>& parts) {
    if (parts.empty()) throw InvalidInput("set operation needs at least one operand");
    for (const auto& d : parts) require_same_dim(d.dim(), parts[0].dim(), "set operation");
    return parts[0].dim();
}
}  // namespace

Domain Domain::unite(std::vector<Domain> parts) {
    const int n = common_dim(parts);
    auto f = min_feature(parts);
    return Domain(std::make_shared<DomainNode>(DomainNode{n, UnionP{std::move(parts)}, f}));
}

Domain Domain::intersect(std::vector<Domain> parts) {
    const int n = common_dim(parts);
    auto f = min_feature(parts);
    return Domain(std::make_shared<DomainNode>(DomainNode{n, IntersectP{std::move(parts)}, f}));
}

Domain Domain::minus(Domain a, Domain b) {
    const int n = common_dim({a, b});
    auto f = min_feature({a, b});
    return Domain(std::make_shared<DomainNode>(DomainNode{n, MinusP{std::move(a), std::move(b)}, f}));
}

Domain Domain::pullback(Domain inner, Vec center, double image_radius) {
    require_same_dim(center.size(), inner.dim(), "pullback");
    const int n = inner.dim();
    return Domain(std::make_shared<DomainNode>(
        DomainNode{n, PullbackP{std::move(inner), std::move(center), image_radius}, {}}));
}

Domain Domain::with_feature_size(double h) const {
    if (!(h > 0.0)) throw InvalidInput("feature size must be positive");
    auto copy = std::make_shared<DomainNode>(*node_);
    copy->feature = h;
    return Domain(std::move(copy));
}

int Domain::dim() const { return node_->n; }
std::optional<double> Domain::feature_size() const { return node_->feature; }

namespace {

enum class Mode { open, closed };

bool eval(const DomainNode& nd, std::span<const double> x, Mode m, double tube);

template <class F>
auto visit_node(const DomainNode& nd, F&& f) {
    return std::visit(std::forward<F>(f), nd.v);
}

bool thin_member(double d, Mode m, double tube, std::span<const double> x) {
    if (tube > 0.0) return m == Mode::open ? d < tube : d <= tube;
    return m == Mode::closed && d <= 1e-12 * (1.0 + norm(x));
}

bool eval(const DomainNode& nd, std::span<const double> x, Mode m, double tube) {
    return visit_node(nd, [&](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SpaceP>) {
            return true;
        } else if constexpr (std::is_same_v<T, HalfSpaceP>) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) s += p.normal[i] * x[i];
            return m == Mode::open ? s > p.offset : s >= p.offset;
        } else if constexpr (std::is_same_v<T, BallP>) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - p.c[i]) * (x[i] - p.c[i]);
            return m == Mode::open ? d2 < p.r * p.r : d2 <= p.r * p.r;
        } else if constexpr (std::is_same_v<T, RayP>) {
            return thin_member(dist_ray(p, x), m, tube, x);
        } else if constexpr (std::is_same_v<T, SegmentP>) {
            return thin_member(dist_segment(p, x), m, tube, x);
        } else if constexpr (std::is_same_v<T, UnionP>) {
            for (const auto& d : p.parts)
                if (eval(d.node(), x, m, tube)) return true;
            return false;
        } else if constexpr (std::is_same_v<T, IntersectP>) {
            for (const auto& d : p.parts)
                if (!eval(d.node(), x, m, tube)) return false;
            return true;
        } else if constexpr (std::is_same_v<T, MinusP>) {
            const Mode other = m == Mode::open ? Mode::closed : Mode::open;
            return eval(p.a.node(), x, m, tube) && !eval(p.b.node(), x, other, tube);
        } else {
            const double r2 = dot(x, x);
            if (r2 == 0.0) return m == Mode::closed && !p.inner.bounded();
            Vec y(p.c);
            for (std::size_t i = 0; i < y.size(); ++i) y[i] += x[i] / r2;
            return eval(p.inner.node(), y, m, tube / r2);
        }
    });
}

bool disjoint(const DomainNode& nd, std::span<const double> z, double rho, Mode m);
bool contained(const DomainNode& nd, std::span<const double> z, double rho, Mode m);

bool disjoint(const DomainNode& nd, std::span<const double> z, double rho, Mode m) {
    return visit_node(nd, [&](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SpaceP>) {
            return false;
        } else if constexpr (std::is_same_v<T, HalfSpaceP>) {
            return dot(p.normal, z) + rho <= p.offset;
        } else if constexpr (std::is_same_v<T, BallP>) {
            return dist(z, p.c) >= p.r + rho;
        } else if constexpr (std::is_same_v<T, RayP>) {
            return m == Mode::open || dist_ray(p, z) >= rho;
        } else if constexpr (std::is_same_v<T, SegmentP>) {
            return m == Mode::open || dist_segment(p, z) >= rho;
        } else if constexpr (std::is_same_v<T, UnionP>) {
            for (const auto& d : p.parts)
                if (!disjoint(d.node(), z, rho, m)) return false;
            return true;
        } else if constexpr (std::is_same_v<T, IntersectP>) {
            for (const auto& d : p.parts)
                if (disjoint(d.node(), z, rho, m)) return true;
            return false;
        } else if constexpr (std::is_same_v<T, MinusP>) {
            const Mode other = m == Mode::open ? Mode::closed : Mode::open;
            return disjoint(p.a.node(), z, rho, m) || contained(p.b.node(), z, rho, other);
        } else {
            return false;
        }
    });
}

bool contained(const DomainNode& nd, std::span<const double> z, double rho, Mode m) {
    return visit_node(nd, [&](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SpaceP>) {
            return true;
        } else if constexpr (std::is_same_v<T, HalfSpaceP>) {
            return dot(p.normal, z) - rho >= p.offset;
        } else if constexpr (std::is_same_v<T, BallP>) {
            return dist(z, p.c) + rho <= p.r;
        } else if constexpr (std::is_same_v<T, RayP> || std::is_same_v<T, SegmentP>) {
            return false;
        } else if constexpr (std::is_same_v<T, UnionP>) {
            for (const auto& d : p.parts)
                if (contained(d.node(), z, rho, m)) return true;
            return false;
        } else if constexpr (std::is_same_v<T, IntersectP>) {
            for (const auto& d : p.parts)
                if (!contained(d.node(), z, rho, m)) return false;
            return true;
        } else if constexpr (std::is_same_v<T, MinusP>) {
            const Mode other = m == Mode::open ? Mode::closed : Mode::open;
            return contained(p.a.node(), z, rho, m) && disjoint(p.b.node(), z, rho, other);
        } else {
            return false;
        }
    });
}

double dist_lb(const DomainNode& nd, std::span<const double> z);

// Lower bound on the distance from z to the complement of the set.
double depth_lb(const DomainNode& nd, std::span<const double> z) {
    return visit_node(nd, [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SpaceP>) {
            return kInf;
        } else if constexpr (std::is_same_v<T, HalfSpaceP>) {
            return std::max(0.0, dot(p.normal, z) - p.offset);
        } else if constexpr (std::is_same_v<T, BallP>) {
            return std::max(0.0, p.r - dist(z, p.c));
        } else if constexpr (std::is_same_v<T, UnionP>) {
            double d = 0.0;
            for (const auto& q : p.parts) d = std::max(d, depth_lb(q.node(), z));
            return d;
        } else if constexpr (std::is_same_v<T, IntersectP>) {
            double d = kInf;
            for (const auto& q : p.parts) d = std::min(d, depth_lb(q.node(), z));
            return d;
        } else if constexpr (std::is_same_v<T, MinusP>) {
            return std::min(depth_lb(p.a.node(), z), dist_lb(p.b.node(), z));
        } else {
            return 0.0;
        }
    });
}

double dist_lb(const DomainNode& nd, std::span<const double> z) {
    return visit_node(nd, [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SpaceP>) {
            return 0.0;
        } else if constexpr (std::is_same_v<T, HalfSpaceP>) {
            return std::max(0.0, p.offset - dot(p.normal, z));
        } else if constexpr (std::is_same_v<T, BallP>) {
            return std::max(0.0, dist(z, p.c) - p.r);
        } else if constexpr (std::is_same_v<T, RayP> || std::is_same_v<T, SegmentP>) {
            return kInf;
        } else if constexpr (std::is_same_v<T, UnionP>) {
            double d = kInf;
            for (const auto& q : p.parts) d = std::min(d, dist_lb(q.node(), z));
            return d;
        } else if constexpr (std::is_same_v<T, IntersectP>) {
            double d = 0.0;
            for (const auto& q : p.parts) d = std::max(d, dist_lb(q.node(), z));
            return d;
        } else if constexpr (std::is_same_v<T, MinusP>) {
            return std::max(dist_lb(p.a.node(), z), depth_lb(p.b.node(), z));
        } else {
            return 0.0;
        }
    });
}

Box node_bbox(const DomainNode& nd) {
    const int n = nd.n;
    Box all{Vec(n, -kInf), Vec(n, kInf)};
    return visit_node(nd, [&](const auto& p) -> Box {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BallP>) {
            Box b{p.c, p.c};
            for (int i = 0; i < n; ++i) {
                b.lo[i] -= p.r;
                b.hi[i] += p.r;
            }
            return b;
        } else if constexpr (std::is_same_v<T, HalfSpaceP>) {
            // Axis-aligned half-spaces bound one coordinate.
            for (int i = 0; i < n; ++i)
                if (std::abs(std::abs(p.normal[i]) - 1.0) < 1e-15) {
                    if (p.normal[i] > 0) all.lo[i] = p.offset / p.normal[i];
                    else all.hi[i] = p.offset / p.normal[i];
                }
            return all;
        } else if constexpr (std::is_same_v<T, SegmentP>) {
            Box b{p.a, p.a};
            for (int i = 0; i < n; ++i) {
                b.lo[i] = std::min(p.a[i], p.b[i]);
                b.hi[i] = std::max(p.a[i], p.b[i]);
            }
            return b;
        } else if constexpr (std::is_same_v<T, UnionP>) {
            Box b{Vec(n, kInf), Vec(n, -kInf)};
            for (const auto& q : p.parts) {
                Box c = node_bbox(q.node());
                for (int i = 0; i < n; ++i) {
                    b.lo[i] = std::min(b.lo[i], c.lo[i]);
                    b.hi[i] = std::max(b.hi[i], c.hi[i]);
                }
            }
            return b;
        } else if constexpr (std::is_same_v<T, IntersectP>) {
            for (const auto& q : p.parts) {
                Box c = node_bbox(q.node());
                for (int i = 0; i < n; ++i) {
                    all.lo[i] = std::max(all.lo[i], c.lo[i]);
                    all.hi[i] = std::min(all.hi[i], c.hi[i]);
                }
            }
            return all;
        } else if constexpr (std::is_same_v<T, MinusP>) {
            return node_bbox(p.a.node());
        } else if constexpr (std::is_same_v<T, PullbackP>) {
            return Box{Vec(n, -p.radius), Vec(n, p.radius)};
        } else {
            return all;
        }
    });
}

int thin_dim(const DomainNode& nd, bool removed) {
    return visit_node(nd, [&](const auto& p) -> int {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RayP>) {
            return removed ? 1 : -1;
        } else if constexpr (std::is_same_v<T, SegmentP>) {
            return removed ? (dist(p.a, p.b) > 0.0 ? 1 : 0) : -1;
        } else if constexpr (std::is_same_v<T, UnionP> || std::is_same_v<T, IntersectP>) {
            int d = -1;
            for (const auto& q : p.parts) d = std::max(d, thin_dim(q.node(), removed));
            return d;
        } else if constexpr (std::is_same_v<T, MinusP>) {
            return std::max(thin_dim(p.a.node(), removed), thin_dim(p.b.node(), !removed));
        } else if constexpr (std::is_same_v<T, PullbackP>) {
            return thin_dim(p.inner.node(), removed);
        } else {
            return -1;
        }
    });
}

}  // namespace

bool Domain::contains(std::span<const double> x) const {
    require_same_dim(x.size(), dim(), "membership");
    return eval(*node_, x, Mode::open, 0.0);
}

bool Domain::contains_closure(std::span<const double> x) const {
    require_same_dim(x.size(), dim(), "membership");
    return eval(*node_, x, Mode::closed, 0.0);
}

bool Domain::contains_grid(std::span<const double> x, double tube) const {
    require_same_dim(x.size(), dim(), "membership");
    return eval(*node_, x, Mode::open, tube);
}

bool Domain::ball_disjoint(std::span<const double> z, double rho) const {
    require_same_dim(z.size(), dim(), "ball test");
    return disjoint(*node_, z, rho, Mode::open);
}

bool Domain::ball_contained(std::span<const double> z, double rho) const {
    require_same_dim(z.size(), dim(), "ball test");
    return contained(*node_, z, rho, Mode::open);
}

double Domain::dist_lower_bound(std::span<const double> z) const {
    require_same_dim(z.size(), dim(), "distance");
    return dist_lb(*node_, z);
}

Box Domain::bbox() const { return node_bbox(*node_); }

bool Domain::bounded() const { return bbox().finite(); }

bool Domain::probe_unbounded(double R) const {
    const int n = dim();
    const int m = n == 2 ? 3600 : 4000;
    for (int k = 0; k < m; ++k) {
        Vec x(n, 0.0);
        if (n == 2) {
            const double t = 2 * std::numbers::pi * (k + 0.5) / m;
            x = {R * std::cos(t), R * std::sin(t)};
        } else {
            // Fibonacci lattice on the sphere, remaining coordinates zero.
            const double z = 1.0 - 2.0 * (k + 0.5) / m;
            const double s = std::sqrt(1.0 - z * z);
            const double ph = k * std::numbers::pi * (3.0 - std::sqrt(5.0));
            x[0] = R * s * std::cos(ph);
            x[1] = R * s * std::sin(ph);
            x[2] = R * z;
        }
        if (contains(x)) return true;
    }
    return false;
}

int Domain::max_thin_dimension() const { return thin_dim(*node_, false); }

bool Domain::has_interior_complement() const {
    const int n = dim();
    const double step = n == 2 ? 1.0 : 4.0;
    const int m = static_cast<int>(128 / step);
    std::vector<int> idx(n, 0);
    Vec z(n);
    while (true) {
        for (int i = 0; i < n; ++i) z[i] = -64.0 + step * idx[i];
        if (ball_disjoint(z, 0.25)) return true;
        int k = 0;
        while (k < n && ++idx[k] > m) idx[k++] = 0;
        if (k == n) return false;
    }
}

namespace {
void write_vec(std::ostringstream& os, const Vec& v) {
    for (double c : v) os << ' ' << c;
}

void write_node(std::ostringstream& os, const DomainNode& nd) {
    visit_node(nd, [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SpaceP>) {
            os << "space\n";
        } else if constexpr (std::is_same_v<T, HalfSpaceP>) {
            os << "halfspace";
            write_vec(os, p.normal);
            os << ' ' << p.offset << '\n';
        } else if constexpr (std::is_same_v<T, BallP>) {
            os << "ball";
            write_vec(os, p.c);
            os << ' ' << p.r << '\n';
        } else if constexpr (std::is_same_v<T, RayP>) {
            os << "ray";
            write_vec(os, p.base);
            write_vec(os, p.dir);
            os << ' ' << p.t0 << '\n';
        } else if constexpr (std::is_same_v<T, SegmentP>) {
            os << "segment";
            write_vec(os, p.a);
            write_vec(os, p.b);
            os << '\n';
        } else if constexpr (std::is_same_v<T, UnionP> || std::is_same_v<T, IntersectP>) {
            os << (std::is_same_v<T, UnionP> ? "union\n" : "intersect\n");
            for (const auto& q : p.parts) write_node(os, q.node());
            os << "end\n";
        } else if constexpr (std::is_same_v<T, MinusP>) {
            os << "minus\n";
            write_node(os, p.a.node());
            write_node(os, p.b.node());
            os << "end\n";
        } else {
            os << "# inverted image about";
            write_vec(os, p.c);
            os << "\ninvert";
            write_vec(os, p.c);
            os << '\n';
            write_node(os, p.inner.node());
            os << "end\n";
        }
    });
}
}  // namespace

std::string Domain::to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "dimension " << dim() << '\n';
    if (node_->feature) os << "feature " << *node_->feature << '\n';
    write_node(os, *node_);
    return os.str();
}

namespace {

Domain invert_node(const Domain& d, const DomainNode& nd, const Vec& c) {
    const int n = nd.n;
    return visit_node(nd, [&](const auto& p) -> Domain {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SpaceP>) {
            return Domain::minus(Domain::space(n), Domain::segment(Vec(n, 0.0), Vec(n, 0.0)));
        } else if constexpr (std::is_same_v<T, HalfSpaceP>) {
            const double g = p.offset - dot(p.normal, c);
            if (g == 0.0) return Domain::halfspace(p.normal, 0.0);
            Vec center(p.normal);
            for (auto& v : center) v /= 2.0 * g;
            const Domain b = Domain::ball(center, 1.0 / (2.0 * std::abs(g)));
            return g > 0.0 ? b : Domain::minus(Domain::space(n), b);
        } else if constexpr (std::is_same_v<T, BallP>) {
            const Vec q = sub(p.c, c);
            const double D = dot(q, q) - p.r * p.r;
            if (D == 0.0) return Domain::halfspace(q, 0.5);
            Vec center(q);
            for (auto& v : center) v /= D;
            const Domain b = Domain::ball(center, p.r / std::abs(D));
            return D > 0.0 ? b : Domain::minus(Domain::space(n), b);
        } else if constexpr (std::is_same_v<T, UnionP> || std::is_same_v<T, IntersectP>) {
            std::vector<Domain> kids;
            for (const auto& q : p.parts) kids.push_back(invert_node(q, q.node(), c));
            return std::is_same_v<T, UnionP> ? Domain::unite(kids) : Domain::intersect(kids);
        } else if constexpr (std::is_same_v<T, MinusP>) {
            return Domain::minus(invert_node(p.a, p.a.node(), c), invert_node(p.b, p.b.node(), c));
        } else {
            return Domain::pullback(d, c, kInf);
        }
    });
}

}  // namespace

Domain Domain::inverted(const Vec& c) const {
    require_same_dim(c.size(), dim(), "inversion center");
    return invert_node(*this, *node_, c);
}

namespace examples {

Domain half_space(int n, double offset) {
    Vec e(n, 0.0);
    e[n - 1] = 1.0;
    return Domain::halfspace(e, offset);
}

Domain exterior_ball(int n, double r) {
    return Domain::minus(Domain::space(n), Domain::ball(Vec(n, 0.0), r)).with_feature_size(r);
}

Domain slit_plane() {
    return Domain::minus(Domain::space(2), Domain::segment({-1, 0}, {1, 0})).with_feature_size(0.5);
}

Domain punctured_plane() {
    return Domain::minus(Domain::space(2), Domain::segment({0, 0}, {0, 0})).with_feature_size(0.5);
}

namespace {
Domain quadrant() { return Domain::intersect({Domain::halfspace({1, 0}, 0), Domain::halfspace({0, 1}, 0)}); }

Domain open_box(double x0, double x1, double y0, double y1) {
    return Domain::intersect({Domain::halfspace({1, 0}, x0), Domain::halfspace({-1, 0}, -x1),
                              Domain::halfspace({0, 1}, y0), Domain::halfspace({0, -1}, -y1)});
}
}  // namespace

Domain staircase(int depth) {
    std::vector<Domain> parts{open_box(0, 1, 0, 1)};
    std::vector<Domain> walls;
    for (int j = 1; j <= depth; ++j) {
        const double x = std::ldexp(1.0, -j);
        parts.push_back(open_box(x, 2 * x, 0, std::ldexp(1.0, j)));
        // Neighbouring towers meet along x = 2^-j above the unit square; that line is
        // not in the union, and an explicit wall makes the gap visible to grids.
        walls.push_back(Domain::segment({x, 1}, {x, std::ldexp(1.0, j)}));
    }
    return Domain::minus(Domain::unite(std::move(parts)), Domain::unite(std::move(walls)))
        .with_feature_size(std::ldexp(1.0, -depth));
}

Domain fingers(int depth) {
    std::vector<Domain> rays;
    for (int j = 0; j <= depth; ++j) {
        const double s = std::ldexp(1.0, j);
        rays.push_back(Domain::ray({0, 0}, {1, s}, std::hypot(1.0, s)));
    }
    return Domain::minus(quadrant(), Domain::unite(std::move(rays))).with_feature_size(0.5);
}

Domain fingers_prime(int depth) {
    std::vector<Domain> rays;
    for (int j = 0; j <= depth; ++j) {
        const double s = std::ldexp(1.0, j);
        rays.push_back(Domain::ray({0, 0}, {1, s}, std::hypot(1.0 / s, 1.0)));
    }
    // The rays accumulate at the x_2 axis; the declared scale is that of the first fingers.
    return Domain::minus(quadrant(), Domain::unite(std::move(rays))).with_feature_size(0.125);
}

Domain uncountable(int depth) {
    std::vector<Domain> rays;
    const long m = 1L << depth;
    for (long k = 1; k < m; ++k) {
        int tz = 0;
        while (((k >> tz) & 1L) == 0) ++tz;
        const double alpha = static_cast<double>(k) / m;
        const double t0 = depth - tz;
        rays.push_back(Domain::ray({0, 0}, {std::cos(alpha * std::numbers::pi), std::sin(alpha * std::numbers::pi)}, t0));
    }
    return Domain::minus(half_space(2, 0.0), Domain::unite(std::move(rays)))
        .with_feature_size(std::numbers::pi * std::ldexp(1.0, -depth));
}

Domain by_name(const std::string& name, int n) {
    if (name == "half-space" || name == "half-plane") return half_space(n);
    if (name == "exterior-ball") return exterior_ball(n);
    if (n != 2) throw InvalidInput("example '" + name + "' is planar");
    if (name == "slit") return slit_plane();
    if (name == "punctured-plane") return punctured_plane();
    if (name == "staircase") return staircase(6);
    if (name == "fingers") return fingers(10);
    if (name == "fingers-prime") return fingers_prime(10);
    if (name == "uncountable") return uncountable(6);
    throw InvalidInput("unknown example domain '" + name + "'");
}

}  // namespace examples

}  // namespace sph
