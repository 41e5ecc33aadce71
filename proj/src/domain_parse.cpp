#include <charconv>
#include <fstream>
#include <sstream>

#include "sph/domain.hpp"

namespace sph {

namespace {

double parse_number(const std::string& tok, int line) {
    double v = 0.0;
    const char* b = tok.data();
    const char* e = b + tok.size();
    if (!tok.empty() && *b == '+') ++b;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e || !std::isfinite(v))
        throw InvalidInput("line " + std::to_string(line) + ": bad number '" + tok + "'");
    return v;
}

struct Line {
    int number;
    std::string keyword;
    std::vector<double> args;
};

class Parser {
public:
    explicit Parser(std::vector<Line> lines) : lines_(std::move(lines)) {}

    Domain parse_all() {
        std::vector<Domain> top;
        while (pos_ < lines_.size()) {
            const Line& l = lines_[pos_];
            if (l.keyword == "dimension") {
                expect_args(l, 1);
                set_dim(static_cast<int>(l.args[0]), l.number);
                ++pos_;
            } else if (l.keyword == "feature") {
                expect_args(l, 1);
                feature_ = l.args[0];
                ++pos_;
            } else {
                top.push_back(parse_item());
            }
        }
        if (top.empty()) throw InvalidInput("domain file defines no set");
        Domain d = top.size() == 1 ? top[0] : Domain::unite(top);
        return feature_ ? d.with_feature_size(*feature_) : d;
    }

private:
    void expect_args(const Line& l, std::size_t k) {
        if (l.args.size() != k)
            throw InvalidInput("line " + std::to_string(l.number) + ": '" + l.keyword + "' expects " +
                               std::to_string(k) + " numbers, got " + std::to_string(l.args.size()));
    }

    void set_dim(int n, int line) {
        if (n < 2) throw InvalidInput("line " + std::to_string(line) + ": dimension must be >= 2");
        if (n_ && *n_ != n)
            throw DimensionMismatch("line " + std::to_string(line) + ": dimension " + std::to_string(n) +
                                    " conflicts with " + std::to_string(*n_));
        n_ = n;
    }

    int dim_from(const Line& l, int mult, int extra) {
        const int k = static_cast<int>(l.args.size()) - extra;
        if (k <= 0 || k % mult != 0)
            throw InvalidInput("line " + std::to_string(l.number) + ": wrong number count for '" + l.keyword + "'");
        set_dim(k / mult, l.number);
        return *n_;
    }

    std::vector<Domain> parse_block(const Line& head) {
        std::vector<Domain> kids;
        while (true) {
            if (pos_ >= lines_.size())
                throw InvalidInput("line " + std::to_string(head.number) + ": '" + head.keyword + "' block lacks 'end'");
            if (lines_[pos_].keyword == "end") {
                ++pos_;
                return kids;
            }
            kids.push_back(parse_item());
        }
    }

    Domain parse_item() {
        const Line l = lines_[pos_++];
        const auto& a = l.args;
        if (l.keyword == "space") {
            expect_args(l, 0);
            if (!n_) throw InvalidInput("line " + std::to_string(l.number) + ": 'space' needs a prior dimension");
            return Domain::space(*n_);
        }
        if (l.keyword == "halfspace") {
            const int n = dim_from(l, 1, 1);
            return Domain::halfspace(Vec(a.begin(), a.begin() + n), a[n]);
        }
        if (l.keyword == "ball") {
            const int n = dim_from(l, 1, 1);
            return Domain::ball(Vec(a.begin(), a.begin() + n), a[n]);
        }
        if (l.keyword == "ray") {
            const int n = dim_from(l, 2, 1);
            return Domain::ray(Vec(a.begin(), a.begin() + n), Vec(a.begin() + n, a.begin() + 2 * n), a[2 * n]);
        }
        if (l.keyword == "segment") {
            const int n = dim_from(l, 2, 0);
            return Domain::segment(Vec(a.begin(), a.begin() + n), Vec(a.begin() + n, a.end()));
        }
        if (l.keyword == "union" || l.keyword == "intersect") {
            expect_args(l, 0);
            auto kids = parse_block(l);
            return l.keyword == "union" ? Domain::unite(kids) : Domain::intersect(kids);
        }
        if (l.keyword == "minus") {
            expect_args(l, 0);
            auto kids = parse_block(l);
            if (kids.size() < 2)
                throw InvalidInput("line " + std::to_string(l.number) + ": 'minus' needs at least two operands");
            Domain rest = kids.size() == 2 ? kids[1] : Domain::unite({kids.begin() + 1, kids.end()});
            return Domain::minus(kids[0], rest);
        }
        if (l.keyword == "invert") {
            const int n = dim_from(l, 1, 0);
            auto kids = parse_block(l);
            if (kids.size() != 1)
                throw InvalidInput("line " + std::to_string(l.number) + ": 'invert' takes one operand");
            const Vec c(a.begin(), a.begin() + n);
            const double d = kids[0].dist_lower_bound(c);
            if (!(d > 0.0))
                throw InvalidInput("line " + std::to_string(l.number) + ": inversion center touches the domain");
            return Domain::pullback(kids[0], c, std::isfinite(d) ? 1.0 / d : 0.0);
        }
        throw InvalidInput("line " + std::to_string(l.number) + ": unknown keyword '" + l.keyword + "'");
    }

    std::vector<Line> lines_;
    std::size_t pos_ = 0;
    std::optional<int> n_;
    std::optional<double> feature_;
};

}  // namespace

Domain parse_domain(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::vector<Line> lines;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        std::istringstream ls(raw);
        Line l{number, {}, {}};
        if (!(ls >> l.keyword)) continue;
        std::string tok;
        while (ls >> tok) l.args.push_back(parse_number(tok, number));
        lines.push_back(std::move(l));
    }
    return Parser(std::move(lines)).parse_all();
}

Domain load_domain(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidInput("cannot open domain file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_domain(ss.str());
}

}  // namespace sph
