#include "sph/multigrid.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <cmath>
#include <stdexcept>

namespace sph {

std::vector<std::array<int, 3>> forward_difference_deltas(int n) {
    if (n == 2) return {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {-1, 1, 0}};
    return {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, 1, 0}, {-1, 0, 1}, {0, -1, 1}};
}

std::vector<std::array<int, 3>> box_deltas(int n) {
    std::vector<std::array<int, 3>> d{{0, 0, 0}};
    const int zr = n == 3 ? 1 : 0;
    for (int z = -zr; z <= zr; ++z)
        for (int y = -1; y <= 1; ++y)
            for (int x = -1; x <= 1; ++x) {
                // positive lexicographic order from the most significant axis
                const bool positive = z > 0 || (z == 0 && (y > 0 || (y == 0 && x > 0)));
                if (positive) d.push_back({x, y, z});
            }
    return d;
}

void StencilOperator::reset(const GridGeometry& g, std::vector<std::array<int, 3>> half_deltas,
                            std::vector<char> unknowns) {
    geom = g;
    deltas = std::move(half_deltas);
    offsets.clear();
    for (const auto& d : deltas) offsets.push_back(d[0] + geom.dims[0] * (d[1] + geom.dims[1] * d[2]));
    unknown = std::move(unknowns);
    coef.assign(static_cast<std::size_t>(geom.size()) * deltas.size(), 0.0);
    index_unknowns();
}

void StencilOperator::index_unknowns() {
    active.clear();
    for (long i = 0; i < size(); ++i)
        if (unknown[i]) active.push_back(i);
}

int StencilOperator::slot_of(long offset) const {
    for (int s = 0; s < slots(); ++s)
        if (offsets[s] == offset) return s;
    return -1;
}

void StencilOperator::add(long i, long j, double a) {
    if (i > j) std::swap(i, j);
    const int s = slot_of(j - i);
    if (s < 0) throw std::logic_error("stencil offset outside the pattern");
    coef[static_cast<std::size_t>(i) * offsets.size() + s] += a;
}

void StencilOperator::apply(const std::vector<double>& x, std::vector<double>& y) const {
    const int K = slots();
    y.assign(size(), 0.0);
    const long* off = offsets.data();
    for (long i : active) {
        const double* c = &coef[static_cast<std::size_t>(i) * K];
        const double xi = x[i];
        double yi = c[0] * xi;
        for (int s = 1; s < K; ++s) {
            const long j = i + off[s];
            yi += c[s] * x[j];
            y[j] += c[s] * xi;
        }
        y[i] += yi;
    }
}

void StencilOperator::gauss_seidel(std::vector<double>& x, const std::vector<double>& b, bool forward) const {
    const int K = slots();
    const long* off = offsets.data();
    const double* C = coef.data();
    auto relax = [&](long i) {
        const double* c = C + static_cast<std::size_t>(i) * K;
        if (!(c[0] > 0.0)) return;
        double r = b[i];
        for (int s = 1; s < K; ++s) {
            const long o = off[s];
            r -= c[s] * x[i + o] + C[static_cast<std::size_t>(i - o) * K + s] * x[i - o];
        }
        x[i] = r / c[0];
    };
    const long m = static_cast<long>(active.size());
    if (forward)
        for (long t = 0; t < m; ++t) relax(active[t]);
    else
        for (long t = m - 1; t >= 0; --t) relax(active[t]);
}

void StencilOperator::sgs(std::vector<double>& x, const std::vector<double>& b, int sweeps) const {
    for (int k = 0; k < sweeps; ++k) {
        gauss_seidel(x, b, true);
        gauss_seidel(x, b, false);
    }
}

namespace {

struct Parents {
    int count = 0;
    long idx[8];
    double w[8];
    int M[8][3];
};

// Coarse node M <-> fine node 2(M - 1); odd fine nodes interpolate their two neighbours.
class Coarsening {
public:
    explicit Coarsening(const GridGeometry& fine) : fine_(fine), coarse_(fine) {
        coarse_.h = 2.0 * fine.h;
        for (int k = 0; k < 3; ++k) {
            if (k < fine.n) {
                coarse_.dims[k] = fine.dims[k] / 2 + 3;
                coarse_.origin[k] = fine.origin[k] - 2.0 * fine.h;
            }
            lo_[k].resize(fine.dims[k]);
            hi_[k].resize(fine.dims[k]);
            for (long m = 0; m < fine.dims[k]; ++m) {
                lo_[k][m] = k < fine.n ? m / 2 + 1 : 0;
                hi_[k][m] = k < fine.n ? (m + 1) / 2 + 1 : 0;
            }
        }
    }
    const GridGeometry& fine() const { return fine_; }
    const GridGeometry& coarse() const { return coarse_; }

    void parents(long m0, long m1, long m2, Parents& P) const {
        const long m[3] = {m0, m1, m2};
        int cnt[3];
        long opt[3][2];
        double w[3];
        for (int k = 0; k < 3; ++k) {
            opt[k][0] = lo_[k][m[k]];
            opt[k][1] = hi_[k][m[k]];
            cnt[k] = opt[k][0] == opt[k][1] ? 1 : 2;
            w[k] = cnt[k] == 1 ? 1.0 : 0.5;
        }
        const long D0 = coarse_.dims[0], D01 = coarse_.dims[0] * coarse_.dims[1];
        const double wall = w[0] * w[1] * w[2];
        P.count = 0;
        for (int c = 0; c < cnt[2]; ++c)
            for (int b = 0; b < cnt[1]; ++b)
                for (int a = 0; a < cnt[0]; ++a) {
                    const int t = P.count++;
                    P.M[t][0] = static_cast<int>(opt[0][a]);
                    P.M[t][1] = static_cast<int>(opt[1][b]);
                    P.M[t][2] = static_cast<int>(opt[2][c]);
                    P.idx[t] = opt[0][a] + D0 * opt[1][b] + D01 * opt[2][c];
                    P.w[t] = wall;
                }
    }

    /// Calls f(i, m0, m1, m2, parents) for every fine node with unknown[i].
    template <class F>
    void for_each_unknown(const std::vector<char>& unknown, F&& f) const {
        Parents P;
        const auto& d = fine_.dims;
        for (long z = 0; z < d[2]; ++z)
            for (long y = 0; y < d[1]; ++y) {
                long i = d[0] * (y + d[1] * z);
                for (long x = 0; x < d[0]; ++x, ++i) {
                    if (!unknown[i]) continue;
                    parents(x, y, z, P);
                    f(i, x, y, z, P);
                }
            }
    }

private:
    GridGeometry fine_;
    GridGeometry coarse_;
    std::array<std::vector<long>, 3> lo_, hi_;
};

StencilOperator galerkin(const StencilOperator& F, const Coarsening& C) {
    const GridGeometry& cg = C.coarse();
    std::vector<char> unk(cg.size(), 0);
    C.for_each_unknown(F.unknown, [&](long, long, long, long, const Parents& P) {
        for (int a = 0; a < P.count; ++a) unk[P.idx[a]] = 1;
    });
    StencilOperator A;
    A.reset(cg, box_deltas(cg.n), std::move(unk));
    int table[27];
    for (int& t : table) t = -1;
    for (int s = 0; s < A.slots(); ++s) {
        const auto& d = A.deltas[s];
        table[(d[2] + 1) * 9 + (d[1] + 1) * 3 + (d[0] + 1)] = s;
    }
    const int K = F.slots();
    const int KC = A.slots();
    double* AC = A.coef.data();
    auto accumulate = [&](const Parents& PI, const Parents& PJ, double a) {
        for (int x = 0; x < PI.count; ++x) {
            const long I = PI.idx[x];
            const double wa = PI.w[x] * a;
            for (int y = 0; y < PJ.count; ++y) {
                if (PJ.idx[y] < I) continue;
                const int key = (PJ.M[y][2] - PI.M[x][2] + 1) * 9 + (PJ.M[y][1] - PI.M[x][1] + 1) * 3 +
                                (PJ.M[y][0] - PI.M[x][0] + 1);
                AC[static_cast<std::size_t>(I) * KC + table[key]] += wa * PJ.w[y];
            }
        }
    };
    Parents Q;
    C.for_each_unknown(F.unknown, [&](long i, long x, long y, long z, const Parents& P) {
        const double* c = &F.coef[static_cast<std::size_t>(i) * K];
        accumulate(P, P, c[0]);
        for (int s = 1; s < K; ++s) {
            if (c[s] == 0.0) continue;
            const auto& d = F.deltas[s];
            C.parents(x + d[0], y + d[1], z + d[2], Q);
            accumulate(P, Q, c[s]);
            accumulate(Q, P, c[s]);
        }
    });
    for (long I = 0; I < cg.size(); ++I)
        if (A.unknown[I] && !(AC[static_cast<std::size_t>(I) * KC] > 0.0)) A.unknown[I] = 0;
    A.index_unknowns();
    return A;
}

}  // namespace

struct Multigrid::Impl {
    const StencilOperator* fine = nullptr;
    std::vector<StencilOperator> coarse;
    std::vector<Coarsening> maps;  // maps[l]: level l -> l + 1
    mutable std::vector<std::vector<double>> x, b, r;  // level 0 uses rhs0/out0 instead of b[0]/x[0]
    mutable const std::vector<double>* rhs0 = nullptr;
    mutable std::vector<double>* out0 = nullptr;
    std::vector<long> direct_index;
    long direct_size = 0;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    bool direct_ok = false;

    const StencilOperator& op(int l) const { return l == 0 ? *fine : coarse[l - 1]; }
    int depth() const { return 1 + static_cast<int>(coarse.size()); }

    void factor_coarsest() {
        const StencilOperator& A = op(depth() - 1);
        direct_index.assign(A.size(), -1);
        direct_size = 0;
        for (long i : A.active) direct_index[i] = direct_size++;
        std::vector<Eigen::Triplet<double>> t;
        const int K = A.slots();
        for (long i : A.active) {
            for (int s = 0; s < K; ++s) {
                const double c = A.coef[static_cast<std::size_t>(i) * K + s];
                if (c == 0.0) continue;
                const long j = i + A.offsets[s];
                if (direct_index[j] < 0) continue;
                t.emplace_back(direct_index[i], direct_index[j], c);
                if (s > 0) t.emplace_back(direct_index[j], direct_index[i], c);
            }
        }
        direct_ok = false;
        if (direct_size == 0) return;
        Eigen::SparseMatrix<double> M(direct_size, direct_size);
        M.setFromTriplets(t.begin(), t.end());
        ldlt.compute(M);
        direct_ok = ldlt.info() == Eigen::Success;
    }

    void cycle(int l) const {
        const StencilOperator& A = op(l);
        std::vector<double>& xl = l == 0 ? *out0 : x[l];
        const std::vector<double>& bl = l == 0 ? *rhs0 : b[l];
        std::fill(xl.begin(), xl.end(), 0.0);
        if (l == depth() - 1) {
            if (direct_ok) {
                Eigen::VectorXd rhs(direct_size);
                for (long i : A.active) rhs[direct_index[i]] = bl[i];
                const Eigen::VectorXd sol = ldlt.solve(rhs);
                for (long i : A.active) xl[i] = sol[direct_index[i]];
            } else {
                A.sgs(xl, bl, 40);
            }
            return;
        }
        A.gauss_seidel(xl, bl, true);
        A.apply(xl, r[l]);
        for (long i : A.active) r[l][i] = bl[i] - r[l][i];
        const Coarsening& C = maps[l];
        std::vector<double>& bc = b[l + 1];
        std::fill(bc.begin(), bc.end(), 0.0);
        const std::vector<double>& rl = r[l];
        C.for_each_unknown(A.unknown, [&](long i, long, long, long, const Parents& P) {
            for (int a = 0; a < P.count; ++a) bc[P.idx[a]] += P.w[a] * rl[i];
        });
        const StencilOperator& Ac = op(l + 1);
        for (long I = 0; I < Ac.size(); ++I)
            if (!Ac.unknown[I]) bc[I] = 0.0;
        cycle(l + 1);
        const std::vector<double>& xc = x[l + 1];
        C.for_each_unknown(A.unknown, [&](long i, long, long, long, const Parents& P) {
            double e = 0.0;
            for (int a = 0; a < P.count; ++a) e += P.w[a] * xc[P.idx[a]];
            xl[i] += e;
        });
        A.gauss_seidel(xl, bl, false);
    }
};

Multigrid::Multigrid() : impl_(std::make_unique<Impl>()) {}
Multigrid::~Multigrid() = default;
Multigrid::Multigrid(Multigrid&&) noexcept = default;
Multigrid& Multigrid::operator=(Multigrid&&) noexcept = default;

void Multigrid::build(const StencilOperator& fine, long coarsest_unknowns) {
    impl_ = std::make_unique<Impl>();
    Impl& m = *impl_;
    m.fine = &fine;
    while (true) {
        const StencilOperator& cur = m.op(m.depth() - 1);
        if (cur.unknown_count() <= coarsest_unknowns || m.depth() >= 16) break;
        bool small = false;
        for (int k = 0; k < cur.geom.n; ++k) small = small || cur.geom.dims[k] < 7;
        if (small) break;
        m.maps.emplace_back(cur.geom);
        StencilOperator next = galerkin(cur, m.maps.back());
        m.coarse.push_back(std::move(next));
    }
    const int L = m.depth();
    m.x.resize(L);
    m.b.resize(L);
    m.r.resize(L);
    for (int l = 0; l < L; ++l) {
        if (l > 0) {
            m.x[l].assign(m.op(l).size(), 0.0);
            m.b[l].assign(m.op(l).size(), 0.0);
        }
        if (l + 1 < L) m.r[l].assign(m.op(l).size(), 0.0);
    }
    m.factor_coarsest();
}

int Multigrid::levels() const { return impl_->fine ? impl_->depth() : 0; }
bool Multigrid::built() const { return impl_->fine != nullptr; }

void Multigrid::apply(const std::vector<double>& rhs, std::vector<double>& z) const {
    const Impl& m = *impl_;
    if (!m.fine) throw std::logic_error("multigrid not built");
    z.resize(m.fine->size());
    m.rhs0 = &rhs;
    m.out0 = &z;
    m.cycle(0);
}

PcgResult pcg(const StencilOperator& A, const Multigrid& M, const std::vector<double>& b, std::vector<double>& x,
              double rtol, int max_iterations) {
    const long N = A.size();
    const std::vector<long>& act = A.active;
    auto dotp = [&](const std::vector<double>& u, const std::vector<double>& v) {
        double s = 0.0;
        for (long i : act) s += u[i] * v[i];
        return s;
    };
    if (static_cast<long>(x.size()) != N) x.assign(N, 0.0);
    {
        std::size_t t = 0;
        for (long i = 0; i < N; ++i) {
            if (t < act.size() && act[t] == i) {
                ++t;
                continue;
            }
            x[i] = 0.0;
        }
    }
    std::vector<double> r(N, 0.0), z, q;
    A.apply(x, q);
    for (long i : act) r[i] = b[i] - q[i];
    const double bnorm = std::sqrt(dotp(b, b));
    PcgResult out;
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        out.converged = true;
        return out;
    }
    double rnorm = std::sqrt(dotp(r, r));
    if (rnorm <= rtol * bnorm) {
        out.relative_residual = rnorm / bnorm;
        out.converged = true;
        return out;
    }
    M.apply(r, z);
    std::vector<double> d(N, 0.0);
    for (long i : act) d[i] = z[i];
    double rz = dotp(r, z);
    for (int it = 1; it <= max_iterations; ++it) {
        A.apply(d, q);
        const double dq = dotp(d, q);
        if (!(dq > 0.0)) break;
        const double alpha = rz / dq;
        for (long i : act) {
            x[i] += alpha * d[i];
            r[i] -= alpha * q[i];
        }
        out.iterations = it;
        rnorm = std::sqrt(dotp(r, r));
        if (rnorm <= rtol * bnorm) {
            out.converged = true;
            break;
        }
        M.apply(r, z);
        const double rz_new = dotp(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (long i : act) d[i] = z[i] + beta * d[i];
    }
    out.relative_residual = rnorm / bnorm;
    return out;
}

}  // namespace sph
