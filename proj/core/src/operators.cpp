#include "fracsparse/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "fracsparse/numerics.hpp"

namespace fracsparse {

FracKernel::FracKernel(Box box, int64_t cells_per_side, double alpha)
    : box_(box), n_side_(cells_per_side), alpha_(alpha) {
    int n = box_.dim;
    if (!(alpha > 0.0 && alpha < static_cast<double>(n)))
        throw std::invalid_argument("FracKernel: alpha must lie in (0, n)");
    double h = box_.side / static_cast<double>(n_side_);
    if (n == 1) {
        table_.resize(static_cast<size_t>(n_side_));
        table_[0] = 2.0 * std::pow(h / 2.0, alpha) / alpha;
        if (n_side_ > 1) {
            double s = 0.0;
            for (int g = 0; g < 4; ++g) {
                double y = h + (h / 2.0) * kGauss4X[g];
                s += kGauss4W[g] * (h / 2.0) * std::pow(std::abs(y), alpha - 1.0);
            }
            table_[1] = s;
        }
        for (int64_t d = 2; d < n_side_; ++d)
            table_[static_cast<size_t>(d)] = std::pow(static_cast<double>(d) * h, alpha - 1.0) * h;
    } else {
        if (n_side_ > 256)
            throw std::invalid_argument("FracKernel: 2-d kernel limited to cells_per_side <= 256");
        table_.resize(static_cast<size_t>(n_side_ * n_side_));
        auto at = [&](int64_t d0, int64_t d1) -> double& {
            return table_[static_cast<size_t>(d0 * n_side_ + d1)];
        };
        // self cell: equal-area-disk approximation, rho = h / sqrt(pi)
        double rho = h / std::sqrt(M_PI);
        at(0, 0) = 2.0 * M_PI * std::pow(rho, alpha) / alpha;
        for (int64_t d0 = 0; d0 < n_side_; ++d0)
            for (int64_t d1 = 0; d1 < n_side_; ++d1) {
                if (d0 == 0 && d1 == 0) continue;
                if (d0 <= 1 && d1 <= 1) {
                    // nearest neighbours: tensor Gauss-4 over the source cell
                    double s = 0.0;
                    for (int g0 = 0; g0 < 4; ++g0)
                        for (int g1 = 0; g1 < 4; ++g1) {
                            double y0 = static_cast<double>(d0) * h + (h / 2.0) * kGauss4X[g0];
                            double y1 = static_cast<double>(d1) * h + (h / 2.0) * kGauss4X[g1];
                            double r = std::hypot(y0, y1);
                            s += kGauss4W[g0] * kGauss4W[g1] * (h / 2.0) * (h / 2.0) *
                                 std::pow(r, alpha - 2.0);
                        }
                    at(d0, d1) = s;
                } else {
                    double r = std::hypot(static_cast<double>(d0), static_cast<double>(d1)) * h;
                    at(d0, d1) = std::pow(r, alpha - 2.0) * h * h;
                }
            }
    }
}

double FracKernel::weight(int64_t d0, int64_t d1) const {
    d0 = std::abs(d0);
    d1 = std::abs(d1);
    if (box_.dim == 1) return table_[static_cast<size_t>(d0)];
    return table_[static_cast<size_t>(d0 * n_side_ + d1)];
}

GridFunction FracKernel::apply(const GridFunction& f) const {
    CellRect all;
    all.lo = {0, 0};
    all.hi = {n_side_, box_.dim == 2 ? n_side_ : 1};
    if (box_.dim == 1) all.hi = {n_side_, 1};
    GridFunction out(box_, n_side_);
    for (int64_t i = 0; i < out.size(); ++i) out[i] = eval_cell(f, all, i);
    return out;
}

double FracKernel::eval_cell(const GridFunction& f, const CellRect& source, int64_t target) const {
    double s = 0.0;
    if (box_.dim == 1) {
        for (int64_t j = std::max<int64_t>(source.lo[0], 0);
             j < std::min<int64_t>(source.hi[0], n_side_); ++j)
            s += table_[static_cast<size_t>(std::abs(j - target))] * f[j];
    } else {
        int64_t t0 = target / n_side_, t1 = target % n_side_;
        for (int64_t j0 = std::max<int64_t>(source.lo[0], 0);
             j0 < std::min<int64_t>(source.hi[0], n_side_); ++j0)
            for (int64_t j1 = std::max<int64_t>(source.lo[1], 0);
                 j1 < std::min<int64_t>(source.hi[1], n_side_); ++j1)
                s += weight(j0 - t0, j1 - t1) * f[j0 * n_side_ + j1];
    }
    return s;
}

std::vector<double> FracKernel::eval_on(const GridFunction& f, const CellRect& source,
                                        const CellRect& targets) const {
    std::vector<double> out;
    if (box_.dim == 1) {
        for (int64_t i = std::max<int64_t>(targets.lo[0], 0);
             i < std::min<int64_t>(targets.hi[0], n_side_); ++i)
            out.push_back(eval_cell(f, source, i));
    } else {
        for (int64_t i0 = std::max<int64_t>(targets.lo[0], 0);
             i0 < std::min<int64_t>(targets.hi[0], n_side_); ++i0)
            for (int64_t i1 = std::max<int64_t>(targets.lo[1], 0);
                 i1 < std::min<int64_t>(targets.hi[1], n_side_); ++i1)
                out.push_back(eval_cell(f, source, i0 * n_side_ + i1));
    }
    return out;
}

std::vector<double> FracKernel::dense_matrix() const {
    int64_t total = box_.dim == 1 ? n_side_ : n_side_ * n_side_;
    if (total > 512) throw std::invalid_argument("dense_matrix: limited to 512 cells");
    std::vector<double> mat(static_cast<size_t>(total * total));
    for (int64_t i = 0; i < total; ++i)
        for (int64_t j = 0; j < total; ++j) {
            int64_t d0, d1 = 0;
            if (box_.dim == 1) {
                d0 = j - i;
            } else {
                d0 = j / n_side_ - i / n_side_;
                d1 = j % n_side_ - i % n_side_;
            }
            mat[static_cast<size_t>(i * total + j)] = weight(d0, d1);
        }
    return mat;
}

double FracKernel::point_eval(const GridFunction& f, double x) const {
    if (box_.dim != 1) throw std::invalid_argument("point_eval: 1-d only");
    double h = box_.side / static_cast<double>(n_side_);
    double near = std::max(box_.side / 32.0, 2.0 * h);
    double s = 0.0;
    for (int64_t j = 0; j < n_side_; ++j) {
        double mid = box_.lo[0] + (static_cast<double>(j) + 0.5) * h;
        double d = std::abs(mid - x);
        if (d <= near) {
            double a = box_.lo[0] + static_cast<double>(j) * h;
            auto prim = [&](double y) {
                double t = y - x;
                if (t == 0.0) return 0.0;
                double sign = t > 0 ? 1.0 : -1.0;
                return sign * std::pow(std::abs(t), alpha_) / alpha_;
            };
            s += (prim(a + h) - prim(a)) * f[j];
        } else {
            s += std::pow(d, alpha_ - 1.0) * h * f[j];
        }
    }
    return s;
}

GridFunction frac_integral(const GridFunction& f, double alpha) {
    FracKernel kernel(f.box(), f.cells_per_side(), alpha);
    return kernel.apply(f);
}

GridFunction frac_maximal(const GridFunction& f, double alpha, const LatticeSystem& sys,
                          const CubeFamily& family) {
    int n = sys.dim();
    if (!(alpha >= 0.0 && alpha < static_cast<double>(n)))
        throw std::invalid_argument("frac_maximal: alpha must lie in [0, n)");
    double hn = f.cell_volume();
    // prefix sums of |f|
    GridFunction af = f;
    for (int64_t i = 0; i < af.size(); ++i) af[i] = std::abs(af[i]);
    std::vector<double> pref;
    int64_t N = sys.cells_per_side();
    if (n == 1) {
        pref.assign(static_cast<size_t>(N + 1), 0.0);
        for (int64_t i = 0; i < N; ++i) pref[i + 1] = pref[i] + af[i];
    } else {
        pref.assign(static_cast<size_t>((N + 1) * (N + 1)), 0.0);
        for (int64_t i = 0; i < N; ++i)
            for (int64_t l = 0; l < N; ++l)
                pref[(i + 1) * (N + 1) + l + 1] = af[i * N + l] + pref[i * (N + 1) + l + 1] +
                                                  pref[(i + 1) * (N + 1) + l] -
                                                  pref[i * (N + 1) + l];
    }
    auto rect_sum = [&](const CellRect& r) {
        if (n == 1) return pref[static_cast<size_t>(r.hi[0])] - pref[static_cast<size_t>(r.lo[0])];
        return pref[r.hi[0] * (N + 1) + r.hi[1]] - pref[r.lo[0] * (N + 1) + r.hi[1]] -
               pref[r.hi[0] * (N + 1) + r.lo[1]] + pref[r.lo[0] * (N + 1) + r.lo[1]];
    };
    GridFunction out(f.box(), f.cells_per_side());
    for (const DyadicCube& q : family.cubes) {
        CellRect clip = sys.clipped_cells(q);
        int64_t cnt = 1;
        for (int d = 0; d < n; ++d) cnt *= std::max<int64_t>(0, clip.hi[d] - clip.lo[d]);
        if (cnt == 0) continue;
        double measure = static_cast<double>(cnt) * hn;
        double val = std::pow(measure, alpha / n - 1.0) * rect_sum(clip) * hn;
        for (int64_t id : sys.cell_ids(clip)) out[id] = std::max(out[id], val);
    }
    return out;
}

GridFunction grand_maximal_truncated(const GridFunction& f, double alpha, const LatticeSystem& sys,
                                     const CubeFamily& family) {
    FracKernel kernel(f.box(), f.cells_per_side(), alpha);
    return grand_maximal_truncated(kernel, f, sys, family);
}

GridFunction grand_maximal_truncated(const FracKernel& kernel, const GridFunction& f,
                                     const LatticeSystem& sys, const CubeFamily& family) {
    GridFunction full = kernel.apply(f);
    GridFunction out(f.box(), f.cells_per_side());
    for (const DyadicCube& q : family.cubes) {
        CellRect clip = sys.clipped_cells(q);
        CellRect triple = sys.dilate3_cells(q);
        double v = 0.0;
        std::vector<int64_t> ids = sys.cell_ids(clip);
        std::vector<double> inside = kernel.eval_on(f, triple, clip);
        for (size_t i = 0; i < ids.size(); ++i)
            v = std::max(v, std::abs(full[ids[i]] - inside[i]));
        for (int64_t id : ids) out[id] = std::max(out[id], v);
    }
    return out;
}

GridFunction local_grand_maximal(const GridFunction& f, double alpha, const LatticeSystem& sys,
                                 const DyadicCube& q0) {
    FracKernel kernel(f.box(), f.cells_per_side(), alpha);
    return local_grand_maximal(kernel, f, sys, q0);
}

GridFunction local_grand_maximal(const FracKernel& kernel, const GridFunction& f,
                                 const LatticeSystem& sys, const DyadicCube& q0) {
    if (q0.lattice != kBaseLattice)
        throw std::invalid_argument("local_grand_maximal: q0 must be a base-lattice cube");
    GridFunction out(f.box(), f.cells_per_side());
    CellRect clip0 = sys.clipped_cells(q0);
    std::vector<int64_t> ids0 = sys.cell_ids(clip0);
    std::vector<double> base = kernel.eval_on(f, sys.dilate3_cells(q0), clip0);
    // walk the subtree; each cube contributes max_{xi in Q}|I(f chi_{3Q0}) - I(f chi_{3Q})|
    struct Walker {
        const FracKernel& kernel;
        const GridFunction& f;
        const LatticeSystem& sys;
        const std::vector<double>& base;
        const CellRect& clip0;
        GridFunction& out;
        void walk(const DyadicCube& q, double inherited) {
            CellRect clip = sys.clipped_cells(q);
            std::vector<double> inside = kernel.eval_on(f, sys.dilate3_cells(q), clip);
            double v = 0.0;
            std::vector<int64_t> ids = sys.cell_ids(clip);
            for (size_t i = 0; i < ids.size(); ++i) {
                size_t off = offset_in(clip0, ids[i]);
                v = std::max(v, std::abs(base[off] - inside[i]));
            }
            double cur = std::max(inherited, v);
            if (sys.is_leaf(q)) {
                for (int64_t id : ids) out[id] = cur;
                return;
            }
            for (const DyadicCube& c : sys.children(q)) walk(c, cur);
        }
        size_t offset_in(const CellRect& big, int64_t id) const {
            if (sys.dim() == 1) return static_cast<size_t>(id - big.lo[0]);
            int64_t N = sys.cells_per_side();
            int64_t i0 = id / N - big.lo[0], i1 = id % N - big.lo[1];
            return static_cast<size_t>(i0 * (big.hi[1] - big.lo[1]) + i1);
        }
    } walker{kernel, f, sys, base, clip0, out};
    walker.walk(q0, 0.0);
    return out;
}

GridFunction iterated_commutator(const GridFunction& b, int m, const GridFunction& f,
                                 double alpha) {
    FracKernel kernel(f.box(), f.cells_per_side(), alpha);
    return iterated_commutator(kernel, b, m, f);
}

GridFunction iterated_commutator(const FracKernel& kernel, const GridFunction& b, int m,
                                 const GridFunction& f) {
    if (m < 0) throw std::invalid_argument("iterated_commutator: m must be >= 0");
    if (!b.same_grid(f)) throw std::invalid_argument("iterated_commutator: mismatched grids");
    int64_t N = kernel.cells_per_side();
    GridFunction out(f.box(), N);
    int n = kernel.dim();
    int64_t total = f.size();
    for (int64_t i = 0; i < total; ++i) {
        double s = 0.0;
        for (int64_t j = 0; j < total; ++j) {
            double diff = b[i] - b[j];
            double w;
            if (n == 1) {
                w = kernel.weight(j - i);
            } else {
                w = kernel.weight(j / N - i / N, j % N - i % N);
            }
            s += std::pow(diff, m) * w * f[j];
        }
        out[i] = s;
    }
    return out;
}

GridFunction iterated_commutator_inductive(const GridFunction& b, int m, const GridFunction& f,
                                           double alpha) {
    FracKernel kernel(f.box(), f.cells_per_side(), alpha);
    if (m == 0) return kernel.apply(f);
    GridFunction inner = iterated_commutator_inductive(b, m - 1, f, alpha);
    GridFunction bf = f;
    for (int64_t i = 0; i < bf.size(); ++i) bf[i] = b[i] * f[i];
    GridFunction inner_bf = iterated_commutator_inductive(b, m - 1, bf, alpha);
    GridFunction out(f.box(), f.cells_per_side());
    for (int64_t i = 0; i < out.size(); ++i) out[i] = b[i] * inner[i] - inner_bf[i];
    return out;
}

}  // namespace fracsparse
