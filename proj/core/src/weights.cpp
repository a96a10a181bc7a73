#include "fracsparse/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracsparse {

namespace {

// summed-area table over grid cells of a cellwise transform of g
class Prefix {
  public:
    Prefix(const GridFunction& g, const std::function<double(double)>& fn) {
        n_ = g.cells_per_side();
        dim_ = g.dim();
        if (dim_ == 1) {
            acc_.assign(static_cast<size_t>(n_ + 1), 0.0);
            for (int64_t i = 0; i < n_; ++i) acc_[i + 1] = acc_[i] + fn(g[i]);
        } else {
            acc_.assign(static_cast<size_t>((n_ + 1) * (n_ + 1)), 0.0);
            auto at = [&](int64_t i, int64_t l) -> double& {
                return acc_[static_cast<size_t>(i * (n_ + 1) + l)];
            };
            for (int64_t i = 0; i < n_; ++i)
                for (int64_t l = 0; l < n_; ++l)
                    at(i + 1, l + 1) =
                        fn(g[i * n_ + l]) + at(i, l + 1) + at(i + 1, l) - at(i, l);
        }
    }

    // sum over the clipped rect
    double sum(const CellRect& r) const {
        if (dim_ == 1) return acc_[static_cast<size_t>(r.hi[0])] - acc_[static_cast<size_t>(r.lo[0])];
        auto at = [&](int64_t i, int64_t l) {
            return acc_[static_cast<size_t>(i * (n_ + 1) + l)];
        };
        return at(r.hi[0], r.hi[1]) - at(r.lo[0], r.hi[1]) - at(r.hi[0], r.lo[1]) +
               at(r.lo[0], r.lo[1]);
    }

  private:
    int64_t n_;
    int dim_;
    std::vector<double> acc_;
};

int64_t clipped_count(const CellRect& r, int n) {
    int64_t c = 1;
    for (int d = 0; d < n; ++d) c *= std::max<int64_t>(0, r.hi[d] - r.lo[d]);
    return c;
}

template <typename Fn>
ConstantCertificate scan(const LatticeSystem& sys, const CubeFamily& family, Fn&& value_of) {
    ConstantCertificate cert;
    bool first = true;
    for (const DyadicCube& q : family.cubes) {
        CellRect clip = sys.clipped_cells(q);
        int64_t cnt = clipped_count(clip, sys.dim());
        if (cnt == 0) continue;
        double v = value_of(q, clip, cnt);
        if (first || v > cert.value) {
            cert.value = v;
            cert.witness = q;
            first = false;
        }
    }
    if (first) throw std::invalid_argument("cube scan: family has no cube meeting the root box");
    return cert;
}

}  // namespace

Weight::Weight(GridFunction g) : w(std::move(g)) {
    for (int64_t i = 0; i < w.size(); ++i)
        if (!(w[i] > 0.0)) throw std::invalid_argument("Weight: values must be positive");
}

ConstantCertificate ap_constant(const Weight& w, double p, const LatticeSystem& sys,
                                const CubeFamily& family) {
    if (p <= 1.0) throw std::invalid_argument("ap_constant: p must exceed 1");
    Prefix pw(w.grid(), [](double v) { return v; });
    Prefix pm(w.grid(), [&](double v) { return std::pow(v, -1.0 / (p - 1.0)); });
    return scan(sys, family, [&](const DyadicCube&, const CellRect& clip, int64_t cnt) {
        double m1 = pw.sum(clip) / static_cast<double>(cnt);
        double m2 = pm.sum(clip) / static_cast<double>(cnt);
        return m1 * std::pow(m2, p - 1.0);
    });
}

ConstantCertificate apq_constant(const Weight& w, double p, double q, const LatticeSystem& sys,
                                 const CubeFamily& family) {
    if (!(1.0 < p && p < q)) throw std::invalid_argument("apq_constant: need 1 < p < q");
    double pd = dual_exponent(p);
    Prefix pq(w.grid(), [&](double v) { return std::pow(v, q); });
    Prefix pm(w.grid(), [&](double v) { return std::pow(v, -pd); });
    return scan(sys, family, [&](const DyadicCube&, const CellRect& clip, int64_t cnt) {
        double m1 = pq.sum(clip) / static_cast<double>(cnt);
        double m2 = pm.sum(clip) / static_cast<double>(cnt);
        return m1 * std::pow(m2, q / pd);
    });
}

ConstantCertificate ainfty_constant(const Weight& w, const LatticeSystem& sys,
                                    const CubeFamily& family) {
    Prefix pw(w.grid(), [](double v) { return v; });
    int n = sys.dim();
    std::vector<CellRect> rects;
    rects.reserve(family.cubes.size());
    for (const DyadicCube& q : family.cubes) rects.push_back(sys.cells(q));
    return scan(sys, family, [&](const DyadicCube& q, const CellRect& clip, int64_t cnt) {
        (void)cnt;
        CellRect qr = sys.cells(q);
        // maximal function of w chi_Q over family subcubes of Q, on Q's visible cells
        int64_t w0 = clip.hi[0] - clip.lo[0];
        int64_t w1 = n == 2 ? clip.hi[1] - clip.lo[1] : 1;
        std::vector<double> maxval(static_cast<size_t>(w0 * w1), 0.0);
        for (size_t r = 0; r < rects.size(); ++r) {
            if (!qr.contains(rects[r], n)) continue;
            CellRect rc = sys.clipped_cells(family.cubes[r]);
            int64_t rcnt = clipped_count(rc, n);
            if (rcnt == 0) continue;
            double avg = pw.sum(rc) / static_cast<double>(rcnt);
            for (int64_t i = rc.lo[0]; i < rc.hi[0]; ++i) {
                if (n == 1) {
                    auto& slot = maxval[static_cast<size_t>(i - clip.lo[0])];
                    slot = std::max(slot, avg);
                } else {
                    for (int64_t l = rc.lo[1]; l < rc.hi[1]; ++l) {
                        auto& slot =
                            maxval[static_cast<size_t>((i - clip.lo[0]) * w1 + (l - clip.lo[1]))];
                        slot = std::max(slot, avg);
                    }
                }
            }
        }
        double integral = 0.0;
        for (double v : maxval) integral += v;
        return integral / pw.sum(clip);
    });
}

ConstantCertificate bmo_nu_norm(const GridFunction& b, const Weight& nu, const LatticeSystem& sys,
                                const CubeFamily& family) {
    if (!b.same_grid(nu.grid())) throw std::invalid_argument("bmo_nu_norm: mismatched grids");
    Prefix pb(b, [](double v) { return v; });
    Prefix pn(nu.grid(), [](double v) { return v; });
    int n = sys.dim();
    return scan(sys, family, [&](const DyadicCube&, const CellRect& clip, int64_t cnt) {
        double bq = pb.sum(clip) / static_cast<double>(cnt);
        double dev = 0.0;
        for (int64_t i = clip.lo[0]; i < clip.hi[0]; ++i) {
            if (n == 1) {
                dev += std::abs(b[i] - bq);
            } else {
                for (int64_t l = clip.lo[1]; l < clip.hi[1]; ++l)
                    dev += std::abs(b[i * sys.cells_per_side() + l] - bq);
            }
        }
        return dev / pn.sum(clip);
    });
}

namespace {
std::vector<double> cube_values(const GridFunction& b, const LatticeSystem& sys,
                                const DyadicCube& q) {
    CellRect clip = sys.clipped_cells(q);
    std::vector<double> vals;
    for (int64_t id : sys.cell_ids(clip)) vals.push_back(b[id]);
    if (vals.empty()) throw std::invalid_argument("cube has no cells inside the root box");
    return vals;
}
}  // namespace

double median(const GridFunction& b, const LatticeSystem& sys, const DyadicCube& q) {
    std::vector<double> vals = cube_values(b, sys, q);
    std::sort(vals.begin(), vals.end());
    size_t m = vals.size();
    return m % 2 == 1 ? vals[m / 2] : vals[m / 2 - 1];  // lower median
}

double oscillation(const GridFunction& b, const LatticeSystem& sys, const DyadicCube& q,
                   double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("oscillation: lambda in (0,1)");
    std::vector<double> vals = cube_values(b, sys, q);
    size_t m = vals.size();
    if (lambda * static_cast<double>(m) < 1.0)
        throw std::invalid_argument("oscillation: lambda |Q| is below one cell");
    auto t = static_cast<size_t>(std::ceil(lambda * static_cast<double>(m)));
    std::vector<double> cands = vals;
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> dev(m);
    for (double c : cands) {
        for (size_t i = 0; i < m; ++i) dev[i] = std::abs(vals[i] - c);
        std::nth_element(dev.begin(), dev.begin() + static_cast<long>(t - 1), dev.end(),
                         std::greater<>());
        best = std::min(best, dev[t - 1]);
    }
    return best;
}

Weight power_weight(double delta, double p_dual, const Box& box, int64_t cells_per_side) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("power_weight: delta in (0,1)");
    double expo = (static_cast<double>(box.dim) - delta) / p_dual;
    auto radial = [&](const std::array<double, 2>& x) {
        double r = box.dim == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
        return std::pow(r, expo);
    };
    return Weight(GridFunction::sample(radial, box, cells_per_side));
}

}  // namespace fracsparse
