#include "fracsparse/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracsparse/operators.hpp"
#include "fracsparse/sparse.hpp"

namespace fracsparse {

namespace {

double ipow(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

double binom(int m, int h) {
    double r = 1.0;
    for (int i = 1; i <= h; ++i) r = r * static_cast<double>(m - i + 1) / i;
    return r;
}

}  // namespace

double kappa_m(const KappaInputs& in) {
    const ExponentSet& e = in.exponents;
    double pd = e.p_dual();
    double apq_exp = (1.0 - e.alpha / e.n) * std::max(1.0, pd / e.q);
    if (e.m == 0) return std::pow(in.mu_apq, apq_exp);
    double mq = std::max(1.0, 1.0 / (e.q - 1.0));
    double mp = std::max(1.0, 1.0 / (e.p - 1.0));
    double md = static_cast<double>(e.m);
    double total = 0.0;
    for (int h = 0; h <= e.m; ++h) {
        double hd = static_cast<double>(h);
        double bracket =
            std::pow(std::pow(in.lambda_apq, hd / md) * std::pow(in.mu_apq, (md - hd) / md),
                     apq_exp);
        double P = 1.0;
        if (h < e.m) {
            double base = std::pow(in.lambda_q_aq, (md + hd + 1.0) / 2.0) *
                          std::pow(in.mu_q_aq, (md - hd - 1.0) / 2.0);
            P = std::pow(base, (md - hd) / md * mq);
        }
        double Q = 1.0;
        if (h > 0) {
            double base = std::pow(in.lambda_p_ap, (hd - 1.0) / 2.0) *
                          std::pow(in.mu_p_ap, md - (hd - 1.0) / 2.0);
            Q = std::pow(base, hd / md * mp);
        }
        total += binom(e.m, h) * bracket * P * Q;
    }
    return total;
}

// ---------------------------------------------------------------------------
// sharpness experiment
// ---------------------------------------------------------------------------

namespace {

// Psi_j(Z) = int_0^Z (|1-z|^{a-1} + (1+z)^{a-1}) z^{delta-1} ln^j(1/z) dz.
// Numeric base up to Zc, closed-form two-term tail beyond.
class PsiTable {
  public:
    PsiTable(double alpha, double delta, int kmax) : alpha_(alpha), delta_(delta) {
        base_.resize(static_cast<size_t>(kmax) + 1);
        for (int j = 0; j <= kmax; ++j) base_[static_cast<size_t>(j)] = numeric_base(j);
    }

    double psi(int j, double Z) const {
        if (Z >= kZc) return base_[static_cast<size_t>(j)] + tail(j, kZc, Z);
        if (Z < 4.0) throw std::invalid_argument("PsiTable: Z below the supported range");
        auto f = [&](double z) { return kernel(z) * std::pow(z, delta_ - 1.0) * ipow(-std::log(z), j); };
        return base_[static_cast<size_t>(j)] - panel_gauss(f, Z, kZc, 48);
    }

  private:
    static constexpr double kZc = 64.0;
    double alpha_, delta_;
    std::vector<double> base_;

    double kernel(double z) const {
        return std::pow(std::abs(1.0 - z), alpha_ - 1.0) + std::pow(1.0 + z, alpha_ - 1.0);
    }

    double tail(int j, double zlo, double zhi) const {
        // kernel ~ z^{alpha-1}(2 + (alpha-1)(alpha-2) z^{-2} + O(z^{-4})) for z >> 1
        double s1 = delta_ + alpha_ - 1.0;
        double c2 = (alpha_ - 1.0) * (alpha_ - 2.0);
        return 2.0 * power_log_integral(j, s1, zlo, zhi) +
               c2 * power_log_integral(j, s1 - 2.0, zlo, zhi);
    }

    double numeric_base(int j) const {
        // z in (0, 1/2]: u = ln(1/z)
        auto g = [&](double u) {
            double z = std::exp(-u);
            return kernel(z) * std::exp(-delta_ * u) * ipow(u, j);
        };
        double umax = (45.0 + 3.0 * j * std::log1p(1.0 / delta_)) / delta_;
        int pan = std::clamp(static_cast<int>(umax - std::log(2.0)), 64, 4000);
        double v0 = panel_gauss(g, std::log(2.0), umax, pan);
        // z in [2, Zc]: smooth
        double v3 = panel_gauss(
            [&](double z) { return kernel(z) * std::pow(z, delta_ - 1.0) * ipow(-std::log(z), j); },
            2.0, kZc, 96);
        // z in [1/2, 2]: |1-z|^{alpha-1} end-point singularity, geometric panels
        auto rho = [&](double z) { return std::pow(z, delta_ - 1.0) * ipow(-std::log(z), j); };
        double v1 = panel_gauss([&](double z) { return std::pow(1.0 + z, alpha_ - 1.0) * rho(z); },
                                0.5, 2.0, 24);
        double vs = 0.0;
        for (int side = 0; side < 2; ++side) {
            double t = side == 0 ? 0.5 : 1.0;  // panels [1-t, 1-t/2] resp. [1+t/2, 1+t]
            while (t > 1e-13) {
                double a = side == 0 ? 1.0 - t : 1.0 + t / 2.0;
                double b = side == 0 ? 1.0 - t / 2.0 : 1.0 + t;
                vs += panel_gauss(
                    [&](double z) { return std::pow(std::abs(1.0 - z), alpha_ - 1.0) * rho(z); },
                    a, b, 4);
                t /= 2.0;
            }
            // closing sliver: rho ~ rho(1)
            vs += rho(1.0) * std::pow(1e-13, alpha_) / alpha_;
        }
        return v0 + v1 + v3 + vs;
    }
};

struct SharpnessEngine {
    int n;
    double alpha, p, q, pd;
    int m;
    Box box;
    int64_t N;
    double h;

    double weight_exponent(double delta) const { return (n - delta) / pd; }

    // cell means of |y|^{delta-1} ln^k(1/|y|) chi_{|y|<=1}
    std::vector<GridFunction> moments(double delta, int kmax) const {
        std::vector<GridFunction> out;
        for (int k = 0; k <= kmax; ++k) out.emplace_back(box, N);
        for (int64_t i = 0; i < N; ++i) {
            double u = box.lo[0] + static_cast<double>(i) * h;
            double v = u + h;
            double lo = std::max(u, -1.0), hi = std::min(v, 1.0);
            if (lo >= hi) continue;
            for (int k = 0; k <= kmax; ++k) {
                double acc = 0.0;
                if (lo < 0.0) acc += power_log_integral(k, delta, hi >= 0.0 ? 0.0 : -hi, -lo);
                if (hi > 0.0) acc += power_log_integral(k, delta, std::max(lo, 0.0), hi);
                out[static_cast<size_t>(k)][i] = acc / h;
            }
        }
        return out;
    }

    double norm_ratio(double delta, int64_t cells, const LatticeSystem&) const {
        double hh = box.side / static_cast<double>(cells);
        FracKernel kernel(box, cells, alpha);
        int kmax = m;
        PsiTable psi(alpha, delta, kmax);
        std::vector<GridFunction> nus = [&] {
            SharpnessEngine tmp = *this;
            tmp.N = cells;
            tmp.h = hh;
            return tmp.moments(delta, kmax);
        }();
        double sq = weight_exponent(delta) * q;
        int64_t near_cells = 32;
        while (static_cast<double>(near_cells) * hh > 0.25 && near_cells > 2) near_cells /= 2;
        double xnear = static_cast<double>(near_cells) * hh;

        // far cells: midpoint values of T f against exact cell means of w^q
        CellRect support;
        support.lo = {static_cast<int64_t>(std::floor((-1.0 - box.lo[0]) / hh)), 0};
        support.hi = {static_cast<int64_t>(std::ceil((1.0 - box.lo[0]) / hh)), 1};
        double acc = 0.0;
        for (int64_t i = 0; i < cells; ++i) {
            double x = box.lo[0] + (static_cast<double>(i) + 0.5) * hh;
            if (std::abs(x) <= xnear) continue;
            double tf = 0.0;
            for (int k = 0; k <= kmax; ++k) {
                double jk = kernel.eval_cell(nus[static_cast<size_t>(k)], support, i);
                tf += binom(m, k) * ipow(std::log(std::abs(x)), m - k) * jk;
            }
            double u = box.lo[0] + static_cast<double>(i) * hh;
            double wq = abs_power_integral(sq, u, u + hh) / hh;
            acc += std::pow(std::abs(tf), q) * wq * hh;
        }
        // near region (0, xnear], exact substitution route in u = ln(1/x);
        // |Tf|^q w^q dx = e^{-xpow u} |S(u)|^q du
        double xpow = (alpha - 1.0 + delta) * q + sq + 1.0;
        auto integrand = [&](double u) {
            double Z = std::exp(std::min(u, 700.0));
            double S = 0.0;
            for (int k = 0; k <= kmax; ++k) {
                double inner = 0.0;
                for (int j = 0; j <= k; ++j)
                    inner += binom(k, j) * ipow(u, k - j) * psi.psi(j, Z);
                S += binom(m, k) * ipow(-u, m - k) * inner;
            }
            return std::exp(-xpow * u) * std::pow(std::abs(S), q);
        };
        double u_lo = std::log(1.0 / xnear);
        double u_mid = std::log(1.0 / hh);
        double u_end = u_mid + (45.0 + 3.0 * m * std::log1p(1.0 / delta)) / xpow;
        acc += 2.0 * panel_gauss(integrand, u_lo, u_mid, 36);
        int pan = std::clamp(static_cast<int>(u_end - u_mid), 200, 4000);
        acc += 2.0 * panel_gauss(integrand, u_mid, u_end, pan);

        double numerator = std::pow(acc, 1.0 / q);
        double denominator = std::pow(2.0 / delta, 1.0 / p);
        return numerator / denominator;
    }
};

}  // namespace

double power_apq_constant(double delta, double p, double q, const LatticeSystem& sys,
                          const CubeFamily& family) {
    if (sys.dim() != 1) throw std::invalid_argument("power_apq_constant: 1-d only");
    double pd = dual_exponent(p);
    double sq = (1.0 - delta) * q / pd;   // w^q = |x|^{sq}
    double sm = -(1.0 - delta);           // w^{-p'} = |x|^{sm}
    double h = sys.cell_size();
    double best = 0.0;
    for (const DyadicCube& cube : family.cubes) {
        CellRect clip = sys.clipped_cells(cube);
        if (clip.hi[0] <= clip.lo[0]) continue;
        double u = sys.box().lo[0] + static_cast<double>(clip.lo[0]) * h;
        double v = sys.box().lo[0] + static_cast<double>(clip.hi[0]) * h;
        double m1 = abs_power_integral(sq, u, v) / (v - u);
        double m2 = abs_power_integral(sm, u, v) / (v - u);
        best = std::max(best, m1 * std::pow(m2, q / pd));
    }
    return best;
}

SharpnessResult sharpness_experiment(const SharpnessConfig& config) {
    if (config.n != 1) throw std::invalid_argument("sharpness_experiment: runs at n = 1");
    if (config.deltas.size() < 4)
        throw std::invalid_argument("sharpness_experiment: need at least 4 deltas");
    SharpnessResult res;
    double p = config.p;
    double q = sobolev_q(config.n, config.alpha, p);
    double pd = dual_exponent(p);
    if (pd / q < 1.0) {
        // adjoint triple: the operator is essentially self-adjoint, so the
        // (p,q,w) problem transposes exactly to (q', p', w^{-1})
        res.dualized = true;
        p = dual_exponent(q);
        q = sobolev_q(config.n, config.alpha, p);
        pd = dual_exponent(p);
    }
    SharpnessEngine eng{config.n, config.alpha, p,
                        q,        pd,           config.m,
                        config.box, config.cells_per_side,
                        config.box.side / static_cast<double>(config.cells_per_side)};
    LatticeSystem sys(config.box, config.cells_per_side);
    CubeFamily family = CubeFamily::full(sys);

    std::vector<double> deltas = config.deltas;
    std::sort(deltas.begin(), deltas.end(), std::greater<>());
    for (double d : deltas) {
        if (!(d > 0.0 && d < 1.0))
            throw std::invalid_argument("sharpness_experiment: deltas must lie in (0,1)");
        res.constants.push_back(power_apq_constant(d, p, q, sys, family));
        res.ratios.push_back(eng.norm_ratio(d, config.cells_per_side, sys));
        res.deltas.push_back(d);
    }
    if (config.auto_drop_smallest && res.deltas.size() > 4) {
        double dmin = res.deltas.back();
        double refined = eng.norm_ratio(dmin, 2 * config.cells_per_side, sys);
        double coarse = res.ratios.back();
        if (std::abs(refined - coarse) > 0.05 * std::abs(coarse)) {
            res.deltas.pop_back();
            res.ratios.pop_back();
            res.constants.pop_back();
            res.dropped_smallest = true;
        }
    }
    res.ratio_vs_constant = fit_loglog(res.constants, res.ratios);
    std::vector<double> inv;
    for (double d : res.deltas) inv.push_back(1.0 / d);
    res.constant_vs_delta = fit_loglog(inv, res.constants);
    res.theory_slope =
        (config.m + 1.0 - config.alpha / config.n) * std::max(1.0, pd / q);
    return res;
}

// ---------------------------------------------------------------------------

BloomCheckResult bloom_upper_check(const Weight& mu, const Weight& lambda, const GridFunction& b,
                                   int m, double alpha, double p, int trials, uint64_t seed) {
    if (!mu.grid().same_grid(lambda.grid()) || !mu.grid().same_grid(b))
        throw std::invalid_argument("bloom_upper_check: mismatched grids");
    const Box& box = b.box();
    int64_t N = b.cells_per_side();
    double q = sobolev_q(box.dim, alpha, p);
    LatticeSystem sys(box, N);
    CubeFamily family = CubeFamily::full(sys);
    FracKernel kernel(box, N, alpha);

    BloomCheckResult out;
    TestFunctionRng rng(seed);
    for (int t = 0; t < trials; ++t) {
        GridFunction f = (t % 4 == 3) ? rng.dyadic_indicator(box, N) : rng.smooth_random(box, N);
        GridFunction tf = iterated_commutator(kernel, b, m, f);
        double num = lp_weighted_norm(tf, q, lambda.grid());
        double den = lp_weighted_norm(f, p, mu.grid());
        double r = den > 0.0 ? num / den : 0.0;
        out.ratios.push_back(r);
        out.max_ratio = std::max(out.max_ratio, r);
    }
    GridFunction nu = mu.grid();
    for (int64_t i = 0; i < nu.size(); ++i) nu[i] = mu.grid()[i] / lambda.grid()[i];
    if (m >= 1) {
        GridFunction nu_root = nu;
        for (int64_t i = 0; i < nu_root.size(); ++i)
            nu_root[i] = std::pow(nu[i], 1.0 / static_cast<double>(m));
        out.bmo_norm = bmo_nu_norm(b, Weight(nu_root), sys, family).value;
    } else {
        out.bmo_norm = 1.0;
    }
    auto power = [&](const Weight& w, double e) {
        GridFunction g = w.grid();
        for (int64_t i = 0; i < g.size(); ++i) g[i] = std::pow(g[i], e);
        return Weight(g);
    };
    KappaInputs in{ExponentSet(box.dim, alpha, p, m),
                   apq_constant(lambda, p, q, sys, family).value,
                   apq_constant(mu, p, q, sys, family).value,
                   ap_constant(power(lambda, p), p, sys, family).value,
                   ap_constant(power(mu, p), p, sys, family).value,
                   ap_constant(power(lambda, q), q, sys, family).value,
                   ap_constant(power(mu, q), q, sys, family).value};
    out.kappa = kappa_m(in);
    double denom = std::pow(out.bmo_norm, m) * out.kappa;
    out.empirical_c = denom > 0.0 ? out.max_ratio / denom : 0.0;
    return out;
}

NecessityReport necessity_check(const GridFunction& b, const Weight& mu, const Weight& lambda,
                                int m, double alpha, const LatticeSystem& sys,
                                const DyadicCube& q) {
    if (sys.dim() != 1) throw std::invalid_argument("necessity_check: 1-d only");
    if (m < 1) throw std::invalid_argument("necessity_check: m must be >= 1");
    int n = 1;
    double lam = 1.0 / static_cast<double>(int64_t{1} << (n + 2));
    CellRect clip = sys.clipped_cells(q);
    std::vector<int64_t> ids = sys.cell_ids(clip);
    auto M = static_cast<int64_t>(ids.size());
    if (static_cast<double>(M) * lam < 1.0)
        throw std::invalid_argument("necessity_check: lambda |Q| is below one cell");

    NecessityReport rep;
    double med = median(b, sys, q);
    rep.omega = oscillation(b, sys, q, lam);

    // E: the ceil(|Q|/2^{n+2}) cells maximizing |b - median|, ties by cell order
    std::vector<int64_t> order(ids.begin(), ids.end());
    std::stable_sort(order.begin(), order.end(), [&](int64_t a, int64_t c) {
        return std::abs(b[a] - med) > std::abs(b[c] - med);
    });
    auto esize = static_cast<int64_t>(std::ceil(static_cast<double>(M) * lam));
    std::vector<char> in_e(static_cast<size_t>(b.size()), 0);
    for (int64_t i = 0; i < esize; ++i) in_e[static_cast<size_t>(order[static_cast<size_t>(i)])] = 1;
    rep.e_cells = esize;

    // A: {b > median} plus enough median cells, in cell order, to reach |Q|/2
    std::vector<char> in_a(static_cast<size_t>(b.size()), 0);
    int64_t acount = 0;
    for (int64_t id : ids)
        if (b[id] > med) {
            in_a[static_cast<size_t>(id)] = 1;
            ++acount;
        }
    for (int64_t id : ids) {
        if (acount >= M / 2) break;
        if (b[id] == med && !in_a[static_cast<size_t>(id)]) {
            in_a[static_cast<size_t>(id)] = 1;
            ++acount;
        }
    }

    int64_t e_in_a = 0;
    for (int64_t id : ids)
        if (in_e[static_cast<size_t>(id)] && in_a[static_cast<size_t>(id)]) ++e_in_a;
    std::vector<int64_t> aprime, bprime;
    if (2 * e_in_a >= esize) {
        rep.orientation = 1.0;
        for (int64_t id : ids) {
            bool ea = in_e[static_cast<size_t>(id)] && in_a[static_cast<size_t>(id)];
            if (ea) aprime.push_back(id);
            else if (!in_a[static_cast<size_t>(id)]) bprime.push_back(id);
        }
    } else {
        rep.orientation = (m % 2 == 0) ? 1.0 : -1.0;
        for (int64_t id : ids) {
            bool eb = in_e[static_cast<size_t>(id)] && !in_a[static_cast<size_t>(id)];
            if (eb) aprime.push_back(id);
            else if (in_a[static_cast<size_t>(id)]) bprime.push_back(id);
        }
    }
    rep.a_cells = static_cast<int64_t>(aprime.size());
    rep.b_cells = static_cast<int64_t>(bprime.size());

    double h = sys.cell_size();
    rep.lhs = ipow(rep.omega, m) * static_cast<double>(aprime.size()) * h *
              static_cast<double>(bprime.size()) * h;
    FracKernel kernel(b.box(), b.cells_per_side(), alpha);
    double side = sys.real_box(q).side;
    double integral = 0.0;
    for (int64_t y : aprime) {
        double val = 0.0;
        for (int64_t x : bprime)
            val += ipow(b[y] - b[x], m) * kernel.weight(x - y);
        integral += rep.orientation * val;
    }
    rep.rhs = std::pow(side, n - alpha) * integral * h;
    rep.holds = rep.lhs <= rep.rhs;

    double nu_mean = 0.0;
    for (int64_t id : ids)
        nu_mean += std::pow(mu.grid()[id] / lambda.grid()[id], 1.0 / static_cast<double>(m));
    nu_mean /= static_cast<double>(M);
    rep.chain_constant = nu_mean > 0.0 ? rep.omega / nu_mean : 0.0;
    return rep;
}

std::vector<DominationTrialRow> domination_constant_report(int n, double alpha, int m, int trials,
                                                           int64_t cells_per_side, uint64_t seed) {
    std::vector<DominationTrialRow> rows;
    Box box = n == 1 ? Box(0.0, 1.0, 1) : Box({0.0, 0.0}, 1.0, 2);
    LatticeSystem sys(box, cells_per_side);
    for (int t = 0; t < trials; ++t) {
        uint64_t s = seed + static_cast<uint64_t>(t);
        TestFunctionRng rng(s);
        GridFunction f = rng.smooth_random(box, cells_per_side);
        GridFunction b = rng.smooth_random(box, cells_per_side);
        DominationReport rep = build_sparse_domination(f, b, alpha, m);
        DominationTrialRow row;
        row.seed = s;
        row.constant = rep.pointwise_constant;
        row.max_adaptive = rep.max_adaptive_constant;
        row.base_cubes = rep.base_family.size();
        for (const SparseFamily& fam : rep.families) row.shifted_cubes += fam.size();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace fracsparse
