#include "fracsparse/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace fracsparse {

double power_log_integral(int k, double s, double a, double b) {
    if (k < 0 || s == 0.0 || a < 0.0 || b < a)
        throw std::invalid_argument("power_log_integral: bad arguments");
    auto prim = [&](double y) {
        if (y == 0.0) return 0.0;
        if (y > 1e280) return 0.0;  // converged tail for s < 0
        double L = -std::log(y);
        double ys = std::pow(y, s);
        double tot = 0.0;
        double fact = 1.0;  // k!/(k-i)!
        double spow = s;
        for (int i = 0; i <= k; ++i) {
            tot += fact * ys * std::pow(L, k - i) / spow;
            fact *= static_cast<double>(k - i);
            spow *= s;
        }
        return tot;
    };
    return prim(b) - prim(a);
}

double abs_power_integral(double s, double u, double v) {
    if (s <= -1.0) throw std::invalid_argument("abs_power_integral: s must exceed -1");
    auto prim = [&](double t) {
        if (t == 0.0) return 0.0;
        double sign = t > 0 ? 1.0 : -1.0;
        return sign * std::pow(std::abs(t), s + 1.0) / (s + 1.0);
    };
    return prim(v) - prim(u);
}

double panel_gauss(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels < 1) throw std::invalid_argument("panel_gauss: panels must be >= 1");
    double total = 0.0;
    double width = (b - a) / static_cast<double>(panels);
    for (int p = 0; p < panels; ++p) {
        double c = a + (static_cast<double>(p) + 0.5) * width;
        double r = 0.5 * width;
        for (int g = 0; g < 4; ++g) total += kGauss4W[g] * r * f(c + r * kGauss4X[g]);
    }
    return total;
}

FitReport fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 4)
        throw std::invalid_argument("fit_loglog: need >= 4 matching sample points");
    FitReport rep;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t n = x.size();
    for (size_t i = 0; i < n; ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        rep.points.emplace_back(lx, ly);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double dn = static_cast<double>(n);
    double denom = dn * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_loglog: degenerate abscissae");
    rep.slope = (dn * sxy - sx * sy) / denom;
    rep.intercept = (sy - rep.slope * sx) / dn;
    for (auto& [lx, ly] : rep.points)
        rep.max_residual = std::max(rep.max_residual, std::abs(ly - (rep.slope * lx + rep.intercept)));
    return rep;
}

uint64_t TestFunctionRng::next_u64() {
    // xorshift-multiply over mt19937_64-style state; fixed here for stream stability
    uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545f4914f6cdd1dull;
}

double TestFunctionRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double TestFunctionRng::uniform_sym() { return 2.0 * uniform() - 1.0; }

GridFunction TestFunctionRng::smooth_random(const Box& box, int64_t cells_per_side) {
    GridFunction u(box, cells_per_side);
    for (int64_t i = 0; i < u.size(); ++i) u[i] = uniform_sym();
    GridFunction v(box, cells_per_side);
    if (box.dim == 1) {
        int64_t n = u.size();
        for (int64_t i = 0; i < n; ++i) {
            double s = u[i];
            int c = 1;
            if (i > 0) { s += u[i - 1]; ++c; }
            if (i + 1 < n) { s += u[i + 1]; ++c; }
            v[i] = s / c;
        }
    } else {
        int64_t n = cells_per_side;
        for (int64_t i = 0; i < n; ++i)
            for (int64_t l = 0; l < n; ++l) {
                double s = 0;
                int c = 0;
                for (int di = -1; di <= 1; ++di)
                    for (int dl = -1; dl <= 1; ++dl) {
                        int64_t ii = i + di, ll = l + dl;
                        if (ii < 0 || ii >= n || ll < 0 || ll >= n) continue;
                        s += u[ii * n + ll];
                        ++c;
                    }
                v[i * n + l] = s / c;
            }
    }
    return v;
}

GridFunction TestFunctionRng::dyadic_indicator(const Box& box, int64_t cells_per_side) {
    GridFunction f(box, cells_per_side);
    int max_level = 0;
    while ((int64_t{1} << max_level) < cells_per_side) ++max_level;
    int level = 1 + static_cast<int>(next_u64() % static_cast<uint64_t>(max_level));
    int64_t w = cells_per_side >> level;
    if (box.dim == 1) {
        int64_t pos = static_cast<int64_t>(next_u64() % static_cast<uint64_t>(int64_t{1} << level));
        for (int64_t i = pos * w; i < (pos + 1) * w; ++i) f[i] = 1.0;
    } else {
        int64_t count = int64_t{1} << level;
        int64_t p0 = static_cast<int64_t>(next_u64() % static_cast<uint64_t>(count));
        int64_t p1 = static_cast<int64_t>(next_u64() % static_cast<uint64_t>(count));
        for (int64_t i = p0 * w; i < (p0 + 1) * w; ++i)
            for (int64_t l = p1 * w; l < (p1 + 1) * w; ++l) f[i * cells_per_side + l] = 1.0;
    }
    return f;
}

}  // namespace fracsparse
