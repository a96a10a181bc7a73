#include "fracsparse/grid.hpp"

#include <cmath>
#include <string>

namespace fracsparse {

namespace {
bool power_of_two(int64_t v) { return v >= 1 && (v & (v - 1)) == 0; }

int64_t checked_size(const Box& box, int64_t n_side) {
    if (!power_of_two(n_side) || n_side < 2)
        throw std::invalid_argument("GridFunction: cells_per_side must be a power of 2, >= 2");
    return box.dim == 1 ? n_side : n_side * n_side;
}
}  // namespace

GridFunction::GridFunction(Box box, int64_t cells_per_side, std::vector<double> values)
    : box_(box), n_side_(cells_per_side), values_(std::move(values)) {
    if (static_cast<int64_t>(values_.size()) != checked_size(box_, n_side_))
        throw std::invalid_argument("GridFunction: value count does not match grid");
}

GridFunction::GridFunction(Box box, int64_t cells_per_side, double fill)
    : box_(box), n_side_(cells_per_side),
      values_(static_cast<size_t>(checked_size(box, cells_per_side)), fill) {}

GridFunction GridFunction::sample(const std::function<double(const std::array<double, 2>&)>& expr,
                                  const Box& box, int64_t cells_per_side) {
    GridFunction out(box, cells_per_side);
    for (int64_t i = 0; i < out.size(); ++i) {
        double v = expr(out.midpoint(i));
        if (!std::isfinite(v))
            throw std::domain_error("sample: non-finite value at cell " + std::to_string(i));
        out[i] = v;
    }
    return out;
}

GridFunction GridFunction::sample(const std::function<double(double)>& expr, const Box& box,
                                  int64_t cells_per_side) {
    if (box.dim != 1) throw std::invalid_argument("sample: 1-d overload needs a 1-d box");
    return sample([&expr](const std::array<double, 2>& x) { return expr(x[0]); }, box,
                  cells_per_side);
}

double GridFunction::cell_volume() const {
    double h = cell_size();
    return box_.dim == 1 ? h : h * h;
}

std::array<double, 2> GridFunction::midpoint(int64_t cell) const {
    double h = cell_size();
    if (box_.dim == 1) return {box_.lo[0] + (static_cast<double>(cell) + 0.5) * h, 0.0};
    int64_t c0 = cell / n_side_, c1 = cell % n_side_;
    return {box_.lo[0] + (static_cast<double>(c0) + 0.5) * h,
            box_.lo[1] + (static_cast<double>(c1) + 0.5) * h};
}

int64_t GridFunction::cell_at(std::array<int64_t, 2> coords) const {
    return box_.dim == 1 ? coords[0] : coords[0] * n_side_ + coords[1];
}

bool GridFunction::same_grid(const GridFunction& other) const {
    return box_.dim == other.box_.dim && n_side_ == other.n_side_ &&
           box_.lo == other.box_.lo && box_.side == other.box_.side;
}

double integrate(const GridFunction& f) {
    double s = 0.0;
    for (int64_t i = 0; i < f.size(); ++i) s += f[i];
    return s * f.cell_volume();
}

double integrate(const GridFunction& f, const std::vector<int64_t>& region) {
    double s = 0.0;
    for (int64_t i : region) {
        if (i < 0 || i >= f.size()) throw std::out_of_range("integrate: cell index outside grid");
        s += f[i];
    }
    return s * f.cell_volume();
}

double lp_weighted_norm(const GridFunction& f, double p, const GridFunction& w) {
    if (p < 1.0) throw std::invalid_argument("lp_weighted_norm: p must be >= 1");
    if (!f.same_grid(w)) throw std::invalid_argument("lp_weighted_norm: mismatched grids");
    double s = 0.0;
    for (int64_t i = 0; i < f.size(); ++i) s += std::pow(std::abs(f[i]) * w[i], p);
    return std::pow(s * f.cell_volume(), 1.0 / p);
}

ExponentSet::ExponentSet(int n_, double alpha_, double p_, int m_)
    : n(n_), alpha(alpha_), p(p_), q(sobolev_q(n_, alpha_, p_)), m(m_) {
    if (m < 0) throw std::invalid_argument("ExponentSet: m must be >= 0");
}

double ExponentSet::p_dual() const { return dual_exponent(p); }
double ExponentSet::q_dual() const { return dual_exponent(q); }

double dual_exponent(double p) {
    if (p <= 1.0) throw std::invalid_argument("dual_exponent: p must exceed 1");
    return p / (p - 1.0);
}

double sobolev_q(int n, double alpha, double p) {
    if (n < 1) throw std::invalid_argument("sobolev_q: n must be >= 1");
    if (alpha <= 0.0 || alpha >= static_cast<double>(n))
        throw std::invalid_argument("sobolev_q: alpha must lie in (0, n)");
    if (p <= 1.0 || p >= static_cast<double>(n) / alpha)
        throw std::invalid_argument("sobolev_q: p must lie in (1, n/alpha)");
    return 1.0 / (1.0 / p - alpha / static_cast<double>(n));
}

}  // namespace fracsparse
