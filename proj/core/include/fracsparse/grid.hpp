#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fracsparse {

// Axis-aligned cube in R^n, n in {1,2}.
struct Box {
    std::array<double, 2> lo{0.0, 0.0};
    double side = 1.0;
    int dim = 1;

    Box() = default;
    Box(double lo1, double side_, int dim_ = 1) : lo{lo1, 0.0}, side(side_), dim(dim_) { validate(); }
    Box(std::array<double, 2> lo_, double side_, int dim_) : lo(lo_), side(side_), dim(dim_) { validate(); }

    void validate() const {
        if (side <= 0.0) throw std::invalid_argument("Box: side must be positive");
        if (dim < 1 || dim > 2) throw std::invalid_argument("Box: dim must be 1 or 2");
    }
    double hi(int d) const { return lo[d] + side; }
};

// Real-valued samples on a uniform grid over a box, one value per cell
// (interpreted as the value of a piecewise-constant function, sampled at
// cell midpoints). N cells per side, N a power of 2.
class GridFunction {
  public:
    GridFunction(Box box, int64_t cells_per_side, std::vector<double> values);
    GridFunction(Box box, int64_t cells_per_side, double fill = 0.0);

    static GridFunction sample(const std::function<double(const std::array<double, 2>&)>& expr,
                               const Box& box, int64_t cells_per_side);
    // 1-d convenience
    static GridFunction sample(const std::function<double(double)>& expr, const Box& box,
                               int64_t cells_per_side);

    const Box& box() const { return box_; }
    int dim() const { return box_.dim; }
    int64_t cells_per_side() const { return n_side_; }
    int64_t size() const { return static_cast<int64_t>(values_.size()); }
    double cell_size() const { return box_.side / static_cast<double>(n_side_); }
    double cell_volume() const;

    double operator[](int64_t i) const { return values_[static_cast<size_t>(i)]; }
    double& operator[](int64_t i) { return values_[static_cast<size_t>(i)]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    std::array<double, 2> midpoint(int64_t cell) const;
    // cell index from per-dimension integer coordinates (row-major: i = c0 * N + c1)
    int64_t cell_at(std::array<int64_t, 2> coords) const;

    bool same_grid(const GridFunction& other) const;

  private:
    Box box_;
    int64_t n_side_;
    std::vector<double> values_;
};

// h^n * sum over all cells.
double integrate(const GridFunction& f);
// h^n * sum over the given cell indices.
double integrate(const GridFunction& f, const std::vector<int64_t>& region);

// (sum_i |f_i|^p w_i^p h^n)^{1/p}; f and w must share the grid.
double lp_weighted_norm(const GridFunction& f, double p, const GridFunction& w);

// The exponent tuple (n, alpha, p, q, m) with 1/q + alpha/n = 1/p enforced;
// q is derived, never stored independently.
struct ExponentSet {
    int n;
    double alpha;
    double p;
    double q;
    int m;

    ExponentSet(int n_, double alpha_, double p_, int m_);
    double p_dual() const;
    double q_dual() const;
};

double dual_exponent(double p);
double sobolev_q(int n, double alpha, double p);

}  // namespace fracsparse
