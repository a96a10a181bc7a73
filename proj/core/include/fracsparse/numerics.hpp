#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fracsparse/grid.hpp"

namespace fracsparse {

// integral_a^b y^{s-1} ln^k(1/y) dy for 0 <= a < b, s != 0 (s < 0 needs a > 0).
// Closed form via the antiderivative y^s sum_i k!/(k-i)! s^{-(i+1)} ln^{k-i}(1/y).
double power_log_integral(int k, double s, double a, double b);

// integral_u^v |x|^s dx for s > -1.
double abs_power_integral(double s, double u, double v);

// 4-point Gauss-Legendre nodes/weights on [-1,1].
inline constexpr double kGauss4X[4] = {-0.8611363115940526, -0.3399810435848563,
                                       0.3399810435848563, 0.8611363115940526};
inline constexpr double kGauss4W[4] = {0.3478548451374538, 0.6521451548625461,
                                       0.6521451548625461, 0.3478548451374538};

// composite Gauss-4 over [a,b] with `panels` equal panels
double panel_gauss(const std::function<double(double)>& f, double a, double b, int panels);

// Log-log regression output for scaling-law experiments.
struct FitReport {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    std::vector<std::pair<double, double>> points;  // (log x, log y)
};

FitReport fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Deterministic test-function generators. Uniform doubles are produced from
// raw mt19937_64 output so streams are reproducible across platforms.
class TestFunctionRng {
  public:
    explicit TestFunctionRng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    double uniform();                 // [0, 1)
    double uniform_sym();             // [-1, 1)
    uint64_t next_u64();

    // cellwise i.i.d. uniform [-1,1] smoothed by one neighbour-averaging pass
    GridFunction smooth_random(const Box& box, int64_t cells_per_side);
    // indicator of a random dyadic interval/cube
    GridFunction dyadic_indicator(const Box& box, int64_t cells_per_side);

  private:
    uint64_t state_;
};

}  // namespace fracsparse
