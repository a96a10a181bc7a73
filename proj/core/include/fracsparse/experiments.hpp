#pragma once

#include <cstdint>
#include <vector>

#include "fracsparse/dyadic.hpp"
#include "fracsparse/grid.hpp"
#include "fracsparse/numerics.hpp"
#include "fracsparse/weights.hpp"

namespace fracsparse {

// Inputs of the two-weight commutator bound: the exponent tuple and the six
// weight constants entering kappa_m.
struct KappaInputs {
    ExponentSet exponents;
    double lambda_apq = 1.0;  // [lambda]_{A_{p,q}}
    double mu_apq = 1.0;      // [mu]_{A_{p,q}}
    double lambda_p_ap = 1.0; // [lambda^p]_{A_p}
    double mu_p_ap = 1.0;     // [mu^p]_{A_p}
    double lambda_q_aq = 1.0; // [lambda^q]_{A_q}
    double mu_q_aq = 1.0;     // [mu^q]_{A_q}
};

// kappa_m = sum_h binom(m,h) ([lambda]^{h/m}[mu]^{(m-h)/m})^{(1-alpha/n)max(1,p'/q)} P(m,h) Q(m,h)
double kappa_m(const KappaInputs& in);

struct SharpnessConfig {
    int n = 1;
    double alpha = 0.5;
    double p = 4.0 / 3.0;
    int m = 1;
    std::vector<double> deltas;     // length >= 4, geometric
    int64_t cells_per_side = 1 << 12;
    Box box{std::array<double, 2>{-4.0, 0.0}, 8.0, 1};
    bool auto_drop_smallest = true; // drop smallest delta if the norm moves >5% under N -> 2N
};

struct SharpnessResult {
    FitReport ratio_vs_constant;  // log R vs log [w_delta]
    FitReport constant_vs_delta;  // log [w_delta] vs log(1/delta)
    double theory_slope = 0.0;
    std::vector<double> deltas;
    std::vector<double> constants;  // K(delta)
    std::vector<double> ratios;     // R(delta)
    bool dualized = false;          // computed through the adjoint triple (p'/q < 1)
    bool dropped_smallest = false;
};

// Norm-ratio scaling of the iterated commutator against power weights
// w_delta = |x|^{(n-delta)/p'}, f_delta = |x|^{delta-n} chi_{B(0,1)}, b = log|x|.
// Singular masses are resolved with closed-form power-log cell moments and a
// substitution-exact representation near the origin.
SharpnessResult sharpness_experiment(const SharpnessConfig& config);

struct BloomCheckResult {
    double max_ratio = 0.0;     // max_t ||T f_t||_{L^q(lambda^q)} / ||f_t||_{L^p(mu^p)}
    double bmo_norm = 0.0;      // ||b||_{BMO_{nu^{1/m}}}
    double kappa = 0.0;         // kappa_m at the measured weight constants
    double empirical_c = 0.0;   // max_ratio / (bmo_norm^m kappa)
    std::vector<double> ratios;
};

BloomCheckResult bloom_upper_check(const Weight& mu, const Weight& lambda, const GridFunction& b,
                                   int m, double alpha, double p, int trials, uint64_t seed);

struct NecessityReport {
    double omega = 0.0;            // lambda-oscillation at 1/2^{n+2}
    double lhs = 0.0;              // omega^m |A'| |B'|
    double rhs = 0.0;              // l(Q)^{n-alpha} int_{A'} sigma (I_alpha)_b^m chi_{B'}
    bool holds = false;            // lhs <= rhs, exact
    double chain_constant = 0.0;   // omega / <nu^{1/m}>_Q
    int64_t e_cells = 0, a_cells = 0, b_cells = 0;  // |E|, |A'|, |B'|
    double orientation = 1.0;      // sigma
};

NecessityReport necessity_check(const GridFunction& b, const Weight& mu, const Weight& lambda,
                                int m, double alpha, const LatticeSystem& sys,
                                const DyadicCube& q);

struct DominationTrialRow {
    uint64_t seed = 0;
    double constant = 0.0;
    double max_adaptive = 0.0;
    size_t base_cubes = 0;
    size_t shifted_cubes = 0;
};

std::vector<DominationTrialRow> domination_constant_report(int n, double alpha, int m, int trials,
                                                           int64_t cells_per_side, uint64_t seed);

// Exact A_{p,q} scan of the power weight |x|^{(n-delta)/p'} over the family
// rectangles, with closed-form interval integrals (resolves the singular mass
// that midpoint samples cannot).
double power_apq_constant(double delta, double p, double q, const LatticeSystem& sys,
                          const CubeFamily& family);

}  // namespace fracsparse
