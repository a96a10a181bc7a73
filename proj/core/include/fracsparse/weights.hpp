#pragma once

#include "fracsparse/dyadic.hpp"
#include "fracsparse/grid.hpp"

namespace fracsparse {

// Positive cellwise weight.
struct Weight {
    GridFunction w;

    explicit Weight(GridFunction g);
    const GridFunction& grid() const { return w; }
};

// Extremal value of a cube scan together with the cube attaining it.
struct ConstantCertificate {
    double value = 0.0;
    DyadicCube witness;
};

// Muckenhoupt A_r constant: max over the family of <w>_Q <w^{-r'/r}>_Q^{r/r'}.
// Cube averages are taken over Q intersected with the root box.
ConstantCertificate ap_constant(const Weight& w, double p, const LatticeSystem& sys,
                                const CubeFamily& family);

// A_{p,q} constant: max over the family of <w^q>_Q <w^{-p'}>_Q^{q/p'}.
ConstantCertificate apq_constant(const Weight& w, double p, double q, const LatticeSystem& sys,
                                 const CubeFamily& family);

// Fujii-Wilson A_infty constant: max over Q of (1/w(Q)) int_Q M(w chi_Q) where
// M is the Hardy-Littlewood maximal operator restricted to family subcubes of Q.
ConstantCertificate ainfty_constant(const Weight& w, const LatticeSystem& sys,
                                    const CubeFamily& family);

// Weighted-BMO norm: max over Q of (1/nu(Q)) int_Q |b - b_Q|.
ConstantCertificate bmo_nu_norm(const GridFunction& b, const Weight& nu, const LatticeSystem& sys,
                                const CubeFamily& family);

// Lower median of the cell values of b on Q (clipped to the root box).
double median(const GridFunction& b, const LatticeSystem& sys, const DyadicCube& q);

// lambda-oscillation: min over candidate constants c (the attained cell values)
// of the ceil(lambda * #cells)-th largest value of |b - c| on Q.
double oscillation(const GridFunction& b, const LatticeSystem& sys, const DyadicCube& q,
                   double lambda);

// w_delta(x) = |x|^{(n-delta)/p'} sampled at cell midpoints.
Weight power_weight(double delta, double p_dual, const Box& box, int64_t cells_per_side);

}  // namespace fracsparse
