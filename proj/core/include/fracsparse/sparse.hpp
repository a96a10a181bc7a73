#pragma once

#include "fracsparse/dyadic.hpp"
#include "fracsparse/grid.hpp"
#include "fracsparse/operators.hpp"

namespace fracsparse {

// A_S f = sum_Q <|f|>_Q chi_Q. Averages integrate over Q meeting the root box;
// the denominator is the unclipped cube measure (f vanishes off the root box).
GridFunction sparse_avg(const LatticeSystem& sys, const SparseFamily& family,
                        const GridFunction& f);

// I_S^alpha f = sum_Q |Q|^{alpha/n - 1} int_Q |f| chi_Q
GridFunction sparse_frac(const LatticeSystem& sys, const SparseFamily& family, double alpha,
                         const GridFunction& f);

struct SparseOperatorSpec {
    SparseFamily family;
    double alpha;
    int m = 0;
    int h = 0;  // 0 <= h <= m
    GridFunction b;
};

// A^{m,h}_{alpha,S}(b,f) = sum_Q |b(x)-b_Q|^{m-h} |Q|^{alpha/n} <|f (b-b_Q)^h|>_Q chi_Q
GridFunction sparse_commutator_form(const LatticeSystem& sys, const SparseOperatorSpec& spec,
                                    const GridFunction& f);

// j-fold composition of f -> A_S(f) * eta
GridFunction weighted_sparse_iterate(const LatticeSystem& sys, const SparseFamily& family,
                                     const GridFunction& eta, int iterations,
                                     const GridFunction& f);

// Maximal dyadic subcubes P of q0 with <chi_E>_P > lambda (E given as a cell
// mask over the whole grid). Requires <chi_E>_{q0} <= lambda.
std::vector<DyadicCube> cz_stop_cubes(const LatticeSystem& sys, const std::vector<char>& mask,
                                      const DyadicCube& q0, double lambda);

// Output of the constructive pointwise sparse domination
// |(I_alpha)_b^m f| <= c * sum_j sum_h binom(m,h) A^{m,h}_{alpha,S_j}(b,f).
struct DominationReport {
    std::vector<SparseFamily> families;   // one per shifted lattice (may be empty)
    SparseFamily base_family;             // recursion family F, eta = 1/2
    double pointwise_constant = 0.0;      // max cell ratio lhs/rhs (0/0 := 0)
    std::vector<double> adaptive_constants;  // threshold constant used per cube
    double max_adaptive_constant = 0.0;
    std::vector<double> lhs;              // |(I_alpha)_b^m f| per cell
    std::vector<double> rhs;              // dominating sum per cell
};

// max_depth < 0 recurses to the grid leaves; otherwise cubes at that level are
// treated as terminal (kept whole as their own witness).
DominationReport build_sparse_domination(const GridFunction& f, const GridFunction& b,
                                         double alpha, int m, int max_depth = -1);
DominationReport build_sparse_domination(const LatticeSystem& sys, const FracKernel& kernel,
                                         const GridFunction& f, const GridFunction& b, int m,
                                         int max_depth = -1);

}  // namespace fracsparse
