#pragma once

#include "fracsparse/dyadic.hpp"
#include "fracsparse/grid.hpp"

namespace fracsparse {

// Quadrature of the Riesz kernel |x - y|^{alpha - n} against piecewise-constant
// cell densities, tabulated by cell offset. Three tiers: closed-form self cell,
// 4-point Gauss subdivision on nearest neighbours, midpoint rule in the far
// field. The offset table is symmetric by construction, so the induced dense
// matrix is exactly symmetric.
class FracKernel {
  public:
    FracKernel(Box box, int64_t cells_per_side, double alpha);

    double alpha() const { return alpha_; }
    const Box& box() const { return box_; }
    int64_t cells_per_side() const { return n_side_; }
    int dim() const { return box_.dim; }

    // kernel weight for a cell at integer offset (d0, d1) from the target
    double weight(int64_t d0, int64_t d1 = 0) const;

    GridFunction apply(const GridFunction& f) const;
    // I_alpha(f restricted to `source` cells) evaluated at cell `target`
    double eval_cell(const GridFunction& f, const CellRect& source, int64_t target) const;
    // same restriction evaluated on every cell of `targets`
    std::vector<double> eval_on(const GridFunction& f, const CellRect& source,
                                const CellRect& targets) const;

    // explicit matrix (adjointness tests); guarded against large grids
    std::vector<double> dense_matrix() const;

    // evaluation at an arbitrary point (1-d): exact per-cell kernel integrals
    // within a fixed physical radius of x, midpoint rule beyond
    double point_eval(const GridFunction& f, double x) const;

  private:
    Box box_;
    int64_t n_side_;
    double alpha_;
    std::vector<double> table_;  // offset-indexed weights
};

// (I_alpha f)_i = sum_j K[i][j] f_j
GridFunction frac_integral(const GridFunction& f, double alpha);

// M_alpha f: at each cell, max over family cubes containing it of
// |Q|^{alpha/n - 1} int_Q |f| (cubes clipped to the root box; alpha = 0 gives
// the Hardy-Littlewood maximal function).
GridFunction frac_maximal(const GridFunction& f, double alpha, const LatticeSystem& sys,
                          const CubeFamily& family);

// Grand maximal truncated operator: at x, max over family cubes containing x
// of the cell-max over the cube of |I_alpha(f chi_{complement of 3Q})|.
GridFunction grand_maximal_truncated(const GridFunction& f, double alpha, const LatticeSystem& sys,
                                     const CubeFamily& family);
GridFunction grand_maximal_truncated(const FracKernel& kernel, const GridFunction& f,
                                     const LatticeSystem& sys, const CubeFamily& family);

// Local version on a base cube Q0: max over grid-dyadic Q with x in Q subset Q0
// of the cell-max over Q of |I_alpha(f chi_{3Q0 \ 3Q})|. Returned as a
// full-grid function supported on Q0.
GridFunction local_grand_maximal(const GridFunction& f, double alpha, const LatticeSystem& sys,
                                 const DyadicCube& q0);
GridFunction local_grand_maximal(const FracKernel& kernel, const GridFunction& f,
                                 const LatticeSystem& sys, const DyadicCube& q0);

// ((I_alpha)_b^m f)_i = sum_j (b_i - b_j)^m K[i][j] f_j
GridFunction iterated_commutator(const GridFunction& b, int m, const GridFunction& f, double alpha);
GridFunction iterated_commutator(const FracKernel& kernel, const GridFunction& b, int m,
                                 const GridFunction& f);
// the inductive definition [b, (I_alpha)_b^{m-1}]; agrees with the kernel form
GridFunction iterated_commutator_inductive(const GridFunction& b, int m, const GridFunction& f,
                                           double alpha);

}  // namespace fracsparse
