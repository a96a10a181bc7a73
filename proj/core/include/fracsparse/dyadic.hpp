#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "fracsparse/grid.hpp"

namespace fracsparse {

// A cube of either the base dyadic lattice (lattice == kBaseLattice) or one of
// the 3^n shifted lattices (lattice in [0, 3^n)). Geometry is integer-exact:
// at level k the base cube `idx` covers leaf cells [idx*W, (idx+1)*W) per
// dimension with W = 2^{L-k}; a shifted cube with tiling index t covers
// [(3t+r)*W, (3t+r+3)*W) where r is the lattice's residue at level k.
inline constexpr int kBaseLattice = -1;

struct DyadicCube {
    int lattice = kBaseLattice;
    int level = 0;
    std::array<int64_t, 2> idx{0, 0};

    friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
};

// Per-dimension half-open range of leaf cells; may extend outside [0, N).
struct CellRect {
    std::array<int64_t, 2> lo{0, 0};
    std::array<int64_t, 2> hi{0, 0};

    int64_t width(int d) const { return hi[d] - lo[d]; }
    bool contains(const CellRect& other, int n) const {
        for (int d = 0; d < n; ++d)
            if (other.lo[d] < lo[d] || other.hi[d] > hi[d]) return false;
        return true;
    }
};

struct DyadicLattice {
    Box root;                        // region the lattice is responsible for
    std::array<double, 2> shift{0, 0};  // level-0 offset label, components in {-1,0,+1}
    int id = kBaseLattice;
    int max_level = 0;
};

// The base lattice of a grid together with its 3^n shifted companions.
class LatticeSystem {
  public:
    LatticeSystem(Box box, int64_t cells_per_side);

    const Box& box() const { return box_; }
    int dim() const { return box_.dim; }
    int64_t cells_per_side() const { return n_side_; }
    int max_level() const { return max_level_; }
    int shifted_count() const { return dim() == 1 ? 3 : 9; }
    double cell_size() const { return box_.side / static_cast<double>(n_side_); }

    // residue of shifted lattice j at level k in dimension d
    int residue(int j, int k, int d) const;

    CellRect cells(const DyadicCube& q) const;            // unclipped
    CellRect clipped_cells(const DyadicCube& q) const;    // intersected with [0,N)^n
    int64_t cell_count(const DyadicCube& q) const;        // unclipped, (width)^n
    Box real_box(const DyadicCube& q) const;              // unclipped geometry
    bool is_leaf(const DyadicCube& q) const;

    std::vector<DyadicCube> children(const DyadicCube& q) const;

    // concentric 3x dilation; unclipped geometry (clipping happens at use sites)
    Box dilate3(const DyadicCube& q) const;
    CellRect dilate3_cells(const DyadicCube& q) const;

    std::vector<DyadicLattice> shifted_lattices() const;

    // grid-aligned cover: smallest shifted cube containing the rect, with
    // side at most 3x the rect side; ties broken by finest level then lowest j
    DyadicCube cover_cube(const CellRect& rect) const;
    // real-coordinate cover of an arbitrary box inside the covered region
    DyadicCube cover_cube(const Box& q) const;

    // enumeration helpers
    std::vector<DyadicCube> base_cubes(int max_level) const;
    std::vector<DyadicCube> shifted_cubes_contained(int max_level) const;

    int64_t global_cell(std::array<int64_t, 2> coords) const;
    std::vector<int64_t> cell_ids(const CellRect& clipped) const;

  private:
    Box box_;
    int64_t n_side_;
    int max_level_;
};

// Finite realization of "sup over all cubes": a list of cubes scanned
// exhaustively. The canonical family holds every base cube and every shifted
// cube contained in the root box, down to the leaf level.
struct CubeFamily {
    std::vector<DyadicCube> cubes;

    static CubeFamily full(const LatticeSystem& sys);
    static CubeFamily full(const LatticeSystem& sys, int max_level);
    static CubeFamily base_only(const LatticeSystem& sys, int max_level);
};

// Cube set with pairwise-disjoint witness cell sets E_Q, |E_Q| >= eta |Q|.
// eta is kept as an exact rational so certificates are integer-exact.
struct SparseFamily {
    std::vector<DyadicCube> cubes;
    std::vector<std::vector<int64_t>> witness;  // global cell ids, sorted
    int64_t eta_num = 1;
    int64_t eta_den = 2;

    double eta() const { return static_cast<double>(eta_num) / static_cast<double>(eta_den); }
    size_t size() const { return cubes.size(); }
};

struct SparsityCertificate {
    bool pass = false;
    DyadicCube worst_cube;
    double worst_ratio = 0.0;  // min over cubes of |E_Q| / |Q|
    bool disjoint = true;
    bool contained = true;
};

SparsityCertificate verify_sparse(const LatticeSystem& sys, const SparseFamily& family);

}  // namespace fracsparse
