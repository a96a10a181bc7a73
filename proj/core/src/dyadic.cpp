#include "fracsparse/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracsparse {

namespace {
int64_t floor_div(int64_t a, int64_t b) {
    int64_t q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

int lattice_digit(int j, int d) { return d == 0 ? j % 3 : (j / 3) % 3; }
}  // namespace

LatticeSystem::LatticeSystem(Box box, int64_t cells_per_side) : box_(box), n_side_(cells_per_side) {
    if (cells_per_side < 2 || (cells_per_side & (cells_per_side - 1)) != 0)
        throw std::invalid_argument("LatticeSystem: cells_per_side must be a power of 2, >= 2");
    max_level_ = 0;
    while ((int64_t{1} << max_level_) < n_side_) ++max_level_;
}

int LatticeSystem::residue(int j, int k, int d) const {
    // children of a residue-r cube at level k live at residue (2r mod 3) at level k+1,
    // so each lattice follows the chain r_k = digit * 2^k mod 3
    int digit = lattice_digit(j, d);
    int two_pow = (k % 2 == 0) ? 1 : 2;
    return (digit * two_pow) % 3;
}

CellRect LatticeSystem::cells(const DyadicCube& q) const {
    if (q.level < 0 || q.level > max_level_)
        throw std::invalid_argument("LatticeSystem: cube level outside [0, max_level]");
    int64_t w = n_side_ >> q.level;
    CellRect r;
    for (int d = 0; d < dim(); ++d) {
        if (q.lattice == kBaseLattice) {
            r.lo[d] = q.idx[d] * w;
            r.hi[d] = r.lo[d] + w;
        } else {
            int64_t pos = 3 * q.idx[d] + residue(q.lattice, q.level, d);
            r.lo[d] = pos * w;
            r.hi[d] = r.lo[d] + 3 * w;
        }
    }
    return r;
}

CellRect LatticeSystem::clipped_cells(const DyadicCube& q) const {
    CellRect r = cells(q);
    for (int d = 0; d < dim(); ++d) {
        r.lo[d] = std::max<int64_t>(r.lo[d], 0);
        r.hi[d] = std::min<int64_t>(r.hi[d], n_side_);
        if (r.hi[d] < r.lo[d]) r.hi[d] = r.lo[d];
    }
    return r;
}

int64_t LatticeSystem::cell_count(const DyadicCube& q) const {
    CellRect r = cells(q);
    int64_t c = 1;
    for (int d = 0; d < dim(); ++d) c *= r.width(d);
    return c;
}

Box LatticeSystem::real_box(const DyadicCube& q) const {
    CellRect r = cells(q);
    double h = cell_size();
    Box b;
    b.dim = dim();
    b.side = static_cast<double>(r.width(0)) * h;
    for (int d = 0; d < dim(); ++d) b.lo[d] = box_.lo[d] + static_cast<double>(r.lo[d]) * h;
    return b;
}

bool LatticeSystem::is_leaf(const DyadicCube& q) const { return q.level >= max_level_; }

std::vector<DyadicCube> LatticeSystem::children(const DyadicCube& q) const {
    if (is_leaf(q)) throw std::invalid_argument("children: cube is a leaf");
    std::vector<DyadicCube> out;
    int n = dim();
    std::array<std::array<int64_t, 2>, 2> opts{};  // per dim, the two child indices
    for (int d = 0; d < n; ++d) {
        if (q.lattice == kBaseLattice) {
            opts[d] = {2 * q.idx[d], 2 * q.idx[d] + 1};
        } else {
            int r = residue(q.lattice, q.level, d);
            int rc = (2 * r) % 3;
            int64_t left = (6 * q.idx[d] + 2 * r - rc) / 3;
            opts[d] = {left, left + 1};
        }
    }
    int count = 1 << n;
    for (int mask = 0; mask < count; ++mask) {
        DyadicCube c{q.lattice, q.level + 1, {0, 0}};
        for (int d = 0; d < n; ++d) c.idx[d] = opts[d][(mask >> d) & 1];
        out.push_back(c);
    }
    return out;
}

Box LatticeSystem::dilate3(const DyadicCube& q) const {
    Box b = real_box(q);
    Box out = b;
    out.side = 3.0 * b.side;
    for (int d = 0; d < dim(); ++d) out.lo[d] = b.lo[d] - b.side;
    return out;
}

CellRect LatticeSystem::dilate3_cells(const DyadicCube& q) const {
    CellRect r = cells(q);
    CellRect out = r;
    for (int d = 0; d < dim(); ++d) {
        int64_t w = r.width(d);
        out.lo[d] = r.lo[d] - w;
        out.hi[d] = r.hi[d] + w;
    }
    return out;
}

std::vector<DyadicLattice> LatticeSystem::shifted_lattices() const {
    std::vector<DyadicLattice> out;
    Box region = box_;
    region.side = 3.0 * box_.side;
    for (int d = 0; d < dim(); ++d) region.lo[d] = box_.lo[d] - box_.side;
    for (int j = 0; j < shifted_count(); ++j) {
        DyadicLattice lat;
        lat.root = region;
        lat.id = j;
        lat.max_level = max_level_;
        for (int d = 0; d < dim(); ++d) {
            int digit = lattice_digit(j, d);
            lat.shift[d] = digit == 0 ? 0.0 : (digit == 1 ? 1.0 : -1.0);
        }
        out.push_back(lat);
    }
    return out;
}

DyadicCube LatticeSystem::cover_cube(const CellRect& rect) const {
    int n = dim();
    int64_t w = 0;
    for (int d = 0; d < n; ++d) {
        if (rect.lo[d] < -n_side_ || rect.hi[d] > 2 * n_side_)
            throw std::invalid_argument("cover_cube: rect outside covered region");
        w = std::max(w, rect.width(d));
    }
    if (w <= 0) throw std::invalid_argument("cover_cube: empty rect");
    int k_start = max_level_;
    while (k_start > 0 && 3 * (n_side_ >> k_start) < w) --k_start;
    if (3 * (n_side_ >> k_start) < w) k_start = 0;
    for (int k = k_start; k >= 0; --k) {
        int64_t W = n_side_ >> k;
        if (3 * W < w) continue;
        for (int j = 0; j < shifted_count(); ++j) {
            DyadicCube cand{j, k, {0, 0}};
            bool ok = true;
            for (int d = 0; d < n; ++d) {
                int r = residue(j, k, d);
                int64_t c2 = rect.lo[d] + rect.hi[d];  // 2 * center in cells
                int64_t g = floor_div(c2, 2 * W);
                int64_t t = floor_div(g - r, 3);
                int64_t lo = (3 * t + r) * W;
                if (!(lo <= rect.lo[d] && rect.hi[d] <= lo + 3 * W)) {
                    ok = false;
                    break;
                }
                cand.idx[d] = t;
            }
            if (ok) return cand;
        }
    }
    throw std::runtime_error("cover_cube: no covering cube found");
}

DyadicCube LatticeSystem::cover_cube(const Box& q) const {
    if (q.dim != dim()) throw std::invalid_argument("cover_cube: dimension mismatch");
    double h = cell_size();
    double eps = 1e-9 * box_.side;
    int n = dim();
    for (int d = 0; d < n; ++d) {
        if (q.lo[d] < box_.lo[d] - box_.side - eps || q.hi(d) > box_.lo[d] + 2 * box_.side + eps)
            throw std::invalid_argument("cover_cube: box outside covered region");
    }
    int k_start = max_level_;
    while (k_start > 0 && 3.0 * h * static_cast<double>(n_side_ >> k_start) < q.side * (1.0 - 1e-12))
        --k_start;
    for (int k = k_start; k >= 0; --k) {
        double s = h * static_cast<double>(n_side_ >> k);
        if (3.0 * s < q.side * (1.0 - 1e-12)) continue;
        for (int j = 0; j < shifted_count(); ++j) {
            DyadicCube cand{j, k, {0, 0}};
            bool ok = true;
            for (int d = 0; d < n; ++d) {
                int r = residue(j, k, d);
                double center = q.lo[d] + 0.5 * q.side;
                auto t = static_cast<int64_t>(
                    std::floor(((center - box_.lo[d]) / s - static_cast<double>(r)) / 3.0));
                double lo = box_.lo[d] + (3.0 * static_cast<double>(t) + r) * s;
                if (!(lo <= q.lo[d] + eps && q.hi(d) <= lo + 3.0 * s + eps)) {
                    ok = false;
                    break;
                }
                cand.idx[d] = t;
            }
            if (ok) return cand;
        }
    }
    throw std::runtime_error("cover_cube: no covering cube found");
}

std::vector<DyadicCube> LatticeSystem::base_cubes(int level_limit) const {
    std::vector<DyadicCube> out;
    int n = dim();
    for (int k = 0; k <= std::min(level_limit, max_level_); ++k) {
        int64_t count = int64_t{1} << k;
        if (n == 1) {
            for (int64_t i = 0; i < count; ++i) out.push_back({kBaseLattice, k, {i, 0}});
        } else {
            for (int64_t i = 0; i < count; ++i)
                for (int64_t l = 0; l < count; ++l) out.push_back({kBaseLattice, k, {i, l}});
        }
    }
    return out;
}

std::vector<DyadicCube> LatticeSystem::shifted_cubes_contained(int level_limit) const {
    std::vector<DyadicCube> out;
    int n = dim();
    for (int k = 0; k <= std::min(level_limit, max_level_); ++k) {
        int64_t W = n_side_ >> k;
        if (3 * W > n_side_) continue;
        for (int j = 0; j < shifted_count(); ++j) {
            std::array<std::vector<int64_t>, 2> ts;
            bool any = true;
            for (int d = 0; d < n; ++d) {
                int r = residue(j, k, d);
                int64_t t_hi = floor_div((int64_t{1} << k) - r - 3, 3);
                for (int64_t t = 0; t <= t_hi; ++t) ts[d].push_back(t);
                if (ts[d].empty()) any = false;
            }
            if (!any) continue;
            if (n == 1) {
                for (int64_t t : ts[0]) out.push_back({j, k, {t, 0}});
            } else {
                for (int64_t t0 : ts[0])
                    for (int64_t t1 : ts[1]) out.push_back({j, k, {t0, t1}});
            }
        }
    }
    return out;
}

int64_t LatticeSystem::global_cell(std::array<int64_t, 2> coords) const {
    return dim() == 1 ? coords[0] : coords[0] * n_side_ + coords[1];
}

std::vector<int64_t> LatticeSystem::cell_ids(const CellRect& clipped) const {
    std::vector<int64_t> out;
    if (dim() == 1) {
        for (int64_t i = clipped.lo[0]; i < clipped.hi[0]; ++i) out.push_back(i);
    } else {
        for (int64_t i = clipped.lo[0]; i < clipped.hi[0]; ++i)
            for (int64_t l = clipped.lo[1]; l < clipped.hi[1]; ++l)
                out.push_back(i * n_side_ + l);
    }
    return out;
}

CubeFamily CubeFamily::full(const LatticeSystem& sys) { return full(sys, sys.max_level()); }

CubeFamily CubeFamily::full(const LatticeSystem& sys, int max_level) {
    CubeFamily f;
    f.cubes = sys.base_cubes(max_level);
    auto shifted = sys.shifted_cubes_contained(max_level);
    f.cubes.insert(f.cubes.end(), shifted.begin(), shifted.end());
    return f;
}

CubeFamily CubeFamily::base_only(const LatticeSystem& sys, int max_level) {
    CubeFamily f;
    f.cubes = sys.base_cubes(max_level);
    return f;
}

SparsityCertificate verify_sparse(const LatticeSystem& sys, const SparseFamily& family) {
    SparsityCertificate cert;
    cert.pass = true;
    cert.worst_ratio = 1.0;
    int64_t total = sys.dim() == 1 ? sys.cells_per_side() : sys.cells_per_side() * sys.cells_per_side();
    std::vector<char> used(static_cast<size_t>(total), 0);
    bool first = true;
    for (size_t i = 0; i < family.cubes.size(); ++i) {
        const DyadicCube& q = family.cubes[i];
        CellRect clip = sys.clipped_cells(q);
        int64_t measure = sys.cell_count(q);
        const auto& wit = family.witness[i];
        for (int64_t cell : wit) {
            if (cell < 0 || cell >= total) {
                cert.contained = false;
                continue;
            }
            std::array<int64_t, 2> coords{cell, 0};
            if (sys.dim() == 2) coords = {cell / sys.cells_per_side(), cell % sys.cells_per_side()};
            for (int d = 0; d < sys.dim(); ++d)
                if (coords[d] < clip.lo[d] || coords[d] >= clip.hi[d]) cert.contained = false;
            if (used[static_cast<size_t>(cell)]) cert.disjoint = false;
            used[static_cast<size_t>(cell)] = 1;
        }
        // exact integer check of |E_Q| >= eta |Q|
        bool big_enough =
            static_cast<int64_t>(wit.size()) * family.eta_den >= family.eta_num * measure;
        double ratio = static_cast<double>(wit.size()) / static_cast<double>(measure);
        if (first || ratio < cert.worst_ratio) {
            cert.worst_ratio = ratio;
            cert.worst_cube = q;
            first = false;
        }
        if (!big_enough) cert.pass = false;
    }
    if (!cert.disjoint || !cert.contained) cert.pass = false;
    return cert;
}

}  // namespace fracsparse
