#include "fracsparse/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>
#include <stdexcept>
#include <string>

namespace fracsparse {

namespace {

double ipow(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

double clipped_abs_sum(const LatticeSystem& sys, const GridFunction& f, const CellRect& clip) {
    double s = 0.0;
    for (int64_t id : sys.cell_ids(clip)) s += std::abs(f[id]);
    return s;
}

}  // namespace

GridFunction sparse_avg(const LatticeSystem& sys, const SparseFamily& family,
                        const GridFunction& f) {
    GridFunction out(f.box(), f.cells_per_side());
    double hn = f.cell_volume();
    for (const DyadicCube& q : family.cubes) {
        CellRect clip = sys.clipped_cells(q);
        double measure = static_cast<double>(sys.cell_count(q)) * hn;
        double avg = clipped_abs_sum(sys, f, clip) * hn / measure;
        for (int64_t id : sys.cell_ids(clip)) out[id] += avg;
    }
    return out;
}

GridFunction sparse_frac(const LatticeSystem& sys, const SparseFamily& family, double alpha,
                         const GridFunction& f) {
    int n = sys.dim();
    if (!(alpha > 0.0 && alpha < static_cast<double>(n)))
        throw std::invalid_argument("sparse_frac: alpha must lie in (0, n)");
    GridFunction out(f.box(), f.cells_per_side());
    double hn = f.cell_volume();
    for (const DyadicCube& q : family.cubes) {
        CellRect clip = sys.clipped_cells(q);
        double measure = static_cast<double>(sys.cell_count(q)) * hn;
        double val = std::pow(measure, alpha / n - 1.0) * clipped_abs_sum(sys, f, clip) * hn;
        for (int64_t id : sys.cell_ids(clip)) out[id] += val;
    }
    return out;
}

GridFunction sparse_commutator_form(const LatticeSystem& sys, const SparseOperatorSpec& spec,
                                    const GridFunction& f) {
    if (spec.h < 0 || spec.h > spec.m)
        throw std::invalid_argument("sparse_commutator_form: need 0 <= h <= m");
    int n = sys.dim();
    GridFunction out(f.box(), f.cells_per_side());
    double hn = f.cell_volume();
    const GridFunction& b = spec.b;
    for (const DyadicCube& q : spec.family.cubes) {
        CellRect clip = sys.clipped_cells(q);
        std::vector<int64_t> ids = sys.cell_ids(clip);
        if (ids.empty()) continue;
        double bsum = 0.0;
        for (int64_t id : ids) bsum += b[id];
        double bq = bsum / static_cast<double>(ids.size());
        double measure = static_cast<double>(sys.cell_count(q)) * hn;
        double avg = 0.0;
        for (int64_t id : ids) avg += std::abs(f[id] * ipow(b[id] - bq, spec.h));
        avg = avg * hn / measure;
        double scale = std::pow(measure, spec.alpha / n) * avg;
        for (int64_t id : ids)
            out[id] += std::pow(std::abs(b[id] - bq), spec.m - spec.h) * scale;
    }
    return out;
}

GridFunction weighted_sparse_iterate(const LatticeSystem& sys, const SparseFamily& family,
                                     const GridFunction& eta, int iterations,
                                     const GridFunction& f) {
    if (iterations < 1) throw std::invalid_argument("weighted_sparse_iterate: iterations >= 1");
    GridFunction cur = f;
    for (int it = 0; it < iterations; ++it) {
        cur = sparse_avg(sys, family, cur);
        for (int64_t i = 0; i < cur.size(); ++i) cur[i] *= eta[i];
    }
    return cur;
}

std::vector<DyadicCube> cz_stop_cubes(const LatticeSystem& sys, const std::vector<char>& mask,
                                      const DyadicCube& q0, double lambda) {
    if (q0.lattice != kBaseLattice)
        throw std::invalid_argument("cz_stop_cubes: q0 must be a base-lattice cube");
    auto count_in = [&](const DyadicCube& q) {
        int64_t c = 0;
        for (int64_t id : sys.cell_ids(sys.clipped_cells(q)))
            if (mask[static_cast<size_t>(id)]) ++c;
        return c;
    };
    int64_t root_cells = sys.cell_count(q0);
    int64_t root_count = count_in(q0);
    if (static_cast<double>(root_count) > lambda * static_cast<double>(root_cells))
        throw std::invalid_argument(
            "cz_stop_cubes: root average " +
            std::to_string(static_cast<double>(root_count) / static_cast<double>(root_cells)) +
            " exceeds the height");
    std::vector<DyadicCube> out;
    struct Rec {
        const LatticeSystem& sys;
        const decltype(count_in)& count;
        double lambda;
        std::vector<DyadicCube>& out;
        void visit(const DyadicCube& q) {
            for (const DyadicCube& c : sys.children(q)) {
                int64_t cells = sys.cell_count(c);
                if (static_cast<double>(count(c)) > lambda * static_cast<double>(cells)) {
                    out.push_back(c);
                } else if (!sys.is_leaf(c)) {
                    visit(c);
                }
            }
        }
    } rec{sys, count_in, lambda, out};
    if (!sys.is_leaf(q0)) rec.visit(q0);
    return out;
}

DominationReport build_sparse_domination(const GridFunction& f, const GridFunction& b,
                                         double alpha, int m, int max_depth) {
    LatticeSystem sys(f.box(), f.cells_per_side());
    FracKernel kernel(f.box(), f.cells_per_side(), alpha);
    return build_sparse_domination(sys, kernel, f, b, m, max_depth);
}

DominationReport build_sparse_domination(const LatticeSystem& sys, const FracKernel& kernel,
                                         const GridFunction& f, const GridFunction& b, int m,
                                         int max_depth) {
    if (!f.same_grid(b)) throw std::invalid_argument("build_sparse_domination: mismatched grids");
    int n = sys.dim();
    double alpha = kernel.alpha();
    double hn = f.cell_volume();
    int64_t total = f.size();

    DominationReport rep;
    rep.base_family.eta_num = 1;
    rep.base_family.eta_den = 2;

    DyadicCube root{kBaseLattice, 0, {0, 0}};

    struct Entry {
        DyadicCube cube;
        std::vector<int64_t> witness;
    };
    std::vector<Entry> F;

    // recursion: stopping-time selection of exceptional sets
    struct Rec {
        const LatticeSystem& sys;
        const FracKernel& kernel;
        const GridFunction& f;
        const GridFunction& b;
        int m;
        double alpha;
        double hn;
        int n;
        int max_depth;
        std::vector<Entry>& F;
        std::vector<double>& cs;

        void visit(const DyadicCube& q) {
            if (sys.is_leaf(q) || q.level == max_depth) {
                F.push_back({q, sys.cell_ids(sys.clipped_cells(q))});
                return;
            }
            CellRect clip = sys.clipped_cells(q);
            std::vector<int64_t> ids = sys.cell_ids(clip);
            CellRect triple = sys.dilate3_cells(q);
            DyadicCube rq = sys.cover_cube(triple);
            CellRect rclip = sys.clipped_cells(rq);
            std::vector<int64_t> rids = sys.cell_ids(rclip);
            double bsum = 0.0;
            for (int64_t id : rids) bsum += b[id];
            double bR = bsum / static_cast<double>(rids.size());

            double triple_measure = static_cast<double>(sys.cell_count(q)) *
                                    std::pow(3.0, n) * hn;
            std::vector<std::vector<double>> local(static_cast<size_t>(m + 1));
            std::vector<double> threshold(static_cast<size_t>(m + 1));
            GridFunction g(f.box(), f.cells_per_side());
            for (int h = 0; h <= m; ++h) {
                for (int64_t i = 0; i < f.size(); ++i) g[i] = ipow(b[i] - bR, h) * f[i];
                GridFunction loc = local_grand_maximal(kernel, g, sys, q);
                local[static_cast<size_t>(h)].reserve(ids.size());
                for (int64_t id : ids) local[static_cast<size_t>(h)].push_back(loc[id]);
                double mass = 0.0;
                for (int64_t id : sys.cell_ids(clip_rect(triple))) mass += std::abs(g[id]);
                threshold[static_cast<size_t>(h)] =
                    std::pow(triple_measure, alpha / n) * mass * hn / triple_measure;
            }
            // smallest power of 2 with |union of E_h| <= |Q| / 2^{n+2}
            int64_t budget_den = int64_t{1} << (n + 2);
            int64_t cube_cells = sys.cell_count(q);
            double C = 1.0;
            std::vector<char> emask(static_cast<size_t>(sys.dim() == 1
                                                            ? sys.cells_per_side()
                                                            : sys.cells_per_side() *
                                                                  sys.cells_per_side()),
                                    0);
            while (true) {
                std::fill(emask.begin(), emask.end(), 0);
                int64_t esize = 0;
                for (int h = 0; h <= m; ++h)
                    for (size_t i = 0; i < ids.size(); ++i)
                        if (local[static_cast<size_t>(h)][i] > C * threshold[static_cast<size_t>(h)]) {
                            if (!emask[static_cast<size_t>(ids[i])]) ++esize;
                            emask[static_cast<size_t>(ids[i])] = 1;
                        }
                if (esize * budget_den <= cube_cells) break;
                C *= 2.0;
            }
            cs.push_back(C);
            std::vector<DyadicCube> stops = cz_stop_cubes(sys, emask, q, 1.0 / (1 << (n + 1)));
            std::vector<char> removed(emask.size(), 0);
            for (const DyadicCube& p : stops)
                for (int64_t id : sys.cell_ids(sys.clipped_cells(p)))
                    removed[static_cast<size_t>(id)] = 1;
            Entry e{q, {}};
            for (int64_t id : ids)
                if (!removed[static_cast<size_t>(id)]) e.witness.push_back(id);
            F.push_back(std::move(e));
            for (const DyadicCube& p : stops) visit(p);
        }
        CellRect clip_rect(const CellRect& r) const {
            CellRect c = r;
            for (int d = 0; d < n; ++d) {
                c.lo[d] = std::max<int64_t>(c.lo[d], 0);
                c.hi[d] = std::min<int64_t>(c.hi[d], sys.cells_per_side());
                if (c.hi[d] < c.lo[d]) c.hi[d] = c.lo[d];
            }
            return c;
        }
    } rec{sys,   kernel, f, b, m, alpha, hn, n, max_depth < 0 ? sys.max_level() : max_depth,
          F, rep.adaptive_constants};
    rec.visit(root);

    for (const Entry& e : F) {
        rep.base_family.cubes.push_back(e.cube);
        rep.base_family.witness.push_back(e.witness);
    }
    for (double c : rep.adaptive_constants)
        rep.max_adaptive_constant = std::max(rep.max_adaptive_constant, c);

    // reassign F through the covering lemma into the 3^n shifted families
    int jcount = sys.shifted_count();
    int64_t eta_den = 2;
    for (int d = 0; d < n; ++d) eta_den *= 9;
    std::vector<std::map<std::tuple<int, int, int64_t, int64_t>, size_t>> slots(
        static_cast<size_t>(jcount));
    rep.families.assign(static_cast<size_t>(jcount), SparseFamily{});
    for (auto& fam : rep.families) {
        fam.eta_num = 1;
        fam.eta_den = eta_den;
    }
    for (const Entry& e : F) {
        DyadicCube rq = sys.cover_cube(sys.dilate3_cells(e.cube));
        auto key = std::make_tuple(rq.lattice, rq.level, rq.idx[0], rq.idx[1]);
        auto& fam = rep.families[static_cast<size_t>(rq.lattice)];
        auto& smap = slots[static_cast<size_t>(rq.lattice)];
        auto it = smap.find(key);
        if (it == smap.end()) {
            smap.emplace(key, fam.cubes.size());
            fam.cubes.push_back(rq);
            fam.witness.push_back(e.witness);
        } else {
            auto& w = fam.witness[it->second];
            w.insert(w.end(), e.witness.begin(), e.witness.end());
        }
    }
    for (auto& fam : rep.families)
        for (auto& w : fam.witness) std::sort(w.begin(), w.end());

    // measure the pointwise constant against the sparse bound
    rep.lhs.assign(static_cast<size_t>(total), 0.0);
    rep.rhs.assign(static_cast<size_t>(total), 0.0);
    GridFunction lhs = iterated_commutator(kernel, b, m, f);
    for (int64_t i = 0; i < total; ++i) rep.lhs[static_cast<size_t>(i)] = std::abs(lhs[i]);
    std::vector<double> binom(static_cast<size_t>(m + 1), 1.0);
    for (int h = 1; h <= m; ++h)
        binom[static_cast<size_t>(h)] =
            binom[static_cast<size_t>(h - 1)] * static_cast<double>(m - h + 1) / h;
    for (int j = 0; j < jcount; ++j) {
        const SparseFamily& fam = rep.families[static_cast<size_t>(j)];
        if (fam.cubes.empty()) continue;
        for (int h = 0; h <= m; ++h) {
            SparseOperatorSpec spec{fam, alpha, m, h, b};
            GridFunction term = sparse_commutator_form(sys, spec, f);
            for (int64_t i = 0; i < total; ++i)
                rep.rhs[static_cast<size_t>(i)] += binom[static_cast<size_t>(h)] * term[i];
        }
    }
    double fmax = 0.0;
    for (int64_t i = 0; i < total; ++i) fmax = std::max(fmax, std::abs(f[i]));
    double constant = 0.0;
    for (int64_t i = 0; i < total; ++i) {
        double lh = rep.lhs[static_cast<size_t>(i)], rh = rep.rhs[static_cast<size_t>(i)];
        if (rh == 0.0) {
            if (lh > 1e-14 * fmax) constant = std::numeric_limits<double>::infinity();
        } else {
            constant = std::max(constant, lh / rh);
        }
    }
    rep.pointwise_constant = constant;
    return rep;
}

}  // namespace fracsparse
