// Command-line front end: scaling experiments, weight certificates, sparse
// domination runs, and operator application over GridFunction CSV files.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracsparse/csv.hpp"
#include "fracsparse/experiments.hpp"
#include "fracsparse/operators.hpp"
#include "fracsparse/sparse.hpp"

using namespace fracsparse;

namespace {

std::vector<double> parse_deltas(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::ofstream open_out(const std::string& dir, const std::string& name,
                       const std::string& config_line) {
    std::filesystem::create_directories(dir);
    std::ofstream out(std::filesystem::path(dir) / name);
    if (!out) throw std::runtime_error("cannot open output file " + name);
    out << "# fracsparse " << config_line << '\n';
    return out;
}

void emit_plot(const std::string& dir, const std::string& name, const std::string& csv,
               const std::string& xlabel, const std::string& ylabel, int xcol, int ycol,
               bool loglog) {
    std::ofstream out(std::filesystem::path(dir) / name);
    out << "#!/usr/bin/env python3\n"
        << "import csv\n"
        << "import matplotlib.pyplot as plt\n"
        << "xs, ys = [], []\n"
        << "with open('" << csv << "') as fh:\n"
        << "    for row in csv.reader(fh):\n"
        << "        if not row or row[0].startswith('#'):\n"
        << "            continue\n"
        << "        xs.append(float(row[" << xcol << "]))\n"
        << "        ys.append(float(row[" << ycol << "]))\n"
        << "plt.plot(xs, ys, 'o-')\n";
    if (loglog) out << "plt.xscale('log')\nplt.yscale('log')\n";
    out << "plt.xlabel('" << xlabel << "')\n"
        << "plt.ylabel('" << ylabel << "')\n"
        << "plt.tight_layout()\n"
        << "plt.savefig('" << csv << ".png', dpi=160)\n"
        << "print('wrote " << csv << ".png')\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale estimates for fractional integrals, their iterated "
                 "commutators, and the dyadic machinery behind them"};
    app.set_config("--config", "", "flat key=value configuration file (CLI overrides it)");
    app.require_subcommand(1);

    uint64_t seed = 1;
    std::string out_dir = ".";
    int64_t grid = 1 << 8;
    bool plot = false;
    app.add_option("--seed", seed, "seed for every randomized component")->capture_default_str();
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--grid", grid, "cells per side (power of 2)")->capture_default_str();
    app.add_flag("--emit-plot-script", plot, "also write a plotting script per CSV");

    // ---- sharpness ----
    auto* sharp = app.add_subcommand("sharpness", "norm-ratio scaling against power weights");
    double s_alpha = 0.5, s_p = 4.0 / 3.0;
    int s_m = 1;
    std::string s_deltas = "0.125,0.0625,0.03125,0.015625,0.0078125,0.00390625";
    sharp->add_option("--alpha", s_alpha, "order of the fractional integral")
        ->capture_default_str();
    sharp->add_option("--p", s_p, "integrability exponent p")->capture_default_str();
    sharp->add_option("--m", s_m, "commutator order")->capture_default_str();
    sharp->add_option("--deltas", s_deltas, "comma-separated weight parameters")
        ->capture_default_str();

    // ---- weights ----
    auto* wsub = app.add_subcommand("weights", "weight-constant certificates for a sampled weight");
    std::string w_file;
    double w_p = 4.0 / 3.0, w_q = 4.0;
    int w_depth = -1;
    wsub->add_option("--weight", w_file, "weight CSV (GridFunction format)")->required();
    wsub->add_option("--p", w_p, "exponent p")->capture_default_str();
    wsub->add_option("--q", w_q, "exponent q")->capture_default_str();
    wsub->add_option("--family-depth", w_depth, "max dyadic level of the scan (-1: leaves)")
        ->capture_default_str();

    // ---- apply ----
    auto* asub = app.add_subcommand("apply", "apply an operator to a GridFunction CSV");
    std::string a_op = "ialpha", a_b_file, a_f_file;
    double a_alpha = 0.5;
    int a_m = 1;
    asub->add_option("--op", a_op, "ialpha | malpha | grand | commutator")
        ->check(CLI::IsMember({"ialpha", "malpha", "grand", "commutator"}))
        ->capture_default_str();
    asub->add_option("--alpha", a_alpha, "operator order")->capture_default_str();
    asub->add_option("--m", a_m, "commutator order")->capture_default_str();
    asub->add_option("--b", a_b_file, "symbol CSV (commutator only)");
    asub->add_option("--f", a_f_file, "input CSV")->required();

    // ---- sparse-dominate ----
    auto* dsub = app.add_subcommand("sparse-dominate", "constructive pointwise sparse domination");
    std::string d_b_file, d_f_file;
    double d_alpha = 0.5;
    int d_m = 1, d_depth = -1;
    dsub->add_option("--alpha", d_alpha, "operator order")->capture_default_str();
    dsub->add_option("--m", d_m, "commutator order")->capture_default_str();
    dsub->add_option("--b", d_b_file, "symbol CSV")->required();
    dsub->add_option("--f", d_f_file, "input CSV")->required();
    dsub->add_option("--depth", d_depth, "terminal recursion level (-1: grid leaves)")
        ->capture_default_str();

    // ---- bloom-check ----
    auto* bsub = app.add_subcommand("bloom-check", "two-weight commutator upper-bound experiment");
    std::string b_mu, b_la, b_sym;
    double b_alpha = 0.5, b_p = 4.0 / 3.0;
    int b_m = 1, b_trials = 8;
    bsub->add_option("--mu", b_mu, "weight mu CSV")->required();
    bsub->add_option("--lambda", b_la, "weight lambda CSV")->required();
    bsub->add_option("--b", b_sym, "symbol CSV")->required();
    bsub->add_option("--alpha", b_alpha, "operator order")->capture_default_str();
    bsub->add_option("--p", b_p, "exponent p")->capture_default_str();
    bsub->add_option("--m", b_m, "commutator order")->capture_default_str();
    bsub->add_option("--trials", b_trials, "number of random test functions")
        ->capture_default_str();

    // ---- necessity ----
    auto* nsub = app.add_subcommand("necessity", "median/oscillation lower-bound construction");
    std::string n_b, n_mu, n_la;
    double n_alpha = 0.5;
    int n_m = 1, n_level = 0;
    int64_t n_index = 0;
    nsub->add_option("--b", n_b, "symbol CSV")->required();
    nsub->add_option("--mu", n_mu, "weight mu CSV")->required();
    nsub->add_option("--lambda", n_la, "weight lambda CSV")->required();
    nsub->add_option("--alpha", n_alpha, "operator order")->capture_default_str();
    nsub->add_option("--m", n_m, "commutator order (>= 1)")->capture_default_str();
    nsub->add_option("--level", n_level, "base cube level")->capture_default_str();
    nsub->add_option("--index", n_index, "base cube index")->capture_default_str();

    // ---- kappa ----
    auto* ksub = app.add_subcommand("kappa", "evaluate the two-weight constant kappa_m");
    double k_alpha = 0.5, k_p = 4.0 / 3.0;
    int k_n = 1, k_m = 1;
    double k_la = 1, k_mu = 1, k_lap = 1, k_mup = 1, k_laq = 1, k_muq = 1;
    ksub->add_option("--n", k_n, "dimension")->capture_default_str();
    ksub->add_option("--alpha", k_alpha, "operator order")->capture_default_str();
    ksub->add_option("--p", k_p, "exponent p")->capture_default_str();
    ksub->add_option("--m", k_m, "commutator order")->capture_default_str();
    ksub->add_option("--lambda-apq", k_la, "[lambda]_{A_{p,q}}")->capture_default_str();
    ksub->add_option("--mu-apq", k_mu, "[mu]_{A_{p,q}}")->capture_default_str();
    ksub->add_option("--lambda-p-ap", k_lap, "[lambda^p]_{A_p}")->capture_default_str();
    ksub->add_option("--mu-p-ap", k_mup, "[mu^p]_{A_p}")->capture_default_str();
    ksub->add_option("--lambda-q-aq", k_laq, "[lambda^q]_{A_q}")->capture_default_str();
    ksub->add_option("--mu-q-aq", k_muq, "[mu^q]_{A_q}")->capture_default_str();

    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();
    CLI11_PARSE(app, argc, argv);

    try {
        char cfg[512];
        if (sharp->parsed()) {
            std::snprintf(cfg, sizeof(cfg),
                          "sharpness alpha=%g p=%g m=%d grid=%lld deltas=%s seed=%llu", s_alpha,
                          s_p, s_m, static_cast<long long>(grid), s_deltas.c_str(),
                          static_cast<unsigned long long>(seed));
            SharpnessConfig scfg;
            scfg.alpha = s_alpha;
            scfg.p = s_p;
            scfg.m = s_m;
            scfg.deltas = parse_deltas(s_deltas);
            scfg.cells_per_side = grid;
            SharpnessResult res = sharpness_experiment(scfg);
            auto out = open_out(out_dir, "sharpness.csv", cfg);
            out << "# delta,apq_constant,norm_ratio\n";
            for (size_t i = 0; i < res.deltas.size(); ++i)
                out << format_double(res.deltas[i]) << ',' << format_double(res.constants[i])
                    << ',' << format_double(res.ratios[i]) << '\n';
            out << "# slope_ratio_vs_constant," << format_double(res.ratio_vs_constant.slope)
                << ",theory," << format_double(res.theory_slope) << '\n';
            out << "# slope_constant_vs_delta," << format_double(res.constant_vs_delta.slope)
                << ",theory," << format_double(sobolev_q(1, s_alpha, res.dualized
                                                                ? dual_exponent(sobolev_q(1, s_alpha, s_p))
                                                                : s_p) /
                                               dual_exponent(res.dualized
                                                                 ? dual_exponent(sobolev_q(1, s_alpha, s_p))
                                                                 : s_p))
                << '\n';
            std::cout << "slope " << res.ratio_vs_constant.slope << " (theory "
                      << res.theory_slope << "), weight slope " << res.constant_vs_delta.slope
                      << (res.dualized ? " [dualized]" : "") << '\n';
            if (plot)
                emit_plot(out_dir, "plot_sharpness.py", "sharpness.csv", "[w_delta]_{A_pq}",
                          "norm ratio", 1, 2, true);
        } else if (wsub->parsed()) {
            GridFunction wf = read_grid_function(w_file);
            Weight w(wf);
            LatticeSystem sys(wf.box(), wf.cells_per_side());
            CubeFamily fam = w_depth < 0 ? CubeFamily::full(sys) : CubeFamily::full(sys, w_depth);
            std::snprintf(cfg, sizeof(cfg), "weights p=%g q=%g family-depth=%d file=%s", w_p, w_q,
                          w_depth, w_file.c_str());
            auto out = open_out(out_dir, "weights.csv", cfg);
            out << "# constant,value,j,k,index\n";
            auto row = [&](const char* name, const ConstantCertificate& c) {
                out << name << ',' << format_double(c.value) << ',' << c.witness.lattice << ','
                    << c.witness.level << ',' << c.witness.idx[0];
                if (wf.dim() == 2) out << ' ' << c.witness.idx[1];
                out << '\n';
            };
            GridFunction wp = wf, wq = wf;
            for (int64_t i = 0; i < wf.size(); ++i) {
                wp[i] = std::pow(wf[i], w_p);
                wq[i] = std::pow(wf[i], w_q);
            }
            row("apq", apq_constant(w, w_p, w_q, sys, fam));
            row("ap_of_w_p", ap_constant(Weight(wp), w_p, sys, fam));
            row("aq_of_w_q", ap_constant(Weight(wq), w_q, sys, fam));
            row("ainfty", ainfty_constant(w, sys, fam));
            std::cout << "wrote weights.csv\n";
        } else if (asub->parsed()) {
            GridFunction f = read_grid_function(a_f_file);
            LatticeSystem sys(f.box(), f.cells_per_side());
            CubeFamily fam = CubeFamily::full(sys);
            GridFunction result(f.box(), f.cells_per_side());
            if (a_op == "ialpha") {
                result = frac_integral(f, a_alpha);
            } else if (a_op == "malpha") {
                result = frac_maximal(f, a_alpha, sys, fam);
            } else if (a_op == "grand") {
                result = grand_maximal_truncated(f, a_alpha, sys, fam);
            } else {
                if (a_b_file.empty()) throw std::runtime_error("commutator needs --b");
                GridFunction b = read_grid_function(a_b_file);
                result = iterated_commutator(b, a_m, f, a_alpha);
            }
            std::snprintf(cfg, sizeof(cfg), "apply op=%s alpha=%g m=%d f=%s", a_op.c_str(),
                          a_alpha, a_m, a_f_file.c_str());
            std::filesystem::create_directories(out_dir);
            write_grid_function((std::filesystem::path(out_dir) / "apply_out.csv").string(),
                                result);
            std::cout << "wrote apply_out.csv\n";
        } else if (dsub->parsed()) {
            GridFunction f = read_grid_function(d_f_file);
            GridFunction b = read_grid_function(d_b_file);
            DominationReport rep = build_sparse_domination(f, b, d_alpha, d_m, d_depth);
            std::snprintf(cfg, sizeof(cfg), "sparse-dominate alpha=%g m=%d depth=%d f=%s b=%s",
                          d_alpha, d_m, d_depth, d_f_file.c_str(), d_b_file.c_str());
            std::filesystem::create_directories(out_dir);
            std::string sizes;
            for (size_t j = 0; j < rep.families.size(); ++j) {
                if (rep.families[j].cubes.empty()) continue;
                std::string name = "family_S" + std::to_string(j) + ".csv";
                write_sparse_family((std::filesystem::path(out_dir) / name).string(),
                                    rep.families[j], f.dim());
                sizes += (sizes.empty() ? "" : ";") + std::to_string(j) + ":" +
                         std::to_string(rep.families[j].cubes.size());
            }
            auto out = open_out(out_dir, "domination_report.csv", cfg);
            out << "# cell,lhs,rhs,ratio\n";
            for (size_t i = 0; i < rep.lhs.size(); ++i) {
                double ratio = rep.rhs[i] > 0.0 ? rep.lhs[i] / rep.rhs[i] : 0.0;
                out << i << ',' << format_double(rep.lhs[i]) << ',' << format_double(rep.rhs[i])
                    << ',' << format_double(ratio) << '\n';
            }
            out << "# constant,max_adaptive_C,family_sizes\n";
            out << "# " << format_double(rep.pointwise_constant) << ','
                << format_double(rep.max_adaptive_constant) << ',' << sizes << '\n';
            std::cout << "constant " << rep.pointwise_constant << ", max adaptive C "
                      << rep.max_adaptive_constant << ", families " << sizes << '\n';
            if (plot)
                emit_plot(out_dir, "plot_domination.py", "domination_report.csv", "cell",
                          "lhs/rhs", 0, 3, false);
        } else if (bsub->parsed()) {
            Weight mu(read_grid_function(b_mu));
            Weight la(read_grid_function(b_la));
            GridFunction b = read_grid_function(b_sym);
            BloomCheckResult res = bloom_upper_check(mu, la, b, b_m, b_alpha, b_p, b_trials, seed);
            std::snprintf(cfg, sizeof(cfg), "bloom-check alpha=%g p=%g m=%d trials=%d seed=%llu",
                          b_alpha, b_p, b_m, b_trials, static_cast<unsigned long long>(seed));
            auto out = open_out(out_dir, "bloom_check.csv", cfg);
            out << "# trial,ratio\n";
            for (size_t i = 0; i < res.ratios.size(); ++i)
                out << i << ',' << format_double(res.ratios[i]) << '\n';
            out << "# max_ratio,bmo_norm,kappa,empirical_c\n";
            out << "# " << format_double(res.max_ratio) << ',' << format_double(res.bmo_norm)
                << ',' << format_double(res.kappa) << ',' << format_double(res.empirical_c)
                << '\n';
            std::cout << "max ratio " << res.max_ratio << ", empirical c " << res.empirical_c
                      << '\n';
        } else if (nsub->parsed()) {
            GridFunction b = read_grid_function(n_b);
            Weight mu(read_grid_function(n_mu));
            Weight la(read_grid_function(n_la));
            LatticeSystem sys(b.box(), b.cells_per_side());
            DyadicCube q{kBaseLattice, n_level, {n_index, 0}};
            NecessityReport rep = necessity_check(b, mu, la, n_m, n_alpha, sys, q);
            std::snprintf(cfg, sizeof(cfg), "necessity alpha=%g m=%d level=%d index=%lld", n_alpha,
                          n_m, n_level, static_cast<long long>(n_index));
            auto out = open_out(out_dir, "necessity.csv", cfg);
            out << "# omega,lhs,rhs,holds,chain_constant,e_cells,a_cells,b_cells,orientation\n";
            out << format_double(rep.omega) << ',' << format_double(rep.lhs) << ','
                << format_double(rep.rhs) << ',' << (rep.holds ? 1 : 0) << ','
                << format_double(rep.chain_constant) << ',' << rep.e_cells << ',' << rep.a_cells
                << ',' << rep.b_cells << ',' << format_double(rep.orientation) << '\n';
            std::cout << (rep.holds ? "holds" : "VIOLATED") << ", omega " << rep.omega
                      << ", chain constant " << rep.chain_constant << '\n';
        } else if (ksub->parsed()) {
            KappaInputs in{ExponentSet(k_n, k_alpha, k_p, k_m), k_la, k_mu,
                           k_lap, k_mup, k_laq, k_muq};
            double value = kappa_m(in);
            std::snprintf(cfg, sizeof(cfg), "kappa n=%d alpha=%g p=%g m=%d", k_n, k_alpha, k_p,
                          k_m);
            auto out = open_out(out_dir, "kappa.csv", cfg);
            out << "# kappa_m,q\n";
            out << format_double(value) << ',' << format_double(in.exponents.q) << '\n';
            std::cout << "kappa_" << k_m << " = " << value << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
