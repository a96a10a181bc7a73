// End-to-end checks of the command-line tool: file formats, config handling,
// CLI-over-config precedence.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fracsparse/csv.hpp"
#include "fracsparse/numerics.hpp"

using namespace fracsparse;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    std::string cmd = std::string(FRACSPARSE_CLI) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("apply and round-trip through the CLI") {
    fs::path work(CLI_WORK_DIR);
    fs::create_directories(work);
    Box box(0.0, 1.0, 1);
    TestFunctionRng rng(3);
    GridFunction f = rng.smooth_random(box, 64);
    write_grid_function((work / "f.csv").string(), f);
    write_grid_function((work / "b.csv").string(), rng.smooth_random(box, 64));

    REQUIRE(run("apply --op ialpha --alpha 0.5 --f " + (work / "f.csv").string() + " --out " +
                work.string()) == 0);
    GridFunction out = read_grid_function((work / "apply_out.csv").string());
    CHECK(out.size() == 64);

    REQUIRE(run("apply --op commutator --alpha 0.5 --m 2 --f " + (work / "f.csv").string() +
                " --b " + (work / "b.csv").string() + " --out " + work.string()) == 0);

    REQUIRE(run("sparse-dominate --alpha 0.5 --m 1 --f " + (work / "f.csv").string() + " --b " +
                (work / "b.csv").string() + " --out " + work.string()) == 0);
    CHECK(fs::exists(work / "domination_report.csv"));
    bool some_family = false;
    for (int j = 0; j < 3; ++j)
        if (fs::exists(work / ("family_S" + std::to_string(j) + ".csv"))) some_family = true;
    CHECK(some_family);
    std::string report = slurp(work / "domination_report.csv");
    CHECK(report.find("# cell,lhs,rhs,ratio") != std::string::npos);
    CHECK(report.find("# constant,max_adaptive_C,family_sizes") != std::string::npos);

    // weights certificates
    GridFunction w = GridFunction::sample(
        [](double x) { return 0.1 + x * x; }, box, 64);
    write_grid_function((work / "w.csv").string(), w);
    REQUIRE(run("weights --weight " + (work / "w.csv").string() +
                " --p 1.3333333333333333 --q 4 --out " + work.string()) == 0);
    std::string wcsv = slurp(work / "weights.csv");
    CHECK(wcsv.find("# constant,value,j,k,index") != std::string::npos);
    CHECK(wcsv.find("apq,") != std::string::npos);
    CHECK(wcsv.find("ainfty,") != std::string::npos);

    // kappa with explicit constants
    REQUIRE(run("kappa --m 1 --lambda-apq 2 --mu-apq 2 --out " + work.string()) == 0);
    CHECK(slurp(work / "kappa.csv").find("# kappa_m,q") != std::string::npos);

    // necessity on the root cube
    REQUIRE(run("necessity --b " + (work / "b.csv").string() + " --mu " +
                (work / "w.csv").string() + " --lambda " + (work / "w.csv").string() +
                " --m 1 --out " + work.string()) == 0);
    CHECK(slurp(work / "necessity.csv").find(",1,") != std::string::npos);  // holds flag

    // bloom-check
    REQUIRE(run("bloom-check --mu " + (work / "w.csv").string() + " --lambda " +
                (work / "w.csv").string() + " --b " + (work / "b.csv").string() +
                " --m 1 --trials 3 --seed 5 --out " + work.string()) == 0);
    CHECK(slurp(work / "bloom_check.csv").find("# max_ratio") != std::string::npos);
}

TEST_CASE("config file with CLI override") {
    fs::path work(CLI_WORK_DIR);
    fs::create_directories(work);
    {
        std::ofstream cfg(work / "run.cfg");
        cfg << "# flat key=value configuration\n";
        cfg << "out=" << (work / "cfg_out").string() << "\n";
        cfg << "seed=9\n";
        cfg << "kappa.m=2\n";
        cfg << "kappa.lambda-apq=4\n";
        cfg << "kappa.mu-apq=4\n";
    }
    REQUIRE(run("--config " + (work / "run.cfg").string() + " kappa") == 0);
    CHECK(fs::exists(work / "cfg_out" / "kappa.csv"));
    std::string first = slurp(work / "cfg_out" / "kappa.csv");

    // CLI flag overrides the configured output directory
    REQUIRE(run("--config " + (work / "run.cfg").string() + " --out " +
                (work / "cli_out").string() + " kappa") == 0);
    CHECK(fs::exists(work / "cli_out" / "kappa.csv"));
    CHECK(slurp(work / "cli_out" / "kappa.csv") == first);

    // the emitted plot script is self-contained text
    REQUIRE(run("--emit-plot-script --out " + (work / "plot_out").string() +
                " sharpness --m 0 --grid 4096") == 0);
    CHECK(fs::exists(work / "plot_out" / "sharpness.csv"));
    CHECK(slurp(work / "plot_out" / "plot_sharpness.py").find("matplotlib") !=
          std::string::npos);
}
