#include "fracsparse/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracsparse {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_grid_function(std::ostream& out, const GridFunction& f) {
    const Box& b = f.box();
    out << "# box_lo,box_side,n,N\n# ";
    out << format_double(b.lo[0]);
    if (b.dim == 2) out << ' ' << format_double(b.lo[1]);
    out << ',' << format_double(b.side) << ',' << b.dim << ',' << f.cells_per_side() << '\n';
    for (int64_t i = 0; i < f.size(); ++i) out << format_double(f[i]) << '\n';
}

void write_grid_function(const std::string& path, const GridFunction& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_grid_function(out, f);
}

GridFunction read_grid_function(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# box_lo", 0) != 0)
        throw std::runtime_error("grid csv: missing header");
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw std::runtime_error("grid csv: missing metadata line");
    std::string meta = line.substr(2);
    std::vector<std::string> fields;
    std::stringstream ss(meta);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(tok);
    if (fields.size() != 4) throw std::runtime_error("grid csv: bad metadata");
    std::stringstream lo_ss(fields[0]);
    std::array<double, 2> lo{0, 0};
    lo_ss >> lo[0];
    int dim = std::stoi(fields[2]);
    if (dim == 2) lo_ss >> lo[1];
    double side = std::stod(fields[1]);
    int64_t n = std::stoll(fields[3]);
    Box box(lo, side, dim);
    std::vector<double> vals;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        vals.push_back(std::stod(line));
    }
    return GridFunction(box, n, std::move(vals));
}

GridFunction read_grid_function(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return read_grid_function(in);
}

void write_sparse_family(std::ostream& out, const SparseFamily& family, int dim) {
    out << "# j,k,index";
    if (dim == 2) out << "0,index1";
    out << ",witness_cells (eta=" << family.eta_num << '/' << family.eta_den << ")\n";
    for (size_t i = 0; i < family.cubes.size(); ++i) {
        const DyadicCube& q = family.cubes[i];
        out << q.lattice << ',' << q.level << ',' << q.idx[0];
        if (dim == 2) out << ',' << q.idx[1];
        out << ',';
        const auto& wit = family.witness[i];
        for (size_t w = 0; w < wit.size(); ++w) {
            if (w) out << ';';
            out << wit[w];
        }
        out << '\n';
    }
}

void write_sparse_family(const std::string& path, const SparseFamily& family, int dim) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_sparse_family(out, family, dim);
}

SparseFamily read_sparse_family(std::istream& in, int dim) {
    SparseFamily family;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# j,k", 0) != 0)
        throw std::runtime_error("sparse csv: missing header");
    auto epos = line.find("eta=");
    if (epos != std::string::npos) {
        size_t slash = line.find('/', epos);
        family.eta_num = std::stoll(line.substr(epos + 4, slash - epos - 4));
        family.eta_den = std::stoll(line.substr(slash + 1));
    }
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> fields;
        while (std::getline(ss, tok, ',')) fields.push_back(tok);
        size_t expected = dim == 2 ? 5 : 4;
        if (fields.size() != expected && fields.size() != expected - 1)
            throw std::runtime_error("sparse csv: bad row");
        DyadicCube q;
        q.lattice = std::stoi(fields[0]);
        q.level = std::stoi(fields[1]);
        q.idx[0] = std::stoll(fields[2]);
        if (dim == 2) q.idx[1] = std::stoll(fields[3]);
        std::vector<int64_t> wit;
        if (fields.size() == expected) {
            std::stringstream ws(fields.back());
            while (std::getline(ws, tok, ';'))
                if (!tok.empty()) wit.push_back(std::stoll(tok));
        }
        family.cubes.push_back(q);
        family.witness.push_back(std::move(wit));
    }
    return family;
}

SparseFamily read_sparse_family(const std::string& path, int dim) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return read_sparse_family(in, dim);
}

}  // namespace fracsparse
