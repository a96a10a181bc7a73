#pragma once

#include <iosfwd>
#include <string>

#include "fracsparse/dyadic.hpp"
#include "fracsparse/grid.hpp"

namespace fracsparse {

// GridFunction <-> CSV. Header line `# box_lo,box_side,n,N` (lo components
// space-separated for n = 2), then one value per line in row-major cell order.
// Values are printed with 17 significant digits so round-trips are bit-exact.
void write_grid_function(std::ostream& out, const GridFunction& f);
void write_grid_function(const std::string& path, const GridFunction& f);
GridFunction read_grid_function(std::istream& in);
GridFunction read_grid_function(const std::string& path);

// SparseFamily <-> CSV: rows `j,k,index...,witness_cell_list` with the witness
// cells semicolon-separated. j = -1 denotes the base lattice.
void write_sparse_family(std::ostream& out, const SparseFamily& family, int dim);
void write_sparse_family(const std::string& path, const SparseFamily& family, int dim);
SparseFamily read_sparse_family(std::istream& in, int dim);
SparseFamily read_sparse_family(const std::string& path, int dim);

std::string format_double(double v);  // %.17g

}  // namespace fracsparse
