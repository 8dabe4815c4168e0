#pragma once

#include <string>

#include "cilab/field.hpp"

namespace cilab {

/// Raw field dump: one-line JSON header {d, n, kind, time_index}, then the
/// samples as little-endian float64 in row-major axis order (components
/// sequentially for vector/symtensor kinds).  Extension ".tfd".
void write_tfd(const std::string& path, const ScalarField& f, int time_index);
void write_tfd(const std::string& path, const VectorField& f, int time_index);
void write_tfd(const std::string& path, const SymTensorField& f, int time_index);

struct TfdHeader {
  int d = 0;
  int n = 0;
  std::string kind;
  int time_index = 0;
};

TfdHeader read_tfd_header(const std::string& path);
ScalarField read_tfd_scalar(const std::string& path);
VectorField read_tfd_vector(const std::string& path);

}  // namespace cilab
