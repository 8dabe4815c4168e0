#include "cilab/tfd_io.hpp"

#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "cilab/errors.hpp"

namespace cilab {

namespace {

void write_header(std::ofstream& out, int d, int n, const char* kind, int time_index) {
  nlohmann::json h;
  h["d"] = d;
  h["n"] = n;
  h["kind"] = kind;
  h["time_index"] = time_index;
  out << h.dump() << "\n";
}

void write_samples(std::ofstream& out, const std::vector<double>& v) {
  static_assert(sizeof(double) == 8);
  // Little-endian hosts write directly; this tool targets x86-64.
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::ifstream open_checked(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return in;
}

TfdHeader parse_header(std::istream& in) {
  std::string line;
  std::getline(in, line);
  auto h = nlohmann::json::parse(line);
  TfdHeader out;
  out.d = h.at("d").get<int>();
  out.n = h.at("n").get<int>();
  out.kind = h.at("kind").get<std::string>();
  out.time_index = h.at("time_index").get<int>();
  return out;
}

void read_samples(std::istream& in, std::vector<double>& v) {
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!in) throw Error("truncated .tfd payload");
}

}  // namespace

void write_tfd(const std::string& path, const ScalarField& f, int time_index) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write_header(out, f.grid().dim(), f.grid().points_per_axis(), "scalar", time_index);
  write_samples(out, f.values());
}

void write_tfd(const std::string& path, const VectorField& f, int time_index) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write_header(out, f.grid().dim(), f.grid().points_per_axis(), "vector", time_index);
  for (int a = 0; a < f.components(); ++a) write_samples(out, f.comp(a).values());
}

void write_tfd(const std::string& path, const SymTensorField& f, int time_index) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write_header(out, f.grid().dim(), f.grid().points_per_axis(), "symtensor", time_index);
  for (int k = 0; k < f.components(); ++k) write_samples(out, f.comp(k).values());
}

TfdHeader read_tfd_header(const std::string& path) {
  auto in = open_checked(path);
  return parse_header(in);
}

ScalarField read_tfd_scalar(const std::string& path) {
  auto in = open_checked(path);
  TfdHeader h = parse_header(in);
  if (h.kind != "scalar") throw Error(path + " is not a scalar dump");
  ScalarField f((TorusGrid(h.d, h.n)));
  read_samples(in, f.values());
  return f;
}

VectorField read_tfd_vector(const std::string& path) {
  auto in = open_checked(path);
  TfdHeader h = parse_header(in);
  if (h.kind != "vector") throw Error(path + " is not a vector dump");
  VectorField f((TorusGrid(h.d, h.n)));
  for (int a = 0; a < f.components(); ++a) read_samples(in, f.comp(a).values());
  return f;
}

}  // namespace cilab
