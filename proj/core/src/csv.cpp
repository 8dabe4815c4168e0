#include "cilab/csv.hpp"

#include <cstdio>

#include "cilab/errors.hpp"

namespace cilab {

CsvWriter::CsvWriter(const std::string& path, const std::string& schema,
                     const std::vector<std::string>& columns)
    : out_(path), ncols_(columns.size()) {
  if (!out_) throw Error("cannot write " + path);
  out_ << "schema-version," << schema << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
  out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != ncols_) throw Error("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << cells[i] << (i + 1 < cells.size() ? "," : "");
  out_ << "\n";
}

void CsvWriter::close() { out_.close(); }

std::string CsvWriter::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string CsvWriter::num(long v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%ld", v);
  return buf;
}

}  // namespace cilab
