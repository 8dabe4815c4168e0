#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace cilab {

/// CSV writer with a schema-version line on top and locale-independent
/// %.17g doubles, so identical runs produce byte-identical files.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& schema,
            const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& cells);
  void close();

  static std::string num(double v);
  static std::string num(long v);

 private:
  std::ofstream out_;
  std::size_t ncols_;
};

}  // namespace cilab
