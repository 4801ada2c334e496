#pragma once

#include <string>
#include <vector>

#include "magdirac/core.hpp"

namespace magdirac {

// CSV emission with a fixed numeric format (17 significant digits, '.')
// and a leading comment line carrying the toolkit version and config hash,
// so identical configurations produce byte-identical files.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& config_hash,
            const std::vector<std::string>& columns);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& cells);

  static std::string format(double v);

 private:
  std::FILE* f_ = nullptr;
};

void write_json_report(const std::string& path, const std::string& config_hash,
                       const std::string& body_json);

std::string ensure_dir(const std::string& dir);

}  // namespace magdirac
