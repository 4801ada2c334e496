#include "magdirac/reports.hpp"

#include <sys/stat.h>

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace magdirac {

std::string CsvWriter::format(double v) {
  char buf[48];
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& config_hash,
                     const std::vector<std::string>& columns) {
  f_ = std::fopen(path.c_str(), "wb");
  if (!f_) throw ConfigError("cannot open for writing: " + path);
  std::fprintf(f_, "# %s config=%s\n", kVersion, config_hash.c_str());
  for (std::size_t i = 0; i < columns.size(); ++i)
    std::fprintf(f_, "%s%s", columns[i].c_str(),
                 i + 1 == columns.size() ? "\n" : ",");
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    std::fprintf(f_, "%s%s", format(values[i]).c_str(),
                 i + 1 == values.size() ? "\n" : ",");
}

void CsvWriter::row_mixed(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    std::fprintf(f_, "%s%s", cells[i].c_str(),
                 i + 1 == cells.size() ? "\n" : ",");
}

void write_json_report(const std::string& path, const std::string& config_hash,
                       const std::string& body_json) {
  nlohmann::json j = nlohmann::json::parse(body_json);
  nlohmann::json out;
  out["_version"] = kVersion;
  out["_config"] = config_hash;
  for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value();
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw ConfigError("cannot open for writing: " + path);
  std::string s = out.dump(2);
  std::fwrite(s.data(), 1, s.size(), f);
  std::fputc('\n', f);
  std::fclose(f);
}

std::string ensure_dir(const std::string& dir) {
  if (dir.empty()) return ".";
  std::string acc;
  for (std::size_t i = 0; i < dir.size(); ++i) {
    acc += dir[i];
    if (dir[i] == '/' || i + 1 == dir.size()) {
      if (acc == "/" || acc.empty()) continue;
      ::mkdir(acc.c_str(), 0755);
    }
  }
  struct stat st{};
  if (::stat(dir.c_str(), &st) != 0 || !S_ISDIR(st.st_mode))
    throw ConfigError("cannot create output directory: " + dir);
  return dir;
}

}  // namespace magdirac
