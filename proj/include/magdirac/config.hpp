#pragma once

#include <optional>
#include <string>

#include "magdirac/lattice.hpp"
#include "magdirac/potentials.hpp"
#include "magdirac/step.hpp"

namespace magdirac {

struct MourreConfig {
  std::string mode = "formula";  // or "measured"
  double lambda_min = 0, lambda_max = 2;
  int lambda_count = 40;
  double epsilon = 0.05;
  bool mirrored = true;
};

struct InternalSpectrumConfig {
  double search_lo = 0, search_hi = 3;
  double min_gap_width = 0.05;
  std::string export_operator;  // optional coordinate-list path
};

struct PerturbedConfig {
  std::vector<double> radii;
  std::optional<std::pair<double, double>> gap;  // default: widest found
  std::array<int, 3> refined_points{0, 0, 0};
};

struct LapConfig {
  std::vector<double> lambdas;
  double eps0 = 0.5;
  int levels = 6;
  std::string sign = "upper";
  double s = 1.0;
  std::string profile = "gaussian_x3";
  int transverse_mode = -1;
  bool use_potential = true;
};

struct RunConfig {
  std::uint64_t seed = 1;
  double mass = 1.0;
  double wilson_r = 1.0;
  int dense_cap = kDefaultDenseCap;
  int threads = 0;
  SmoothStepF step;
  FieldSpec field;
  LatticeSpec lattice;
  std::optional<PotentialSpec> potential;
  InternalSpectrumConfig internal_spectrum;
  MourreConfig mourre;
  PerturbedConfig perturbed;
  LapConfig lap;

  std::string canonical;      // normalized JSON text
  std::string config_hash;    // fnv-1a of the canonical text, hex
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

}  // namespace magdirac
