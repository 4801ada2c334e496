#include "magdirac/lap.hpp"

#include <cmath>

#include "magdirac/solvers.hpp"

namespace magdirac {

WeightedVector weighted_vector(const LatticeSpec& lat3, double s,
                               X3Profile profile, int transverse_mode,
                               const SparseMatrixZ* H00, std::uint64_t seed) {
  if (s <= 0.5) throw ConfigError("weighted_vector requires s > 1/2");
  const int n3 = lat3.n3();
  const int n12c = 4 * lat3.n12();

  // transverse part
  VecZ trans(n12c);
  if (transverse_mode >= 0) {
    if (!H00) throw ConfigError("transverse mode requested without an operator");
    EighResult e = eig_dense_full(*H00, 1 << 20);
    if (transverse_mode >= H00->n) throw ConfigError("transverse mode out of range");
    for (int i = 0; i < n12c; ++i) trans[i] = e.V(i, transverse_mode);
  } else {
    // centered Gaussian over sites, first spinor component, with a small
    // deterministic random spinor mix to avoid accidental symmetries
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    cd mix[4];
    for (cd& m : mix) m = cd(dist(gen), dist(gen));
    double w1 = lat3.extents[0] / 6.0, w2 = lat3.extents[1] / 6.0;
    for (int n1 = 0; n1 < lat3.points[0]; ++n1)
      for (int n2 = 0; n2 < lat3.points[1]; ++n2) {
        double x1 = lat3.coord(0, n1), x2 = lat3.coord(1, n2);
        double g = std::exp(-x1 * x1 / (2 * w1 * w1) - x2 * x2 / (2 * w2 * w2));
        for (int c = 0; c < 4; ++c)
          trans[lat3.site(n1, n2) * 4 + c] = g * mix[c];
      }
  }

  // x3 profile: decays at least like <x3>^{-s-1}
  std::vector<double> prof(n3);
  double w3 = lat3.extents[2] / 8.0;
  for (int m = 0; m < n3; ++m) {
    double x3 = lat3.coord(2, m);
    if (profile == X3Profile::GaussianX3)
      prof[m] = std::exp(-x3 * x3 / (2 * w3 * w3));
    else
      prof[m] = std::pow(1.0 + x3 * x3, -0.5 * (s + 1.0));
  }

  WeightedVector out;
  out.psi.assign(n12c * n3, cd(0, 0));
  for (int i = 0; i < n12c; ++i)
    for (int m = 0; m < n3; ++m) out.psi[i * n3 + m] = trans[i] * prof[m];
  double nv = norm2(out.psi);
  if (nv == 0) throw SolverError("weighted vector vanished");
  scale(out.psi, cd(1.0 / nv, 0.0));
  double wn = 0;
  for (int i = 0; i < n12c; ++i)
    for (int m = 0; m < n3; ++m) {
      double x3 = lat3.coord(2, m);
      wn += std::pow(1.0 + x3 * x3, s) * std::norm(out.psi[i * n3 + m]);
    }
  out.weighted_norm = std::sqrt(wn);
  return out;
}

ResolventSolve resolvent_apply(const SparseMatrixZ& H, cd z, const VecZ& psi,
                               int dense_cap, const EighResult* eig) {
  const int n = H.n;
  // cheap upper bound on ||H|| for the shift guard
  double row_sum_max = 0;
  for (int i = 0; i < n; ++i) {
    double s = 0;
    for (int k = H.row_ptr[i]; k < H.row_ptr[i + 1]; ++k)
      s += std::abs(H.val[k]);
    row_sum_max = std::max(row_sum_max, s);
  }
  if (std::abs(z.imag()) < 1e-12 * row_sum_max)
    throw ConfigError("resolvent shift too close to the real axis");
  ResolventSolve out;
  auto residual = [&](const VecZ& x) {
    VecZ hx = H.apply(x);
    double s = 0, b = 0;
    for (int i = 0; i < n; ++i) {
      s += std::norm(hx[i] - z * x[i] - psi[i]);
      b += std::norm(psi[i]);
    }
    return std::sqrt(s / b);
  };

  if (eig && eig->V.cols() == n) {
    // spectral solve: x = V (L - z)^{-1} V^dag psi
    Eigen::Map<const Eigen::VectorXcd> pv(psi.data(), n);
    Eigen::VectorXcd c = eig->V.adjoint() * pv;
    for (int i = 0; i < n; ++i) c(i) /= (eig->w[i] - z);
    Eigen::VectorXcd x = eig->V * c;
    out.x.assign(x.data(), x.data() + n);
    out.method = "spectral";
    out.rel_residual = residual(out.x);
    if (out.rel_residual <= 1e-8) return out;
    // fall through to a direct solve when the decomposition is not accurate
    // enough for this shift
  }
  if (n <= dense_cap) {
    Eigen::MatrixXcd A = H.to_dense();
    for (int i = 0; i < n; ++i) A(i, i) -= z;
    Eigen::MatrixXcd b(n, 1);
    for (int i = 0; i < n; ++i) b(i, 0) = psi[i];
    Eigen::MatrixXcd x = solve_dense(A, b);
    out.x.assign(x.data(), x.data() + n);
    out.method = "dense_lu";
    out.rel_residual = residual(out.x);
  } else {
    SolveStats st = cgnr_shifted(H, z, psi, 1e-9, 200000);
    if (!st.converged)
      throw SolverError("iterative resolvent solve exhausted its budget");
    out.x = std::move(st.x);
    out.iterations = st.iterations;
    out.method = "cgnr";
    out.rel_residual = residual(out.x);
  }
  if (out.rel_residual > 1e-8)
    throw SolverError("resolvent solve residual " +
                      std::to_string(out.rel_residual) + " above 1e-8");
  return out;
}

double local_level_spacing(const std::vector<double>& eigs, double lambda,
                           double halfwidth) {
  std::vector<double> in;
  for (double w : eigs)
    if (std::abs(w - lambda) <= halfwidth) in.push_back(w);
  if (in.size() < 2) return 0.0;
  return 2 * halfwidth / static_cast<double>(in.size() - 1);
}

LapScanResult lap_scan(const SparseMatrixZ& H, double lambda, const VecZ& psi,
                       double eps0, int levels, ScanSign sign,
                       const std::vector<double>& spectrum_hint, int dense_cap,
                       const EighResult* eig) {
  if (levels < 4) throw ConfigError("lap_scan needs at least 4 levels");
  if (!spectrum_hint.empty()) {
    double spacing = local_level_spacing(spectrum_hint, lambda,
                                         std::max(0.5, 4 * eps0));
    if (spacing > 0 && eps0 < 5 * spacing)
      throw ConfigError("eps0 below the finite-volume level-spacing floor");
  }

  LapScanResult res;
  res.lambda = lambda;
  res.sign = sign;
  for (int k = 0; k < levels; ++k) {
    double eps = eps0 * std::pow(2.0, -k);
    cd z = cd(lambda, sign == ScanSign::Upper ? eps : -eps);
    ResolventSolve sol = resolvent_apply(H, z, psi, dense_cap, eig);
    cd val = dot(psi, sol.x);
    res.epsilons.push_back(eps);
    res.values.push_back(val);
    res.solver_residuals.push_back(sol.rel_residual);
    double im = val.imag();
    if (sign == ScanSign::Upper ? im < -1e-12 : im > 1e-12)
      res.imag_sign_ok = false;
  }
  for (int k = 1; k < levels; ++k)
    res.diffs.push_back(std::abs(res.values[k] - res.values[k - 1]));

  const int m = static_cast<int>(res.diffs.size());
  auto geometric_tail = [&]() {
    // ratios over the last three diffs
    for (int i = m - 2; i < m; ++i) {
      if (i < 1) return false;
      if (res.diffs[i - 1] == 0) continue;  // already converged
      if (res.diffs[i] > 0.75 * res.diffs[i - 1]) return false;
    }
    return true;
  };
  auto pole_growth = [&]() {
    int grow = 0;
    for (int k = levels - 3; k < levels; ++k) {
      if (k < 1) return false;
      if (std::abs(res.values[k]) >= 2.0 * std::abs(res.values[k - 1])) ++grow;
    }
    return grow == 3;
  };
  if (pole_growth())
    res.verdict = ScanVerdict::Divergent;
  else if (geometric_tail())
    res.verdict = ScanVerdict::Convergent;
  else
    res.verdict = ScanVerdict::Inconclusive;

  if (res.verdict == ScanVerdict::Convergent)
    res.extrapolated_limit =
        2.0 * res.values[levels - 1] - res.values[levels - 2];
  return res;
}

GapEigReport gap_eigenvalues(const std::vector<const SparseMatrixZ*>& levels,
                             std::pair<double, double> gap, double trend,
                             const WindowOptions& opts) {
  if (levels.size() < 2)
    throw ConfigError("gap_eigenvalues needs at least two refinement levels");
  GapEigReport rep;
  rep.trend = trend;
  std::vector<std::vector<int>> mults;
  for (const SparseMatrixZ* H : levels) {
    SpectrumResult s = eig_window(*H, gap.first, gap.second, 200, opts);
    rep.per_level.push_back(s.values);
    mults.push_back(s.multiplicities);
  }
  const auto& coarse = rep.per_level[rep.per_level.size() - 2];
  const auto& fine = rep.per_level.back();
  rep.count_stable = true;
  for (std::size_t l = 1; l < rep.per_level.size(); ++l)
    if (rep.per_level[l].size() != rep.per_level[l - 1].size())
      rep.count_stable = false;

  for (std::size_t i = 0; i < fine.size(); ++i) {
    GapEigenvalue ge;
    ge.value = fine[i];
    ge.multiplicity = mults.back()[i];
    double best = kInf;
    for (double c : coarse) best = std::min(best, std::abs(c - fine[i]));
    ge.movement = coarse.empty() ? kInf : best;
    ge.stable = rep.count_stable && ge.movement < 10 * std::max(trend, 1e-9);
    rep.eigenvalues.push_back(ge);
  }
  return rep;
}

}  // namespace magdirac
