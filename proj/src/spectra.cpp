#include "magdirac/spectra.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "magdirac/solvers.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace magdirac {

EighResult eig_dense_full(const SparseMatrixZ& M, int dense_cap, bool vectors) {
  if (M.n > dense_cap)
    throw SolverError("dimension " + std::to_string(M.n) +
                      " exceeds the dense cap " + std::to_string(dense_cap));
  return eigh_dense(M.to_dense(), vectors);
}

SpectrumResult spectrum_from_pairs(const SparseMatrixZ& M,
                                   const std::vector<double>& w,
                                   const Eigen::MatrixXcd& V, EigMethod method,
                                   double tol) {
  SpectrumResult res;
  res.method = method;
  res.raw_values = w;
  double nrm = w.empty() ? 0.0
                         : std::max(std::abs(w.front()), std::abs(w.back()));
  res.cluster_tol = tol > 0 ? tol : cluster_tolerance(nrm);

  res.residual_norms.resize(w.size());
  VecZ hv(M.n);
#pragma omp parallel for schedule(static) firstprivate(hv)
  for (int i = 0; i < static_cast<int>(w.size()); ++i) {
    M.apply(V.col(i).data(), hv.data());
    double s = 0;
    for (int r = 0; r < M.n; ++r) s += std::norm(hv[r] - w[i] * V(r, i));
    res.residual_norms[i] = std::sqrt(s);
  }

  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i + 1;
    while (j < w.size() && w[j] - w[j - 1] <= res.cluster_tol) ++j;
    double mean = 0;
    for (std::size_t k = i; k < j; ++k) mean += w[k];
    res.values.push_back(mean / (j - i));
    res.multiplicities.push_back(static_cast<int>(j - i));
    i = j;
  }
  return res;
}

SpectrumResult eig_dense(const SparseMatrixZ& M, int dense_cap) {
  EighResult e = eig_dense_full(M, dense_cap);
  return spectrum_from_pairs(M, e.w, e.V, EigMethod::Dense);
}

namespace {

// Eigen-decomposition of a real symmetric tridiagonal matrix.
void tridiag_eig(std::vector<double>& diag, std::vector<double>& off,
                 Eigen::MatrixXd& Z) {
  const int m = static_cast<int>(diag.size());
  Z.resize(m, m);
  Z.setIdentity();
  int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', m, diag.data(), off.data(),
                           Z.data(), m);
  if (info != 0) throw SolverError("dstev failed, info=" + std::to_string(info));
}

}  // namespace

SpectrumResult eig_window(const SparseMatrixZ& M, double lo, double hi,
                          int max_count, const WindowOptions& opts,
                          Eigen::MatrixXcd* vectors_out) {
  if (!(lo < hi)) throw ConfigError("eig_window: empty window");
  const int n = M.n;
  const double sigma = 0.5 * (lo + hi);
  const double mnorm = normest(M);
  const double rtol = opts.residual_tol * std::max(mnorm, 1e-300);

  int expected = -1;
  if (n <= opts.dense_cap) {
    Eigen::MatrixXcd D = M.to_dense();
    expected = inertia_below(D, hi) - inertia_below(D, lo);
    if (expected > max_count)
      throw SolverError("window too wide: " + std::to_string(expected) +
                        " eigenvalues exceed max_count");
  }

  // Factorize M - sigma I once.
  Eigen::SparseMatrix<cd> S = M.to_eigen();
  for (int i = 0; i < n; ++i) S.coeffRef(i, i) -= sigma;
  S.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<cd>> lu;
  lu.compute(S);
  if (lu.info() != Eigen::Success)
    throw SolverError("shift-invert factorization failed at the window midpoint");

  auto op = [&](const VecZ& x) {
    Eigen::Map<const Eigen::VectorXcd> xv(x.data(), n);
    Eigen::VectorXcd y = lu.solve(xv);
    return VecZ(y.data(), y.data() + n);
  };

  std::vector<VecZ> found;
  std::vector<double> found_vals;

  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    if (expected >= 0 && static_cast<int>(found.size()) >= expected) break;
    VecZ v = random_unit_vector(n, opts.seed + restart);
    for (const VecZ& f : found) axpy(-dot(f, v), f, v);
    double nv = norm2(v);
    if (nv < 1e-12) break;
    scale(v, cd(1.0 / nv, 0.0));

    std::vector<VecZ> basis{v};
    std::vector<double> alpha, beta;
    int m_steps = std::min(opts.max_basis, n);
    for (int j = 0; j < m_steps; ++j) {
      VecZ w = op(basis[j]);
      double a = dot(basis[j], w).real();
      alpha.push_back(a);
      for (std::size_t i = 0; i < basis.size(); ++i)
        axpy(-dot(basis[i], w), basis[i], w);
      for (const VecZ& f : found) axpy(-dot(f, w), f, w);
      // second reorthogonalization pass for stability
      for (std::size_t i = 0; i < basis.size(); ++i)
        axpy(-dot(basis[i], w), basis[i], w);
      double b = norm2(w);
      if (b < 1e-13 || j == m_steps - 1) break;
      beta.push_back(b);
      scale(w, cd(1.0 / b, 0.0));
      basis.push_back(std::move(w));
    }

    const int m = static_cast<int>(basis.size());
    std::vector<double> d(alpha.begin(), alpha.begin() + m);
    std::vector<double> e(beta.begin(), beta.begin() + std::max(0, m - 1));
    Eigen::MatrixXd Z;
    tridiag_eig(d, e, Z);

    bool any_new = false;
    for (int i = 0; i < m; ++i) {
      double theta = d[i];
      if (theta == 0) continue;
      double lam = sigma + 1.0 / theta;
      if (lam <= lo || lam >= hi) continue;
      VecZ y(n, cd(0, 0));
      for (int j = 0; j < m; ++j) axpy(cd(Z(j, i), 0), basis[j], y);
      for (const VecZ& f : found) axpy(-dot(f, y), f, y);
      double ny = norm2(y);
      if (ny < 1e-8) continue;
      scale(y, cd(1.0 / ny, 0.0));
      // Rayleigh quotient + residual on the original operator
      VecZ hy = M.apply(y);
      double rq = dot(y, hy).real();
      double resid = 0;
      for (int r = 0; r < n; ++r) resid += std::norm(hy[r] - rq * y[r]);
      resid = std::sqrt(resid);
      if (resid > rtol) continue;
      if (rq <= lo || rq >= hi) continue;
      found.push_back(std::move(y));
      found_vals.push_back(rq);
      any_new = true;
      if (static_cast<int>(found.size()) > max_count)
        throw SolverError("window too wide: found more than max_count pairs");
    }
    if (!any_new && (expected < 0 || static_cast<int>(found.size()) >= expected))
      break;
  }

  if (expected >= 0 && static_cast<int>(found.size()) != expected)
    throw SolverError("shift-invert Lanczos found " +
                      std::to_string(found.size()) + " of " +
                      std::to_string(expected) +
                      " certified eigenvalues in the window");

  // sort pairs by eigenvalue
  std::vector<int> order(found.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return found_vals[a] < found_vals[b]; });
  std::vector<double> w_sorted;
  Eigen::MatrixXcd V(n, found.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    w_sorted.push_back(found_vals[order[i]]);
    for (int r = 0; r < n; ++r) V(r, i) = found[order[i]][r];
  }
  SpectrumResult res = spectrum_from_pairs(M, w_sorted, V, EigMethod::ShiftInvert,
                                           cluster_tolerance(mnorm));
  res.count_certified = expected >= 0;
  if (vectors_out) *vectors_out = std::move(V);
  return res;
}

SymmetrizedSpectrum symmetrize_values(const std::vector<double>& vals, double tol,
                                      const std::string& source) {
  if (tol <= 0) throw ConfigError("symmetrize: tolerance must be positive");
  std::vector<double> all;
  all.reserve(2 * vals.size());
  for (double v : vals) {
    all.push_back(v);
    all.push_back(-v);
  }
  std::sort(all.begin(), all.end());
  SymmetrizedSpectrum sym;
  sym.resolution = tol;
  sym.source = source;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i + 1;
    while (j < all.size() && all[j] - all[j - 1] <= tol) ++j;
    double mean = 0;
    for (std::size_t k = i; k < j; ++k) mean += all[k];
    mean /= (j - i);
    // values within tol of zero collapse onto zero to keep the set symmetric
    if (std::abs(mean) <= tol) mean = 0;
    sym.values.push_back(mean);
    i = j;
  }
  sym.mu0 = kInf;
  for (double v : sym.values) sym.mu0 = std::min(sym.mu0, std::abs(v));
  if (sym.values.empty()) sym.mu0 = 0;
  return sym;
}

SymmetrizedSpectrum symmetrize(const SpectrumResult& spec, double tol) {
  return symmetrize_values(spec.raw_values, tol, "spectrum");
}

GapList find_gaps(const SymmetrizedSpectrum& sym, std::pair<double, double> range,
                  double min_width) {
  if (min_width <= sym.resolution)
    throw ConfigError("find_gaps: min_width must exceed the cluster resolution");
  GapList gaps;
  gaps.resolution = sym.resolution;
  std::vector<double> pts;
  for (double v : sym.values)
    if (v > range.first && v < range.second) pts.push_back(v);
  double prev = range.first;
  auto push = [&](double a, double b) {
    if (b - a >= min_width) gaps.intervals.emplace_back(a, b);
  };
  for (double v : pts) {
    push(prev, v);
    prev = v;
  }
  push(prev, range.second);
  return gaps;
}

SigmaSet3D assemble_sigma_3d(const SymmetrizedSpectrum& sym) {
  SigmaSet3D s;
  s.mu0 = sym.mu0;
  s.full_line = sym.mu0 <= sym.resolution;
  return s;
}

}  // namespace magdirac
