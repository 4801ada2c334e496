#include "magdirac/mourre.hpp"

#include <cmath>

namespace magdirac {

double mourre_lower_bound(double lambda, const SymmetrizedSpectrum& sym,
                          const SmoothStepF& F) {
  const double al = std::abs(lambda);
  bool empty = true;
  double best = kInf;
  for (double mu : sym.values) {
    if (mu < 0 || mu > al) continue;
    empty = false;
    if (al == 0) return 0.0;  // lambda = 0 with 0 in the set
    double s = std::sqrt(std::max(al * al - mu * mu, 0.0));
    best = std::min(best, F.eval(s) * s / al);
  }
  return empty ? kInf : best;
}

MourreVerifier::MourreVerifier(const SparseMatrixZ& H0, const BuiltTR& tr,
                               int dense_cap)
    : H0_(&H0), tr_(&tr) {
  if (!tr.dense_path)
    throw SolverError("Mourre verification requires the dense-capable path");
  eig_ = eig_dense_full(H0, dense_cap);
  hnorm_ = std::max(std::abs(eig_.w.front()), std::abs(eig_.w.back()));
}

Eigen::MatrixXcd MourreVerifier::window_basis(double lambda, double eps) const {
  const int n = H0_->n;
  std::vector<int> idx;
  for (int i = 0; i < n; ++i)
    if (eig_.w[i] > lambda - eps && eig_.w[i] < lambda + eps) idx.push_back(i);
  Eigen::MatrixXcd V(n, idx.size());
  for (std::size_t c = 0; c < idx.size(); ++c) V.col(c) = eig_.V.col(idx[c]);
  return V;
}

int MourreVerifier::window_dim(double lambda, double eps) const {
  return static_cast<int>(window_basis(lambda, eps).cols());
}

namespace {

Eigen::MatrixXcd project_sparse(const SparseMatrixZ& S, const Eigen::MatrixXcd& V) {
  const int k = static_cast<int>(V.cols());
  Eigen::MatrixXcd SV(V.rows(), k);
  for (int c = 0; c < k; ++c) S.apply(V.col(c).data(), SV.col(c).data());
  return V.adjoint() * SV;
}

double min_eig_hermitian(const Eigen::MatrixXcd& P) {
  if (P.rows() == 0) return kInf;
  EighResult e = eigh_dense(P, false);
  return e.w.front();
}

}  // namespace

double MourreVerifier::measured_rho_T(double lambda, double eps, int sign) const {
  Eigen::MatrixXcd V = window_basis(lambda, eps);
  if (V.cols() == 0) return kInf;
  Eigen::MatrixXcd P = project_sparse(tr_->T, V);
  if (sign < 0) P = -P;
  return min_eig_hermitian(P);
}

double MourreVerifier::measured_rho_R(double lambda, double eps) const {
  Eigen::MatrixXcd V = window_basis(lambda, eps);
  if (V.cols() == 0) return kInf;
  Eigen::MatrixXcd P = V.adjoint() * (tr_->R_dense * V);
  return min_eig_hermitian(P);
}

double MourreVerifier::rho_t_vs_r(double lambda, double eps) const {
  if (!(std::abs(lambda) > eps) || eps <= 0)
    throw ConfigError("window must stay strictly on one side of zero");
  Eigen::MatrixXcd V = window_basis(lambda, eps);
  if (V.cols() == 0) return 0.0;
  Eigen::MatrixXcd PT = project_sparse(tr_->T, V);
  if (lambda < 0) PT = -PT;  // sign-flipped commutator on the negative side
  Eigen::MatrixXcd PR = V.adjoint() * (tr_->R_dense * V);
  return spectral_norm_dense(PT - PR);
}

MourreReport MourreVerifier::verify(double lambda, double eps,
                                    const SymmetrizedSpectrum& sym_discrete,
                                    const SmoothStepF& F, int sign) const {
  MourreReport rep;
  rep.lambda = lambda;
  rep.epsilon = eps;
  Eigen::MatrixXcd V = window_basis(lambda, eps);
  rep.window_dim = static_cast<int>(V.cols());
  if (rep.window_dim == 0) {
    rep.measured_inf = kInf;
  } else {
    Eigen::MatrixXcd P = project_sparse(tr_->T, V);
    if (sign < 0) P = -P;
    rep.measured_inf = min_eig_hermitian(P);
  }

  // Worst case of the formula over the window: sample a grid plus every
  // spectral point inside the window (the formula vanishes there).
  double worst = kInf;
  const int grid = 200;
  auto consider = [&](double l) {
    worst = std::min(worst, mourre_lower_bound(l, sym_discrete, F));
  };
  for (int i = 0; i <= grid; ++i)
    consider(lambda - eps + 2 * eps * i / grid);
  for (double mu : sym_discrete.values)
    if (std::abs(mu) > std::abs(lambda) - eps && std::abs(mu) < std::abs(lambda) + eps)
      consider(sign > 0 ? std::abs(mu) : -std::abs(mu));
  rep.bound_formula = worst;

  if (rep.window_dim > 0 && std::abs(lambda) > eps)
    rep.t_vs_r_deviation = rho_t_vs_r(lambda, eps);
  return rep;
}

}  // namespace magdirac
