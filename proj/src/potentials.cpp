#include "magdirac/potentials.hpp"

#include <cmath>

namespace magdirac {

namespace {

double norm3(const Vec3& x) {
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

double bracket_x3(double x3) { return std::sqrt(1.0 + x3 * x3); }

double spectral_norm4(const Mat4& M) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(M.adjoint() * M);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace

double ProfileTerm::profile(const Vec3& x) const {
  switch (kind) {
    case Kind::Constant: return A;
    case Kind::Yukawa: return A * std::exp(-par * norm3(x));
    case Kind::PowerX3: return A * std::pow(bracket_x3(x[2]), -par);
    case Kind::PowerR: return A * std::pow(std::sqrt(1.0 + norm3(x) * norm3(x)), -par);
    case Kind::Gaussian: return A * std::exp(-norm3(x) * norm3(x) / (par * par));
  }
  throw ConfigError("unknown profile kind");
}

double ProfileTerm::profile_dx3(const Vec3& x) const {
  double r = norm3(x);
  switch (kind) {
    case Kind::Constant: return 0.0;
    case Kind::Yukawa:
      return r == 0 ? 0.0 : -par * x[2] / r * profile(x);
    case Kind::PowerX3: {
      double b = bracket_x3(x[2]);
      return -par * x[2] / (b * b) * profile(x);
    }
    case Kind::PowerR: {
      double b2 = 1.0 + r * r;
      return -par * x[2] / b2 * profile(x);
    }
    case Kind::Gaussian:
      return -2.0 * x[2] / (par * par) * profile(x);
  }
  throw ConfigError("unknown profile kind");
}

double CutoffChi::eval(const Vec3& x) const {
  double r = norm3(x);
  if (r <= r0) return 1.0;
  if (r >= r1) return 0.0;
  static const SmoothStepF F{};
  return 1.0 - F.eval((r - r0) / (r1 - r0));
}

void PotentialSpec::validate() const {
  if (nu < 0 || nu >= 1)
    throw HypothesisError("coupling nu must lie in [0, 1)");
  if (chi.r1 <= chi.r0 || chi.r0 <= 0)
    throw ConfigError("cutoff radii must satisfy 0 < r0 < r1");
  auto check_herm = [](const Mat4& M, const char* what) {
    if ((M - M.adjoint()).cwiseAbs().maxCoeff() > 1e-14)
      throw ConfigError(std::string(what) + " matrix must be Hermitian");
  };
  check_herm(coulomb_matrix, "coulomb direction");
  for (const auto& t : regular_terms) check_herm(t.mat, "regular term");
  for (const auto& t : vloc_terms) check_herm(t.mat, "vloc term");
}

Mat4 sample_regular(const PotentialSpec& spec, const Vec3& x) {
  Mat4 V = Mat4::Zero();
  for (const auto& t : spec.regular_terms) V += t.profile(x) * t.mat;
  return V;
}

Mat4 sample_singular(const PotentialSpec& spec, const Vec3& x) {
  Mat4 V = Mat4::Zero();
  double chi = spec.chi.eval(x);
  if (chi == 0) return V;
  for (const auto& t : spec.vloc_terms) V += chi * t.profile(x) * t.mat;
  for (const Vec3& a : spec.centers) {
    Vec3 d{x[0] - a[0], x[1] - a[1], x[2] - a[2]};
    double r = norm3(d);
    if (r == 0) throw HypothesisError("potential sampled at a Coulomb center");
    V += chi * spec.nu / r * spec.coulomb_matrix;
  }
  return V;
}

Mat4 sample_potential(const PotentialSpec& spec, const Vec3& x) {
  return sample_regular(spec, x) + sample_singular(spec, x);
}

DecayReport classify_decay(const PotentialSpec& spec,
                           const std::vector<double>& radii,
                           const SmoothStepF& F, int angular_samples,
                           int radial_samples) {
  if (radii.size() < 4 || radii.front() < 1.0)
    throw ConfigError("classify_decay needs an increasing radii grid from >= 1");
  DecayReport rep;
  auto theta = [&](double t) { return F.eval(2 * t - 1); };

  // sup over shells |x| = r' of ||V_reg(x)||, dense angular sampling
  double rmax = radii.back() * 2.0;
  std::vector<double> shell_r, shell_sup;
  for (int i = 0; i <= radial_samples; ++i) {
    double r = 1.0 + (rmax - 1.0) * i / radial_samples;
    double sup = 0;
    for (int a = 0; a < angular_samples; ++a) {
      // deterministic spiral points on the sphere
      double z = -1.0 + 2.0 * (a + 0.5) / angular_samples;
      double phi = 2 * M_PI * a * 0.61803398874989485;
      double rho = std::sqrt(std::max(0.0, 1 - z * z));
      Vec3 x{r * rho * std::cos(phi), r * rho * std::sin(phi), r * z};
      sup = std::max(sup, spectral_norm4(sample_regular(spec, x)));
    }
    shell_r.push_back(r);
    shell_sup.push_back(sup);
  }

  // sup over the x3-slab |x3| >= s, transverse box sampled coarsely
  auto slab_sup = [&](double s, bool weighted_deriv) {
    double sup = 0;
    for (int i = 0; i <= radial_samples; ++i) {
      double x3 = s * (1.0 + 3.0 * i / radial_samples);
      for (int sgn = -1; sgn <= 1; sgn += 2)
        for (int a = 0; a < 8; ++a) {
          double tr = 4.0 * a / 7.0;
          Vec3 x{tr, 0.7 * tr, sgn * x3};
          Mat4 V = Mat4::Zero();
          for (const auto& t : spec.regular_terms)
            V += (weighted_deriv ? bracket_x3(x[2]) * t.profile_dx3(x)
                                 : t.profile(x)) *
                 t.mat;
          sup = std::max(sup, spectral_norm4(V));
        }
    }
    return sup;
  };

  for (double r : radii) {
    // ||theta(|Q|/r) V_reg||: sup over shells weighted by the cutoff
    double sup = 0;
    for (std::size_t i = 0; i < shell_r.size(); ++i)
      sup = std::max(sup, theta(shell_r[i] / r) * shell_sup[i]);
    rep.shell_sup_norms.emplace_back(r, sup);
  }

  // partial integrals of the two decay conditions over the radii grid
  std::vector<std::pair<double, double>> sr_integrand, lr_integrand;
  for (double r : radii) {
    sr_integrand.emplace_back(r, slab_sup(r / 2, false));
    lr_integrand.emplace_back(r, slab_sup(r / 2, true) / r);
  }
  double acc_sr = 0, acc_lr = 0;
  rep.short_range_partial.emplace_back(radii.front(), 0.0);
  rep.long_range_partial.emplace_back(radii.front(), 0.0);
  for (std::size_t i = 1; i < radii.size(); ++i) {
    double dr = radii[i] - radii[i - 1];
    acc_sr += 0.5 * (sr_integrand[i - 1].second + sr_integrand[i].second) * dr;
    acc_lr += 0.5 * (lr_integrand[i - 1].second + lr_integrand[i].second) * dr;
    rep.short_range_partial.emplace_back(radii[i], acc_sr);
    rep.long_range_partial.emplace_back(radii[i], acc_lr);
  }

  rep.fitted_exponent = fit_power_law(rep.shell_sup_norms);

  // verdicts
  double first_sup = rep.shell_sup_norms.front().second;
  double last_sup = rep.shell_sup_norms.back().second;
  rep.small_at_infinity =
      first_sup == 0 || last_sup < 0.2 * std::max(first_sup, 1e-300);
  // short-range: the x3 sup-profile must decay faster than 1/r
  std::vector<std::pair<double, double>> x3_profile;
  for (double r : radii) x3_profile.emplace_back(r, slab_sup(r, false));
  auto safe_exponent = [](const std::vector<std::pair<double, double>>& pts) {
    int nonzero = 0;
    for (auto& p : pts)
      if (p.second > 0) ++nonzero;
    return nonzero >= 2 ? fit_power_law(pts) : -kInf;  // identically zero decays
  };
  rep.short_range = safe_exponent(x3_profile) < -1.0 - 1e-6;
  // long-range: the weighted-derivative integrand must itself be integrable
  rep.long_range = safe_exponent(lr_integrand) < -1.0 - 1e-6;
  return rep;
}

double fit_power_law(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (auto [r, v] : pts) {
    if (v <= 0 || r <= 0) continue;
    double lx = std::log(r), ly = std::log(v);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) throw ConfigError("insufficient radii for a power-law fit");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double coulomb_bound_verify(const PotentialSpec& spec,
                            const std::vector<Vec3>& samples) {
  double worst = -kInf;
  for (const Vec3& x : samples) {
    double chi = spec.chi.eval(x);
    Mat4 Vc = Mat4::Zero();
    double allowance = 0;
    bool at_center = false;
    for (const Vec3& a : spec.centers) {
      Vec3 d{x[0] - a[0], x[1] - a[1], x[2] - a[2]};
      double r = norm3(d);
      if (r == 0) { at_center = true; break; }
      Vc += chi * spec.nu / r * spec.coulomb_matrix;
      allowance += spec.nu / r;
    }
    if (at_center) continue;
    worst = std::max(worst, spectral_norm4(Vc) - allowance);
  }
  return worst == -kInf ? 0.0 : worst;
}

std::vector<Vec3> lattice_sample_points(const LatticeSpec& lat3, int stride) {
  std::vector<Vec3> pts;
  for (int n1 = 0; n1 < lat3.points[0]; n1 += stride)
    for (int n2 = 0; n2 < lat3.points[1]; n2 += stride)
      for (int n3 = 0; n3 < lat3.n3(); n3 += stride)
        pts.push_back({lat3.coord(0, n1), lat3.coord(1, n2), lat3.coord(2, n3)});
  return pts;
}

SparseMatrixZ build_perturbed_h(const SparseMatrixZ& H0, const PotentialSpec& spec,
                                const LatticeSpec& lat3) {
  spec.validate();
  if (H0.layout.spinor_comps != 4 || H0.layout.n3 != lat3.n3())
    throw ConfigError("build_perturbed_h: operator/lattice layout mismatch");
  if (spec.has_singular()) {
    double viol = coulomb_bound_verify(spec, lattice_sample_points(lat3));
    if (viol > 1e-12)
      throw HypothesisError("Coulomb bound violated on lattice samples by " +
                            std::to_string(viol));
    // the half-spacing site offset must keep every center off the grid
    double min_h = std::min({lat3.h(0), lat3.h(1), lat3.h(2)});
    for (const Vec3& a : spec.centers) {
      double best = kInf;
      for (const Vec3& p : lattice_sample_points(lat3)) {
        Vec3 d{p[0] - a[0], p[1] - a[1], p[2] - a[2]};
        best = std::min(best, norm3(d));
      }
      if (best < 0.25 * min_h)
        throw ConfigError("Coulomb center too close to a lattice site");
    }
  }

  const int n3 = lat3.n3();
  CooBuilder b(H0.n);
  for (int n1 = 0; n1 < lat3.points[0]; ++n1)
    for (int n2 = 0; n2 < lat3.points[1]; ++n2)
      for (int m = 0; m < n3; ++m) {
        Vec3 x{lat3.coord(0, n1), lat3.coord(1, n2), lat3.coord(2, m)};
        Mat4 V = sample_potential(spec, x);
        int site = lat3.site(n1, n2);
        for (int ci = 0; ci < 4; ++ci)
          for (int cj = 0; cj < 4; ++cj)
            if (V(ci, cj) != cd(0, 0))
              b.add((site * 4 + ci) * n3 + m, (site * 4 + cj) * n3 + m, V(ci, cj));
      }
  SparseMatrixZ Vop = b.compress(true, H0.layout);
  SparseMatrixZ H = sparse_add(H0, Vop);
  H.hermitian = true;
  if (H.hermiticity_residual() > 1e-12)
    throw SolverError("perturbed operator lost Hermiticity");
  return H;
}

LocalizationDecay resolvent_localization_decay(
    const SparseMatrixZ& H_reg, const SparseMatrixZ& H, cd z,
    const std::vector<double>& radii, const SmoothStepF& F,
    const LatticeSpec& lat3, int dense_cap) {
  if (H_reg.n != H.n) throw ConfigError("operator dimensions differ");
  if (H.n > dense_cap)
    throw SolverError("resolvent difference needs the dense path");

  // guard: z must stay away from both spectra
  for (const SparseMatrixZ* op : {&H_reg, &H}) {
    EighResult e = eigh_dense(op->to_dense(), false);
    for (double w : e.w)
      if (std::abs(cd(w, 0) - z) < 1e-6)
        throw SolverError("shift z too close to a spectrum");
  }

  const int n = H.n;
  Eigen::MatrixXcd A = H_reg.to_dense();
  Eigen::MatrixXcd B = H.to_dense();
  for (int i = 0; i < n; ++i) {
    A(i, i) -= z;
    B(i, i) -= z;
  }
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd D = solve_dense(A, I) - solve_dense(B, I);

  // |x| per flattened index
  const int n3 = lat3.n3();
  std::vector<double> rad(n);
  for (int n1 = 0; n1 < lat3.points[0]; ++n1)
    for (int n2 = 0; n2 < lat3.points[1]; ++n2)
      for (int c = 0; c < 4; ++c)
        for (int m = 0; m < n3; ++m) {
          Vec3 x{lat3.coord(0, n1), lat3.coord(1, n2), lat3.coord(2, m)};
          rad[(lat3.site(n1, n2) * 4 + c) * n3 + m] = norm3(x);
        }

  LocalizationDecay out;
  for (double r : radii) {
    Eigen::VectorXd th(n);
    for (int i = 0; i < n; ++i) th(i) = F.eval(2 * rad[i] / r - 1);
    double nrm = 0;
    if (th.maxCoeff() > 0) {
      Eigen::MatrixXcd M = th.asDiagonal() * D;
      nrm = spectral_norm_dense(M);
    }
    out.norms.emplace_back(r, nrm);
  }
  std::vector<std::pair<double, double>> nonzero;
  for (auto& p : out.norms)
    if (p.second > 0) nonzero.push_back(p);
  out.fitted_exponent = fit_power_law(nonzero);
  out.short_range_like = out.fitted_exponent < -1.0;
  return out;
}

}  // namespace magdirac
