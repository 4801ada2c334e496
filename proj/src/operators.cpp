#include "magdirac/operators.hpp"

#include <cmath>

namespace magdirac {

namespace {

const cd I(0, 1);

// Link phase for the hop site -> site+e_axis. Returns false when the hop
// leaves the lattice (Dirichlet) so the caller drops it.
struct LinkTable {
  // phase[axis][site]; wrap flags handled during construction
  std::vector<cd> phase1, phase2;
  std::vector<bool> alive1, alive2;
};

LinkTable make_links(const LatticeSpec& lat, const GaugeField& gauge) {
  const int N1 = lat.points[0], N2 = lat.points[1];
  LinkTable t;
  t.phase1.assign(lat.n12(), cd(1, 0));
  t.phase2.assign(lat.n12(), cd(1, 0));
  t.alive1.assign(lat.n12(), true);
  t.alive2.assign(lat.n12(), true);

  if (lat.boundary == Boundary::MagneticPeriodic) {
    lat.validate_flux(gauge.field);
    const double alpha = gauge.field.B0 * lat.h(0) * lat.h(1);
    for (int n1 = 0; n1 < N1; ++n1)
      for (int n2 = 0; n2 < N2; ++n2) {
        int s = lat.site(n1, n2);
        // Landau-gauge links: x-hops trivial except the seam, which carries
        // the magnetic-translation twist; y-hops carry exp(-i alpha n1).
        t.phase1[s] = (n1 == N1 - 1) ? std::exp(I * (alpha * N1 * n2)) : cd(1, 0);
        t.phase2[s] = std::exp(-I * (alpha * n1));
      }
  } else {
    for (int n1 = 0; n1 < N1; ++n1)
      for (int n2 = 0; n2 < N2; ++n2) {
        int s = lat.site(n1, n2);
        double x1 = lat.coord(0, n1), x2 = lat.coord(1, n2);
        if (n1 + 1 < N1) {
          auto [a1, a2] = gauge.at(x1 + 0.5 * lat.h(0), x2);
          t.phase1[s] = std::exp(-I * (lat.h(0) * a1));
        } else {
          t.alive1[s] = false;
        }
        if (n2 + 1 < N2) {
          auto [a1, a2] = gauge.at(x1, x2 + 0.5 * lat.h(1));
          t.phase2[s] = std::exp(-I * (lat.h(1) * a2));
        } else {
          t.alive2[s] = false;
        }
      }
  }
  return t;
}

int neighbor(const LatticeSpec& lat, int n1, int n2, int axis) {
  const int N1 = lat.points[0], N2 = lat.points[1];
  if (axis == 1) return lat.site((n1 + 1) % N1, n2);
  return lat.site(n1, (n2 + 1) % N2);
}

}  // namespace

SparseMatrixZ build_pi(const LatticeSpec& lat, const GaugeField& gauge, int axis) {
  if (axis != 1 && axis != 2) throw ConfigError("build_pi: axis must be 1 or 2");
  lat.validate();
  LinkTable links = make_links(lat, gauge);
  const double h = lat.h(axis - 1);
  CooBuilder b(lat.n12());
  for (int n1 = 0; n1 < lat.points[0]; ++n1)
    for (int n2 = 0; n2 < lat.points[1]; ++n2) {
      int s = lat.site(n1, n2);
      bool alive = axis == 1 ? links.alive1[s] : links.alive2[s];
      if (!alive) continue;
      cd u = axis == 1 ? links.phase1[s] : links.phase2[s];
      int t = neighbor(lat, n1, n2, axis);
      // (-i/2h) * U on the forward hop; Hermitian conjugate on the backward.
      b.add_herm(s, t, -I / (2 * h) * u);
    }
  return b.compress(true, LayoutMeta{1, lat.n12(), 1});
}

SparseMatrixZ build_wilson(const LatticeSpec& lat, const GaugeField& gauge) {
  lat.validate();
  LinkTable links = make_links(lat, gauge);
  CooBuilder b(lat.n12());
  for (int axis = 1; axis <= 2; ++axis) {
    const double h = lat.h(axis - 1);
    for (int n1 = 0; n1 < lat.points[0]; ++n1)
      for (int n2 = 0; n2 < lat.points[1]; ++n2) {
        int s = lat.site(n1, n2);
        b.add(s, s, 1.0 / h);
        bool alive = axis == 1 ? links.alive1[s] : links.alive2[s];
        if (!alive) continue;
        cd u = axis == 1 ? links.phase1[s] : links.phase2[s];
        int t = neighbor(lat, n1, n2, axis);
        b.add_herm(s, t, -u / (2 * h));
      }
  }
  return b.compress(true, LayoutMeta{1, lat.n12(), 1});
}

namespace {

SparseMatrixZ assemble_internal(const LatticeSpec& lat, const GaugeField& gauge,
                                double m, double wilson_r,
                                const Eigen::MatrixXcd& s1,
                                const Eigen::MatrixXcd& s2,
                                const Eigen::MatrixXcd& s3) {
  if (m <= 0) throw ConfigError("mass must be positive");
  if (wilson_r < 0) throw ConfigError("wilson_r must be non-negative");
  SparseMatrixZ pi1 = build_pi(lat, gauge, 1);
  SparseMatrixZ pi2 = build_pi(lat, gauge, 2);
  SparseMatrixZ mass = sparse_identity(lat.n12());
  for (cd& v : mass.val) v *= m;
  if (wilson_r > 0)
    mass = sparse_add(mass, build_wilson(lat, gauge), 1.0, wilson_r);
  SparseMatrixZ H = sparse_add(kron_sparse_dense(pi1, s1),
                               kron_sparse_dense(pi2, s2));
  H = sparse_add(H, kron_sparse_dense(mass, s3));
  H.hermitian = true;
  H.layout = LayoutMeta{static_cast<int>(s1.rows()), lat.n12(), 1};
  return H;
}

}  // namespace

SparseMatrixZ build_internal_h(const LatticeSpec& lat, const GaugeField& gauge,
                               double m, double wilson_r) {
  DiracMatrixSet d = dirac_matrices();
  return assemble_internal(lat, gauge, m, wilson_r, d.sigma1, d.sigma2, d.sigma3);
}

SparseMatrixZ build_internal_h4(const LatticeSpec& lat, const GaugeField& gauge,
                                double m, double wilson_r) {
  DiracMatrixSet d = dirac_matrices();
  return assemble_internal(lat, gauge, m, wilson_r, d.alpha1, d.alpha2, d.beta);
}

SparseMatrixZ spinor_op(const LatticeSpec& lat, const Eigen::MatrixXcd& S) {
  const int c = static_cast<int>(S.rows());
  const int n3 = lat.n3();
  CooBuilder b(lat.n12() * c * n3);
  for (int s = 0; s < lat.n12(); ++s)
    for (int ci = 0; ci < c; ++ci)
      for (int cj = 0; cj < c; ++cj) {
        if (S(ci, cj) == cd(0, 0)) continue;
        for (int n = 0; n < n3; ++n)
          b.add((s * c + ci) * n3 + n, (s * c + cj) * n3 + n, S(ci, cj));
      }
  return b.compress(S.isApprox(S.adjoint()), LayoutMeta{c, lat.n12(), n3});
}

SparseMatrixZ build_fiber_h(const SparseMatrixZ& H00, double xi) {
  if (H00.layout.spinor_comps != 4)
    throw ConfigError("build_fiber_h expects the 4-component operator");
  DiracMatrixSet d = dirac_matrices();
  CooBuilder b(H00.n);
  for (int s = 0; s < H00.layout.n12; ++s)
    for (int ci = 0; ci < 4; ++ci)
      for (int cj = 0; cj < 4; ++cj)
        if (d.alpha3(ci, cj) != cd(0, 0))
          b.add(s * 4 + ci, s * 4 + cj, xi * d.alpha3(ci, cj));
  SparseMatrixZ shift = b.compress(true, H00.layout);
  return sparse_add(H00, shift);
}

Eigen::MatrixXcd p3_matrix(const LatticeSpec& lat3) {
  return function_of_p3(lat3, [](double xi) { return xi; });
}

Eigen::MatrixXcd function_of_p3(const LatticeSpec& lat3,
                                const std::function<double(double)>& fn) {
  const int n = lat3.n3();
  std::vector<double> xi = fourier_xi(lat3);
  Eigen::MatrixXcd phi(n, n);
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m)
      phi(m, k) = std::exp(I * (2 * M_PI * k * m / static_cast<double>(n))) *
                  inv_sqrt;
  Eigen::VectorXcd d(n);
  for (int k = 0; k < n; ++k) d(k) = fn(xi[k]);
  Eigen::MatrixXcd M = phi * d.asDiagonal() * phi.adjoint();
  // functions of a Hermitian argument: clean tiny asymmetric roundoff
  M = 0.5 * (M + M.adjoint()).eval();
  return M;
}

SparseMatrixZ build_h0_3d(const LatticeSpec& lat3, const GaugeField& gauge,
                          double m, double wilson_r, std::size_t nnz_budget) {
  if (lat3.dims != 3) throw ConfigError("build_h0_3d expects a 3-D lattice");
  lat3.validate();
  const int n3 = lat3.n3();
  SparseMatrixZ H00 = build_internal_h4(lat3.transverse(), gauge, m, wilson_r);
  std::size_t estimate =
      H00.nnz() * n3 +
      static_cast<std::size_t>(4) * lat3.n12() * n3 * n3;
  if (estimate > nnz_budget)
    throw SolverError("3-D assembly exceeds the nonzero-entry budget");

  SparseMatrixZ part1 = kron_sparse_id(H00, n3);
  DiracMatrixSet d = dirac_matrices();
  Eigen::MatrixXcd p3 = p3_matrix(lat3);
  Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(4 * n3, 4 * n3);
  for (int ci = 0; ci < 4; ++ci)
    for (int cj = 0; cj < 4; ++cj)
      if (d.alpha3(ci, cj) != cd(0, 0))
        block.block(ci * n3, cj * n3, n3, n3) = d.alpha3(ci, cj) * p3;
  SparseMatrixZ part2 = kron_id_dense(lat3.n12(), block);
  SparseMatrixZ H = sparse_add(part1, part2);
  H.hermitian = true;
  H.layout = LayoutMeta{4, lat3.n12(), n3};
  return H;
}

SparseMatrixZ build_f_of_p3(const LatticeSpec& lat3, const SmoothStepF& F) {
  Eigen::MatrixXcd f3 =
      function_of_p3(lat3, [&](double xi) { return F.eval(xi); });
  SparseMatrixZ M = kron_id_dense(4 * lat3.n12(), f3);
  M.hermitian = true;
  M.layout = LayoutMeta{4, lat3.n12(), lat3.n3()};
  return M;
}

SparseMatrixZ build_q3(const LatticeSpec& lat3) {
  const int n3 = lat3.n3();
  VecZ diag(4 * lat3.n12() * n3);
  for (int i = 0; i < 4 * lat3.n12(); ++i)
    for (int n = 0; n < n3; ++n) diag[i * n3 + n] = lat3.coord(2, n);
  SparseMatrixZ M = sparse_diag(diag);
  M.layout = LayoutMeta{4, lat3.n12(), n3};
  return M;
}

SparseMatrixZ build_a_conjugate(const LatticeSpec& lat3, const SmoothStepF& F) {
  const int n3 = lat3.n3();
  Eigen::MatrixXcd g3 =
      function_of_p3(lat3, [&](double xi) { return F.signed_eval(xi); });
  Eigen::VectorXcd q(n3);
  for (int n = 0; n < n3; ++n) q(n) = lat3.coord(2, n);
  Eigen::MatrixXcd a3 = 0.5 * (q.asDiagonal() * g3 + g3 * q.asDiagonal());
  SparseMatrixZ A = kron_id_dense(4 * lat3.n12(), a3);
  A.hermitian = true;
  A.layout = LayoutMeta{4, lat3.n12(), n3};
  return A;
}

void BuiltTR::apply_R(const cd* x, cd* y) const {
  if (dense_path) {
    Eigen::Map<const Eigen::VectorXcd> xv(x, dim);
    Eigen::Map<Eigen::VectorXcd> yv(y, dim);
    yv = R_dense * xv;
    return;
  }
  VecZ tmp(dim);
  cheb.apply(*H0, x, tmp.data());  // |H0|^{-1} x
  G.apply(tmp.data(), y);
}

BuiltTR build_t_r(const LatticeSpec& lat3, const SparseMatrixZ& H0,
                  const SmoothStepF& F, int dense_cap,
                  const EighResult* h0_eig) {
  BuiltTR out;
  out.dim = H0.n;
  const int n3 = lat3.n3();
  DiracMatrixSet d = dirac_matrices();

  Eigen::MatrixXcd g3 =
      function_of_p3(lat3, [&](double xi) { return F.signed_eval(xi); });
  Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(4 * n3, 4 * n3);
  for (int ci = 0; ci < 4; ++ci)
    for (int cj = 0; cj < 4; ++cj)
      if (d.alpha3(ci, cj) != cd(0, 0))
        block.block(ci * n3, cj * n3, n3, n3) = d.alpha3(ci, cj) * g3;
  out.T = kron_id_dense(lat3.n12(), block);
  out.T.hermitian = true;
  out.T.layout = H0.layout;

  // G(P3) P3 is PSD and diagonal in the Fourier basis.
  Eigen::MatrixXcd gp3 = function_of_p3(
      lat3, [&](double xi) { return F.signed_eval(xi) * xi; });
  out.G = kron_id_dense(4 * lat3.n12(), gp3);
  out.G.hermitian = true;

  if (H0.n <= dense_cap) {
    out.dense_path = true;
    EighResult local;
    const EighResult* eig = h0_eig;
    if (!eig) {
      local = eigh_dense(H0.to_dense());
      eig = &local;
    }
    out.hnorm = std::max(std::abs(eig->w.front()), std::abs(eig->w.back()));
    out.mu0 = kInf;
    for (double w : eig->w) out.mu0 = std::min(out.mu0, std::abs(w));
    if (out.mu0 < 1e-8 * out.hnorm)
      throw SolverError("spectral gap too small for |H0|^{-1}");
    Eigen::VectorXd inv_abs(H0.n);
    for (int i = 0; i < H0.n; ++i) inv_abs(i) = 1.0 / std::abs(eig->w[i]);
    Eigen::MatrixXcd abs_inv =
        eig->V * inv_abs.asDiagonal() * eig->V.adjoint();
    out.R_dense = out.G.to_eigen() * abs_inv;
    // G and |H0|^{-1} commute exactly; symmetrize away the eigendecomposition
    // roundoff.
    out.R_dense = 0.5 * (out.R_dense + out.R_dense.adjoint()).eval();
  } else {
    out.dense_path = false;
    out.H0 = &H0;
    out.hnorm = normest(H0);
    // Smallest |eigenvalue| from the largest eigenvalue of c - H0^2.
    double c = out.hnorm * out.hnorm * 1.02;
    VecZ v = random_unit_vector(H0.n, 0xB0B5ull);
    VecZ t1(H0.n), t2(H0.n);
    double lam = 0;
    for (int it = 0; it < 200; ++it) {
      H0.apply(v.data(), t1.data());
      H0.apply(t1.data(), t2.data());
      for (int i = 0; i < H0.n; ++i) t2[i] = c * v[i] - t2[i];
      lam = norm2(t2);
      scale(t2, cd(1.0 / lam, 0.0));
      v.swap(t2);
    }
    double mu0_sq = std::max(c - lam, 0.0);
    out.mu0 = std::sqrt(mu0_sq);
    if (out.mu0 < 1e-8 * out.hnorm)
      throw SolverError("spectral gap too small for |H0|^{-1}");
    out.cheb = chebyshev_inv_sqrt(0.9 * mu0_sq, 1.05 * out.hnorm * out.hnorm,
                                  1e-8);
  }
  return out;
}

std::vector<VecZ> seam_avoiding_vectors(const LatticeSpec& lat3, int count,
                                        double width, std::uint64_t seed) {
  const int n3 = lat3.n3();
  const int n12c = 4 * lat3.n12();
  // Fixed physical support radius, so the same vector is represented on every
  // x3 refinement; it must fit inside the middle third of the box.
  const double cut = 6.0 * width;
  if (cut > lat3.extents[2] / 6.0)
    throw ConfigError("test-vector width too large for the middle third");
  std::vector<VecZ> out;
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int v = 0; v < count; ++v) {
    VecZ psi(n12c * n3, cd(0, 0));
    std::vector<cd> transverse(n12c);
    for (cd& z : transverse) z = cd(dist(gen), dist(gen));
    for (int i = 0; i < n12c; ++i)
      for (int n = 0; n < n3; ++n) {
        double x3 = lat3.coord(2, n);
        if (std::abs(x3) > cut) continue;
        psi[i * n3 + n] = transverse[i] * std::exp(-x3 * x3 / (2 * width * width));
      }
    double nv = norm2(psi);
    if (nv == 0) throw SolverError("test vector support vanished");
    scale(psi, cd(1.0 / nv, 0.0));
    out.push_back(std::move(psi));
  }
  return out;
}

CommutatorReport commutator_residuals(const LatticeSpec& lat3,
                                      const SparseMatrixZ& H0,
                                      const SparseMatrixZ& A,
                                      const SmoothStepF& F,
                                      const std::function<double(double)>& g,
                                      const std::function<double(double)>& gp,
                                      const std::vector<VecZ>& test_set) {
  const int n = H0.n;
  const int n3 = lat3.n3();
  DiracMatrixSet d = dirac_matrices();
  SparseMatrixZ alpha3 = spinor_op(lat3, d.alpha3);
  // alpha3 G(P3), assembled per site as the block alpha3 (x) g3
  Eigen::MatrixXcd g3 =
      function_of_p3(lat3, [&](double xi) { return F.signed_eval(xi); });
  Eigen::MatrixXcd gf_block = Eigen::MatrixXcd::Zero(4 * n3, 4 * n3);
  for (int ci = 0; ci < 4; ++ci)
    for (int cj = 0; cj < 4; ++cj)
      if (d.alpha3(ci, cj) != cd(0, 0))
        gf_block.block(ci * n3, cj * n3, n3, n3) = d.alpha3(ci, cj) * g3;
  SparseMatrixZ GF = kron_id_dense(lat3.n12(), gf_block);

  VecZ gq(n), gpq(n);
  for (int i = 0; i < 4 * lat3.n12(); ++i)
    for (int m = 0; m < n3; ++m) {
      gq[i * n3 + m] = g(lat3.coord(2, m));
      gpq[i * n3 + m] = gp(lat3.coord(2, m));
    }

  ApplyFn apply_h0 = [&](const cd* x, cd* y) { H0.apply(x, y); };
  auto solve_h0 = [&](const VecZ& b) {
    SolveStats st = minres_hermitian(apply_h0, n, b, 1e-12, 20000);
    if (!st.converged)
      throw SolverError("H0 solve failed in commutator_residuals");
    return st.x;
  };

  CommutatorReport rep;
  for (const VecZ& psi : test_set) {
    // (a) resolvent/position commutator identity
    VecZ t(n);
    for (int i = 0; i < n; ++i) t[i] = gq[i] * psi[i];
    VecZ lhs1 = solve_h0(t);  // H0^{-1} g psi
    VecZ hinv = solve_h0(psi);
    VecZ lhs2(n);
    for (int i = 0; i < n; ++i) lhs2[i] = gq[i] * hinv[i];  // g H0^{-1} psi
    // rhs: i H0^{-1} alpha3 g' H0^{-1} psi
    VecZ u(n);
    for (int i = 0; i < n; ++i) u[i] = gpq[i] * hinv[i];
    VecZ au = alpha3.apply(u);
    VecZ rhs = solve_h0(au);
    double r = 0, denom = norm2(psi);
    {
      VecZ diff(n);
      for (int i = 0; i < n; ++i)
        diff[i] = lhs1[i] - lhs2[i] - cd(0, 1) * rhs[i];
      r = norm2(diff) / denom;
    }
    rep.lemma_g = std::max(rep.lemma_g, r);

    // (b) i[H0^{-1}, A] + H0^{-1} alpha3 G(P3) H0^{-1}
    {
      VecZ apsi = A.apply(psi);
      VecZ h_apsi = solve_h0(apsi);
      VecZ a_hpsi = A.apply(hinv);
      VecZ gf_h = GF.apply(hinv);
      VecZ rhs2 = solve_h0(gf_h);
      VecZ diff(n);
      for (int i = 0; i < n; ++i)
        diff[i] = cd(0, 1) * (h_apsi[i] - a_hpsi[i]) + rhs2[i];
      rep.inverse_comm = std::max(rep.inverse_comm, norm2(diff) / denom);
    }

    // (c) i[H0, A] - alpha3 G(P3)
    {
      VecZ apsi = A.apply(psi);
      VecZ h_apsi = H0.apply(apsi);
      VecZ hpsi = H0.apply(psi);
      VecZ a_hpsi = A.apply(hpsi);
      VecZ gf = GF.apply(psi);
      VecZ diff(n);
      for (int i = 0; i < n; ++i)
        diff[i] = cd(0, 1) * (h_apsi[i] - a_hpsi[i]) - gf[i];
      rep.h0_comm = std::max(rep.h0_comm, norm2(diff) / denom);
    }
  }
  return rep;
}

}  // namespace magdirac
