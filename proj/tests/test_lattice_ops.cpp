#include "doctest.h"
#include "magdirac/operators.hpp"
#include "magdirac/spectra.hpp"

#include <cmath>

using namespace magdirac;

namespace {

FieldSpec constant_field(double B0) {
  FieldSpec f;
  f.kind = FieldSpec::Kind::Constant;
  f.B0 = B0;
  return f;
}

LatticeSpec flux_lattice(int N, int quanta, int comps = 2) {
  double L = std::sqrt(2 * M_PI * std::max(quanta, 1));
  if (quanta == 0) L = static_cast<double>(N) / 2;
  return make_lattice2(L, L, N, N, Boundary::MagneticPeriodic, quanta, comps);
}

double multiset_distance(std::vector<double> a, std::vector<double> b) {
  REQUIRE(a.size() == b.size());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("lattice_ops");

TEST_CASE("plane waves diagonalize Pi1 at zero field") {
  LatticeSpec lat = make_lattice2(8.0, 8.0, 16, 16, Boundary::MagneticPeriodic, 0);
  GaugeField g = transversal_gauge(constant_field(0.0));
  SparseMatrixZ pi1 = build_pi(lat, g, 1);
  CHECK(pi1.hermiticity_residual() == 0.0);

  double h = lat.h(0);
  double k = 2 * M_PI * 3 / lat.extents[0];  // commensurate mode
  VecZ psi(lat.n12());
  for (int n1 = 0; n1 < 16; ++n1)
    for (int n2 = 0; n2 < 16; ++n2)
      psi[lat.site(n1, n2)] = std::exp(cd(0, k * lat.coord(0, n1)));
  VecZ out = pi1.apply(psi);
  double expect = std::sin(k * h) / h;
  double worst = 0;
  for (int i = 0; i < lat.n12(); ++i)
    worst = std::max(worst, std::abs(out[i] - expect * psi[i]));
  CHECK(worst < 1e-12);
}

TEST_CASE("plaquette product carries the flux phase") {
  // product of link phases around each plaquette must equal exp(-i B0 h1 h2)
  for (auto boundary : {Boundary::MagneticPeriodic, Boundary::Dirichlet}) {
    double B0 = 1.0;
    LatticeSpec lat =
        boundary == Boundary::MagneticPeriodic
            ? flux_lattice(8, 4)
            : make_lattice2(4.0, 4.0, 8, 8, Boundary::Dirichlet);
    GaugeField g = transversal_gauge(constant_field(B0));
    SparseMatrixZ pi1 = build_pi(lat, g, 1);
    SparseMatrixZ pi2 = build_pi(lat, g, 2);
    double h1 = lat.h(0), h2 = lat.h(1);
    auto hop = [&](const SparseMatrixZ& M, int from, int to) {
      for (int kk = M.row_ptr[from]; kk < M.row_ptr[from + 1]; ++kk)
        if (M.col[kk] == to) return M.val[kk] * (2.0 * (from < to || true ? 1 : 1));
      return cd(0, 0);
    };
    cd expect = std::exp(cd(0, -B0 * h1 * h2));
    int nmax = boundary == Boundary::MagneticPeriodic ? 8 : 7;
    double worst = 0;
    for (int n1 = 0; n1 < nmax; ++n1)
      for (int n2 = 0; n2 < nmax; ++n2) {
        int s00 = lat.site(n1 % 8, n2 % 8);
        int s10 = lat.site((n1 + 1) % 8, n2 % 8);
        int s11 = lat.site((n1 + 1) % 8, (n2 + 1) % 8);
        int s01 = lat.site(n1 % 8, (n2 + 1) % 8);
        // forward hop amplitudes are (-i/2h) U; strip the common factor
        cd u1 = hop(pi1, s00, s10) / (cd(0, -1) / (2 * h1));
        cd u2 = hop(pi2, s10, s11) / (cd(0, -1) / (2 * h2));
        cd u3 = hop(pi1, s01, s11) / (cd(0, -1) / (2 * h1));
        cd u4 = hop(pi2, s00, s01) / (cd(0, -1) / (2 * h2));
        if (u1 == cd(0, 0) || u2 == cd(0, 0) || u3 == cd(0, 0) || u4 == cd(0, 0))
          continue;  // Dirichlet edge
        cd loop = u1 * u2 * std::conj(u3) * std::conj(u4);
        worst = std::max(worst, std::abs(loop - expect));
      }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("flux quantization is enforced") {
  LatticeSpec lat = make_lattice2(5.0, 5.0, 8, 8, Boundary::MagneticPeriodic, 3);
  GaugeField g = transversal_gauge(constant_field(1.0));  // 25 != 6 pi
  CHECK_THROWS_AS(build_pi(lat, g, 1), ConfigError);
}

TEST_CASE("free internal operator has the mass gap") {
  LatticeSpec lat = make_lattice2(16.0, 16.0, 32, 32, Boundary::MagneticPeriodic, 0);
  GaugeField g = transversal_gauge(constant_field(0.0));
  SparseMatrixZ h0 = build_internal_h(lat, g, 1.0, 1.0);
  CHECK(h0.hermiticity_residual() < 1e-14);
  EighResult e = eigh_dense(h0.to_dense(), false);
  double mn = kInf;
  for (double w : e.w) mn = std::min(mn, std::abs(w));
  CHECK(mn == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("wilson term suppresses doublers") {
  LatticeSpec lat = flux_lattice(12, 4);
  GaugeField g = transversal_gauge(constant_field(1.0));
  auto count_low = [&](double r) {
    SparseMatrixZ h0 = build_internal_h(lat, g, 1.0, r);
    EighResult e = eigh_dense(h0.to_dense(), false);
    int c = 0;
    for (double w : e.w)
      if (w > 0 && w < 1.3) ++c;
    return c;
  };
  int with_wilson = count_low(1.0);
  int without = count_low(0.0);
  CHECK(without > with_wilson);
  CHECK(without > lat.flux_quanta);
}

TEST_CASE("anticommutation with alpha3 survives the wilson term") {
  LatticeSpec lat = flux_lattice(6, 2, 4);
  GaugeField g = transversal_gauge(constant_field(1.0));
  SparseMatrixZ H00 = build_internal_h4(lat, g, 1.0, 0.7);
  DiracMatrixSet d = dirac_matrices();
  LatticeSpec lat4 = lat;
  lat4.spinor_comps = 4;
  SparseMatrixZ a3 = spinor_op(lat4, d.alpha3);
  Eigen::MatrixXcd anti =
      a3.to_dense() * H00.to_dense() + H00.to_dense() * a3.to_dense();
  CHECK(anti.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("fiber shift squares exactly") {
  LatticeSpec lat = flux_lattice(6, 2, 4);
  GaugeField g = transversal_gauge(constant_field(1.0));
  SparseMatrixZ H00 = build_internal_h4(lat, g, 1.0, 1.0);

  SparseMatrixZ at0 = build_fiber_h(H00, 0.0);
  CHECK((at0.to_dense() - H00.to_dense()).cwiseAbs().maxCoeff() == 0.0);

  double xi = 0.7;
  SparseMatrixZ hxi = build_fiber_h(H00, xi);
  EighResult e0 = eigh_dense(H00.to_dense(), false);
  EighResult ex = eigh_dense(hxi.to_dense(), false);
  std::vector<double> sq0, sqx;
  for (double w : e0.w) sq0.push_back(w * w + xi * xi);
  for (double w : ex.w) sqx.push_back(w * w);
  CHECK(multiset_distance(sq0, sqx) < 1e-10);
}

TEST_CASE("3-D spectrum is the union of the fiber spectra") {
  LatticeSpec lat3 = make_lattice3(4.0, 4.0, 6.0, 4, 4, 8,
                                   Boundary::MagneticPeriodic, 0);
  GaugeField g = transversal_gauge(constant_field(0.0));
  SparseMatrixZ H3 = build_h0_3d(lat3, g, 1.0, 1.0);
  CHECK(H3.hermiticity_residual() < 1e-13);
  SparseMatrixZ H00 = build_internal_h4(lat3.transverse(), g, 1.0, 1.0);

  EighResult e3 = eigh_dense(H3.to_dense(), false);
  std::vector<double> expected;
  for (double xi : fourier_xi(lat3)) {
    SparseMatrixZ hxi = build_fiber_h(H00, xi);
    EighResult ex = eigh_dense(hxi.to_dense(), false);
    expected.insert(expected.end(), ex.w.begin(), ex.w.end());
  }
  CHECK(multiset_distance(e3.w, expected) < 1e-10);

  // spectral gap: nothing inside (-mu0, mu0)
  EighResult e00 = eigh_dense(H00.to_dense(), false);
  double mu0 = kInf;
  for (double w : e00.w) mu0 = std::min(mu0, std::abs(w));
  for (double w : e3.w) CHECK(std::abs(w) > mu0 - 1e-10);

  // free continuum limit: mu0 -> m
  CHECK(mu0 == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("3-D assembly honors the nonzero budget") {
  LatticeSpec lat3 = make_lattice3(4.0, 4.0, 6.0, 4, 4, 8,
                                   Boundary::MagneticPeriodic, 0);
  GaugeField g = transversal_gauge(constant_field(0.0));
  CHECK_THROWS_AS(build_h0_3d(lat3, g, 1.0, 1.0, 100), SolverError);
}

TEST_CASE("step multiplier annihilates non-positive modes") {
  LatticeSpec lat3 = make_lattice3(4.0, 4.0, M_PI, 4, 4, 8,
                                   Boundary::MagneticPeriodic, 0);
  SmoothStepF F;
  SparseMatrixZ FP = build_f_of_p3(lat3, F);
  CHECK(FP.hermiticity_residual() < 1e-14);
  // xi_k = 2k for k = 0..3, then negative: mode k=1 has F(2) = 1
  const int n3 = 8;
  auto mode = [&](int k) {
    VecZ psi(FP.n, cd(0, 0));
    for (int m = 0; m < n3; ++m)
      psi[m] = std::exp(cd(0, 2 * M_PI * k * m / double(n3))) / std::sqrt(8.0);
    return psi;
  };
  for (int k : {0, 4, 5, 6, 7}) {  // xi <= 0 modes
    VecZ out = FP.apply(mode(k));
    CHECK(norm2(out) < 1e-12);
  }
  VecZ out1 = FP.apply(mode(1));  // xi = 2
  VecZ m1 = mode(1);
  double diff = 0;
  for (int i = 0; i < FP.n; ++i) diff = std::max(diff, std::abs(out1[i] - m1[i]));
  CHECK(diff < 1e-12);
  CHECK(normest(FP, 60) <= 1.0 + 1e-10);
}

TEST_CASE("conjugate generator is hermitian with real form values") {
  LatticeSpec lat3 = make_lattice3(4.0, 4.0, 8.0, 4, 4, 12,
                                   Boundary::MagneticPeriodic, 0);
  SmoothStepF F;
  SparseMatrixZ A = build_a_conjugate(lat3, F);
  CHECK(A.hermiticity_residual() < 1e-13);
  for (std::uint64_t s : {1ull, 2ull, 3ull}) {
    VecZ psi = random_unit_vector(A.n, s);
    VecZ apsi = A.apply(psi);
    CHECK(std::abs(dot(psi, apsi).imag()) < 1e-12);
  }
  // zero multiplier gives the zero generator
  Eigen::MatrixXcd z3 = function_of_p3(lat3, [](double) { return 0.0; });
  CHECK(z3.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("commutator surrogates: algebra and bounds") {
  LatticeSpec lat3 = make_lattice3(4.0, 4.0, 8.0, 4, 4, 12,
                                   Boundary::MagneticPeriodic, 0);
  GaugeField g = transversal_gauge(constant_field(0.0));
  SparseMatrixZ H3 = build_h0_3d(lat3, g, 1.0, 1.0);
  SmoothStepF F;
  BuiltTR tr = build_t_r(lat3, H3, F);
  REQUIRE(tr.dense_path);

  // T^2 equals the squared odd-step multiplier
  SparseMatrixZ T2 = sparse_matmul(tr.T, tr.T);
  Eigen::MatrixXcd g2 = function_of_p3(lat3, [&](double xi) {
    double s = F.signed_eval(xi);
    return s * s;
  });
  SparseMatrixZ G2 = kron_id_dense(4 * lat3.n12(), g2);
  CHECK((T2.to_dense() - G2.to_dense()).cwiseAbs().maxCoeff() < 1e-12);

  // R is hermitian, positive semidefinite, norm <= 1
  Eigen::MatrixXcd R = tr.R_dense;
  CHECK((R - R.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  EighResult er = eigh_dense(R, false);
  CHECK(er.w.front() >= -1e-10);
  CHECK(er.w.back() <= 1.0 + 1e-10);
}

TEST_CASE("chebyshev path matches the dense path for R") {
  LatticeSpec lat3 = make_lattice3(4.0, 4.0, 6.0, 4, 4, 8,
                                   Boundary::MagneticPeriodic, 0);
  GaugeField g = transversal_gauge(constant_field(0.0));
  SparseMatrixZ H3 = build_h0_3d(lat3, g, 1.0, 1.0);
  SmoothStepF F;
  BuiltTR dense = build_t_r(lat3, H3, F, kDefaultDenseCap);
  BuiltTR cheb = build_t_r(lat3, H3, F, /*dense_cap=*/8);  // force sparse path
  REQUIRE(!cheb.dense_path);
  VecZ x = random_unit_vector(H3.n, 99);
  VecZ y1(H3.n), y2(H3.n);
  dense.apply_R(x.data(), y1.data());
  cheb.apply_R(x.data(), y2.data());
  double worst = 0;
  for (int i = 0; i < H3.n; ++i) worst = std::max(worst, std::abs(y1[i] - y2[i]));
  CHECK(worst < 1e-6);
}

TEST_CASE("commutator identities on seam-avoiding vectors") {
  SmoothStepF F;
  auto residuals = [&](int N3) {
    LatticeSpec lat3 = make_lattice3(4.0, 4.0, 0.5 * N3, 4, 4, N3,
                                     Boundary::MagneticPeriodic, 0);
    GaugeField g = transversal_gauge(constant_field(0.0));
    SparseMatrixZ H3 = build_h0_3d(lat3, g, 1.0, 1.0);
    SparseMatrixZ A = build_a_conjugate(lat3, F);
    auto vecs = seam_avoiding_vectors(lat3, 3, 0.22, 777);
    auto tanh_g = [](double x) { return std::tanh(x); };
    auto tanh_gp = [](double x) { double c = std::cosh(x); return 1.0 / (c * c); };
    return commutator_residuals(lat3, H3, A, F, tanh_g, tanh_gp, vecs);
  };

  CommutatorReport coarse = residuals(16);
  CommutatorReport fine = residuals(32);
  // first-order or better decay under doubling
  CHECK(coarse.lemma_g / fine.lemma_g >= 2.0);
  CHECK(fine.h0_comm < coarse.h0_comm);
  CHECK(fine.inverse_comm < coarse.inverse_comm);

  // constant g: the commutator identity is trivial up to solver tolerance
  LatticeSpec lat3 = make_lattice3(4.0, 4.0, 8.0, 4, 4, 16,
                                   Boundary::MagneticPeriodic, 0);
  GaugeField g = transversal_gauge(constant_field(0.0));
  SparseMatrixZ H3 = build_h0_3d(lat3, g, 1.0, 1.0);
  SparseMatrixZ A = build_a_conjugate(lat3, F);
  auto vecs = seam_avoiding_vectors(lat3, 2, 0.22, 778);
  CommutatorReport cst = commutator_residuals(
      lat3, H3, A, F, [](double) { return 2.0; }, [](double) { return 0.0; },
      vecs);
  CHECK(cst.lemma_g < 1e-9);
}

TEST_SUITE_END();
