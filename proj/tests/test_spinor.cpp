#include "doctest.h"
#include "magdirac/operators.hpp"
#include "magdirac/spectra.hpp"
#include "magdirac/spinor.hpp"

using namespace magdirac;

namespace {

// independent spectral comparison: sorted eigenvalue multisets
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

TEST_SUITE_BEGIN("spinor");

TEST_CASE("clifford relations hold exactly") {
  DiracMatrixSet d = dirac_matrices();
  CHECK(d.clifford_residual() == 0.0);
  CHECK(d.pauli_residual() == 0.0);
  CHECK(((d.beta * d.beta) - Mat4::Identity()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d.alpha3 * d.beta + d.beta * d.alpha3).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("all matrices hermitian with eigenvalues +-1") {
  DiracMatrixSet d = dirac_matrices();
  for (int j = 0; j <= 3; ++j) {
    const Mat4& a = d.alpha(j);
    CHECK((a - a.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Mat4> es(a);
    for (int i = 0; i < 4; ++i)
      CHECK(std::abs(std::abs(es.eigenvalues()[i]) - 1.0) < 1e-14);
  }
}

TEST_CASE("block decomposition reassembles exactly") {
  FieldSpec f;
  f.kind = FieldSpec::Kind::Constant;
  f.B0 = 1.0;
  double L = std::sqrt(2 * M_PI * 4);  // 4 flux quanta
  LatticeSpec lat = make_lattice2(L, L, 8, 8, Boundary::MagneticPeriodic, 4, 4);
  GaugeField g = transversal_gauge(f);
  SparseMatrixZ H00 = build_internal_h4(lat, g, 1.0, 1.0);
  BlockDecomposition d = block_decompose_internal(H00);
  SparseMatrixZ back = reassemble_internal(d);
  REQUIRE(back.n == H00.n);
  Eigen::MatrixXcd diff = back.to_dense() - H00.to_dense();
  CHECK(diff.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("free lattice: sigma(Ktilde) = -sigma(K)") {
  FieldSpec f;
  f.kind = FieldSpec::Kind::Constant;
  f.B0 = 0.0;
  LatticeSpec lat = make_lattice2(8.0, 8.0, 8, 8, Boundary::MagneticPeriodic, 0, 4);
  GaugeField g = transversal_gauge(f);
  SparseMatrixZ H00 = build_internal_h4(lat, g, 1.0, 1.0);
  BlockDecomposition d = block_decompose_internal(H00);
  EighResult ek = eigh_dense(d.K.to_dense(), false);
  EighResult ekt = eigh_dense(d.Ktilde.to_dense(), false);
  std::vector<double> neg;
  for (double w : ek.w) neg.push_back(-w);
  CHECK(multiset_distance(ekt.w, neg) < 1e-12);
}

TEST_CASE("constant field: joint spectrum symmetric under negation") {
  FieldSpec f;
  f.kind = FieldSpec::Kind::Constant;
  f.B0 = 1.0;
  double L = std::sqrt(2 * M_PI * 4);
  LatticeSpec lat = make_lattice2(L, L, 8, 8, Boundary::MagneticPeriodic, 4, 4);
  GaugeField g = transversal_gauge(f);
  SparseMatrixZ H00 = build_internal_h4(lat, g, 1.0, 1.0);
  EighResult e = eigh_dense(H00.to_dense(), false);
  std::vector<double> neg;
  for (double w : e.w) neg.push_back(-w);
  CHECK(multiset_distance(e.w, neg) < 1e-11);
}

TEST_CASE("sigma(H00) = sigma(K) union sigma(Ktilde)") {
  FieldSpec f;
  f.kind = FieldSpec::Kind::Constant;
  f.B0 = 1.0;
  double L = std::sqrt(2 * M_PI * 4);
  LatticeSpec lat = make_lattice2(L, L, 8, 8, Boundary::MagneticPeriodic, 4, 4);
  GaugeField g = transversal_gauge(f);
  SparseMatrixZ H00 = build_internal_h4(lat, g, 1.0, 0.5);
  BlockDecomposition d = block_decompose_internal(H00);
  EighResult e0 = eigh_dense(H00.to_dense(), false);
  EighResult ek = eigh_dense(d.K.to_dense(), false);
  EighResult ekt = eigh_dense(d.Ktilde.to_dense(), false);
  std::vector<double> joint = ek.w;
  joint.insert(joint.end(), ekt.w.begin(), ekt.w.end());
  CHECK(multiset_distance(e0.w, joint) < 1e-11);
}

TEST_CASE("decomposition rejects operators coupling the wrong components") {
  CooBuilder b(8);  // 2 sites x 4 components
  b.add_herm(0, 1, cd(1, 0));  // couples components 0 and 1: invalid
  SparseMatrixZ bad = b.compress(true, LayoutMeta{4, 2, 1});
  CHECK_THROWS_AS(block_decompose_internal(bad), ConfigError);
}

TEST_SUITE_END();
