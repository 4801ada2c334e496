#include "magdirac/spinor.hpp"

namespace magdirac {

namespace {
const cd I(0, 1);
}

DiracMatrixSet dirac_matrices() {
  DiracMatrixSet d;
  d.representation_name = "standard";
  d.sigma1 << 0, 1, 1, 0;
  d.sigma2 << 0, -I, I, 0;
  d.sigma3 << 1, 0, 0, -1;
  auto off_diag = [](const Mat2& s) {
    Mat4 a = Mat4::Zero();
    a.block<2, 2>(0, 2) = s;
    a.block<2, 2>(2, 0) = s;
    return a;
  };
  d.alpha1 = off_diag(d.sigma1);
  d.alpha2 = off_diag(d.sigma2);
  d.alpha3 = off_diag(d.sigma3);
  d.beta = Mat4::Zero();
  d.beta(0, 0) = d.beta(1, 1) = 1;
  d.beta(2, 2) = d.beta(3, 3) = -1;
  return d;
}

const Mat4& DiracMatrixSet::alpha(int j) const {
  switch (j) {
    case 0: return beta;
    case 1: return alpha1;
    case 2: return alpha2;
    case 3: return alpha3;
  }
  throw ConfigError("alpha index out of range");
}

double DiracMatrixSet::clifford_residual() const {
  double m = 0;
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 3; ++j) {
      Mat4 anti = alpha(i) * alpha(j) + alpha(j) * alpha(i);
      if (i == j) anti -= 2.0 * Mat4::Identity();
      m = std::max(m, anti.cwiseAbs().maxCoeff());
    }
  return m;
}

double DiracMatrixSet::pauli_residual() const {
  const Mat2* s[3] = {&sigma1, &sigma2, &sigma3};
  double m = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Mat2 prod = (*s[i]) * (*s[j]);
      Mat2 expect = Mat2::Zero();
      if (i == j) expect = Mat2::Identity();
      // sigma_i sigma_j = delta_ij + i eps_ijk sigma_k
      int k = 3 - i - j;
      if (i != j) {
        int eps = ((j - i + 3) % 3 == 1) ? 1 : -1;
        expect = cd(0, eps) * (*s[k]);
      }
      m = std::max(m, (prod - expect).cwiseAbs().maxCoeff());
    }
  return m;
}

BlockDecomposition block_decompose_internal(const SparseMatrixZ& H00) {
  if (H00.layout.spinor_comps != 4)
    throw ConfigError("block_decompose_internal expects a 4-component operator");
  const int nsite = H00.layout.n12;
  if (nsite * 4 != H00.n)
    throw ConfigError("block_decompose_internal: layout/dimension mismatch");

  // In the standard representation the operator couples components only
  // within the pairs {0,3} and {1,2} (0-based). Reject anything else.
  auto pair_of = [](int c) { return (c == 0 || c == 3) ? 0 : 1; };
  auto slot_of = [](int c) { return (c == 0 || c == 1) ? 0 : 1; };

  CooBuilder bk(2 * nsite), bkt(2 * nsite);
  for (int i = 0; i < H00.n; ++i) {
    int si = i / 4, ci = i % 4;
    for (int k = H00.row_ptr[i]; k < H00.row_ptr[i + 1]; ++k) {
      int j = H00.col[k], sj = j / 4, cj = j % 4;
      if (pair_of(ci) != pair_of(cj))
        throw ConfigError(
            "sparsity pattern incompatible with the standard-representation "
            "block structure");
      int r = si * 2 + slot_of(ci);
      int c = sj * 2 + slot_of(cj);
      if (pair_of(ci) == 0)
        bk.add(r, c, H00.val[k]);
      else
        bkt.add(r, c, H00.val[k]);
    }
  }
  BlockDecomposition d;
  LayoutMeta meta{2, nsite, 1};
  d.K = bk.compress(H00.hermitian, meta);
  d.Ktilde = bkt.compress(H00.hermitian, meta);
  return d;
}

SparseMatrixZ reassemble_internal(const BlockDecomposition& d) {
  const int nsite = d.K.layout.n12;
  CooBuilder b(4 * nsite);
  // slots {0,1} of K map back to components {0,3}; slots of Ktilde to {1,2}
  const int back_k[2] = {0, 3};
  const int back_kt[2] = {1, 2};
  auto emit = [&](const SparseMatrixZ& M, const int* back) {
    for (int i = 0; i < M.n; ++i) {
      int si = i / 2, ci = back[i % 2];
      for (int k = M.row_ptr[i]; k < M.row_ptr[i + 1]; ++k) {
        int j = M.col[k], sj = j / 2, cj = back[j % 2];
        b.add(si * 4 + ci, sj * 4 + cj, M.val[k]);
      }
    }
  };
  emit(d.K, back_k);
  emit(d.Ktilde, back_kt);
  return b.compress(d.K.hermitian && d.Ktilde.hermitian, LayoutMeta{4, nsite, 1});
}

}  // namespace magdirac
