#include "magdirac/solvers.hpp"

#include <cmath>

namespace magdirac {

double normest(const SparseMatrixZ& M, int iters) {
  VecZ v = random_unit_vector(M.n, 0x9e3779b97f4a7c15ull);
  VecZ w(M.n), u(M.n);
  double s = 0;
  for (int it = 0; it < iters; ++it) {
    M.apply(v.data(), w.data());
    if (M.hermitian) {
      M.apply(w.data(), u.data());
    } else {
      // M^dag w without storing the adjoint: fall back to dense-free two-pass
      // conjugated accumulation.
      std::fill(u.begin(), u.end(), cd(0, 0));
      for (int i = 0; i < M.n; ++i)
        for (int k = M.row_ptr[i]; k < M.row_ptr[i + 1]; ++k)
          u[M.col[k]] += std::conj(M.val[k]) * w[i];
    }
    double nu = norm2(u);
    if (nu == 0) return 0.0;
    s = std::sqrt(nu);
    scale(u, cd(1.0 / nu, 0.0));
    v.swap(u);
  }
  return s;
}

SolveStats minres_hermitian(const ApplyFn& A, int n, const VecZ& b, double tol,
                            int max_iter) {
  // Standard MINRES (Paige & Saunders) with Lanczos three-term recurrence.
  SolveStats st;
  st.x.assign(n, cd(0, 0));
  double bnorm = norm2(b);
  if (bnorm == 0) {
    st.converged = true;
    return st;
  }
  VecZ v_prev(n, cd(0, 0)), v = b, w(n);
  double beta = bnorm;
  scale(v, cd(1.0 / beta, 0.0));
  double eta = beta;
  double c_old = 1, c = 1, s_old = 0, s = 0;
  VecZ m_prev2(n, cd(0, 0)), m_prev1(n, cd(0, 0));
  double beta_old = beta;

  for (int it = 1; it <= max_iter; ++it) {
    A(v.data(), w.data());
    cd alpha_c = dot(v, w);
    double alpha = alpha_c.real();
    for (int i = 0; i < n; ++i) w[i] -= alpha * v[i] + beta_old * v_prev[i];
    double beta_new = norm2(w);

    // Two previous Givens rotations applied to the new column of T.
    double r1 = s_old * beta_old;
    double r2_bar = c_old * beta_old;
    double r2 = c * r2_bar + s * alpha;
    double r3_bar = -s * r2_bar + c * alpha;
    // New rotation annihilating beta_new.
    double r3 = std::hypot(r3_bar, beta_new);
    double c_new = r3 == 0 ? 1.0 : r3_bar / r3;
    double s_new = r3 == 0 ? 0.0 : beta_new / r3;

    VecZ m(n);
    for (int i = 0; i < n; ++i)
      m[i] = (v[i] - r1 * m_prev2[i] - r2 * m_prev1[i]) / r3;
    double tau = c_new * eta;
    for (int i = 0; i < n; ++i) st.x[i] += tau * m[i];
    eta = -s_new * eta;

    st.iterations = it;
    st.rel_residual = std::abs(eta) / bnorm;
    if (st.rel_residual <= tol) {
      st.converged = true;
      break;
    }
    if (beta_new == 0) break;

    v_prev = v;
    v = w;
    scale(v, cd(1.0 / beta_new, 0.0));
    beta_old = beta_new;
    c_old = c;
    s_old = s;
    c = c_new;
    s = s_new;
    m_prev2 = m_prev1;
    m_prev1 = m;
  }

  // Recurrence residual can drift; report the true one.
  VecZ r(n);
  A(st.x.data(), r.data());
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  st.rel_residual = norm2(r) / bnorm;
  st.converged = st.rel_residual <= tol * 10;
  return st;
}

SolveStats cgnr_shifted(const SparseMatrixZ& H, cd z, const VecZ& b, double tol,
                        int max_iter) {
  const int n = H.n;
  auto apply_shifted = [&](const VecZ& x, VecZ& y) {
    H.apply(x.data(), y.data());
    for (int i = 0; i < n; ++i) y[i] -= z * x[i];
  };
  auto apply_shifted_adj = [&](const VecZ& x, VecZ& y) {
    // H hermitian: (H - z)^dag = H - conj(z)
    H.apply(x.data(), y.data());
    for (int i = 0; i < n; ++i) y[i] -= std::conj(z) * x[i];
  };

  SolveStats st;
  st.x.assign(n, cd(0, 0));
  double bnorm = norm2(b);
  if (bnorm == 0) {
    st.converged = true;
    return st;
  }
  VecZ r = b;               // residual of original system
  VecZ rn(n), p(n), q(n), t(n);
  apply_shifted_adj(r, rn);  // normal-equations residual
  p = rn;
  double rn2 = dot(rn, rn).real();

  for (int it = 1; it <= max_iter; ++it) {
    apply_shifted(p, q);
    double q2 = dot(q, q).real();
    if (q2 == 0) break;
    double alpha = rn2 / q2;
    for (int i = 0; i < n; ++i) {
      st.x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    apply_shifted_adj(r, t);
    double rn2_new = dot(t, t).real();
    st.iterations = it;
    st.rel_residual = norm2(r) / bnorm;
    if (st.rel_residual <= tol) {
      st.converged = true;
      break;
    }
    double beta = rn2_new / rn2;
    for (int i = 0; i < n; ++i) p[i] = t[i] + beta * p[i];
    rn2 = rn2_new;
  }
  return st;
}

double ChebInvSqrt::eval(double s) const {
  double t = (2 * s - (b + a)) / (b - a);
  double d = 0, dd = 0;
  for (int k = degree(); k >= 1; --k) {
    double sv = d;
    d = 2 * t * d - dd + coeff[k];
    dd = sv;
  }
  return t * d - dd + coeff[0];
}

void ChebInvSqrt::apply(const SparseMatrixZ& H, const cd* x, cd* y) const {
  // Clenshaw with matrix argument t(H^2) = (2 H^2 - (b+a)) / (b-a).
  const int n = H.n;
  const double sc = 2.0 / (b - a), sh = (b + a) / (b - a);
  VecZ d(n, cd(0, 0)), dd(n, cd(0, 0)), tmp(n), tx(n);
  auto apply_t = [&](const VecZ& in, VecZ& out) {
    H.apply(in.data(), tmp.data());
    H.apply(tmp.data(), out.data());
    for (int i = 0; i < n; ++i) out[i] = sc * out[i] - sh * in[i];
  };
  for (int k = degree(); k >= 1; --k) {
    apply_t(d, tx);
    for (int i = 0; i < n; ++i) {
      cd sv = d[i];
      d[i] = 2.0 * tx[i] - dd[i] + coeff[k] * x[i];
      dd[i] = sv;
    }
  }
  apply_t(d, tx);
  for (int i = 0; i < n; ++i) y[i] = tx[i] - dd[i] + coeff[0] * x[i];
}

ChebInvSqrt chebyshev_inv_sqrt(double a, double b, double target_rel_err,
                               int max_degree) {
  if (!(0 < a && a < b)) throw SolverError("chebyshev_inv_sqrt: need 0 < a < b");
  auto f = [&](double t) { return 1.0 / std::sqrt(0.5 * (b - a) * t + 0.5 * (b + a)); };
  const int M = 4096;  // quadrature nodes for the coefficients
  std::vector<double> fv(M);
  for (int j = 0; j < M; ++j) fv[j] = f(std::cos(M_PI * (j + 0.5) / M));

  ChebInvSqrt ch;
  ch.a = a;
  ch.b = b;
  int deg = 8;
  while (true) {
    ch.coeff.assign(deg + 1, 0.0);
    for (int k = 0; k <= deg; ++k) {
      double s = 0;
      for (int j = 0; j < M; ++j) s += fv[j] * std::cos(M_PI * k * (j + 0.5) / M);
      ch.coeff[k] = (k == 0 ? 1.0 : 2.0) * s / M;
    }
    // check error on a grid
    double worst = 0;
    for (int j = 0; j <= 200; ++j) {
      double s = a + (b - a) * j / 200.0;
      double approx = ch.eval(s);
      double exact = 1.0 / std::sqrt(s);
      worst = std::max(worst, std::abs(approx - exact) / exact);
    }
    if (worst <= target_rel_err || deg >= max_degree) {
      if (worst > target_rel_err)
        throw SolverError("chebyshev_inv_sqrt: degree cap reached");
      break;
    }
    deg *= 2;
  }
  return ch;
}

}  // namespace magdirac
