#pragma once

#include <optional>
#include <utility>

#include "ritz/core.hpp"

namespace ritz {

// Complement data for a Rayleigh-Ritz decomposition: an orthonormal basis of
// the orthogonal complement of the trial space and the projected block
// A3 = Qperp^T A Qperp.
struct RitzComplement {
  OrthonormalBasis q_perp;
  Matrix a3;
};

struct RitzDecomposition {
  int n = 0;
  int k = 0;
  double scale_hint = 1.0;
  OrthonormalBasis basis;    // trial space Q
  Vector ritz_values;        // ascending
  Matrix ritz_vectors;       // n x k ambient columns, sign-fixed
  Matrix residual_columns;   // r_i = A x_i - theta_i x_i, ambient
  Vector residual_norms;     // column norms of the above
  double residual_total_norm = 0.0;  // spectral norm of the residual block
  std::optional<RitzComplement> complement;
};

// Deterministic sign convention: the first entry of each Ritz vector whose
// magnitude exceeds 1e-8 is made positive (the matching residual column flips
// with it).
inline void fix_column_signs(Matrix& vectors, Matrix& residuals) {
  for (int j = 0; j < vectors.cols(); ++j) {
    for (int i = 0; i < vectors.rows(); ++i) {
      double v = vectors(i, j);
      if (std::abs(v) > 1e-8) {
        if (v < 0.0) {
          vectors.col(j) = -vectors.col(j);
          residuals.col(j) = -residuals.col(j);
        }
        break;
      }
    }
  }
}

// Rayleigh-Ritz process on a given orthonormal trial basis.
//
// Input:  symmetric problem, orthonormal basis Q (n x k), and whether to
//         materialize the complement blocks (needs explicit storage)
// Output: Ritz values ascending, ambient Ritz vectors and residuals; the
//         residuals are orthogonal to the whole trial space by construction
inline RitzDecomposition rr_decompose(const SymmetricProblem& problem, OrthonormalBasis q,
                                      bool materialize_complement = false) {
  if (q.n != problem.n())
    throw Error(ErrorCode::DimensionMismatch, "basis rows must match problem dimension");
  if (materialize_complement && !problem.has_matrix())
    throw Error(ErrorCode::OperatorOnly, "complement blocks need explicit storage");

  RitzDecomposition d;
  d.n = q.n;
  d.k = q.k;
  d.scale_hint = problem.scale_hint();

  Matrix aq = problem.apply(q.columns);
  Matrix h = q.columns.transpose() * aq;
  h = 0.5 * (h + h.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  d.ritz_values = es.eigenvalues();
  const Matrix& c = es.eigenvectors();

  d.ritz_vectors = q.columns * c;
  Matrix ax = aq * c;
  d.residual_columns = ax - d.ritz_vectors * d.ritz_values.asDiagonal();
  fix_column_signs(d.ritz_vectors, d.residual_columns);
  d.residual_norms.resize(d.k);
  for (int j = 0; j < d.k; ++j) d.residual_norms(j) = d.residual_columns.col(j).norm();
  d.residual_total_norm = spectral_norm(d.residual_columns);
  d.basis = std::move(q);

  if (materialize_complement) {
    Matrix qp = orthonormal_complement(d.basis);
    Matrix a3 = qp.transpose() * problem.apply(qp);
    a3 = 0.5 * (a3 + a3.transpose());
    OrthonormalBasis pb;
    pb.n = d.n;
    pb.k = d.n - d.k;
    pb.columns = std::move(qp);
    d.complement = RitzComplement{std::move(pb), std::move(a3)};
  }
  return d;
}

// Convenience overload accepting a raw (not yet orthonormal) trial matrix.
inline RitzDecomposition rr_decompose(const SymmetricProblem& problem, const Matrix& q_raw,
                                      bool materialize_complement = false) {
  return rr_decompose(problem, orthonormalize(q_raw), materialize_complement);
}

// The rotated matrix in the basis [X, Qperp]: block diagonal Ritz values, the
// coupling block R = Qperp^T A X, and the complement block A3. Because the
// residuals are orthogonal to the trial space, column i of R is exactly the
// complement representation of residual r_i and shares its norm.
struct TildeBlocks {
  Vector lambda_hat;  // k Ritz values, ascending
  Matrix R;           // (n-k) x k coupling block
  Matrix A3;          // (n-k) x (n-k)
};

inline TildeBlocks assemble_tilde(const RitzDecomposition& d) {
  if (!d.complement)
    throw Error(ErrorCode::ComplementMissing, "assemble_tilde needs the materialized complement");
  TildeBlocks t;
  t.lambda_hat = d.ritz_values;
  t.R = d.complement->q_perp.columns.transpose() * d.residual_columns;
  t.A3 = d.complement->a3;
  return t;
}

// Coordinates of an exact eigenvector in the rotated basis
// [x_hat_i, other Ritz vectors, Qperp]: the target coefficient w, the
// coefficients y on the other Ritz vectors, and the complement part z.
// sin angle(x, x_hat_i) equals sqrt(|y|^2 + |z|^2) for a unit eigenvector.
struct TildeEigsplit {
  double w = 0.0;
  Vector y;
  Vector z;
};

inline TildeEigsplit eigsplit(const RitzDecomposition& d, int i,
                              const std::pair<double, Vector>& exact_pair) {
  if (!d.complement)
    throw Error(ErrorCode::ComplementMissing, "eigsplit needs the materialized complement");
  if (i < 0 || i >= d.k)
    throw Error(ErrorCode::IndexOutOfRange, "target index outside the Ritz block", i);
  const Vector& x = exact_pair.second;
  if (x.size() != d.n)
    throw Error(ErrorCode::DimensionMismatch, "exact eigenvector has wrong dimension");
  TildeEigsplit s;
  s.w = d.ritz_vectors.col(i).dot(x);
  s.y.resize(d.k - 1);
  int at = 0;
  for (int j = 0; j < d.k; ++j)
    if (j != i) s.y(at++) = d.ritz_vectors.col(j).dot(x);
  s.z = d.complement->q_perp.columns.transpose() * x;
  return s;
}

}  // namespace ritz
