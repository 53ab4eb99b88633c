#pragma once

#include "ritz/bounds.hpp"

namespace ritz {

// Petrov-Galerkin SVD projection in the rotated bases. With square unitary
// completions [U_hat, U_perp] and [V_hat, V_perp], the matrix becomes
//
//   [ Sigma_hat_1    0        R1 ]
//   [    0       Sigma_hat_2  R2 ]
//   [   S1           S2       A3 ]
//
// where R = U_hat^T M V_perp (R1 the first k1 rows) and
// S = U_perp^T M V_hat (S1 the first k1 columns). Row i of R2 and column i of
// S2 are the per-triplet couplings of the trailing Ritz triplets.
struct SvdProjection {
  int m = 0, n = 0;
  int k_m = 0, k_n = 0, k1 = 0;
  bool transposed = false;  // input arrived with m < n and was transposed
  Vector sigma_hat;         // min(k_m, k_n) Ritz singular values, descending
  OrthonormalBasis U_hat;   // m x k_m rotated left trial basis
  OrthonormalBasis V_hat;   // n x k_n rotated right trial basis
  Matrix R1, R2;            // k1 x (n-k_n) and (k_m-k1) x (n-k_n)
  Matrix S1, S2;            // (m-k_m) x k1 and (m-k_m) x (k_n-k1)
  Matrix A3;                // (m-k_m) x (n-k_n)
  double A3_norm = 0.0;
  double coupling_residual = 0.0;  // ||U_hat^T M V_hat - Sigma_hat_rect||
};

// Gap quantities for the singular-subspace bounds. The authoritative Gap is
// the derivation's sigma_min(Sigma1) - ||A3||; the statement's variant
// min(sigma(Sigma_hat_1) - sigma(A3)) is kept as a diagnostic only. These are
// differences, and a poor sketch legitimately makes them nonpositive: that is
// data (bounds inapplicable), not an input error.
struct SvdGapData {
  double sigma_min = 0.0;       // sigma_min(Sigma1): exact oracle value, or
                                // sigma_hat(k1) in estimated mode
  double Gap = 0.0;             // sigma_min - ||A3||
  double gap = 0.0;             // sigma_min - ||Sigma_hat_2||
  double Gap_statement = 0.0;   // diagnostic: min sigma(Sigma_hat_1) - ||A3||
  Vector pair_dists;            // sigma_min - sigma_hat(k1+i), i = 1..k'
  bool estimated = false;
};

// Projects M onto the trial pair, rotates both bases by the SVD of the small
// projected matrix, and assembles the blocks above. The m >= n convention of
// the bounds is enforced by transposing internally (which swaps the roles of
// the two trial bases); all reported norms are transpose-invariant.
//
// Input:  M (m x n), left/right trial bases, target count k1 <= min(k_m, k_n)
// Output: assembled projection with zero coupling between the leading and
//         trailing Ritz blocks (within 1e-13 ||M||)
inline SvdProjection project_svd(const Matrix& m_in, const OrthonormalBasis& u_trial,
                                 const OrthonormalBasis& v_trial, int k1) {
  if (m_in.rows() < m_in.cols()) {
    // Work on M^T with the trial roles swapped; the assembled blocks then
    // describe the internal (transposed) view, which the flag records. Every
    // norm entering the bounds is invariant under this swap.
    SvdProjection p = project_svd(Matrix(m_in.transpose()), v_trial, u_trial, k1);
    p.transposed = true;
    return p;
  }
  int m = static_cast<int>(m_in.rows());
  int n = static_cast<int>(m_in.cols());
  if (u_trial.n != m || v_trial.n != n)
    throw Error(ErrorCode::DimensionMismatch, "trial bases must match the matrix dimensions");
  int k_m = u_trial.k, k_n = v_trial.k;
  if (k1 < 1 || k1 > std::min(k_m, k_n))
    throw Error(ErrorCode::DimensionMismatch, "need 1 <= k1 <= min(k_m, k_n)", k1);

  Matrix b = u_trial.columns.transpose() * m_in * v_trial.columns;
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);

  SvdProjection p;
  p.m = m;
  p.n = n;
  p.k_m = k_m;
  p.k_n = k_n;
  p.k1 = k1;
  p.sigma_hat = svd.singularValues();
  p.U_hat.n = m;
  p.U_hat.k = k_m;
  p.U_hat.columns = u_trial.columns * svd.matrixU();
  p.V_hat.n = n;
  p.V_hat.k = k_n;
  p.V_hat.columns = v_trial.columns * svd.matrixV();

  Matrix u_perp = orthonormal_complement(p.U_hat);
  Matrix v_perp = orthonormal_complement(p.V_hat);
  Matrix r = p.U_hat.columns.transpose() * m_in * v_perp;  // k_m x (n-k_n)
  Matrix s = u_perp.transpose() * m_in * p.V_hat.columns;  // (m-k_m) x k_n
  p.R1 = r.topRows(k1);
  p.R2 = r.bottomRows(k_m - k1);
  p.S1 = s.leftCols(k1);
  p.S2 = s.rightCols(k_n - k1);
  p.A3 = u_perp.transpose() * m_in * v_perp;
  p.A3_norm = spectral_norm(p.A3);

  Matrix sigma_rect = Matrix::Zero(k_m, k_n);
  for (int i = 0; i < p.sigma_hat.size(); ++i) sigma_rect(i, i) = p.sigma_hat(i);
  p.coupling_residual =
      spectral_norm(p.U_hat.columns.transpose() * m_in * p.V_hat.columns - sigma_rect);
  return p;
}

// Convenience overload orthonormalizing raw trial matrices first.
inline SvdProjection project_svd(const Matrix& m_in, const Matrix& u_raw, const Matrix& v_raw,
                                 int k1) {
  return project_svd(m_in, orthonormalize(u_raw), orthonormalize(v_raw), k1);
}

inline int svd_kprime(const SvdProjection& p) {
  return std::max(p.k_m - p.k1, p.k_n - p.k1);
}

// sigma_hat padded with zeros beyond min(k_m, k_n) - k1, per the padding rule.
inline double svd_sigma_hat_padded(const SvdProjection& p, int k1_plus_i) {
  return k1_plus_i < p.sigma_hat.size() ? p.sigma_hat(k1_plus_i) : 0.0;
}

inline SvdGapData svd_gaps(const SvdProjection& p, double sigma_min_exact, bool estimated) {
  SvdGapData g;
  g.sigma_min = sigma_min_exact;
  g.estimated = estimated;
  g.Gap = g.sigma_min - p.A3_norm;
  double sigma2_norm = svd_sigma_hat_padded(p, p.k1);  // largest trailing Ritz value
  g.gap = g.sigma_min - sigma2_norm;
  g.Gap_statement = p.sigma_hat(p.k1 - 1) - p.A3_norm;
  int kp = svd_kprime(p);
  g.pair_dists.resize(kp);
  for (int i = 0; i < kp; ++i) g.pair_dists(i) = g.sigma_min - svd_sigma_hat_padded(p, p.k1 + i);
  return g;
}

// Exact mode: sigma_min(Sigma1) is the k1-th exact singular value from the
// oracle. Estimated mode substitutes the smallest kept Ritz singular value.
inline SvdGapData svd_gaps_exact(const SvdProjection& p, double sigma_k1_exact) {
  return svd_gaps(p, sigma_k1_exact, false);
}
inline SvdGapData svd_gaps_estimated(const SvdProjection& p) {
  return svd_gaps(p, p.sigma_hat(p.k1 - 1), true);
}

namespace detail {
// Shared prefix norms. The Frobenius flavor stacks the two residual blocks,
// sqrt(||R.||_F^2 + ||S.||_F^2), which dominates the max of the two subspace
// angles in Frobenius norm; the spectral flavor uses max(||R.||, ||S.||).
inline double svd_prefix(const Matrix& rblk, const Matrix& sblk, NormKind norm) {
  if (norm == NormKind::Spectral) return std::max(spectral_norm(rblk), spectral_norm(sblk));
  double rf = frobenius_norm(rblk), sf = frobenius_norm(sblk);
  return std::sqrt(rf * rf + sf * sf);
}

inline BoundReport svd_inapplicable(const char* name, NormKind norm, double slack) {
  BoundReport b;
  b.name = name;
  b.norm = norm;
  b.assumption_slack = slack;
  return b;
}
}  // namespace detail

// Unconditional singular-subspace bound
// (max(||R||, ||S||) / Gap) (1 + max(||R2||, ||S2||) / gap), bounding the
// larger of the left and right subspace-angle norms.
inline BoundReport svd_boundvec(const SvdProjection& p, const SvdGapData& g,
                                NormKind norm = NormKind::Spectral) {
  // Block assignment instead of comma-init: one-sided projections make these
  // blocks legitimately empty.
  Matrix rfull(p.k_m, p.R1.cols());
  rfull.topRows(p.k1) = p.R1;
  rfull.bottomRows(p.k_m - p.k1) = p.R2;
  Matrix sfull(p.S1.rows(), p.k_n);
  sfull.leftCols(p.k1) = p.S1;
  sfull.rightCols(p.k_n - p.k1) = p.S2;
  BoundReport b;
  b.name = "svd_boundvec";
  b.norm = norm;
  b.assumption_slack = std::min(g.Gap, g.gap);
  if (!(g.Gap > 0.0) || !(g.gap > 0.0)) {
    b.value = kInf;
    return b;
  }
  double tail = std::max(spectral_norm(p.R2), spectral_norm(p.S2));
  b.sqrt_factor = norm == NormKind::Spectral ? 1.0 + tail / g.gap
                                             : std::sqrt(1.0 + (tail / g.gap) * (tail / g.gap));
  double prefix = detail::svd_prefix(rfull, sfull, norm);
  b.value = prefix / g.Gap * b.sqrt_factor;
  b.applicable = true;
  b.inputs_digest = detail::digest("RS,RS2,gap,Gap", {prefix, tail, g.gap, g.Gap});
  return b;
}

// Refined bound with the quadratic correction: if
// Gap > max(||R2||, ||S2||)^2 / gap then
// max(||R1||, ||S1||) / (Gap - max(||R2||, ||S2||)^2/gap) * (1 + max(...)/gap).
inline BoundReport svd_sin22(const SvdProjection& p, const SvdGapData& g,
                             NormKind norm = NormKind::Spectral) {
  BoundReport b;
  b.name = "svd_sin22";
  b.norm = norm;
  if (!(g.Gap > 0.0) || !(g.gap > 0.0)) {
    b.assumption_slack = std::min(g.Gap, g.gap);
    return b;
  }
  double tail = std::max(spectral_norm(p.R2), spectral_norm(p.S2));
  double denom = g.Gap - tail * tail / g.gap;
  b.assumption_slack = denom;
  double ratio = tail / g.gap;
  b.sqrt_factor =
      norm == NormKind::Spectral ? 1.0 + ratio : std::sqrt(1.0 + ratio * ratio);
  double prefix = detail::svd_prefix(p.R1, p.S1, norm);
  b.inputs_digest = detail::digest("RS1,RS2,gap,Gap", {prefix, tail, g.gap, g.Gap});
  if (denom > 0.0) {
    b.value = prefix / denom * b.sqrt_factor;
    b.applicable = true;
  }
  return b;
}

// Refined bound from the per-triplet couplings: with
// S2 = sum max(||r_2i||, ||s_2i||)^2 / (sigma_min - sigma_hat_{k1+i}) and
// S1 = the same sum without squares, if Gap > S2 then
// max(||R1||, ||S1||) / (Gap - S2) * (1 + S1). Rows of R2 and columns of S2
// are zero-padded so both sides run over k' = max(k_m, k_n) - k1 triplets.
inline BoundReport svd_sin2indiv(const SvdProjection& p, const SvdGapData& g,
                                 NormKind norm = NormKind::Spectral) {
  BoundReport b;
  b.name = "svd_sin2indiv";
  b.norm = norm;
  if (!(g.Gap > 0.0) || !(g.gap > 0.0)) {
    b.assumption_slack = std::min(g.Gap, g.gap);
    return b;
  }
  int kp = svd_kprime(p);
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < kp; ++i) {
    double rn = i < p.R2.rows() ? p.R2.row(i).norm() : 0.0;
    double sn = i < p.S2.cols() ? p.S2.col(i).norm() : 0.0;
    double c = std::max(rn, sn);
    double dist = g.pair_dists(i);
    if (!(dist > 0.0)) {
      b.assumption_slack = dist;
      return b;  // trailing Ritz value at or above sigma_min: hypothesis fails
    }
    s1 += c / dist;
    s2 += c * c / dist;
  }
  double denom = g.Gap - s2;
  b.assumption_slack = denom;
  b.sqrt_factor = norm == NormKind::Spectral ? 1.0 + s1 : std::sqrt(1.0 + s1 * s1);
  double prefix = detail::svd_prefix(p.R1, p.S1, norm);
  b.inputs_digest = detail::digest("RS1,S1,S2,Gap", {prefix, s1, s2, g.Gap});
  if (denom > 0.0) {
    b.value = prefix / denom * b.sqrt_factor;
    b.applicable = true;
  }
  return b;
}

}  // namespace ritz
