#pragma once

#include <optional>
#include <vector>

#include "ritz/bounds.hpp"

namespace ritz {

// Inputs for the invariant-subspace bounds. The trial block splits into the
// k1 target columns and the k - k1 remaining Ritz directions: R1 is the
// residual block of the target columns, R2 of the rest, R the whole block.
// gap and Gap measure distances from the k1 target eigenvalues (exact mode)
// to the non-target Ritz values and the complement spectrum respectively.
struct SubspaceBoundInputs {
  int k1 = 0;
  double R_norm_spectral = 0.0;
  double R_norm_frobenius = 0.0;
  double R1_norm_spectral = 0.0;
  double R1_norm_frobenius = 0.0;
  double R2_norm = 0.0;  // spectral
  Vector r_norms;        // ||r_i|| for i = k1+1..k
  double gap = kInf;     // min |lambda(Lambda1) - lambda(Lambda_hat_2)|
  double Gap = 0.0;      // min |lambda(Lambda1) - lambda(A3)|
  Vector pair_dists;     // min |lambda(Lambda1) - lambda_hat_i|, i = k1+1..k
  NormKind norm = NormKind::Spectral;
};

// Unconditional subspace bound (||R|| / Gap) sqrt(1 + ||R2||^2 / gap^2), with
// the full residual block in the numerator. Spectral or Frobenius flavor per
// the input record's norm field.
inline BoundReport subspace_boundvec(const SubspaceBoundInputs& inp) {
  detail::require_positive_gap(inp.gap, "gap");
  detail::require_positive_gap(inp.Gap, "Gap");
  BoundReport b;
  b.name = "subspace_boundvec";
  b.norm = inp.norm;
  double prefix_norm =
      inp.norm == NormKind::Spectral ? inp.R_norm_spectral : inp.R_norm_frobenius;
  double ratio = std::isinf(inp.gap) ? 0.0 : inp.R2_norm / inp.gap;
  b.sqrt_factor = std::sqrt(1.0 + ratio * ratio);
  b.value = prefix_norm / inp.Gap * b.sqrt_factor;
  b.applicable = true;
  b.assumption_slack = inp.Gap;
  b.inputs_digest =
      detail::digest("R,R2,gap,Gap", {prefix_norm, inp.R2_norm, inp.gap, inp.Gap});
  return b;
}

// Companion flavor valid in every unitarily invariant norm, with the final
// factor (1 + ||R2||/gap) instead of sqrt(1 + ||R2||^2/gap^2); emitted for
// the spectral norm alongside the flavor above.
inline BoundReport subspace_boundvec_ui(const SubspaceBoundInputs& inp) {
  detail::require_positive_gap(inp.gap, "gap");
  detail::require_positive_gap(inp.Gap, "Gap");
  BoundReport b;
  b.name = "subspace_boundvec_ui";
  b.norm = NormKind::Spectral;
  double ratio = std::isinf(inp.gap) ? 0.0 : inp.R2_norm / inp.gap;
  b.sqrt_factor = 1.0 + ratio;
  b.value = inp.R_norm_spectral / inp.Gap * b.sqrt_factor;
  b.applicable = true;
  b.assumption_slack = inp.Gap;
  b.inputs_digest =
      detail::digest("R,R2,gap,Gap", {inp.R_norm_spectral, inp.R2_norm, inp.gap, inp.Gap});
  return b;
}

// Refined subspace bound: if Gap > ||R2||^2/gap then
// ||R1|| / (Gap - ||R2||^2/gap) * sqrt(1 + ||R2||^2/gap^2).
inline BoundReport subspace_sin22(const SubspaceBoundInputs& inp) {
  detail::require_positive_gap(inp.gap, "gap");
  detail::require_positive_gap(inp.Gap, "Gap");
  BoundReport b;
  b.name = "subspace_sin22";
  b.norm = inp.norm;
  double prefix_norm =
      inp.norm == NormKind::Spectral ? inp.R1_norm_spectral : inp.R1_norm_frobenius;
  double correction = std::isinf(inp.gap) ? 0.0 : inp.R2_norm * inp.R2_norm / inp.gap;
  double ratio = std::isinf(inp.gap) ? 0.0 : inp.R2_norm / inp.gap;
  b.sqrt_factor = std::sqrt(1.0 + ratio * ratio);
  double denom = inp.Gap - correction;
  b.assumption_slack = denom;
  b.inputs_digest =
      detail::digest("R1,R2,gap,Gap", {prefix_norm, inp.R2_norm, inp.gap, inp.Gap});
  if (denom > 0.0) {
    b.value = prefix_norm / denom * b.sqrt_factor;
    b.applicable = true;
  }
  return b;
}

// Refined subspace bound using the individual non-target residuals: with
// S2 = sum ||r_i||^2 / dist_i and S1 = sum ||r_i|| / dist_i over i = k1+1..k,
// if Gap > S2 then ||R1|| / (Gap - S2) * sqrt(1 + S1^2).
inline BoundReport subspace_sin2indiv(const SubspaceBoundInputs& inp) {
  detail::require_positive_gap(inp.Gap, "Gap");
  if (inp.r_norms.size() != inp.pair_dists.size())
    throw Error(ErrorCode::DimensionMismatch, "residual norms and pair distances must match");
  double s1 = 0.0, s2 = 0.0;
  for (int j = 0; j < inp.pair_dists.size(); ++j) {
    if (!(inp.pair_dists(j) > 0.0))
      throw Error(ErrorCode::NonpositivePairDistance, "pair distance must be positive");
    s1 += inp.r_norms(j) / inp.pair_dists(j);
    s2 += inp.r_norms(j) * inp.r_norms(j) / inp.pair_dists(j);
  }
  BoundReport b;
  b.name = "subspace_sin2indiv";
  b.norm = inp.norm;
  double prefix_norm =
      inp.norm == NormKind::Spectral ? inp.R1_norm_spectral : inp.R1_norm_frobenius;
  b.sqrt_factor = std::sqrt(1.0 + s1 * s1);
  double denom = inp.Gap - s2;
  b.assumption_slack = denom;
  b.inputs_digest = detail::digest("R1,S1,S2,Gap", {prefix_norm, s1, s2, inp.Gap});
  if (denom > 0.0) {
    b.value = prefix_norm / denom * b.sqrt_factor;
    b.applicable = true;
  }
  return b;
}

// Assembles the subspace inputs from a decomposition. Exact mode pairs the
// k1 smallest oracle eigenvalues with the k1 smallest Ritz values; an index
// override selects other oracle eigenvalues as the target set (interior
// targets). Passing no oracle yields estimated mode, which substitutes the
// leading Ritz values for the target eigenvalues.
//
// Input:  decomposition (complement required in exact mode), target width k1,
//         oracle spectrum or nullopt, optional oracle index override
// Output: filled input record for the bound functions above
inline SubspaceBoundInputs make_subspace_inputs(
    const RitzDecomposition& d, int k1, const std::optional<Vector>& oracle_values,
    NormKind norm = NormKind::Spectral,
    const std::vector<int>& oracle_indices = {}) {
  if (k1 < 1 || k1 > d.k)
    throw Error(ErrorCode::IndexOutOfRange, "target width must satisfy 1 <= k1 <= k", k1);

  SubspaceBoundInputs inp;
  inp.k1 = k1;
  inp.norm = norm;
  inp.R_norm_spectral = d.residual_total_norm;
  inp.R_norm_frobenius = frobenius_norm(d.residual_columns);
  inp.R1_norm_spectral = spectral_norm(d.residual_columns.leftCols(k1));
  inp.R1_norm_frobenius = frobenius_norm(d.residual_columns.leftCols(k1));
  inp.R2_norm = k1 < d.k ? spectral_norm(d.residual_columns.rightCols(d.k - k1)) : 0.0;
  inp.r_norms = d.residual_norms.tail(d.k - k1);

  // Target eigenvalue set.
  std::vector<double> targets(k1);
  if (oracle_values) {
    for (int j = 0; j < k1; ++j) {
      int idx = oracle_indices.empty() ? j : oracle_indices.at(j);
      targets[j] = (*oracle_values)(idx);
    }
  } else {
    for (int j = 0; j < k1; ++j) targets[j] = d.ritz_values(j);
  }

  inp.gap = kInf;
  inp.pair_dists.resize(d.k - k1);
  for (int i = k1; i < d.k; ++i) {
    double dist = kInf;
    for (double t : targets) dist = std::min(dist, std::abs(t - d.ritz_values(i)));
    inp.pair_dists(i - k1) = dist;
    inp.gap = std::min(inp.gap, dist);
  }

  if (oracle_values) {
    if (!d.complement)
      throw Error(ErrorCode::ComplementMissing, "exact subspace gaps need the complement");
    Eigen::SelfAdjointEigenSolver<Matrix> es(d.complement->a3, Eigen::EigenvaluesOnly);
    inp.Gap = kInf;
    for (int j = 0; j < es.eigenvalues().size(); ++j)
      for (double t : targets)
        inp.Gap = std::min(inp.Gap, std::abs(t - es.eigenvalues()(j)));
  } else {
    // Ritz proxy: distance from the targets to the last kept Ritz value.
    inp.Gap = kInf;
    for (double t : targets) inp.Gap = std::min(inp.Gap, std::abs(t - d.ritz_values(d.k - 1)));
  }
  return inp;
}

// Davis-Kahan recovery: applying the unconditional subspace bound to the
// complements (target space <- complement of the exact eigenvector, trial
// space <- complement of the Ritz vector, no second Ritz block) turns Gap
// into the classical gap, so the subspace machinery reproduces the classical
// bound ||r|| / gap_c exactly.
//
// Input:  problem, one Ritz pair, full oracle decomposition
// Output: the recovered classical bound (named dk_recovery)
inline BoundReport dk_recovery(const SymmetricProblem& problem, double lambda_hat,
                               const Vector& x_hat, const EigenDecomposition& oracle) {
  if (x_hat.size() != problem.n())
    throw Error(ErrorCode::DimensionMismatch, "Ritz vector has wrong dimension");
  // Pair the Ritz vector with the exact eigenvector of largest overlap.
  int paired = 0;
  double best = -1.0;
  for (int j = 0; j < oracle.vectors.cols(); ++j) {
    double ov = std::abs(oracle.vectors.col(j).dot(x_hat));
    if (ov > best) {
      best = ov;
      paired = j;
    }
  }
  double gap_c = kInf;
  for (int j = 0; j < oracle.values.size(); ++j) {
    if (oracle.values(j) == oracle.values(paired)) continue;
    gap_c = std::min(gap_c, std::abs(lambda_hat - oracle.values(j)));
  }
  Vector r = problem.apply(x_hat) - lambda_hat * x_hat;

  SubspaceBoundInputs inp;
  inp.k1 = problem.n() - 1;  // whole complement is the target block
  inp.R_norm_spectral = r.norm();
  inp.R_norm_frobenius = r.norm();
  inp.R1_norm_spectral = r.norm();
  inp.R1_norm_frobenius = r.norm();
  inp.R2_norm = 0.0;  // no second Ritz block
  inp.gap = kInf;
  inp.Gap = gap_c;
  inp.norm = NormKind::Spectral;
  BoundReport b = subspace_boundvec(inp);
  b.name = "dk_recovery";
  return b;
}

}  // namespace ritz
