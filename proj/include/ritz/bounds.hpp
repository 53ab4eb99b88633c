#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "ritz/gaps.hpp"

namespace ritz {

enum class NormKind { Spectral, Frobenius };

inline const char* norm_name(NormKind n) {
  return n == NormKind::Spectral ? "spectral" : "frobenius";
}

// One evaluated error bound. A bound whose hypothesis fails is reported as
// inapplicable with value +inf (missing data in plots), never as an error;
// assumption_slack records the margin by which the hypothesis held (positive)
// or failed (nonpositive). sqrt_factor keeps the final sqrt(1 + b^2)-type
// factor separate so refinements can recombine prefixes and factors.
struct BoundReport {
  std::string name;
  double value = kInf;
  bool applicable = false;
  double assumption_slack = 0.0;
  std::string inputs_digest;
  NormKind norm = NormKind::Spectral;
  double sqrt_factor = 1.0;
  bool is_estimate = false;  // true for first-order estimates that are not bounds
  int argmin_kprime = -1;    // partition sweep: block size attaining the minimum
};

namespace detail {
inline std::string digest(const char* fmt_names, std::initializer_list<double> vals) {
  // "a,b,c" with 17 significant digits per value; readable and reproducible.
  std::string names(fmt_names);
  std::string out;
  size_t pos = 0;
  for (double v : vals) {
    size_t comma = names.find(',', pos);
    std::string key = names.substr(pos, comma == std::string::npos ? comma : comma - pos);
    pos = comma == std::string::npos ? names.size() : comma + 1;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s=%.17g", key.c_str(), v);
    if (!out.empty()) out += ";";
    out += buf;
  }
  return out;
}

inline void require_positive_gap(double g, const char* what) {
  if (!(g > 0.0))
    throw Error(ErrorCode::NonpositiveGap, std::string(what) + " must be positive");
}
}  // namespace detail

// Classical Davis-Kahan style bound ||r|| / gap_c, where gap_c is the
// distance from the Ritz value to the exact eigenvalues other than the
// target's.
inline BoundReport dk_classical(double res_norm, double gap_c) {
  detail::require_positive_gap(gap_c, "classical gap");
  BoundReport b;
  b.name = "dk_classical";
  b.value = res_norm / gap_c;
  b.applicable = true;
  b.assumption_slack = gap_c;
  b.inputs_digest = detail::digest("r,gap_c", {res_norm, gap_c});
  return b;
}

// Unconditional two-sided bound (||R||/Gap) sqrt(1 + ||R2||^2/gap^2).
// gap = +inf (single Ritz pair) degenerates to ||R||/Gap.
inline BoundReport bound_2x2(double R_norm, double R2_norm, double gap, double Gap) {
  detail::require_positive_gap(gap, "gap");
  detail::require_positive_gap(Gap, "Gap");
  BoundReport b;
  b.name = "boundvec";
  double ratio = std::isinf(gap) ? 0.0 : R2_norm / gap;
  b.sqrt_factor = std::sqrt(1.0 + ratio * ratio);
  b.value = (R_norm / Gap) * b.sqrt_factor;
  b.applicable = true;
  b.assumption_slack = Gap;
  b.inputs_digest = detail::digest("R,R2,gap,Gap", {R_norm, R2_norm, gap, Gap});
  return b;
}

// Refined bound with the quadratic gap correction: if Gap > ||R2||^2/gap,
// ||r1|| / (Gap - ||R2||^2/gap) * sqrt(1 + ||R2||^2/gap^2); the numerator is
// only the target residual.
inline BoundReport bound_sin22(double r1_norm, double R2_norm, double gap, double Gap) {
  detail::require_positive_gap(gap, "gap");
  detail::require_positive_gap(Gap, "Gap");
  BoundReport b;
  b.name = "sin22";
  double correction = std::isinf(gap) ? 0.0 : R2_norm * R2_norm / gap;
  double denom = Gap - correction;
  double ratio = std::isinf(gap) ? 0.0 : R2_norm / gap;
  b.sqrt_factor = std::sqrt(1.0 + ratio * ratio);
  b.assumption_slack = denom;
  b.inputs_digest = detail::digest("r1,R2,gap,Gap", {r1_norm, R2_norm, gap, Gap});
  if (denom > 0.0) {
    b.value = r1_norm / denom * b.sqrt_factor;
    b.applicable = true;
  }
  return b;
}

// Refined bound using the individual residual norms of the non-target Ritz
// pairs: with S2 = sum ||r_j||^2 / |lambda - lambda_hat_j| and
// S1 = sum ||r_j|| / |lambda - lambda_hat_j|, if Gap > S2 then
// ||r1|| / (Gap - S2) * sqrt(1 + S1^2).
//
// Input:  target residual norm, residual norms of the other pairs, matching
//         pair distances |lambda - lambda_hat_j| (same order), and Gap
inline BoundReport bound_sin2indiv(double r1_norm, const Vector& other_r_norms,
                                   const Vector& pair_dists, double Gap) {
  detail::require_positive_gap(Gap, "Gap");
  if (other_r_norms.size() != pair_dists.size())
    throw Error(ErrorCode::DimensionMismatch, "residual norms and pair distances must match");
  double s1 = 0.0, s2 = 0.0;
  for (int j = 0; j < pair_dists.size(); ++j) {
    if (!(pair_dists(j) > 0.0))
      throw Error(ErrorCode::NonpositivePairDistance, "pair distance must be positive");
    s1 += other_r_norms(j) / pair_dists(j);
    s2 += other_r_norms(j) * other_r_norms(j) / pair_dists(j);
  }
  BoundReport b;
  b.name = "sin2indiv";
  b.sqrt_factor = std::sqrt(1.0 + s1 * s1);
  double denom = Gap - s2;
  b.assumption_slack = denom;
  b.inputs_digest = detail::digest("r1,S1,S2,Gap", {r1_norm, s1, s2, Gap});
  if (denom > 0.0) {
    b.value = r1_norm / denom * b.sqrt_factor;
    b.applicable = true;
  }
  return b;
}

// The sqrt factors of the two refined bounds are interchangeable, so the best
// certified value combines the smaller prefix with the smaller factor.
inline BoundReport min_sqrt_refinement(const BoundReport& b22, const BoundReport& bindiv) {
  BoundReport b;
  b.name = "min_sqrt";
  b.norm = b22.norm;
  double prefix22 = b22.applicable ? b22.value / b22.sqrt_factor : kInf;
  double prefixind = bindiv.applicable ? bindiv.value / bindiv.sqrt_factor : kInf;
  b.sqrt_factor = std::min(b22.sqrt_factor, bindiv.sqrt_factor);
  b.assumption_slack = std::max(b22.assumption_slack, bindiv.assumption_slack);
  b.inputs_digest = b22.inputs_digest + "|" + bindiv.inputs_digest;
  double prefix = std::min(prefix22, prefixind);
  if (std::isfinite(prefix)) {
    b.value = prefix * b.sqrt_factor;
    b.applicable = true;
  }
  return b;
}

// Finite-precision composite: min(1, max(c_round u / gap, core)). The
// roundoff floor covers the error double precision commits when the gap is
// tiny; an inapplicable core degenerates to the trivial certified bound 1.
inline BoundReport composite_bound(const BoundReport& core, double gap,
                                   double u = std::pow(2.0, -53), double c_round = 10.0) {
  detail::require_positive_gap(gap, "gap");
  BoundReport b;
  b.name = "composite";
  b.norm = core.norm;
  double floor = std::isinf(gap) ? 0.0 : c_round * u / gap;
  b.value = std::min(1.0, std::max(floor, core.value));
  b.applicable = true;
  b.assumption_slack = core.assumption_slack;
  b.inputs_digest = detail::digest("core,gap,u,c_round", {core.value, gap, u, c_round});
  return b;
}

// Sweep over re-partitions: for each block size kp that keeps the target in
// the leading block, move the trailing Ritz directions into the complement,
// recompute the gaps against the enlarged complement block, and take the
// minimum of the resulting two-sided bounds. Interpolates between the
// classical one-pair bound and the full-block bound.
//
// Input:  decomposition with complement, target index, full oracle spectrum
// Output: minimized bound with argmin_kprime recording the best block size
inline BoundReport partition_sweep(const RitzDecomposition& d, int i,
                                   const Vector& oracle_values) {
  if (i < 0 || i >= d.k)
    throw Error(ErrorCode::IndexOutOfRange, "target index outside the Ritz block", i);
  if (!d.complement)
    throw Error(ErrorCode::ComplementMissing, "partition sweep needs the complement");
  TildeBlocks t = assemble_tilde(d);
  double lambda = oracle_values(i);
  int nc = static_cast<int>(t.A3.rows());

  BoundReport best;
  best.name = "partition_sweep";
  for (int kp = i + 1; kp <= d.k; ++kp) {
    int trailing = d.k - kp;
    // Complement block for this partition: trailing Ritz values on the
    // diagonal coupled to A3 by their residual columns.
    Matrix a3p(nc + trailing, nc + trailing);
    a3p.setZero();
    for (int j = 0; j < trailing; ++j) a3p(j, j) = d.ritz_values(kp + j);
    a3p.block(trailing, trailing, nc, nc) = t.A3;
    if (trailing > 0) {
      a3p.block(trailing, 0, nc, trailing) = t.R.rightCols(trailing);
      a3p.block(0, trailing, trailing, nc) = t.R.rightCols(trailing).transpose();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(a3p, Eigen::EigenvaluesOnly);
    double Gap = kInf;
    for (int j = 0; j < es.eigenvalues().size(); ++j)
      Gap = std::min(Gap, std::abs(lambda - es.eigenvalues()(j)));
    double gap = kInf;
    for (int j = 0; j < kp; ++j)
      if (j != i) gap = std::min(gap, std::abs(lambda - d.ritz_values(j)));
    double R_norm = spectral_norm(t.R.leftCols(kp));
    double R2_norm = 0.0;
    if (kp > 1) {
      Matrix r2(nc, kp - 1);
      int at = 0;
      for (int j = 0; j < kp; ++j)
        if (j != i) r2.col(at++) = t.R.col(j);
      R2_norm = spectral_norm(r2);
    }
    if (!(Gap > 0.0) || !(gap > 0.0)) continue;
    BoundReport cand = bound_2x2(R_norm, R2_norm, gap, Gap);
    if (!best.applicable || cand.value < best.value) {
      best.value = cand.value;
      best.applicable = true;
      best.assumption_slack = cand.assumption_slack;
      best.sqrt_factor = cand.sqrt_factor;
      best.inputs_digest = cand.inputs_digest;
      best.argmin_kprime = kp;
    }
  }
  return best;
}

// First-order Rayleigh-Ritz error estimate ||r_i|| / Gap_i. An estimate of
// the actual error, not a certified bound; flagged as such.
inline BoundReport first_order_estimate(double r_norm, double Gap) {
  detail::require_positive_gap(Gap, "Gap");
  BoundReport b;
  b.name = "first_order";
  b.value = r_norm / Gap;
  b.applicable = true;
  b.is_estimate = true;
  b.assumption_slack = Gap;
  b.inputs_digest = detail::digest("r,Gap", {r_norm, Gap});
  return b;
}

}  // namespace ritz
