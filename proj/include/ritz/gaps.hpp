#pragma once

#include <limits>
#include <optional>

#include "ritz/rayleigh_ritz.hpp"

namespace ritz {

enum class GapMode { Exact, Estimated };

// Gap quantities feeding the error bounds, for one target Ritz pair.
//   gap:        distance from the target eigenvalue to the other Ritz values
//   Gap:        distance from the target eigenvalue to the complement spectrum
//   gap_c:      classical gap, distance from the target Ritz value to the
//               exact eigenvalues other than the target's
//   pair_dists: per non-target Ritz value j, the distance |lambda - lambda_hat_j|
// In exact mode "the target eigenvalue" is the oracle eigenvalue paired with
// the target index; estimated mode substitutes Ritz quantities throughout and
// is never treated as certified.
struct GapData {
  GapMode mode = GapMode::Exact;
  int target_index = 0;
  double gap = 0.0;
  double Gap = 0.0;
  double gap_c = 0.0;
  Vector pair_dists;  // size k-1, Ritz order with the target skipped
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Exact-mode gaps: pairs the i-th smallest oracle eigenvalue with the i-th
// Ritz value and measures every distance from that exact eigenvalue. Needs
// the materialized complement for the complement spectrum.
//
// Input:  decomposition with complement, target index, full oracle spectrum
//         (ascending, length n)
// Output: gap data as defined above; k = 1 yields the sentinel gap = +inf
inline GapData exact_gaps(const RitzDecomposition& d, int i, const Vector& oracle_values) {
  if (i < 0 || i >= d.k)
    throw Error(ErrorCode::IndexOutOfRange, "target index outside the Ritz block", i);
  if (!d.complement)
    throw Error(ErrorCode::ComplementMissing, "exact gaps need the complement spectrum");
  if (oracle_values.size() != d.n)
    throw Error(ErrorCode::DimensionMismatch, "oracle spectrum must have length n");

  GapData g;
  g.mode = GapMode::Exact;
  g.target_index = i;
  double lambda = oracle_values(i);

  g.gap = kInf;
  g.pair_dists.resize(d.k - 1);
  int at = 0;
  for (int j = 0; j < d.k; ++j) {
    if (j == i) continue;
    double dist = std::abs(lambda - d.ritz_values(j));
    g.pair_dists(at++) = dist;
    g.gap = std::min(g.gap, dist);
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(d.complement->a3, Eigen::EigenvaluesOnly);
  g.Gap = kInf;
  for (int j = 0; j < es.eigenvalues().size(); ++j)
    g.Gap = std::min(g.Gap, std::abs(lambda - es.eigenvalues()(j)));

  g.gap_c = kInf;
  double lambda_hat = d.ritz_values(i);
  for (int j = 0; j < oracle_values.size(); ++j) {
    if (oracle_values(j) == lambda) continue;  // exclude the target eigenvalue as a value
    g.gap_c = std::min(g.gap_c, std::abs(lambda_hat - oracle_values(j)));
  }
  return g;
}

// Estimated-mode gaps built from Ritz values only (the quantities actually
// available in an iteration). The complement proxy is the distance to the
// last kept Ritz value, or to lambda_beyond when the caller retained a Ritz
// value outside the block.
//
// Input:  decomposition, target index, optional beyond-the-block Ritz value
// Output: gap data with gap_c set to the same Ritz-based proxy as gap
inline GapData estimated_gaps(const RitzDecomposition& d, int i,
                              std::optional<double> lambda_beyond = std::nullopt) {
  if (i < 0 || i >= d.k)
    throw Error(ErrorCode::IndexOutOfRange, "target index outside the Ritz block", i);
  if (d.k < 2)
    throw Error(ErrorCode::TooFewRitzPairs, "estimated gaps need at least two Ritz values", d.k);

  GapData g;
  g.mode = GapMode::Estimated;
  g.target_index = i;
  double lambda_hat = d.ritz_values(i);

  g.gap = kInf;
  g.pair_dists.resize(d.k - 1);
  int at = 0;
  for (int j = 0; j < d.k; ++j) {
    if (j == i) continue;
    double dist = std::abs(lambda_hat - d.ritz_values(j));
    g.pair_dists(at++) = dist;
    g.gap = std::min(g.gap, dist);
  }
  g.gap_c = g.gap;
  g.Gap = lambda_beyond ? std::abs(lambda_hat - *lambda_beyond)
                        : std::abs(lambda_hat - d.ritz_values(d.k - 1));
  return g;
}

}  // namespace ritz
