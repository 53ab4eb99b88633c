#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ritz/core.hpp"
#include "ritz/errors.hpp"
#include "ritz/rayleigh_ritz.hpp"
#include "ritz/rng.hpp"

namespace ritz {

// Solve (A + shift I) x = b column by column for a symmetric tridiagonal A
// by the Thomas recurrence. Used as the cheap preconditioner for the
// Laplacian experiments; O(n) per column.
inline Matrix thomas_solve(const Vector& diag, const Vector& offdiag, const Matrix& rhs,
                           double shift = 0.0) {
  const int n = static_cast<int>(diag.size());
  if (offdiag.size() != n - 1)
    throw Error(ErrorCode::DimensionMismatch, "offdiagonal must have length n-1");
  if (rhs.rows() != n)
    throw Error(ErrorCode::DimensionMismatch, "right-hand side rows must match the matrix");
  Vector c(n);      // modified upper diagonal
  Matrix x = rhs;   // forward-eliminated right-hand sides, then the solution
  double piv = diag(0) + shift;
  c(0) = n > 1 ? offdiag(0) / piv : 0.0;
  x.row(0) /= piv;
  for (int i = 1; i < n; ++i) {
    piv = diag(i) + shift - offdiag(i - 1) * c(i - 1);
    if (i < n - 1) c(i) = offdiag(i) / piv;
    x.row(i) = (x.row(i) - offdiag(i - 1) * x.row(i - 1)) / piv;
  }
  for (int i = n - 2; i >= 0; --i) x.row(i) -= c(i) * x.row(i + 1);
  return x;
}

struct LobpcgHistoryEntry {
  Vector ritz_values;
  Vector residual_norms;
  bool restarted = false;  // P was dropped to recover basis rank this iteration
};

// State of the block iteration. X stays orthonormal at every iteration; the
// history records the extracted Ritz values and residual norms per step.
struct LobpcgState {
  int iteration = 0;
  Matrix X;
  Vector ritz_values;
  Matrix W;  // residual columns still feeding the subspace (soft lock applied)
  Matrix P;  // previous search directions, X-block coefficients removed
  Matrix residual_block;  // all b residual columns of the current extraction
  std::vector<LobpcgHistoryEntry> history;
  int restarts = 0;
};

struct LobpcgOptions {
  int block_size = 1;
  int iters = 40;
  std::uint64_t seed = 0;
  // Maps a residual block to search directions; identity when empty (the
  // basic, unpreconditioned method).
  std::function<Matrix(const Matrix&)> preconditioner;
  // Called after every completed iteration.
  std::function<void(const LobpcgState&)> observer;
  double soft_lock_tol = 1e-13;  // residuals below tol*scale leave the W block
  double drop_tol = 1e-12;       // relative column drop threshold in the block orth
};

namespace detail {

// Append candidate columns to an orthonormal block by doubly-applied
// Gram-Schmidt, dropping candidates whose orthogonal component falls under
// drop_tol relative to their original size (or under an absolute floor for
// zero columns). Returns the number of columns kept.
inline int gs_append(Matrix& q, int& cols, const Matrix& cand, double drop_tol) {
  int kept = 0;
  for (int j = 0; j < cand.cols(); ++j) {
    Vector v = cand.col(j);
    double orig = v.norm();
    if (!(orig > 0.0)) continue;
    for (int pass = 0; pass < 2; ++pass)
      if (cols > 0) v -= q.leftCols(cols) * (q.leftCols(cols).transpose() * v);
    double nrm = v.norm();
    if (nrm <= drop_tol * orig) continue;
    q.col(cols++) = v / nrm;
    ++kept;
  }
  return kept;
}

}  // namespace detail

// Basic block LOBPCG for the smallest eigenpairs of a symmetric problem.
//
// Input:  symmetric problem (dense, tridiagonal, or operator), options with
//         block size b <= n/3 and a fixed iteration budget.
// Output: final state; history carries (ritz_values, residual_norms) per
//         iteration. Deterministic for a fixed seed.
// Each iteration orthonormalizes span[X, T W, P], runs Rayleigh-Ritz there,
// extracts the b smallest Ritz pairs, and rebuilds P from the part of the
// new block that came through W and P. A rank-deficient combined basis
// drops P and retries once (recorded as a restart); if even [X, T W] cannot
// span b directions the iteration cannot continue.
inline LobpcgState lobpcg_run(const SymmetricProblem& problem, const LobpcgOptions& opt) {
  const int n = problem.n();
  const int b = opt.block_size;
  if (b < 1 || 3 * b > n)
    throw Error(ErrorCode::DimensionMismatch, "block size must satisfy 1 <= b <= n/3", b);
  if (opt.iters < 1)
    throw Error(ErrorCode::DimensionMismatch, "iteration budget must be at least 1", opt.iters);

  const double scale = problem.scale_hint();
  LobpcgState st;
  RandomStream rs = RandomStream::derived(opt.seed, 0);
  st.X = orthonormalize(rs.gaussian(n, b)).columns;

  for (int it = 0; it < opt.iters; ++it) {
    // Candidate search directions from the current residuals.
    Matrix w_dirs(n, 0);
    if (st.W.cols() > 0)
      w_dirs = opt.preconditioner ? opt.preconditioner(st.W) : st.W;

    Matrix q(n, 3 * b);
    int cols = 0;
    bool restarted = false;
    int x_cols = detail::gs_append(q, cols, st.X, opt.drop_tol);
    detail::gs_append(q, cols, w_dirs, opt.drop_tol);
    int cols_before_p = cols;
    if (st.P.cols() > 0) detail::gs_append(q, cols, st.P, opt.drop_tol);
    if (cols < b) {
      // Combined basis collapsed; drop P and retry from scratch.
      restarted = true;
      cols = cols_before_p;
      if (cols < b)
        throw Error(ErrorCode::BreakdownUnrecoverable,
                    "iteration basis lost rank even without P", cols);
    }

    auto d = rr_decompose(problem, OrthonormalBasis::adopt(q.leftCols(cols)));

    Matrix x_new = d.ritz_vectors.leftCols(b);
    st.ritz_values = d.ritz_values.head(b);
    Matrix residuals = d.residual_columns.leftCols(b);
    st.residual_block = residuals;

    // P carries the X-update directions: expand the new block over the
    // iteration basis and remove the coefficients on the old X block.
    Matrix coeff = q.leftCols(cols).transpose() * x_new;
    coeff.topRows(std::min(x_cols, cols)).setZero();
    Matrix p_cand = q.leftCols(cols) * coeff;
    Matrix p_next(n, b);
    int p_cols = 0;
    for (int j = 0; j < p_cand.cols(); ++j)
      if (p_cand.col(j).norm() > 1e-10) p_next.col(p_cols++) = p_cand.col(j).normalized();
    st.P = p_next.leftCols(p_cols);

    // Soft-lock converged pairs: their residuals stop feeding the subspace.
    Matrix w_next(n, b);
    int w_cols = 0;
    for (int j = 0; j < b; ++j)
      if (residuals.col(j).norm() > opt.soft_lock_tol * std::max(scale, 1.0))
        w_next.col(w_cols++) = residuals.col(j);
    st.W = w_next.leftCols(w_cols);

    st.X = std::move(x_new);
    st.iteration = it + 1;
    if (restarted) ++st.restarts;

    LobpcgHistoryEntry entry;
    entry.ritz_values = st.ritz_values;
    entry.residual_norms = d.residual_norms.head(b);
    entry.restarted = restarted;
    st.history.push_back(std::move(entry));
    if (opt.observer) opt.observer(st);
  }
  return st;
}

}  // namespace ritz
