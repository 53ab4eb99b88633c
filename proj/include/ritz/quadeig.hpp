#pragma once

#include <cmath>
#include <vector>

#include "ritz/core.hpp"
#include "ritz/errors.hpp"

namespace ritz {
namespace quadx {

// Extended-precision eigenpair polish for desk-scale oracles. Double
// eigensolvers leave O(u*norm) errors that would contaminate observed
// angles near the roundoff floor, so the ground-truth side refines in
// binary128 where one unit roundoff is about 1e-34.

using f128 = __float128;

inline f128 qabs(f128 a) { return a < 0 ? -a : a; }

// Newton square root seeded from the double result; four corrections more
// than double the valid digits each time, overshooting binary128 precision.
inline f128 qsqrt(f128 a) {
  if (a <= 0) return 0;
  f128 x = static_cast<f128>(std::sqrt(static_cast<double>(a)));
  for (int it = 0; it < 4; ++it) x = (x + a / x) / 2;
  return x;
}

using QuadVector = std::vector<f128>;

inline QuadVector to_quad(const Vector& v) {
  QuadVector out(static_cast<std::size_t>(v.size()));
  for (long i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v(i);
  return out;
}

inline f128 qdot(const QuadVector& a, const QuadVector& b) {
  f128 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline f128 qnorm(const QuadVector& a) { return qsqrt(qdot(a, a)); }

inline void qnormalize(QuadVector& a) {
  f128 n = qnorm(a);
  if (n == 0) throw Error(ErrorCode::RankDeficient, "cannot normalize a zero vector");
  for (auto& x : a) x /= n;
}

// y = A v with the double matrix promoted entrywise.
inline QuadVector qapply(const Matrix& a, const QuadVector& v) {
  long n = a.rows();
  QuadVector y(static_cast<std::size_t>(n), 0);
  for (long i = 0; i < n; ++i) {
    f128 s = 0;
    for (long j = 0; j < n; ++j) s += static_cast<f128>(a(i, j)) * v[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

// Solve (A - shift I) y = b by Gaussian elimination with partial pivoting,
// entirely in binary128. Deliberately capped at small n: this is a
// refinement kernel for desk-scale oracles, not a general solver.
//
// Input:  square double matrix A (n <= 16), quad shift and right-hand side
// Output: quad solution vector
inline QuadVector shifted_solve(const Matrix& a, f128 shift, QuadVector b) {
  long n = a.rows();
  if (a.cols() != n || static_cast<long>(b.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "shifted solve needs square A and matching b");
  if (n > 16)
    throw Error(ErrorCode::DimensionTooLarge, "refinement solve is capped at 16", n);

  std::vector<f128> m(static_cast<std::size_t>(n * n));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      m[static_cast<std::size_t>(i * n + j)] =
          static_cast<f128>(a(i, j)) - (i == j ? shift : f128(0));

  auto at = [&](long i, long j) -> f128& { return m[static_cast<std::size_t>(i * n + j)]; };
  for (long c = 0; c < n; ++c) {
    long piv = c;
    for (long r = c + 1; r < n; ++r)
      if (qabs(at(r, c)) > qabs(at(piv, c))) piv = r;
    if (at(piv, c) == 0)
      throw Error(ErrorCode::RankDeficient, "refinement shift is exactly singular", c);
    if (piv != c) {
      for (long j = c; j < n; ++j) std::swap(at(piv, j), at(c, j));
      std::swap(b[static_cast<std::size_t>(piv)], b[static_cast<std::size_t>(c)]);
    }
    for (long r = c + 1; r < n; ++r) {
      f128 f = at(r, c) / at(c, c);
      at(r, c) = 0;
      for (long j = c + 1; j < n; ++j) at(r, j) -= f * at(c, j);
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(c)];
    }
  }
  for (long i = n - 1; i >= 0; --i) {
    f128 s = b[static_cast<std::size_t>(i)];
    for (long j = i + 1; j < n; ++j) s -= at(i, j) * b[static_cast<std::size_t>(j)];
    b[static_cast<std::size_t>(i)] = s / at(i, i);
  }
  return b;
}

struct RefinedEigenpair {
  QuadVector x;      // unit eigenvector in binary128
  f128 lambda = 0;   // Rayleigh quotient of x
};

// Fixed-shift inverse iteration followed by a quad Rayleigh quotient.
// The shift comes from a double eigensolver, so it sits within O(u*scale)
// of the wanted simple eigenvalue; each solve contracts the error by the
// shift-to-neighbor distance ratio, and three solves land far below the
// double-roundoff scale this oracle is meant to resolve.
//
// Input:  symmetric double matrix, double shift near a simple eigenvalue,
//         starting vector roughly aligned with its eigenvector
// Output: refined eigenpair in binary128
inline RefinedEigenpair refine_eigenpair(const Matrix& a, double shift, const Vector& x0,
                                         int steps = 3) {
  if (a.rows() != a.cols() || x0.size() != a.rows())
    throw Error(ErrorCode::DimensionMismatch, "refinement needs square A and matching start");
  if (steps < 1) throw Error(ErrorCode::DimensionMismatch, "refinement needs steps >= 1", steps);

  RefinedEigenpair out;
  out.x = to_quad(x0);
  qnormalize(out.x);
  for (int s = 0; s < steps; ++s) {
    out.x = shifted_solve(a, static_cast<f128>(shift), std::move(out.x));
    qnormalize(out.x);
  }
  out.lambda = qdot(out.x, qapply(a, out.x));
  return out;
}

// sin of the angle between the refined vector and the first coordinate
// axis: the norm of everything outside that coordinate, which stays fully
// accurate for angles far below double roundoff.
inline double sin_angle_to_e1(const QuadVector& x) {
  f128 s = 0;
  for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * x[i];
  f128 n = qnorm(x);
  if (n == 0) throw Error(ErrorCode::RankDeficient, "zero vector has no direction");
  f128 v = qsqrt(s) / n;
  if (v > 1) v = 1;
  return static_cast<double>(v);
}

}  // namespace quadx
}  // namespace ritz
