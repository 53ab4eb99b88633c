#pragma once

#include <cmath>

#include "ritz/core.hpp"
#include "ritz/errors.hpp"
#include "ritz/quadrature.hpp"

namespace ritz {

namespace detail {
inline constexpr double kPi = 3.14159265358979323846;
}

// Polynomial on [0, pi] stored by its coefficients in the orthonormal
// shifted Legendre basis
//   phi_j(x) = sqrt((2j + 1) / pi) * P_j(2x/pi - 1),
// which satisfies <phi_i, phi_j> = delta_ij in L2(0, pi). Coefficient dot
// products therefore equal L2 inner products, and quadrature only has to
// confirm what the algebra already fixed.
struct PolyFunction {
  Vector coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

inline PolyFunction poly_from_coeffs(Vector c) { return PolyFunction{std::move(c)}; }

// Scale factors between the orthonormal basis and the plain Legendre series
// in t = 2x/pi - 1: phi_j = scale_j * P_j with scale_j = sqrt((2j+1)/pi).
inline double legendre_scale(int j) { return std::sqrt((2.0 * j + 1.0) / detail::kPi); }

// Evaluate sum_j a_j P_j(t) by the Clenshaw backward recurrence.
//
// Input:  plain Legendre series coefficients a, evaluation point t.
// Output: series value; backward-stable on [-1, 1].
inline double legendre_series_value(const Vector& a, double t) {
  const int n = static_cast<int>(a.size()) - 1;
  if (n < 0) return 0.0;
  if (n == 0) return a(0);
  double b1 = 0.0, b2 = 0.0;
  for (int j = n; j >= 1; --j) {
    // P_{j+1} = ((2j+1) t P_j - j P_{j-1}) / (j+1)
    double b0 = a(j) + (2.0 * j + 1.0) / (j + 1.0) * t * b1 - (j + 1.0) / (j + 2.0) * b2;
    b2 = b1;
    b1 = b0;
  }
  return a(0) - 0.5 * b2 + t * b1;
}

inline double poly_eval(const PolyFunction& p, double x) {
  const int n = static_cast<int>(p.coeffs.size());
  Vector plain(n);
  for (int j = 0; j < n; ++j) plain(j) = p.coeffs(j) * legendre_scale(j);
  return legendre_series_value(plain, 2.0 * x / detail::kPi - 1.0);
}

// Exact differentiation: degree drops by one per application.
//
// Input:  polynomial in the orthonormal basis.
// Output: its derivative in the same basis, computed through the plain
//         Legendre identity P'_{j+1} - P'_{j-1} = (2j + 1) P_j and the
//         chain-rule factor dt/dx = 2/pi.
inline PolyFunction poly_derivative(const PolyFunction& p) {
  const int n = static_cast<int>(p.coeffs.size()) - 1;
  if (n < 1) return PolyFunction{Vector::Zero(1)};
  Vector c(n + 1);
  for (int j = 0; j <= n; ++j) c(j) = p.coeffs(j) * legendre_scale(j);
  Vector der = Vector::Zero(n);
  for (int j = n; j > 2; --j) {
    der(j - 1) = (2.0 * j - 1.0) * c(j);
    c(j - 2) += c(j);
  }
  if (n > 1) der(1) = 3.0 * c(2);
  der(0) = c(1);
  const double dt_dx = 2.0 / detail::kPi;
  Vector out(n);
  for (int j = 0; j < n; ++j) out(j) = der(j) * dt_dx / legendre_scale(j);
  return PolyFunction{std::move(out)};
}

// a + s * b with coefficient vectors padded to the longer length.
inline PolyFunction poly_axpy(const PolyFunction& a, double s, const PolyFunction& b) {
  const int n = std::max(a.coeffs.size(), b.coeffs.size());
  Vector out = Vector::Zero(n);
  out.head(a.coeffs.size()) = a.coeffs;
  out.head(b.coeffs.size()) += s * b.coeffs;
  return PolyFunction{std::move(out)};
}

inline PolyFunction poly_scale(const PolyFunction& a, double s) {
  return PolyFunction{s * a.coeffs};
}

// L2(0, pi) inner product by quadrature. The rule must integrate the
// product exactly, i.e. size >= (deg p + deg q) / 2 + 1; callers size their
// rules with a 4x margin and cross-check against the coefficient form.
inline double l2_inner(const QuadratureRule& rule, const PolyFunction& p,
                       const PolyFunction& q) {
  double acc = 0.0;
  for (int i = 0; i < rule.size(); ++i)
    acc += rule.weights(i) * poly_eval(p, rule.nodes(i)) * poly_eval(q, rule.nodes(i));
  return acc;
}

inline double l2_norm(const QuadratureRule& rule, const PolyFunction& p) {
  return std::sqrt(std::max(l2_inner(rule, p, p), 0.0));
}

// Parseval shortcut in the orthonormal basis; used as the quadrature
// self-check, not as the primary inner product.
inline double coefficient_inner(const PolyFunction& p, const PolyFunction& q) {
  const int n = std::min(p.coeffs.size(), q.coeffs.size());
  return p.coeffs.head(n).dot(q.coeffs.head(n));
}

}  // namespace ritz
