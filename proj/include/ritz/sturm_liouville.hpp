#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "ritz/bounds.hpp"
#include "ritz/core.hpp"
#include "ritz/errors.hpp"
#include "ritz/legendre.hpp"
#include "ritz/quadrature.hpp"

namespace ritz {

// Robin eigenvalue problem u'' = lambda u on (0, pi) with u'(0) = alpha u(0)
// and u'(pi) = beta u(pi). For alpha = 1, beta = -1 the spectrum is
// lambda_i = -nu_i^2 where nu_i solves tan(pi nu) = 2 nu / (nu^2 - 1), and
// all work happens in the polynomial trial spaces hosted by PolyFunction.
// Internally the code tracks theta = -lambda (the negated operator is
// positive definite here), which keeps the ground mode first in ascending
// order; every reported gap and bound is invariant under that sign flip.
struct SturmLiouvilleProblem {
  double alpha = 1.0;
  double beta = -1.0;
  QuadratureRule rule;       // polynomial inner products, sized 4x max degree
  QuadratureRule trig_rule;  // trigonometric oracles (norms, angles)
  int max_degree = 0;
};

// Problem sized for trial dimensions up to kmax (polynomial degree kmax + 1).
// `oversample` scales the quadrature beyond the 4x default so the
// insensitivity self-check can rerun everything on a finer rule.
inline SturmLiouvilleProblem make_sturm_problem(int kmax, int oversample = 4) {
  if (kmax < 1)
    throw Error(ErrorCode::IndexOutOfRange, "trial dimension budget must be at least 1", kmax);
  SturmLiouvilleProblem p;
  p.max_degree = kmax + 1;
  p.rule = gauss_legendre_on(std::max(oversample * p.max_degree, 8), 0.0, detail::kPi);
  p.trig_rule = gauss_legendre_on(160, 0.0, detail::kPi);
  return p;
}

// Orthonormal polynomial trial basis under the Robin constraints.
//
// Input:  problem with an adequate quadrature rule, trial dimension k.
// Output: k polynomials of degree <= k + 1, each satisfying both boundary
//         conditions, pairwise L2-orthonormal.
// The two boundary conditions are linear in the k + 2 basis coefficients, so
// the constrained space is the null space of a 2 x (k + 2) matrix; the
// trailing right singular vectors give an orthonormal coefficient basis,
// which is L2-orthonormal by Parseval.
inline std::vector<PolyFunction> constrained_basis(const SturmLiouvilleProblem& problem,
                                                   int k) {
  if (k < 1) throw Error(ErrorCode::IndexOutOfRange, "basis size must be at least 1", k);
  const int dim = k + 2;
  if (problem.rule.size() < 4 * (k + 1))
    throw Error(ErrorCode::QuadratureTooCoarse,
                "quadrature rule too small for the requested trial degree",
                problem.rule.size());

  Matrix b = Matrix::Zero(2, dim);
  for (int j = 0; j < dim; ++j) {
    PolyFunction e{Vector::Zero(j + 1)};
    e.coeffs(j) = 1.0;
    PolyFunction d = poly_derivative(e);
    b(0, j) = poly_eval(d, 0.0) - problem.alpha * poly_eval(e, 0.0);
    b(1, j) = poly_eval(d, detail::kPi) - problem.beta * poly_eval(e, detail::kPi);
  }
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullV);
  std::vector<PolyFunction> basis;
  basis.reserve(k);
  for (int j = 2; j < dim; ++j) basis.push_back(PolyFunction{svd.matrixV().col(j)});

  // The construction is exact up to roundoff; a violation here means the
  // quadrature (or the boundary algebra feeding it) cannot support degree
  // k + 1 and the result would silently poison every bound downstream.
  for (const auto& q : basis) {
    PolyFunction d = poly_derivative(q);
    if (std::abs(poly_eval(d, 0.0) - problem.alpha * poly_eval(q, 0.0)) > 1e-11 ||
        std::abs(poly_eval(d, detail::kPi) - problem.beta * poly_eval(q, detail::kPi)) > 1e-11)
      throw Error(ErrorCode::QuadratureTooCoarse, "constrained basis violates a boundary condition",
                  k);
  }
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      double g = l2_inner(problem.rule, basis[i], basis[j]);
      if (std::abs(g - (i == j ? 1.0 : 0.0)) > 1e-11)
        throw Error(ErrorCode::QuadratureTooCoarse, "constrained basis lost orthonormality", k);
    }
  return basis;
}

// Rayleigh-Ritz data for the operator problem on a polynomial trial basis.
// theta holds the Ritz values of the negated operator in ascending order
// (ground mode first); lambda = -theta are the operator's Ritz values.
// residuals are the components of the raw residual functions orthogonal to
// the trial space; their norms feed the bound formulas.
struct OperatorRitz {
  std::vector<PolyFunction> basis;
  Vector theta;
  Vector lambda;
  std::vector<PolyFunction> ritz_functions;
  std::vector<PolyFunction> raw_residuals;  // u'' + theta u, the lambda-convention residual
  std::vector<PolyFunction> residuals;      // raw residual projected off the trial space
  Vector residual_norms;
  double R_norm = 0.0;
  double R2_norm = 0.0;
};

// Rayleigh-Ritz process in function space.
//
// Input:  problem and an orthonormal constrained basis q_1..q_k.
// Output: Ritz values/functions of u'' on span(q), residual functions, and
//         the quasimatrix residual norms ||R|| and ||R2|| used by the bounds.
// The stiffness entry is -<q_i, q_j''> (negated so the matrix is positive
// definite and ascending order puts the ground mode first). Quasimatrix
// spectral norms come from the Gram matrix of the residual functions:
// ||R||^2 = max eigenvalue of G with G_ij = <r_i, r_j>.
inline OperatorRitz rr_operator(const SturmLiouvilleProblem& problem,
                                std::vector<PolyFunction> basis) {
  const int k = static_cast<int>(basis.size());
  if (k < 1) throw Error(ErrorCode::IndexOutOfRange, "basis must have at least one member", k);

  std::vector<PolyFunction> d2;
  d2.reserve(k);
  for (const auto& q : basis) d2.push_back(poly_derivative(poly_derivative(q)));

  Matrix a1(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) a1(i, j) = -l2_inner(problem.rule, basis[i], d2[j]);
  a1 = 0.5 * (a1 + a1.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> es(a1);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::BreakdownUnrecoverable, "trial-space eigensolve failed");

  OperatorRitz out;
  out.theta = es.eigenvalues();
  out.lambda = -out.theta;
  Matrix w = es.eigenvectors();
  Matrix dummy = Matrix::Zero(k, k);
  fix_column_signs(w, dummy);

  out.ritz_functions.reserve(k);
  for (int m = 0; m < k; ++m) {
    PolyFunction u{Vector::Zero(1)};
    for (int i = 0; i < k; ++i) u = poly_axpy(u, w(i, m), basis[i]);
    out.ritz_functions.push_back(std::move(u));
  }

  out.residual_norms.resize(k);
  for (int m = 0; m < k; ++m) {
    const PolyFunction& u = out.ritz_functions[m];
    PolyFunction rho = poly_axpy(poly_derivative(poly_derivative(u)), out.theta(m), u);
    out.raw_residuals.push_back(rho);
    for (const auto& q : basis) rho = poly_axpy(rho, -l2_inner(problem.rule, q, rho), q);
    out.residual_norms(m) = l2_norm(problem.rule, rho);
    out.residuals.push_back(std::move(rho));
  }

  Matrix gram(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j)
      gram(i, j) = gram(j, i) = l2_inner(problem.rule, out.residuals[i], out.residuals[j]);
  Eigen::SelfAdjointEigenSolver<Matrix> ge(gram);
  out.R_norm = std::sqrt(std::max(ge.eigenvalues().maxCoeff(), 0.0));
  if (k > 1) {
    Eigen::SelfAdjointEigenSolver<Matrix> g2(gram.bottomRightCorner(k - 1, k - 1));
    out.R2_norm = std::sqrt(std::max(g2.eigenvalues().maxCoeff(), 0.0));
  }
  out.basis = std::move(basis);
  return out;
}

// Closed-form reference spectrum: nu_i solves the transcendental equation,
// theta_i = nu_i^2, lambda_i = -nu_i^2, eigenfunction nu cos(nu x) + alpha
// sin(nu x) normalized in L2(0, pi).
struct ExactEigenfunction {
  double nu = 0.0;
  double alpha = 1.0;
  double inv_norm = 1.0;

  double value(double x) const {
    return inv_norm * (nu * std::cos(nu * x) + alpha * std::sin(nu * x));
  }
};

struct ExactSpectrum {
  Vector nu;
  Vector theta;
  Vector lambda;
  std::vector<ExactEigenfunction> eigenfunctions;
};

namespace detail {
// Pole-free form of tan(pi nu) = 2 nu / (nu^2 - 1): its roots on nu > 0 are
// exactly the eigenvalue branches, with no extra sign changes (sin and cos
// never vanish together, and nu = 1 gives g = 2).
inline double sturm_secular(double nu) {
  return std::sin(kPi * nu) * (nu * nu - 1.0) - 2.0 * nu * std::cos(kPi * nu);
}
}  // namespace detail

// First `count` reference eigenpairs by bracketed bisection on each branch.
//
// Input:  problem (for the trigonometric quadrature) and branch count <= 20.
// Output: nu ascending, theta = nu^2, lambda = -nu^2, normalized
//         eigenfunctions as closed-form evaluables.
inline ExactSpectrum exact_eigenvalues(const SturmLiouvilleProblem& problem, int count) {
  if (count < 1 || count > 20)
    throw Error(ErrorCode::IndexOutOfRange, "supported branch count is 1..20", count);

  ExactSpectrum s;
  s.nu.resize(count);
  const double step = 0.01;
  const double cap = count + 2.0;
  double x = 0.05;  // skip the trivial root at nu = 0
  double gx = detail::sturm_secular(x);
  int found = 0;
  while (found < count) {
    double xn = x + step;
    if (xn > cap)
      throw Error(ErrorCode::RootBracketFailure, "eigenvalue branch not bracketed", found);
    double gn = detail::sturm_secular(xn);
    if ((gx < 0.0) != (gn < 0.0)) {
      double lo = x, hi = xn, glo = gx;
      for (int iter = 0; iter < 200 && hi - lo > 4e-16 * hi; ++iter) {
        double mid = 0.5 * (lo + hi);
        double gm = detail::sturm_secular(mid);
        if ((glo < 0.0) == (gm < 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      s.nu(found++) = 0.5 * (lo + hi);
    }
    x = xn;
    gx = gn;
  }

  s.theta = s.nu.array().square().matrix();
  s.lambda = -s.theta;
  s.eigenfunctions.reserve(count);
  for (int i = 0; i < count; ++i) {
    ExactEigenfunction f{s.nu(i), problem.alpha, 1.0};
    double nrm2 = problem.trig_rule.integrate([&](double t) {
      double v = f.value(t);
      return v * v;
    });
    f.inv_norm = 1.0 / std::sqrt(nrm2);
    s.eigenfunctions.push_back(f);
  }
  return s;
}

// sin of the angle between a trial polynomial and a closed-form
// eigenfunction, through the norm of the orthogonal component (stable for
// tiny angles where 1 - cos^2 would cancel).
inline double function_angle(const SturmLiouvilleProblem& problem, const PolyFunction& p,
                             const ExactEigenfunction& f) {
  const QuadratureRule& rule = problem.trig_rule;
  const int m = rule.size();
  Vector a(m), b(m);
  for (int i = 0; i < m; ++i) {
    double sw = std::sqrt(rule.weights(i));
    a(i) = sw * poly_eval(p, rule.nodes(i));
    b(i) = sw * f.value(rule.nodes(i));
  }
  a /= a.norm();
  b /= b.norm();
  return std::min((b - a.dot(b) * a).norm(), 1.0);
}

// Gap data and bound reports for the ground Ritz pair of the operator
// problem. The reference eigenvalue is exact (from the transcendental
// roots); the complement block's spectrum is not computable, so Gap uses
// the first exact branch beyond the trial block minus a margin of the
// target residual norm, and every Gap-dependent report is flagged as an
// estimate. The classical dk report needs only the known exact spectrum
// and stays fully certified.
struct OperatorBoundData {
  double lambda_exact = 0.0;  // operator convention (negative)
  double gap = kInf;          // exact target to other Ritz values
  double gap_c = kInf;        // target Ritz value to other exact branches
  double Gap = 0.0;           // tail surrogate minus residual margin
  Vector pair_dists;
  std::vector<BoundReport> reports;
};

inline OperatorBoundData operator_bounds(const OperatorRitz& record,
                                         const ExactSpectrum& spectrum) {
  const int k = static_cast<int>(record.theta.size());
  if (spectrum.theta.size() < k + 1)
    throw Error(ErrorCode::DimensionMismatch,
                "need the exact spectrum one branch beyond the trial block",
                static_cast<int>(spectrum.theta.size()));

  OperatorBoundData out;
  const double lam = spectrum.theta(0);
  out.lambda_exact = -lam;
  out.pair_dists.resize(k - 1);
  for (int i = 1; i < k; ++i) {
    out.pair_dists(i - 1) = std::abs(lam - record.theta(i));
    out.gap = std::min(out.gap, out.pair_dists(i - 1));
  }
  for (int j = 1; j < spectrum.theta.size(); ++j)
    out.gap_c = std::min(out.gap_c, std::abs(record.theta(0) - spectrum.theta(j)));
  out.Gap = (spectrum.theta(k) - lam) - record.residual_norms(0);

  const double r1 = record.residual_norms(0);
  out.reports.push_back(dk_classical(r1, out.gap_c));
  out.reports.push_back(bound_2x2(record.R_norm, record.R2_norm, out.gap, out.Gap));
  out.reports.push_back(bound_sin22(r1, record.R2_norm, out.gap, out.Gap));
  out.reports.push_back(
      bound_sin2indiv(r1, record.residual_norms.tail(k - 1), out.pair_dists, out.Gap));
  for (size_t i = 1; i < out.reports.size(); ++i) out.reports[i].is_estimate = true;

  // Composite practical bound: the best applicable report, floored by the
  // roundoff term and capped at the trivial bound 1.
  int best = -1;
  for (size_t i = 0; i < out.reports.size(); ++i)
    if (out.reports[i].applicable && (best < 0 || out.reports[i].value < out.reports[best].value))
      best = static_cast<int>(i);
  BoundReport core = best >= 0 ? out.reports[best] : BoundReport{};
  double floor_gap = std::isinf(out.gap) ? out.gap_c : out.gap;
  BoundReport composite = composite_bound(core, floor_gap);
  composite.is_estimate = best >= 0 && out.reports[best].is_estimate;
  out.reports.push_back(std::move(composite));
  return out;
}

// Fraction of the raw residual's L2 mass carried by basis polynomials of
// degree below `window_degree` (Parseval in the orthonormal basis).
inline double residual_mass_fraction(const OperatorRitz& record, int target,
                                     int window_degree) {
  if (target < 0 || target >= static_cast<int>(record.raw_residuals.size()))
    throw Error(ErrorCode::IndexOutOfRange, "target outside the Ritz block", target);
  const Vector& c = record.raw_residuals[target].coeffs;
  const int w = std::min<int>(std::max(window_degree, 0), c.size());
  double low = c.head(w).squaredNorm();
  double total = c.squaredNorm();
  if (total == 0.0) return 0.0;
  return low / total;
}

}  // namespace ritz
