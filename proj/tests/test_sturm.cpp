#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ritz/rng.hpp"
#include "ritz/sturm_liouville.hpp"

using namespace ritz;

namespace {

constexpr double kPi = 3.14159265358979323846;

// First twenty transcendental roots, frozen from a high-precision solve.
constexpr double kNu[20] = {
    0.63832226233429460275, 1.3957738437964170023,  2.2647132420164188164,
    3.193207935412059234,   4.1505146768221125425,  5.122730134386960129,
    6.1033873729423249371,  7.0892125937316496519,  8.0784062655588070427,
    9.0699079663482896637,  10.063056048139868271,  11.05741780262644513,
    12.052698982943961856,  13.048692834401765864,  14.045249982131796297,
    15.042259900250881122,  16.039639099535155288,  17.037323363593389613,
    18.035262507154379037,  19.033416752298586396};

constexpr double kTheta1 = 0.40745531059157201811;  // nu_1^2

OperatorRitz run_rr(int k, int oversample = 4) {
  auto problem = make_sturm_problem(12, oversample);
  return rr_operator(problem, constrained_basis(problem, k));
}

}  // namespace

TEST_CASE("gauss-legendre nodes and weights match the classical five-point rule") {
  auto rule = gauss_legendre(5);
  CHECK(rule.nodes(4) == Catch::Approx(0.9061798459386639928).margin(1e-15));
  CHECK(rule.nodes(3) == Catch::Approx(0.53846931010568311).margin(1e-14));
  CHECK(rule.nodes(2) == 0.0);
  CHECK(rule.weights(4) == Catch::Approx(0.23692688505618942).margin(1e-14));
  CHECK(rule.weights(3) == Catch::Approx(0.47862867049936619).margin(1e-14));
  CHECK(rule.weights(2) == Catch::Approx(0.56888888888888889).margin(1e-14));
  for (int i = 0; i < 5; ++i) {
    CHECK(rule.nodes(i) == -rule.nodes(4 - i));
    CHECK(rule.weights(i) == rule.weights(4 - i));
  }
  CHECK(rule.weights.sum() == Catch::Approx(2.0).margin(1e-14));

  // Exact for degree 2m - 1 = 9: integral of t^8 over [-1, 1] is 2/9.
  double t8 = rule.integrate([](double t) { return std::pow(t, 8); });
  CHECK(t8 == Catch::Approx(2.0 / 9.0).margin(1e-14));

  auto mapped = gauss_legendre_on(20, 0.0, kPi);
  CHECK(mapped.integrate([](double x) { return std::sin(x); }) ==
        Catch::Approx(2.0).margin(1e-13));
  CHECK(mapped.weights.sum() == Catch::Approx(kPi).margin(1e-13));
}

TEST_CASE("normalized shifted legendre basis is orthonormal and evaluable") {
  auto rule = gauss_legendre_on(40, 0.0, kPi);
  for (int i = 0; i < 8; ++i) {
    PolyFunction pi_{Vector::Zero(i + 1)};
    pi_.coeffs(i) = 1.0;
    for (int j = i; j < 8; ++j) {
      PolyFunction pj{Vector::Zero(j + 1)};
      pj.coeffs(j) = 1.0;
      double g = l2_inner(rule, pi_, pj);
      CHECK(g == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-13));
    }
  }

  // Quadrature inner products agree with the Parseval form on random series.
  RandomStream rs = RandomStream::derived(77, 0);
  for (int trial = 0; trial < 5; ++trial) {
    PolyFunction p{rs.gaussian(9, 1).col(0)};
    PolyFunction q{rs.gaussian(7, 1).col(0)};
    CHECK(l2_inner(rule, p, q) ==
          Catch::Approx(coefficient_inner(p, q)).margin(1e-12));
  }

  // Evaluation is deterministic and reproducible.
  PolyFunction p{rs.gaussian(10, 1).col(0)};
  double v1 = poly_eval(p, 0.3), v2 = poly_eval(p, 0.3);
  CHECK(v1 == v2);
}

TEST_CASE("polynomial differentiation is exact") {
  // The function x on [0, pi] expressed in the normalized basis:
  // x = (pi/2)(1 + t) = (pi/2) P_0 + (pi/2) P_1 in plain coefficients.
  PolyFunction x{Vector::Zero(2)};
  x.coeffs(0) = (kPi / 2.0) / legendre_scale(0);
  x.coeffs(1) = (kPi / 2.0) / legendre_scale(1);
  CHECK(poly_eval(x, 0.7) == Catch::Approx(0.7).margin(1e-14));
  CHECK(poly_eval(x, kPi) == Catch::Approx(kPi).margin(1e-13));

  PolyFunction dx = poly_derivative(x);
  CHECK(dx.degree() == 0);
  CHECK(poly_eval(dx, 0.1) == Catch::Approx(1.0).margin(1e-14));
  CHECK(poly_eval(dx, 3.0) == Catch::Approx(1.0).margin(1e-14));

  // Degree drops by one per application and x^2 differentiates to 2x.
  PolyFunction x2{Vector::Zero(3)};
  {
    // x^2 = (pi/2)^2 (1 + t)^2; (1+t)^2 = (2/3) P_2 + 2 P_1 + (4/3) P_0.
    double s = (kPi / 2.0) * (kPi / 2.0);
    x2.coeffs(0) = s * (4.0 / 3.0) / legendre_scale(0);
    x2.coeffs(1) = s * 2.0 / legendre_scale(1);
    x2.coeffs(2) = s * (2.0 / 3.0) / legendre_scale(2);
  }
  CHECK(poly_eval(x2, 1.3) == Catch::Approx(1.69).margin(1e-13));
  PolyFunction dx2 = poly_derivative(x2);
  CHECK(dx2.degree() == 1);
  CHECK(poly_eval(dx2, 1.3) == Catch::Approx(2.6).margin(1e-13));
}

TEST_CASE("transcendental roots match the frozen reference") {
  auto problem = make_sturm_problem(12);
  auto spectrum = exact_eigenvalues(problem, 20);
  REQUIRE(spectrum.nu.size() == 20);
  for (int i = 0; i < 20; ++i) {
    CHECK(spectrum.nu(i) == Catch::Approx(kNu[i]).margin(1e-12));
    CHECK(spectrum.theta(i) == Catch::Approx(kNu[i] * kNu[i]).margin(1e-11));
    CHECK(spectrum.lambda(i) == -spectrum.theta(i));
    // Defining equation in its pole-free form.
    double g = std::sin(kPi * spectrum.nu(i)) * (spectrum.nu(i) * spectrum.nu(i) - 1.0) -
               2.0 * spectrum.nu(i) * std::cos(kPi * spectrum.nu(i));
    CHECK(std::abs(g) < 1e-10);
    // And in the tan form away from its poles.
    double nu = spectrum.nu(i);
    if (std::abs(std::cos(kPi * nu)) > 0.1 && std::abs(nu - 1.0) > 0.1)
      CHECK(std::abs(std::tan(kPi * nu) - 2.0 * nu / (nu * nu - 1.0)) < 1e-10);
  }
  CHECK(spectrum.theta(0) == Catch::Approx(kTheta1).margin(1e-13));

  try {
    exact_eigenvalues(problem, 21);
    FAIL("expected a range error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndexOutOfRange);
  }
}

TEST_CASE("exact eigenfunctions satisfy the boundary conditions and orthogonality") {
  auto problem = make_sturm_problem(12);
  auto spectrum = exact_eigenvalues(problem, 8);
  for (int i = 0; i < 8; ++i) {
    const auto& f = spectrum.eigenfunctions[i];
    // The analytic derivative: inv_norm (-nu^2 sin(nu x) + nu cos(nu x)).
    double nu = f.nu;
    auto dval = [&](double x) {
      return f.inv_norm * (-nu * nu * std::sin(nu * x) + nu * std::cos(nu * x));
    };
    CHECK(std::abs(dval(0.0) - f.value(0.0)) < 1e-10);
    CHECK(std::abs(dval(kPi) + f.value(kPi)) < 1e-10);
    // Unit norm under the trigonometric rule.
    double nrm2 = problem.trig_rule.integrate([&](double x) {
      double v = f.value(x);
      return v * v;
    });
    CHECK(nrm2 == Catch::Approx(1.0).margin(1e-12));
  }
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) {
      double ip = problem.trig_rule.integrate([&](double x) {
        return spectrum.eigenfunctions[i].value(x) * spectrum.eigenfunctions[j].value(x);
      });
      CHECK(std::abs(ip) < 1e-8);
    }
}

TEST_CASE("constrained basis satisfies the boundary conditions and is orthonormal") {
  auto problem = make_sturm_problem(12);

  auto single = constrained_basis(problem, 1);
  REQUIRE(single.size() == 1);
  CHECK(single[0].degree() <= 2);
  CHECK(l2_norm(problem.rule, single[0]) == Catch::Approx(1.0).margin(1e-12));

  auto basis7 = constrained_basis(problem, 7);
  REQUIRE(basis7.size() == 7);
  for (const auto& q : basis7) {
    CHECK(q.degree() <= 8);
    PolyFunction d = poly_derivative(q);
    CHECK(std::abs(poly_eval(d, 0.0) - poly_eval(q, 0.0)) <= 1e-11);
    CHECK(std::abs(poly_eval(d, kPi) + poly_eval(q, kPi)) <= 1e-11);
  }
  for (size_t i = 0; i < basis7.size(); ++i)
    for (size_t j = i; j < basis7.size(); ++j)
      CHECK(l2_inner(problem.rule, basis7[i], basis7[j]) ==
            Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-11));

  // Integration by parts with both boundary conditions folded in:
  // -<q, q''> = ||q'||^2 + q(0)^2 + q(pi)^2.
  for (const auto& q : basis7) {
    PolyFunction d = poly_derivative(q);
    PolyFunction d2 = poly_derivative(d);
    double lhs = -l2_inner(problem.rule, q, d2);
    double rhs = l2_inner(problem.rule, d, d) + std::pow(poly_eval(q, 0.0), 2) +
                 std::pow(poly_eval(q, kPi), 2);
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-11));
  }

  try {
    constrained_basis(problem, 0);
    FAIL("expected a range error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndexOutOfRange);
  }
  try {
    auto small = make_sturm_problem(2);
    constrained_basis(small, 8);
    FAIL("expected a quadrature error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::QuadratureTooCoarse);
  }
}

TEST_CASE("rayleigh-ritz on the constrained space matches the frozen sweep") {
  auto r1 = run_rr(1);
  CHECK(r1.theta(0) == Catch::Approx(0.408197747685278500).margin(1e-12));
  CHECK(r1.lambda(0) == -r1.theta(0));
  CHECK(r1.residual_norms(0) == Catch::Approx(6.27355354756734401e-02).epsilon(1e-9));
  CHECK(r1.R_norm == Catch::Approx(r1.residual_norms(0)).epsilon(1e-12));
  CHECK(r1.R2_norm == 0.0);

  auto r6 = run_rr(6);
  CHECK(r6.theta(0) == Catch::Approx(0.407455310594869113).margin(1e-11));
  CHECK(r6.residual_norms(0) == Catch::Approx(1.36026085726349496e-05).epsilon(1e-6));
  CHECK(r6.R_norm == Catch::Approx(15.7361349755643918).epsilon(1e-9));
  CHECK(r6.theta(1) - r6.theta(0) == Catch::Approx(1.54072932759622105).margin(1e-9));

  // Raw residuals are orthogonal to every basis member.
  auto problem = make_sturm_problem(12);
  for (int m = 0; m < 6; ++m)
    for (const auto& q : r6.basis)
      CHECK(std::abs(l2_inner(problem.rule, q, r6.raw_residuals[m])) <
            1e-10 * std::max(1.0, l2_norm(problem.rule, r6.raw_residuals[m])));

  // Per-pair norms never exceed the quasimatrix norm.
  CHECK(r6.residual_norms.maxCoeff() <= r6.R_norm * (1.0 + 1e-12));
  CHECK(r6.R2_norm <= r6.R_norm * (1.0 + 1e-12));
}

TEST_CASE("ground ritz value decreases monotonically to the exact eigenvalue") {
  double prev = kInf;
  double final_theta = 0.0;
  for (int k = 1; k <= 12; ++k) {
    auto r = run_rr(k);
    CHECK(r.theta(0) <= prev + 1e-10);
    prev = r.theta(0);
    final_theta = r.theta(0);
  }
  CHECK(std::abs(final_theta - kTheta1) <= 1e-8);
  CHECK(std::abs(final_theta - kTheta1) <= 1e-10);  // actual convergence is far deeper
}

TEST_CASE("operator bounds are sound against the quadrature angle oracle") {
  auto problem = make_sturm_problem(12);
  auto spectrum = exact_eigenvalues(problem, 14);

  double prev_dk = kInf;
  for (int k = 2; k <= 12; ++k) {
    auto record = rr_operator(problem, constrained_basis(problem, k));
    auto data = operator_bounds(record, spectrum);
    double angle = function_angle(problem, record.ritz_functions[0], spectrum.eigenfunctions[0]);

    REQUIRE(data.reports.size() == 5);
    const auto& dk = data.reports[0];
    const auto& boundvec = data.reports[1];
    const auto& sin22 = data.reports[2];
    const auto& sindiv = data.reports[3];
    const auto& composite = data.reports[4];

    CHECK(dk.name == "dk_classical");
    CHECK_FALSE(dk.is_estimate);
    CHECK(boundvec.is_estimate);
    CHECK(sin22.is_estimate);
    CHECK(sindiv.is_estimate);

    for (const auto& b : data.reports)
      if (b.applicable) CHECK(b.value >= angle - 1e-12);
    CHECK(composite.applicable);
    CHECK(composite.value <= 1.0);
    CHECK(composite.value >= angle - 1e-12);

    if (sindiv.applicable) CHECK(sindiv.value <= dk.value);
    if (k <= 4) CHECK(sin22.applicable);
    if (k >= 5) CHECK_FALSE(sin22.applicable);
    if (k <= 8) CHECK(sindiv.applicable);
    if (k >= 10) CHECK_FALSE(sindiv.applicable);

    // The Gap surrogate sits between the tail branch distances.
    CHECK(data.Gap <= spectrum.theta(k) - spectrum.theta(0));
    CHECK(data.Gap > 0.0);
    CHECK(dk.value == Catch::Approx(record.residual_norms(0) / data.gap_c).epsilon(1e-14));
    prev_dk = dk.value;
  }
  (void)prev_dk;
}

TEST_CASE("true angles match the frozen oracle values") {
  auto problem = make_sturm_problem(12);
  auto spectrum = exact_eigenvalues(problem, 2);

  auto r1 = run_rr(1);
  CHECK(function_angle(problem, r1.ritz_functions[0], spectrum.eigenfunctions[0]) ==
        Catch::Approx(1.23680309326993799e-02).epsilon(1e-7));
  auto r3 = run_rr(3);
  CHECK(function_angle(problem, r3.ritz_functions[0], spectrum.eigenfunctions[0]) ==
        Catch::Approx(7.83090045805374588e-05).epsilon(1e-6));
  auto r6 = run_rr(6);
  CHECK(function_angle(problem, r6.ritz_functions[0], spectrum.eigenfunctions[0]) ==
        Catch::Approx(3.00137105391102819e-07).epsilon(1e-4));
}

TEST_CASE("residual mass in the fixed low-degree window decreases with k") {
  double frozen[3] = {8.15077899194876498e-02, 1.34761894795777798e-02,
                      1.08385379532326413e-03};
  // The raw residual shrinks by orders of magnitude as k grows, so its
  // coefficients emerge from cancellation and the k = 9 fraction carries a
  // platform-dependent wobble around 1e-3 relative; the decrease itself is
  // separated by factors of ten and stays robust.
  double tol[3] = {1e-6, 1e-6, 2e-2};
  double prev = kInf;
  int idx = 0;
  for (int k : {3, 6, 9}) {
    auto r = run_rr(k);
    double frac = residual_mass_fraction(r, 0, 3);
    CHECK(frac == Catch::Approx(frozen[idx]).epsilon(tol[idx]));
    ++idx;
    CHECK(frac < prev);
    prev = frac;
  }

  // The literal per-k window grows with the residual degree and is not
  // monotone; record the contrast so the fixed window stays deliberate.
  auto r3 = run_rr(3);
  auto r9 = run_rr(9);
  CHECK(residual_mass_fraction(r9, 0, 9) > residual_mass_fraction(r3, 0, 3));

  try {
    residual_mass_fraction(r3, 5, 3);
    FAIL("expected a range error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndexOutOfRange);
  }
}

TEST_CASE("raising the quadrature size changes nothing") {
  for (int k : {3, 8}) {
    auto coarse = run_rr(k, 4);
    auto fine = run_rr(k, 8);
    CHECK(std::abs(coarse.theta(0) - fine.theta(0)) < 1e-11);
    CHECK(std::abs(coarse.residual_norms(0) - fine.residual_norms(0)) < 1e-11);
    CHECK(std::abs(coarse.R_norm - fine.R_norm) < 1e-9 * std::max(1.0, fine.R_norm));
    CHECK(std::abs(coarse.R2_norm - fine.R2_norm) < 1e-9 * std::max(1.0, fine.R2_norm));
  }
}

TEST_CASE("operator bound validation") {
  auto problem = make_sturm_problem(6);
  auto record = rr_operator(problem, constrained_basis(problem, 5));
  auto spectrum = exact_eigenvalues(problem, 5);  // too short: needs k + 1 branches
  try {
    operator_bounds(record, spectrum);
    FAIL("expected a dimension error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}
