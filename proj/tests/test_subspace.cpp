#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ritz/rng.hpp"
#include "ritz/subspace_bounds.hpp"

using namespace ritz;

namespace {

constexpr double kDk = 0.099019513592784830028;

SymmetricProblem random_symmetric(int n, std::uint64_t seed, std::uint64_t stream) {
  RandomStream rs = RandomStream::derived(seed, stream);
  Matrix g = rs.gaussian(n, n);
  Matrix a = 0.5 * (g + g.transpose());
  return SymmetricProblem::dense(a, spectral_norm(a));
}

OrthonormalBasis tilted_basis(const EigenDecomposition& full, int k, double eps,
                              std::uint64_t seed) {
  RandomStream rs = RandomStream::derived(seed, 90);
  Matrix y = full.vectors.leftCols(k) + eps * rs.gaussian(full.vectors.rows(), k);
  return orthonormalize(y);
}

double offtarget_spectral_norm(const RitzDecomposition& d, int i) {
  if (d.k <= 1) return 0.0;
  Matrix r2(d.n, d.k - 1);
  int at = 0;
  for (int j = 0; j < d.k; ++j)
    if (j != i) r2.col(at++) = d.residual_columns.col(j);
  return spectral_norm(r2);
}

}  // namespace

TEST_CASE("full-width target reduces to the block sin-theta form") {
  auto p = random_symmetric(20, 201, 0);
  auto full = symmetric_eig(p);
  auto d = rr_decompose(p, tilted_basis(full, 4, 1e-4, 201), true);
  auto inp = make_subspace_inputs(d, 4, full.values);

  CHECK(std::isinf(inp.gap));
  CHECK(inp.pair_dists.size() == 0);
  CHECK(inp.R2_norm == 0.0);

  auto b = subspace_boundvec(inp);
  CHECK(b.applicable);
  CHECK(b.value == Catch::Approx(inp.R_norm_spectral / inp.Gap).epsilon(1e-15));
  CHECK(b.sqrt_factor == 1.0);

  auto bu = subspace_boundvec_ui(inp);
  CHECK(bu.value == Catch::Approx(b.value).epsilon(1e-15));
}

TEST_CASE("width-one targets reduce to the single-vector bounds") {
  auto p = random_symmetric(22, 202, 0);
  auto full = symmetric_eig(p);
  auto d = rr_decompose(p, tilted_basis(full, 5, 1e-3, 202), true);

  auto g = exact_gaps(d, 0, full.values);
  auto inp = make_subspace_inputs(d, 1, full.values);

  CHECK(inp.gap == Catch::Approx(g.gap).margin(1e-16));
  CHECK(inp.Gap == Catch::Approx(g.Gap).margin(1e-16));

  double r1 = d.residual_norms(0);
  double r2n = offtarget_spectral_norm(d, 0);
  Vector other = d.residual_norms.tail(d.k - 1);

  auto sv_vec = bound_2x2(d.residual_total_norm, r2n, g.gap, g.Gap);
  auto sub_vec = subspace_boundvec(inp);
  CHECK(sub_vec.value == Catch::Approx(sv_vec.value).epsilon(1e-13));

  auto sv_22 = bound_sin22(r1, r2n, g.gap, g.Gap);
  auto sub_22 = subspace_sin22(inp);
  REQUIRE(sv_22.applicable == sub_22.applicable);
  if (sv_22.applicable) CHECK(sub_22.value == Catch::Approx(sv_22.value).epsilon(1e-13));

  auto sv_ind = bound_sin2indiv(r1, other, g.pair_dists, g.Gap);
  auto sub_ind = subspace_sin2indiv(inp);
  REQUIRE(sv_ind.applicable == sub_ind.applicable);
  if (sv_ind.applicable) CHECK(sub_ind.value == Catch::Approx(sv_ind.value).epsilon(1e-13));
}

TEST_CASE("subspace bounds dominate the oracle angles in both norms") {
  int checked = 0;
  for (std::uint64_t trial = 0; trial < 8; ++trial) {
    int n = 30;
    int k = 6, k1 = 2;
    double eps = trial % 2 == 0 ? 1e-5 : 1e-2;
    auto p = random_symmetric(n, 210 + trial, 0);
    auto full = symmetric_eig(p);
    auto d = rr_decompose(p, tilted_basis(full, k, eps, 210 + trial), true);

    auto x1 = OrthonormalBasis::adopt(full.vectors.leftCols(k1));
    auto x1_hat = OrthonormalBasis::adopt(d.ritz_vectors.leftCols(k1));
    auto angles = principal_angles(x1, x1_hat);

    auto inp_s = make_subspace_inputs(d, k1, full.values, NormKind::Spectral);
    auto inp_f = make_subspace_inputs(d, k1, full.values, NormKind::Frobenius);

    for (auto* inp : {&inp_s, &inp_f}) {
      double truth = inp->norm == NormKind::Spectral ? angles.spectral_sin
                                                     : angles.frobenius_sin;
      auto bv = subspace_boundvec(*inp);
      CHECK(bv.value >= truth - 1e-12);
      auto s22 = subspace_sin22(*inp);
      if (s22.applicable) CHECK(s22.value >= truth - 1e-12);
      auto sind = subspace_sin2indiv(*inp);
      if (sind.applicable) CHECK(sind.value >= truth - 1e-12);
      // Frobenius flavor also dominates the spectral oracle.
      CHECK(bv.value >= angles.spectral_sin - 1e-12);
      ++checked;
    }
    auto bu = subspace_boundvec_ui(inp_s);
    CHECK(bu.value >= angles.spectral_sin - 1e-12);
  }
  CHECK(checked == 16);
}

TEST_CASE("near-multiple pair is certified as a block where vectors fail") {
  // Eigenvalues 0 and 1e-12 are numerically inseparable one by one, but the
  // two-dimensional subspace they span is well conditioned.
  int n = 8;
  Vector vals(n);
  vals << 0.0, 1e-12, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0;
  auto p = SymmetricProblem::dense(Matrix(vals.asDiagonal()));
  auto full = symmetric_eig(p);
  auto d = rr_decompose(p, tilted_basis(full, 3, 1e-8, 230), true);

  auto inp = make_subspace_inputs(d, 2, full.values);
  auto block = subspace_sin22(inp);
  REQUIRE(block.applicable);
  CHECK(block.value < 1e-6);

  auto x1 = OrthonormalBasis::adopt(full.vectors.leftCols(2));
  auto x1_hat = OrthonormalBasis::adopt(d.ritz_vectors.leftCols(2));
  CHECK(block.value >= principal_angles(x1, x1_hat).spectral_sin - 1e-12);

  // The single-vector route pays the 1e-12 eigenvalue separation.
  auto g = exact_gaps(d, 0, full.values);
  CHECK(g.gap < 1e-10);
  auto single = bound_sin22(d.residual_norms(0), offtarget_spectral_norm(d, 0), g.gap, g.Gap);
  if (single.applicable) CHECK(single.value > 100.0 * block.value);
}

TEST_CASE("bound inputs depend only on rotation-invariant norms") {
  auto p = random_symmetric(18, 240, 0);
  auto full = symmetric_eig(p);
  auto d = rr_decompose(p, tilted_basis(full, 4, 1e-3, 240), true);
  int k1 = 2;
  auto inp = make_subspace_inputs(d, k1, full.values);

  // Rotate the target residual block by an arbitrary orthogonal matrix and
  // recompute the norms; every bound value must be unchanged.
  RandomStream rs = RandomStream::derived(240, 7);
  Matrix rot = rs.random_orthonormal(k1, k1);
  Matrix r1_rot = d.residual_columns.leftCols(k1) * rot;

  auto inp_rot = inp;
  inp_rot.R1_norm_spectral = spectral_norm(r1_rot);
  inp_rot.R1_norm_frobenius = frobenius_norm(r1_rot);

  CHECK(subspace_sin22(inp_rot).value ==
        Catch::Approx(subspace_sin22(inp).value).epsilon(1e-13));
  CHECK(subspace_sin2indiv(inp_rot).value ==
        Catch::Approx(subspace_sin2indiv(inp).value).epsilon(1e-13));

  Matrix rot_full = RandomStream::derived(240, 8).random_orthonormal(d.k, d.k);
  Matrix r_rot = d.residual_columns * rot_full;
  auto inp_full = inp;
  inp_full.R_norm_spectral = spectral_norm(r_rot);
  inp_full.R_norm_frobenius = frobenius_norm(r_rot);
  CHECK(subspace_boundvec(inp_full).value ==
        Catch::Approx(subspace_boundvec(inp).value).epsilon(1e-13));
}

TEST_CASE("davis-kahan recovery equals the classical bound") {
  SECTION("2x2 example") {
    Matrix a(2, 2);
    a << 0.0, 0.1, 0.1, 1.0;
    auto p = SymmetricProblem::dense(a);
    auto oracle = symmetric_eig(p);
    Vector e1 = Vector::Zero(2);
    e1(0) = 1.0;
    auto b = dk_recovery(p, 0.0, e1, oracle);
    CHECK(b.value == Catch::Approx(kDk).epsilon(1e-13));
    CHECK(b.name == "dk_recovery");
  }

  SECTION("exact eigenpair recovers zero") {
    auto p = random_symmetric(12, 241, 0);
    auto oracle = symmetric_eig(p);
    auto b = dk_recovery(p, oracle.values(3), Vector(oracle.vectors.col(3)), oracle);
    CHECK(b.value < 1e-13);
  }

  SECTION("random instance matches the classical path") {
    auto p = random_symmetric(20, 242, 0);
    auto oracle = symmetric_eig(p);
    auto d = rr_decompose(p, tilted_basis(oracle, 3, 1e-4, 242), true);
    for (int i = 0; i < d.k; ++i) {
      auto g = exact_gaps(d, i, oracle.values);
      auto direct = dk_classical(d.residual_norms(i), g.gap_c);
      auto recovered =
          dk_recovery(p, d.ritz_values(i), Vector(d.ritz_vectors.col(i)), oracle);
      CHECK(recovered.value == Catch::Approx(direct.value).epsilon(1e-12));
    }
  }
}

TEST_CASE("estimated subspace inputs use ritz values only") {
  Vector vals(3);
  vals << 1.0, 2.0, 5.0;
  auto p = SymmetricProblem::dense(Matrix(vals.asDiagonal()));
  auto d = rr_decompose(p, OrthonormalBasis::adopt(Matrix::Identity(3, 3)));

  auto inp = make_subspace_inputs(d, 2, std::nullopt);
  CHECK(inp.gap == Catch::Approx(3.0).margin(1e-15));
  CHECK(inp.Gap == Catch::Approx(3.0).margin(1e-15));
  REQUIRE(inp.pair_dists.size() == 1);
  CHECK(inp.pair_dists(0) == Catch::Approx(3.0).margin(1e-15));

  // Width = k in estimated mode puts the proxy at distance zero; the bounds
  // refuse rather than certify with a vacuous denominator.
  auto degenerate = make_subspace_inputs(d, 3, std::nullopt);
  CHECK(degenerate.Gap == 0.0);
  try {
    subspace_boundvec(degenerate);
    FAIL("expected a nonpositive-gap error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonpositiveGap);
  }
}

TEST_CASE("interior targets via the index override") {
  Vector vals(4);
  vals << 0.0, 0.1, 1.0, 2.0;
  auto p = SymmetricProblem::dense(Matrix(vals.asDiagonal()));
  auto full = symmetric_eig(p);
  Matrix q = Matrix::Zero(4, 3);
  q(1, 0) = 1.0;  // trial spans e2, e3, e4: Ritz values 0.1, 1, 2
  q(2, 1) = 1.0;
  q(3, 2) = 1.0;
  auto d = rr_decompose(p, OrthonormalBasis::adopt(q), true);
  auto inp = make_subspace_inputs(d, 2, full.values, NormKind::Spectral, {1, 2});
  // Targets are the exact values 0.1 and 1; the one trailing Ritz value is 2.
  REQUIRE(inp.pair_dists.size() == 1);
  CHECK(inp.pair_dists(0) == Catch::Approx(1.0).margin(1e-15));
  CHECK(inp.gap == Catch::Approx(1.0).margin(1e-15));
  CHECK(inp.Gap == Catch::Approx(0.1).margin(1e-15));  // A3 holds the 0.0 eigenvalue
}

TEST_CASE("graded residuals favor the individual refinement") {
  SubspaceBoundInputs inp;
  inp.k1 = 1;
  inp.R_norm_spectral = 0.5;
  inp.R_norm_frobenius = 0.6;
  inp.R1_norm_spectral = 1e-6;
  inp.R1_norm_frobenius = 1e-6;
  inp.R2_norm = 0.5;
  inp.r_norms = Vector(2);
  inp.r_norms << 0.3, 0.5;
  inp.gap = 0.8;
  inp.Gap = 1.0;
  inp.pair_dists = Vector(2);
  inp.pair_dists << 0.8, 1.5;

  auto vec = subspace_boundvec(inp);
  auto ind = subspace_sin2indiv(inp);
  REQUIRE(ind.applicable);
  CHECK(ind.value <= vec.value);
}

TEST_CASE("subspace input validation") {
  auto p = random_symmetric(10, 250, 0);
  auto full = symmetric_eig(p);
  auto d_nocomp = rr_decompose(p, tilted_basis(full, 3, 1e-3, 250));

  try {
    make_subspace_inputs(d_nocomp, 0, full.values);
    FAIL("expected an index error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndexOutOfRange);
  }
  try {
    make_subspace_inputs(d_nocomp, 4, full.values);
    FAIL("expected an index error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndexOutOfRange);
  }
  try {
    make_subspace_inputs(d_nocomp, 2, full.values);
    FAIL("expected a missing-complement error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ComplementMissing);
  }
  // Estimated mode never needs the complement.
  CHECK_NOTHROW(make_subspace_inputs(d_nocomp, 2, std::nullopt));
}
