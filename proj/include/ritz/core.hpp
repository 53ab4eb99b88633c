#pragma once

#include <Eigen/Dense>
#include <cstdlib>
#include <functional>
#include <string>
#include <utility>

#include "ritz/errors.hpp"

namespace ritz {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Size cap for dense factorizations; RITZ_MAX_N overrides the default.
inline int max_dense_dimension() {
  if (const char* s = std::getenv("RITZ_MAX_N")) {
    long v = std::strtol(s, nullptr, 10);
    if (v > 0) return static_cast<int>(v);
  }
  return 4096;
}

inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  // Gram route: one symmetric eigensolve on the small side instead of a full
  // SVD; the relative error is O(k u), fine for norm reporting.
  if (m.rows() >= m.cols()) {
    Matrix g = m.transpose() * m;
    Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
    double lmax = es.eigenvalues().maxCoeff();
    return lmax > 0.0 ? std::sqrt(lmax) : 0.0;
  }
  Matrix g = m * m.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  double lmax = es.eigenvalues().maxCoeff();
  return lmax > 0.0 ? std::sqrt(lmax) : 0.0;
}

inline double frobenius_norm(const Matrix& m) { return m.norm(); }

// Real symmetric problem in one of three storages: an explicit dense matrix,
// a symmetric tridiagonal (main and off diagonal), or a matrix-free operator
// handle. scale_hint conveys the magnitude of ||A|| for tolerance scaling.
class SymmetricProblem {
 public:
  enum class Storage { Dense, Tridiagonal, Operator };

  static SymmetricProblem dense(Matrix a, double scale_hint = 1.0) {
    if (a.rows() != a.cols())
      throw Error(ErrorCode::DimensionMismatch, "dense symmetric matrix must be square");
    SymmetricProblem p;
    p.n_ = static_cast<int>(a.rows());
    p.storage_ = Storage::Dense;
    // Symmetrize so downstream factorizations see an exactly symmetric input.
    p.dense_ = 0.5 * (a + a.transpose());
    p.scale_hint_ = scale_hint;
    return p;
  }

  static SymmetricProblem tridiagonal(Vector diag, Vector offdiag, double scale_hint = 1.0) {
    if (offdiag.size() != diag.size() - 1)
      throw Error(ErrorCode::DimensionMismatch, "offdiagonal must have length n-1");
    SymmetricProblem p;
    p.n_ = static_cast<int>(diag.size());
    p.storage_ = Storage::Tridiagonal;
    p.diag_ = std::move(diag);
    p.offdiag_ = std::move(offdiag);
    p.scale_hint_ = scale_hint;
    return p;
  }

  static SymmetricProblem from_operator(int n, std::function<Vector(const Vector&)> apply,
                                        double scale_hint = 1.0) {
    SymmetricProblem p;
    p.n_ = n;
    p.storage_ = Storage::Operator;
    p.apply_ = std::move(apply);
    p.scale_hint_ = scale_hint;
    return p;
  }

  int n() const { return n_; }
  Storage storage() const { return storage_; }
  double scale_hint() const { return scale_hint_; }
  bool has_matrix() const { return storage_ != Storage::Operator; }
  const Vector& diag() const { return diag_; }
  const Vector& offdiag() const { return offdiag_; }

  Vector apply(const Vector& x) const {
    switch (storage_) {
      case Storage::Dense:
        return dense_ * x;
      case Storage::Tridiagonal: {
        Vector y = diag_.cwiseProduct(x);
        for (int i = 0; i + 1 < n_; ++i) {
          y(i) += offdiag_(i) * x(i + 1);
          y(i + 1) += offdiag_(i) * x(i);
        }
        return y;
      }
      case Storage::Operator:
        return apply_(x);
    }
    return Vector();
  }

  Matrix apply(const Matrix& x) const {
    if (storage_ == Storage::Dense) return dense_ * x;
    Matrix y(x.rows(), x.cols());
    for (int j = 0; j < x.cols(); ++j) y.col(j) = apply(Vector(x.col(j)));
    return y;
  }

  // Dense copy of the matrix; refused for operator storage.
  Matrix materialize() const {
    switch (storage_) {
      case Storage::Dense:
        return dense_;
      case Storage::Tridiagonal: {
        Matrix a = Matrix::Zero(n_, n_);
        a.diagonal() = diag_;
        for (int i = 0; i + 1 < n_; ++i) {
          a(i, i + 1) = offdiag_(i);
          a(i + 1, i) = offdiag_(i);
        }
        return a;
      }
      case Storage::Operator:
        throw Error(ErrorCode::OperatorOnly, "operator-only problem has no explicit matrix");
    }
    return Matrix();
  }

 private:
  int n_ = 0;
  Storage storage_ = Storage::Dense;
  Matrix dense_;
  Vector diag_, offdiag_;
  std::function<Vector(const Vector&)> apply_;
  double scale_hint_ = 1.0;
};

// n x k matrix with orthonormal columns; construction enforces
// ||Q^T Q - I||_F <= 1e-13 sqrt(k).
struct OrthonormalBasis {
  int n = 0;
  int k = 0;
  Matrix columns;

  static OrthonormalBasis adopt(Matrix q) {
    OrthonormalBasis b;
    b.n = static_cast<int>(q.rows());
    b.k = static_cast<int>(q.cols());
    if (b.k > b.n)
      throw Error(ErrorCode::DimensionMismatch, "basis cannot have more columns than rows");
    double dev = (q.transpose() * q - Matrix::Identity(b.k, b.k)).norm();
    if (dev > 1e-13 * std::sqrt(static_cast<double>(b.k)))
      throw Error(ErrorCode::RankDeficient,
                  "candidate columns are not orthonormal to tolerance", b.k);
    b.columns = std::move(q);
    return b;
  }
};

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // columns match values
};

// Full symmetric eigendecomposition (Householder tridiagonalization with
// implicit-shift QR underneath). Operator storage is refused and the dense
// path is size-capped.
//
// Input:  symmetric problem with explicit storage
// Output: all eigenvalues ascending with orthonormal eigenvectors, satisfying
//         ||A V - V diag(lambda)|| <= 1e-12 n scale_hint
inline EigenDecomposition symmetric_eig(const SymmetricProblem& problem) {
  if (problem.storage() == SymmetricProblem::Storage::Operator)
    throw Error(ErrorCode::OperatorOnly, "eigendecomposition needs explicit storage");
  if (problem.n() > max_dense_dimension())
    throw Error(ErrorCode::DimensionTooLarge,
                "dimension exceeds dense cap (override with RITZ_MAX_N)", problem.n());
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  if (problem.storage() == SymmetricProblem::Storage::Tridiagonal)
    es.computeFromTridiagonal(problem.diag(), problem.offdiag());
  else
    es.compute(problem.materialize());
  EigenDecomposition d;
  d.values = es.eigenvalues();
  d.vectors = es.eigenvectors();
  return d;
}

struct SvdDecomposition {
  Matrix u;      // thin left factor
  Vector sigma;  // descending, nonnegative
  Matrix v;      // thin right factor
};

inline SvdDecomposition full_svd(const Matrix& m) {
  int cap = max_dense_dimension();
  if (m.rows() > cap || m.cols() > cap)
    throw Error(ErrorCode::DimensionTooLarge,
                "dimension exceeds dense cap (override with RITZ_MAX_N)",
                std::max(m.rows(), m.cols()));
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdDecomposition d;
  d.u = svd.matrixU();
  d.sigma = svd.singularValues();
  d.v = svd.matrixV();
  return d;
}

// Orthonormal basis of range(Y) via Householder QR, with column signs fixed
// by positive R diagonal.
//
// Input:  n x k matrix with numerically independent columns
//         (sigma_min > 1e-10 sigma_max, else RankDeficient carrying the
//         detected rank)
// Output: orthonormal basis spanning the same space
inline OrthonormalBasis orthonormalize(const Matrix& y) {
  int n = static_cast<int>(y.rows());
  int k = static_cast<int>(y.cols());
  if (k == 0 || n == 0 || k > n)
    throw Error(ErrorCode::DimensionMismatch, "orthonormalize needs 1 <= k <= n columns");
  Eigen::JacobiSVD<Matrix> svd(y);
  const Vector& s = svd.singularValues();
  double smax = s(0);
  if (!(smax > 0.0) || s(k - 1) <= 1e-10 * smax) {
    long rank = 0;
    for (int i = 0; i < k; ++i)
      if (s(i) > 1e-10 * smax) ++rank;
    throw Error(ErrorCode::RankDeficient, "columns numerically rank-deficient", rank);
  }
  Eigen::HouseholderQR<Matrix> qr(y);
  Matrix q = qr.householderQ() * Matrix::Identity(n, k);
  Matrix r = q.transpose() * y;
  for (int j = 0; j < k; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  OrthonormalBasis b;
  b.n = n;
  b.k = k;
  b.columns = std::move(q);
  return b;
}

// Orthonormal completion: returns n x (n-k) columns spanning the orthogonal
// complement of the given basis.
inline Matrix orthonormal_complement(const OrthonormalBasis& q) {
  Eigen::HouseholderQR<Matrix> qr(q.columns);
  Matrix full = qr.householderQ();
  return full.rightCols(q.n - q.k);
}

struct PrincipalAngles {
  Vector sines;         // nonincreasing, one per column of the smaller basis
  double spectral_sin;  // largest sine
  double frobenius_sin; // l2 norm of all sines
};

// Principal angles between span(X) (dimension k1) and span(Y) (dimension k2),
// k1 <= k2. For small k2 the sines come directly from the projection onto the
// complement of Y, which stays accurate for tiny angles; for large k2 the
// cosine route sqrt(1 - sigma(X^T Y)^2) is used instead.
//
// Input:  orthonormal bases with matching ambient dimension, X no wider than Y
// Output: sines of the k1 principal angles, nonincreasing
inline PrincipalAngles principal_angles(const OrthonormalBasis& x, const OrthonormalBasis& y) {
  if (x.n != y.n)
    throw Error(ErrorCode::DimensionMismatch, "bases live in different ambient dimensions");
  if (x.k > y.k)
    throw Error(ErrorCode::DimensionMismatch, "first basis must not be wider than second");
  PrincipalAngles out;
  int k1 = x.k;
  if (2 * y.k <= y.n) {
    Matrix yperp = orthonormal_complement(y);
    Matrix m = yperp.transpose() * x.columns;
    Eigen::JacobiSVD<Matrix> svd(m);
    Vector s = svd.singularValues();  // already nonincreasing, k1 values
    for (int i = 0; i < s.size(); ++i) s(i) = std::min(1.0, s(i));
    out.sines = s;
  } else {
    Matrix m = x.columns.transpose() * y.columns;
    Eigen::JacobiSVD<Matrix> svd(m);
    Vector c = svd.singularValues();  // cosines, nonincreasing
    Vector s(k1);
    for (int i = 0; i < k1; ++i) {
      double ci = std::min(1.0, c(k1 - 1 - i));  // reverse: smallest cosine first
      s(i) = std::sqrt(std::max(0.0, 1.0 - ci * ci));
    }
    out.sines = s;
  }
  out.spectral_sin = out.sines.size() > 0 ? out.sines(0) : 0.0;
  out.frobenius_sin = out.sines.norm();
  return out;
}

// Angle between two unit vectors via the rejection formula, stable down to
// angles of order machine epsilon.
inline double sine_between(const Vector& a, const Vector& b) {
  Vector an = a / a.norm();
  Vector bn = b / b.norm();
  double c = an.dot(bn);
  Vector rej = bn - c * an;
  return std::min(1.0, rej.norm());
}

}  // namespace ritz
