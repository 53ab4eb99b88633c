#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

namespace ritz {

// Counter-based pseudorandom stream. Every draw is a pure function of
// (key, counter), so a stream derived from (seed, stream id) yields the same
// sequence no matter which other streams were consumed in between; trials that
// run in any order therefore produce identical output, and reruns are
// byte-reproducible. The mixing function is the splitmix64 finalizer, which
// passes standard statistical batteries and is trivially portable.
class RandomStream {
 public:
  RandomStream() = default;

  static std::uint64_t scramble(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  // Independent stream for (seed, stream_id); two scramble rounds decorrelate
  // nearby seeds from nearby stream ids.
  static RandomStream derived(std::uint64_t seed, std::uint64_t stream_id) {
    RandomStream s;
    s.key_ = scramble(scramble(seed + 0x9E3779B97F4A7C15ull) ^
                      (stream_id * 0xBF58476D1CE4E5B9ull + 0x94D049BB133111EBull));
    return s;
  }

  std::uint64_t next_u64() {
    counter_ += 1;
    return scramble(key_ + counter_ * 0x9E3779B97F4A7C15ull);
  }

  // Uniform on the open interval (0, 1): 53 random bits centered in the cell.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  // Standard normal via Box-Muller; the sine partner is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Column-major fill keeps the draw order independent of how callers slice
  // the result.
  Eigen::MatrixXd gaussian(int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
  }

  Eigen::VectorXd gaussian_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  // Haar-ish random n x k orthonormal columns: QR of a Gaussian matrix with
  // the sign of each R diagonal entry fixed, which makes the draw unique.
  Eigen::MatrixXd random_orthonormal(int n, int k) {
    Eigen::MatrixXd g = gaussian(n, k);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
    Eigen::MatrixXd r = q.transpose() * g;
    for (int j = 0; j < k; ++j)
      if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ritz
