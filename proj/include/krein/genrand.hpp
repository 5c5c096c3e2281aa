#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "krein/densela.hpp"
#include "krein/error.hpp"
#include "krein/hermdex.hpp"
#include "krein/space.hpp"

namespace krein {

struct GenConfig {
  std::uint64_t seed = 0;
  std::size_t dim_min = 1;
  std::size_t dim_max = 8;
  double cond_cap = 100.0;
  double kernel_prob = 0.3;

  void validate() const {
    if (dim_min > dim_max || dim_max > 64)
      throw Error(ErrorKind::InvalidInput, "dim_range must satisfy 0 <= min <= max <= 64");
    if (!(cond_cap >= 1.0) || !std::isfinite(cond_cap)) throw Error(ErrorKind::InvalidInput, "cond_cap must be >= 1");
    if (!(kernel_prob >= 0.0 && kernel_prob <= 1.0)) throw Error(ErrorKind::InvalidInput, "kernel_prob must lie in [0, 1]");
  }
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child seed for (seed, a, b); distinct inputs give unrelated streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t s = seed;
  std::uint64_t out = splitmix64(s);
  s ^= a * 0xd1b54a32d192ed03ULL;
  out ^= splitmix64(s);
  s ^= b * 0xabc98388fb8fac03ULL;
  return out ^ splitmix64(s);
}

/// mt19937_64 with hand-rolled transforms; std distributions are not
/// bit-reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(next() % n); }

  bool bernoulli(double p) { return uniform() < p; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  /// Standard complex Gaussian, E|z|^2 = 1.
  cplx complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

enum class Stream : std::size_t { space, selfadjoint, invertible, factor, auxiliary, count };

/// Seeded source of random spaces and operators. One independent stream per
/// draw kind, so adding draws of one kind never shifts another kind.
class Generator {
 public:
  explicit Generator(GenConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    for (std::size_t k = 0; k < streams_.size(); ++k) streams_[k] = Rng(derive_seed(cfg_.seed, k + 1));
  }

  const GenConfig& config() const noexcept { return cfg_; }
  Rng& stream(Stream s) { return streams_[static_cast<std::size_t>(s)]; }

  Matrix gaussian(std::size_t rows, std::size_t cols, Stream s) {
    Matrix m(rows, cols);
    auto& rng = stream(s);
    for (auto& x : m.data()) x = rng.complex_normal();
    return m;
  }

  /// Haar unitary by Gram-Schmidt (two passes) on a complex Gaussian matrix.
  Matrix unitary(std::size_t n, Stream s = Stream::auxiliary) { return orthonormal_columns(n, n, s); }

  /// rows x cols matrix with orthonormal columns (cols <= rows).
  Matrix orthonormal_columns(std::size_t rows, std::size_t cols, Stream s = Stream::auxiliary) {
    Matrix q = gaussian(rows, cols, s);
    for (std::size_t j = 0; j < cols; ++j) {
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k = 0; k < j; ++k) {
          cplx d{};
          for (std::size_t i = 0; i < rows; ++i) d += std::conj(q(i, k)) * q(i, j);
          for (std::size_t i = 0; i < rows; ++i) q(i, j) -= d * q(i, k);
        }
      double nrm = 0.0;
      for (std::size_t i = 0; i < rows; ++i) nrm += std::norm(q(i, j));
      nrm = std::sqrt(nrm);
      for (std::size_t i = 0; i < rows; ++i) q(i, j) /= nrm;
    }
    return q;
  }

  std::size_t dimension() {
    return cfg_.dim_min + stream(Stream::space).index(cfg_.dim_max - cfg_.dim_min + 1);
  }

  /// J = U^H diag(+-1) U with a random dimension and split.
  KreinSpace space() {
    const std::size_t n = dimension();
    const std::size_t plus = stream(Stream::space).index(n + 1);
    return space(plus, n - plus);
  }

  KreinSpace space(std::size_t plus, std::size_t minus) {
    const std::size_t n = plus + minus;
    const Matrix u = unitary(n, Stream::space);
    return KreinSpace::make(hermitian_part(u.adjoint() * signature_matrix(plus, minus) * u));
  }

  /// C = J M with M Hermitian, eigenvalue magnitudes in [0.5, 2]; with
  /// probability kernel_prob between 1 and n eigenvalues are set to zero.
  KOperator selfadjoint(const KreinSpace& h) {
    auto& rng = stream(Stream::selfadjoint);
    const std::size_t n = h.dim();
    std::size_t kernel = 0;
    if (n > 0 && rng.bernoulli(cfg_.kernel_prob)) kernel = 1 + rng.index(n);
    return selfadjoint(h, kernel);
  }

  KOperator selfadjoint(const KreinSpace& h, std::size_t kernel_dim) {
    auto& rng = stream(Stream::selfadjoint);
    const std::size_t n = h.dim();
    std::vector<double> values(n, 0.0);
    for (std::size_t k = kernel_dim; k < n; ++k)
      values[k] = (rng.bernoulli(0.5) ? 1.0 : -1.0) * rng.uniform(0.5, 2.0);
    const Matrix w = unitary(n, Stream::selfadjoint);
    const Matrix m = hermitian_part(w * Matrix::diagonal(values) * w.adjoint());
    return KOperator(h, h.J() * m);
  }

  /// Singular values log-uniform in [cap^-1/2, cap^1/2], so cond <= cond_cap.
  std::vector<double> singular_values(std::size_t k, Stream s) {
    auto& rng = stream(s);
    const double half = 0.5 * std::log(cfg_.cond_cap);
    std::vector<double> sv(k);
    for (auto& x : sv) x = std::exp(rng.uniform(-half, half));
    return sv;
  }

  Congruence invertible(const KreinSpace& h, const KreinSpace& k) {
    if (h.dim() != k.dim()) throw Error(ErrorKind::DimensionMismatch, "congruence needs equal dimensions");
    const std::size_t n = h.dim();
    const auto sv = singular_values(n, Stream::invertible);
    std::vector<double> inv(n);
    for (std::size_t i = 0; i < n; ++i) inv[i] = 1.0 / sv[i];
    const Matrix u = unitary(n, Stream::invertible);
    const Matrix v = unitary(n, Stream::invertible);
    return Congruence::from_pair(KOperator(h, k, u * Matrix::diagonal(sv) * v.adjoint()),
                                 v * Matrix::diagonal(inv) * u.adjoint());
  }

  /// Full column rank A : 𝒜 -> H with smallest singular value >= 1/cond_cap.
  KOperator injective_factor(const KreinSpace& a_space, const KreinSpace& h) {
    const std::size_t m = a_space.dim();
    const std::size_t n = h.dim();
    if (m > n) throw Error(ErrorKind::DimensionMismatch, "injective factor needs dim 𝒜 <= dim H");
    const auto sv = singular_values(m, Stream::factor);
    const Matrix u = orthonormal_columns(n, m, Stream::factor);
    const Matrix v = unitary(m, Stream::factor);
    return KOperator(a_space, h, u * Matrix::diagonal(sv) * v.adjoint());
  }

  /// Contraction with singular values in [0, 1]; a quarter of the draws pin
  /// the largest one to exactly 1 (an isometric, neutral direction).
  Matrix contraction(std::size_t rows, std::size_t cols) {
    auto& rng = stream(Stream::auxiliary);
    const std::size_t k = std::min(rows, cols);
    std::vector<double> sv(k);
    for (auto& x : sv) x = rng.uniform(0.0, 0.95);
    if (k > 0 && rng.bernoulli(0.25)) sv[0] = 1.0;
    const Matrix u = orthonormal_columns(rows, k);
    const Matrix v = orthonormal_columns(cols, k);
    return u * Matrix::diagonal(sv) * v.adjoint();
  }

  /// exp(J S) for S skew-Hermitian with |J S| clamped to 2; satisfies
  /// J U^H J U = I.
  Matrix j_unitary(const Matrix& j) {
    const std::size_t n = j.rows();
    const Matrix g = gaussian(n, n, Stream::auxiliary);
    Matrix s = g - g.adjoint();
    s *= 0.5;
    Matrix k = j * s;
    const double nk = norm2(k);
    if (nk > 2.0) k *= 2.0 / nk;
    return expm(k);
  }

 private:
  GenConfig cfg_;
  std::array<Rng, static_cast<std::size_t>(Stream::count)> streams_;
};

inline KreinSpace gen_space(const GenConfig& cfg) { return Generator(cfg).space(); }

inline KOperator gen_selfadjoint(const GenConfig& cfg, const KreinSpace& h) { return Generator(cfg).selfadjoint(h); }

inline Congruence gen_invertible(const GenConfig& cfg, const KreinSpace& h, const KreinSpace& k) {
  return Generator(cfg).invertible(h, k);
}

inline KOperator gen_injective_factor(const GenConfig& cfg, const KreinSpace& a_space, const KreinSpace& h) {
  return Generator(cfg).injective_factor(a_space, h);
}

}  // namespace krein
