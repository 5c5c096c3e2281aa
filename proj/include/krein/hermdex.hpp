#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "krein/densela.hpp"
#include "krein/error.hpp"
#include "krein/space.hpp"

namespace krein {

/// Invertible operator X from H to K together with its inverse.
class Congruence {
 public:
  Congruence() = default;

  static Congruence from_operator(KOperator x, const Tolerance& tol = {}) {
    if (x.domain().dim() != x.codomain().dim())
      throw Error(ErrorKind::NotInvertible, "congruence between spaces of different dimension");
    Matrix inv = inverse(x.matrix(), tol);
    return Congruence(std::move(x), std::move(inv));
  }

  /// Trusts the supplied inverse; used by generators that build both sides
  /// from the same factorization.
  static Congruence from_pair(KOperator x, Matrix x_inv) { return Congruence(std::move(x), std::move(x_inv)); }

  static Congruence identity(const KreinSpace& from, const KreinSpace& to) {
    const std::size_t n = from.dim();
    return Congruence(KOperator(from, to, Matrix::identity(n)), Matrix::identity(n));
  }

  const KOperator& op() const noexcept { return x_; }
  const Matrix& matrix() const noexcept { return x_.matrix(); }
  const Matrix& inverse_matrix() const noexcept { return x_inv_; }

  /// Inverse congruence K -> H.
  Congruence inverted() const {
    return Congruence(KOperator(x_.codomain(), x_.domain(), x_inv_), x_.matrix());
  }

 private:
  Congruence(KOperator x, Matrix x_inv) : x_(std::move(x)), x_inv_(std::move(x_inv)) {}

  KOperator x_;
  Matrix x_inv_;
};

struct CanonicalForm {
  IndexTriple indices;
  KOperator D;    // diag(I, -I, 0) on a Hilbert space
  Congruence X;   // C = X* D X
};

inline IndexTriple hermitian_indices(const KOperator& c, const Tolerance& tol = {}) {
  require_selfadjoint(c, tol);
  const Inertia in = inertia(hermitian_part(hermitian_representative(c)), tol);
  return {in.plus, in.minus, in.zero};
}

inline constexpr double kMaxCongruenceCondition = 1e8;

/// A = X* B X for B selfadjoint on K and X : H -> K.
inline KOperator transport(const KOperator& b, const Congruence& x, const Tolerance& tol = {}) {
  require_selfadjoint(b, tol);
  if (!(x.op().codomain() == b.domain()))
    throw Error(ErrorKind::DimensionMismatch, "congruence does not map into the operator's space");
  const Matrix& xm = x.matrix();
  const std::size_t n = xm.rows();
  if (n > 0) {
    if ((xm * x.inverse_matrix() - Matrix::identity(n)).frobenius_norm() >
        tol.residual_tol * std::sqrt(static_cast<double>(n)))
      throw Error(ErrorKind::NotInvertible, "X * X^-1 differs from the identity");
    if (condition_number(xm) > kMaxCongruenceCondition)
      throw Error(ErrorKind::IllConditioned, "congruence condition number exceeds 1e8");
  }
  const KOperator xstar = k_adjoint(x.op());
  return KOperator(x.op().domain(), xstar.matrix() * b.matrix() * xm);
}

struct HilbertForm {
  KOperator D;    // J C on the Euclidean space of the same coordinates
  Congruence X;   // identity coordinate map, C = X* D X
};

inline HilbertForm to_hilbert(const KOperator& c, const Tolerance& tol = {}) {
  require_selfadjoint(c, tol);
  const auto h = KreinSpace::hilbert(c.domain().dim());
  return {KOperator(h, hermitian_part(hermitian_representative(c))), Congruence::identity(c.domain(), h)};
}

namespace detail {

// Eigenpairs of JC ordered positives (descending), negatives (ascending
// magnitude), then the zero band.
struct SignedSpectrum {
  IndexTriple indices;
  std::vector<double> values;
  Matrix vectors;
};

inline SignedSpectrum signed_spectrum(const KOperator& c, const Tolerance& tol) {
  require_selfadjoint(c, tol);
  const auto e = herm_eig(hermitian_part(hermitian_representative(c)), tol);
  const std::size_t n = e.values.size();
  const double band = tol.rank_tol * spectral_radius(e.values);
  std::vector<std::size_t> pos, neg, zero;
  for (std::size_t k = 0; k < n; ++k) {
    if (e.values[k] > band) pos.push_back(k);
    else if (e.values[k] < -band) neg.push_back(k);
    else zero.push_back(k);
  }
  // Descending values; ties keep their eigensolver order.
  auto descending = [&](std::size_t a, std::size_t b) { return e.values[a] > e.values[b]; };
  std::stable_sort(pos.begin(), pos.end(), descending);
  std::stable_sort(neg.begin(), neg.end(), descending);
  std::vector<std::size_t> order = pos;
  order.insert(order.end(), neg.begin(), neg.end());
  order.insert(order.end(), zero.begin(), zero.end());

  SignedSpectrum s;
  s.indices = {pos.size(), neg.size(), zero.size()};
  for (auto k : order) s.values.push_back(e.values[k]);
  s.vectors = e.vectors.select_cols(order);
  return s;
}

}  // namespace detail

/// C = X* D X with D = diag(I, -I, 0): eigenvectors of JC scaled by
/// |lambda|^(1/2) on the nonzero part.
inline CanonicalForm canonical_form(const KOperator& c, const Tolerance& tol = {}) {
  const auto s = detail::signed_spectrum(c, tol);
  const std::size_t n = s.values.size();
  const auto h = KreinSpace::hilbert(n);

  // X = diag(|lambda|^(1/2), 1 on kernel) W^H,  X^-1 = W diag(|lambda|^(-1/2), 1).
  Matrix scaled_adj = s.vectors.adjoint();
  Matrix inv = s.vectors;
  for (std::size_t k = 0; k < n; ++k) {
    const bool nonzero = k < s.indices.h_plus + s.indices.h_minus;
    const double root = nonzero ? std::sqrt(std::abs(s.values[k])) : 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      scaled_adj(k, j) *= root;
      inv(j, k) /= root;
    }
  }
  KOperator d(h, signature_matrix(s.indices.h_plus, s.indices.h_minus, s.indices.h_zero));
  return {s.indices, std::move(d), Congruence::from_pair(KOperator(c.domain(), h, std::move(scaled_adj)), inv)};
}

inline bool is_congruent(const KOperator& a, const KOperator& b, const Tolerance& tol = {}) {
  require_endomorphism(a, "is_congruent");
  require_endomorphism(b, "is_congruent");
  if (a.domain().dim() != b.domain().dim())
    throw Error(ErrorKind::DimensionMismatch, "congruence needs spaces of the same finite dimension");
  return hermitian_indices(a, tol) == hermitian_indices(b, tol);
}

/// X : H -> K with A = X* B X, composed from the canonical congruences.
inline Congruence build_congruence(const KOperator& a, const KOperator& b, const Tolerance& tol = {}) {
  if (!is_congruent(a, b, tol))
    throw Error(ErrorKind::NotCongruent, "hermitian indices differ");
  const auto ca = canonical_form(a, tol);
  const auto cb = canonical_form(b, tol);
  Matrix x = cb.X.inverse_matrix() * ca.X.matrix();
  Matrix x_inv = ca.X.inverse_matrix() * cb.X.matrix();
  return Congruence::from_pair(KOperator(a.domain(), b.domain(), std::move(x)), std::move(x_inv));
}

/// |A - X* B X| / max(|A|, |B|), or the absolute residual when both vanish.
inline double congruence_residual(const KOperator& a, const KOperator& b, const Congruence& x) {
  const Matrix xm = x.matrix();
  const Matrix rebuilt = k_adjoint(x.op()).matrix() * b.matrix() * xm;
  const double scale = std::max(norm2(a.matrix()), norm2(b.matrix()));
  const double r = norm2(a.matrix() - rebuilt);
  return scale > 0.0 ? r / scale : r;
}

}  // namespace krein
