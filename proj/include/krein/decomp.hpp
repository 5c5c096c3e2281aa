#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "krein/densela.hpp"
#include "krein/hermdex.hpp"
#include "krein/space.hpp"

namespace krein {

/// H = M+ + M- + M0 with M+/M- C-strictly positive/negative and M0 = ker C.
struct Decomposition {
  Subspace M_plus;
  Subspace M_minus;
  Subspace M_zero;
};

struct DecompositionProjections {
  KOperator Q_plus;
  KOperator Q_minus;
  KOperator Q_zero;
};

/// Outcome of checking conditions (i)-(iv) plus directness. Every condition
/// is evaluated; nothing short-circuits.
struct DecompositionReport {
  bool plus_strictly_positive = false;
  bool minus_strictly_negative = false;
  bool zero_is_kernel = false;
  // (ii): pairwise sums are direct, witnessed by the smallest singular value
  // of the concatenated bases.
  bool plus_minus_direct = false;
  bool plus_zero_direct = false;
  bool minus_zero_direct = false;
  // (iii)
  bool plus_minus_orthogonal = false;
  bool plus_zero_orthogonal = false;
  bool minus_zero_orthogonal = false;
  // (iv)
  bool dims_match_indices = false;
  bool spans_space = false;
  bool direct = false;
  double min_singular_value = 0.0;
  IndexTriple indices;

  bool condition_i() const { return plus_strictly_positive && minus_strictly_negative && zero_is_kernel; }
  bool condition_ii() const { return plus_minus_direct && plus_zero_direct && minus_zero_direct; }
  bool condition_iii() const { return plus_minus_orthogonal && plus_zero_orthogonal && minus_zero_orthogonal; }
  bool condition_iv() const { return dims_match_indices; }
  bool passed() const { return condition_i() && condition_ii() && condition_iii() && condition_iv() && spans_space && direct; }
};

/// Spectral decomposition from the eigenvectors of the Hermitian representative JC.
inline Decomposition decompose(const KOperator& c, const Tolerance& tol = {}) {
  const auto s = detail::signed_spectrum(c, tol);
  const auto& idx = s.indices;
  const std::size_t n = c.domain().dim();
  const auto& space = c.domain();
  return {Subspace::span(space, s.vectors.block(0, 0, n, idx.h_plus), tol),
          Subspace::span(space, s.vectors.block(0, idx.h_plus, n, idx.h_minus), tol),
          Subspace::span(space, s.vectors.block(0, idx.h_plus + idx.h_minus, n, idx.h_zero), tol)};
}

namespace detail {

inline double smallest_singular_value(const Matrix& m) {
  if (m.cols() == 0) return 1.0;
  if (m.rows() < m.cols()) return 0.0;
  return svd(m).sigma.back();
}

inline bool is_direct_sum(const Matrix& a, const Matrix& b, const Tolerance& tol) {
  return smallest_singular_value(hcat(a, b)) > tol.rank_tol;
}

inline Matrix concatenated_basis(const Decomposition& d) {
  return hcat(hcat(d.M_plus.basis(), d.M_minus.basis()), d.M_zero.basis());
}

}  // namespace detail

inline DecompositionReport validate(const KOperator& c, const Decomposition& d, const Tolerance& tol = {}) {
  require_selfadjoint(c, tol);
  const std::size_t n = c.domain().dim();
  for (const Subspace* s : {&d.M_plus, &d.M_minus, &d.M_zero})
    if (s->space().dim() != n) throw Error(ErrorKind::DimensionMismatch, "subspace lives in a different space");

  DecompositionReport r;
  r.indices = hermitian_indices(c, tol);
  r.plus_strictly_positive = is_strictly_positive(c, d.M_plus, tol);
  r.minus_strictly_negative = is_strictly_negative(c, d.M_minus, tol);

  const Matrix kernel = null_basis(c.matrix(), tol);
  const double cn = norm2(c.matrix());
  const bool inside_kernel =
      d.M_zero.dim() == 0 || norm2(c.matrix() * d.M_zero.basis()) <= tol.residual_tol * cn;
  r.zero_is_kernel = inside_kernel && d.M_zero.dim() == kernel.cols();

  const auto& bp = d.M_plus.basis();
  const auto& bm = d.M_minus.basis();
  const auto& b0 = d.M_zero.basis();
  r.plus_minus_direct = detail::is_direct_sum(bp, bm, tol);
  r.plus_zero_direct = detail::is_direct_sum(bp, b0, tol);
  r.minus_zero_direct = detail::is_direct_sum(bm, b0, tol);

  r.plus_minus_orthogonal = c_orthogonal(c, d.M_plus, d.M_minus, tol);
  r.plus_zero_orthogonal = c_orthogonal(c, d.M_plus, d.M_zero, tol);
  r.minus_zero_orthogonal = c_orthogonal(c, d.M_minus, d.M_zero, tol);

  r.dims_match_indices = d.M_plus.dim() == r.indices.h_plus && d.M_minus.dim() == r.indices.h_minus;

  const Matrix all = detail::concatenated_basis(d);
  r.spans_space = all.cols() == n;
  r.min_singular_value = n == 0 ? 1.0 : detail::smallest_singular_value(all);
  r.direct = r.spans_space && r.min_singular_value > tol.rank_tol;
  return r;
}

/// Q+, Q-, Q0 from the unique splitting f = f+ + f- + f0.
inline DecompositionProjections projections(const KOperator& c, const Decomposition& d, const Tolerance& tol = {}) {
  require_endomorphism(c, "projections");
  const std::size_t n = c.domain().dim();
  const Matrix t = detail::concatenated_basis(d);
  if (t.rows() != n || t.cols() != n || (n > 0 && detail::smallest_singular_value(t) <= tol.rank_tol))
    throw Error(ErrorKind::NotDirect, "concatenated basis is not invertible");
  const Matrix t_inv = inverse(t, tol);

  auto piece = [&](std::size_t start, std::size_t count) {
    Matrix sel(n, n);
    for (std::size_t k = start; k < start + count; ++k) sel(k, k) = 1.0;
    return KOperator(c.domain(), t * sel * t_inv);
  };
  const std::size_t p = d.M_plus.dim();
  const std::size_t m = d.M_minus.dim();
  return {piece(0, p), piece(p, m), piece(p + m, d.M_zero.dim())};
}

}  // namespace krein
