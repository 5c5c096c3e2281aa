#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "krein/error.hpp"
#include "krein/matrix.hpp"

namespace krein {

/// Zero-detection and residual thresholds, both relative to spectral norms
/// of the operands they are applied to.
struct Tolerance {
  double rank_tol = 1e-10;
  double residual_tol = 1e-8;

  void validate() const {
    auto ok = [](double t) { return std::isfinite(t) && t > 0.0 && t <= 1e-2; };
    if (!ok(rank_tol) || !ok(residual_tol))
      throw Error(ErrorKind::InvalidInput, "tolerances must lie in (0, 1e-2]");
  }
};

struct HermEig {
  std::vector<double> values;  // ascending
  Matrix vectors;              // orthonormal columns, vectors(:, k) pairs with values[k]
};

struct Inertia {
  std::size_t plus = 0;
  std::size_t minus = 0;
  std::size_t zero = 0;

  std::size_t dim() const { return plus + minus + zero; }
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

struct Svd {
  Matrix U;                   // m x k, orthonormal columns
  std::vector<double> sigma;  // k values, nonincreasing
  Matrix V;                   // n x k, orthonormal columns
};

namespace detail {

// Unitary 2x2 rotation R = [[c, s], [-s*conj(ph), c*conj(ph)]] that
// diagonalizes the Hermitian block [[a, b], [conj(b), d]] under R^H (.) R.
struct Rotation {
  double c = 1.0;
  double s = 0.0;
  cplx ph{1.0, 0.0};
};

inline Rotation jacobi_rotation(double a, double d, cplx b) {
  Rotation r;
  const double mag = std::abs(b);
  if (mag == 0.0) return r;
  r.ph = b / mag;
  const double tau = (d - a) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  r.c = 1.0 / std::sqrt(1.0 + t * t);
  r.s = t * r.c;
  return r;
}

// Columns (p, q) of m are replaced by m * R.
inline void rotate_columns(Matrix& m, std::size_t p, std::size_t q, const Rotation& r) {
  const cplx phc = std::conj(r.ph);
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const cplx xp = m(k, p);
    const cplx xq = m(k, q);
    m(k, p) = r.c * xp - r.s * phc * xq;
    m(k, q) = r.s * xp + r.c * phc * xq;
  }
}

// Rows (p, q) of m are replaced by R^H * m.
inline void rotate_rows(Matrix& m, std::size_t p, std::size_t q, const Rotation& r) {
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const cplx xp = m(p, k);
    const cplx xq = m(q, k);
    m(p, k) = r.c * xp - r.s * r.ph * xq;
    m(q, k) = r.s * xp + r.c * r.ph * xq;
  }
}

inline double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Stable argsort; ties keep their first-encountered order.
template <class Less>
std::vector<std::size_t> stable_order(std::size_t n, Less less) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), less);
  return idx;
}

// One-sided (Hestenes) Jacobi: rotates the columns of `work` until they are
// mutually orthogonal, accumulating the same rotations into `V`.
struct ColumnOrthogonalization {
  Matrix work;
  Matrix V;
  std::vector<double> norms;
};

inline ColumnOrthogonalization hestenes(const Matrix& m) {
  ColumnOrthogonalization out{m, Matrix::identity(m.cols()), {}};
  const std::size_t n = m.cols();
  const double fro = m.frobenius_norm();
  const double negligible = (DBL_EPSILON * fro) * (DBL_EPSILON * fro);
  const double orth_tol = static_cast<double>(m.rows() + 8) * DBL_EPSILON;
  constexpr int kMaxSweeps = 80;

  std::vector<double> sq(n, 0.0);
  auto column_sq = [&](std::size_t j) {
    double s = 0.0;
    for (std::size_t i = 0; i < out.work.rows(); ++i) s += std::norm(out.work(i, j));
    return s;
  };

  bool converged = n < 2 || fro == 0.0;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t j = 0; j < n; ++j) sq[j] = column_sq(j);
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = sq[p];
        const double beta = sq[q];
        if (alpha <= negligible || beta <= negligible) continue;
        cplx gamma{};
        for (std::size_t i = 0; i < out.work.rows(); ++i)
          gamma += std::conj(out.work(i, p)) * out.work(i, q);
        if (std::abs(gamma) <= orth_tol * std::sqrt(alpha * beta)) continue;
        const Rotation r = jacobi_rotation(alpha, beta, gamma);
        rotate_columns(out.work, p, q, r);
        rotate_columns(out.V, p, q, r);
        sq[p] = column_sq(p);
        sq[q] = column_sq(q);
        rotated = true;
      }
    }
    converged = !rotated;
  }
  if (!converged)
    throw Error(ErrorKind::NoConvergence, "one-sided Jacobi exceeded its sweep budget");

  out.norms.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.norms[j] = std::sqrt(column_sq(j));
  return out;
}

// Extends the orthonormal columns of `basis` (m x k) with `extra` more
// orthonormal columns by Gram-Schmidt over the coordinate vectors.
inline Matrix complete_orthonormal(const Matrix& basis, std::size_t extra) {
  const std::size_t m = basis.rows();
  Matrix out(m, basis.cols() + extra);
  out.set_block(0, 0, basis);
  std::size_t have = basis.cols();
  for (std::size_t e = 0; e < m && have < out.cols(); ++e) {
    std::vector<cplx> v(m, cplx{});
    v[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < have; ++j) {
        cplx d{};
        for (std::size_t i = 0; i < m; ++i) d += std::conj(out(i, j)) * v[i];
        for (std::size_t i = 0; i < m; ++i) v[i] -= d * out(i, j);
      }
    }
    double nv = 0.0;
    for (const auto& x : v) nv += std::norm(x);
    nv = std::sqrt(nv);
    if (nv < 0.5) continue;  // e is nearly inside the current span
    for (std::size_t i = 0; i < m; ++i) out(i, have) = v[i] / nv;
    ++have;
  }
  return out;
}

}  // namespace detail

/// Largest singular value.
inline double norm2(const Matrix& m) {
  if (m.empty()) return 0.0;
  const auto h = detail::hestenes(m.rows() >= m.cols() ? m : m.adjoint());
  return *std::max_element(h.norms.begin(), h.norms.end());
}

/// Eigendecomposition of a Hermitian matrix by cyclic two-sided Jacobi
/// rotations. Eigenvalues ascending; ties keep the order in which the
/// rotated basis produced them.
inline HermEig herm_eig(const Matrix& m, const Tolerance& tol = {}) {
  if (!m.is_square()) throw Error(ErrorKind::DimensionMismatch, "herm_eig needs a square matrix");
  const std::size_t n = m.rows();
  const double scale = norm2(m);
  if ((m - m.adjoint()).frobenius_norm() > tol.residual_tol * scale)
    throw Error(ErrorKind::NotHermitian, "matrix is not Hermitian within residual_tol");

  Matrix a = hermitian_part(m);
  Matrix v = Matrix::identity(n);
  const double fro = a.frobenius_norm();
  const std::size_t budget = 30 * n * n;
  std::size_t rotations = 0;

  while (detail::off_diagonal_norm(a) > DBL_EPSILON * fro) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx b = a(p, q);
        if (std::abs(b) <= std::numeric_limits<double>::min()) continue;
        if (++rotations > budget)
          throw Error(ErrorKind::NoConvergence, "Jacobi eigensolver exceeded 30*n^2 rotations");
        const auto r = detail::jacobi_rotation(a(p, p).real(), a(q, q).real(), b);
        detail::rotate_columns(a, p, q, r);
        detail::rotate_rows(a, p, q, r);
        detail::rotate_columns(v, p, q, r);
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
  const auto order =
      detail::stable_order(n, [&](std::size_t i, std::size_t j) { return diag[i] < diag[j]; });
  HermEig out;
  out.values.reserve(n);
  for (auto i : order) out.values.push_back(diag[i]);
  out.vectors = v.select_cols(order);
  return out;
}

/// Sign counts with an explicit scale: values > rank_tol*scale are positive,
/// values < -rank_tol*scale negative, everything in between (inclusive) zero.
inline Inertia inertia_of_values(const std::vector<double>& values, double scale,
                                 const Tolerance& tol) {
  const double band = tol.rank_tol * scale;
  Inertia in;
  for (double x : values) {
    if (x > band)
      ++in.plus;
    else if (x < -band)
      ++in.minus;
    else
      ++in.zero;
  }
  return in;
}

inline double spectral_radius(const std::vector<double>& values) {
  double s = 0.0;
  for (double x : values) s = std::max(s, std::abs(x));
  return s;
}

inline Inertia inertia(const Matrix& m, const Tolerance& tol = {}) {
  const auto e = herm_eig(m, tol);
  return inertia_of_values(e.values, spectral_radius(e.values), tol);
}

/// Inertia with the zero band measured against `scale` instead of |M|.
inline Inertia inertia(const Matrix& m, double scale, const Tolerance& tol) {
  const auto e = herm_eig(m, tol);
  return inertia_of_values(e.values, scale, tol);
}

/// Builds V * diag(f(lambda)) * V^H.
template <class F>
Matrix spectral_map(const HermEig& e, F f) {
  const std::size_t n = e.vectors.rows();
  Matrix r(n, n);
  for (std::size_t k = 0; k < e.values.size(); ++k) {
    const double fk = f(e.values[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vik = e.vectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vik * std::conj(e.vectors(j, k));
    }
  }
  return r;
}

inline Matrix psd_sqrt(const Matrix& m, const Tolerance& tol = {}) {
  const auto e = herm_eig(m, tol);
  const double band = tol.rank_tol * spectral_radius(e.values);
  for (double x : e.values)
    if (x < -band) throw Error(ErrorKind::NotPSD, "eigenvalue " + std::to_string(x) + " below zero band");
  return spectral_map(e, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

/// Thin SVD, k = min(rows, cols). Singular values nonincreasing.
inline Svd svd(const Matrix& m, const Tolerance& /*tol*/ = {}) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (rows < cols) {
    Svd t = svd(m.adjoint());
    return {std::move(t.V), std::move(t.sigma), std::move(t.U)};
  }
  if (cols == 0) return {Matrix(rows, 0), {}, Matrix(0, 0)};

  auto h = detail::hestenes(m);
  const auto order = detail::stable_order(
      cols, [&](std::size_t i, std::size_t j) { return h.norms[i] > h.norms[j]; });
  const double smax = h.norms[order.front()];
  const double floor = smax * static_cast<double>(rows) * DBL_EPSILON;

  Svd out;
  out.V = h.V.select_cols(order);
  std::size_t good = 0;
  for (auto j : order) {
    out.sigma.push_back(h.norms[j]);
    if (h.norms[j] > floor && h.norms[j] > 0.0) ++good;
  }
  Matrix u(rows, good);
  for (std::size_t k = 0; k < good; ++k) {
    const auto j = order[k];
    for (std::size_t i = 0; i < rows; ++i) u(i, k) = h.work(i, j) / h.norms[j];
  }
  out.U = detail::complete_orthonormal(u, cols - good);
  return out;
}

/// Orthonormal basis of {x : |Mx| <= rank_tol*|M|*|x|}; n x 0 when trivial.
inline Matrix null_basis(const Matrix& m, const Tolerance& tol = {}) {
  const std::size_t n = m.cols();
  if (n == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::identity(n);
  const auto h = detail::hestenes(m);
  const double smax = *std::max_element(h.norms.begin(), h.norms.end());
  const double band = tol.rank_tol * smax;
  std::vector<std::size_t> kernel;
  for (std::size_t j = 0; j < n; ++j)
    if (h.norms[j] <= band) kernel.push_back(j);
  return h.V.select_cols(kernel);
}

inline std::size_t numerical_rank(const Svd& s, const Tolerance& tol) {
  if (s.sigma.empty()) return 0;
  const double band = tol.rank_tol * s.sigma.front();
  return static_cast<std::size_t>(
      std::count_if(s.sigma.begin(), s.sigma.end(), [&](double x) { return x > band; }));
}

inline std::size_t rank(const Matrix& m, const Tolerance& tol = {}) {
  return numerical_rank(svd(m, tol), tol);
}

/// Orthonormal basis of the column space.
inline Matrix range_basis(const Matrix& m, const Tolerance& tol = {}) {
  const auto s = svd(m, tol);
  return s.U.block(0, 0, m.rows(), numerical_rank(s, tol));
}

/// Orthonormal basis of the Euclidean orthogonal complement of span(basis).
inline Matrix complement_basis(const Matrix& basis, const Tolerance& tol = {}) {
  if (basis.cols() == 0) return Matrix::identity(basis.rows());
  return null_basis(basis.adjoint(), tol);
}

inline Matrix pinv(const Matrix& m, const Tolerance& tol = {}) {
  const auto s = svd(m, tol);
  const std::size_t r = numerical_rank(s, tol);
  Matrix out(m.cols(), m.rows());
  for (std::size_t k = 0; k < r; ++k) {
    const double inv = 1.0 / s.sigma[k];
    for (std::size_t i = 0; i < m.cols(); ++i) {
      const cplx vik = s.V(i, k) * inv;
      for (std::size_t j = 0; j < m.rows(); ++j) out(i, j) += vik * std::conj(s.U(j, k));
    }
  }
  return out;
}

inline double condition_number(const Matrix& m) {
  if (m.empty()) return 1.0;
  const auto s = svd(m);
  if (s.sigma.back() == 0.0) return std::numeric_limits<double>::infinity();
  return s.sigma.front() / s.sigma.back();
}

/// Inverse of a square matrix; NotInvertible when the smallest singular
/// value falls inside the rank band.
inline Matrix inverse(const Matrix& m, const Tolerance& tol = {}) {
  if (!m.is_square()) throw Error(ErrorKind::NotInvertible, "non-square matrix");
  if (m.empty()) return m;
  const auto s = svd(m, tol);
  if (numerical_rank(s, tol) < m.rows())
    throw Error(ErrorKind::NotInvertible, "matrix is singular within rank_tol");
  return pinv(m, tol);
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
inline Matrix expm(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::DimensionMismatch, "expm needs a square matrix");
  const std::size_t n = m.rows();
  const double nrm = m.frobenius_norm();
  int squarings = 0;
  if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  Matrix a = m * cplx(std::ldexp(1.0, -squarings));
  Matrix result = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= 20; ++k) {
    term = term * a;
    term *= 1.0 / k;
    result += term;
    if (term.frobenius_norm() <= DBL_EPSILON * result.frobenius_norm()) break;
  }
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

}  // namespace krein
