#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "krein/densela.hpp"
#include "krein/error.hpp"
#include "krein/matrix.hpp"

namespace krein {

/// Finite-dimensional Krein space in coordinates: <f, g> = g^H J f with a
/// fundamental symmetry J (J = J^H, J^2 = I).
class KreinSpace {
 public:
  KreinSpace() = default;

  static KreinSpace make(const Matrix& J, const Tolerance& tol = {}) {
    if (!J.is_square()) throw Error(ErrorKind::NotSymmetry, "J must be square, got " + J.shape_string());
    if (!J.all_finite()) throw Error(ErrorKind::InvalidInput, "J has non-finite entries");
    const std::size_t n = J.rows();
    if ((J - J.adjoint()).frobenius_norm() > tol.residual_tol * std::max(1.0, J.frobenius_norm()))
      throw Error(ErrorKind::NotSymmetry, "J is not Hermitian");
    if ((J * J - Matrix::identity(n)).frobenius_norm() > tol.residual_tol * std::max<double>(1.0, std::sqrt(double(n))))
      throw Error(ErrorKind::NotSymmetry, "J^2 differs from the identity");
    KreinSpace s;
    s.J_ = hermitian_part(J);
    s.dim_ = n;
    return s;
  }

  static KreinSpace hilbert(std::size_t n) { return make(Matrix::identity(n)); }

  /// diag(+1 x plus, -1 x minus).
  static KreinSpace split(std::size_t plus, std::size_t minus) {
    return make(signature_matrix(plus, minus));
  }

  std::size_t dim() const noexcept { return dim_; }
  const Matrix& J() const noexcept { return J_; }

  bool is_hilbert(const Tolerance& tol = {}) const {
    return (J_ - Matrix::identity(dim_)).frobenius_norm() <= tol.residual_tol;
  }

  friend bool operator==(const KreinSpace&, const KreinSpace&) = default;

 private:
  std::size_t dim_ = 0;
  Matrix J_;
};

/// ind+ and ind- of a space.
struct SpaceIndices {
  std::size_t plus = 0;
  std::size_t minus = 0;
  friend bool operator==(const SpaceIndices&, const SpaceIndices&) = default;
};

inline SpaceIndices space_indices(const KreinSpace& h, const Tolerance& tol = {}) {
  const auto in = inertia(h.J(), tol);
  return {in.plus, in.minus};
}

/// Hermitian indices of a selfadjoint operator plus the kernel dimension.
struct IndexTriple {
  std::size_t h_plus = 0;
  std::size_t h_minus = 0;
  std::size_t h_zero = 0;

  std::size_t dim() const { return h_plus + h_minus + h_zero; }
  friend bool operator==(const IndexTriple&, const IndexTriple&) = default;
};

/// Bounded operator between two Krein spaces; the matrix is
/// codomain.dim() x domain.dim().
class KOperator {
 public:
  KOperator() = default;
  KOperator(KreinSpace domain, KreinSpace codomain, Matrix matrix)
      : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != codomain_.dim() || matrix_.cols() != domain_.dim())
      throw Error(ErrorKind::DimensionMismatch,
                  "operator matrix " + matrix_.shape_string() + " does not match spaces of dimension " +
                      std::to_string(domain_.dim()) + " -> " + std::to_string(codomain_.dim()));
  }

  /// Endomorphism of `space`.
  KOperator(const KreinSpace& space, Matrix matrix) : KOperator(space, space, std::move(matrix)) {}

  const KreinSpace& domain() const noexcept { return domain_; }
  const KreinSpace& codomain() const noexcept { return codomain_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  bool is_endomorphism() const { return domain_ == codomain_; }

 private:
  KreinSpace domain_;
  KreinSpace codomain_;
  Matrix matrix_;
};

/// Krein adjoint: A* = J_dom A^H J_cod, acting codomain -> domain.
inline KOperator k_adjoint(const KOperator& a) {
  return KOperator(a.codomain(), a.domain(),
                   a.domain().J() * a.matrix().adjoint() * a.codomain().J());
}

/// Composition a * b (apply b first).
inline KOperator compose(const KOperator& a, const KOperator& b) {
  if (!(a.domain() == b.codomain()))
    throw Error(ErrorKind::DimensionMismatch, "composition across different spaces");
  return KOperator(b.domain(), a.codomain(), a.matrix() * b.matrix());
}

inline void require_endomorphism(const KOperator& c, std::string_view what) {
  if (!c.is_endomorphism())
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " needs an operator on a single space");
}

/// J C: Hermitian exactly when C is selfadjoint in the Krein space.
inline Matrix hermitian_representative(const KOperator& c) {
  return c.domain().J() * c.matrix();
}

/// <f, g>_C = <C f, g> = g^H J C f.
inline cplx c_inner(const KOperator& c, std::span<const cplx> f, std::span<const cplx> g) {
  require_endomorphism(c, "c_inner");
  const std::size_t n = c.domain().dim();
  if (f.size() != n || g.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "vector length does not match the space dimension");
  const Matrix jcf = hermitian_representative(c) * Matrix::column(f);
  return inner(jcf.data(), g);
}

inline bool is_selfadjoint(const KOperator& c, const Tolerance& tol = {}) {
  if (!c.is_endomorphism()) return false;
  const Matrix jc = hermitian_representative(c);
  return norm2(jc - jc.adjoint()) <= tol.residual_tol * norm2(c.matrix());
}

inline void require_selfadjoint(const KOperator& c, const Tolerance& tol) {
  require_endomorphism(c, "selfadjointness");
  if (!is_selfadjoint(c, tol)) throw Error(ErrorKind::NotSelfadjoint, "J*C is not Hermitian within residual_tol");
}

/// Closed subspace carried by a Euclidean-orthonormal basis.
class Subspace {
 public:
  Subspace() = default;

  /// Span of the columns of `vectors`, re-orthonormalized.
  static Subspace span(const KreinSpace& space, const Matrix& vectors, const Tolerance& tol = {}) {
    if (vectors.rows() != space.dim())
      throw Error(ErrorKind::DimensionMismatch, "basis vectors do not live in the space");
    Subspace s;
    s.space_ = space;
    s.basis_ = vectors.cols() == 0 ? Matrix(space.dim(), 0) : range_basis(vectors, tol);
    return s;
  }

  static Subspace zero(const KreinSpace& space) { return span(space, Matrix(space.dim(), 0)); }

  const KreinSpace& space() const noexcept { return space_; }
  const Matrix& basis() const noexcept { return basis_; }
  std::size_t dim() const noexcept { return basis_.cols(); }

  /// Orthogonal projector basis * basis^H.
  Matrix projector() const { return basis_ * basis_.adjoint(); }

  /// |(I - P) v| for each column of v, maximum over columns.
  double distance_of(const Matrix& v) const {
    const Matrix r = v - projector() * v;
    double worst = 0.0;
    for (std::size_t j = 0; j < r.cols(); ++j) worst = std::max(worst, r.block(0, j, r.rows(), 1).frobenius_norm());
    return worst;
  }

  /// Containment of another subspace by projection residual.
  bool contains(const Subspace& other, const Tolerance& tol = {}) const {
    return other.dim() == 0 || distance_of(other.basis()) <= tol.residual_tol;
  }

 private:
  KreinSpace space_;
  Matrix basis_;
};

enum class SubspaceClass { StrictlyPositive, StrictlyNegative, Nonnegative, Nonpositive, Neutral, Indefinite };

constexpr std::string_view to_string(SubspaceClass c) {
  switch (c) {
    case SubspaceClass::StrictlyPositive: return "StrictlyPositive";
    case SubspaceClass::StrictlyNegative: return "StrictlyNegative";
    case SubspaceClass::Nonnegative: return "Nonnegative";
    case SubspaceClass::Nonpositive: return "Nonpositive";
    case SubspaceClass::Neutral: return "Neutral";
    case SubspaceClass::Indefinite: return "Indefinite";
  }
  return "Unknown";
}

/// Gram matrix B^H (J C) B of the C-inner product on a subspace.
inline Matrix c_gram(const KOperator& c, const Subspace& m) {
  return m.basis().adjoint() * hermitian_representative(c) * m.basis();
}

/// Classification by the inertia of the C-Gram matrix, using the zero band
/// rank_tol * |JC|. The zero subspace is reported as Neutral.
inline SubspaceClass classify_subspace(const KOperator& c, const Subspace& m, const Tolerance& tol = {}) {
  require_endomorphism(c, "classify_subspace");
  if (m.space().dim() != c.domain().dim())
    throw Error(ErrorKind::DimensionMismatch, "subspace lives in a different space");
  const Matrix g = hermitian_part(c_gram(c, m));
  const Inertia in = inertia(g, norm2(hermitian_representative(c)), tol);
  if (in.plus == 0 && in.minus == 0) return SubspaceClass::Neutral;
  if (in.minus == 0 && in.zero == 0) return SubspaceClass::StrictlyPositive;
  if (in.plus == 0 && in.zero == 0) return SubspaceClass::StrictlyNegative;
  if (in.minus == 0) return SubspaceClass::Nonnegative;
  if (in.plus == 0) return SubspaceClass::Nonpositive;
  return SubspaceClass::Indefinite;
}

/// Strict positivity allowing the zero subspace (vacuously true).
inline bool is_strictly_positive(const KOperator& c, const Subspace& m, const Tolerance& tol = {}) {
  return m.dim() == 0 || classify_subspace(c, m, tol) == SubspaceClass::StrictlyPositive;
}

inline bool is_strictly_negative(const KOperator& c, const Subspace& m, const Tolerance& tol = {}) {
  return m.dim() == 0 || classify_subspace(c, m, tol) == SubspaceClass::StrictlyNegative;
}

inline bool is_nonnegative(SubspaceClass k) {
  return k == SubspaceClass::StrictlyPositive || k == SubspaceClass::Nonnegative || k == SubspaceClass::Neutral;
}

inline bool is_nonpositive(SubspaceClass k) {
  return k == SubspaceClass::StrictlyNegative || k == SubspaceClass::Nonpositive || k == SubspaceClass::Neutral;
}

inline bool c_orthogonal(const KOperator& c, const Subspace& m, const Subspace& n, const Tolerance& tol = {}) {
  require_endomorphism(c, "c_orthogonal");
  if (m.dim() == 0 || n.dim() == 0) return true;
  const Matrix cross = n.basis().adjoint() * hermitian_representative(c) * m.basis();
  return norm2(cross) <= tol.residual_tol * norm2(c.matrix());
}

}  // namespace krein
