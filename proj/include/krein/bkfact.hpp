#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "krein/densela.hpp"
#include "krein/error.hpp"
#include "krein/hermdex.hpp"
#include "krein/phillips.hpp"
#include "krein/space.hpp"

namespace krein {

/// C = A A* with A : 𝒜 -> H injective.
struct BKFactorization {
  KreinSpace A_space;
  KOperator A;
};

/// C = T^H J_A T with J_A a signature operator on the Hilbert space K.
struct SignatureFactorization {
  KreinSpace K_space;
  KOperator J_A;
  KOperator T;

  static SignatureFactorization make(const Matrix& j_a, const Matrix& t, const Tolerance& tol = {}) {
    // A signature operator is exactly a fundamental symmetry of K's coordinates.
    KreinSpace::make(j_a, tol);
    if (t.rows() != j_a.rows()) throw Error(ErrorKind::DimensionMismatch, "T must map into K");
    const auto k = KreinSpace::hilbert(j_a.rows());
    return {k, KOperator(k, hermitian_part(j_a)), KOperator(KreinSpace::hilbert(t.cols()), k, t)};
  }
};

/// Range of A inside H with the inner product that makes A an isomorphism.
struct ContainedSpace {
  Matrix basis;  // orthonormal columns spanning ran A
  Matrix gram;   // Krein inner product in that basis
};

inline constexpr const char* kEssentialUniquenessNote =
    "finite dimension: the spectral-gap condition holds, so every factorization is essentially unique";

struct BKReport {
  double residual = 0.0;  // |C - A A*| / |C| (absolute when C = 0)
  bool residual_ok = false;
  bool injective = false;
  std::size_t kernel_dim = 0;
  SpaceIndices a_indices;
  IndexTriple c_indices;
  bool index_equal = false;
  std::string note = kEssentialUniquenessNote;

  bool passed() const { return residual_ok && injective && index_equal; }
};

inline BKFactorization bk_factorize(const KOperator& c, const Tolerance& tol = {}) {
  const auto s = detail::signed_spectrum(c, tol);
  const std::size_t n = c.domain().dim();
  const std::size_t r = s.indices.h_plus + s.indices.h_minus;
  // B = |D|^(1/2) restricted to H+ (+) H-, written in the eigenvector frame.
  Matrix b(n, r);
  for (std::size_t k = 0; k < r; ++k) {
    const double root = std::sqrt(std::abs(s.values[k]));
    for (std::size_t i = 0; i < n; ++i) b(i, k) = s.vectors(i, k) * root;
  }
  auto a_space = KreinSpace::split(s.indices.h_plus, s.indices.h_minus);
  // Pull back through the identity coordinate congruence: A = X* B = J B.
  Matrix a = c.domain().J() * b;
  return {a_space, KOperator(a_space, c.domain(), std::move(a))};
}

/// A A* for a factor A : 𝒜 -> H.
inline KOperator factor_product(const KOperator& a) { return compose(a, k_adjoint(a)); }

inline BKReport bk_verify(const KOperator& c, const BKFactorization& f, const Tolerance& tol = {}) {
  require_selfadjoint(c, tol);
  if (!(f.A.codomain() == c.domain()) || !(f.A.domain() == f.A_space))
    throw Error(ErrorKind::DimensionMismatch, "factor does not map the factor space into C's space");
  BKReport r;
  const double cn = norm2(c.matrix());
  const double abs_res = norm2(c.matrix() - factor_product(f.A).matrix());
  r.residual = cn > 0.0 ? abs_res / cn : abs_res;
  r.residual_ok = r.residual <= tol.residual_tol;
  r.kernel_dim = f.A.matrix().cols() == 0 ? 0 : null_basis(f.A.matrix(), tol).cols();
  r.injective = r.kernel_dim == 0;
  r.a_indices = space_indices(f.A_space, tol);
  r.c_indices = hermitian_indices(c, tol);
  r.index_equal = r.a_indices.plus == r.c_indices.h_plus && r.a_indices.minus == r.c_indices.h_minus;
  return r;
}

struct KeythReport {
  double residual = 0.0;  // |C - T^H J_A T| / |C|
  bool residual_ok = false;
  bool t_injective = false;
  bool t_surjective = false;
  IndexTriple c_indices;
  IndexTriple ja_indices;
  bool indices_equal = false;

  // Graph-representation pipeline on 𝒜 = (K, J_A).
  std::size_t graph_dim_plus = 0;   // dim M+
  std::size_t graph_dim_minus = 0;  // dim M-
  bool dims_bounded = false;        // dim M+- <= ind+- 𝒜
  bool compatible = false;
  bool extension_ok = false;
  std::size_t defect_rank_plus = 0;
  std::size_t defect_rank_minus = 0;
  bool dense = false;               // defect ranks reach ind+- 𝒜
  std::string pipeline_error;

  bool passed() const {
    return residual_ok && t_injective && t_surjective && indices_equal && dims_bounded && compatible &&
           extension_ok && dense;
  }
};

/// Checks h+-(C) = h+-(J_A) for C = T^H J_A T on a Hilbert space and runs the
/// graph-representation / extension pipeline behind it. Throws
/// PreconditionFailed when C is not a Hilbert-space operator with zero kernel.
inline KeythReport keyth_verify(const KOperator& c, const SignatureFactorization& s, const Tolerance& tol = {}) {
  require_endomorphism(c, "keyth_verify");
  std::string failed;
  if (!c.domain().is_hilbert(tol)) failed += "C must act on a Hilbert space; ";
  if (c.domain().dim() > 0 && null_basis(c.matrix(), tol).cols() > 0) failed += "ker C must be {0}; ";
  if (!failed.empty()) throw Error(ErrorKind::PreconditionFailed, failed);
  if (s.T.domain().dim() != c.domain().dim()) throw Error(ErrorKind::DimensionMismatch, "T must act on C's space");
  require_selfadjoint(c, tol);

  KeythReport r;
  const Matrix& t = s.T.matrix();
  const Matrix& ja = s.J_A.matrix();
  const double cn = norm2(c.matrix());
  const double abs_res = norm2(c.matrix() - t.adjoint() * ja * t);
  r.residual = cn > 0.0 ? abs_res / cn : abs_res;
  r.residual_ok = r.residual <= tol.residual_tol;
  const std::size_t rank_t = t.empty() ? 0 : rank(t, tol);
  r.t_injective = rank_t == t.cols();
  r.t_surjective = rank_t == t.rows();

  r.c_indices = hermitian_indices(c, tol);
  const Inertia ja_in = inertia(ja, tol);
  r.ja_indices = {ja_in.plus, ja_in.minus, ja_in.zero};
  r.indices_equal = r.c_indices == r.ja_indices;

  try {
    const KreinSpace a_space = KreinSpace::make(ja, tol);
    const auto spec = detail::signed_spectrum(c, tol);
    const std::size_t n = c.domain().dim();
    const Matrix h_plus = spec.vectors.block(0, 0, n, spec.indices.h_plus);
    const Matrix h_minus = spec.vectors.block(0, spec.indices.h_plus, n, spec.indices.h_minus);
    const GraphRep gp = graph_rep(Subspace::span(a_space, t * h_plus, tol), GraphSign::plus, tol);
    const GraphRep gm = graph_rep(Subspace::span(a_space, t * h_minus, tol), GraphSign::minus, tol);
    r.graph_dim_plus = gp.dim();
    r.graph_dim_minus = gm.dim();
    r.dims_bounded = gp.dim() <= gp.frame.plus && gm.dim() <= gp.frame.minus;
    r.compatible = check_compatibility(gp, gm, tol);
    const MaximalPair pair = phillips_extend(gp, gm, tol);
    r.extension_ok = pair.G_tilde_plus.contains(gp.represented(tol), tol) &&
                     pair.G_tilde_minus.contains(gm.represented(tol), tol);
    const auto [dp, dm] = defect_ranks(pair, gp, gm, tol);
    r.defect_rank_plus = dp;
    r.defect_rank_minus = dm;
    r.dense = dp == gp.frame.plus && dm == gp.frame.minus;
  } catch (const Error& e) {
    r.pipeline_error = e.what();
  }
  return r;
}

inline ContainedSpace contained_space(const KOperator& c, const Tolerance& tol = {}) {
  const auto f = bk_factorize(c, tol);
  const Matrix& a = f.A.matrix();
  if (a.cols() == 0) return {Matrix(c.domain().dim(), 0), Matrix(0, 0)};
  const Matrix basis = range_basis(a, tol);
  // In the coordinates y = R x of ran A, with R = basis^H A, the transferred
  // form is R^-H J_𝒜 R^-1.
  const Matrix r_inv = inverse(basis.adjoint() * a, tol);
  return {basis, hermitian_part(r_inv.adjoint() * f.A_space.J() * r_inv)};
}

}  // namespace krein
