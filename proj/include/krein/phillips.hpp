#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "krein/densela.hpp"
#include "krein/error.hpp"
#include "krein/space.hpp"

namespace krein {

/// Unitary U with J = U diag(I_plus, -I_minus) U^H. Split coordinates of a
/// vector x are U^H x: the first `plus` entries live in A+, the rest in |A-|.
struct SplitFrame {
  Matrix U;
  std::size_t plus = 0;
  std::size_t minus = 0;

  std::size_t dim() const { return plus + minus; }
  Matrix to_split(const Matrix& x) const { return U.adjoint() * x; }
  Matrix from_split(const Matrix& y) const { return U * y; }
};

inline SplitFrame split_frame(const KreinSpace& space, const Tolerance& tol = {}) {
  const auto e = herm_eig(space.J(), tol);
  std::vector<std::size_t> pos, neg;
  for (std::size_t k = 0; k < e.values.size(); ++k) (e.values[k] > 0.0 ? pos : neg).push_back(k);
  std::vector<std::size_t> order = pos;
  order.insert(order.end(), neg.begin(), neg.end());
  return {e.vectors.select_cols(order), pos.size(), neg.size()};
}

enum class GraphSign { plus, minus };

/// A nonnegative (plus) or nonpositive (minus) subspace written as the graph
/// {x + G x : x in M} over its projection M onto A+ (resp. |A-|).
struct GraphRep {
  GraphSign sign = GraphSign::plus;
  KreinSpace space;
  SplitFrame frame;
  Matrix domain;  // orthonormal basis of M in A+ (plus x k) or |A-| (minus x k) coordinates
  Matrix angle;   // columns G(domain_j), in the opposite block's coordinates

  std::size_t dim() const { return domain.cols(); }

  /// G acting on the whole block, extended by zero on the complement of M.
  Matrix angle_operator() const { return angle * domain.adjoint(); }

  /// The graph subspace in the original coordinates of the space.
  Subspace represented(const Tolerance& tol = {}) const {
    const Matrix split = sign == GraphSign::plus ? vcat(domain, angle) : vcat(angle, domain);
    return Subspace::span(space, frame.from_split(split), tol);
  }

  /// M embedded in the original coordinates.
  Subspace domain_subspace(const Tolerance& tol = {}) const {
    const Matrix pad = Matrix(sign == GraphSign::plus ? frame.minus : frame.plus, domain.cols());
    const Matrix split = sign == GraphSign::plus ? vcat(domain, pad) : vcat(pad, domain);
    return Subspace::span(space, frame.from_split(split), tol);
  }
};

/// Pair of maximal semidefinite subspaces {x + G x : x in A+} and
/// {G^H y + y : y in |A-|} for a contraction G : A+ -> |A-|.
struct MaximalPair {
  Matrix G;  // minus x plus, split coordinates
  Subspace G_tilde_plus;
  Subspace G_tilde_minus;
  SplitFrame frame;
};

inline GraphRep graph_rep(const Subspace& s, GraphSign sign, const Tolerance& tol = {}) {
  const KreinSpace& space = s.space();
  const auto k = s.dim();
  const auto cls = classify_subspace(KOperator(space, Matrix::identity(space.dim())), s, tol);
  if (sign == GraphSign::plus ? !is_nonnegative(cls) : !is_nonpositive(cls))
    throw Error(ErrorKind::NotSemidefinite,
                std::string("subspace is ") + std::string(to_string(cls)) + ", not " +
                    (sign == GraphSign::plus ? "nonnegative" : "nonpositive"));

  GraphRep g;
  g.sign = sign;
  g.space = space;
  g.frame = split_frame(space, tol);
  const Matrix y = g.frame.to_split(s.basis());
  const std::size_t p = g.frame.plus;
  const std::size_t q = g.frame.minus;
  const Matrix top = y.block(0, 0, p, k);
  const Matrix bottom = y.block(p, 0, q, k);
  const Matrix& projected = sign == GraphSign::plus ? top : bottom;
  const Matrix& other = sign == GraphSign::plus ? bottom : top;

  if (k == 0) {
    g.domain = Matrix(projected.rows(), 0);
    g.angle = Matrix(other.rows(), 0);
    return g;
  }
  if (projected.rows() < k)
    throw Error(ErrorKind::DegenerateProjection, "subspace is larger than the block it projects onto");
  // projected = W diag(sigma) V^H, so G W = other V diag(1/sigma).
  const auto sv = svd(projected, tol);
  if (sv.sigma.back() <= tol.rank_tol)
    throw Error(ErrorKind::DegenerateProjection, "projection onto the definite block loses rank");
  Matrix right = sv.V;
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < right.rows(); ++i) right(i, j) /= sv.sigma[j];
  g.domain = sv.U;
  g.angle = other * right;
  return g;
}

namespace detail {

inline void require_same_frame(const GraphRep& a, const GraphRep& b) {
  if (!(a.space == b.space)) throw Error(ErrorKind::DimensionMismatch, "graph representations live in different spaces");
}

// Defect (I - A^H A)^(1/2) and its pseudo-inverse on the defect range.
struct Defect {
  Matrix root;
  Matrix root_pinv;
};

inline Defect defect(const Matrix& a, const Tolerance& tol) {
  const auto e = herm_eig(hermitian_part(a.adjoint() * a), tol);
  auto d = [](double lambda) { return std::sqrt(std::max(0.0, 1.0 - lambda)); };
  return {spectral_map(e, d), spectral_map(e, [&](double lambda) {
            const double x = d(lambda);
            return x > tol.rank_tol ? 1.0 / x : 0.0;
          })};
}

}  // namespace detail

/// True when the represented subspaces are orthogonal in the Krein inner
/// product: G-^H restricted to M+ agrees with the M- component of G+.
inline bool check_compatibility(const GraphRep& gp, const GraphRep& gm, const Tolerance& tol = {}) {
  if (gp.sign != GraphSign::plus || gm.sign != GraphSign::minus)
    throw Error(ErrorKind::InvalidInput, "expected a plus graph and a minus graph");
  detail::require_same_frame(gp, gm);
  if (gp.dim() == 0 || gm.dim() == 0) return true;
  const Matrix cross = gm.angle.adjoint() * gp.domain - gm.domain.adjoint() * gp.angle;
  return norm2(cross) <= tol.residual_tol;
}

inline MaximalPair maximal_subspaces(const Matrix& g, const KreinSpace& space, const Tolerance& tol = {}) {
  const SplitFrame frame = split_frame(space, tol);
  if (g.rows() != frame.minus || g.cols() != frame.plus)
    throw Error(ErrorKind::DimensionMismatch, "angle operator must map A+ into |A-|");
  if (norm2(g) > 1.0 + tol.residual_tol) throw Error(ErrorKind::NotContraction, "angle operator has norm above 1");
  const Matrix plus_split = vcat(Matrix::identity(frame.plus), g);
  const Matrix minus_split = vcat(g.adjoint(), Matrix::identity(frame.minus));
  return {g, Subspace::span(space, frame.from_split(plus_split), tol),
          Subspace::span(space, frame.from_split(minus_split), tol), frame};
}

/// Extends an orthogonal nonnegative/nonpositive pair to a maximal orthogonal
/// pair. G is assembled in block form over A+ = M+ (+) M+^perp and
/// |A-| = M- (+) M-^perp; the first column is fixed by G+, the first row by
/// G-, and the free corner takes the central Parrott completion -Z A^H Y.
inline MaximalPair phillips_extend(const GraphRep& gp, const GraphRep& gm, const Tolerance& tol = {}) {
  if (!check_compatibility(gp, gm, tol))
    throw Error(ErrorKind::Incompatible, "graph subspaces are not orthogonal in the Krein inner product");
  const std::size_t p = gp.frame.plus;
  const std::size_t q = gp.frame.minus;

  const Matrix& u1 = gp.domain;
  const Matrix& v1 = gm.domain;
  const Matrix u2 = complement_basis(u1, tol);
  const Matrix v2 = complement_basis(v1, tol);

  // Both fixed blocks determine the corner; average the two readings.
  Matrix corner = v1.adjoint() * gp.angle + gm.angle.adjoint() * u1;
  corner *= 0.5;
  const Matrix col_rest = v2.adjoint() * gp.angle;  // C block
  const Matrix row_rest = gm.angle.adjoint() * u2;  // B block

  // Completing at scale gamma = max(|fixed row|, |fixed column|) keeps the
  // result norm-minimal; gamma = 1 is the plain contraction completion.
  const double gamma = std::max(norm2(hcat(corner, row_rest)), norm2(vcat(corner, col_rest)));
  Matrix free_block(col_rest.rows(), row_rest.cols());
  if (gamma > 0.0) {
    const Matrix a = corner * cplx(1.0 / gamma);
    const auto da = detail::defect(a, tol);                 // (I - A^H A)^(1/2)
    const auto da_star = detail::defect(a.adjoint(), tol);  // (I - A A^H)^(1/2)
    const Matrix y = da_star.root_pinv * row_rest * cplx(1.0 / gamma);
    const Matrix z = col_rest * cplx(1.0 / gamma) * da.root_pinv;
    free_block = -(z * a.adjoint() * y) * cplx(gamma);
  }

  Matrix blocks(q, p);
  blocks.set_block(0, 0, corner);
  blocks.set_block(0, u1.cols(), row_rest);
  blocks.set_block(v1.cols(), 0, col_rest);
  blocks.set_block(v1.cols(), u1.cols(), free_block);
  const Matrix g = hcat(v1, v2) * blocks * hcat(u1, u2).adjoint();

  if (norm2(g) > 1.0 + 10.0 * tol.residual_tol)
    throw Error(ErrorKind::ContractionOverflow, "assembled angle operator exceeds norm 1");
  return maximal_subspaces(g, gp.space, Tolerance{tol.rank_tol, 10.0 * tol.residual_tol});
}

/// Ranks of (1 - G^H G) on M+ and (1 - G G^H) on M-; both reach ind+/ind-
/// exactly when the graph pair is dense in the space.
inline std::pair<std::size_t, std::size_t> defect_ranks(const MaximalPair& pair, const GraphRep& gp,
                                                        const GraphRep& gm, const Tolerance& tol = {}) {
  auto count = [&](const Matrix& m) {
    if (m.cols() == 0 || m.rows() == 0) return std::size_t{0};
    const auto s = svd(m, tol);
    return static_cast<std::size_t>(
        std::count_if(s.sigma.begin(), s.sigma.end(), [&](double x) { return x > tol.rank_tol; }));
  };
  const Matrix& g = pair.G;
  const Matrix plus = (Matrix::identity(g.cols()) - g.adjoint() * g) * gp.domain;
  const Matrix minus = (Matrix::identity(g.rows()) - g * g.adjoint()) * gm.domain;
  return {count(plus), count(minus)};
}

}  // namespace krein
