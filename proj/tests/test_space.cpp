#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "krein/genrand.hpp"
#include "krein/space.hpp"
#include "oracle.hpp"

using namespace krein;

namespace {

const Tolerance kTol;
const KreinSpace kSplit11 = KreinSpace::split(1, 1);
const Matrix kRot{{0, 1}, {-1, 0}};  // selfadjoint on (C^2, diag(1,-1)): J C is the flip

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidInput;
}

Subspace span1(const KreinSpace& h, std::initializer_list<cplx> v) { return Subspace::span(h, Matrix::column(v)); }

}  // namespace

TEST(KreinSpace, MakeAndIndices) {
  EXPECT_EQ(space_indices(KreinSpace::hilbert(3)), (SpaceIndices{3, 0}));
  EXPECT_EQ(space_indices(KreinSpace::make(Matrix::diagonal({1, -1}))), (SpaceIndices{1, 1}));
  EXPECT_EQ(space_indices(KreinSpace::make(Matrix{{0, 1}, {1, 0}})), (SpaceIndices{1, 1}));
  EXPECT_TRUE(KreinSpace::hilbert(3).is_hilbert());
  EXPECT_FALSE(kSplit11.is_hilbert());
  EXPECT_EQ(KreinSpace::hilbert(0).dim(), 0u);
}

TEST(KreinSpace, RejectsNonSymmetries) {
  EXPECT_EQ(kind_of([] { KreinSpace::make(Matrix{{0, 1}, {0, 0}}); }), ErrorKind::NotSymmetry);
  EXPECT_EQ(kind_of([] { KreinSpace::make(Matrix::diagonal({1, 2})); }), ErrorKind::NotSymmetry);
  EXPECT_EQ(kind_of([] { KreinSpace::make(Matrix(2, 3)); }), ErrorKind::NotSymmetry);
}

TEST(KreinSpace, IndicesInvariantUnderUnitaryChange) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    Generator g({.seed = s, .dim_min = 1, .dim_max = 8});
    const auto h = g.space();
    const auto idx = space_indices(h);
    EXPECT_EQ(idx.plus + idx.minus, h.dim());
    const Matrix u = g.unitary(h.dim());
    const auto moved = KreinSpace::make(hermitian_part(u.adjoint() * h.J() * u));
    EXPECT_EQ(space_indices(moved), idx);
  }
}

TEST(KOperator, ShapeChecked) {
  EXPECT_EQ(kind_of([] { KOperator(KreinSpace::hilbert(2), KreinSpace::hilbert(3), Matrix(2, 2)); }),
            ErrorKind::DimensionMismatch);
}

TEST(KAdjoint, Examples) {
  const auto h = KreinSpace::hilbert(2);
  const Matrix a{{1, cplx(0, 2)}, {3, 4}};
  EXPECT_TRUE(k_adjoint(KOperator(h, a)).matrix() == a.adjoint());
  EXPECT_TRUE(k_adjoint(KOperator(kSplit11, Matrix::identity(2))).matrix() == Matrix::identity(2));
  const Matrix expected{{0, 0}, {-1, 0}};
  EXPECT_TRUE(k_adjoint(KOperator(kSplit11, Matrix{{0, 1}, {0, 0}})).matrix() == expected);
}

TEST(KAdjoint, InvolutionAndDefiningIdentity) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    Generator g({.seed = 40 + s});
    const auto h = g.space();
    const auto k = g.space();
    const KOperator a(h, k, g.gaussian(k.dim(), h.dim(), Stream::auxiliary));
    const double an = norm2(a.matrix());
    EXPECT_LE(norm2(k_adjoint(k_adjoint(a)).matrix() - a.matrix()), kTol.residual_tol * an);
    const Matrix f = g.gaussian(h.dim(), 1, Stream::auxiliary);
    const Matrix y = g.gaussian(k.dim(), 1, Stream::auxiliary);
    // <A f, y>_K = y^H J_K A f  and  <f, A* y>_H = (A* y)^H J_H f.
    const cplx lhs = (y.adjoint() * k.J() * a.matrix() * f)(0, 0);
    const cplx rhs = ((k_adjoint(a).matrix() * y).adjoint() * h.J() * f)(0, 0);
    EXPECT_LE(std::abs(lhs - rhs), kTol.residual_tol * an * f.frobenius_norm() * y.frobenius_norm());
  }
}

TEST(Compose, RejectsMismatchedSpaces) {
  const KOperator a(KreinSpace::hilbert(2), Matrix::identity(2));
  const KOperator b(kSplit11, Matrix::identity(2));
  EXPECT_EQ(kind_of([&] { compose(a, b); }), ErrorKind::DimensionMismatch);
}

TEST(CInner, Examples) {
  const auto h = KreinSpace::hilbert(2);
  const std::vector<cplx> f{1.0, cplx(0, 1)}, g{2.0, 3.0};
  const cplx euclid = std::conj(g[0]) * f[0] + std::conj(g[1]) * f[1];
  EXPECT_EQ(c_inner(KOperator(h, Matrix::identity(2)), f, g), euclid);
  EXPECT_EQ(c_inner(KOperator(h, Matrix(2, 2)), f, g), cplx(0.0));
  const std::vector<cplx> ones{1.0, 1.0};
  EXPECT_EQ(c_inner(KOperator(kSplit11, kRot), ones, ones), cplx(2.0));
  const std::vector<cplx> bad{1.0};
  EXPECT_EQ(kind_of([&] { c_inner(KOperator(h, Matrix::identity(2)), bad, g); }), ErrorKind::DimensionMismatch);
}

TEST(CInner, QuadraticFormIsReal) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    Generator g({.seed = 200 + s});
    const auto h = g.space();
    const auto c = g.selfadjoint(h);
    const Matrix f = g.gaussian(h.dim(), 1, Stream::auxiliary);
    const cplx q = c_inner(c, f.data(), f.data());
    EXPECT_LE(std::abs(q.imag()), kTol.residual_tol * std::max(norm2(c.matrix()), 1.0) * std::norm(f.frobenius_norm()));
  }
}

TEST(Selfadjoint, Examples) {
  EXPECT_TRUE(is_selfadjoint(KOperator(kSplit11, Matrix::identity(2))));
  EXPECT_FALSE(is_selfadjoint(KOperator(kSplit11, Matrix{{0, 1}, {1, 0}})));
  EXPECT_TRUE(is_selfadjoint(KOperator(kSplit11, kRot)));
  EXPECT_FALSE(is_selfadjoint(KOperator(KreinSpace::hilbert(2), kSplit11, Matrix::identity(2))));
  EXPECT_EQ(kind_of([] { require_selfadjoint(KOperator(kSplit11, Matrix{{0, 1}, {1, 0}}), kTol); }),
            ErrorKind::NotSelfadjoint);
}

TEST(Selfadjoint, GeneratedOperatorsAreSelfadjoint) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    Generator g({.seed = 300 + s});
    const auto h = g.space();
    EXPECT_TRUE(is_selfadjoint(g.selfadjoint(h)));
  }
}

TEST(Subspace, SpanOrthonormalizes) {
  const auto h = KreinSpace::hilbert(3);
  const Subspace m = Subspace::span(h, Matrix{{1, 2}, {1, 2}, {0, 0}});
  EXPECT_EQ(m.dim(), 1u);
  EXPECT_LE(norm2(m.basis().adjoint() * m.basis() - Matrix::identity(1)), kTol.residual_tol);
  EXPECT_EQ(Subspace::zero(h).dim(), 0u);
  EXPECT_EQ(kind_of([&] { Subspace::span(h, Matrix(2, 1)); }), ErrorKind::DimensionMismatch);
}

TEST(Classify, Examples) {
  const auto h = KreinSpace::hilbert(3);
  const Subspace m = span1(h, {1, 2, 3});
  EXPECT_EQ(classify_subspace(KOperator(h, Matrix::identity(3)), m), SubspaceClass::StrictlyPositive);
  EXPECT_EQ(classify_subspace(KOperator(h, Matrix(3, 3)), m), SubspaceClass::Neutral);
  const KOperator rot(kSplit11, kRot);
  const Subspace diag = span1(kSplit11, {1, 1});
  EXPECT_EQ(classify_subspace(rot, diag), SubspaceClass::StrictlyPositive);
  EXPECT_NEAR(c_gram(rot, diag)(0, 0).real(), 1.0, 1e-15);  // (1,1)/sqrt2 normalizes the Gram [2] to [1]
  EXPECT_EQ(classify_subspace(rot, span1(kSplit11, {1, -1})), SubspaceClass::StrictlyNegative);
  EXPECT_EQ(classify_subspace(rot, span1(kSplit11, {1, 0})), SubspaceClass::Neutral);
}

TEST(Classify, SemidefiniteAndIndefinite) {
  const auto h = KreinSpace::hilbert(3);
  const KOperator c(h, Matrix::diagonal({1, 0, -1}));
  const auto span2 = [&](Matrix v) { return Subspace::span(h, v); };
  EXPECT_EQ(classify_subspace(c, span2(Matrix{{1, 0}, {0, 1}, {0, 0}})), SubspaceClass::Nonnegative);
  EXPECT_EQ(classify_subspace(c, span2(Matrix{{0, 0}, {1, 0}, {0, 1}})), SubspaceClass::Nonpositive);
  EXPECT_EQ(classify_subspace(c, span2(Matrix{{1, 0}, {0, 0}, {0, 1}})), SubspaceClass::Indefinite);
  EXPECT_TRUE(is_strictly_positive(c, Subspace::zero(h)));
  EXPECT_TRUE(is_strictly_negative(c, Subspace::zero(h)));
}

TEST(Classify, AgreesWithOracleGramInertia) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    Generator g({.seed = 400 + s, .kernel_prob = 0.0});
    const auto h = g.space();
    const auto c = g.selfadjoint(h);
    const std::size_t k = 1 + s % h.dim();
    const Subspace m = Subspace::span(h, g.gaussian(h.dim(), k, Stream::auxiliary));
    const auto in = oracle::inertia(hermitian_part(c_gram(c, m)));
    const auto cls = classify_subspace(c, m);
    if (in.plus == m.dim()) EXPECT_EQ(cls, SubspaceClass::StrictlyPositive);
    if (in.minus == m.dim()) EXPECT_EQ(cls, SubspaceClass::StrictlyNegative);
    if (in.plus > 0 && in.minus > 0) EXPECT_EQ(cls, SubspaceClass::Indefinite);
  }
}

TEST(COrthogonal, Examples) {
  const auto h = KreinSpace::hilbert(2);
  const Subspace e1 = span1(h, {1, 0}), e2 = span1(h, {0, 1}), d = span1(h, {1, 1});
  EXPECT_TRUE(c_orthogonal(KOperator(h, Matrix(2, 2)), d, d));
  EXPECT_TRUE(c_orthogonal(KOperator(h, Matrix::identity(2)), e1, e2));
  EXPECT_FALSE(c_orthogonal(KOperator(h, Matrix::identity(2)), e1, d));
  EXPECT_TRUE(c_orthogonal(KOperator(kSplit11, kRot), span1(kSplit11, {1, 1}), span1(kSplit11, {1, -1})));
}
