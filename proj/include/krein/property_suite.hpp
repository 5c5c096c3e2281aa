#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "krein/bkfact.hpp"
#include "krein/decomp.hpp"
#include "krein/densela.hpp"
#include "krein/genrand.hpp"
#include "krein/hermdex.hpp"
#include "krein/io.hpp"
#include "krein/phillips.hpp"
#include "krein/space.hpp"

namespace krein::suite {

struct SuiteOptions {
  std::uint64_t seed = 0;
  std::size_t count = 1000;
  std::size_t max_dim = 8;
  Tolerance tol;
  double kernel_prob = 0.3;
  // Negative control: corrupts the factor space produced in the forward
  // factorization property so the suite must report violations.
  bool inject_fault = false;
};

struct PropertyOutcome {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> examples;  // first few failure descriptions
  std::map<std::string, std::size_t> counters;

  bool passed() const { return failures == 0; }

  void fail(std::size_t case_index, const std::string& why) {
    ++failures;
    if (examples.size() < 5) examples.push_back("case " + std::to_string(case_index) + ": " + why);
  }
};

struct SuiteReport {
  SuiteOptions options;
  std::vector<PropertyOutcome> properties;

  bool passed() const {
    return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.passed(); });
  }
};

/// Independent generator per (property, case) so cases can be run in any
/// order, or alone, with identical draws.
inline Generator case_generator(const SuiteOptions& o, std::uint64_t property_id, std::size_t case_index,
                                std::size_t dim_min = 1) {
  GenConfig cfg;
  cfg.seed = derive_seed(o.seed, property_id, case_index);
  cfg.dim_min = std::min(dim_min, o.max_dim);
  cfg.dim_max = o.max_dim;
  cfg.kernel_prob = o.kernel_prob;
  return Generator(cfg);
}

template <class Body>
PropertyOutcome run_property(const std::string& name, std::size_t count, Body body) {
  PropertyOutcome out;
  out.name = name;
  for (std::size_t i = 0; i < count; ++i) {
    ++out.cases;
    try {
      body(i, out);
    } catch (const Error& e) {
      out.fail(i, e.what());
    }
  }
  return out;
}

inline double relative_norm(const Matrix& residual, double scale) {
  const double r = norm2(residual);
  return scale > 0.0 ? r / scale : r;
}

// hermitian_indices(X* C X) = hermitian_indices(C), exact integers.
inline PropertyOutcome congruence_invariance(const SuiteOptions& o, std::size_t count) {
  return run_property("congruence_invariance", count, [&](std::size_t i, PropertyOutcome& out) {
    auto gen = case_generator(o, 1, i);
    const KreinSpace k = gen.space();
    const KOperator c = gen.selfadjoint(k);
    const std::size_t plus = gen.stream(Stream::space).index(k.dim() + 1);
    const KreinSpace h = gen.space(plus, k.dim() - plus);
    const Congruence x = gen.invertible(h, k);
    const auto before = hermitian_indices(c, o.tol);
    const auto after = hermitian_indices(transport(c, x, o.tol), o.tol);
    if (before.h_zero > 0) ++out.counters["kernel_cases"];
    if (!(before == after)) out.fail(i, "indices changed under congruence");
  });
}

/// Constructive congruence search that never looks at sign counts: aligns the
/// scaled eigenframes of JA and JB (ascending order) through `restarts`
/// unitary mixings and returns the best relative residual found.
inline double congruence_search(const KOperator& a, const KOperator& b, std::size_t restarts, Generator& gen,
                                const Tolerance& tol) {
  const Matrix da = hermitian_part(hermitian_representative(a));
  const Matrix db = hermitian_part(hermitian_representative(b));
  const std::size_t n = da.rows();
  auto frame = [&](const Matrix& d) {
    const auto e = herm_eig(d, tol);
    const double cut = 1e-9 * std::max(spectral_radius(e.values), 1e-300);
    Matrix y = e.vectors.adjoint();
    for (std::size_t k = 0; k < n; ++k) {
      const double root = std::abs(e.values[k]) > cut ? std::sqrt(std::abs(e.values[k])) : 1.0;
      for (std::size_t j = 0; j < n; ++j) y(k, j) *= root;
    }
    return y;
  };
  const Matrix ya = frame(da);
  const Matrix yb_inv = inverse(frame(db), tol);
  const double scale = std::max(norm2(da), norm2(db));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    const Matrix q = r == 0 ? Matrix::identity(n) : gen.unitary(n);
    const Matrix x = yb_inv * q * ya;
    best = std::min(best, relative_norm(da - x.adjoint() * db * x, scale));
  }
  return best;
}

inline PropertyOutcome sylvester_classification(const SuiteOptions& o, std::size_t count) {
  return run_property("sylvester_classification", count, [&](std::size_t i, PropertyOutcome& out) {
    auto gen = case_generator(o, 2, i);
    const KreinSpace k = gen.space();
    const KOperator b = gen.selfadjoint(k);
    const std::size_t plus = gen.stream(Stream::space).index(k.dim() + 1);
    const KreinSpace h = gen.space(plus, k.dim() - plus);
    const bool make_congruent = gen.stream(Stream::auxiliary).bernoulli(0.5);
    const KOperator a = make_congruent ? transport(b, gen.invertible(h, k), o.tol) : gen.selfadjoint(h);
    const bool verdict = is_congruent(a, b, o.tol);
    if (verdict) {
      ++out.counters["congruent"];
      const double res = congruence_residual(a, b, build_congruence(a, b, o.tol));
      if (res > 1e-8) out.fail(i, "predicted congruent but residual " + std::to_string(res));
    } else {
      ++out.counters["not_congruent"];
      const double res = congruence_search(a, b, 20, gen, o.tol);
      if (res <= 1e-6) out.fail(i, "predicted non-congruent but search reached " + std::to_string(res));
    }
  });
}

inline PropertyOutcome canonical_roundtrip(const SuiteOptions& o, std::size_t count) {
  return run_property("canonical_roundtrip", count, [&](std::size_t i, PropertyOutcome& out) {
    auto gen = case_generator(o, 3, i);
    const KreinSpace h = gen.space();
    const KOperator c = gen.selfadjoint(h);
    const auto cf = canonical_form(c, o.tol);
    const Matrix rebuilt = k_adjoint(cf.X.op()).matrix() * cf.D.matrix() * cf.X.matrix();
    if (relative_norm(c.matrix() - rebuilt, norm2(c.matrix())) > o.tol.residual_tol)
      out.fail(i, "C != X* D X");
  });
}

inline PropertyOutcome decomposition_conditions(const SuiteOptions& o, std::size_t count) {
  return run_property("decomposition_conditions", count, [&](std::size_t i, PropertyOutcome& out) {
    auto gen = case_generator(o, 4, i);
    const KreinSpace h = gen.space();
    const KOperator c = gen.selfadjoint(h);
    const auto d = decompose(c, o.tol);
    const auto report = validate(c, d, o.tol);
    if (!report.passed()) out.fail(i, "validation failed");
    const auto q = projections(c, d, o.tol);
    const std::size_t n = h.dim();
    Matrix sum(n, n);
    for (const KOperator* p : {&q.Q_plus, &q.Q_minus, &q.Q_zero}) {
      const Matrix& m = p->matrix();
      if (norm2(m * m - m) > 1e-8 * std::max(1.0, norm2(m))) out.fail(i, "projection not idempotent");
      sum += m;
    }
    if (norm2(sum - Matrix::identity(n)) > 1e-8) out.fail(i, "projections do not sum to I");
    if (report.indices.h_zero > 0) ++out.counters["kernel_cases"];
  });
}

inline PropertyOutcome factorization_forward(const SuiteOptions& o, std::size_t count) {
  return run_property("factorization_forward", count, [&](std::size_t i, PropertyOutcome& out) {
    auto gen = case_generator(o, 5, i);
    const KreinSpace h = gen.space();
    const KOperator c = gen.selfadjoint(h);
    auto f = bk_factorize(c, o.tol);
    if (o.inject_fault && f.A_space.dim() > 0) {
      const auto idx = space_indices(f.A_space, o.tol);
      if (idx.plus != idx.minus) {
        f.A_space = KreinSpace::split(idx.minus, idx.plus);
        f.A = KOperator(f.A_space, h, f.A.matrix());
      }
    }
    const auto r = bk_verify(c, f, o.tol);
    if (r.c_indices.h_zero > 0) ++out.counters["kernel_cases"];
    if (!r.residual_ok) out.fail(i, "residual " + std::to_string(r.residual));
    if (!r.injective) out.fail(i, "factor has a kernel");
    if (!r.index_equal) out.fail(i, "ind(A) != h(C)");
  });
}

/// All (n, p, q) with 1 <= n <= max_dim and p + q <= n, in a fixed order.
inline std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> signature_splits(std::size_t max_dim) {
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> v;
  for (std::size_t n = 1; n <= max_dim; ++n)
    for (std::size_t m = 0; m <= n; ++m)
      for (std::size_t p = 0; p <= m; ++p) v.emplace_back(n, p, m - p);
  return v;
}

inline PropertyOutcome factorization_converse(const SuiteOptions& o, std::size_t count) {
  const auto splits = signature_splits(std::max<std::size_t>(o.max_dim, 1));
  std::vector<bool> seen(splits.size(), false);
  auto out = run_property("factorization_converse", count, [&](std::size_t i, PropertyOutcome& pout) {
    auto gen = case_generator(o, 6, i);
    const auto [n, p, q] = splits[i % splits.size()];
    seen[i % splits.size()] = true;
    const std::size_t hp = gen.stream(Stream::space).index(n + 1);
    const KreinSpace h = gen.space(hp, n - hp);
    const KreinSpace a_space = gen.space(p, q);
    const KOperator a = gen.injective_factor(a_space, h);
    const KOperator c = factor_product(a);
    const auto idx = hermitian_indices(c, o.tol);
    const IndexTriple expected{p, q, n - p - q};
    if (!(idx == expected)) pout.fail(i, "h(AA*) differs from ind(𝒜)");
  });
  out.counters["splits_total"] = splits.size();
  out.counters["splits_covered"] = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true));
  return out;
}

/// One fixed C, `count` re-factorizations A U with U J-unitary on 𝒜.
inline PropertyOutcome refactorization_invariance(const SuiteOptions& o, std::size_t count) {
  auto gen = case_generator(o, 7, 0, std::min<std::size_t>(4, o.max_dim));
  const KreinSpace h = gen.space();
  const KOperator c = gen.selfadjoint(h);
  const auto f = bk_factorize(c, o.tol);
  return run_property("refactorization_invariance", count, [&](std::size_t i, PropertyOutcome& out) {
    auto g = case_generator(o, 7, i + 1);
    const Matrix u = g.j_unitary(f.A_space.J());
    const BKFactorization alt{f.A_space, KOperator(f.A_space, h, f.A.matrix() * u)};
    const auto r = bk_verify(c, alt, o.tol);
    if (!r.passed()) out.fail(i, "re-factorization failed verification");
    if (norm2(u - Matrix::identity(u.rows())) > 1e-3) ++out.counters["distinct"];
  });
}

/// Random signature factorization C = T^H J_A T of a Hilbert-space C with
/// zero kernel: T = Q V |C|^(1/2), J_A = Q J_C Q^H with V J_C-unitary.
inline SignatureFactorization random_signature_factorization(const KOperator& c, Generator& gen,
                                                             const Tolerance& tol) {
  const auto s = detail::signed_spectrum(c, tol);
  const std::size_t n = c.domain().dim();
  std::vector<double> roots(n), signs(n);
  for (std::size_t k = 0; k < n; ++k) {
    roots[k] = std::sqrt(std::abs(s.values[k]));
    signs[k] = k < s.indices.h_plus ? 1.0 : -1.0;
  }
  const Matrix& w = s.vectors;
  const Matrix root = w * Matrix::diagonal(roots) * w.adjoint();
  const Matrix jc = hermitian_part(w * Matrix::diagonal(signs) * w.adjoint());
  const Matrix v = gen.j_unitary(jc);
  const Matrix q = gen.unitary(n);
  return SignatureFactorization::make(hermitian_part(q * jc * q.adjoint()), q * v * root, tol);
}

inline PropertyOutcome signature_factorization(const SuiteOptions& o, std::size_t count) {
  return run_property("signature_factorization", count, [&](std::size_t i, PropertyOutcome& out) {
    auto gen = case_generator(o, 8, i);
    const std::size_t n = gen.dimension();
    const KOperator c = gen.selfadjoint(KreinSpace::hilbert(n), 0);
    const auto s = random_signature_factorization(c, gen, o.tol);
    const auto r = keyth_verify(c, s, o.tol);
    if (!r.pipeline_error.empty()) out.fail(i, "pipeline: " + r.pipeline_error);
    if (!r.indices_equal) out.fail(i, "h(C) != h(J_A)");
    if (!r.dims_bounded) out.fail(i, "dim M exceeds ind 𝒜");
    if (!r.passed()) out.fail(i, "verification failed");
  });
}

inline PropertyOutcome phillips_extension(const SuiteOptions& o, std::size_t count) {
  return run_property("phillips_extension", count, [&](std::size_t i, PropertyOutcome& out) {
    auto gen = case_generator(o, 9, i);
    const KreinSpace a = gen.space();
    const SplitFrame frame = split_frame(a, o.tol);
    const std::size_t p = frame.plus;
    const std::size_t q = frame.minus;
    const Matrix g0 = gen.contraction(q, p);
    const std::size_t kp = gen.stream(Stream::auxiliary).index(p + 1);
    const std::size_t km = gen.stream(Stream::auxiliary).index(q + 1);
    const Matrix mp = gen.orthonormal_columns(p, kp);
    const Matrix mm = gen.orthonormal_columns(q, km);
    const Subspace sp = Subspace::span(a, frame.from_split(vcat(mp, g0 * mp)), o.tol);
    const Subspace sm = Subspace::span(a, frame.from_split(vcat(g0.adjoint() * mm, mm)), o.tol);
    const GraphRep gp = graph_rep(sp, GraphSign::plus, o.tol);
    const GraphRep gm = graph_rep(sm, GraphSign::minus, o.tol);
    const MaximalPair pair = phillips_extend(gp, gm, o.tol);
    const Matrix& g = pair.G;
    const double gn = norm2(g);
    if (gn > 1.0 + 1e-8) out.fail(i, "extension is not a contraction");
    if (norm2(g * gp.domain - gp.angle) > 1e-8) out.fail(i, "G restricted to M+ differs from G+");
    if (norm2(g.adjoint() * gm.domain - gm.angle) > 1e-8) out.fail(i, "G^H restricted to M- differs from G-");
    if (!pair.G_tilde_plus.contains(sp, o.tol) || !pair.G_tilde_minus.contains(sm, o.tol))
      out.fail(i, "maximal graphs do not contain the inputs");
    const Matrix cross = pair.G_tilde_minus.basis().adjoint() * a.J() * pair.G_tilde_plus.basis();
    if (norm2(cross) > 1e-8) out.fail(i, "maximal pair is not orthogonal");
    if (pair.G_tilde_plus.dim() != p || pair.G_tilde_minus.dim() != q) out.fail(i, "maximal pair has wrong dimensions");
    if (gn > std::max(norm2(gp.angle), norm2(gm.angle)) + o.tol.residual_tol)
      out.fail(i, "norm exceeds the Parrott bound");
    if (norm2(g0) >= 1.0 - 1e-12) ++out.counters["isometric_direction"];
  });
}

/// |D|^(1/2) J_D |D|^(1/2) = D and |D|^(1/2) H+- within H+-, on Hilbert D.
inline PropertyOutcome modulus_identities(const SuiteOptions& o, std::size_t count) {
  return run_property("modulus_identities", count, [&](std::size_t i, PropertyOutcome& out) {
    auto gen = case_generator(o, 10, i);
    const std::size_t n = gen.dimension();
    const KOperator dop = gen.selfadjoint(KreinSpace::hilbert(n));
    const Matrix& d = dop.matrix();
    const Matrix modulus = psd_sqrt(hermitian_part(d * d), o.tol);
    const Matrix root = psd_sqrt(modulus, o.tol);
    const auto e = herm_eig(d, o.tol);
    const double band = o.tol.rank_tol * spectral_radius(e.values);
    const Matrix jd = spectral_map(e, [&](double x) { return x > band ? 1.0 : (x < -band ? -1.0 : 0.0); });
    const double dn = norm2(d);
    if (norm2(root * jd * root - d) > 1e-8 * dn) out.fail(i, "|D|^1/2 J_D |D|^1/2 != D");
    std::vector<std::size_t> pos, neg;
    for (std::size_t k = 0; k < n; ++k) {
      if (e.values[k] > band) pos.push_back(k);
      if (e.values[k] < -band) neg.push_back(k);
    }
    for (const auto* idx : {&pos, &neg}) {
      if (idx->empty()) continue;
      const Subspace s = Subspace::span(KreinSpace::hilbert(n), e.vectors.select_cols(*idx), o.tol);
      if (s.distance_of(root * s.basis()) > 1e-8 * std::max(1.0, norm2(root))) out.fail(i, "spectral subspace not invariant");
    }
  });
}

inline PropertyOutcome adjoint_identity(const SuiteOptions& o, std::size_t count) {
  return run_property("adjoint_identity", count, [&](std::size_t i, PropertyOutcome& out) {
    auto gen = case_generator(o, 11, i);
    const KreinSpace h = gen.space();
    const KreinSpace k = gen.space();
    const KOperator a(h, k, gen.gaussian(k.dim(), h.dim(), Stream::auxiliary));
    const KOperator astar = k_adjoint(a);
    if (norm2(k_adjoint(astar).matrix() - a.matrix()) > o.tol.residual_tol * std::max(1.0, norm2(a.matrix())))
      out.fail(i, "adjoint is not an involution");
    const Matrix f = gen.gaussian(h.dim(), 1, Stream::auxiliary);
    const Matrix g = gen.gaussian(k.dim(), 1, Stream::auxiliary);
    const cplx lhs = (g.adjoint() * k.J() * a.matrix() * f)(0, 0);
    const cplx rhs = ((astar.matrix() * g).adjoint() * h.J() * f)(0, 0);
    const double scale = norm2(a.matrix()) * f.frobenius_norm() * g.frobenius_norm();
    if (std::abs(lhs - rhs) > o.tol.residual_tol * std::max(scale, 1e-300)) out.fail(i, "<Af,g> != <f,A*g>");
  });
}

inline SuiteReport run_suite(const SuiteOptions& o) {
  SuiteReport r;
  r.options = o;
  const std::size_t n = o.count;
  r.properties.push_back(congruence_invariance(o, n));
  r.properties.push_back(sylvester_classification(o, n));
  r.properties.push_back(canonical_roundtrip(o, n));
  r.properties.push_back(decomposition_conditions(o, n));
  r.properties.push_back(factorization_forward(o, n));
  r.properties.push_back(factorization_converse(o, n));
  r.properties.push_back(refactorization_invariance(o, std::min<std::size_t>(n, 50)));
  r.properties.push_back(signature_factorization(o, n));
  r.properties.push_back(phillips_extension(o, n));
  r.properties.push_back(modulus_identities(o, n));
  r.properties.push_back(adjoint_identity(o, n));
  return r;
}

inline io::json to_json(const SuiteReport& r) {
  io::json props = io::json::array();
  for (const auto& p : r.properties) {
    io::json counters = io::json::object();
    for (const auto& [k, v] : p.counters) counters[k] = v;
    props.push_back({{"name", p.name},
                     {"cases", p.cases},
                     {"failures", p.failures},
                     {"passed", p.passed()},
                     {"examples", p.examples},
                     {"counters", counters}});
  }
  return {{"schema_version", io::kSchemaVersion},
          {"command", "property-suite"},
          {"seed", r.options.seed},
          {"count", r.options.count},
          {"max_dim", r.options.max_dim},
          {"rank_tol", r.options.tol.rank_tol},
          {"residual_tol", r.options.tol.residual_tol},
          {"properties", props},
          {"passed", r.passed()}};
}

}  // namespace krein::suite
