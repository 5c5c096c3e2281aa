// krein-cli: JSON front end for the indefinite-inner-product toolkit.
//
// Exit codes: 0 success, 1 property violation, 2 input or validation error,
// 3 mathematical precondition failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "krein/io.hpp"
#include "krein/krein.hpp"
#include "krein/property_suite.hpp"

namespace {

using krein::Error;
using krein::ErrorKind;
using krein::Matrix;
using krein::io::json;

enum Exit { kOk = 0, kViolation = 1, kInput = 2, kPrecondition = 3 };

struct Globals {
  std::vector<std::string> inputs;
  std::string space_file;
  std::optional<double> tol_rank;
  std::optional<double> tol_res;
  bool machine = false;
};

krein::Tolerance base_tolerance(const Globals& g) {
  krein::Tolerance t;
  if (g.tol_rank) t.rank_tol = *g.tol_rank;
  if (g.tol_res) t.residual_tol = *g.tol_res;
  t.validate();
  return t;
}

struct Loaded {
  krein::Tolerance tol;
  krein::KOperator op;
};

// The file's tolerance block wins over the flags; --space overrides the
// file's J.
Loaded load_problem(const Globals& g, const std::string& path) {
  auto p = krein::io::read_problem_file(path);
  if (!g.space_file.empty()) p.J = krein::io::read_matrix_file(g.space_file);
  Loaded l;
  l.tol = p.tolerance(base_tolerance(g));
  l.op = p.op_on_space(l.tol);
  return l;
}

const std::string& single_input(const Globals& g) {
  if (g.inputs.size() != 1) throw Error(ErrorKind::InvalidInput, "expected exactly one --input file");
  return g.inputs.front();
}

json triple_json(const krein::IndexTriple& t) {
  return {{"h_plus", t.h_plus}, {"h_minus", t.h_minus}, {"h_zero", t.h_zero}};
}

std::string triple_text(const krein::IndexTriple& t) {
  return "(" + std::to_string(t.h_plus) + ", " + std::to_string(t.h_minus) + ", " + std::to_string(t.h_zero) + ")";
}

void print_matrix(std::ostream& os, const std::string& label, const Matrix& m) {
  os << label << " [" << m.shape_string() << "]\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << "  ";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto z = m(i, j);
      os << (j ? "  " : "") << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    }
    os << '\n';
  }
}

void emit(const Globals& g, const json& machine, const std::string& text) {
  if (g.machine)
    std::cout << machine.dump(2) << '\n';
  else
    std::cout << text;
}

int cmd_indices(const Globals& g) {
  const auto l = load_problem(g, single_input(g));
  const auto h = krein::hermitian_indices(l.op, l.tol);
  const auto s = krein::space_indices(l.op.domain(), l.tol);
  json j{{"schema_version", krein::io::kSchemaVersion},
         {"command", "indices"},
         {"indices", triple_json(h)},
         {"space", {{"ind_plus", s.plus}, {"ind_minus", s.minus}}}};
  emit(g, j,
       "hermitian indices (h+, h-, h0) = " + triple_text(h) + "\nspace indices (ind+, ind-) = (" +
           std::to_string(s.plus) + ", " + std::to_string(s.minus) + ")\n");
  return kOk;
}

int cmd_decompose(const Globals& g) {
  const auto l = load_problem(g, single_input(g));
  const auto d = krein::decompose(l.op, l.tol);
  const auto r = krein::validate(l.op, d, l.tol);
  std::optional<krein::DecompositionProjections> q;
  if (r.direct) q = krein::projections(l.op, d, l.tol);

  json checks{{"i", r.condition_i()},   {"ii", r.condition_ii()},     {"iii", r.condition_iii()},
              {"iv", r.condition_iv()}, {"spans_space", r.spans_space}, {"direct", r.direct},
              {"min_singular_value", r.min_singular_value}};
  json j{{"schema_version", krein::io::kSchemaVersion},
         {"command", "decompose"},
         {"indices", triple_json(r.indices)},
         {"bases",
          {{"M_plus", krein::io::matrix_to_json(d.M_plus.basis())},
           {"M_minus", krein::io::matrix_to_json(d.M_minus.basis())},
           {"M_zero", krein::io::matrix_to_json(d.M_zero.basis())}}},
         {"validation", checks},
         {"passed", r.passed()}};
  if (q)
    j["projections"] = {{"Q_plus", krein::io::matrix_to_json(q->Q_plus.matrix())},
                        {"Q_minus", krein::io::matrix_to_json(q->Q_minus.matrix())},
                        {"Q_zero", krein::io::matrix_to_json(q->Q_zero.matrix())}};

  std::ostringstream os;
  os << "hermitian indices " << triple_text(r.indices) << '\n';
  print_matrix(os, "M+ basis", d.M_plus.basis());
  print_matrix(os, "M- basis", d.M_minus.basis());
  print_matrix(os, "M0 basis", d.M_zero.basis());
  if (q) {
    print_matrix(os, "Q+", q->Q_plus.matrix());
    print_matrix(os, "Q-", q->Q_minus.matrix());
    print_matrix(os, "Q0", q->Q_zero.matrix());
  }
  auto mark = [](bool b) { return b ? "pass" : "FAIL"; };
  os << "(i)   definite parts and kernel   " << mark(r.condition_i()) << '\n'
     << "(ii)  pairwise direct             " << mark(r.condition_ii()) << '\n'
     << "(iii) pairwise C-orthogonal       " << mark(r.condition_iii()) << '\n'
     << "(iv)  dimensions match indices    " << mark(r.condition_iv()) << '\n'
     << "direct sum spans the space        " << mark(r.direct) << '\n';
  emit(g, j, os.str());
  return r.passed() ? kOk : kViolation;
}

int cmd_factorize(const Globals& g, const std::string& out_dir) {
  const auto l = load_problem(g, single_input(g));
  const auto f = krein::bk_factorize(l.op, l.tol);
  const auto r = krein::bk_verify(l.op, f, l.tol);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    krein::io::write_json_file(out_dir + "/factor_space_J.json", krein::io::matrix_to_json(f.A_space.J()));
    krein::io::write_json_file(out_dir + "/factor_A.json", krein::io::matrix_to_json(f.A.matrix()));
  }
  json j{{"schema_version", krein::io::kSchemaVersion},
         {"command", "factorize"},
         {"factor_space", {{"J", krein::io::matrix_to_json(f.A_space.J())}}},
         {"A", krein::io::matrix_to_json(f.A.matrix())},
         {"verify",
          {{"residual", r.residual},
           {"residual_ok", r.residual_ok},
           {"injective", r.injective},
           {"kernel_dim", r.kernel_dim},
           {"factor_indices", {{"ind_plus", r.a_indices.plus}, {"ind_minus", r.a_indices.minus}}},
           {"indices", triple_json(r.c_indices)},
           {"index_equal", r.index_equal},
           {"note", r.note}}},
         {"passed", r.passed()}};
  std::ostringstream os;
  print_matrix(os, "factor space J", f.A_space.J());
  print_matrix(os, "A", f.A.matrix());
  os << "residual |C - AA*|/|C| = " << r.residual << (r.residual_ok ? " (ok)" : " (FAIL)") << '\n'
     << "ker A = {0}: " << (r.injective ? "yes" : "NO") << '\n'
     << "ind(factor space) = (" << r.a_indices.plus << ", " << r.a_indices.minus << "), h(C) = "
     << triple_text(r.c_indices) << (r.index_equal ? " (equal)" : " (DIFFER)") << '\n'
     << r.note << '\n';
  emit(g, j, os.str());
  return r.passed() ? kOk : kViolation;
}

int cmd_congruent(const Globals& g) {
  if (g.inputs.size() != 2) throw Error(ErrorKind::InvalidInput, "congruent needs two --input files");
  const auto a = load_problem(g, g.inputs[0]);
  const auto b = load_problem(g, g.inputs[1]);
  const auto& tol = a.tol;
  const bool verdict = krein::is_congruent(a.op, b.op, tol);
  json j{{"schema_version", krein::io::kSchemaVersion},
         {"command", "congruent"},
         {"congruent", verdict},
         {"indices_a", triple_json(krein::hermitian_indices(a.op, tol))},
         {"indices_b", triple_json(krein::hermitian_indices(b.op, tol))}};
  std::ostringstream os;
  os << "indices A " << triple_text(krein::hermitian_indices(a.op, tol)) << ", B "
     << triple_text(krein::hermitian_indices(b.op, tol)) << '\n'
     << (verdict ? "congruent" : "not congruent") << '\n';
  if (verdict) {
    const auto x = krein::build_congruence(a.op, b.op, tol);
    const double res = krein::congruence_residual(a.op, b.op, x);
    j["X"] = krein::io::matrix_to_json(x.matrix());
    j["residual"] = res;
    print_matrix(os, "X (A = X* B X)", x.matrix());
    os << "residual " << res << '\n';
  }
  emit(g, j, os.str());
  return kOk;
}

int cmd_phillips(const Globals& g, const std::string& plus_file, const std::string& minus_file,
                 const std::string& out_dir) {
  const auto tol = base_tolerance(g);
  const Matrix plus = krein::io::read_matrix_file(plus_file);
  const Matrix minus = krein::io::read_matrix_file(minus_file);
  if (plus.rows() != minus.rows()) throw Error(ErrorKind::InvalidInput, "plus and minus vectors differ in length");
  const auto space = g.space_file.empty() ? krein::KreinSpace::hilbert(plus.rows())
                                          : krein::KreinSpace::make(krein::io::read_matrix_file(g.space_file), tol);
  if (space.dim() != plus.rows()) throw Error(ErrorKind::InvalidInput, "vectors do not match the space dimension");

  const auto gp = krein::graph_rep(krein::Subspace::span(space, plus, tol), krein::GraphSign::plus, tol);
  const auto gm = krein::graph_rep(krein::Subspace::span(space, minus, tol), krein::GraphSign::minus, tol);
  const auto pair = krein::phillips_extend(gp, gm, tol);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    krein::io::write_json_file(out_dir + "/G.json", krein::io::matrix_to_json(pair.G));
    krein::io::write_json_file(out_dir + "/maximal_plus.json", krein::io::matrix_to_json(pair.G_tilde_plus.basis()));
    krein::io::write_json_file(out_dir + "/maximal_minus.json", krein::io::matrix_to_json(pair.G_tilde_minus.basis()));
  }
  json j{{"schema_version", krein::io::kSchemaVersion},
         {"command", "phillips"},
         {"G", krein::io::matrix_to_json(pair.G)},
         {"G_norm", krein::norm2(pair.G)},
         {"maximal_plus", krein::io::matrix_to_json(pair.G_tilde_plus.basis())},
         {"maximal_minus", krein::io::matrix_to_json(pair.G_tilde_minus.basis())},
         {"split", {{"plus", pair.frame.plus}, {"minus", pair.frame.minus}}}};
  std::ostringstream os;
  print_matrix(os, "G (split coordinates)", pair.G);
  os << "|G| = " << krein::norm2(pair.G) << '\n';
  print_matrix(os, "maximal nonnegative basis", pair.G_tilde_plus.basis());
  print_matrix(os, "maximal nonpositive basis", pair.G_tilde_minus.basis());
  emit(g, j, os.str());
  return kOk;
}

std::uint64_t parse_seed(const std::string& text) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    if (text.empty() || text[0] == '-') throw std::invalid_argument("sign");
    v = std::stoull(text, &pos, 10);
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "seed must be an unsigned 64-bit decimal: " + text);
  }
  if (pos != text.size()) throw Error(ErrorKind::InvalidInput, "seed must be an unsigned 64-bit decimal: " + text);
  return v;
}

int cmd_property_suite(const Globals& g, const std::optional<std::string>& seed_flag, std::size_t count,
                       std::size_t max_dim, bool inject_fault) {
  krein::suite::SuiteOptions o;
  if (seed_flag)
    o.seed = parse_seed(*seed_flag);
  else if (const char* env = std::getenv("KREIN_SEED"))
    o.seed = parse_seed(env);
  if (max_dim < 1 || max_dim > 64) throw Error(ErrorKind::InvalidInput, "--max-dim must lie in [1, 64]");
  o.count = count;
  o.max_dim = max_dim;
  o.tol = base_tolerance(g);
  o.inject_fault = inject_fault;
  const auto report = krein::suite::run_suite(o);

  std::ostringstream os;
  os << "property suite seed=" << o.seed << " count=" << o.count << " max_dim=" << o.max_dim << '\n';
  for (const auto& p : report.properties) {
    os << (p.passed() ? "  pass " : "  FAIL ") << p.name << "  " << p.cases - p.failures << '/' << p.cases;
    for (const auto& [k, v] : p.counters) os << "  " << k << '=' << v;
    os << '\n';
    for (const auto& e : p.examples) os << "      " << e << '\n';
  }
  os << (report.passed() ? "all properties hold\n" : "property violations found\n");
  emit(g, krein::suite::to_json(report), os.str());
  return report.passed() ? kOk : kViolation;
}

int report_error(const Globals& g, const std::string& command, const Error& e) {
  const int code = krein::is_math_precondition(e.kind()) ? kPrecondition : kInput;
  std::cerr << "error (" << krein::to_string(e.kind()) << "): " << e.what() << '\n';
  if (g.machine)
    std::cout << json{{"schema_version", krein::io::kSchemaVersion},
                      {"command", command},
                      {"error", {{"kind", krein::to_string(e.kind())}, {"message", e.what()}}}}
                     .dump(2)
              << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Indefinite inner product toolkit: hermitian indices, decompositions, factorizations"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("-i,--input", g.inputs, "Problem file (JSON); congruent takes two");
  app.add_option("--space", g.space_file, "Matrix file holding the fundamental symmetry J");
  app.add_option("--tol-rank", g.tol_rank, "Relative rank tolerance");
  app.add_option("--tol-res", g.tol_res, "Relative residual tolerance");
  app.add_flag("--machine", g.machine, "Emit a JSON report");

  auto* indices = app.add_subcommand("indices", "Hermitian indices (h+, h-, h0) and space indices");
  auto* decompose = app.add_subcommand("decompose", "Fundamental decomposition with validation table");
  auto* factorize = app.add_subcommand("factorize", "Factorization C = A A* with verification");
  std::string factor_out;
  factorize->add_option("--out-dir", factor_out, "Write factor_space_J.json and factor_A.json here");
  auto* congruent = app.add_subcommand("congruent", "Congruence verdict for two operators");
  auto* phillips = app.add_subcommand("phillips", "Extend a nonnegative/nonpositive pair to maximal graphs");
  std::string plus_file, minus_file, phillips_out;
  phillips->add_option("--plus", plus_file, "Matrix file whose columns span the nonnegative subspace")->required();
  phillips->add_option("--minus", minus_file, "Matrix file whose columns span the nonpositive subspace")->required();
  phillips->add_option("--out-dir", phillips_out, "Write G.json and the maximal bases here");
  auto* suite = app.add_subcommand("property-suite", "Run the randomized invariant battery");
  std::optional<std::string> seed;
  std::size_t count = 1000;
  std::size_t max_dim = 8;
  bool inject_fault = false;
  suite->add_option("--seed", seed, "64-bit seed (default: $KREIN_SEED or 0)");
  suite->add_option("--count", count, "Cases per property");
  suite->add_option("--max-dim", max_dim, "Largest space dimension");
  suite->add_flag("--inject-fault", inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (indices->parsed()) return cmd_indices(g);
    if (decompose->parsed()) return cmd_decompose(g);
    if (factorize->parsed()) return cmd_factorize(g, factor_out);
    if (congruent->parsed()) return cmd_congruent(g);
    if (phillips->parsed()) return cmd_phillips(g, plus_file, minus_file, phillips_out);
    if (suite->parsed()) return cmd_property_suite(g, seed, count, max_dim, inject_fault);
  } catch (const Error& e) {
    return report_error(g, command, e);
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error(g, command, Error(ErrorKind::InvalidInput, e.what()));
  }
  return kInput;
}
