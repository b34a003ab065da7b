#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "symschrod/catalog.hpp"
#include "symschrod/corpus.hpp"
#include "symschrod/determining.hpp"
#include "symschrod/lie_algebra.hpp"
#include "symschrod/parser.hpp"
#include "symschrod/transforms.hpp"

using namespace symschrod;

namespace {

constexpr int kFail = 1;
constexpr int kUsage = 2;

int cmd_verify(const std::string& corpus_path, const std::string& entry_id, const std::string& report_path,
               int threads) {
  std::ifstream in(corpus_path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot open corpus " << corpus_path << "\n";
    return kUsage;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  std::vector<TableEntry> entries;
  try {
    entries = parse_corpus(ss.str());
  } catch (const CorpusError& ex) {
    std::cerr << ex.what() << "\n";
    return kUsage;
  }
  if (!entry_id.empty()) {
    std::vector<TableEntry> one;
    for (auto& e : entries)
      if (e.id == entry_id) one.push_back(e);
    if (one.empty()) {
      std::cerr << "no entry " << entry_id << "\n";
      return kUsage;
    }
    entries = one;
  }
  auto reports = verify_corpus(entries, threads);
  int passed = 0, total = 0;
  double ms = 0;
  for (const auto& rep : reports) {
    for (const auto& r : rep.regimes) {
      ++total;
      passed += r.pass;
      ms += r.millis;
      std::printf("%s %-6s [%s] expected %s, computed %s", r.pass ? "PASS" : "FAIL", r.id.c_str(), r.regime.c_str(),
                  r.expected.c_str(), r.computed.c_str());
      for (const auto& g : r.generators)
        if (!g.symmetric) std::printf("; %s not a symmetry", g.name.c_str());
      if (!r.closure) std::printf("; %s", r.closure_detail.c_str());
      if (!r.extra.empty()) std::printf("; solver finds %zu more", r.extra.size());
      if (!r.missing.empty()) std::printf("; solver misses %zu", r.missing.size());
      for (const auto& m : r.marks)
        if (m.listed && !m.valid) std::printf("; %s mark fails", m.mark.c_str());
      std::printf("\n");
    }
    for (const auto& r : rep.errata)
      std::printf("  erratum %s [%s] %s: %s (%s)\n", r.id.c_str(), r.regime.c_str(), r.note.c_str(),
                  r.pass ? "verifies" : "fails", r.computed.c_str());
  }
  std::printf("%d/%d regimes pass (%.0f ms)\n", passed, total, ms);
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << report_path << "\n";
      return kUsage;
    }
    out << report_json(reports, corpus_hash(ss.str()));
  }
  return passed == total ? 0 : kFail;
}

AbstractLieAlgebra solved_algebra(const SymmetryBasis& sb) { return structure_constants(sb.generators); }

int cmd_scan(const std::string& potential, int dim, bool brackets_only) {
  SymmetryBasis sb = solve_symmetries(parse_expr(potential, dim), dim);
  AbstractLieAlgebra alg = solved_algebra(sb);
  if (brackets_only) {
    for (int i = 0; i < alg.dim; ++i)
      for (int j = i + 1; j < alg.dim; ++j) {
        std::string s = bracket_string(alg, i, j);
        if (s != "0") std::printf("[%s, %s] = %s\n", alg.labels[i].c_str(), alg.labels[j].c_str(), s.c_str());
      }
    return 0;
  }
  std::printf("%zu generators\n", sb.generators.size());
  for (const auto& g : sb.generators) std::printf("  %s\n", g.name.c_str());
  try {
    std::printf("label %s\n", identify(alg).label.c_str());
  } catch (const IdentificationError& ex) {
    std::printf("label unidentified: %s\n", ex.what());
    return kFail;
  }
  return 0;
}

int cmd_identify(const std::string& potential, int dim) {
  SymmetryBasis sb = solve_symmetries(parse_expr(potential, dim), dim);
  AbstractLieAlgebra alg = solved_algebra(sb);
  std::printf("fingerprint %s\n", fingerprint(alg).str().c_str());
  try {
    Identification id = identify(alg);
    std::printf("label %s\n", id.label.c_str());
  } catch (const IdentificationError& ex) {
    std::printf("unidentified: %s\n", ex.what());
    return kFail;
  }
  return 0;
}

int cmd_transform(const std::string& name, const std::string& omega_text, int dim) {
  Bindings params;
  if (!omega_text.empty()) params["omega"] = parse_expr(omega_text, dim);
  PointTransform T = catalog_transform(name, dim, params);
  const Expr w = params.count("omega") ? params["omega"] : param("omega");
  Expr x2, target;
  for (int a = 1; a <= dim; ++a) x2 += var(a) * var(a);
  if (name == "niederer_attractive") target = Expr(Rational(1, 2)) * w * w * x2;
  if (name == "niederer_repulsive") target = -Expr(Rational(1, 2)) * w * w * x2;
  if (name == "free_fall")
    for (int a = 1; a <= dim; ++a) target += param("kappa" + std::to_string(a)) * var(a);
  if (name == "const_shift") target = param("C");
  std::printf("%s, domain %s, target potential %s\n", name.c_str(), T.domain.c_str(), target.str().c_str());
  auto v = pullback_check(T, Expr(), target);
  std::printf("pullback %s, factor %s\n", v.pass ? "ok" : "fails", v.factor.str().c_str());
  bool ok = v.pass;
  std::vector<Generator> images;
  for (const auto& key : free_particle_basis(dim)) {
    Generator g = conjugate_generator(T, standard_generator(key, dim));
    auto s = check_point_symmetry(g, target);
    std::printf("  %-3s -> %s\n", key.c_str(), s.symmetric ? "symmetry" : "not a symmetry");
    ok = ok && s.symmetric;
    images.push_back(g);
  }
  if (ok) {
    std::vector<Generator> free;
    for (const auto& key : free_particle_basis(dim)) free.push_back(standard_generator(key, dim));
    auto a = structure_constants(free), b = structure_constants(images);
    bool same = true;
    for (int i = 0; i < a.dim; ++i)
      for (int j = 0; j < a.dim; ++j)
        for (int k = 0; k < a.dim; ++k) same = same && is_identically_zero(a.c[i][j][k] - b.c[i][j][k]);
    std::printf("bracket table %s\n", same ? "identical" : "differs");
    ok = same;
  }
  return ok ? 0 : kFail;
}

void print_seeds() {
  auto s = enumerate_subalgebra_seeds(3);
  auto show = [](const char* title, const std::vector<std::vector<std::string>>& list) {
    std::printf("%s\n", title);
    for (const auto& sub : list) {
      std::string line;
      for (const auto& g : sub) line += (line.empty() ? "" : ", ") + g;
      std::printf("  <%s>\n", line.c_str());
    }
  };
  show("one-dimensional", s.one_dim);
  show("two-dimensional", s.two_dim);
  show("three-dimensional", s.three_dim);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point symmetries of Schrodinger equations"};
  app.require_subcommand(1);

  std::string corpus = default_corpus_path(), entry, report;
  int threads = 0;
  auto* verify = app.add_subcommand("verify", "verify the bundled classification corpus");
  verify->add_option("--corpus", corpus, "corpus JSON file");
  verify->add_option("--entry", entry, "only this entry id");
  verify->add_option("--report", report, "write the JSON report here");
  verify->add_option("--threads", threads, "worker threads (default SYMSCHROD_THREADS or all cores)");

  std::string potential;
  int dim = 3;
  auto add_potential = [&](CLI::App* sub) {
    sub->add_option("--potential", potential, "potential expression")->required();
    sub->add_option("--dim", dim, "spatial dimension")->check(CLI::IsMember({2, 3}));
  };
  auto* scan = app.add_subcommand("scan", "solve the determining equations");
  add_potential(scan);
  auto* brackets = app.add_subcommand("brackets", "bracket table of the solved algebra");
  add_potential(brackets);
  auto* ident = app.add_subcommand("identify", "fingerprint and label of the solved algebra");
  add_potential(ident);

  std::string tname, omega;
  auto* tcheck = app.add_subcommand("transform-check", "check a catalog equivalence transformation");
  tcheck->add_option("--name", tname, "transform name")
      ->required()
      ->check(CLI::IsMember(catalog_transform_names()));
  tcheck->add_option("--omega", omega, "frequency");
  tcheck->add_option("--dim", dim, "spatial dimension")->check(CLI::IsMember({2, 3}));

  auto* seeds = app.add_subcommand("seeds", "subalgebra seeds of the free-particle algebra");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*verify) return cmd_verify(corpus, entry, report, threads);
    if (*scan) return cmd_scan(potential, dim, false);
    if (*brackets) return cmd_scan(potential, dim, true);
    if (*ident) return cmd_identify(potential, dim);
    if (*tcheck) return cmd_transform(tname, omega, dim);
    if (*seeds) {
      print_seeds();
      return 0;
    }
  } catch (const ParseError& ex) {
    std::cerr << "parse error: " << ex.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& ex) {
    std::cerr << ex.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
