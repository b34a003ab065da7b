#include "symschrod/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "symschrod/catalog.hpp"
#include "symschrod/determining.hpp"
#include "symschrod/diffop.hpp"
#include "symschrod/lie_algebra.hpp"
#include "symschrod/linalg.hpp"
#include "symschrod/parser.hpp"
#include "symschrod/transforms.hpp"

namespace symschrod {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

bool TableEntry::has_mark(const std::string& m) const {
  return std::find(marks.begin(), marks.end(), m) != marks.end();
}

std::string default_corpus_path() { return std::string(SYMSCHROD_DATA_DIR) + "/corpus.json"; }

std::string corpus_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::vector<std::string> string_list(const json& j, const std::string& key, const std::string& id) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) throw CorpusError(id + ": '" + key + "' must be an array");
  for (const auto& s : j.at(key)) {
    if (!s.is_string()) throw CorpusError(id + ": '" + key + "' must hold strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

std::string required_string(const json& j, const std::string& key, const std::string& id) {
  if (!j.contains(key) || !j.at(key).is_string()) throw CorpusError(id + ": missing string field '" + key + "'");
  return j.at(key).get<std::string>();
}

Bindings regime_bindings(const Regime& r, int dim) {
  Bindings b;
  for (const auto& [k, v] : r.bindings) b[k] = parse_expr(v, dim);
  return b;
}

// Throws with the entry id when the row does not resolve.
void validate_entry(const TableEntry& e) {
  try {
    parse_expr(e.potential, e.dim);
    for (const auto& r : e.regimes) {
      Bindings b = regime_bindings(r, e.dim);
      for (const auto& s : e.symmetries) parse_generator(s, e.dim, b);
    }
  } catch (const std::exception& ex) {
    throw CorpusError(e.id + ": " + ex.what());
  }
}

}  // namespace

std::vector<TableEntry> parse_corpus(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw CorpusError(std::string("corpus is not valid JSON: ") + ex.what());
  }
  if (!doc.is_object() || !doc.contains("entries") || !doc.at("entries").is_array())
    throw CorpusError("corpus needs an 'entries' array");
  std::vector<TableEntry> out;
  std::set<std::string> seen;
  for (const auto& j : doc.at("entries")) {
    if (!j.is_object()) throw CorpusError("corpus entries must be objects");
    TableEntry e;
    e.id = required_string(j, "id", "<entry>");
    if (!seen.insert(e.id).second) throw CorpusError(e.id + ": duplicate id");
    if (!j.contains("dim") || !j.at("dim").is_number_integer()) throw CorpusError(e.id + ": missing integer 'dim'");
    e.dim = j.at("dim").get<int>();
    if (e.dim != 2 && e.dim != 3) throw CorpusError(e.id + ": dim must be 2 or 3");
    e.potential = required_string(j, "potential", e.id);
    e.symmetries = string_list(j, "symmetries", e.id);
    e.marks = string_list(j, "marks", e.id);
    for (const auto& m : e.marks)
      if (m != "star" && m != "asterisk") throw CorpusError(e.id + ": unknown mark '" + m + "'");
    e.missing_in_boyer = j.value("missing_in_boyer", false);
    e.notes = string_list(j, "notes", e.id);
    if (!j.contains("regimes") || !j.at("regimes").is_array() || j.at("regimes").empty())
      throw CorpusError(e.id + ": needs at least one regime");
    for (const auto& rj : j.at("regimes")) {
      Regime r;
      r.name = required_string(rj, "name", e.id);
      r.expected = required_string(rj, "expected", e.id);
      if (rj.contains("bindings")) {
        if (!rj.at("bindings").is_object()) throw CorpusError(e.id + ": bindings must be an object");
        for (const auto& [k, v] : rj.at("bindings").items()) {
          if (!v.is_string()) throw CorpusError(e.id + ": binding values must be strings");
          r.bindings[k] = v.get<std::string>();
        }
      }
      e.regimes.push_back(std::move(r));
    }
    if (j.contains("errata")) {
      for (const auto& ej : j.at("errata")) {
        Erratum er;
        er.note = required_string(ej, "note", e.id);
        er.potential = ej.value("potential", std::string());
        er.symmetries = string_list(ej, "symmetries", e.id);
        er.expected = ej.value("expected", std::string());
        e.errata.push_back(std::move(er));
      }
    }
    validate_entry(e);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<TableEntry> load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot open corpus " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_corpus(ss.str());
}

namespace {

std::vector<int> flat_axes(const Expr& V, int dim) {
  std::vector<int> out;
  for (int a = 1; a <= dim; ++a)
    if (differentiate(V, a).is_zero()) out.push_back(a);
  return out;
}

Expr x_squared(int dim) {
  Expr s;
  for (int a = 1; a <= dim; ++a) s += var(a) * var(a);
  return s;
}

MarkCheck check_star(const Expr& V, int dim) {
  MarkCheck m;
  m.mark = "star";
  auto axes = flat_axes(V, dim);
  if (axes.empty()) {
    m.detail = "potential depends on every coordinate";
    return m;
  }
  m.valid = true;
  for (int a : axes) {
    std::vector<Expr> k(dim);
    k[a - 1] = param("kappa" + std::to_string(a));
    auto v = pullback_check(free_fall(dim, k), V, V + k[a - 1] * var(a));
    if (!m.detail.empty()) m.detail += "; ";
    m.detail += "free fall along x" + std::to_string(a) + (v.pass ? " ok" : " fails");
    m.valid = m.valid && v.pass;
  }
  return m;
}

MarkCheck check_asterisk(const Expr& V, int dim) {
  MarkCheck m;
  m.mark = "asterisk";
  const Expr w = param("omega");
  const Expr h = Expr(Rational(1, 2)) * w * w * x_squared(dim);
  auto a = pullback_check(niederer_attractive(dim, w), V, V + h);
  auto r = pullback_check(niederer_repulsive(dim, w), V, V - h);
  m.valid = a.pass && r.pass;
  m.detail = std::string("niederer attractive ") + (a.pass ? "ok" : "fails") + "; repulsive " +
             (r.pass ? "ok" : "fails");
  return m;
}

RegimeReport verify_regime(const std::string& id, int dim, const std::string& potential,
                           const std::vector<std::string>& symmetries, const std::vector<std::string>& marks,
                           const Regime& regime) {
  auto start = std::chrono::steady_clock::now();
  RegimeReport rep;
  rep.id = id;
  rep.regime = regime.name;
  rep.expected = regime.expected;
  try {
    const Bindings b = regime_bindings(regime, dim);
    const Expr V = substitute(parse_expr(potential, dim), b);

    std::vector<Generator> gens;
    std::vector<std::string> names{"P0"};
    names.insert(names.end(), symmetries.begin(), symmetries.end());
    names.push_back("I");
    bool all_sym = true;
    for (const auto& n : names) {
      Generator g = parse_generator(n, dim, b);
      g.name = n;
      auto v = check_point_symmetry(g, V);
      GeneratorCheck gc{n, v.symmetric, v.symmetric ? v.alpha.str() : v.residual_zeroth.str()};
      all_sym = all_sym && v.symmetric;
      rep.generators.push_back(gc);
      gens.push_back(std::move(g));
    }

    std::vector<DiffOp> ops;
    for (const auto& g : gens) ops.push_back(g.to_diffop());
    AbstractLieAlgebra alg;
    if (operator_rank(ops) != static_cast<int>(ops.size())) {
      rep.closure_detail = "listed generators are linearly dependent";
    } else {
      try {
        alg = structure_constants(gens);
        rep.closure = true;
      } catch (const NonClosure& nc) {
        rep.closure_detail = nc.what();
      }
    }
    if (rep.closure) {
      for (int i = 0; i < alg.dim; ++i)
        for (int j = i + 1; j < alg.dim; ++j) {
          std::string s = bracket_string(alg, i, j);
          if (s != "0") rep.brackets.push_back("[" + alg.labels[i] + ", " + alg.labels[j] + "] = " + s);
        }
      try {
        rep.fingerprint = fingerprint(alg).str();
      } catch (const std::exception& ex) {
        rep.fingerprint = std::string("unavailable: ") + ex.what();
      }
      try {
        rep.computed = identify(alg).label;
      } catch (const std::exception& ex) {
        rep.computed = std::string("unidentified: ") + ex.what();
      }
      rep.label_match = labels_match(rep.expected, rep.computed);
    }

    SymmetryBasis sb = solve_symmetries(V, dim);
    rep.solver_dimension = static_cast<int>(sb.generators.size());
    std::vector<DiffOp> solved;
    for (const auto& g : sb.generators) solved.push_back(g.to_diffop());
    auto in_listed = span_coordinates(ops, solved);
    for (std::size_t k = 0; k < solved.size(); ++k)
      if (!in_listed[k]) rep.extra.push_back(sb.generators[k].name);
    auto in_solved = span_coordinates(solved, ops);
    for (std::size_t k = 0; k < ops.size(); ++k)
      if (!in_solved[k]) rep.missing.push_back(names[k]);

    bool marks_ok = true;
    for (const std::string mark : {"star", "asterisk"}) {
      MarkCheck m = mark == "star" ? check_star(V, dim) : check_asterisk(V, dim);
      m.listed = std::find(marks.begin(), marks.end(), mark) != marks.end();
      if (m.listed && !m.valid) marks_ok = false;
      if (m.listed || m.valid) rep.marks.push_back(m);
    }

    rep.pass = all_sym && rep.closure && rep.label_match && rep.extra.empty() && rep.missing.empty() && marks_ok;
  } catch (const std::exception& ex) {
    rep.closure_detail = std::string("verification aborted: ") + ex.what();
    rep.pass = false;
  }
  rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace

VerificationReport verify_entry(const TableEntry& e) {
  VerificationReport out;
  out.id = e.id;
  out.missing_in_boyer = e.missing_in_boyer;
  out.notes = e.notes;
  out.pass = true;
  for (const auto& r : e.regimes) {
    out.regimes.push_back(verify_regime(e.id, e.dim, e.potential, e.symmetries, e.marks, r));
    out.pass = out.pass && out.regimes.back().pass;
  }
  for (const auto& er : e.errata)
    for (const auto& r : e.regimes) {
      Regime rr = r;
      if (!er.expected.empty()) rr.expected = er.expected;
      RegimeReport rep = verify_regime(e.id, e.dim, er.potential.empty() ? e.potential : er.potential,
                                       er.symmetries.empty() ? e.symmetries : er.symmetries, e.marks, rr);
      rep.note = er.note;
      out.errata.push_back(std::move(rep));
    }
  return out;
}

int thread_count() {
  if (const char* s = std::getenv("SYMSCHROD_THREADS")) {
    int n = std::atoi(s);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<VerificationReport> verify_corpus(const std::vector<TableEntry>& entries, int threads) {
  if (threads <= 0) threads = thread_count();
  threads = std::max(1, std::min<int>(threads, static_cast<int>(entries.size())));
  std::vector<VerificationReport> out(entries.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) out[i] = verify_entry(entries[i]);
  };
  if (threads == 1) {
    work();
    return out;
  }
  std::vector<std::thread> pool;
  for (int k = 0; k < threads; ++k) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  return out;
}

namespace {

ojson regime_json(const RegimeReport& r, bool missing_in_boyer) {
  ojson j;
  j["id"] = r.id;
  j["regime"] = r.regime;
  if (!r.note.empty()) j["note"] = r.note;
  j["pass"] = r.pass;
  j["missing_in_boyer"] = missing_in_boyer;
  ojson gens = ojson::array();
  for (const auto& g : r.generators) {
    ojson gj;
    gj["name"] = g.name;
    gj["verdict"] = g.symmetric ? "symmetry" : "not a symmetry";
    gj["alpha_or_residual"] = g.alpha_or_residual;
    gens.push_back(gj);
  }
  j["generators"] = gens;
  ojson cl;
  cl["closed"] = r.closure;
  if (!r.closure_detail.empty()) cl["detail"] = r.closure_detail;
  cl["brackets"] = r.brackets;
  j["closure"] = cl;
  j["fingerprint"] = r.fingerprint;
  ojson lab;
  lab["expected"] = r.expected;
  lab["computed"] = r.computed;
  lab["match"] = r.label_match;
  j["label"] = lab;
  ojson marks = ojson::array();
  for (const auto& m : r.marks) {
    ojson mj;
    mj["mark"] = m.mark;
    mj["listed"] = m.listed;
    mj["valid"] = m.valid;
    mj["detail"] = m.detail;
    marks.push_back(mj);
  }
  j["marks"] = marks;
  ojson sol;
  sol["dimension"] = r.solver_dimension;
  sol["extra"] = r.extra;
  sol["missing"] = r.missing;
  j["solver"] = sol;
  return j;
}

}  // namespace

std::string report_json(const std::vector<VerificationReport>& reports, const std::string& hash) {
  ojson doc;
  doc["version"] = 1;
  doc["corpus_hash"] = hash;
  bool all = true;
  ojson entries = ojson::array(), errata = ojson::array(), notes = ojson::object();
  for (const auto& rep : reports) {
    all = all && rep.pass;
    for (const auto& r : rep.regimes) entries.push_back(regime_json(r, rep.missing_in_boyer));
    for (const auto& r : rep.errata) errata.push_back(regime_json(r, rep.missing_in_boyer));
    if (!rep.notes.empty()) notes[rep.id] = rep.notes;
  }
  doc["pass"] = all;
  doc["entries"] = entries;
  doc["errata"] = errata;
  doc["notes"] = notes;
  return doc.dump(2) + "\n";
}

namespace {

std::vector<std::string> candidate_keys(int dim) {
  if (dim == 2) return {"P1", "P2", "G1", "G2", "L3", "D", "A"};
  return {"P1", "P2", "P3", "G1", "G2", "G3", "L1", "L2", "L3", "D", "A"};
}

bool homogeneous_minus_two(const Expr& V, int dim) {
  Expr e = Expr(2) * V;
  for (int a = 1; a <= dim; ++a) e += var(a) * differentiate(V, a);
  return is_identically_zero(e);
}

}  // namespace

std::vector<Mutation> corpus_mutations(const std::vector<TableEntry>& entries, std::size_t count, unsigned seed) {
  std::vector<std::string> label_pool;
  for (const auto& e : entries)
    for (const auto& r : e.regimes) label_pool.push_back(r.expected);
  for (const auto& t : template_names()) label_pool.push_back(t);
  std::sort(label_pool.begin(), label_pool.end());
  label_pool.erase(std::unique(label_pool.begin(), label_pool.end()), label_pool.end());

  std::mt19937 rng(seed);
  std::vector<Mutation> all;
  for (const auto& e : entries) {
    for (std::size_t k = 0; k < e.symmetries.size(); ++k) {
      for (const auto& key : candidate_keys(e.dim)) {
        if (std::find(e.symmetries.begin(), e.symmetries.end(), key) != e.symmetries.end()) continue;
        Mutation m{e.id, "wrong-generator", e.symmetries[k] + " -> " + key, e};
        m.entry.symmetries[k] = key;
        all.push_back(std::move(m));
      }
      Mutation d{e.id, "dropped-generator", "drop " + e.symmetries[k], e};
      d.entry.symmetries.erase(d.entry.symmetries.begin() + static_cast<long>(k));
      all.push_back(std::move(d));
    }
    for (std::size_t r = 0; r < e.regimes.size(); ++r) {
      std::vector<std::string> others;
      for (const auto& l : label_pool)
        if (canonical_label(l) != canonical_label(e.regimes[r].expected)) others.push_back(l);
      const std::string& pick = others[rng() % others.size()];
      Mutation m{e.id, "wrong-label", e.regimes[r].name + ": " + e.regimes[r].expected + " -> " + pick, e};
      m.entry.regimes[r].expected = pick;
      all.push_back(std::move(m));
    }
    const Expr V = substitute(parse_expr(e.potential, e.dim), regime_bindings(e.regimes.front(), e.dim));
    if (!e.has_mark("star") && flat_axes(V, e.dim).empty()) {
      Mutation m{e.id, "wrong-mark", "add star", e};
      m.entry.marks.push_back("star");
      all.push_back(std::move(m));
    }
    if (!e.has_mark("asterisk") && !homogeneous_minus_two(V, e.dim)) {
      Mutation m{e.id, "wrong-mark", "add asterisk", e};
      m.entry.marks.push_back("asterisk");
      all.push_back(std::move(m));
    }
  }
  std::shuffle(all.begin(), all.end(), rng);
  // one of each kind first so that every kind is represented
  std::set<std::string> kinds;
  std::vector<Mutation> front, rest;
  for (auto& m : all) (kinds.insert(m.kind).second ? front : rest).push_back(std::move(m));
  front.insert(front.end(), std::make_move_iterator(rest.begin()), std::make_move_iterator(rest.end()));
  all = std::move(front);
  if (all.size() > count) all.resize(count);
  return all;
}

}  // namespace symschrod
