#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "symschrod/expr.hpp"

namespace symschrod {

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Regime {
  std::string name;
  std::map<std::string, std::string> bindings;  // parameter -> expression text
  std::string expected;
};

// An alternative reading of a row; verified and reported next to the row
// but never counted towards its verdict.
struct Erratum {
  std::string note;
  std::string potential;                // empty: unchanged
  std::vector<std::string> symmetries;  // empty: unchanged
  std::string expected;                 // empty: unchanged
};

struct TableEntry {
  std::string id;
  int dim = 3;
  std::string potential;
  std::vector<std::string> symmetries;
  std::vector<std::string> marks;  // "star", "asterisk"
  bool missing_in_boyer = false;
  std::vector<std::string> notes;
  std::vector<Regime> regimes;
  std::vector<Erratum> errata;

  bool has_mark(const std::string& m) const;
};

std::string default_corpus_path();
// Throws CorpusError naming the entry on schema violations, duplicate ids,
// potentials that do not parse or symmetry names that do not resolve.
std::vector<TableEntry> load_corpus(const std::string& path);
std::vector<TableEntry> parse_corpus(const std::string& json_text);
// FNV-1a over the file bytes, as 16 hex digits.
std::string corpus_hash(const std::string& text);

struct GeneratorCheck {
  std::string name;
  bool symmetric = false;
  std::string alpha_or_residual;
};

struct MarkCheck {
  std::string mark;
  bool listed = false;
  bool valid = false;
  std::string detail;
};

struct RegimeReport {
  std::string id;
  std::string regime;
  std::string note;  // erratum text for erratum reports
  std::vector<GeneratorCheck> generators;
  bool closure = false;
  std::string closure_detail;
  std::vector<std::string> brackets;  // nonzero brackets, i < j
  std::string fingerprint;
  std::string expected, computed;
  bool label_match = false;
  std::vector<MarkCheck> marks;
  int solver_dimension = 0;
  std::vector<std::string> extra;    // solved generators outside the listed span
  std::vector<std::string> missing;  // listed generators the solver does not produce
  bool pass = false;
  double millis = 0;  // not serialized
};

struct VerificationReport {
  std::string id;
  bool missing_in_boyer = false;
  std::vector<std::string> notes;
  std::vector<RegimeReport> regimes;
  std::vector<RegimeReport> errata;
  bool pass = false;
};

VerificationReport verify_entry(const TableEntry& entry);
// threads <= 0 uses thread_count(); results come back in input order.
std::vector<VerificationReport> verify_corpus(const std::vector<TableEntry>& entries, int threads = 0);
// SYMSCHROD_THREADS if set and positive, else the hardware concurrency.
int thread_count();

std::string report_json(const std::vector<VerificationReport>& reports, const std::string& corpus_hash);

struct Mutation {
  std::string id;
  std::string kind;  // wrong-generator, dropped-generator, wrong-label, wrong-mark
  std::string description;
  TableEntry entry;
};

// Single-field perturbations of the given entries, shuffled with a fixed
// seed and cut to count.
std::vector<Mutation> corpus_mutations(const std::vector<TableEntry>& entries, std::size_t count,
                                       unsigned seed = 20241015);

}  // namespace symschrod
