#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "symschrod/corpus.hpp"

using namespace symschrod;

namespace {

const std::vector<TableEntry>& corpus() {
  static const std::vector<TableEntry> c = load_corpus(default_corpus_path());
  return c;
}

const TableEntry& entry(const std::string& id) {
  for (const auto& e : corpus())
    if (e.id == id) return e;
  throw std::runtime_error("no entry " + id);
}

std::string minimal(const std::string& body) { return R"({"version":1,"entries":[)" + body + "]}"; }

const char* kGood = R"({"id":"X1","dim":3,"potential":"kappa/r^2","symmetries":["D"],"marks":[],
  "regimes":[{"name":"g","bindings":{},"expected":"n_{1,1}"}]})";

}  // namespace

TEST(Load, EntryCountAndIds) {
  EXPECT_EQ(corpus().size(), 33u);
  std::set<std::string> ids;
  for (const auto& e : corpus()) ids.insert(e.id);
  EXPECT_EQ(ids.size(), corpus().size());
  int t1 = 0, t2 = 0;
  for (const auto& e : corpus()) (e.id.rfind("T1.", 0) == 0 ? t1 : t2)++;
  EXPECT_EQ(t1, 24);
  EXPECT_EQ(t2, 9);
}

TEST(Load, WallRow) {
  const auto& e = entry("T1.14");
  EXPECT_EQ(e.potential, "kappa/x1^2");
  EXPECT_EQ(e.regimes.at(0).expected, "schr(1,2)");
  EXPECT_TRUE(e.has_mark("star"));
  EXPECT_TRUE(e.has_mark("asterisk"));
  EXPECT_EQ(entry("T2.3").dim, 2);
}

TEST(Load, MissingInBoyerFlags) {
  std::set<std::string> flagged;
  for (const auto& e : corpus())
    if (e.missing_in_boyer) flagged.insert(e.id);
  EXPECT_EQ(flagged, (std::set<std::string>{"T1.1", "T1.2", "T1.7", "T1.16", "T2.1", "T2.5"}));
}

TEST(Load, SchemaErrors) {
  EXPECT_NO_THROW(parse_corpus(minimal(kGood)));
  EXPECT_THROW(parse_corpus(minimal(std::string(kGood) + "," + kGood)), CorpusError);
  EXPECT_THROW(parse_corpus("{"), CorpusError);
  EXPECT_THROW(parse_corpus(minimal(R"({"id":"X2","dim":3})")), CorpusError);
  std::string bad_pot = kGood;
  bad_pot.replace(bad_pot.find("kappa/r^2"), 9, "x4");
  EXPECT_THROW(parse_corpus(minimal(bad_pot)), CorpusError);
  std::string bad_sym = kGood;
  bad_sym.replace(bad_sym.find("\"D\""), 3, "\"Q9\"");
  EXPECT_THROW(parse_corpus(minimal(bad_sym)), CorpusError);
  try {
    parse_corpus(minimal(bad_sym));
  } catch (const CorpusError& e) {
    EXPECT_NE(std::string(e.what()).find("X1"), std::string::npos);
  }
}

TEST(Hash, StableAndSensitive) {
  EXPECT_EQ(corpus_hash("abc"), corpus_hash("abc"));
  EXPECT_NE(corpus_hash("abc"), corpus_hash("abd"));
  EXPECT_EQ(corpus_hash("").size(), 16u);
}

TEST(Verify, InverseSquarePasses) {
  auto r = verify_entry(entry("T1.12"));
  EXPECT_TRUE(r.pass);
  ASSERT_EQ(r.regimes.size(), 1u);
  EXPECT_EQ(r.regimes[0].solver_dimension, 7);
  EXPECT_TRUE(r.regimes[0].extra.empty());
  EXPECT_TRUE(r.regimes[0].missing.empty());
}

TEST(Verify, AngularRampBothRegimes) {
  auto r = verify_entry(entry("T1.1"));
  ASSERT_EQ(r.regimes.size(), 2u);
  EXPECT_TRUE(r.regimes[0].pass);
  EXPECT_TRUE(r.regimes[1].pass);
  EXPECT_EQ(r.regimes[0].computed, "n_{3,1}");
  EXPECT_EQ(r.regimes[1].computed, "3n_{1,1}");
}

TEST(Verify, WrongGeneratorFailsWithResidual) {
  TableEntry e = entry("T1.1");
  e.symmetries.push_back("P1");
  auto r = verify_entry(e);
  EXPECT_FALSE(r.pass);
  const auto& kappa = r.regimes[0];
  auto it = std::find_if(kappa.generators.begin(), kappa.generators.end(),
                         [](const GeneratorCheck& g) { return g.name == "P1"; });
  ASSERT_NE(it, kappa.generators.end());
  EXPECT_FALSE(it->symmetric);
  EXPECT_FALSE(it->alpha_or_residual.empty());
  EXPECT_NE(it->alpha_or_residual, "0");
}

TEST(Verify, FalseMarkFails) {
  TableEntry e = entry("T1.12");
  e.marks.push_back("star");
  EXPECT_FALSE(verify_entry(e).pass);
}

TEST(Report, DeterministicAcrossThreadCounts) {
  std::vector<TableEntry> some;
  for (const char* id : {"T1.1", "T1.12", "T1.14", "T2.3"}) some.push_back(entry(id));
  auto a = report_json(verify_corpus(some, 1), "h");
  auto b = report_json(verify_corpus(some, 3), "h");
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("\"corpus_hash\": \"h\""), std::string::npos);
  EXPECT_NE(a.find("\"missing_in_boyer\": true"), std::string::npos);
}

TEST(Mutations, KindsAndDeterminism) {
  std::vector<TableEntry> some;
  for (const char* id : {"T1.1", "T1.12", "T1.14", "T2.3"}) some.push_back(entry(id));
  auto m = corpus_mutations(some, 12);
  ASSERT_EQ(m.size(), 12u);
  std::set<std::string> kinds;
  for (const auto& x : m) kinds.insert(x.kind);
  EXPECT_EQ(kinds.size(), 4u);
  auto again = corpus_mutations(some, 12);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(m[i].description, again[i].description);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_FALSE(verify_entry(m[i].entry).pass) << m[i].description;
}
