#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plexus/analyzer.hpp"
#include "plexus/corpus.hpp"
#include "plexus/equality.hpp"
#include "plexus/textio.hpp"

using namespace plexus;

TEST_CASE("plex enumeration in dimension 2") {
  EnumerationBudget budget;
  budget.max_dim = 2;
  budget.max_cells = 13;
  ClassSpec all;
  auto plexes = enumerate_plexes(all, budget);
  CHECK(plexes.size() == 30);  // point, edge, and one per (n,m) with n+m <= 6
  // duplicate-free up to isomorphism and stable serialization
  for (std::size_t i = 0; i < plexes.size(); ++i) {
    for (std::size_t j = i + 1; j < plexes.size(); ++j) {
      CHECK_FALSE(polyplexes_isomorphic(plexes[i], plexes[j]).iso.has_value());
    }
  }
  auto again = enumerate_plexes(all, budget);
  REQUIRE(again.size() == plexes.size());
  for (std::size_t i = 0; i < plexes.size(); ++i) {
    CHECK(again[i].canonical_text() == plexes[i].canonical_text());
  }
  // positivity removes exactly the plexes with an identity boundary
  auto pos = enumerate_plexes(ClassSpec::parse("positive"), budget);
  CHECK(pos.size() == 17);  // point, edge, (n,m) with n,m >= 1 and n+m <= 6
  // the many-to-one plexes are those with a single generator as target
  auto mto = enumerate_plexes(ClassSpec::parse("many-to-one"), budget);
  for (const auto& p : mto) {
    if (p.dim() < 2) continue;
    CellId top = p.pg().cells_of_dim(2)[0];
    Expr t = p.pg().reduce(p.pg().tgt(top));
    CHECK(p.pg().is_gen(t));
  }
  CHECK(mto.size() == 2 + 6);  // A_{n,1} for n <= 6 within 13 cells
}

TEST_CASE("polyplex enumeration in dimension 1 is the path family") {
  EnumerationBudget budget;
  budget.max_dim = 1;
  budget.max_cells = 9;
  ClassSpec all;
  auto r = enumerate_polyplexes(all, budget);
  CHECK(r.unknown_comparisons == 0);
  CHECK(r.polyplexes.size() == 5);  // P_0 .. P_4
  for (const auto& p : r.polyplexes) {
    CHECK(polyplexes_isomorphic(p, corpus::path(p.pg().cell_count(1))).iso.has_value());
  }
}

TEST_CASE("positive 2-polyplexes with length-2 boundaries and two cells") {
  EnumerationBudget budget;
  budget.max_dim = 2;
  budget.max_cells = 9;
  auto r = enumerate_polyplexes(ClassSpec::parse("positive"), budget);
  CHECK(r.unknown_comparisons == 0);
  std::size_t count = 0;
  for (const auto& p : r.polyplexes) {
    if (p.dim() != 2) continue;
    if (p.pg().cell_count(2) != 2) continue;
    if (path_of(p.pg(), p.pg().boundary(p.universal(), 1, Sign::Minus)).size() != 2) continue;
    if (path_of(p.pg(), p.pg().boundary(p.universal(), 1, Sign::Plus)).size() != 2) continue;
    ++count;
  }
  // the horizontal pair and the two one-sided vertical stacks
  CHECK(count == 3);
}

TEST_CASE("certification of the good classes at a small budget") {
  EnumerationBudget budget;
  budget.max_dim = 2;
  budget.max_cells = 6;
  for (const char* cls : {"source-positive", "target-positive", "positive", "many-to-one"}) {
    CertReport rep = certify_good(ClassSpec::parse(cls), budget, CertifyMode::Serial);
    INFO(cls);
    CHECK(rep.verdict == CertVerdict::CertifiedUpToBudget);
    CHECK(rep.quarantined == 0);
    CHECK(rep.condition_c_ok);
    CHECK(rep.condition_c_checked > 0);
  }
}

TEST_CASE("the unrestricted class is refuted by the Eckmann-Hilton polyplex") {
  EnumerationBudget budget;
  budget.max_dim = 2;
  budget.max_cells = 4;
  budget.max_top_cells = 2;
  CertReport rep = certify_good(ClassSpec::parse("all"), budget, CertifyMode::Serial);
  CHECK(rep.verdict == CertVerdict::Refuted);
  REQUIRE(!rep.witnesses.empty());
  bool found_eh = false;
  for (const auto& w : rep.witnesses) {
    CHECK_FALSE(w.automorphism.is_identity_map());
    // re-verify the witness: it fixes the universal arrow
    const Polygraph& pg = w.polyplex.pg();
    Expr u = w.polyplex.universal();
    CHECK(arrows_equal(pg, map_expr(pg, u, pg, w.automorphism.map), u) == Verdict::True);
    if (polyplexes_isomorphic(w.polyplex, corpus::eh_polyplex()).iso.has_value()) found_eh = true;
  }
  CHECK(found_eh);
  // its automorphism group has order exactly 2
  AutGroup g = automorphism_group(corpus::eh_polyplex());
  CHECK(g.order() == 2);
}

TEST_CASE("serial and parallel certification agree") {
  EnumerationBudget budget;
  budget.max_dim = 2;
  budget.max_cells = 7;
  ClassSpec cls = ClassSpec::parse("source-positive");
  CertReport a = certify_good(cls, budget, CertifyMode::Serial);
  CertReport b = certify_good(cls, budget, CertifyMode::Parallel);
  CHECK(a.verdict == b.verdict);
  CHECK(a.counts_per_dim == b.counts_per_dim);
  CHECK(a.quarantined == b.quarantined);
  CHECK(a.witnesses.size() == b.witnesses.size());
}

TEST_CASE("eckmann-hilton demo") {
  EhDemo demo = eckmann_hilton_demo();
  CHECK(demo.derivation_ok);
  CHECK(demo.group.order() == 2);
  CHECK(demo.group.unresolved.empty());
  CHECK(demo.rejected_by_positive);
}

TEST_CASE("named examples all pass") {
  for (const auto& name : example_names()) {
    ExampleReport rep = run_named_example(name);
    INFO(rep.to_string());
    CHECK(rep.ok());
  }
}
