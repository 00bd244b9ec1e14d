#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "plexus/corpus.hpp"
#include "plexus/polyplex.hpp"
#include "plexus/textio.hpp"

using namespace plexus;

TEST_CASE("make_plex: the globe between two single edges") {
  Polyplex p1 = corpus::path(1);
  Polyplex globe = make_plex(p1, p1, "A");
  CHECK(globe.dim() == 2);
  CHECK(globe.pg().cell_count(0) == 2);
  CHECK(globe.pg().cell_count(1) == 2);
  CHECK(globe.pg().cell_count(2) == 1);
  auto iso = polyplexes_isomorphic(globe, corpus::globe(1, 1));
  CHECK(iso.iso.has_value());
}

TEST_CASE("make_plex: the 3-plex from d1 to a22") {
  Polyplex u = make_plex(corpus::d1(), corpus::a22(), "U");
  CHECK(u.pg().cell_count() == 9);
  CHECK(u.pg().cell_count(0) == 3);
  CHECK(u.pg().cell_count(1) == 3);
  CHECK(u.pg().cell_count(2) == 2);
  CHECK(u.pg().cell_count(3) == 1);
  auto iso = polyplexes_isomorphic(u, corpus::u_plex());
  CHECK(iso.iso.has_value());
  // non-parallel inputs are rejected (single edge vs length-2 boundaries)
  CHECK_THROWS_AS(make_plex(corpus::globe(1, 1), corpus::a22(), "W"), std::invalid_argument);
}

TEST_CASE("compose: whiskering the globe") {
  Polyplex d1 = compose(corpus::globe(1, 1), 0, corpus::path(1));
  auto iso = polyplexes_isomorphic(d1, corpus::d1());
  CHECK(iso.iso.has_value());
  Polyplex d2 = compose(corpus::path(1), 0, corpus::globe(1, 1));
  CHECK(polyplexes_isomorphic(d2, corpus::d2()).iso.has_value());
  // d1 and d2 differ already as labeled boundaries
  CHECK_FALSE(polyplexes_isomorphic(d1, d2).iso.has_value());
}

TEST_CASE("compose: u with a globe on the right") {
  Polyplex u = corpus::u_plex();
  Polyplex ua = compose(u, 0, corpus::globe(1, 1));
  CHECK(ua.pg().cell_count() == 13);
  CHECK(polyplexes_isomorphic(ua, corpus::u_a11()).iso.has_value());
}

TEST_CASE("compose: unit law at a degenerate level") {
  Polyplex d1 = corpus::d1();
  const auto& b = d1.boundary(1, Sign::Plus);
  Polyplex same = compose(d1, 1, *b.plex);
  CHECK(same.canonical_text() == d1.canonical_text());
}

TEST_CASE("boundary maps can collapse cells") {
  Polyplex u = corpus::u_plex();
  const auto& plus2 = u.boundary(2, Sign::Plus);
  // the target boundary is the 2-globe on paths of length 2
  CHECK(polyplexes_isomorphic(*plus2.plex, corpus::a22()).iso.has_value());
  // exactly two of its 1-cells collapse onto the whisker edge of u
  CellId v = kNoCell;
  for (CellId c = 0; c < u.pg().cell_count(); ++c) {
    // the whisker edge is the unique 1-cell appearing twice in the image
    if (u.pg().dim(c) != 1) continue;
  }
  std::map<CellId, int> preimages;
  for (CellId c = 0; c < plus2.plex->pg().cell_count(); ++c) {
    if (plus2.plex->pg().dim(c) == 1) preimages[plus2.into[c]]++;
  }
  int collapsed = 0;
  for (auto [cell, n] : preimages) {
    if (n == 2) {
      collapsed = n;
      v = cell;
    }
  }
  CHECK(collapsed == 2);
  REQUIRE(v != kNoCell);
  // and the source boundary map is injective on 1-cells
  const auto& minus2 = u.boundary(2, Sign::Minus);
  std::map<CellId, int> pre_minus;
  for (CellId c = 0; c < minus2.plex->pg().cell_count(); ++c) {
    if (minus2.plex->pg().dim(c) == 1) pre_minus[minus2.into[c]]++;
  }
  for (auto [cell, n] : pre_minus) CHECK(n == 1);
}

TEST_CASE("eval: generators map to their plexes") {
  auto X = corpus::iso_pair_polygraph();
  LabeledDiagram d = eval(X, X->gen("alpha"));
  CHECK(d.plex.dim() == 2);
  CHECK(d.plex.pg().cell_count() == 5);
  CHECK(d.labeling[d.plex.pg().cell(d.plex.pg().name(
            d.plex.pg().cells_of_dim(2)[0]))] == X->cell("alpha"));
  CHECK(d.representation_unique);
  // applying the labeling to the universal arrow gives back the expression
  CHECK(arrows_equal(*X, d.labeled_universal(), X->gen("alpha")) == Verdict::True);
}

TEST_CASE("eval: rebracketing yields isomorphic diagrams") {
  auto X = corpus::forest_polygraph();
  Expr e1 = X->from_tree(parse_expr("(A *0 g1) *1 ((f2 *0 B) *1 (C *0 g2))"));
  Expr e2 = X->from_tree(parse_expr("((A *0 g1) *1 (f2 *0 B)) *1 (C *0 g2)"));
  LabeledDiagram a = eval(X, e1);
  LabeledDiagram b = eval(X, e2);
  CHECK(arrows_equal(*X, e1, e2) == Verdict::True);
  bool unknown = false;
  auto isos = all_diagram_isos(a, b, &unknown);
  CHECK(isos.size() == 1);
  CHECK_FALSE(unknown);
  CHECK(arrows_equal(*X, a.labeled_universal(), e1) == Verdict::True);
}

TEST_CASE("eval distinguishes the two whiskered composites") {
  auto X = corpus::iso_pair_polygraph();
  Expr e1 = corpus::iso_pair_composite(*X, 1);
  Expr e2 = corpus::iso_pair_composite(*X, 2);
  REQUIRE(X->well_formed(e1) == Verdict::True);
  REQUIRE(X->well_formed(e2) == Verdict::True);
  LabeledDiagram p1 = eval(X, e1);
  LabeledDiagram p2 = eval(X, e2);
  // identical underlying polygraphs...
  CHECK(find_isomorphisms(p1.plex.pg(), p2.plex.pg()).isos.size() >= 1);
  CHECK(p1.plex.pg().cell_count() == 15);
  CHECK(p2.plex.pg().cell_count() == 15);
  // ...but not isomorphic as polyplexes
  auto iso = polyplexes_isomorphic(p1.plex, p2.plex);
  CHECK_FALSE(iso.iso.has_value());
  CHECK_FALSE(iso.had_unknown);
}

TEST_CASE("automorphism groups") {
  // the path is rigid
  AutGroup g1 = automorphism_group(corpus::path(3));
  CHECK(g1.order() == 1);
  CHECK(g1.unresolved.empty());
  // the Eckmann-Hilton polyplex has the swap
  AutGroup g2 = automorphism_group(corpus::eh_polyplex());
  CHECK(g2.order() == 2);
  CHECK(g2.unresolved.empty());
  // source-positive corpus polyplexes are rigid
  for (auto pp : {corpus::d1(), corpus::a22(), corpus::u_plex(), corpus::u_a11()}) {
    AutGroup g = automorphism_group(pp);
    CHECK(g.order() == 1);
    CHECK(g.unresolved.empty());
  }
}

TEST_CASE("locate_cell dichotomy in u") {
  Polyplex u = corpus::u_plex();
  const Polygraph& pg = u.pg();
  // find the named cells through the labeling-free canonical polygraph:
  // alpha is the unique 2-cell with a length-1 source
  CellId alpha = kNoCell, alphap = kNoCell, top = kNoCell;
  for (CellId c : pg.cells_of_dim(2)) {
    if (path_of(pg, pg.boundary(pg.gen(c), 1, Sign::Minus)).size() == 1) {
      alpha = c;
    } else {
      alphap = c;
    }
  }
  top = pg.cells_of_dim(3)[0];
  REQUIRE(alpha != kNoCell);
  REQUIRE(alphap != kNoCell);
  Location la = locate_cell(u, alpha);
  CHECK(la.source_side);
  CHECK(la.target_of.empty());
  Location lap = locate_cell(u, alphap);
  CHECK_FALSE(lap.source_side);
  CHECK(lap.target_of == std::vector<CellId>{top});
}

TEST_CASE("chains reach every top cell") {
  auto check_chain = [](const Polyplex& pp, const std::vector<CellId>& chain, CellId x) {
    const Polygraph& pg = pp.pg();
    int d = pp.dim();
    REQUIRE(!chain.empty());
    CHECK(chain.back() == x);
    auto ncells = [&](Expr e) {
      std::vector<CellId> out;
      for (CellId c : pg.support(e)) {
        if (pg.dim(c) == d - 1) out.push_back(c);
      }
      return out;
    };
    auto meet = [](std::vector<CellId> a, std::vector<CellId> b) {
      for (CellId c : a) {
        if (std::find(b.begin(), b.end(), c) != b.end()) return true;
      }
      return false;
    };
    CHECK(meet(ncells(pg.src(chain.front())),
               ncells(pg.boundary(pp.universal(), d - 1, Sign::Minus))));
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      CHECK(meet(ncells(pg.tgt(chain[i])), ncells(pg.src(chain[i + 1]))));
    }
  };
  auto X = corpus::iso_pair_polygraph();
  LabeledDiagram d = eval(X, corpus::iso_pair_composite(*X, 1));
  for (CellId c : d.plex.pg().cells_of_dim(3)) {
    check_chain(d.plex, find_chain(d.plex, c), c);
  }
  // a vertical stack of 3-cells needs a genuine 2-step chain
  Polygraph stack = parse_polygraph_text(
                        "cell a : 0\ncell b : 0\n"
                        "cell f : 1 = a => b\ncell g : 1 = a => b\n"
                        "cell A : 2 = f => g\ncell A' : 2 = f => g\ncell A'' : 2 = f => g\n"
                        "cell W1 : 3 = A => A'\ncell W2 : 3 = A' => A''\n")
                        .polygraph;
  Polyplex sp = make_polyplex(stack, stack.from_tree(parse_expr("W1 *2 W2")), nullptr);
  CellId w2 = kNoCell;
  for (CellId c : sp.pg().cells_of_dim(3)) {
    auto chain = find_chain(sp, c);
    check_chain(sp, chain, c);
    if (chain.size() == 2) w2 = c;
  }
  CHECK(w2 != kNoCell);
}

TEST_CASE("forest composites: equal boundaries, inequivalent arrows") {
  auto X = corpus::forest_polygraph();
  Expr e1 = corpus::forest_composite(*X, 1);
  Expr e2 = corpus::forest_composite(*X, 2);
  REQUIRE(X->well_formed(e1) == Verdict::True);
  REQUIRE(X->well_formed(e2) == Verdict::True);
  CHECK(arrows_equal(*X, X->boundary(e1, 2, Sign::Minus), corpus::forest_source2(*X)) ==
        Verdict::True);
  CHECK(arrows_equal(*X, X->boundary(e2, 2, Sign::Minus), corpus::forest_source2(*X)) ==
        Verdict::True);
  CHECK(arrows_equal(*X, X->boundary(e1, 2, Sign::Plus), corpus::forest_target2(*X)) ==
        Verdict::True);
  CHECK(arrows_equal(*X, X->boundary(e2, 2, Sign::Plus), corpus::forest_target2(*X)) ==
        Verdict::True);
  CHECK(arrows_equal(*X, e1, e2) == Verdict::False);
  CHECK(arrows_equal(*X, e1, e1) == Verdict::True);
}

TEST_CASE("iso-pair universal arrows are inequivalent") {
  auto X = corpus::iso_pair_polygraph();
  Expr e1 = corpus::iso_pair_composite(*X, 1);
  Expr e2 = corpus::iso_pair_composite(*X, 2);
  CHECK(arrows_equal(*X, e1, e2) == Verdict::False);
  // support is the whole polygraph on both sides
  CHECK(X->support(e1).size() == 15);
  CHECK(X->support(e2).size() == 15);
}

TEST_CASE("eh derivation checks and certifies the swap") {
  auto X = corpus::eh_polygraph();
  Derivation d = corpus::eh_derivation(*X);
  auto res = check_derivation(*X, d);
  INFO(res.message);
  CHECK(res.ok);
  CHECK(X->reduce(d.start) == X->reduce(X->from_tree(parse_expr("x *0 y"))));
  CHECK(X->reduce(d.end(*X)) == X->reduce(X->from_tree(parse_expr("y *0 x"))));
}
