#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plexus/corpus.hpp"
#include "plexus/polygraph.hpp"
#include <functional>
#include <set>

#include "plexus/textio.hpp"

using namespace plexus;

namespace {

Polygraph single_edge() {
  return parse_polygraph_text("cell a : 0\ncell b : 0\ncell e : 1 = a => b\n").polygraph;
}

Polygraph two_disjoint_edges() {
  return parse_polygraph_text(
             "cell a : 0\ncell b : 0\ncell c : 0\ncell d : 0\n"
             "cell e : 1 = a => b\ncell f : 1 = c => d\n")
      .polygraph;
}

}  // namespace

TEST_CASE("pushout: wedge of two edges is the length-2 path") {
  Polygraph pt = parse_polygraph_text("cell p : 0\n").polygraph;
  Polygraph edge = single_edge();
  PolygraphMorphism f{&pt, &edge, {edge.cell("b")}};  // pick the head
  PolygraphMorphism g{&pt, &edge, {edge.cell("a")}};  // pick the tail
  REQUIRE(morphism_valid(f) == Verdict::True);
  PushoutResult po = pushout(f, g);
  CHECK(po.issues.empty());
  CHECK(po.result.cell_count(0) == 3);
  CHECK(po.result.cell_count(1) == 2);
  CHECK(validate(po.result).ok());
  // injections are injective and jointly surjective here
  PolygraphMorphism ia{&edge, &po.result, po.in_a};
  CHECK(morphism_valid(ia) == Verdict::True);
  CHECK(ia.injective());
}

TEST_CASE("pushout preserves cell sets dimensionwise") {
  // gluing d1 and a22 along the shared boundary path data yields the
  // 2-skeleton of the 3-plex built from them (8 cells: 3+3+2)
  Polyplex d1 = corpus::d1();
  Polyplex a22 = corpus::a22();
  // R = src path (p2) + the two endpoints identified on both sides
  const auto& bd_minus_1 = d1.boundary(1, Sign::Minus);
  const auto& bd_minus_2 = a22.boundary(1, Sign::Minus);
  IsoSearchResult isos = find_isomorphisms(bd_minus_1.plex->pg(), bd_minus_2.plex->pg());
  REQUIRE(!isos.isos.empty());
  // build R -> d1, R -> a22 for both signs via a coproduct of the boundary paths
  const auto& bp_plus_1 = d1.boundary(1, Sign::Plus);
  const auto& bp_plus_2 = a22.boundary(1, Sign::Plus);
  IsoSearchResult isop = find_isomorphisms(bp_plus_1.plex->pg(), bp_plus_2.plex->pg());
  REQUIRE(!isop.isos.empty());
  PushoutResult r = coproduct(bd_minus_1.plex->pg(), bp_plus_1.plex->pg());
  std::vector<CellId> into_d1(r.result.cell_count()), into_a22(r.result.cell_count());
  for (CellId c = 0; c < bd_minus_1.plex->pg().cell_count(); ++c) {
    into_d1[r.in_a[c]] = bd_minus_1.into[c];
    into_a22[r.in_a[c]] = bd_minus_2.into[isos.isos[0].map[c]];
  }
  for (CellId c = 0; c < bp_plus_1.plex->pg().cell_count(); ++c) {
    into_d1[r.in_b[c]] = bp_plus_1.into[c];
    into_a22[r.in_b[c]] = bp_plus_2.into[isop.isos[0].map[c]];
  }
  PolygraphMorphism f{&r.result, &d1.pg(), into_d1};
  PolygraphMorphism g{&r.result, &a22.pg(), into_a22};
  PushoutResult glued = pushout(f, g);
  CHECK(glued.issues.empty());
  CHECK(glued.result.cell_count(0) == 3);
  CHECK(glued.result.cell_count(1) == 3);
  CHECK(glued.result.cell_count(2) == 2);
  // independent set-level pushout of the cell sets, dimension by dimension
  std::size_t na = d1.pg().cell_count();
  std::size_t total = na + a22.pg().cell_count();
  std::vector<std::size_t> uf(total);
  for (std::size_t i = 0; i < total; ++i) uf[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return uf[x] == x ? x : uf[x] = find(uf[x]);
  };
  for (CellId c = 0; c < r.result.cell_count(); ++c) {
    std::size_t x = find(into_d1[c]);
    std::size_t y = find(na + into_a22[c]);
    if (x != y) uf[x] = y;
  }
  for (int d = 0; d <= 2; ++d) {
    std::set<std::size_t> roots;
    for (CellId c = 0; c < d1.pg().cell_count(); ++c) {
      if (d1.pg().dim(c) == d) roots.insert(find(c));
    }
    for (CellId c = 0; c < a22.pg().cell_count(); ++c) {
      if (a22.pg().dim(c) == d) roots.insert(find(na + c));
    }
    CHECK(glued.result.cell_count(d) == roots.size());
  }
}

TEST_CASE("epi-mono factorization") {
  Polygraph p = single_edge();
  PolygraphMorphism id = identity_morphism(p);
  auto fac = factor_epi_mono(id);
  CHECK(fac.image.cell_count() == p.cell_count());
  CHECK(fac.epi.is_identity_map());

  // collapse two disjoint edges onto one
  Polygraph two = two_disjoint_edges();
  PolygraphMorphism m{&two, &p,
                      {p.cell("a"), p.cell("b"), p.cell("a"), p.cell("b"), p.cell("e"),
                       p.cell("e")}};
  REQUIRE(morphism_valid(m) == Verdict::True);
  auto f2 = factor_epi_mono(m);
  CHECK(f2.epi.surjective());
  CHECK(f2.mono.injective());
  for (CellId c = 0; c < two.cell_count(); ++c) {
    CHECK(f2.mono.map[f2.epi.map[c]] == m.map[c]);
  }
  // image of the boundary collapse has 3 vertices and 3 edges
  Polyplex a22 = corpus::a22();
  Polyplex u = corpus::u_plex();
  const auto& bnd = u.boundary(2, Sign::Plus);
  // labeling of the target boundary inside u: image counts
  std::vector<bool> hit(u.pg().cell_count(), false);
  for (CellId c : bnd.into) hit[c] = true;
  int v = 0, e = 0;
  for (CellId c = 0; c < u.pg().cell_count(); ++c) {
    if (!hit[c]) continue;
    if (u.pg().dim(c) == 0) ++v;
    if (u.pg().dim(c) == 1) ++e;
  }
  CHECK(v == 3);
  CHECK(e == 3);
  CHECK(a22.pg().cell_count(1) == 4);  // while the boundary polyplex itself has 4
}

TEST_CASE("isomorphism search") {
  // rigid path
  Polygraph p2 = parse_polygraph_text(
                     "cell a0 : 0\ncell a1 : 0\ncell a2 : 0\n"
                     "cell e1 : 1 = a0 => a1\ncell e2 : 1 = a1 => a2\n")
                     .polygraph;
  auto isos = find_isomorphisms(p2, p2);
  CHECK(isos.isos.size() == 1);
  // two disjoint edges swap
  Polygraph two = two_disjoint_edges();
  auto autos = automorphisms(two);
  CHECK(autos.isos.size() == 2);
  // the swap is a group of order 2: composing it with itself is the identity
  bool found_nontrivial = false;
  for (auto& w : autos.isos) {
    if (!w.is_identity_map()) {
      found_nontrivial = true;
      CHECK(compose_morphisms(w, w).is_identity_map());
    }
  }
  CHECK(found_nontrivial);
  // Eckmann-Hilton polygraph: swapping the two 2-cells is an automorphism
  auto eh = corpus::eh_polygraph();
  auto ae = automorphisms(*eh);
  CHECK(ae.isos.size() == 2);
  // pinning breaks the symmetry
  IsoSearchOptions opts;
  opts.pinned[eh->cell("x")] = eh->cell("x");
  CHECK(find_isomorphisms(*eh, *eh, opts).isos.size() == 1);
  // non-isomorphic pair
  CHECK(find_isomorphisms(p2, two).isos.empty());
}

TEST_CASE("class flags are downward closed") {
  auto forest = corpus::forest_polygraph();
  CHECK(classify(*forest).positive);
  // every boundary-closed subset stays positive
  std::vector<CellId> cells = forest->support(forest->gen("U"));
  Polygraph sub = sub_polygraph(*forest, cells);
  CHECK(validate(sub).ok());
  CHECK(classify(sub).positive);
  CHECK(classify(sub).source_positive);
}

TEST_CASE("corpus objects validate") {
  for (const auto& name : corpus::names()) {
    auto entry = corpus::named(name);
    INFO(name);
    CHECK(validate(*entry.pg).ok());
    if (entry.has_universal) {
      CHECK(entry.pg->well_formed(entry.universal) == Verdict::True);
    }
  }
}
