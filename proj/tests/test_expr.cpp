#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plexus/equality.hpp"
#include "plexus/polygraph.hpp"
#include "plexus/textio.hpp"

using namespace plexus;

namespace {

// Underlying polygraph of the 3-plex with a 2-cell whiskered by an edge on
// one side. Used throughout the boundary/support tests.
Polygraph u_polygraph() {
  return parse_polygraph_text(
             "cell x : 0\n"
             "cell y : 0\n"
             "cell z : 0\n"
             "cell f : 1 = x => y\n"
             "cell g : 1 = x => y\n"
             "cell v : 1 = y => z\n"
             "cell alpha : 2 = f => g\n"
             "cell alpha' : 2 = f *0 v => g *0 v\n"
             "cell U : 3 = alpha *0 v => alpha'\n")
      .polygraph;
}

// One 0-cell, two 2-cells on its identity.
Polygraph eh_polygraph() {
  return parse_polygraph_text(
             "cell e0 : 0\n"
             "cell x : 2 = e0 => e0\n"
             "cell y : 2 = e0 => e0\n")
      .polygraph;
}

// Two squares side by side: three parallel edges a->b, three b->c, with
// vertical 2-cells between consecutive ones.
Polygraph grid_polygraph() {
  return parse_polygraph_text(
             "cell a : 0\n"
             "cell b : 0\n"
             "cell c : 0\n"
             "cell e1 : 1 = a => b\n"
             "cell e2 : 1 = a => b\n"
             "cell e3 : 1 = a => b\n"
             "cell u1 : 1 = b => c\n"
             "cell u2 : 1 = b => c\n"
             "cell u3 : 1 = b => c\n"
             "cell p : 2 = e1 => e2\n"
             "cell q : 2 = e2 => e3\n"
             "cell s : 2 = u1 => u2\n"
             "cell t : 2 = u2 => u3\n")
      .polygraph;
}

// f,g : x -> y with alpha between them; h,k : y -> z with beta between them.
Polygraph two_segment_polygraph() {
  return parse_polygraph_text(
             "cell x : 0\n"
             "cell y : 0\n"
             "cell z : 0\n"
             "cell f : 1 = x => y\n"
             "cell g : 1 = x => y\n"
             "cell h : 1 = y => z\n"
             "cell k : 1 = y => z\n"
             "cell alpha : 2 = f => g\n"
             "cell beta : 2 = h => k\n")
      .polygraph;
}

}  // namespace

TEST_CASE("expression parsing and printing") {
  Polygraph p = u_polygraph();
  Expr e = p.from_tree(parse_expr("alpha *0 v"));
  CHECK(p.expr_to_string(e) == "alpha *0 v");
  Expr e2 = p.from_tree(parse_expr("(f *0 v) *1 gen(alpha')"));
  CHECK(p.comp_level(e2) == 1);
  // precedence: higher level binds tighter
  Expr e3 = p.from_tree(parse_expr("alpha *0 v *1 alpha'"));
  CHECK(p.comp_level(e3) == 0);
  CHECK(p.comp_level(p.right(e3)) == 1);
  CHECK_THROWS_AS(parse_expr("alpha *"), ParseError);
  CHECK_THROWS_AS((void)p.from_tree(parse_expr("nosuch")), std::invalid_argument);
}

TEST_CASE("reduction collapses units and left-associates") {
  Polygraph p = u_polygraph();
  // f *0 (g-path): identity absorbed at level >= dim
  Expr f = p.gen("f");
  Expr x = p.gen("x");
  CHECK(p.reduce(p.comp(0, x, f)) == f);
  CHECK(p.reduce(p.comp(1, f, f)) == f);
  Expr fv = p.from_tree(parse_expr("f *0 v"));
  Expr fv2 = p.from_tree(parse_expr("(f *0 v)"));
  CHECK(p.reduce(fv) == p.reduce(fv2));
  CHECK(p.arrow_dim(p.comp(2, p.gen("alpha"), p.gen("alpha"))) == 2);
}

TEST_CASE("boundaries") {
  Polygraph p = u_polygraph();
  Expr d1u = p.from_tree(parse_expr("alpha *0 v"));
  // 1-source of the whiskered 2-cell
  CHECK(p.boundary(d1u, 1, Sign::Minus) == p.reduce(p.from_tree(parse_expr("f *0 v"))));
  CHECK(p.boundary(d1u, 1, Sign::Plus) == p.reduce(p.from_tree(parse_expr("g *0 v"))));
  // k = dim fixed point
  Expr f = p.gen("f");
  CHECK(p.boundary(f, 1, Sign::Plus) == f);
  // globular laws on a 3-cell
  Expr U = p.gen("U");
  CHECK(p.boundary(p.boundary(U, 2, Sign::Plus), 0, Sign::Minus) ==
        p.boundary(U, 0, Sign::Minus));
  CHECK(p.boundary(U, 0, Sign::Plus) == p.gen("z"));
  CHECK(p.well_formed(d1u) == Verdict::True);
  // non-composable pair
  CHECK(p.well_formed(p.comp(0, p.gen("v"), p.gen("f"))) == Verdict::False);
}

TEST_CASE("count, identity, support") {
  Polygraph p = u_polygraph();
  Expr d1u = p.from_tree(parse_expr("alpha *0 v"));
  CHECK(p.count(d1u, p.cell("alpha")) == 1);
  CHECK(p.count(p.from_tree(parse_expr("f *0 v")), p.cell("g")) == 0);
  CHECK_THROWS_AS((void)p.count(d1u, p.cell("f")), std::invalid_argument);

  CHECK(p.is_identity(p.gen("f"), 2));       // a 1-generator is an identity 2-arrow
  CHECK_FALSE(p.is_identity(d1u, 2));
  CHECK_FALSE(p.is_identity(p.from_tree(parse_expr("f *0 v")), 1));

  auto sup = p.support(d1u);
  std::vector<std::string> names;
  for (CellId c : sup) names.push_back(p.name(c));
  CHECK(names == std::vector<std::string>{"x", "y", "z", "f", "g", "v", "alpha"});
  CHECK(p.support(p.gen("x")) == std::vector<CellId>{p.cell("x")});

  // count additivity over lower-level composition
  Polygraph g2 = grid_polygraph();
  Expr pq = g2.from_tree(parse_expr("p *1 q"));
  CHECK(g2.count(pq, g2.cell("p")) == 1);
  Expr big = g2.comp(0, pq, g2.from_tree(parse_expr("s *1 t")));
  CHECK(g2.count(big, g2.cell("t")) == 1);
}

TEST_CASE("whisker normal forms") {
  Polygraph p = two_segment_polygraph();
  // flat path
  Polygraph path = parse_polygraph_text(
                       "cell a0 : 0\ncell a1 : 0\ncell a2 : 0\ncell a3 : 0\n"
                       "cell f : 1 = a0 => a1\ncell g : 1 = a1 => a2\ncell h : 1 = a2 => a3\n")
                       .polygraph;
  auto w1 = whisker_normal_form(path, path.from_tree(parse_expr("(f *0 g) *0 h")));
  CHECK(w1.dim == 1);
  CHECK(w1.path == std::vector<CellId>{path.cell("f"), path.cell("g"), path.cell("h")});

  // single whisker with left and right contexts
  Polygraph u = u_polygraph();
  auto w2 = whisker_normal_form(u, u.from_tree(parse_expr("alpha *0 v")));
  CHECK(w2.dim == 2);
  REQUIRE(w2.seq2.ws.size() == 1);
  CHECK(w2.seq2.ws[0].l.empty());
  CHECK(w2.seq2.ws[0].gen == u.cell("alpha"));
  CHECK(w2.seq2.ws[0].r == std::vector<CellId>{u.cell("v")});
  CHECK(w2.seq2.src_path == std::vector<CellId>{u.cell("f"), u.cell("v")});

  // two whiskers from a staircase
  auto w3 = whisker_normal_form(p, p.from_tree(parse_expr("(alpha *0 h) *1 (g *0 beta)")));
  REQUIRE(w3.seq2.ws.size() == 2);
  CHECK(w3.seq2.ws[0].gen == p.cell("alpha"));
  CHECK(w3.seq2.ws[0].r == std::vector<CellId>{p.cell("h")});
  CHECK(w3.seq2.ws[1].l == std::vector<CellId>{p.cell("g")});
  CHECK(w3.seq2.ws[1].gen == p.cell("beta"));

  // realization is equal to the input as an arrow
  Expr e = p.from_tree(parse_expr("(alpha *0 h) *1 (g *0 beta)"));
  Expr back = realize2(p, w3.seq2);
  CHECK(arrows_equal(p, e, back) == Verdict::True);
}

TEST_CASE("arrows_equal on paths and 2-arrows") {
  Polygraph p = two_segment_polygraph();
  Expr a = p.from_tree(parse_expr("f *0 (h)"));
  Expr b = p.from_tree(parse_expr("(f) *0 h"));
  CHECK(arrows_equal(p, a, b) == Verdict::True);
  CHECK(arrows_equal(p, p.gen("f"), p.gen("g")) == Verdict::False);

  // the two interleavings of disjoint 2-cells agree
  Expr lhs = p.from_tree(parse_expr("(alpha *0 h) *1 (g *0 beta)"));
  Expr rhs = p.from_tree(parse_expr("(f *0 beta) *1 (alpha *0 k)"));
  CHECK(arrows_equal(p, lhs, rhs) == Verdict::True);
  CHECK(arrows_equal(p, lhs, p.from_tree(parse_expr("alpha *0 beta"))) == Verdict::True);

  // interchange law on the 2x2 grid
  Polygraph g2 = grid_polygraph();
  Expr ex1 = g2.from_tree(parse_expr("(p *1 q) *0 (s *1 t)"));
  Expr ex2 = g2.from_tree(parse_expr("(p *0 s) *1 (q *0 t)"));
  CHECK(arrows_equal(g2, ex1, ex2) == Verdict::True);
  // but the vertical order of overlapping cells matters
  Expr ex3 = g2.from_tree(parse_expr("(q *1 p) *0 (s *1 t)"));
  CHECK(g2.well_formed(ex3) == Verdict::False);
}

TEST_CASE("oracle: Eckmann-Hilton collapse") {
  Polygraph p = eh_polygraph();
  Expr xy = p.from_tree(parse_expr("x *1 y"));
  Expr yx = p.from_tree(parse_expr("y *1 x"));
  CHECK(p.well_formed(xy) == Verdict::True);
  OracleStats st;
  CHECK(oracle_equal(p, xy, yx, 20, 400000, &st) == Verdict::True);
  CHECK(oracle_equal(p, p.gen("x"), p.gen("y"), 20) == Verdict::False);
  CHECK(oracle_equal(p, xy, p.from_tree(parse_expr("x *0 y")), 20) == Verdict::True);
  // arrows_equal routes unital inputs through the oracle
  CHECK(arrows_equal(p, xy, yx) == Verdict::True);
}

TEST_CASE("axiom rewrites preserve top-dimension counts") {
  Polygraph g2 = grid_polygraph();
  Expr e = g2.from_tree(parse_expr("(p *1 q) *0 (s *1 t)"));
  auto base = g2.count_vector(e);
  auto rewrites = axiom_rewrites(g2, e, g2.node_count(e) + 8);
  CHECK(!rewrites.empty());
  for (const auto& rw : rewrites) {
    CHECK(g2.count_vector(rw.expr) == base);
    CHECK(g2.well_formed(rw.expr) == Verdict::True);
  }
}

TEST_CASE("derivation checking") {
  Polygraph p = eh_polygraph();
  Expr e = p.gen("e0");
  Expr x = p.gen("x");
  Expr y = p.gen("y");

  // empty derivation certifies reflexivity
  Derivation d0;
  d0.start = p.comp(1, x, y);
  CHECK(check_derivation(p, d0).ok);

  // e .0 x .0 y .0 e  =  e .0 y .0 x .0 e, via the two displayed chains
  auto c0 = [&](Expr a, Expr b) { return p.comp(0, a, b); };
  auto c1 = [&](Expr a, Expr b) { return p.comp(1, a, b); };
  Derivation d;
  d.start = c0(e, c0(x, c0(y, e)));
  auto step = [&](int axiom, std::vector<int> pos, Expr result) {
    d.steps.push_back({axiom, std::move(pos), result});
  };
  Expr ex = c0(e, x);           // e *0 x
  Expr ye = c0(y, e);           // y *0 e
  step(6, {}, c0(ex, ye));      // (e x)(y e)
  step(4, {0}, c0(c1(ex, e), ye));
  step(4, {1}, c0(c1(ex, e), c1(e, ye)));
  step(7, {}, c1(c0(ex, e), c0(e, ye)));
  step(6, {0}, c1(c0(e, c0(x, e)), c0(e, ye)));
  step(6, {1}, c1(c0(e, c0(x, e)), c0(c0(e, y), e)));
  step(7, {}, c0(c1(e, c0(e, y)), c1(c0(x, e), e)));
  step(4, {0}, c0(c0(e, y), c1(c0(x, e), e)));
  step(4, {1}, c0(c0(e, y), c0(x, e)));
  step(6, {}, c0(e, c0(y, c0(x, e))));
  auto res = check_derivation(p, d);
  INFO(res.message);
  CHECK(res.ok);
  CHECK(p.reduce(d.end(p)) == p.reduce(c0(y, x)));

  // a bogus exchange step is rejected with its index
  Derivation bad;
  bad.start = c1(x, y);
  bad.steps.push_back({7, {}, c1(y, x)});
  auto r2 = check_derivation(p, bad);
  CHECK_FALSE(r2.ok);
  CHECK(r2.failed_step == 0);

  // round trip through the textual format
  Polygraph g2 = grid_polygraph();
  std::string txt =
      "start: (p *1 q) *0 (s *1 t)\n"
      "{axiom: 7, position: root, result: (p *0 s) *1 (q *0 t)}\n";
  Derivation d3 = parse_derivation_text(g2, txt);
  CHECK(check_derivation(g2, d3).ok);
  CHECK(serialize_derivation(g2, d3) == txt);
}

TEST_CASE("validate and classify") {
  Polygraph p = u_polygraph();
  CHECK(validate(p).ok());
  auto flags = classify(p);
  CHECK(flags.positive);
  CHECK_FALSE(flags.globular);  // alpha' has composite boundaries
  CHECK_FALSE(flags.many_to_one);

  // non-parallel boundary is reported
  Polygraph bad = parse_polygraph_text(
                      "cell a0 : 0\ncell a1 : 0\ncell a2 : 0\n"
                      "cell f : 1 = a0 => a1\ncell g : 1 = a0 => a2\n"
                      "cell h : 1 = a0 => a2\n"
                      "cell w : 2 = g => f\n")
                      .polygraph;
  auto rep = validate(bad);
  CHECK_FALSE(rep.ok());
  bool found = false;
  for (auto& i : rep.issues) {
    if (i.kind == ValidationIssue::Kind::NonParallelBoundary) found = true;
  }
  CHECK(found);

  Polygraph eh = eh_polygraph();
  CHECK(validate(eh).ok());
  auto fe = classify(eh);
  CHECK_FALSE(fe.source_positive);
  CHECK_FALSE(fe.target_positive);

  Polygraph glob = parse_polygraph_text(
                       "cell a : 0\ncell b : 0\n"
                       "cell f : 1 = a => b\ncell g : 1 = a => b\n"
                       "cell w : 2 = f => g\n")
                       .polygraph;
  auto fg = classify(glob);
  CHECK(fg.globular);
  CHECK(fg.many_to_one);
  CHECK(fg.positive);

  // non-unital axioms hold for arrows over a positive polygraph
  Polygraph seg = two_segment_polygraph();
  CHECK(non_unital_axioms_hold(seg, seg.from_tree(parse_expr("(alpha *0 h) *1 (g *0 beta)"))));
}

TEST_CASE("polygraph file round trip") {
  Polygraph p = u_polygraph();
  std::string s1 = serialize_polygraph(p);
  Polygraph q = parse_polygraph_text(s1).polygraph;
  CHECK(serialize_polygraph(q) == s1);
  // ordering rule
  CHECK_THROWS_AS(parse_polygraph_text("cell w : 2 = f => g\ncell f : 1 = a => b\n"), ParseError);
  // empty file is the empty polygraph
  CHECK(parse_polygraph_text("").polygraph.cell_count() == 0);
}
