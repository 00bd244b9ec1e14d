#include "plexus/corpus.hpp"

#include <sstream>

#include "plexus/textio.hpp"

namespace plexus::corpus {

namespace {

Polyplex from_text(const std::string& text, const std::string& universal) {
  Polygraph pg = parse_polygraph_text(text).polygraph;
  Expr u = pg.from_tree(parse_expr(universal));
  return make_polyplex(pg, u, nullptr);
}

std::string path_text(int n) {
  std::ostringstream os;
  for (int i = 0; i <= n; ++i) os << "cell a" << i << " : 0\n";
  for (int i = 1; i <= n; ++i) {
    os << "cell e" << i << " : 1 = a" << (i - 1) << " => a" << i << "\n";
  }
  return os.str();
}

std::string path_universal(int n) {
  if (n == 0) return "a0";
  std::string u = "e1";
  for (int i = 2; i <= n; ++i) u += " *0 e" + std::to_string(i);
  return u;
}

// One 2-cell between a length-n and a length-m path sharing their endpoints;
// a length-0 side is the identity of a0 and forces the other side to loop.
std::string globe_text(int n, int m) {
  std::ostringstream os;
  os << "cell a0 : 0\n";
  bool loop = n == 0 || m == 0;
  std::string end = loop ? "a0" : "a" + std::to_string(n);
  for (int i = 1; i < n; ++i) os << "cell a" << i << " : 0\n";
  for (int i = 1; i < m; ++i) os << "cell b" << i << " : 0\n";
  if (!loop) os << "cell " << end << " : 0\n";
  for (int i = 1; i <= n; ++i) {
    std::string from = i == 1 ? "a0" : "a" + std::to_string(i - 1);
    std::string to = i == n ? end : "a" + std::to_string(i);
    os << "cell s" << i << " : 1 = " << from << " => " << to << "\n";
  }
  for (int i = 1; i <= m; ++i) {
    std::string from = i == 1 ? "a0" : "b" + std::to_string(i - 1);
    std::string to = i == m ? end : "b" + std::to_string(i);
    os << "cell t" << i << " : 1 = " << from << " => " << to << "\n";
  }
  auto path_expr = [](char c, int len) {
    if (len == 0) return std::string("a0");
    std::string e = std::string(1, c) + "1";
    for (int i = 2; i <= len; ++i) e += " *0 " + std::string(1, c) + std::to_string(i);
    return e;
  };
  os << "cell A : 2 = " << path_expr('s', n) << " => " << path_expr('t', m) << "\n";
  return os.str();
}

const char* kD1 =
    "cell x : 0\ncell y : 0\ncell z : 0\n"
    "cell f : 1 = x => y\ncell g : 1 = x => y\ncell v : 1 = y => z\n"
    "cell alpha : 2 = f => g\n";

const char* kD2 =
    "cell x : 0\ncell y : 0\ncell z : 0\n"
    "cell v : 1 = x => y\ncell k : 1 = y => z\ncell h : 1 = y => z\n"
    "cell beta : 2 = k => h\n";

const char* kU =
    "cell x : 0\ncell y : 0\ncell z : 0\n"
    "cell f : 1 = x => y\ncell g : 1 = x => y\ncell v : 1 = y => z\n"
    "cell alpha : 2 = f => g\n"
    "cell alpha' : 2 = f *0 v => g *0 v\n"
    "cell U : 3 = alpha *0 v => alpha'\n";

const char* kV =
    "cell x : 0\ncell y : 0\ncell z : 0\n"
    "cell v : 1 = x => y\ncell k : 1 = y => z\ncell h : 1 = y => z\n"
    "cell beta : 2 = k => h\n"
    "cell beta' : 2 = v *0 k => v *0 h\n"
    "cell V : 3 = v *0 beta => beta'\n";

const char* kUA11 =
    "cell x : 0\ncell y : 0\ncell z : 0\ncell w : 0\n"
    "cell f : 1 = x => y\ncell g : 1 = x => y\ncell v : 1 = y => z\n"
    "cell k : 1 = z => w\ncell h : 1 = z => w\n"
    "cell alpha : 2 = f => g\ncell beta : 2 = k => h\n"
    "cell alpha' : 2 = f *0 v => g *0 v\n"
    "cell U : 3 = alpha *0 v => alpha'\n";

const char* kIsoPair =
    "cell x : 0\ncell y : 0\ncell z : 0\ncell w : 0\n"
    "cell f : 1 = x => y\ncell g : 1 = x => y\ncell v : 1 = y => z\n"
    "cell k : 1 = z => w\ncell h : 1 = z => w\n"
    "cell alpha : 2 = f => g\ncell beta : 2 = k => h\n"
    "cell alpha' : 2 = f *0 v => g *0 v\n"
    "cell beta' : 2 = v *0 k => v *0 h\n"
    "cell U : 3 = alpha *0 v => alpha'\n"
    "cell V : 3 = v *0 beta => beta'\n";

const char* kForest =
    "cell a : 0\ncell b : 0\ncell c : 0\n"
    "cell f1 : 1 = a => b\ncell f2 : 1 = a => b\ncell f3 : 1 = a => b\n"
    "cell g1 : 1 = b => c\ncell g2 : 1 = b => c\ncell g3 : 1 = b => c\n"
    "cell A : 2 = f1 => f2\ncell A' : 2 = f1 => f2\n"
    "cell C : 2 = f2 => f3\ncell C' : 2 = f2 => f3\n"
    "cell B : 2 = g1 => g2\ncell B' : 2 = g1 => g2\n"
    "cell D : 2 = g2 => g3\ncell D' : 2 = g2 => g3\n"
    "cell U : 3 = A *0 D => A' *0 D'\n"
    "cell V : 3 = C *0 B => C' *0 B'\n";

const char* kEH =
    "cell e0 : 0\n"
    "cell x : 2 = e0 => e0\n"
    "cell y : 2 = e0 => e0\n";

}  // namespace

Polyplex point() { return from_text("cell a0 : 0\n", "a0"); }

Polyplex path(int n) { return from_text(path_text(n), path_universal(n)); }

Polyplex globe(int n, int m) { return from_text(globe_text(n, m), "A"); }

Polyplex d1() { return from_text(kD1, "alpha *0 v"); }
Polyplex d2() { return from_text(kD2, "v *0 beta"); }
Polyplex a22() { return globe(2, 2); }
Polyplex u_plex() { return from_text(kU, "U"); }
Polyplex v_plex() { return from_text(kV, "V"); }
Polyplex u_a11() { return from_text(kUA11, "U *0 beta"); }

std::shared_ptr<const Polygraph> iso_pair_polygraph() {
  return std::make_shared<Polygraph>(parse_polygraph_text(kIsoPair).polygraph);
}

Expr iso_pair_composite(const Polygraph& pg, int which) {
  const char* e1 = "(U *0 beta) *2 ((f *0 V) *1 (alpha' *0 h))";
  const char* e2 = "(U *0 beta) *2 ((alpha' *0 k) *1 (g *0 V))";
  return pg.from_tree(parse_expr(which == 1 ? e1 : e2));
}

std::shared_ptr<const Polygraph> forest_polygraph() {
  return std::make_shared<Polygraph>(parse_polygraph_text(kForest).polygraph);
}

Expr forest_composite(const Polygraph& pg, int which) {
  const char* e1 = "((f1 *0 B) *1 U *1 (C *0 g3)) *2 ((A' *0 g1) *1 V *1 (f3 *0 D'))";
  const char* e2 = "((A *0 g1) *1 V *1 (f3 *0 D)) *2 ((f1 *0 B') *1 U *1 (C' *0 g3))";
  return pg.from_tree(parse_expr(which == 1 ? e1 : e2));
}

Expr forest_source2(const Polygraph& pg) {
  return pg.from_tree(parse_expr("(A *1 C) *0 (B *1 D)"));
}
Expr forest_target2(const Polygraph& pg) {
  return pg.from_tree(parse_expr("(A' *1 C') *0 (B' *1 D')"));
}

std::shared_ptr<const Polygraph> eh_polygraph() {
  return std::make_shared<Polygraph>(parse_polygraph_text(kEH).polygraph);
}

Polyplex eh_polyplex() { return from_text(kEH, "x *1 y"); }

Derivation eh_derivation(const Polygraph& pg) {
  Expr e = pg.gen("e0");
  Expr x = pg.gen("x");
  Expr y = pg.gen("y");
  auto c0 = [&](Expr a, Expr b) { return pg.comp(0, a, b); };
  auto c1 = [&](Expr a, Expr b) { return pg.comp(1, a, b); };
  Derivation d;
  d.start = c0(e, c0(x, c0(y, e)));
  Expr ex = c0(e, x);
  Expr ye = c0(y, e);
  auto step = [&](int axiom, std::vector<int> pos, Expr result) {
    d.steps.push_back({axiom, std::move(pos), result});
  };
  // first displayed chain, run backwards: regroup and split off units
  step(6, {}, c0(ex, ye));
  step(4, {0}, c0(c1(ex, e), ye));
  step(4, {1}, c0(c1(ex, e), c1(e, ye)));
  step(7, {}, c1(c0(ex, e), c0(e, ye)));
  // second displayed chain, run forwards
  step(6, {0}, c1(c0(e, c0(x, e)), c0(e, ye)));
  step(6, {1}, c1(c0(e, c0(x, e)), c0(c0(e, y), e)));
  step(7, {}, c0(c1(e, c0(e, y)), c1(c0(x, e), e)));
  step(4, {0}, c0(c0(e, y), c1(c0(x, e), e)));
  step(4, {1}, c0(c0(e, y), c0(x, e)));
  step(6, {}, c0(e, c0(y, c0(x, e))));
  return d;
}

Entry named(const std::string& name) {
  auto wrap = [](const Polyplex& pp) {
    Entry e;
    e.pg = pp.pg_ptr();
    e.has_universal = true;
    e.universal = pp.universal();
    return e;
  };
  auto from = [](const char* text, const char* uni) {
    Entry e;
    e.pg = std::make_shared<Polygraph>(parse_polygraph_text(text).polygraph);
    if (uni) {
      e.has_universal = true;
      e.universal = e.pg->from_tree(parse_expr(uni));
    }
    return e;
  };
  (void)wrap;
  if (name.rfind("p", 0) == 0 && name.size() > 1 &&
      name.find_first_not_of("0123456789", 1) == std::string::npos) {
    int n = std::stoi(name.substr(1));
    std::string text = path_text(n);
    return from(text.c_str(), path_universal(n).c_str());
  }
  if (name.rfind("a", 0) == 0) {
    auto comma = name.find(',');
    if (comma != std::string::npos) {
      int n = std::stoi(name.substr(1, comma - 1));
      int m = std::stoi(name.substr(comma + 1));
      std::string text = globe_text(n, m);
      return from(text.c_str(), "A");
    }
  }
  if (name == "d1") return from(kD1, "alpha *0 v");
  if (name == "d2") return from(kD2, "v *0 beta");
  if (name == "a22") {
    std::string text = globe_text(2, 2);
    return from(text.c_str(), "A");
  }
  if (name == "u-plex") return from(kU, "U");
  if (name == "v-plex") return from(kV, "V");
  if (name == "u-a11") return from(kUA11, "U *0 beta");
  if (name == "iso-pair") return from(kIsoPair, nullptr);
  if (name == "iso-composite-1" || name == "iso-composite-2") {
    Entry e = from(kIsoPair, nullptr);
    e.has_universal = true;
    e.universal = iso_pair_composite(*e.pg, name.back() == '1' ? 1 : 2);
    return e;
  }
  if (name == "forest") return from(kForest, nullptr);
  if (name == "forest-composite-1" || name == "forest-composite-2") {
    Entry e = from(kForest, nullptr);
    e.has_universal = true;
    e.universal = forest_composite(*e.pg, name.back() == '1' ? 1 : 2);
    return e;
  }
  if (name == "eh") return from(kEH, nullptr);
  if (name == "eh-polyplex") return from(kEH, "x *1 y");
  throw std::invalid_argument("no corpus entry named '" + name + "'");
}

std::vector<std::string> names() {
  return {"p0",          "p1",          "p2",     "p3",
          "a1,1",        "a2,2",        "d1",     "d2",
          "u-plex",      "v-plex",      "u-a11",  "iso-pair",
          "iso-composite-1", "iso-composite-2", "forest", "forest-composite-1",
          "forest-composite-2", "eh",   "eh-polyplex"};
}

}  // namespace plexus::corpus
