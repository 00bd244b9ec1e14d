#include "plexus/polygraph.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

#include "plexus/equality.hpp"

namespace plexus {

ExprTree ExprTree::clone() const {
  ExprTree t;
  t.is_gen = is_gen;
  t.name = name;
  t.level = level;
  if (left) t.left = std::make_unique<ExprTree>(left->clone());
  if (right) t.right = std::make_unique<ExprTree>(right->clone());
  return t;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  if (ok()) {
    os << "valid";
    return os.str();
  }
  for (const auto& i : issues) {
    os << "cell '" << i.cell << "': " << i.message << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Arena and memo tables
// ---------------------------------------------------------------------------

struct Polygraph::Memo {
  std::vector<Node> nodes;
  // key: (is_gen, level/cell, l, r) packed
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> dedup;
  std::unordered_map<std::uint32_t, Expr> reduce;
  std::unordered_map<std::uint64_t, Expr> boundary;
  std::unordered_map<std::uint32_t, Verdict> wf;
  mutable std::mutex mu;

  static std::uint64_t node_hash(const Node& n) {
    std::uint64_t h = n.is_gen ? 0x9e3779b97f4a7c15ull : 0xc2b2ae3d27d4eb4full;
    auto mix = [&h](std::uint64_t v) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    if (n.is_gen) {
      mix(n.cell);
    } else {
      mix(static_cast<std::uint64_t>(n.level));
      mix(n.l.id);
      mix(n.r.id);
    }
    return h;
  }
  static bool node_eq(const Node& a, const Node& b) {
    if (a.is_gen != b.is_gen) return false;
    if (a.is_gen) return a.cell == b.cell;
    return a.level == b.level && a.l == b.l && a.r == b.r;
  }
};

Polygraph::Polygraph() : memo_(std::make_unique<Memo>()) {}
Polygraph::Polygraph(Polygraph&&) noexcept = default;
Polygraph& Polygraph::operator=(Polygraph&&) noexcept = default;
Polygraph::~Polygraph() = default;

Polygraph::Polygraph(const Polygraph& other) : memo_(std::make_unique<Memo>()) {
  cells_ = other.cells_;
  by_name_ = other.by_name_;
  max_dim_ = other.max_dim_;
  {
    std::lock_guard<std::mutex> lk(other.memo_->mu);
    memo_->nodes = other.memo_->nodes;
    memo_->dedup = other.memo_->dedup;
    memo_->reduce = other.memo_->reduce;
    memo_->boundary = other.memo_->boundary;
    memo_->wf = other.memo_->wf;
  }
}

Polygraph& Polygraph::operator=(const Polygraph& other) {
  if (this != &other) {
    Polygraph tmp(other);
    *this = std::move(tmp);
  }
  return *this;
}

Polygraph::Polygraph(const std::vector<CellSpec>& specs) : memo_(std::make_unique<Memo>()) {
  // Two passes: declare cells, then attach boundaries (a cell's boundary may
  // only use lower-dimensional cells, which the dimension check enforces, but
  // declaring first gives better diagnostics for dangling names).
  cells_.reserve(specs.size());
  for (const auto& s : specs) {
    if (by_name_.count(s.name)) {
      throw std::invalid_argument("duplicate cell name: " + s.name);
    }
    Cell c;
    c.name = s.name;
    c.dim = s.dim;
    by_name_[s.name] = static_cast<CellId>(cells_.size());
    cells_.push_back(std::move(c));
    max_dim_ = std::max(max_dim_, s.dim);
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    if (s.dim >= 1) {
      if (!s.src || !s.tgt) {
        throw std::invalid_argument("cell " + s.name + ": missing boundary");
      }
      cells_[i].src = from_tree(*s.src);
      cells_[i].tgt = from_tree(*s.tgt);
    }
  }
}

std::size_t Polygraph::cell_count(int dim) const {
  std::size_t n = 0;
  for (const auto& c : cells_)
    if (c.dim == dim) ++n;
  return n;
}

bool Polygraph::has_cell(const std::string& name) const { return by_name_.count(name) != 0; }

CellId Polygraph::cell(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw std::invalid_argument("no such cell: " + name);
  return it->second;
}

Expr Polygraph::src(CellId c) const { return cells_[c].src; }
Expr Polygraph::tgt(CellId c) const { return cells_[c].tgt; }

std::vector<CellId> Polygraph::cells_of_dim(int dim) const {
  std::vector<CellId> out;
  for (CellId c = 0; c < cells_.size(); ++c)
    if (cells_[c].dim == dim) out.push_back(c);
  return out;
}

std::vector<CellId> Polygraph::all_cells() const {
  std::vector<CellId> out(cells_.size());
  for (CellId c = 0; c < cells_.size(); ++c) out[c] = c;
  return out;
}

Expr Polygraph::intern(Node n) const {
  std::lock_guard<std::mutex> lk(memo_->mu);
  std::uint64_t h = Memo::node_hash(n);
  auto& bucket = memo_->dedup[h];
  for (std::uint32_t id : bucket) {
    if (Memo::node_eq(memo_->nodes[id], n)) return Expr{id};
  }
  std::uint32_t id = static_cast<std::uint32_t>(memo_->nodes.size());
  memo_->nodes.push_back(n);
  bucket.push_back(id);
  return Expr{id};
}

const Polygraph::Node& Polygraph::node(Expr e) const {
  std::lock_guard<std::mutex> lk(memo_->mu);
  return memo_->nodes[e.id];
}

Expr Polygraph::gen(CellId c) const {
  Node n;
  n.is_gen = true;
  n.level = 0;
  n.cell = c;
  n.dim = cells_[c].dim;
  return intern(n);
}

Expr Polygraph::comp(int k, Expr l, Expr r) const {
  Node n;
  n.is_gen = false;
  n.level = k;
  n.cell = kNoCell;
  n.l = l;
  n.r = r;
  n.dim = std::max(raw_dim(l), raw_dim(r));
  return intern(n);
}

Expr Polygraph::from_tree(const ExprTree& t) const {
  if (t.is_gen) return gen(cell(t.name));
  return comp(t.level, from_tree(*t.left), from_tree(*t.right));
}

ExprTree Polygraph::to_tree(Expr e) const {
  if (is_gen(e)) return ExprTree::gen(name(gen_cell(e)));
  return ExprTree::comp(comp_level(e), to_tree(left(e)), to_tree(right(e)));
}

bool Polygraph::is_gen(Expr e) const { return node(e).is_gen; }
CellId Polygraph::gen_cell(Expr e) const { return node(e).cell; }
int Polygraph::comp_level(Expr e) const { return node(e).level; }
Expr Polygraph::left(Expr e) const { return node(e).l; }
Expr Polygraph::right(Expr e) const { return node(e).r; }
int Polygraph::raw_dim(Expr e) const { return node(e).dim; }

int Polygraph::node_count(Expr e) const {
  if (is_gen(e)) return 1;
  return 1 + node_count(left(e)) + node_count(right(e));
}

// ---------------------------------------------------------------------------
// Reduction, boundaries
// ---------------------------------------------------------------------------

Expr Polygraph::reduce(Expr e) const {
  {
    std::lock_guard<std::mutex> lk(memo_->mu);
    auto it = memo_->reduce.find(e.id);
    if (it != memo_->reduce.end()) return it->second;
  }
  Expr r = reduce_uncached(e);
  std::lock_guard<std::mutex> lk(memo_->mu);
  memo_->reduce.emplace(e.id, r);
  memo_->reduce.emplace(r.id, r);
  return r;
}

Expr Polygraph::reduce_uncached(Expr e) const {
  if (is_gen(e)) return e;
  int k = comp_level(e);
  Expr l = reduce(left(e));
  Expr r = reduce(right(e));
  // Unit law: a factor that is a k-arrow is the unit of #_k against the other.
  if (raw_dim(l) <= k) return r;
  if (raw_dim(r) <= k) return l;
  // Left-associate the #_k spine.
  std::vector<Expr> spine;
  std::function<void(Expr)> flatten = [&](Expr x) {
    if (!is_gen(x) && comp_level(x) == k) {
      flatten(left(x));
      flatten(right(x));
    } else {
      spine.push_back(x);
    }
  };
  flatten(l);
  flatten(r);
  Expr acc = spine[0];
  for (std::size_t i = 1; i < spine.size(); ++i) acc = comp(k, acc, spine[i]);
  return acc;
}

int Polygraph::arrow_dim(Expr e) const { return raw_dim(reduce(e)); }

Expr Polygraph::boundary(Expr e, int k, Sign sign) const {
  e = reduce(e);
  if (k >= raw_dim(e)) return e;
  std::uint64_t key = (static_cast<std::uint64_t>(e.id) << 8) |
                      (static_cast<std::uint64_t>(k & 0x7f) << 1) |
                      (sign == Sign::Plus ? 1 : 0);
  {
    std::lock_guard<std::mutex> lk(memo_->mu);
    auto it = memo_->boundary.find(key);
    if (it != memo_->boundary.end()) return it->second;
  }
  Expr b = boundary_uncached(e, k, sign);
  std::lock_guard<std::mutex> lk(memo_->mu);
  memo_->boundary.emplace(key, b);
  return b;
}

Expr Polygraph::boundary_uncached(Expr e, int k, Sign sign) const {
  // e reduced, k < dim(e)
  if (is_gen(e)) {
    CellId c = gen_cell(e);
    Expr step = sign == Sign::Minus ? cells_[c].src : cells_[c].tgt;
    return boundary(step, k, sign);  // step has dimension <= dim(c)-1
  }
  int n = comp_level(e);
  if (k < n) return boundary(left(e), k, sign);
  if (k == n) return sign == Sign::Minus ? boundary(left(e), k, Sign::Minus)
                                         : boundary(right(e), k, Sign::Plus);
  // k > n: boundaries distribute over #_n; reduce to collapse new units.
  return reduce(comp(n, boundary(left(e), k, sign), boundary(right(e), k, sign)));
}

Verdict Polygraph::well_formed(Expr e) const {
  {
    std::lock_guard<std::mutex> lk(memo_->mu);
    auto it = memo_->wf.find(e.id);
    if (it != memo_->wf.end()) return it->second;
  }
  Verdict v;
  if (is_gen(e)) {
    v = Verdict::True;
  } else {
    int k = comp_level(e);
    v = verdict_and(well_formed(left(e)), well_formed(right(e)));
    if (v != Verdict::False) {
      if (k >= kMaxDim) {
        v = Verdict::False;
      } else {
        Verdict inter =
            arrows_equal(*this, boundary(left(e), k, Sign::Plus), boundary(right(e), k, Sign::Minus));
        v = verdict_and(v, inter);
      }
    }
  }
  std::lock_guard<std::mutex> lk(memo_->mu);
  memo_->wf.emplace(e.id, v);
  return v;
}

long Polygraph::count(Expr e, CellId c) const {
  Expr r = reduce(e);
  int d = raw_dim(r);
  if (cells_[c].dim != d) {
    throw std::invalid_argument("count: generator dimension " + std::to_string(cells_[c].dim) +
                                " does not match arrow dimension " + std::to_string(d));
  }
  std::function<long(Expr)> go = [&](Expr x) -> long {
    if (is_gen(x)) return gen_cell(x) == c ? 1 : 0;
    return go(left(x)) + go(right(x));
  };
  return go(r);
}

std::map<CellId, long> Polygraph::count_vector(Expr e) const {
  Expr r = reduce(e);
  int d = raw_dim(r);
  std::map<CellId, long> out;
  std::function<void(Expr)> go = [&](Expr x) {
    if (is_gen(x)) {
      if (cells_[gen_cell(x)].dim == d) out[gen_cell(x)]++;
      return;
    }
    go(left(x));
    go(right(x));
  };
  go(r);
  return out;
}

bool Polygraph::is_identity(Expr e, int n) const {
  int d = arrow_dim(e);
  if (d > n) {
    throw std::invalid_argument("is_identity: expression of dimension " + std::to_string(d) +
                                " is not an " + std::to_string(n) + "-arrow");
  }
  return d < n;
}

void Polygraph::support_into(Expr e, std::vector<bool>& seen) const {
  if (is_gen(e)) {
    CellId c = gen_cell(e);
    if (seen[c]) return;
    seen[c] = true;
    if (cells_[c].dim >= 1) {
      support_into(cells_[c].src, seen);
      support_into(cells_[c].tgt, seen);
    }
    return;
  }
  support_into(left(e), seen);
  support_into(right(e), seen);
}

std::vector<CellId> Polygraph::support(Expr e) const {
  std::vector<bool> seen(cells_.size(), false);
  support_into(reduce(e), seen);
  std::vector<CellId> out;
  for (CellId c = 0; c < cells_.size(); ++c)
    if (seen[c]) out.push_back(c);
  return out;
}

std::string Polygraph::expr_to_string(Expr e) const {
  if (is_gen(e)) return name(gen_cell(e));
  std::string l = expr_to_string(left(e));
  std::string r = expr_to_string(right(e));
  if (!is_gen(left(e))) l = "(" + l + ")";
  if (!is_gen(right(e))) r = "(" + r + ")";
  return l + " *" + std::to_string(comp_level(e)) + " " + r;
}

std::string Polygraph::expr_key(Expr e) const {
  std::string out;
  std::function<void(Expr)> go = [&](Expr x) {
    if (is_gen(x)) {
      out += 'g';
      out += std::to_string(gen_cell(x));
    } else {
      out += 'c';
      out += std::to_string(comp_level(x));
      out += '(';
      go(left(x));
      out += ',';
      go(right(x));
      out += ')';
    }
  };
  go(e);
  return out;
}

// ---------------------------------------------------------------------------
// Builder
// ---------------------------------------------------------------------------

CellId PolygraphBuilder::add_cell(const std::string& name, int dim, std::optional<ExprTree> src,
                                  std::optional<ExprTree> tgt) {
  if (by_name_.count(name)) throw std::invalid_argument("duplicate cell name: " + name);
  Polygraph::CellSpec s;
  s.name = name;
  s.dim = dim;
  s.src = std::move(src);
  s.tgt = std::move(tgt);
  by_name_[name] = specs_.size();
  specs_.push_back(std::move(s));
  return static_cast<CellId>(specs_.size() - 1);
}

bool PolygraphBuilder::has_cell(const std::string& name) const { return by_name_.count(name) != 0; }

// ---------------------------------------------------------------------------
// validate / classify
// ---------------------------------------------------------------------------

ValidationReport validate(const Polygraph& p) {
  ValidationReport rep;
  auto issue = [&](ValidationIssue::Kind k, CellId c, std::string msg) {
    rep.issues.push_back({k, p.name(c), std::move(msg)});
  };
  for (CellId c = 0; c < p.cell_count(); ++c) {
    int d = p.dim(c);
    if (d > kMaxDim) {
      issue(ValidationIssue::Kind::DimensionTooHigh, c,
            "dimension " + std::to_string(d) + " exceeds the supported maximum " +
                std::to_string(kMaxDim));
      continue;
    }
    if (d == 0) continue;
    Expr s = p.src(c), t = p.tgt(c);
    if (!s.valid() || !t.valid()) {
      issue(ValidationIssue::Kind::MissingBoundary, c, "missing source or target");
      continue;
    }
    bool dim_ok = true;
    for (Expr b : {s, t}) {
      for (CellId g : p.support(b)) {
        if (p.dim(g) >= d) {
          issue(ValidationIssue::Kind::BoundaryDimension, c,
                "boundary uses cell '" + p.name(g) + "' of dimension >= " + std::to_string(d));
          dim_ok = false;
        }
      }
    }
    if (!dim_ok) continue;
    Verdict wf = verdict_and(p.well_formed(s), p.well_formed(t));
    if (wf == Verdict::False) {
      issue(ValidationIssue::Kind::IllFormedBoundary, c, "ill-formed boundary expression");
      continue;
    }
    if (wf == Verdict::Unknown) {
      issue(ValidationIssue::Kind::UndecidedBoundary, c,
            "boundary well-formedness could not be decided");
      continue;
    }
    // Parallelism: viewed as (d-1)-arrows, src and tgt must have equal
    // (d-2)-boundaries on both sides.
    if (d >= 2) {
      for (Sign sg : {Sign::Minus, Sign::Plus}) {
        Verdict eq = arrows_equal(p, p.boundary(s, d - 2, sg), p.boundary(t, d - 2, sg));
        if (eq == Verdict::False) {
          issue(ValidationIssue::Kind::NonParallelBoundary, c,
                std::string("non-parallel boundary (") + sign_char(sg) + " side)");
        } else if (eq == Verdict::Unknown) {
          issue(ValidationIssue::Kind::UndecidedBoundary, c,
                std::string("parallelism could not be decided (") + sign_char(sg) + " side)");
        }
      }
    }
  }
  return rep;
}

ClassFlags classify(const Polygraph& p) {
  ClassFlags f;
  f.source_positive = true;
  f.target_positive = true;
  f.many_to_one = true;
  f.globular = true;
  for (CellId c = 0; c < p.cell_count(); ++c) {
    int d = p.dim(c);
    if (d == 0) continue;
    Expr s = p.reduce(p.src(c)), t = p.reduce(p.tgt(c));
    if (p.is_identity(s, d - 1)) f.source_positive = false;
    if (p.is_identity(t, d - 1)) f.target_positive = false;
    bool tgt_is_cell = p.is_gen(t) && p.dim(p.gen_cell(t)) == d - 1;
    bool src_is_cell = p.is_gen(s) && p.dim(p.gen_cell(s)) == d - 1;
    if (!tgt_is_cell) f.many_to_one = false;
    if (!tgt_is_cell || !src_is_cell) f.globular = false;
  }
  f.positive = f.source_positive && f.target_positive;
  return f;
}

bool non_unital_axioms_hold(const Polygraph& p, Expr e) {
  Expr r = p.reduce(e);
  int d = p.raw_dim(r);
  for (int n = 0; n < d; ++n) {
    for (Sign sg : {Sign::Minus, Sign::Plus}) {
      if (p.arrow_dim(p.boundary(r, n, sg)) != n) return false;
    }
  }
  std::function<bool(Expr)> comps_ok = [&](Expr x) -> bool {
    if (p.is_gen(x)) return true;
    int dl = p.arrow_dim(p.left(x)), dr = p.arrow_dim(p.right(x));
    if (p.arrow_dim(x) != std::max(dl, dr)) return false;
    return comps_ok(p.left(x)) && comps_ok(p.right(x));
  };
  return comps_ok(r);
}

// ---------------------------------------------------------------------------
// Morphisms
// ---------------------------------------------------------------------------

bool PolygraphMorphism::is_identity_map() const {
  if (source != target && source->cell_count() != target->cell_count()) return false;
  for (CellId c = 0; c < map.size(); ++c)
    if (map[c] != c) return false;
  return true;
}

bool PolygraphMorphism::injective() const {
  std::vector<bool> hit(target->cell_count(), false);
  for (CellId c : map) {
    if (hit[c]) return false;
    hit[c] = true;
  }
  return true;
}

bool PolygraphMorphism::surjective() const {
  std::vector<bool> hit(target->cell_count(), false);
  for (CellId c : map) hit[c] = true;
  for (bool b : hit)
    if (!b) return false;
  return true;
}

Expr map_expr(const Polygraph& source, Expr e, const Polygraph& target,
              const std::vector<CellId>& cell_map) {
  if (source.is_gen(e)) return target.gen(cell_map[source.gen_cell(e)]);
  return target.comp(source.comp_level(e), map_expr(source, source.left(e), target, cell_map),
                     map_expr(source, source.right(e), target, cell_map));
}

Verdict morphism_valid(const PolygraphMorphism& m) {
  const Polygraph& P = *m.source;
  const Polygraph& Q = *m.target;
  if (m.map.size() != P.cell_count()) return Verdict::False;
  Verdict all = Verdict::True;
  for (CellId c = 0; c < P.cell_count(); ++c) {
    if (P.dim(c) != Q.dim(m.map[c])) return Verdict::False;
    if (P.dim(c) == 0) continue;
    Verdict s = arrows_equal(Q, map_expr(P, P.src(c), Q, m.map), Q.src(m.map[c]));
    Verdict t = arrows_equal(Q, map_expr(P, P.tgt(c), Q, m.map), Q.tgt(m.map[c]));
    all = verdict_and(all, verdict_and(s, t));
    if (all == Verdict::False) return all;
  }
  return all;
}

PolygraphMorphism identity_morphism(const Polygraph& p) {
  PolygraphMorphism m;
  m.source = &p;
  m.target = &p;
  m.map.resize(p.cell_count());
  for (CellId c = 0; c < p.cell_count(); ++c) m.map[c] = c;
  return m;
}

PolygraphMorphism compose_morphisms(const PolygraphMorphism& f, const PolygraphMorphism& g) {
  PolygraphMorphism m;
  m.source = f.source;
  m.target = g.target;
  m.map.resize(f.map.size());
  for (CellId c = 0; c < f.map.size(); ++c) m.map[c] = g.map[f.map[c]];
  return m;
}

// ---------------------------------------------------------------------------
// Pushout, coproduct, factorization, sub-polygraph
// ---------------------------------------------------------------------------

namespace {

struct UnionFind {
  std::vector<std::size_t> up;
  explicit UnionFind(std::size_t n) : up(n) {
    for (std::size_t i = 0; i < n; ++i) up[i] = i;
  }
  std::size_t find(std::size_t x) {
    while (up[x] != x) x = up[x] = up[up[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) up[std::max(a, b)] = std::min(a, b);
  }
};

PushoutResult glue(const Polygraph& A, const Polygraph& B,
                   const std::vector<std::pair<CellId, CellId>>& identify) {
  std::size_t na = A.cell_count(), nb = B.cell_count();
  UnionFind uf(na + nb);
  for (auto [a, b] : identify) uf.unite(a, na + b);

  // Classes, ordered by (dimension, A-cells in table order, then B-only cells).
  struct Class {
    int dim;
    bool glued = false;
    CellId a = kNoCell, b = kNoCell;  // representatives
  };
  std::map<std::size_t, Class> classes;
  for (CellId c = 0; c < na; ++c) {
    auto& cl = classes[uf.find(c)];
    cl.dim = A.dim(c);
    if (cl.a == kNoCell) cl.a = c;
  }
  for (CellId c = 0; c < nb; ++c) {
    auto& cl = classes[uf.find(na + c)];
    cl.dim = B.dim(c);
    if (cl.b == kNoCell) cl.b = c;
  }
  for (auto& [root, cl] : classes) cl.glued = cl.a != kNoCell && cl.b != kNoCell;

  std::vector<std::size_t> order;
  for (auto& [root, cl] : classes) order.push_back(root);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const Class& cx = classes.at(x);
    const Class& cy = classes.at(y);
    if (cx.dim != cy.dim) return cx.dim < cy.dim;
    bool xa = cx.a != kNoCell, ya = cy.a != kNoCell;
    if (xa != ya) return xa;  // A-reachable classes first
    if (xa) return cx.a < cy.a;
    return cx.b < cy.b;
  });

  std::map<std::size_t, CellId> root_to_new;
  for (std::size_t i = 0; i < order.size(); ++i) root_to_new[order[i]] = static_cast<CellId>(i);
  std::vector<CellId> in_a(na), in_b(nb);
  for (CellId c = 0; c < na; ++c) in_a[c] = root_to_new[uf.find(c)];
  for (CellId c = 0; c < nb; ++c) in_b[c] = root_to_new[uf.find(na + c)];

  PolygraphBuilder b2;
  std::vector<std::string> new_names;
  {
    std::map<std::string, int> used;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Class& cl = classes.at(order[i]);
      std::string nm = cl.glued ? "G." + A.name(cl.a)
                                : (cl.a != kNoCell ? "L." + A.name(cl.a) : "R." + B.name(cl.b));
      while (used.count(nm)) nm += "'";
      used[nm] = 1;
      new_names.push_back(nm);
    }
  }
  std::function<ExprTree(const Polygraph&, Expr, const std::vector<CellId>&)> transport =
      [&](const Polygraph& src, Expr e, const std::vector<CellId>& emb) -> ExprTree {
    if (src.is_gen(e)) return ExprTree::gen(new_names[emb[src.gen_cell(e)]]);
    return ExprTree::comp(src.comp_level(e), transport(src, src.left(e), emb),
                          transport(src, src.right(e), emb));
  };
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Class& cl = classes.at(order[i]);
    if (cl.dim == 0) {
      b2.add_cell(new_names[i], 0);
    } else if (cl.a != kNoCell) {
      b2.add_cell(new_names[i], cl.dim, transport(A, A.src(cl.a), in_a),
                  transport(A, A.tgt(cl.a), in_a));
    } else {
      b2.add_cell(new_names[i], cl.dim, transport(B, B.src(cl.b), in_b),
                  transport(B, B.tgt(cl.b), in_b));
    }
  }
  PushoutResult out{b2.build(), std::move(in_a), std::move(in_b), {}};

  // Glued cells must have compatible boundaries from both sides; anything
  // else about the result is inherited from the (valid) inputs.
  for (auto& [root, cl] : classes) {
    if (!cl.glued || cl.dim == 0) continue;
    Expr sa = map_expr(A, A.src(cl.a), out.result, out.in_a);
    Expr sb = map_expr(B, B.src(cl.b), out.result, out.in_b);
    Expr ta = map_expr(A, A.tgt(cl.a), out.result, out.in_a);
    Expr tb = map_expr(B, B.tgt(cl.b), out.result, out.in_b);
    if (arrows_equal(out.result, sa, sb) == Verdict::False ||
        arrows_equal(out.result, ta, tb) == Verdict::False) {
      out.issues.push_back("glued cell '" + A.name(cl.a) + "'/'" + B.name(cl.b) +
                           "' has incompatible transported boundaries");
    }
  }
  return out;
}

}  // namespace

PushoutResult pushout(const PolygraphMorphism& f, const PolygraphMorphism& g) {
  if (f.source->cell_count() != g.source->cell_count()) {
    throw std::invalid_argument("pushout: morphisms must share their source");
  }
  std::vector<std::pair<CellId, CellId>> identify;
  for (CellId r = 0; r < f.map.size(); ++r) identify.push_back({f.map[r], g.map[r]});
  return glue(*f.target, *g.target, identify);
}

PushoutResult coproduct(const Polygraph& a, const Polygraph& b) { return glue(a, b, {}); }

EpiMonoFactorization factor_epi_mono(const PolygraphMorphism& m) {
  const Polygraph& P = *m.source;
  const Polygraph& Q = *m.target;
  std::vector<bool> hit(Q.cell_count(), false);
  for (CellId c = 0; c < P.cell_count(); ++c) hit[m.map[c]] = true;
  std::vector<CellId> image_cells;
  for (CellId c = 0; c < Q.cell_count(); ++c)
    if (hit[c]) image_cells.push_back(c);
  EpiMonoFactorization out;
  std::vector<CellId> old_to_new;
  out.image = sub_polygraph(Q, image_cells, &old_to_new);
  out.epi.source = m.source;
  out.epi.target = &out.image;
  out.epi.map.resize(P.cell_count());
  for (CellId c = 0; c < P.cell_count(); ++c) out.epi.map[c] = old_to_new[m.map[c]];
  out.mono.source = &out.image;
  out.mono.target = m.target;
  out.mono.map = image_cells;
  return out;
}

Polygraph sub_polygraph(const Polygraph& p, const std::vector<CellId>& cells,
                        std::vector<CellId>* old_to_new) {
  std::vector<CellId> sorted = cells;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](CellId a, CellId b) { return p.dim(a) < p.dim(b); });
  std::vector<CellId> o2n(p.cell_count(), kNoCell);
  for (std::size_t i = 0; i < sorted.size(); ++i) o2n[sorted[i]] = static_cast<CellId>(i);
  PolygraphBuilder b;
  std::function<ExprTree(Expr)> tr = [&](Expr e) -> ExprTree {
    if (p.is_gen(e)) {
      CellId c = p.gen_cell(e);
      if (o2n[c] == kNoCell) {
        throw std::invalid_argument("sub_polygraph: cell set not closed under boundaries ('" +
                                    p.name(c) + "' missing)");
      }
      return ExprTree::gen(p.name(c));
    }
    return ExprTree::comp(p.comp_level(e), tr(p.left(e)), tr(p.right(e)));
  };
  for (CellId c : sorted) {
    if (p.dim(c) == 0) {
      b.add_cell(p.name(c), 0);
    } else {
      b.add_cell(p.name(c), p.dim(c), tr(p.src(c)), tr(p.tgt(c)));
    }
  }
  if (old_to_new) *old_to_new = std::move(o2n);
  return b.build();
}

// ---------------------------------------------------------------------------
// Isomorphism search
// ---------------------------------------------------------------------------

namespace {

// Cheap invariant used to prune candidate pairs before boundary checks.
std::string iso_signature(const Polygraph& p, CellId c) {
  std::string sig = "d" + std::to_string(p.dim(c));
  if (p.dim(c) >= 1) {
    auto add = [&](Expr e) {
      auto sup = p.support(e);
      std::map<int, int> per_dim;
      for (CellId g : sup) per_dim[p.dim(g)]++;
      sig += "[";
      for (auto [d, n] : per_dim) sig += std::to_string(d) + ":" + std::to_string(n) + ",";
      sig += "]";
    };
    add(p.src(c));
    add(p.tgt(c));
  }
  return sig;
}

struct IsoSearch {
  const Polygraph& P;
  const Polygraph& Q;
  const IsoSearchOptions& opts;
  std::vector<CellId> order;            // P-cells, by (dim, id)
  std::vector<CellId> assign;           // P-cell -> Q-cell (kNoCell while free)
  std::vector<bool> used;               // Q-cell used
  std::vector<std::string> sig_p, sig_q;
  IsoSearchResult out;

  IsoSearch(const Polygraph& p, const Polygraph& q, const IsoSearchOptions& o)
      : P(p), Q(q), opts(o) {}

  bool boundary_compatible(CellId c, CellId q) {
    if (P.dim(c) == 0) return true;
    // All lower cells are already assigned (search goes dimension by dimension).
    Expr ms = map_expr(P, P.src(c), Q, assign);
    Expr mt = map_expr(P, P.tgt(c), Q, assign);
    Verdict vs = arrows_equal(Q, ms, Q.src(q));
    if (vs == Verdict::Unknown) out.had_unknown = true;
    if (vs != Verdict::True) return false;
    Verdict vt = arrows_equal(Q, mt, Q.tgt(q));
    if (vt == Verdict::Unknown) out.had_unknown = true;
    return vt == Verdict::True;
  }

  bool backtrack(std::size_t i) {
    if (i == order.size()) {
      PolygraphMorphism m;
      m.source = &P;
      m.target = &Q;
      m.map = assign;
      out.isos.push_back(std::move(m));
      return opts.limit != 0 && out.isos.size() >= opts.limit;
    }
    CellId c = order[i];
    auto pin = opts.pinned.find(c);
    for (CellId q = 0; q < Q.cell_count(); ++q) {
      if (used[q] || Q.dim(q) != P.dim(c)) continue;
      if (pin != opts.pinned.end() && pin->second != q) continue;
      if (sig_p[c] != sig_q[q]) continue;
      if (!boundary_compatible(c, q)) continue;
      assign[c] = q;
      used[q] = true;
      if (backtrack(i + 1)) return true;
      assign[c] = kNoCell;
      used[q] = false;
    }
    return false;
  }

  IsoSearchResult run() {
    for (int d = 0; d <= std::max(P.max_dim(), Q.max_dim()); ++d) {
      if (P.cell_count(d) != Q.cell_count(d)) return out;
    }
    order = P.all_cells();
    std::stable_sort(order.begin(), order.end(),
                     [&](CellId a, CellId b) { return P.dim(a) < P.dim(b); });
    assign.assign(P.cell_count(), kNoCell);
    used.assign(Q.cell_count(), false);
    sig_p.resize(P.cell_count());
    sig_q.resize(Q.cell_count());
    for (CellId c = 0; c < P.cell_count(); ++c) sig_p[c] = iso_signature(P, c);
    for (CellId c = 0; c < Q.cell_count(); ++c) sig_q[c] = iso_signature(Q, c);
    backtrack(0);
    return out;
  }
};

}  // namespace

IsoSearchResult find_isomorphisms(const Polygraph& p, const Polygraph& q,
                                  const IsoSearchOptions& opts) {
  IsoSearch s(p, q, opts);
  return s.run();
}

IsoSearchResult automorphisms(const Polygraph& p) { return find_isomorphisms(p, p); }

}  // namespace plexus
