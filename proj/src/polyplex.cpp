#include "plexus/polyplex.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

#include "plexus/textio.hpp"

namespace plexus {

// ---------------------------------------------------------------------------
// Canonicalization
// ---------------------------------------------------------------------------

namespace {

// First-use order of every cell in a left-to-right traversal of the
// universal expression, descending through boundaries of each generator.
std::vector<CellId> traversal_order(const Polygraph& pg, Expr universal) {
  std::vector<CellId> order;
  std::vector<bool> seen(pg.cell_count(), false);
  std::function<void(Expr)> visit = [&](Expr e) {
    e = pg.reduce(e);
    if (!pg.is_gen(e)) {
      visit(pg.left(e));
      visit(pg.right(e));
      return;
    }
    CellId c = pg.gen_cell(e);
    if (seen[c]) return;
    seen[c] = true;
    order.push_back(c);
    if (pg.dim(c) >= 1) {
      visit(pg.src(c));
      visit(pg.tgt(c));
    }
  };
  visit(universal);
  return order;
}

}  // namespace

struct Polyplex::Cache {
  std::mutex mu;
  std::map<std::pair<int, int>, Boundary> boundaries;
  std::string text;
};

Polyplex make_polyplex(const Polygraph& pg, Expr universal, std::vector<CellId>* old_to_new) {
  std::vector<CellId> order = traversal_order(pg, universal);
  if (order.size() != pg.cell_count()) {
    throw std::invalid_argument(
        "make_polyplex: universal arrow does not generate the polygraph (" +
        std::to_string(order.size()) + " of " + std::to_string(pg.cell_count()) +
        " cells in its support)");
  }
  // sort by (dimension, first use)
  std::stable_sort(order.begin(), order.end(),
                   [&](CellId a, CellId b) { return pg.dim(a) < pg.dim(b); });
  std::vector<CellId> o2n(pg.cell_count(), kNoCell);
  std::vector<int> idx_in_dim(kMaxDim + 1, 0);
  std::vector<std::string> new_names(pg.cell_count());
  for (std::size_t i = 0; i < order.size(); ++i) {
    CellId c = order[i];
    o2n[c] = static_cast<CellId>(i);
    new_names[c] =
        "c" + std::to_string(pg.dim(c)) + "_" + std::to_string(idx_in_dim[pg.dim(c)]++);
  }
  PolygraphBuilder b;
  std::function<ExprTree(Expr)> tr = [&](Expr e) -> ExprTree {
    e = pg.reduce(e);
    if (pg.is_gen(e)) return ExprTree::gen(new_names[pg.gen_cell(e)]);
    return ExprTree::comp(pg.comp_level(e), tr(pg.left(e)), tr(pg.right(e)));
  };
  for (CellId c : order) {
    if (pg.dim(c) == 0) {
      b.add_cell(new_names[c], 0);
    } else {
      b.add_cell(new_names[c], pg.dim(c), tr(pg.src(c)), tr(pg.tgt(c)));
    }
  }
  Polyplex out;
  auto nps = std::make_shared<Polygraph>(b.build());
  out.pg_ = nps;
  out.universal_ = nps->reduce(map_expr(pg, pg.reduce(universal), *nps, o2n));
  out.cache_ = std::make_shared<Polyplex::Cache>();
  if (old_to_new) *old_to_new = o2n;
  return out;
}

const Polyplex::Boundary& Polyplex::boundary(int k, Sign sign) const {
  if (k >= dim()) throw std::invalid_argument("boundary: level must be below the dimension");
  std::lock_guard<std::mutex> lk(cache_->mu);
  auto key = std::make_pair(k, sign == Sign::Plus ? 1 : 0);
  auto it = cache_->boundaries.find(key);
  if (it != cache_->boundaries.end()) return it->second;
  LabeledDiagram bd = eval(pg_, pg_->boundary(universal_, k, sign));
  Boundary composed{std::make_shared<Polyplex>(std::move(bd.plex)), std::move(bd.labeling)};
  auto [pos, _] = cache_->boundaries.emplace(key, std::move(composed));
  return pos->second;
}

const std::string& Polyplex::canonical_text() const {
  std::lock_guard<std::mutex> lk(cache_->mu);
  if (cache_->text.empty()) {
    std::ostringstream os;
    os << serialize_polygraph(*pg_);
    os << "universal = " << pg_->expr_to_string(universal_) << "\n";
    cache_->text = os.str();
  }
  return cache_->text;
}

Polyplex polyplex_from_parts(const Polygraph& pg, Expr universal) {
  return make_polyplex(pg, universal, nullptr);
}

// ---------------------------------------------------------------------------
// Matching and gluing
// ---------------------------------------------------------------------------

namespace {

struct MatchOptions {
  const std::vector<CellId>* label_a = nullptr;
  const std::vector<CellId>* label_b = nullptr;
  bool all = false;
};

struct MatchOut {
  std::vector<PolygraphMorphism> isos;
  bool had_unknown = false;
};

// Isomorphisms a -> b carrying universal to universal, optionally commuting
// with labelings into a common target.
MatchOut match_universal(const Polyplex& a, const Polyplex& b, const MatchOptions& mo) {
  MatchOut out;
  IsoSearchResult isos = find_isomorphisms(a.pg(), b.pg());
  out.had_unknown = isos.had_unknown;
  for (auto& iso : isos.isos) {
    if (mo.label_a) {
      bool ok = true;
      for (CellId c = 0; c < a.pg().cell_count(); ++c) {
        if ((*mo.label_a)[c] != (*mo.label_b)[iso.map[c]]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
    }
    Verdict v = arrows_equal(b.pg(), map_expr(a.pg(), a.universal(), b.pg(), iso.map),
                             b.universal());
    if (v == Verdict::Unknown) {
      out.had_unknown = true;
      continue;
    }
    if (v == Verdict::True) {
      out.isos.push_back(std::move(iso));
      if (!mo.all) return out;
    }
  }
  return out;
}

struct GlueParts {
  Polygraph pg;                       // before canonicalization, with the glued names
  std::vector<CellId> from_a, from_b; // embeddings of the two pieces
};

// Pushout of a.pg <- R -> b.pg where R is the matched boundary piece.
GlueParts glue_along(const Polygraph& apg, const Polygraph& bpg, const Polygraph& rpg,
                     const std::vector<CellId>& r_in_a, const std::vector<CellId>& r_in_b) {
  PolygraphMorphism f{&rpg, &apg, r_in_a};
  PolygraphMorphism g{&rpg, &bpg, r_in_b};
  PushoutResult po = pushout(f, g);
  if (!po.issues.empty()) {
    throw std::invalid_argument("glue_along: " + po.issues.front());
  }
  return GlueParts{std::move(po.result), std::move(po.in_a), std::move(po.in_b)};
}

struct ComposedCore {
  Polyplex plex;
  std::vector<CellId> from_a, from_b;  // into the canonical polyplex
};

MatchOut match_whole(const Polyplex& small, const Polyplex& big, int k, Sign side,
                     const std::vector<CellId>* label_small,
                     const std::vector<CellId>* label_big) {
  MatchOptions mo;
  std::vector<CellId> lb;
  if (k < big.dim()) {
    const Polyplex::Boundary& bb = big.boundary(k, side);
    if (label_small) {
      lb.resize(bb.plex->pg().cell_count());
      for (CellId c = 0; c < lb.size(); ++c) lb[c] = (*label_big)[bb.into[c]];
      mo.label_a = label_small;
      mo.label_b = &lb;
    }
    return match_universal(small, *bb.plex, mo);
  }
  if (label_small) {
    mo.label_a = label_small;
    mo.label_b = label_big;
  }
  return match_universal(small, big, mo);
}

ComposedCore compose_core(const Polyplex& a, int k, const Polyplex& b,
                          const std::vector<CellId>* label_a,
                          const std::vector<CellId>* label_b) {
  // Degenerate levels: a factor that is already a k-arrow acts as a unit.
  if (k >= a.dim() || k >= b.dim()) {
    const bool a_unit = k >= a.dim();
    const Polyplex& unit = a_unit ? a : b;
    const Polyplex& other = a_unit ? b : a;
    MatchOut m = match_whole(unit, other, k, a_unit ? Sign::Minus : Sign::Plus,
                             a_unit ? label_a : label_b, a_unit ? label_b : label_a);
    if (m.isos.empty()) {
      throw std::invalid_argument("compose: boundary mismatch at degenerate level " +
                                  std::to_string(k));
    }
    ComposedCore out;
    out.plex = other;
    std::vector<CellId> unit_map(unit.pg().cell_count());
    if (k < other.dim()) {
      const Polyplex::Boundary& bb = other.boundary(k, a_unit ? Sign::Minus : Sign::Plus);
      for (CellId c = 0; c < unit_map.size(); ++c) unit_map[c] = bb.into[m.isos.front().map[c]];
    } else {
      unit_map = m.isos.front().map;
    }
    std::vector<CellId> ident(other.pg().cell_count());
    for (CellId c = 0; c < ident.size(); ++c) ident[c] = c;
    out.from_a = a_unit ? unit_map : ident;
    out.from_b = a_unit ? ident : unit_map;
    return out;
  }
  const Polyplex::Boundary& ba = a.boundary(k, Sign::Plus);
  const Polyplex::Boundary& bb = b.boundary(k, Sign::Minus);
  MatchOptions mo;
  std::vector<CellId> la, lb;
  if (label_a) {
    la.resize(ba.plex->pg().cell_count());
    for (CellId c = 0; c < la.size(); ++c) la[c] = (*label_a)[ba.into[c]];
    lb.resize(bb.plex->pg().cell_count());
    for (CellId c = 0; c < lb.size(); ++c) lb[c] = (*label_b)[bb.into[c]];
    mo.label_a = &la;
    mo.label_b = &lb;
  }
  MatchOut m = match_universal(*ba.plex, *bb.plex, mo);
  if (m.isos.empty()) {
    std::string what = "compose: boundary mismatch at level " + std::to_string(k);
    if (m.had_unknown) what += " (some comparisons were inconclusive)";
    what += "\n  target side: " + ba.plex->canonical_text() + "  source side: " +
            bb.plex->canonical_text();
    throw std::invalid_argument(what);
  }
  const PolygraphMorphism& theta = m.isos.front();
  std::vector<CellId> r_in_b(ba.plex->pg().cell_count());
  for (CellId c = 0; c < r_in_b.size(); ++c) r_in_b[c] = bb.into[theta.map[c]];
  GlueParts gp = glue_along(a.pg(), b.pg(), ba.plex->pg(), ba.into, r_in_b);
  Expr ua = map_expr(a.pg(), a.universal(), gp.pg, gp.from_a);
  Expr ub = map_expr(b.pg(), b.universal(), gp.pg, gp.from_b);
  Expr uni = gp.pg.comp(k, ua, ub);
  std::vector<CellId> o2n;
  ComposedCore out;
  out.plex = make_polyplex(gp.pg, uni, &o2n);
  out.from_a.resize(a.pg().cell_count());
  for (CellId c = 0; c < out.from_a.size(); ++c) out.from_a[c] = o2n[gp.from_a[c]];
  out.from_b.resize(b.pg().cell_count());
  for (CellId c = 0; c < out.from_b.size(); ++c) out.from_b[c] = o2n[gp.from_b[c]];
  return out;
}

struct PlexCore {
  Polyplex plex;
  std::vector<CellId> from_src, from_tgt;
  CellId top = kNoCell;
};

PlexCore make_plex_core(const Polyplex& src, const Polyplex& tgt, const std::string& name,
                        int cell_dim, const std::vector<CellId>* label_s,
                        const std::vector<CellId>* label_t) {
  if (cell_dim < 0) cell_dim = std::max(src.dim(), tgt.dim()) + 1;
  int n = cell_dim - 1;
  GlueParts gp;
  if (n == 0) {
    // 1-cells attach to points; nothing to glue
    PushoutResult po = coproduct(src.pg(), tgt.pg());
    gp = GlueParts{std::move(po.result), std::move(po.in_a), std::move(po.in_b)};
  } else {
    // R = bd(src,-) + bd(src,+); maps into src via inclusions, into tgt via
    // the unique matched isos.
    int bl = n - 1;
    auto need = [&](const Polyplex& pp, Sign sg) -> Polyplex::Boundary {
      if (bl < pp.dim()) return pp.boundary(bl, sg);
      // the whole polyplex is its own boundary at this level
      Polyplex::Boundary whole;
      whole.plex = std::make_shared<Polyplex>(pp);
      whole.into.resize(pp.pg().cell_count());
      for (CellId c = 0; c < whole.into.size(); ++c) whole.into[c] = c;
      return whole;
    };
    std::vector<Polygraph> rparts;
    std::vector<std::vector<CellId>> rmaps_a, rmaps_b;
    for (Sign sg : {Sign::Minus, Sign::Plus}) {
      Polyplex::Boundary bs = need(src, sg);
      Polyplex::Boundary bt = need(tgt, sg);
      MatchOptions mo;
      std::vector<CellId> la, lb;
      if (label_s) {
        la.resize(bs.plex->pg().cell_count());
        for (CellId c = 0; c < la.size(); ++c) la[c] = (*label_s)[bs.into[c]];
        lb.resize(bt.plex->pg().cell_count());
        for (CellId c = 0; c < lb.size(); ++c) lb[c] = (*label_t)[bt.into[c]];
        mo.label_a = &la;
        mo.label_b = &lb;
      }
      MatchOut m = match_universal(*bs.plex, *bt.plex, mo);
      if (m.isos.empty()) {
        throw std::invalid_argument(std::string("make_plex: inputs are not parallel (") +
                                    sign_char(sg) + " boundaries differ)");
      }
      const PolygraphMorphism& theta = m.isos.front();
      rparts.push_back(bs.plex->pg());
      rmaps_a.push_back(bs.into);
      std::vector<CellId> into_b(bs.plex->pg().cell_count());
      for (CellId c = 0; c < into_b.size(); ++c) into_b[c] = bt.into[theta.map[c]];
      rmaps_b.push_back(into_b);
    }
    PushoutResult rp = coproduct(rparts[0], rparts[1]);
    std::vector<CellId> in_a(rp.result.cell_count()), in_b(rp.result.cell_count());
    for (CellId c = 0; c < rparts[0].cell_count(); ++c) {
      in_a[rp.in_a[c]] = rmaps_a[0][c];
      in_b[rp.in_a[c]] = rmaps_b[0][c];
    }
    for (CellId c = 0; c < rparts[1].cell_count(); ++c) {
      in_a[rp.in_b[c]] = rmaps_a[1][c];
      in_b[rp.in_b[c]] = rmaps_b[1][c];
    }
    gp = glue_along(src.pg(), tgt.pg(), rp.result, in_a, in_b);
  }
  // attach the fresh top cell
  PolygraphBuilder nb;
  for (CellId c = 0; c < gp.pg.cell_count(); ++c) {
    if (gp.pg.dim(c) == 0) {
      nb.add_cell(gp.pg.name(c), 0);
    } else {
      nb.add_cell(gp.pg.name(c), gp.pg.dim(c), gp.pg.to_tree(gp.pg.src(c)),
                  gp.pg.to_tree(gp.pg.tgt(c)));
    }
  }
  std::string top_name = name;
  while (nb.has_cell(top_name)) top_name += "'";
  Expr us = map_expr(src.pg(), src.universal(), gp.pg, gp.from_a);
  Expr ut = map_expr(tgt.pg(), tgt.universal(), gp.pg, gp.from_b);
  // the new cell must attach to a pair of parallel arrows
  if (gp.pg.well_formed(us) != Verdict::True || gp.pg.well_formed(ut) != Verdict::True ||
      gp.pg.arrow_dim(us) > cell_dim - 1 || gp.pg.arrow_dim(ut) > cell_dim - 1) {
    throw std::invalid_argument("make_plex: inputs are not parallel (ill-formed boundary)");
  }
  if (cell_dim >= 2) {
    for (Sign sg : {Sign::Minus, Sign::Plus}) {
      if (arrows_equal(gp.pg, gp.pg.boundary(us, cell_dim - 2, sg),
                       gp.pg.boundary(ut, cell_dim - 2, sg)) != Verdict::True) {
        throw std::invalid_argument(std::string("make_plex: inputs are not parallel (") +
                                    sign_char(sg) + " boundaries differ)");
      }
    }
  }
  nb.add_cell(top_name, cell_dim, gp.pg.to_tree(us), gp.pg.to_tree(ut));
  Polygraph with_top = nb.build();
  std::vector<CellId> o2n;
  PlexCore out;
  out.plex = make_polyplex(with_top, with_top.gen(top_name), &o2n);
  out.from_src.resize(src.pg().cell_count());
  for (CellId c = 0; c < out.from_src.size(); ++c) out.from_src[c] = o2n[gp.from_a[c]];
  out.from_tgt.resize(tgt.pg().cell_count());
  for (CellId c = 0; c < out.from_tgt.size(); ++c) out.from_tgt[c] = o2n[gp.from_b[c]];
  out.top = o2n[with_top.cell(top_name)];
  return out;
}

}  // namespace

Polyplex compose(const Polyplex& p, int k, const Polyplex& q) {
  return compose_core(p, k, q, nullptr, nullptr).plex;
}

Polyplex make_plex(const Polyplex& src, const Polyplex& tgt, const std::string& name,
                   int cell_dim) {
  return make_plex_core(src, tgt, name, cell_dim, nullptr, nullptr).plex;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

struct EvalCtx {
  std::shared_ptr<const Polygraph> X;
  bool unique = true;
  std::map<std::uint32_t, LabeledDiagram> memo;
};

LabeledDiagram eval_rec(EvalCtx& ctx, Expr e) {
  const Polygraph& X = *ctx.X;
  e = X.reduce(e);
  auto it = ctx.memo.find(e.id);
  if (it != ctx.memo.end()) return it->second;
  LabeledDiagram out;
  out.target = ctx.X;
  out.representation_unique = ctx.unique;
  if (X.is_gen(e)) {
    CellId c = X.gen_cell(e);
    if (X.dim(c) == 0) {
      PolygraphBuilder b;
      b.add_cell("c0_0", 0);
      auto pt = std::make_shared<Polygraph>(b.build());
      out.plex = make_polyplex(*pt, pt->gen("c0_0"), nullptr);
      out.labeling = {c};
    } else {
      LabeledDiagram s = eval_rec(ctx, X.src(c));
      LabeledDiagram t = eval_rec(ctx, X.tgt(c));
      PlexCore pc = make_plex_core(s.plex, t.plex, "top", X.dim(c), &s.labeling, &t.labeling);
      out.plex = std::move(pc.plex);
      out.labeling.assign(out.plex.pg().cell_count(), kNoCell);
      for (CellId i = 0; i < s.plex.pg().cell_count(); ++i) {
        out.labeling[pc.from_src[i]] = s.labeling[i];
      }
      for (CellId i = 0; i < t.plex.pg().cell_count(); ++i) {
        CellId tgt_cell = pc.from_tgt[i];
        if (out.labeling[tgt_cell] != kNoCell && out.labeling[tgt_cell] != t.labeling[i]) {
          throw std::logic_error("eval: inconsistent labeling on the glued boundary");
        }
        out.labeling[tgt_cell] = t.labeling[i];
      }
      out.labeling[pc.top] = c;
    }
  } else {
    int k = X.comp_level(e);
    LabeledDiagram a = eval_rec(ctx, X.left(e));
    LabeledDiagram b = eval_rec(ctx, X.right(e));
    ComposedCore cc = compose_core(a.plex, k, b.plex, &a.labeling, &b.labeling);
    out.plex = std::move(cc.plex);
    out.labeling.assign(out.plex.pg().cell_count(), kNoCell);
    for (CellId i = 0; i < a.plex.pg().cell_count(); ++i) {
      out.labeling[cc.from_a[i]] = a.labeling[i];
    }
    for (CellId i = 0; i < b.plex.pg().cell_count(); ++i) {
      CellId t = cc.from_b[i];
      if (out.labeling[t] != kNoCell && out.labeling[t] != b.labeling[i]) {
        throw std::logic_error("eval: inconsistent labeling on the composed boundary");
      }
      out.labeling[t] = b.labeling[i];
    }
  }
  ctx.memo.emplace(e.id, out);
  return out;
}

}  // namespace

LabeledDiagram eval(std::shared_ptr<const Polygraph> X, Expr e) {
  if (X->well_formed(e) == Verdict::False) {
    throw std::invalid_argument("eval: expression is not well-formed");
  }
  EvalCtx ctx;
  ctx.X = std::move(X);
  ClassFlags fl = classify(*ctx.X);
  ctx.unique = fl.source_positive || fl.target_positive;
  return eval_rec(ctx, e);
}

// ---------------------------------------------------------------------------
// Isomorphisms, automorphisms, location, chains
// ---------------------------------------------------------------------------

PolyplexIso polyplexes_isomorphic(const Polyplex& p, const Polyplex& q) {
  MatchOptions mo;
  MatchOut m = match_universal(p, q, mo);
  PolyplexIso out;
  out.had_unknown = m.had_unknown;
  if (!m.isos.empty()) out.iso = std::move(m.isos.front());
  return out;
}

PolyplexIso diagrams_isomorphic(const LabeledDiagram& a, const LabeledDiagram& b) {
  MatchOptions mo;
  mo.label_a = &a.labeling;
  mo.label_b = &b.labeling;
  MatchOut m = match_universal(a.plex, b.plex, mo);
  PolyplexIso out;
  out.had_unknown = m.had_unknown;
  if (!m.isos.empty()) out.iso = std::move(m.isos.front());
  return out;
}

std::vector<PolygraphMorphism> all_diagram_isos(const LabeledDiagram& a, const LabeledDiagram& b,
                                                bool* had_unknown) {
  MatchOptions mo;
  mo.label_a = &a.labeling;
  mo.label_b = &b.labeling;
  mo.all = true;
  MatchOut m = match_universal(a.plex, b.plex, mo);
  if (had_unknown) *had_unknown = m.had_unknown;
  return std::move(m.isos);
}

AutGroup automorphism_group(const Polyplex& p) {
  AutGroup out;
  const Polygraph& pg = p.pg();
  int d = p.dim();
  IsoSearchOptions opts;
  if (d >= 1) {
    // cells appearing in the top boundaries are fixed by every automorphism
    for (Sign sg : {Sign::Minus, Sign::Plus}) {
      for (CellId c : pg.support(pg.boundary(p.universal(), d - 1, sg))) {
        opts.pinned[c] = c;
      }
    }
  }
  IsoSearchResult isos = find_isomorphisms(pg, pg, opts);
  for (auto& iso : isos.isos) {
    Verdict v =
        arrows_equal(pg, map_expr(pg, p.universal(), pg, iso.map), p.universal());
    if (v == Verdict::True) {
      out.elements.push_back(std::move(iso));
    } else if (v == Verdict::Unknown) {
      out.unresolved.push_back(std::move(iso));
    }
  }
  if (isos.had_unknown) {
    // boundary comparisons inside the search were inconclusive; surface that
    // as an unresolved marker so callers cannot silently trust completeness
    out.unresolved.push_back(identity_morphism(pg));
  }
  return out;
}

Location locate_cell(const Polyplex& p, CellId c) {
  const Polygraph& pg = p.pg();
  int d = p.dim();
  if (pg.dim(c) >= d) {
    throw std::invalid_argument("locate_cell: cell must have dimension below the polyplex");
  }
  Location out;
  auto ssup = pg.support(pg.boundary(p.universal(), d - 1, Sign::Minus));
  out.source_side = std::binary_search(ssup.begin(), ssup.end(), c);
  for (CellId x : pg.cells_of_dim(d)) {
    auto tsup = pg.support(pg.tgt(x));
    if (std::binary_search(tsup.begin(), tsup.end(), c)) out.target_of.push_back(x);
  }
  return out;
}

std::vector<CellId> find_chain(const Polyplex& p, CellId x) {
  const Polygraph& pg = p.pg();
  int d = p.dim();
  if (pg.dim(x) != d) {
    throw std::invalid_argument("find_chain: cell must be top-dimensional");
  }
  auto ncells_of = [&](Expr e) {
    std::vector<CellId> out;
    for (CellId c : pg.support(e)) {
      if (pg.dim(c) == d - 1) out.push_back(c);
    }
    return out;
  };
  auto intersects = [](const std::vector<CellId>& a, const std::vector<CellId>& b) {
    for (CellId c : a) {
      if (std::binary_search(b.begin(), b.end(), c)) return true;
    }
    return false;
  };
  std::vector<CellId> source_n = ncells_of(pg.boundary(p.universal(), d - 1, Sign::Minus));
  std::vector<CellId> tops = pg.cells_of_dim(d);
  // backward breadth-first search from x to a cell rooted in the source
  std::map<CellId, CellId> parent;  // next element towards x
  std::vector<CellId> frontier{x};
  parent[x] = kNoCell;
  while (!frontier.empty()) {
    std::vector<CellId> next;
    for (CellId y : frontier) {
      std::vector<CellId> ysrc = ncells_of(pg.src(y));
      if (intersects(source_n, ysrc)) {
        std::vector<CellId> chain;
        for (CellId c = y; c != kNoCell; c = parent[c]) chain.push_back(c);
        return chain;
      }
      for (CellId z : tops) {
        if (parent.count(z)) continue;
        if (intersects(ncells_of(pg.tgt(z)), ysrc)) {
          parent[z] = y;
          next.push_back(z);
        }
      }
    }
    frontier = std::move(next);
  }
  return {};
}

}  // namespace plexus
