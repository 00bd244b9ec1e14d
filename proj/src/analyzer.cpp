#include "plexus/analyzer.hpp"
#include <cstdlib>
#include <cstdio>

#include <algorithm>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "plexus/corpus.hpp"
#include "plexus/equality.hpp"
#include "plexus/textio.hpp"

namespace plexus {

// ---------------------------------------------------------------------------
// Classes
// ---------------------------------------------------------------------------

bool ClassSpec::member(const Polygraph& pg) const {
  if (pg.max_dim() > max_dim) return false;
  ClassFlags f = classify(pg);
  switch (base) {
    case Base::All: return true;
    case Base::Positive: return f.positive;
    case Base::SourcePositive: return f.source_positive;
    case Base::TargetPositive: return f.target_positive;
    case Base::ManyToOne: return f.many_to_one;
    case Base::Globular: return f.globular;
  }
  return false;
}

std::string ClassSpec::name() const {
  std::string b;
  switch (base) {
    case Base::All: b = "all"; break;
    case Base::Positive: b = "positive"; break;
    case Base::SourcePositive: b = "source-positive"; break;
    case Base::TargetPositive: b = "target-positive"; break;
    case Base::ManyToOne: b = "many-to-one"; break;
    case Base::Globular: b = "globular"; break;
  }
  if (max_dim < kMaxDim) b += " (dim<=" + std::to_string(max_dim) + ")";
  return b;
}

ClassSpec ClassSpec::parse(const std::string& text) {
  std::string t = text;
  for (auto& c : t) {
    if (c == '_') c = '-';
  }
  ClassSpec out;
  if (t == "all") {
    out.base = Base::All;
  } else if (t == "positive") {
    out.base = Base::Positive;
  } else if (t == "source-positive") {
    out.base = Base::SourcePositive;
  } else if (t == "target-positive") {
    out.base = Base::TargetPositive;
  } else if (t == "many-to-one" || t == "opetopic") {
    out.base = Base::ManyToOne;
  } else if (t == "globular") {
    out.base = Base::Globular;
  } else {
    throw std::invalid_argument("unknown class '" + text + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

namespace {

std::string invariant_key(const Polyplex& p) {
  std::ostringstream os;
  const Polygraph& pg = p.pg();
  for (int d = 0; d <= pg.max_dim(); ++d) os << pg.cell_count(d) << ";";
  std::vector<std::string> sigs;
  for (CellId c = 0; c < pg.cell_count(); ++c) {
    if (pg.dim(c) == 0) continue;
    sigs.push_back(std::to_string(pg.dim(c)) + ":" +
                   std::to_string(pg.support(pg.src(c)).size()) + ":" +
                   std::to_string(pg.support(pg.tgt(c)).size()));
  }
  std::sort(sigs.begin(), sigs.end());
  for (auto& s : sigs) os << s << "|";
  return os.str();
}

struct Pool {
  std::vector<Polyplex> items;
  std::vector<int> generation;
  std::map<std::string, std::vector<std::size_t>> buckets;
  // canonical serializations already known to be represented in the pool
  std::set<std::string> known_texts;
  std::size_t unknown = 0;

  // returns true when the polyplex was new
  bool add(Polyplex pp, int gen) {
    if (known_texts.count(pp.canonical_text())) return false;
    std::string key = invariant_key(pp);
    for (std::size_t i : buckets[key]) {
      PolyplexIso iso = polyplexes_isomorphic(items[i], pp);
      if (iso.iso.has_value()) {
        known_texts.insert(pp.canonical_text());
        return false;
      }
      if (iso.had_unknown) ++unknown;
    }
    known_texts.insert(pp.canonical_text());
    buckets[key].push_back(items.size());
    items.push_back(std::move(pp));
    generation.push_back(gen);
    return true;
  }
};

bool within_budget(const Polyplex& pp, const EnumerationBudget& b) {
  if (pp.pg().cell_count() > b.max_cells) return false;
  int d = pp.dim();
  std::size_t top = 0;
  for (CellId c = 0; c < pp.pg().cell_count(); ++c) {
    if (pp.pg().dim(c) == d) ++top;
  }
  return top <= b.max_top_cells;
}

// Plexes of dimension `d` over the given pool of lower-dimensional
// polyplexes: one per parallel pair, in lexicographic order of the pair's
// canonical serializations.
std::vector<Polyplex> plexes_at(const std::vector<Polyplex>& lower, int d, const ClassSpec& cls,
                                const EnumerationBudget& budget) {
  std::vector<std::size_t> order(lower.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lower[a].canonical_text() < lower[b].canonical_text();
  });
  std::vector<Polyplex> out;
  for (std::size_t ia : order) {
    for (std::size_t ib : order) {
      const Polyplex& a = lower[ia];
      const Polyplex& b = lower[ib];
      Polyplex glued;
      try {
        glued = make_plex(a, b, "t", d);
      } catch (const std::invalid_argument&) {
        continue;  // not parallel
      }
      if (!within_budget(glued, budget)) continue;
      if (!cls.member(glued.pg())) continue;
      out.push_back(std::move(glued));
    }
  }
  return out;
}

}  // namespace

std::vector<Polyplex> enumerate_plexes(const ClassSpec& cls, const EnumerationBudget& budget) {
  std::vector<Polyplex> out;
  Polyplex pt = corpus::point();
  if (cls.member(pt.pg()) && within_budget(pt, budget)) out.push_back(pt);
  // closure pool of polyplexes of dimension < d, grown dimension by dimension
  EnumerationResult pool;
  pool.polyplexes.push_back(pt);
  for (int d = 1; d <= std::min(budget.max_dim, cls.max_dim); ++d) {
    std::vector<Polyplex> px = plexes_at(pool.polyplexes, d, cls, budget);
    for (const Polyplex& p : px) out.push_back(p);
    if (d == std::min(budget.max_dim, cls.max_dim)) break;
    // extend the pool with the closure at dimension d for the next round
    EnumerationBudget sub = budget;
    sub.max_dim = d;
    EnumerationResult r = enumerate_polyplexes(cls, sub);
    pool = std::move(r);
  }
  return out;
}

EnumerationResult enumerate_polyplexes(const ClassSpec& cls, const EnumerationBudget& budget) {
  Pool pool;
  Polyplex pt = corpus::point();
  if (cls.member(pt.pg()) && within_budget(pt, budget)) pool.add(pt, 1);
  int top = std::min(budget.max_dim, cls.max_dim);
  for (int d = 1; d <= top; ++d) {
    // plexes of dimension d over the current pool
    std::vector<Polyplex> lower = pool.items;
    for (Polyplex& p : plexes_at(lower, d, cls, budget)) {
      pool.add(std::move(p), 1);
    }
    // closure under composition at all levels
    const bool debug = std::getenv("PLEXUS_ENUM_DEBUG") != nullptr;
    std::size_t head = 0;
    std::vector<std::size_t> fresh(pool.items.size());
    for (std::size_t i = 0; i < fresh.size(); ++i) fresh[i] = i;
    while (head < fresh.size()) {
      if (debug && head % 16 == 0) {
        fprintf(stderr, "[enum d=%d] head=%zu pool=%zu\n", d, head, pool.items.size());
      }
      std::size_t pi = fresh[head++];
      for (std::size_t qi = 0; qi < pool.items.size(); ++qi) {
        for (std::size_t side = 0; side < 2; ++side) {
          std::size_t ai = side == 0 ? pi : qi;
          std::size_t bi = side == 0 ? qi : pi;
          if (side == 1 && ai == bi) continue;
          const Polyplex& a = pool.items[ai];
          const Polyplex& b = pool.items[bi];
          int gen = std::max(pool.generation[ai], pool.generation[bi]) + 1;
          if (gen > static_cast<int>(budget.max_expression_depth)) continue;
          if (a.dim() != d && b.dim() != d) continue;  // lower composites exist already
          for (int k = 0; k < std::min(a.dim(), b.dim()); ++k) {
            const auto& ba = a.boundary(k, Sign::Plus);
            const auto& bb = b.boundary(k, Sign::Minus);
            // gluing along R removes at most |R| cells
            if (a.pg().cell_count() + b.pg().cell_count() >
                budget.max_cells + ba.plex->pg().cell_count()) {
              continue;
            }
            // equal canonical serializations compose for sure; otherwise a
            // universal-preserving isomorphism must exist
            if (ba.plex->canonical_text() != bb.plex->canonical_text()) {
              PolyplexIso match = polyplexes_isomorphic(*ba.plex, *bb.plex);
              if (match.had_unknown) ++pool.unknown;
              if (!match.iso.has_value()) continue;
            }
            Polyplex c;
            try {
              c = compose(a, k, b);
            } catch (const std::invalid_argument&) {
              continue;
            }
            if (!within_budget(c, budget)) continue;
            if (!cls.member(c.pg())) continue;
            if (pool.add(std::move(c), gen)) fresh.push_back(pool.items.size() - 1);
          }
        }
      }
    }
  }
  EnumerationResult out;
  out.polyplexes = std::move(pool.items);
  out.unknown_comparisons = pool.unknown;
  return out;
}

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------

std::string CertReport::to_string() const {
  std::ostringstream os;
  os << "class: " << class_name << "\n";
  os << "budget: dim<=" << budget.max_dim << " cells<=" << budget.max_cells << " top<="
     << budget.max_top_cells << " depth<=" << budget.max_expression_depth << "\n";
  os << "polyplexes:";
  for (auto [d, n] : counts_per_dim) os << " dim" << d << "=" << n;
  os << "\n";
  switch (verdict) {
    case CertVerdict::CertifiedUpToBudget:
      os << "verdict: certified-good-up-to-budget\n";
      break;
    case CertVerdict::Refuted:
      os << "verdict: refuted (" << witnesses.size() << " witness"
         << (witnesses.size() == 1 ? "" : "es") << ")\n";
      break;
    case CertVerdict::Inconclusive:
      os << "verdict: inconclusive\n";
      break;
  }
  os << "quarantined: " << quarantined << "\n";
  if (condition_c_checked > 0) {
    os << "condition-c: " << (condition_c_ok ? "ok" : "VIOLATED") << " ("
       << condition_c_checked << " instances)\n";
  }
  for (const auto& w : witnesses) {
    os << "witness polyplex:\n" << w.polyplex.canonical_text();
    os << "automorphism:";
    for (CellId c = 0; c < w.automorphism.map.size(); ++c) {
      if (w.automorphism.map[c] != c) {
        os << " " << w.polyplex.pg().name(c) << "->" << w.polyplex.pg().name(w.automorphism.map[c]);
      }
    }
    os << "\n";
  }
  return os.str();
}

namespace {

struct AutCheck {
  bool nontrivial = false;
  PolygraphMorphism witness;
  std::size_t unresolved = 0;
};

AutCheck check_polyplex(const Polyplex& p) {
  AutCheck out;
  AutGroup g = automorphism_group(p);
  out.unresolved = g.unresolved.size();
  for (const auto& w : g.elements) {
    if (!w.is_identity_map()) {
      out.nontrivial = true;
      out.witness = w;
      break;
    }
  }
  return out;
}

}  // namespace

CertReport certify_good(const ClassSpec& cls, const EnumerationBudget& budget, CertifyMode mode) {
  CertReport rep;
  rep.class_name = cls.name();
  rep.budget = budget;
  EnumerationResult en = enumerate_polyplexes(cls, budget);
  rep.quarantined = en.unknown_comparisons;
  for (const Polyplex& p : en.polyplexes) rep.counts_per_dim[p.dim()]++;

  std::vector<AutCheck> checks(en.polyplexes.size());
  if (mode == CertifyMode::Parallel) {
#ifdef _OPENMP
    rep.threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(en.polyplexes.size()); ++i) {
      checks[i] = check_polyplex(en.polyplexes[i]);
    }
#else
    for (std::size_t i = 0; i < en.polyplexes.size(); ++i) {
      checks[i] = check_polyplex(en.polyplexes[i]);
    }
#endif
  } else {
    for (std::size_t i = 0; i < en.polyplexes.size(); ++i) {
      checks[i] = check_polyplex(en.polyplexes[i]);
    }
  }
  for (std::size_t i = 0; i < checks.size(); ++i) {
    rep.quarantined += checks[i].unresolved;
    if (checks[i].nontrivial) {
      rep.witnesses.push_back({en.polyplexes[i], checks[i].witness});
    }
  }
  if (!rep.witnesses.empty()) {
    rep.verdict = CertVerdict::Refuted;
  } else if (rep.quarantined > 0) {
    rep.verdict = CertVerdict::Inconclusive;
  } else {
    rep.verdict = CertVerdict::CertifiedUpToBudget;
    // composition is computed by pushout; check associativity up to unique iso
    // on composable triples drawn from the enumeration
    std::size_t checked = 0;
    const std::size_t kMaxTriples = 64;
    for (std::size_t i = 0; i < en.polyplexes.size() && checked < kMaxTriples; ++i) {
      for (std::size_t j = 0; j < en.polyplexes.size() && checked < kMaxTriples; ++j) {
        for (std::size_t l = 0; l < en.polyplexes.size() && checked < kMaxTriples; ++l) {
          const Polyplex& a = en.polyplexes[i];
          const Polyplex& b = en.polyplexes[j];
          const Polyplex& c = en.polyplexes[l];
          for (int k = 0; k < std::min({a.dim(), b.dim(), c.dim()}); ++k) {
            Polyplex ab, bc, left, right;
            try {
              ab = compose(a, k, b);
              bc = compose(b, k, c);
              left = compose(ab, k, c);
              right = compose(a, k, bc);
            } catch (const std::invalid_argument&) {
              continue;
            }
            ++checked;
            PolyplexIso iso = polyplexes_isomorphic(left, right);
            if (!iso.iso.has_value()) rep.condition_c_ok = false;
          }
        }
      }
    }
    rep.condition_c_checked = checked;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Demos and named examples
// ---------------------------------------------------------------------------

EhDemo eckmann_hilton_demo() {
  EhDemo out;
  auto X = corpus::eh_polygraph();
  out.derivation = corpus::eh_derivation(*X);
  auto res = check_derivation(*X, out.derivation);
  if (!res.ok) {
    throw std::logic_error("eckmann_hilton_demo: transcribed derivation failed at step " +
                           std::to_string(res.failed_step) + ": " + res.message);
  }
  out.derivation_ok = true;
  out.group = automorphism_group(corpus::eh_polyplex());
  out.rejected_by_positive = !classify(*X).source_positive && !classify(*X).target_positive;
  return out;
}

std::string ExampleReport::to_string() const {
  std::ostringstream os;
  os << "example: " << name << "\n";
  for (const auto& [claim, v] : claims) {
    os << (v ? "  [ok]   " : "  [FAIL] ") << claim << "\n";
  }
  return os.str();
}

std::vector<std::string> example_names() {
  return {"iso-polyplex-pair", "forest-pair", "boundary-noninjective-U", "2plex-census"};
}

ExampleReport run_named_example(const std::string& name) {
  ExampleReport rep;
  rep.name = name;
  auto claim = [&](const std::string& text, bool v) { rep.claims.push_back({text, v}); };
  if (name == "iso-polyplex-pair") {
    auto X = corpus::iso_pair_polygraph();
    Expr e1 = corpus::iso_pair_composite(*X, 1);
    Expr e2 = corpus::iso_pair_composite(*X, 2);
    LabeledDiagram p1 = eval(X, e1);
    LabeledDiagram p2 = eval(X, e2);
    claim("underlying polygraphs isomorphic",
          !find_isomorphisms(p1.plex.pg(), p2.plex.pg()).isos.empty());
    PolyplexIso iso = polyplexes_isomorphic(p1.plex, p2.plex);
    claim("polyplexes not isomorphic", !iso.iso.has_value() && !iso.had_unknown);
    const auto& t1 = p1.plex.boundary(2, Sign::Plus);
    const auto& t2 = p2.plex.boundary(2, Sign::Plus);
    claim("2-targets are distinct polyplexes",
          !polyplexes_isomorphic(*t1.plex, *t2.plex).iso.has_value());
    return rep;
  }
  if (name == "forest-pair") {
    auto X = corpus::forest_polygraph();
    Expr e1 = corpus::forest_composite(*X, 1);
    Expr e2 = corpus::forest_composite(*X, 2);
    claim("same underlying polygraph", X->support(e1) == X->support(e2) &&
                                           X->support(e1).size() == X->cell_count());
    claim("2-sources equal",
          arrows_equal(*X, X->boundary(e1, 2, Sign::Minus), X->boundary(e2, 2, Sign::Minus)) ==
              Verdict::True);
    claim("2-targets equal",
          arrows_equal(*X, X->boundary(e1, 2, Sign::Plus), X->boundary(e2, 2, Sign::Plus)) ==
              Verdict::True);
    claim("universal arrows unequal", arrows_equal(*X, e1, e2) == Verdict::False);
    return rep;
  }
  if (name == "boundary-noninjective-U") {
    Polyplex u = corpus::u_plex();
    const auto& plus2 = u.boundary(2, Sign::Plus);
    std::map<CellId, int> preimages;
    for (CellId c = 0; c < plus2.plex->pg().cell_count(); ++c) {
      if (plus2.plex->pg().dim(c) == 1) preimages[plus2.into[c]]++;
    }
    int collapsed_pairs = 0;
    for (auto [cell, n] : preimages) {
      if (n > 1) ++collapsed_pairs;
    }
    bool two_to_one = false;
    for (auto [cell, n] : preimages) {
      if (n == 2) two_to_one = true;
    }
    claim("target boundary map is non-injective on 1-cells", collapsed_pairs > 0);
    claim("exactly one edge has exactly two preimages", collapsed_pairs == 1 && two_to_one);
    return rep;
  }
  if (name == "2plex-census") {
    EnumerationBudget budget;
    budget.max_dim = 2;
    budget.max_cells = 13;  // boundary length up to 6
    ClassSpec all;
    auto plexes = enumerate_plexes(all, budget);
    std::size_t L = 6;
    std::size_t expected = (L + 1) * (L + 2) / 2 + 2;
    claim("census size matches the closed form", plexes.size() == expected);
    ClassSpec positive = ClassSpec::parse("positive");
    auto pos = enumerate_plexes(positive, budget);
    std::size_t pos_expected = 2;
    for (std::size_t n = 1; n <= L; ++n) {
      for (std::size_t m = 1; n + m <= L; ++m) ++pos_expected;
    }
    claim("positive filter removes the identity-boundary plexes", pos.size() == pos_expected);
    return rep;
  }
  throw std::invalid_argument("unknown example '" + name + "'");
}

}  // namespace plexus
