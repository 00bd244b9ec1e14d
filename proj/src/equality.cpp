#include "plexus/equality.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_set>

namespace plexus {

namespace {

struct SearchBudgetExceeded {};

std::vector<CellId> concat(const std::vector<CellId>& a, const std::vector<CellId>& b) {
  std::vector<CellId> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

bool is_prefix(const std::vector<CellId>& pre, const std::vector<CellId>& full) {
  if (pre.size() > full.size()) return false;
  return std::equal(pre.begin(), pre.end(), full.begin());
}

std::vector<CellId> slice(const std::vector<CellId>& v, std::size_t from, std::size_t to) {
  return std::vector<CellId>(v.begin() + from, v.begin() + to);
}

}  // namespace

// ---------------------------------------------------------------------------
// Paths and 2-dimensional whisker sequences
// ---------------------------------------------------------------------------

std::vector<CellId> path_of(const Polygraph& p, Expr e) {
  e = p.reduce(e);
  if (p.raw_dim(e) > 1) {
    throw std::invalid_argument("path_of: expression is not a 1-arrow");
  }
  std::vector<CellId> out;
  std::function<void(Expr)> go = [&](Expr x) {
    if (p.is_gen(x)) {
      if (p.dim(p.gen_cell(x)) == 1) out.push_back(p.gen_cell(x));
      return;
    }
    go(p.left(x));
    go(p.right(x));
  };
  go(e);
  return out;
}

namespace {

std::vector<CellId> src_path_of_gen2(const Polygraph& p, CellId g) {
  return path_of(p, p.boundary(p.gen(g), 1, Sign::Minus));
}
std::vector<CellId> tgt_path_of_gen2(const Polygraph& p, CellId g) {
  return path_of(p, p.boundary(p.gen(g), 1, Sign::Plus));
}

std::vector<CellId> apply_rows(const Polygraph& p, std::vector<CellId> path,
                               const std::vector<Whisker2>& rows) {
  for (const auto& w : rows) {
    path = concat(concat(w.l, tgt_path_of_gen2(p, w.gen)), w.r);
  }
  return path;
}

std::vector<CellId> unapply_rows(const Polygraph& p, std::vector<CellId> path,
                                 const std::vector<Whisker2>& rows) {
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    path = concat(concat(it->l, src_path_of_gen2(p, it->gen)), it->r);
  }
  return path;
}

// Horizontal composite of two whisker sequences.
WhiskerSeq2 hcat2(const Polygraph& p, const WhiskerSeq2& a, const WhiskerSeq2& b) {
  WhiskerSeq2 out;
  out.src_path = concat(a.src_path, b.src_path);
  std::vector<CellId> ta = apply_rows(p, a.src_path, a.ws);
  for (auto w : a.ws) {
    w.r = concat(w.r, b.src_path);
    out.ws.push_back(std::move(w));
  }
  for (auto w : b.ws) {
    w.l = concat(ta, w.l);
    out.ws.push_back(std::move(w));
  }
  return out;
}

std::vector<Whisker2> shift_rows(const std::vector<Whisker2>& rows, const std::vector<CellId>& l,
                                 const std::vector<CellId>& r) {
  std::vector<Whisker2> out;
  out.reserve(rows.size());
  for (const auto& w : rows) {
    out.push_back({concat(l, w.l), w.gen, concat(w.r, r)});
  }
  return out;
}

}  // namespace

WhiskerSeq2 wnf2(const Polygraph& p, Expr e) {
  e = p.reduce(e);
  int d = p.raw_dim(e);
  WhiskerSeq2 out;
  if (d == 0) {
    return out;  // identity of a vertex; empty path
  }
  if (d == 1) {
    out.src_path = path_of(p, e);
    return out;
  }
  if (d > 2) throw std::invalid_argument("wnf2: expression has dimension > 2");
  if (p.is_gen(e)) {
    CellId c = p.gen_cell(e);
    out.src_path = src_path_of_gen2(p, c);
    out.ws.push_back({{}, c, {}});
    return out;
  }
  int k = p.comp_level(e);
  Expr l = p.left(e), r = p.right(e);
  if (k == 1) {
    WhiskerSeq2 a = wnf2(p, l);
    WhiskerSeq2 b = wnf2(p, r);
    a.ws.insert(a.ws.end(), b.ws.begin(), b.ws.end());
    return a;
  }
  // k == 0
  return hcat2(p, wnf2(p, l), wnf2(p, r));
}

std::vector<CellId> tgt_path2(const Polygraph& p, const WhiskerSeq2& seq) {
  return apply_rows(p, seq.src_path, seq.ws);
}

namespace {

// Adjacent independent-whisker swap. Index i swaps rows i and i+1 when row
// i+1 acts strictly (or touching) left of row i's written block, or strictly
// right of it. Returns false when they overlap.
bool swap_rows(const Polygraph& p, Whisker2& w1, Whisker2& w2) {
  auto s2 = src_path_of_gen2(p, w2.gen);
  auto t1 = tgt_path_of_gen2(p, w1.gen);
  auto s1 = src_path_of_gen2(p, w1.gen);
  auto t2 = tgt_path_of_gen2(p, w2.gen);
  if (w2.l.size() + s2.size() <= w1.l.size()) {
    // w2 left of w1: l1 = l2 . s2 . m
    std::vector<CellId> m = slice(w1.l, w2.l.size() + s2.size(), w1.l.size());
    Whisker2 n2{w2.l, w2.gen, concat(concat(m, s1), w1.r)};
    Whisker2 n1{concat(concat(w2.l, t2), m), w1.gen, w1.r};
    w1 = std::move(n2);
    w2 = std::move(n1);
    return true;
  }
  if (w2.l.size() >= w1.l.size() + t1.size()) {
    // w2 right of w1's block: l2 = l1 . t1 . m
    std::vector<CellId> m = slice(w2.l, w1.l.size() + t1.size(), w2.l.size());
    Whisker2 n2{concat(concat(w1.l, s1), m), w2.gen, w2.r};
    Whisker2 n1{w1.l, w1.gen, concat(concat(m, s2), w2.r)};
    w1 = std::move(n2);
    w2 = std::move(n1);
    return true;
  }
  return false;
}

bool left_swappable(const Polygraph& p, const Whisker2& w1, const Whisker2& w2) {
  return w2.l.size() + src_path_of_gen2(p, w2.gen).size() <= w1.l.size();
}

}  // namespace

WhiskerSeq2 canonical2(const Polygraph& p, WhiskerSeq2 seq) {
  bool changed = true;
  std::size_t guard = 0;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < seq.ws.size(); ++i) {
      if (left_swappable(p, seq.ws[i], seq.ws[i + 1])) {
        swap_rows(p, seq.ws[i], seq.ws[i + 1]);
        changed = true;
      }
    }
    if (++guard > seq.ws.size() * seq.ws.size() + 8) {
      throw std::logic_error("canonical2: sorting failed to terminate");
    }
  }
  return seq;
}

Expr realize2(const Polygraph& p, const WhiskerSeq2& seq) {
  auto path_expr = [&](const std::vector<CellId>& path) -> std::optional<Expr> {
    if (path.empty()) return std::nullopt;
    Expr acc = p.gen(path[0]);
    for (std::size_t i = 1; i < path.size(); ++i) acc = p.comp(0, acc, p.gen(path[i]));
    return acc;
  };
  if (seq.ws.empty()) {
    auto pe = path_expr(seq.src_path);
    if (!pe) throw std::invalid_argument("realize2: empty identity sequence has no expression");
    return *pe;
  }
  std::optional<Expr> acc;
  for (const auto& w : seq.ws) {
    Expr row = p.gen(w.gen);
    if (auto le = path_expr(w.l)) row = p.comp(0, *le, row);
    if (auto re = path_expr(w.r)) row = p.comp(0, row, *re);
    acc = acc ? p.comp(1, *acc, row) : row;
  }
  return *acc;
}

// ---------------------------------------------------------------------------
// 3-dimensional whisker sequences
// ---------------------------------------------------------------------------

namespace {

std::vector<CellId> src1_of_gen3(const Polygraph& p, CellId g) {
  return path_of(p, p.boundary(p.gen(g), 1, Sign::Minus));
}
std::vector<CellId> tgt1_of_gen3(const Polygraph& p, CellId g) {
  return path_of(p, p.boundary(p.gen(g), 1, Sign::Plus));
}
WhiskerSeq2 src2_of_gen3(const Polygraph& p, CellId g) {
  return wnf2(p, p.boundary(p.gen(g), 2, Sign::Minus));
}
WhiskerSeq2 tgt2_of_gen3(const Polygraph& p, CellId g) {
  return wnf2(p, p.boundary(p.gen(g), 2, Sign::Plus));
}

}  // namespace

WhiskerSeq3 wnf3(const Polygraph& p, Expr e) {
  e = p.reduce(e);
  int d = p.raw_dim(e);
  if (d != 3) throw std::invalid_argument("wnf3: expression is not of dimension 3");
  if (p.is_gen(e)) {
    CellId c = p.gen_cell(e);
    WhiskerSeq3 out;
    out.src2 = src2_of_gen3(p, c);
    out.ws.push_back({{}, {}, c, {}, {}});
    return out;
  }
  int k = p.comp_level(e);
  Expr l = p.left(e), r = p.right(e);
  int dl = p.raw_dim(l), dr = p.raw_dim(r);
  if (k == 2) {
    WhiskerSeq3 a = wnf3(p, l);
    WhiskerSeq3 b = wnf3(p, r);
    a.ws.insert(a.ws.end(), b.ws.begin(), b.ws.end());
    return a;
  }
  if (dl == 3 && dr == 3) {
    // x #_k y = (x #_k s2(y)) #_2 (t2(x) #_k y), k < 2
    Expr s2y = p.boundary(r, 2, Sign::Minus);
    Expr t2x = p.boundary(l, 2, Sign::Plus);
    WhiskerSeq3 a = wnf3(p, p.comp(k, l, s2y));
    WhiskerSeq3 b = wnf3(p, p.comp(k, t2x, r));
    a.ws.insert(a.ws.end(), b.ws.begin(), b.ws.end());
    return a;
  }
  if (k == 1) {
    if (dl == 3) {
      WhiskerSeq3 a = wnf3(p, l);
      WhiskerSeq2 y = wnf2(p, r);
      for (auto& w : a.ws) w.lower.insert(w.lower.end(), y.ws.begin(), y.ws.end());
      a.src2.ws.insert(a.src2.ws.end(), y.ws.begin(), y.ws.end());
      return a;
    }
    // y #_1 x with y of dimension exactly 2 (lower dimensions are units here)
    WhiskerSeq3 b = wnf3(p, r);
    WhiskerSeq2 y = wnf2(p, l);
    for (auto& w : b.ws) w.upper.insert(w.upper.begin(), y.ws.begin(), y.ws.end());
    b.src2.ws.insert(b.src2.ws.begin(), y.ws.begin(), y.ws.end());
    b.src2.src_path = y.src_path;
    return b;
  }
  // k == 0
  if (dl == 3) {
    WhiskerSeq3 a = wnf3(p, l);
    WhiskerSeq2 y = wnf2(p, r);
    const auto& spY = y.src_path;
    for (auto& w : a.ws) {
      // lower := lower #_0 y, computed in the pre-extension frame
      std::vector<CellId> post_old = concat(concat(w.l, tgt1_of_gen3(p, w.gen)), w.r);
      std::vector<CellId> tpD = apply_rows(p, post_old, w.lower);
      for (auto& u : w.upper) u.r = concat(u.r, spY);
      w.r = concat(w.r, spY);
      for (auto& dws : w.lower) dws.r = concat(dws.r, spY);
      for (auto yw : y.ws) {
        yw.l = concat(tpD, yw.l);
        w.lower.push_back(std::move(yw));
      }
    }
    a.src2 = hcat2(p, a.src2, y);
    return a;
  }
  WhiskerSeq3 b = wnf3(p, r);
  WhiskerSeq2 y = wnf2(p, l);
  std::vector<CellId> tpY = tgt_path2(p, y);
  for (auto& w : b.ws) {
    // upper := y #_0 upper
    std::vector<CellId> pre = concat(concat(w.l, src1_of_gen3(p, w.gen)), w.r);
    std::vector<CellId> upper_src = unapply_rows(p, pre, w.upper);
    std::vector<Whisker2> nu;
    for (auto yw : y.ws) {
      yw.r = concat(yw.r, upper_src);
      nu.push_back(std::move(yw));
    }
    for (auto uw : w.upper) {
      uw.l = concat(tpY, uw.l);
      nu.push_back(std::move(uw));
    }
    w.upper = std::move(nu);
    w.l = concat(tpY, w.l);
    for (auto& dw : w.lower) dw.l = concat(tpY, dw.l);
  }
  b.src2 = hcat2(p, y, b.src2);
  return b;
}

Expr realize3(const Polygraph& p, const WhiskerSeq3& seq) {
  if (seq.ws.empty()) throw std::invalid_argument("realize3: empty sequence");
  auto path_expr = [&](const std::vector<CellId>& path) -> std::optional<Expr> {
    if (path.empty()) return std::nullopt;
    Expr acc = p.gen(path[0]);
    for (std::size_t i = 1; i < path.size(); ++i) acc = p.comp(0, acc, p.gen(path[i]));
    return acc;
  };
  std::optional<Expr> acc;
  for (const auto& w : seq.ws) {
    Expr row = p.gen(w.gen);
    if (auto le = path_expr(w.l)) row = p.comp(0, *le, row);
    if (auto re = path_expr(w.r)) row = p.comp(0, row, *re);
    if (!w.upper.empty()) {
      std::vector<CellId> pre = concat(concat(w.l, src1_of_gen3(p, w.gen)), w.r);
      WhiskerSeq2 up{unapply_rows(p, pre, w.upper), w.upper};
      row = p.comp(1, realize2(p, up), row);
    }
    if (!w.lower.empty()) {
      std::vector<CellId> post = concat(concat(w.l, tgt1_of_gen3(p, w.gen)), w.r);
      WhiskerSeq2 down{post, w.lower};
      row = p.comp(1, row, realize2(p, down));
    }
    acc = acc ? p.comp(2, *acc, row) : row;
  }
  return *acc;
}

WhiskerNormalForm whisker_normal_form(const Polygraph& p, Expr e) {
  Expr r = p.reduce(e);
  int d = p.raw_dim(r);
  if (d > 3) throw UnsupportedDimension("whisker_normal_form supports dimension <= 3");
  WhiskerNormalForm out;
  out.dim = d;
  if (d == 0) {
    out.base0 = p.gen_cell(r);
  } else if (d == 1) {
    out.path = path_of(p, r);
  } else if (d == 2) {
    out.seq2 = wnf2(p, r);
  } else {
    out.seq3 = wnf3(p, r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical presentations of 3-whiskers and transpositions
// ---------------------------------------------------------------------------

namespace {

std::string ser_path(const std::vector<CellId>& v) {
  std::string s = "[";
  for (CellId c : v) s += std::to_string(c) + ",";
  s += "]";
  return s;
}
std::string ser_rows(const std::vector<Whisker2>& rows) {
  std::string s;
  for (const auto& w : rows) s += ser_path(w.l) + "g" + std::to_string(w.gen) + ser_path(w.r) + ";";
  return s;
}
std::string ser_w3(const Whisker3& w) {
  return "{U:" + ser_rows(w.upper) + "|l:" + ser_path(w.l) + "|g:" + std::to_string(w.gen) +
         "|r:" + ser_path(w.r) + "|D:" + ser_rows(w.lower) + "}";
}

// All presentations of a 3-whisker reachable by exchanging rows inside the
// upper/lower parts and sliding rows across the generator's row.
std::vector<Whisker3> presentations(const Polygraph& p, const Whisker3& w0, std::size_t cap) {
  std::set<std::string> seen;
  std::deque<Whisker3> queue;
  std::vector<Whisker3> out;
  auto push = [&](const Whisker3& w) {
    std::string k = ser_w3(w);
    if (seen.insert(k).second) {
      if (seen.size() > cap) throw SearchBudgetExceeded{};
      queue.push_back(w);
      out.push_back(w);
    }
  };
  push(w0);
  while (!queue.empty()) {
    Whisker3 w = queue.front();
    queue.pop_front();
    // swaps inside upper/lower
    for (auto* part : {&w.upper, &w.lower}) {
      for (std::size_t i = 0; i + 1 < part->size(); ++i) {
        Whisker3 n = w;
        auto* np = part == &w.upper ? &n.upper : &n.lower;
        if (swap_rows(p, (*np)[i], (*np)[i + 1])) push(n);
      }
    }
    std::vector<CellId> sp1 = src1_of_gen3(p, w.gen);
    std::vector<CellId> tp1 = tgt1_of_gen3(p, w.gen);
    // slide last of upper below the row
    if (!w.upper.empty()) {
      const Whisker2& g = w.upper.back();
      auto tg = tgt_path_of_gen2(p, g.gen);
      auto sg = src_path_of_gen2(p, g.gen);
      if (g.l.size() + tg.size() <= w.l.size()) {
        std::vector<CellId> m = slice(w.l, g.l.size() + tg.size(), w.l.size());
        Whisker3 n = w;
        n.upper.pop_back();
        n.l = concat(concat(g.l, sg), m);
        n.lower.insert(n.lower.begin(), Whisker2{g.l, g.gen, concat(concat(m, tp1), w.r)});
        push(n);
      } else if (g.l.size() >= w.l.size() + sp1.size()) {
        std::vector<CellId> m = slice(g.l, w.l.size() + sp1.size(), g.l.size());
        Whisker3 n = w;
        n.upper.pop_back();
        n.r = concat(concat(m, sg), g.r);
        n.lower.insert(n.lower.begin(), Whisker2{concat(concat(w.l, tp1), m), g.gen, g.r});
        push(n);
      }
    }
    // slide first of lower above the row
    if (!w.lower.empty()) {
      const Whisker2& g = w.lower.front();
      auto sg = src_path_of_gen2(p, g.gen);
      auto tg = tgt_path_of_gen2(p, g.gen);
      if (g.l.size() + sg.size() <= w.l.size()) {
        std::vector<CellId> m = slice(w.l, g.l.size() + sg.size(), w.l.size());
        Whisker3 n = w;
        n.lower.erase(n.lower.begin());
        n.l = concat(concat(g.l, tg), m);
        n.upper.push_back(Whisker2{g.l, g.gen, concat(concat(m, sp1), w.r)});
        push(n);
      } else if (g.l.size() >= w.l.size() + tp1.size()) {
        std::vector<CellId> m = slice(g.l, w.l.size() + tp1.size(), g.l.size());
        Whisker3 n = w;
        n.lower.erase(n.lower.begin());
        n.r = concat(concat(m, tg), g.r);
        n.upper.push_back(Whisker2{concat(concat(w.l, sp1), m), g.gen, g.r});
        push(n);
      }
    }
  }
  return out;
}

Whisker3 canonical_w3(const Polygraph& p, const Whisker3& w, std::size_t cap) {
  std::vector<Whisker3> all = presentations(p, w, cap);
  const Whisker3* best = &all[0];
  std::string bk = ser_w3(all[0]);
  for (std::size_t i = 1; i < all.size(); ++i) {
    std::string k = ser_w3(all[i]);
    if (k < bk) {
      bk = std::move(k);
      best = &all[i];
    }
  }
  return *best;
}

std::vector<Whisker2> slice_rows(const std::vector<Whisker2>& v, std::size_t a, std::size_t b) {
  return std::vector<Whisker2>(v.begin() + a, v.begin() + b);
}

// Compares a run of rows (with its entry path) against l #_0 s2(gen) #_0 r as
// 2-arrows, scanning the possible splits of the entry path.
struct BlockMatch {
  std::vector<CellId> l, r;
};
std::vector<BlockMatch> match_block(const Polygraph& p, const std::vector<Whisker2>& run,
                                    const std::vector<CellId>& entry_path, CellId gen3) {
  std::vector<BlockMatch> out;
  WhiskerSeq2 s2 = src2_of_gen3(p, gen3);
  if (run.size() != s2.ws.size()) return out;
  const auto& sp = s2.src_path;
  if (entry_path.size() < sp.size()) return out;
  WhiskerSeq2 actual{entry_path, run};
  WhiskerSeq2 actual_c = canonical2(p, actual);
  for (std::size_t o = 0; o + sp.size() <= entry_path.size(); ++o) {
    if (!std::equal(sp.begin(), sp.end(), entry_path.begin() + o)) continue;
    std::vector<CellId> l = slice(entry_path, 0, o);
    std::vector<CellId> r = slice(entry_path, o + sp.size(), entry_path.size());
    WhiskerSeq2 cand{entry_path, shift_rows(s2.ws, l, r)};
    if (canonical2(p, cand) == actual_c) out.push_back({std::move(l), std::move(r)});
  }
  return out;
}

// Attempted exchange of two consecutive 3-whiskers. Emits every swapped pair
// (already canonicalized); empty result means the two steps do not commute.
std::vector<std::pair<Whisker3, Whisker3>> try_transpose(const Polygraph& p, const Whisker3& w1,
                                                         const Whisker3& w2, std::size_t cap) {
  std::vector<std::pair<Whisker3, Whisker3>> out;
  std::set<std::string> emitted;
  Whisker3 w2c = canonical_w3(p, w2, cap);
  std::string w2key = ser_w3(w2c);
  WhiskerSeq2 s1 = src2_of_gen3(p, w1.gen);
  WhiskerSeq2 t1 = tgt2_of_gen3(p, w1.gen);
  WhiskerSeq2 s2g = src2_of_gen3(p, w2.gen);
  WhiskerSeq2 t2g = tgt2_of_gen3(p, w2.gen);

  auto emit = [&](Whisker3 a, Whisker3 b) {
    a = canonical_w3(p, a, cap);
    b = canonical_w3(p, b, cap);
    std::string k = ser_w3(a) + ser_w3(b);
    if (emitted.insert(k).second) out.push_back({std::move(a), std::move(b)});
  };

  for (const Whisker3& pr : presentations(p, w1, cap)) {
    std::vector<CellId> tp1 = tgt1_of_gen3(p, pr.gen);
    std::vector<CellId> sp1 = src1_of_gen3(p, pr.gen);
    std::vector<CellId> post = concat(concat(pr.l, tp1), pr.r);
    std::vector<CellId> pre = concat(concat(pr.l, sp1), pr.r);
    // Block below the row: lower = Da ++ [s2(w2.gen) shifted] ++ Db
    for (std::size_t i = 0; i <= pr.lower.size(); ++i) {
      std::vector<CellId> entry = apply_rows(p, post, slice_rows(pr.lower, 0, i));
      for (std::size_t j = i; j <= pr.lower.size(); ++j) {
        std::vector<Whisker2> run(pr.lower.begin() + i, pr.lower.begin() + j);
        for (const BlockMatch& bm : match_block(p, run, entry, w2.gen)) {
          std::vector<Whisker2> Da(pr.lower.begin(), pr.lower.begin() + i);
          std::vector<Whisker2> Db(pr.lower.begin() + j, pr.lower.end());
          // expected presentation of w2 given this reading of w1's lower part
          Whisker3 expected;
          expected.upper = pr.upper;
          {
            auto t1rows = shift_rows(t1.ws, pr.l, pr.r);
            expected.upper.insert(expected.upper.end(), t1rows.begin(), t1rows.end());
            expected.upper.insert(expected.upper.end(), Da.begin(), Da.end());
          }
          expected.l = bm.l;
          expected.gen = w2.gen;
          expected.r = bm.r;
          expected.lower = Db;
          if (ser_w3(canonical_w3(p, expected, cap)) != w2key) continue;
          Whisker3 a;  // w2's generator applied first
          a.upper = pr.upper;
          {
            auto s1rows = shift_rows(s1.ws, pr.l, pr.r);
            a.upper.insert(a.upper.end(), s1rows.begin(), s1rows.end());
            a.upper.insert(a.upper.end(), Da.begin(), Da.end());
          }
          a.l = bm.l;
          a.gen = w2.gen;
          a.r = bm.r;
          a.lower = Db;
          Whisker3 b;  // then w1's generator
          b.upper = pr.upper;
          b.l = pr.l;
          b.gen = pr.gen;
          b.r = pr.r;
          b.lower = Da;
          {
            auto t2rows = shift_rows(t2g.ws, bm.l, bm.r);
            b.lower.insert(b.lower.end(), t2rows.begin(), t2rows.end());
            b.lower.insert(b.lower.end(), Db.begin(), Db.end());
          }
          emit(std::move(a), std::move(b));
        }
      }
    }
    // Block above the row: upper = Ua ++ [s2(w2.gen) shifted] ++ Ub
    std::vector<CellId> upper_src = unapply_rows(p, pre, pr.upper);
    for (std::size_t i = 0; i <= pr.upper.size(); ++i) {
      std::vector<CellId> entry = apply_rows(p, upper_src, slice_rows(pr.upper, 0, i));
      for (std::size_t j = i; j <= pr.upper.size(); ++j) {
        std::vector<Whisker2> run(pr.upper.begin() + i, pr.upper.begin() + j);
        for (const BlockMatch& bm : match_block(p, run, entry, w2.gen)) {
          std::vector<Whisker2> Ua(pr.upper.begin(), pr.upper.begin() + i);
          std::vector<Whisker2> Ub(pr.upper.begin() + j, pr.upper.end());
          Whisker3 expected;
          expected.upper = Ua;
          expected.l = bm.l;
          expected.gen = w2.gen;
          expected.r = bm.r;
          expected.lower = Ub;
          {
            auto t1rows = shift_rows(t1.ws, pr.l, pr.r);
            expected.lower.insert(expected.lower.end(), t1rows.begin(), t1rows.end());
            expected.lower.insert(expected.lower.end(), pr.lower.begin(), pr.lower.end());
          }
          if (ser_w3(canonical_w3(p, expected, cap)) != w2key) continue;
          Whisker3 a;
          a.upper = Ua;
          a.l = bm.l;
          a.gen = w2.gen;
          a.r = bm.r;
          a.lower = Ub;
          {
            auto s1rows = shift_rows(s1.ws, pr.l, pr.r);
            a.lower.insert(a.lower.end(), s1rows.begin(), s1rows.end());
            a.lower.insert(a.lower.end(), pr.lower.begin(), pr.lower.end());
          }
          Whisker3 b;
          b.upper = Ua;
          {
            auto t2rows = shift_rows(t2g.ws, bm.l, bm.r);
            b.upper.insert(b.upper.end(), t2rows.begin(), t2rows.end());
            b.upper.insert(b.upper.end(), Ub.begin(), Ub.end());
          }
          b.l = pr.l;
          b.gen = pr.gen;
          b.r = pr.r;
          b.lower = pr.lower;
          emit(std::move(a), std::move(b));
        }
      }
    }
  }
  return out;
}

std::string state_key(const std::vector<Whisker3>& ws) {
  std::string s;
  for (const auto& w : ws) s += ser_w3(w);
  return s;
}

// Breadth-first closure under transpositions of consecutive 3-whiskers.
Verdict eq3(const Polygraph& p, Expr e, Expr f, const EqualityOptions& opts) {
  try {
    std::size_t pcap = 4096;
    WhiskerSeq3 se = wnf3(p, e);
    WhiskerSeq3 sf = wnf3(p, f);
    if (se.ws.size() != sf.ws.size()) return Verdict::False;
    if (!(canonical2(p, se.src2) == canonical2(p, sf.src2))) return Verdict::False;
    auto canon_all = [&](std::vector<Whisker3> ws) {
      for (auto& w : ws) w = canonical_w3(p, w, pcap);
      return ws;
    };
    std::vector<Whisker3> start = canon_all(se.ws);
    std::string target = state_key(canon_all(sf.ws));
    std::set<std::string> seen;
    std::deque<std::vector<Whisker3>> queue;
    seen.insert(state_key(start));
    if (state_key(start) == target) return Verdict::True;
    queue.push_back(std::move(start));
    while (!queue.empty()) {
      std::vector<Whisker3> st = queue.front();
      queue.pop_front();
      for (std::size_t i = 0; i + 1 < st.size(); ++i) {
        for (auto& [a, b] : try_transpose(p, st[i], st[i + 1], pcap)) {
          std::vector<Whisker3> ns = st;
          ns[i] = a;
          ns[i + 1] = b;
          std::string k = state_key(ns);
          if (k == target) return Verdict::True;
          if (seen.insert(k).second) {
            if (seen.size() > opts.search_budget) return Verdict::Unknown;
            queue.push_back(std::move(ns));
          }
        }
      }
    }
    return Verdict::False;
  } catch (const SearchBudgetExceeded&) {
    return Verdict::Unknown;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Oracle
// ---------------------------------------------------------------------------

std::vector<RewriteResult> axiom_rewrites(const Polygraph& p, Expr e, int size_bound) {
  std::vector<RewriteResult> out;
  int total = p.node_count(e);
  // Rebuilds e with the subterm at `path` replaced by `sub`.
  std::function<Expr(Expr, const std::vector<int>&, std::size_t, Expr)> rebuild =
      [&](Expr cur, const std::vector<int>& path, std::size_t i, Expr sub) -> Expr {
    if (i == path.size()) return sub;
    if (path[i] == 0) {
      return p.comp(p.comp_level(cur), rebuild(p.left(cur), path, i + 1, sub), p.right(cur));
    }
    return p.comp(p.comp_level(cur), p.left(cur), rebuild(p.right(cur), path, i + 1, sub));
  };
  std::vector<int> path;
  std::function<void(Expr)> walk = [&](Expr s) {
    auto offer = [&](Expr sub, int axiom) {
      int sz = total - p.node_count(s) + p.node_count(sub);
      if (sz > size_bound) return;
      out.push_back({rebuild(e, path, 0, sub), axiom, path});
    };
    if (!p.is_gen(s)) {
      int k = p.comp_level(s);
      Expr a = p.left(s), b = p.right(s);
      // associativity
      if (!p.is_gen(a) && p.comp_level(a) == k) {
        offer(p.comp(k, p.left(a), p.comp(k, p.right(a), b)), 6);
      }
      if (!p.is_gen(b) && p.comp_level(b) == k) {
        offer(p.comp(k, p.comp(k, a, p.left(b)), p.right(b)), 6);
      }
      // exchange (either orientation: both children composite at a common
      // level distinct from the outer level)
      if (!p.is_gen(a) && !p.is_gen(b) && p.comp_level(a) == p.comp_level(b) &&
          p.comp_level(a) != k) {
        int n = p.comp_level(a);
        offer(p.comp(n, p.comp(k, p.left(a), p.left(b)), p.comp(k, p.right(a), p.right(b))), 7);
      }
      // unit elimination
      if (p.reduce(a) == p.boundary(b, k, Sign::Minus)) offer(b, 4);
      if (p.reduce(b) == p.boundary(a, k, Sign::Plus)) offer(a, 4);
    }
    // unit introduction
    int d = p.arrow_dim(s);
    for (int k = 0; k <= d; ++k) {
      offer(p.comp(k, p.boundary(s, k, Sign::Minus), s), 4);
      offer(p.comp(k, s, p.boundary(s, k, Sign::Plus)), 4);
    }
    if (!p.is_gen(s)) {
      path.push_back(0);
      walk(p.left(s));
      path.back() = 1;
      walk(p.right(s));
      path.pop_back();
    }
  };
  walk(e);
  return out;
}

Verdict oracle_equal(const Polygraph& p, Expr e, Expr f, int size_bound, std::size_t node_budget,
                     OracleStats* stats) {
  if (stats) *stats = OracleStats{};
  // Sound structural separators first: arrow dimension, 0-boundaries,
  // top-dimension occurrence counts and supports are all rewrite-invariant.
  Expr re = p.reduce(e), rf = p.reduce(f);
  if (re == rf) {
    if (stats) stats->complete = true;
    return Verdict::True;
  }
  if (p.raw_dim(re) != p.raw_dim(rf)) {
    if (stats) stats->complete = true;
    return Verdict::False;
  }
  int d = p.raw_dim(re);
  for (Sign sg : {Sign::Minus, Sign::Plus}) {
    if (d >= 1 && p.boundary(re, 0, sg) != p.boundary(rf, 0, sg)) {
      if (stats) stats->complete = true;
      return Verdict::False;
    }
  }
  if (p.count_vector(re) != p.count_vector(rf) || p.support(re) != p.support(rf)) {
    if (stats) stats->complete = true;
    return Verdict::False;
  }
  size_bound = std::max({size_bound, p.node_count(e), p.node_count(f)});
  if (e == f) {
    if (stats) stats->complete = true;
    return Verdict::True;
  }
  // Bidirectional closure: the rewrite relation is symmetric, so the two
  // reachable sets intersect exactly when the expressions denote the same
  // arrow, and either side's completed closure at the full size bound
  // certifies inequality. The size cap is deepened iteratively so that short
  // unit-insertion detours are found without flooding the state space.
  std::size_t used = 0;
  enum class Run { Met, Complete, Budget };
  auto run_at = [&](int cap) -> Run {
    std::unordered_set<std::uint32_t> seen[2];
    std::deque<Expr> queue[2];
    seen[0].insert(e.id);
    seen[1].insert(f.id);
    queue[0].push_back(e);
    queue[1].push_back(f);
    auto total = [&] { return used + seen[0].size() + seen[1].size(); };
    while (!queue[0].empty() || !queue[1].empty()) {
      int side;
      if (queue[0].empty()) {
        side = 1;
      } else if (queue[1].empty()) {
        side = 0;
      } else {
        side = queue[0].size() <= queue[1].size() ? 0 : 1;
      }
      Expr cur = queue[side].front();
      queue[side].pop_front();
      for (const auto& rw : axiom_rewrites(p, cur, cap)) {
        if (!seen[side].insert(rw.expr.id).second) continue;
        if (seen[1 - side].count(rw.expr.id)) {
          used = total();
          return Run::Met;
        }
        if (total() > node_budget) {
          used = total();
          return Run::Budget;
        }
        queue[side].push_back(rw.expr);
      }
      if (queue[side].empty()) {
        used = total();
        return Run::Complete;  // this side's closure at `cap` is exhausted
      }
    }
    used = total();
    return Run::Complete;
  };
  int start = std::max(p.node_count(e), p.node_count(f));
  for (int cap = start;; cap = std::min(cap + 4, size_bound)) {
    Run r = run_at(cap);
    if (stats) stats->states = used;
    if (r == Run::Met) {
      if (stats) stats->complete = true;
      return Verdict::True;
    }
    if (r == Run::Budget) return Verdict::Unknown;
    if (cap >= size_bound) {
      // closure complete at the full bound and the sides never met
      if (stats) stats->complete = true;
      return Verdict::False;
    }
  }
}

// ---------------------------------------------------------------------------
// arrows_equal dispatcher
// ---------------------------------------------------------------------------

namespace {

bool involves_identity_boundaries(const Polygraph& p, Expr e) {
  for (CellId c : p.support(e)) {
    int d = p.dim(c);
    if (d < 2) continue;
    if (p.is_identity(p.src(c), d - 1) || p.is_identity(p.tgt(c), d - 1)) return true;
  }
  return false;
}

}  // namespace

Verdict arrows_equal(const Polygraph& p, Expr e, Expr f, const EqualityOptions& opts) {
  Expr re = p.reduce(e), rf = p.reduce(f);
  if (re == rf) return Verdict::True;
  int d = p.raw_dim(re);
  if (d != p.raw_dim(rf)) return Verdict::False;
  if (d == 0) return Verdict::False;  // distinct vertices
  if (p.count_vector(re) != p.count_vector(rf)) return Verdict::False;
  // Boundaries must agree at every level below d.
  Verdict bnd = Verdict::True;
  for (int k = d - 1; k >= 0; --k) {
    for (Sign sg : {Sign::Minus, Sign::Plus}) {
      bnd = verdict_and(bnd, arrows_equal(p, p.boundary(re, k, sg), p.boundary(rf, k, sg), opts));
      if (bnd == Verdict::False) return Verdict::False;
    }
  }
  if (d >= 2 && (involves_identity_boundaries(p, re) || involves_identity_boundaries(p, rf))) {
    int bound = opts.oracle_size_bound > 0
                    ? opts.oracle_size_bound
                    : std::max(p.node_count(re), p.node_count(rf)) + 8;
    return oracle_equal(p, re, rf, bound, opts.oracle_node_budget);
  }
  if (bnd == Verdict::Unknown) return Verdict::Unknown;
  if (d == 1) {
    // Reduced 1-arrows are left-associated paths; structural equality decides.
    return re == rf ? Verdict::True : Verdict::False;
  }
  if (d == 2) {
    return canonical2(p, wnf2(p, re)) == canonical2(p, wnf2(p, rf)) ? Verdict::True
                                                                    : Verdict::False;
  }
  if (d == 3) return eq3(p, re, rf, opts);
  return Verdict::Unknown;
}

// ---------------------------------------------------------------------------
// Derivation checking
// ---------------------------------------------------------------------------

namespace {

std::optional<Expr> subterm_at(const Polygraph& p, Expr e, const std::vector<int>& path) {
  Expr cur = e;
  for (int step : path) {
    if (p.is_gen(cur)) return std::nullopt;
    cur = step == 0 ? p.left(cur) : p.right(cur);
  }
  return cur;
}

Expr replace_at(const Polygraph& p, Expr e, const std::vector<int>& path, std::size_t i, Expr sub) {
  if (i == path.size()) return sub;
  if (path[i] == 0) return p.comp(p.comp_level(e), replace_at(p, p.left(e), path, i + 1, sub), p.right(e));
  return p.comp(p.comp_level(e), p.left(e), replace_at(p, p.right(e), path, i + 1, sub));
}

// Is (s -> t) an instance of the cited axiom (either orientation)?
bool axiom_instance(const Polygraph& p, int axiom, Expr s, Expr t) {
  auto unit_step = [&](Expr big, Expr small) {
    // big = small with a unit attached on one side
    if (p.is_gen(big)) return false;
    int k = p.comp_level(big);
    if (p.right(big) == small && p.reduce(p.left(big)) == p.boundary(small, k, Sign::Minus))
      return true;
    if (p.left(big) == small && p.reduce(p.right(big)) == p.boundary(small, k, Sign::Plus))
      return true;
    return false;
  };
  switch (axiom) {
    case 4:
      return unit_step(s, t) || unit_step(t, s);
    case 6: {
      auto assoc = [&](Expr a, Expr b) {
        if (p.is_gen(a) || p.is_gen(b)) return false;
        int k = p.comp_level(a);
        if (p.comp_level(b) != k) return false;
        // a = (x #_k y) #_k z, b = x #_k (y #_k z)
        if (p.is_gen(p.left(a)) || p.comp_level(p.left(a)) != k) return false;
        if (p.is_gen(p.right(b)) || p.comp_level(p.right(b)) != k) return false;
        return p.left(p.left(a)) == p.left(b) && p.right(p.left(a)) == p.left(p.right(b)) &&
               p.right(a) == p.right(p.right(b));
      };
      return assoc(s, t) || assoc(t, s);
    }
    case 7: {
      auto exch = [&](Expr a, Expr b) {
        if (p.is_gen(a) || p.is_gen(b)) return false;
        int k = p.comp_level(a);
        Expr al = p.left(a), ar = p.right(a);
        if (p.is_gen(al) || p.is_gen(ar)) return false;
        int n = p.comp_level(al);
        if (p.comp_level(ar) != n || n == k) return false;
        Expr want = p.comp(n, p.comp(k, p.left(al), p.left(ar)), p.comp(k, p.right(al), p.right(ar)));
        return want == b;
      };
      return exch(s, t) || exch(t, s);
    }
    default:
      return false;
  }
}

}  // namespace

DerivationCheck check_derivation(const Polygraph& p, const Derivation& d) {
  DerivationCheck out;
  Expr cur = d.start;
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const DerivationStep& st = d.steps[i];
    if (st.axiom != 4 && st.axiom != 6 && st.axiom != 7) {
      out.failed_step = static_cast<int>(i);
      out.message = "axiom " + std::to_string(st.axiom) +
                    " is not an equational rewrite (only 4, 6, 7 rewrite expressions)";
      return out;
    }
    auto s = subterm_at(p, cur, st.position);
    if (!s) {
      out.failed_step = static_cast<int>(i);
      out.message = "position does not exist in the current expression";
      return out;
    }
    auto t = subterm_at(p, st.result, st.position);
    if (!t) {
      out.failed_step = static_cast<int>(i);
      out.message = "position does not exist in the result expression";
      return out;
    }
    if (replace_at(p, cur, st.position, 0, *t) != st.result) {
      out.failed_step = static_cast<int>(i);
      out.message = "result differs from the current expression outside the rewrite position";
      return out;
    }
    if (!axiom_instance(p, st.axiom, *s, *t)) {
      out.failed_step = static_cast<int>(i);
      out.message = "step is not an instance of axiom " + std::to_string(st.axiom) +
                    " at the cited position";
      return out;
    }
    cur = st.result;
  }
  out.ok = true;
  return out;
}

}  // namespace plexus
