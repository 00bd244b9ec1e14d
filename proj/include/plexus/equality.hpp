#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plexus/polygraph.hpp"

namespace plexus {

// --- whisker normal forms ------------------------------------------------
//
// Carriers for the equality decision procedure in dimensions 1..3.
// A 2-arrow is a vertical (#_1) stack of whiskers (l #_0 gen #_0 r); a
// 3-arrow is a #_2 stack of 3-whiskers (upper 2-arrow, l #_0 gen #_0 r,
// lower 2-arrow), together with the global source.

struct Whisker2 {
  std::vector<CellId> l;
  CellId gen;
  std::vector<CellId> r;
  friend bool operator==(const Whisker2&, const Whisker2&) = default;
};

struct WhiskerSeq2 {
  std::vector<CellId> src_path;  // global 1-source, as a list of 1-generators
  std::vector<Whisker2> ws;
  friend bool operator==(const WhiskerSeq2&, const WhiskerSeq2&) = default;
};

struct Whisker3 {
  std::vector<Whisker2> upper;  // 2-cells above the generator's row
  std::vector<CellId> l;
  CellId gen;
  std::vector<CellId> r;
  std::vector<Whisker2> lower;  // 2-cells below
  friend bool operator==(const Whisker3&, const Whisker3&) = default;
};

struct WhiskerSeq3 {
  WhiskerSeq2 src2;  // global 2-source snapshot
  std::vector<Whisker3> ws;
};

// Flattens a 1-arrow into its list of 1-generators (empty for identities).
std::vector<CellId> path_of(const Polygraph& p, Expr e);

// Whisker decomposition of a well-formed arrow of dimension <= 3; the
// realization of the result is equal to the input as an arrow. Throws
// UnsupportedDimension above 3.
WhiskerSeq2 wnf2(const Polygraph& p, Expr e);
WhiskerSeq3 wnf3(const Polygraph& p, Expr e);

// Leftmost-greedy canonical order: adjacent whiskers acting on disjoint
// segments are sorted by position. Unique representative of a positive
// 2-arrow; requires all 2-generators involved to have non-identity
// boundaries.
WhiskerSeq2 canonical2(const Polygraph& p, WhiskerSeq2 seq);

// Rebuilds an expression from a whisker sequence.
Expr realize2(const Polygraph& p, const WhiskerSeq2& seq);
Expr realize3(const Polygraph& p, const WhiskerSeq3& seq);

// Target path of a 2-arrow in whisker form.
std::vector<CellId> tgt_path2(const Polygraph& p, const WhiskerSeq2& seq);

// Spec-facing wrapper: dimension tag plus the appropriate carrier.
struct WhiskerNormalForm {
  int dim = 0;
  std::vector<CellId> path;  // dim <= 1 (empty for a 0-arrow)
  CellId base0 = kNoCell;    // dim == 0
  WhiskerSeq2 seq2;          // dim == 2
  WhiskerSeq3 seq3;          // dim == 3
};
WhiskerNormalForm whisker_normal_form(const Polygraph& p, Expr e);

// --- equality -------------------------------------------------------------

struct EqualityOptions {
  // Oracle fallback bound for expressions involving identity boundaries at
  // dimension >= 2; 0 means "input size + 8".
  int oracle_size_bound = 0;
  // State cap for the dimension-3 transposition search and the oracle.
  std::size_t search_budget = 50000;
  std::size_t oracle_node_budget = 400000;
};

// Decides whether two well-formed expressions over the same polygraph denote
// the same arrow. Complete for unit-free expressions of dimension <= 3 whose
// support is positive; routes through oracle_equal when identity boundaries
// are involved; reports Unknown when a search budget runs out.
Verdict arrows_equal(const Polygraph& p, Expr e, Expr f, const EqualityOptions& opts = {});

struct OracleStats {
  std::size_t states = 0;
  bool complete = false;  // closure fully explored within the size bound
};

// Independent brute-force oracle: breadth-first closure of {e} under single
// axiom rewrites (unit law both directions, associativity, exchange)
// restricted to expressions of size <= size_bound (node count). Returns True
// if f is reached, False if the closure was fully explored without reaching
// it, Unknown if the node budget ran out first.
Verdict oracle_equal(const Polygraph& p, Expr e, Expr f, int size_bound,
                     std::size_t node_budget = 400000, OracleStats* stats = nullptr);

// --- derivations -----------------------------------------------------------

// A checked equational proof: a start expression and a list of rewrite steps,
// each citing one of the axioms (4 unit, 6 associativity, 7 exchange), a
// position (path of 0/1 child indices, empty = root), and the full expression
// after the step.
struct DerivationStep {
  int axiom = 0;
  std::vector<int> position;
  Expr result;
};

struct Derivation {
  Expr start;
  std::vector<DerivationStep> steps;
  Expr end(const Polygraph&) const { return steps.empty() ? start : steps.back().result; }
};

struct DerivationCheck {
  bool ok = false;
  int failed_step = -1;  // 0-based; -1 if ok
  std::string message;
};

DerivationCheck check_derivation(const Polygraph& p, const Derivation& d);

// All single-axiom rewrites of e (used by the oracle and by property tests).
struct RewriteResult {
  Expr expr;
  int axiom;
  std::vector<int> position;
};
std::vector<RewriteResult> axiom_rewrites(const Polygraph& p, Expr e, int size_bound);

}  // namespace plexus
