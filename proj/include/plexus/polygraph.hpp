#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "plexus/base.hpp"

namespace plexus {

using CellId = std::uint32_t;
inline constexpr CellId kNoCell = 0xffffffffu;

// Handle into a polygraph's expression arena. Expressions are hash-consed
// immutable DAGs; an Expr is only meaningful together with the polygraph that
// issued it.
struct Expr {
  std::uint32_t id = 0xffffffffu;
  bool valid() const { return id != 0xffffffffu; }
  friend bool operator==(Expr a, Expr b) { return a.id == b.id; }
  friend bool operator!=(Expr a, Expr b) { return a.id != b.id; }
  friend bool operator<(Expr a, Expr b) { return a.id < b.id; }
};

// Plain syntax tree, used by parsers and builders before a polygraph exists.
struct ExprTree {
  bool is_gen = true;
  std::string name;  // generator name, for is_gen
  int level = 0;     // composition level k, for !is_gen
  std::unique_ptr<ExprTree> left, right;

  static ExprTree gen(std::string n) {
    ExprTree t;
    t.is_gen = true;
    t.name = std::move(n);
    return t;
  }
  static ExprTree comp(int k, ExprTree l, ExprTree r) {
    ExprTree t;
    t.is_gen = false;
    t.level = k;
    t.left = std::make_unique<ExprTree>(std::move(l));
    t.right = std::make_unique<ExprTree>(std::move(r));
    return t;
  }
  ExprTree clone() const;
};

struct ValidationIssue {
  enum class Kind {
    DuplicateName,
    DimensionTooHigh,
    MissingBoundary,
    UnexpectedBoundary,
    DanglingReference,
    BoundaryDimension,
    IllFormedBoundary,
    NonParallelBoundary,
    UndecidedBoundary,  // a well-formedness or parallelism check came back unknown
  };
  Kind kind;
  std::string cell;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

struct ClassFlags {
  bool positive = false;
  bool source_positive = false;
  bool target_positive = false;
  bool many_to_one = false;
  bool globular = false;
};

// A finite polygraph: a graded table of cells, each cell of dimension n >= 1
// carrying source/target expressions over the lower skeleton. Immutable after
// construction; expression queries go through an internal hash-consed arena
// with memoized boundaries (mutable, mutex-guarded).
class Polygraph {
 public:
  struct CellSpec {
    std::string name;
    int dim = 0;
    std::optional<ExprTree> src, tgt;  // required iff dim >= 1
  };

  Polygraph();
  explicit Polygraph(const std::vector<CellSpec>& cells);
  Polygraph(const Polygraph& other);
  Polygraph& operator=(const Polygraph& other);
  Polygraph(Polygraph&&) noexcept;
  Polygraph& operator=(Polygraph&&) noexcept;
  ~Polygraph();

  std::size_t cell_count() const { return cells_.size(); }
  std::size_t cell_count(int dim) const;
  int max_dim() const { return max_dim_; }

  bool has_cell(const std::string& name) const;
  CellId cell(const std::string& name) const;  // throws if absent
  const std::string& name(CellId c) const { return cells_[c].name; }
  int dim(CellId c) const { return cells_[c].dim; }
  Expr src(CellId c) const;  // dim >= 1 only
  Expr tgt(CellId c) const;
  std::vector<CellId> cells_of_dim(int dim) const;
  std::vector<CellId> all_cells() const;

  // --- expression construction ---
  Expr gen(CellId c) const;
  Expr gen(const std::string& name) const { return gen(cell(name)); }
  Expr comp(int k, Expr l, Expr r) const;
  Expr from_tree(const ExprTree& t) const;  // throws ParseError-ish on unknown names
  ExprTree to_tree(Expr e) const;

  // --- expression structure ---
  bool is_gen(Expr e) const;
  CellId gen_cell(Expr e) const;
  int comp_level(Expr e) const;
  Expr left(Expr e) const;
  Expr right(Expr e) const;
  int raw_dim(Expr e) const;  // max generator dimension in the raw tree
  int node_count(Expr e) const;

  // --- arrow-level operations ---

  // Canonical reduced form: unit composites Comp(k, a, b) with one side of
  // dimension <= k are collapsed, and each composition level is
  // left-associated. Reduction preserves the denoted arrow.
  Expr reduce(Expr e) const;
  // Dimension of the denoted arrow (= max generator dimension of reduce(e)).
  int arrow_dim(Expr e) const;
  // k-source / k-target, always returned in reduced form.
  Expr boundary(Expr e, int k, Sign sign) const;
  // Well-formedness: every composite's interfaces agree as arrows.
  Verdict well_formed(Expr e) const;
  // Occurrence count of a top-dimensional generator (dim(c) == arrow_dim(e)).
  long count(Expr e, CellId c) const;
  // Occurrence counts of all generators of dimension arrow_dim(e).
  std::map<CellId, long> count_vector(Expr e) const;
  // True iff e, seen as an n-arrow, is an identity (no generator of dimension
  // >= n occurs in it).
  bool is_identity(Expr e, int n) const;
  // Cells of the smallest sub-polygraph over which e is well-formed (sorted).
  std::vector<CellId> support(Expr e) const;

  std::string expr_to_string(Expr e) const;

  // Serialization key for a raw expression (structural identity).
  std::string expr_key(Expr e) const;

 private:
  struct Cell {
    std::string name;
    int dim = 0;
    Expr src, tgt;
  };
  struct Node {
    bool is_gen;
    int level;      // composition level (composites)
    CellId cell;    // generator (gens)
    Expr l, r;      // children (composites)
    int dim;        // max generator dimension in this subtree
  };
  struct Memo;

  Expr intern(Node n) const;
  const Node& node(Expr e) const;
  Expr reduce_uncached(Expr e) const;
  Expr boundary_uncached(Expr e, int k, Sign sign) const;
  void support_into(Expr e, std::vector<bool>& seen) const;

  std::vector<Cell> cells_;
  std::map<std::string, CellId> by_name_;
  int max_dim_ = 0;
  mutable std::unique_ptr<Memo> memo_;
  friend class PolygraphBuilder;
};

// Incremental construction (used by parsers, pushouts, enumeration).
class PolygraphBuilder {
 public:
  // src/tgt given as trees over previously added cells; pass nullopt for 0-cells.
  CellId add_cell(const std::string& name, int dim, std::optional<ExprTree> src = std::nullopt,
                  std::optional<ExprTree> tgt = std::nullopt);
  bool has_cell(const std::string& name) const;
  std::size_t cell_count() const { return specs_.size(); }
  Polygraph build() const { return Polygraph(specs_); }

 private:
  std::vector<Polygraph::CellSpec> specs_;
  std::map<std::string, std::size_t> by_name_;
};

ValidationReport validate(const Polygraph& p);
ClassFlags classify(const Polygraph& p);

// Checks the two non-unital axioms on a concrete arrow: boundaries of an
// arrow of dimension > n have dimension exactly n, and composites have the
// maximum of their factors' dimensions.
bool non_unital_axioms_hold(const Polygraph& p, Expr e);

// Dimension-preserving cell map commuting with boundaries up to arrow equality.
struct PolygraphMorphism {
  const Polygraph* source = nullptr;
  const Polygraph* target = nullptr;
  std::vector<CellId> map;  // indexed by source CellId

  CellId operator()(CellId c) const { return map[c]; }
  bool is_identity_map() const;
  bool injective() const;
  bool surjective() const;
};

// Transports an expression along a cell map into the target polygraph.
Expr map_expr(const Polygraph& source, Expr e, const Polygraph& target,
              const std::vector<CellId>& cell_map);

Verdict morphism_valid(const PolygraphMorphism& m);
PolygraphMorphism identity_morphism(const Polygraph& p);
PolygraphMorphism compose_morphisms(const PolygraphMorphism& f, const PolygraphMorphism& g);  // g after f

struct PushoutResult {
  Polygraph result;
  std::vector<CellId> in_a, in_b;  // injections (cell maps); morphisms over `result`
  std::vector<std::string> issues; // transported-boundary conflicts, if any
};

// Cellwise pushout of a <- r -> b. Glued cells are named "G.<a-name>",
// left-only "L.<name>", right-only "R.<name>", ordered by (dimension,
// provenance).
PushoutResult pushout(const PolygraphMorphism& f, const PolygraphMorphism& g);

// Disjoint union; cells named "L.<name>" / "R.<name>".
PushoutResult coproduct(const Polygraph& a, const Polygraph& b);

struct EpiMonoFactorization {
  Polygraph image;
  PolygraphMorphism epi;   // source -> image
  PolygraphMorphism mono;  // image -> target
};
EpiMonoFactorization factor_epi_mono(const PolygraphMorphism& m);

// Restriction to a boundary-closed cell subset (cells sorted; keeps names).
Polygraph sub_polygraph(const Polygraph& p, const std::vector<CellId>& cells,
                        std::vector<CellId>* old_to_new = nullptr);

struct IsoSearchOptions {
  std::map<CellId, CellId> pinned;  // partial assignment that solutions must extend
  std::size_t limit = 0;            // stop after this many solutions (0 = all)
};

struct IsoSearchResult {
  std::vector<PolygraphMorphism> isos;
  // True if some candidate was discarded only because a boundary-equality
  // check was inconclusive; the enumeration is then not known to be complete.
  bool had_unknown = false;
};

// All dimension-graded bijective morphisms P -> Q extending `pinned`,
// enumerated deterministically (lowest dimension first, CellId order).
IsoSearchResult find_isomorphisms(const Polygraph& p, const Polygraph& q,
                                  const IsoSearchOptions& opts = {});

IsoSearchResult automorphisms(const Polygraph& p);

}  // namespace plexus
