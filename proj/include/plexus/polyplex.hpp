#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "plexus/equality.hpp"
#include "plexus/polygraph.hpp"

namespace plexus {

// A polygraph generated by a distinguished arrow. Cells carry canonical
// names c<dim>_<i>, indexed by (dimension, first use in a left-to-right
// traversal of the universal expression), so equal constructions serialize
// identically. Boundary diagrams are computed on first use and cached;
// copies share the cache.
class Polyplex {
 public:
  struct Boundary {
    std::shared_ptr<const Polyplex> plex;
    std::vector<CellId> into;  // cell map into pg()
  };

  Polyplex() = default;

  const Polygraph& pg() const { return *pg_; }
  const std::shared_ptr<const Polygraph>& pg_ptr() const { return pg_; }
  Expr universal() const { return universal_; }
  int dim() const { return pg_ ? pg_->arrow_dim(universal_) : 0; }
  bool valid() const { return pg_ != nullptr; }

  // k-boundary as a polyplex with its inclusion map; requires k < dim().
  const Boundary& boundary(int k, Sign sign) const;

  const std::string& canonical_text() const;

  friend Polyplex make_polyplex(const Polygraph& pg, Expr universal,
                                std::vector<CellId>* old_to_new);

 private:
  struct Cache;
  std::shared_ptr<const Polygraph> pg_;
  Expr universal_;
  std::shared_ptr<Cache> cache_;
};

// Canonicalizes (pg, universal) into a Polyplex. Requires support(universal)
// to be all of pg (no proper sub-polygraph contains the universal arrow).
// old_to_new, when given, receives the renaming.
Polyplex make_polyplex(const Polygraph& pg, Expr universal,
                       std::vector<CellId>* old_to_new = nullptr);

// An arrow of X* in diagram form: a polyplex together with a labeling
// morphism into X.
struct LabeledDiagram {
  Polyplex plex;
  std::vector<CellId> labeling;  // plex cell -> X cell
  std::shared_ptr<const Polygraph> target;
  // False when X is outside the classes for which diagram representation is
  // known to be unique up to unique isomorphism.
  bool representation_unique = true;

  Expr labeled_universal() const {
    return map_expr(plex.pg(), plex.universal(), *target, labeling);
  }
};

// Structural recursion over a well-formed expression: generators map to
// their plex via the characteristic labeling, composites to boundary-matched
// pushouts.
LabeledDiagram eval(std::shared_ptr<const Polygraph> X, Expr e);

// Glues two polyplexes along their matched k-boundary; the universal arrow
// of the result is the k-composite of the images. Throws on boundary
// mismatch.
Polyplex compose(const Polyplex& p, int k, const Polyplex& q);

// New plex with one fresh top cell between two parallel polyplexes glued
// along their common boundary. cell_dim defaults to max(dim)+1; pass it
// explicitly to build cells over identity boundaries.
Polyplex make_plex(const Polyplex& src, const Polyplex& tgt, const std::string& name,
                   int cell_dim = -1);

struct PolyplexIso {
  std::optional<PolygraphMorphism> iso;  // first found, deterministic
  bool had_unknown = false;              // some candidate was undecidable
};

// Isomorphism of underlying polygraphs carrying one universal arrow to the
// other (and commuting with labelings, for diagrams).
PolyplexIso polyplexes_isomorphic(const Polyplex& p, const Polyplex& q);
PolyplexIso diagrams_isomorphic(const LabeledDiagram& a, const LabeledDiagram& b);

// Every labeling-compatible universal-preserving isomorphism (for uniqueness
// assertions).
std::vector<PolygraphMorphism> all_diagram_isos(const LabeledDiagram& a, const LabeledDiagram& b,
                                                bool* had_unknown = nullptr);

struct AutGroup {
  std::vector<PolygraphMorphism> elements;    // verified members (includes identity)
  std::vector<PolygraphMorphism> unresolved;  // candidates with undecided universal equality
  std::size_t order() const { return elements.size(); }
};

// Automorphisms of the underlying polygraph fixing the universal arrow.
// Cells appearing in the top boundaries are pinned before the search.
AutGroup automorphism_group(const Polyplex& p);

struct Location {
  bool source_side = false;            // appears in the source of the polyplex
  std::vector<CellId> target_of;       // top cells in whose target it appears
};

// Where a cell of dimension < dim(p) sits in the diagram; for cells of
// dimension exactly dim(p)-1 the two cases are exclusive and the witness
// unique.
Location locate_cell(const Polyplex& p, CellId c);

// A chain of top cells linking x back to the source of the polyplex: the
// first element shares a (dim-1)-cell with the source of p, and consecutive
// elements share one between target and source. Empty if none exists (which
// the theory rules out for source-positive polyplexes).
std::vector<CellId> find_chain(const Polyplex& p, CellId x);

// Parses a polyplex from a polygraph-with-universal file body.
Polyplex polyplex_from_parts(const Polygraph& pg, Expr universal);

}  // namespace plexus
