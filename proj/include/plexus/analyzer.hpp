#pragma once

#include <map>
#include <string>
#include <vector>

#include "plexus/polyplex.hpp"

namespace plexus {

// Membership predicate for the built-in classes of polygraphs, intersected
// with a dimension cap.
struct ClassSpec {
  enum class Base { All, Positive, SourcePositive, TargetPositive, ManyToOne, Globular };
  Base base = Base::All;
  int max_dim = kMaxDim;

  bool member(const Polygraph& pg) const;
  std::string name() const;
  static ClassSpec parse(const std::string& text);  // e.g. "source-positive"
};

struct EnumerationBudget {
  int max_dim = 2;
  std::size_t max_cells = 8;
  std::size_t max_top_cells = 8;
  std::size_t max_expression_depth = 6;  // compose-generation cap
};

// All plexes of the class within budget: dimension by dimension, gluing every
// parallel pair of lower polyplexes and keeping the results in the class.
// Deterministic order, duplicate-free up to polyplex isomorphism.
std::vector<Polyplex> enumerate_plexes(const ClassSpec& cls, const EnumerationBudget& budget);

struct EnumerationResult {
  std::vector<Polyplex> polyplexes;
  std::size_t unknown_comparisons = 0;  // inconclusive dedup checks
};

// Closure of the plexes under composition at every level, deduplicated up to
// polyplex isomorphism.
EnumerationResult enumerate_polyplexes(const ClassSpec& cls, const EnumerationBudget& budget);

enum class CertVerdict { CertifiedUpToBudget, Refuted, Inconclusive };

struct CertWitness {
  Polyplex polyplex;
  PolygraphMorphism automorphism;  // non-identity, fixes the universal arrow
};

struct CertReport {
  std::string class_name;
  EnumerationBudget budget;
  std::map<int, std::size_t> counts_per_dim;
  CertVerdict verdict = CertVerdict::Inconclusive;
  std::vector<CertWitness> witnesses;
  std::size_t quarantined = 0;  // unresolved comparisons (enumeration + searches)
  // composition-by-pushout sanity on composable pairs/triples: associativity
  // holds up to a unique isomorphism
  std::size_t condition_c_checked = 0;
  bool condition_c_ok = true;
  int threads = 1;
  std::string to_string() const;
};

enum class CertifyMode { Serial, Parallel };

// Runs the automorphism-group check on every enumerated polyplex. The
// parallel mode distributes polyplexes over OpenMP threads; results are
// merged in enumeration order, so both modes produce identical reports.
CertReport certify_good(const ClassSpec& cls, const EnumerationBudget& budget,
                        CertifyMode mode = CertifyMode::Parallel);

struct EhDemo {
  Derivation derivation;
  bool derivation_ok = false;
  AutGroup group;                // of the x #_1 y polyplex
  bool rejected_by_positive = false;  // the shape needs identity boundaries
};
EhDemo eckmann_hilton_demo();

struct ExampleReport {
  std::string name;
  std::vector<std::pair<std::string, bool>> claims;
  bool ok() const {
    for (auto& [c, v] : claims) {
      if (!v) return false;
    }
    return true;
  }
  std::string to_string() const;
};

ExampleReport run_named_example(const std::string& name);
std::vector<std::string> example_names();

}  // namespace plexus
