#pragma once

#include <memory>
#include <string>
#include <vector>

#include "plexus/polyplex.hpp"

namespace plexus::corpus {

// Built-in objects used by the command line, the example reports and the
// test fixtures. Cell names follow the usual diagrams.

Polyplex point();               // single vertex
Polyplex path(int n);           // a_0 -> a_1 -> ... -> a_n
Polyplex globe(int n, int m);   // one 2-cell from a length-n path to a length-m path
Polyplex d1();                  // globe(1,1) whiskered by an edge on the right
Polyplex d2();                  // edge then globe(1,1)
Polyplex a22();                 // globe(2,2)
Polyplex u_plex();              // 3-cell from d1 to a22
Polyplex v_plex();              // 3-cell from d2 to a22
Polyplex u_a11();               // u_plex composed with globe(1,1) on the right

// The 15-cell polygraph carrying both whiskered composites of U and V.
std::shared_ptr<const Polygraph> iso_pair_polygraph();
Expr iso_pair_composite(const Polygraph& pg, int which);  // which in {1, 2}

// The 19-cell polygraph with two 3-cells that compose in two inequivalent
// ways with identical boundaries.
std::shared_ptr<const Polygraph> forest_polygraph();
Expr forest_composite(const Polygraph& pg, int which);
Expr forest_source2(const Polygraph& pg);  // the shared 2-source
Expr forest_target2(const Polygraph& pg);  // the shared 2-target

// One 0-cell with two 2-cells on its identity.
std::shared_ptr<const Polygraph> eh_polygraph();
Polyplex eh_polyplex();  // x #_1 y over it
// The unit/exchange derivation proving e.x.y.e = e.y.x.e.
Derivation eh_derivation(const Polygraph& pg);

// Registry used by the CLI: polygraph (and optional universal) by name.
struct Entry {
  std::shared_ptr<const Polygraph> pg;
  bool has_universal = false;
  Expr universal;
};
Entry named(const std::string& name);
std::vector<std::string> names();

}  // namespace plexus::corpus
