#pragma once

#include <iosfwd>
#include <string>

#include "plexus/equality.hpp"
#include "plexus/polygraph.hpp"

namespace plexus {

// Expression grammar: `gen(name)` or a bare name; `e *k f` for the
// k-composition, k a decimal literal; parentheses; whitespace-insensitive.
// Higher k binds tighter; same level associates to the left.
ExprTree parse_expr(const std::string& text);

// Polygraph file format: one declaration per line,
//   cell <name> : <dim>
//   cell <name> : <dim> = <src-expr> => <tgt-expr>
// with `#` comments and non-decreasing dimensions. A polyplex file adds
//   universal = <expr>
// and a labeled diagram adds `label <cell> -> <cell>` lines.
struct PolyFile {
  Polygraph polygraph;
  bool has_universal = false;
  ExprTree universal;
  std::vector<std::pair<std::string, std::string>> labels;
};

PolyFile parse_polygraph_text(const std::string& text);
PolyFile parse_polygraph_file(const std::string& path);

std::string serialize_polygraph(const Polygraph& p);

// Derivation file: `start: <expr>` followed by one record per line:
//   {axiom: 4, position: 0.1, result: <expr>}
// Position is a dot-separated list of 0/1 child indices; `root`/empty for the
// whole expression.
Derivation parse_derivation_text(const Polygraph& p, const std::string& text);
Derivation parse_derivation_file(const Polygraph& p, const std::string& path);
std::string serialize_derivation(const Polygraph& p, const Derivation& d);

std::string read_file(const std::string& path);

}  // namespace plexus
