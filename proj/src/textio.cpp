#include "plexus/textio.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace plexus {

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.' ||
         static_cast<unsigned char>(c) >= 0x80;
}

struct ExprParser {
  const std::string& s;
  std::size_t pos = 0;
  int line;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(line, msg); }

  ExprTree parse_atom() {
    skip_ws();
    if (pos >= s.size()) fail("expected expression");
    if (s[pos] == '(') {
      ++pos;
      ExprTree e = parse_level(0);
      skip_ws();
      if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
      ++pos;
      return e;
    }
    if (!ident_char(s[pos])) fail(std::string("unexpected character '") + s[pos] + "'");
    std::size_t start = pos;
    while (pos < s.size() && ident_char(s[pos])) ++pos;
    std::string name = s.substr(start, pos - start);
    skip_ws();
    if (name == "gen" && pos < s.size() && s[pos] == '(') {
      ++pos;
      skip_ws();
      std::size_t st = pos;
      while (pos < s.size() && ident_char(s[pos])) ++pos;
      if (st == pos) fail("expected generator name in gen(...)");
      std::string inner = s.substr(st, pos - st);
      skip_ws();
      if (pos >= s.size() || s[pos] != ')') fail("expected ')' after gen(name");
      ++pos;
      return ExprTree::gen(inner);
    }
    return ExprTree::gen(name);
  }

  // peeks a `*k` operator; returns level or -1
  int peek_op() {
    skip_ws();
    if (pos >= s.size() || s[pos] != '*') return -1;
    std::size_t q = pos + 1;
    if (q >= s.size() || !std::isdigit(static_cast<unsigned char>(s[q]))) {
      fail("expected composition level after '*'");
    }
    int k = 0;
    while (q < s.size() && std::isdigit(static_cast<unsigned char>(s[q]))) {
      k = k * 10 + (s[q] - '0');
      ++q;
    }
    return k;
  }
  void consume_op() {
    skip_ws();
    ++pos;  // '*'
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  // precedence climbing: higher levels bind tighter, left-associative
  ExprTree parse_level(int min_level) {
    ExprTree lhs = parse_atom();
    for (;;) {
      int k = peek_op();
      if (k < min_level) break;
      consume_op();
      ExprTree rhs = parse_level(k + 1);
      lhs = ExprTree::comp(k, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  ExprTree parse_all() {
    ExprTree e = parse_level(0);
    if (!eof()) fail("trailing input after expression");
    return e;
  }
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ExprTree parse_expr(const std::string& text) {
  ExprParser p{text, 0, 0};
  return p.parse_all();
}

PolyFile parse_polygraph_text(const std::string& text) {
  PolyFile out;
  std::vector<Polygraph::CellSpec> specs;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  int last_dim = 0;
  bool saw_universal = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("cell", 0) == 0 && line.size() > 4 && std::isspace(static_cast<unsigned char>(line[4]))) {
      std::string rest = trim(line.substr(4));
      auto colon = rest.find(':');
      if (colon == std::string::npos) throw ParseError(lineno, "expected ':' in cell declaration");
      std::string name = trim(rest.substr(0, colon));
      if (name.empty()) throw ParseError(lineno, "empty cell name");
      std::string tail = trim(rest.substr(colon + 1));
      auto eq = tail.find('=');
      std::string dim_str = trim(eq == std::string::npos ? tail : tail.substr(0, eq));
      int dim = 0;
      try {
        std::size_t used = 0;
        dim = std::stoi(dim_str, &used);
        if (used != dim_str.size() || dim < 0) throw std::invalid_argument("");
      } catch (...) {
        throw ParseError(lineno, "invalid dimension '" + dim_str + "'");
      }
      if (dim < last_dim) {
        throw ParseError(lineno, "cell '" + name + "' of dimension " + std::to_string(dim) +
                                     " declared after a cell of dimension " +
                                     std::to_string(last_dim) +
                                     " (declarations must be non-decreasing in dimension)");
      }
      last_dim = dim;
      Polygraph::CellSpec spec;
      spec.name = name;
      spec.dim = dim;
      if (dim == 0) {
        if (eq != std::string::npos) throw ParseError(lineno, "0-cells take no boundary");
      } else {
        if (eq == std::string::npos) {
          throw ParseError(lineno, "cell of dimension >= 1 needs '= <src> => <tgt>'");
        }
        std::string body = tail.substr(eq + 1);
        auto arrow = body.find("=>");
        if (arrow == std::string::npos) throw ParseError(lineno, "expected '=>' in boundary");
        ExprParser ps{body.substr(0, arrow), 0, lineno};
        ExprParser pt{body.substr(arrow + 2), 0, lineno};
        spec.src = ps.parse_all();
        spec.tgt = pt.parse_all();
      }
      for (const auto& sp : specs) {
        if (sp.name == name) throw ParseError(lineno, "duplicate cell name '" + name + "'");
      }
      specs.push_back(std::move(spec));
      continue;
    }
    if (line.rfind("universal", 0) == 0) {
      auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError(lineno, "expected '=' after 'universal'");
      ExprParser pe{line.substr(eq + 1), 0, lineno};
      out.universal = pe.parse_all();
      saw_universal = true;
      continue;
    }
    if (line.rfind("label", 0) == 0) {
      std::string rest = trim(line.substr(5));
      auto arrow = rest.find("->");
      if (arrow == std::string::npos) throw ParseError(lineno, "expected '->' in label line");
      std::string from = trim(rest.substr(0, arrow));
      std::string to = trim(rest.substr(arrow + 2));
      if (from.empty() || to.empty()) throw ParseError(lineno, "empty label endpoint");
      out.labels.push_back({from, to});
      continue;
    }
    throw ParseError(lineno, "unrecognized line: " + line);
  }
  try {
    out.polygraph = Polygraph(specs);
  } catch (const std::invalid_argument& e) {
    throw ParseError(lineno, e.what());
  }
  out.has_universal = saw_universal;
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PolyFile parse_polygraph_file(const std::string& path) {
  return parse_polygraph_text(read_file(path));
}

std::string serialize_polygraph(const Polygraph& p) {
  std::ostringstream os;
  std::vector<CellId> order = p.all_cells();
  std::stable_sort(order.begin(), order.end(),
                   [&](CellId a, CellId b) { return p.dim(a) < p.dim(b); });
  for (CellId c : order) {
    os << "cell " << p.name(c) << " : " << p.dim(c);
    if (p.dim(c) >= 1) {
      os << " = " << p.expr_to_string(p.src(c)) << " => " << p.expr_to_string(p.tgt(c));
    }
    os << "\n";
  }
  return os.str();
}

Derivation parse_derivation_text(const Polygraph& p, const std::string& text) {
  Derivation d;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool saw_start = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("start", 0) == 0) {
      auto colon = line.find(':');
      if (colon == std::string::npos) throw ParseError(lineno, "expected ':' after 'start'");
      ExprParser pe{line.substr(colon + 1), 0, lineno};
      d.start = p.from_tree(pe.parse_all());
      saw_start = true;
      continue;
    }
    if (line.front() == '{') {
      if (!saw_start) throw ParseError(lineno, "derivation step before 'start:' line");
      if (line.back() != '}') throw ParseError(lineno, "expected '}' at end of step");
      std::string body = line.substr(1, line.size() - 2);
      DerivationStep step;
      bool have_axiom = false, have_pos = false, have_result = false;
      std::size_t cur = 0;
      auto next_field = [&](std::string& key, std::string& val) -> bool {
        while (cur < body.size() && (body[cur] == ' ' || body[cur] == ',')) ++cur;
        if (cur >= body.size()) return false;
        auto colon = body.find(':', cur);
        if (colon == std::string::npos) throw ParseError(lineno, "expected ':' in step field");
        key = trim(body.substr(cur, colon - cur));
        std::size_t end;
        if (key == "result") {
          end = body.size();  // result is the last field; may contain commas
        } else {
          end = body.find(',', colon);
          if (end == std::string::npos) end = body.size();
        }
        val = trim(body.substr(colon + 1, end - colon - 1));
        cur = end;
        return true;
      };
      std::string key, val;
      while (next_field(key, val)) {
        if (key == "axiom") {
          step.axiom = std::stoi(val);
          have_axiom = true;
        } else if (key == "position") {
          have_pos = true;
          if (val != "root" && !val.empty()) {
            std::size_t i = 0;
            while (i < val.size()) {
              if (val[i] == '0' || val[i] == '1') {
                step.position.push_back(val[i] - '0');
                ++i;
              } else if (val[i] == '.') {
                ++i;
              } else {
                throw ParseError(lineno, "invalid position '" + val + "'");
              }
            }
          }
        } else if (key == "result") {
          ExprParser pe{val, 0, lineno};
          step.result = p.from_tree(pe.parse_all());
          have_result = true;
        } else {
          throw ParseError(lineno, "unknown step field '" + key + "'");
        }
      }
      if (!have_axiom || !have_pos || !have_result) {
        throw ParseError(lineno, "step needs axiom, position and result");
      }
      d.steps.push_back(std::move(step));
      continue;
    }
    throw ParseError(lineno, "unrecognized line: " + line);
  }
  if (!saw_start) throw ParseError(lineno, "derivation needs a 'start:' line");
  return d;
}

Derivation parse_derivation_file(const Polygraph& p, const std::string& path) {
  return parse_derivation_text(p, read_file(path));
}

std::string serialize_derivation(const Polygraph& p, const Derivation& d) {
  std::ostringstream os;
  os << "start: " << p.expr_to_string(d.start) << "\n";
  for (const auto& st : d.steps) {
    os << "{axiom: " << st.axiom << ", position: ";
    if (st.position.empty()) {
      os << "root";
    } else {
      for (std::size_t i = 0; i < st.position.size(); ++i) {
        if (i) os << '.';
        os << st.position[i];
      }
    }
    os << ", result: " << p.expr_to_string(st.result) << "}\n";
  }
  return os.str();
}

}  // namespace plexus
