// Command-line front end: parse polygraph and expression files, run the
// engine, and print reports. Exit codes: 0 success / claim holds, 1 claim
// fails, 2 usage or parse error, 3 inconclusive (unknown) verdicts.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>

#include "plexus/analyzer.hpp"
#include "plexus/corpus.hpp"
#include "plexus/polyplex.hpp"
#include "plexus/textio.hpp"

using namespace plexus;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kClaimFailed = 1;
constexpr int kUsage = 2;
constexpr int kUnknown = 3;

struct Input {
  std::string file;
  std::string example;

  corpus::Entry load() const {
    if (!example.empty()) return corpus::named(example);
    PolyFile pf = parse_polygraph_file(file);
    corpus::Entry e;
    e.pg = std::make_shared<Polygraph>(std::move(pf.polygraph));
    if (pf.has_universal) {
      e.has_universal = true;
      e.universal = e.pg->from_tree(pf.universal);
    }
    return e;
  }
};

void add_input(CLI::App* cmd, Input& in) {
  auto* grp = cmd->add_option_group("input", "exactly one of --file / --example");
  grp->add_option("-f,--file", in.file, "polygraph (or polyplex) file");
  grp->add_option("--example", in.example, "built-in corpus entry");
  grp->require_option(1);
}

int oracle_bound_from_env() {
  if (const char* s = std::getenv("PLEXUS_ORACLE_BOUND")) {
    return std::atoi(s);
  }
  return 0;
}

EqualityOptions eq_options(int cli_bound) {
  EqualityOptions opts;
  opts.oracle_size_bound = cli_bound > 0 ? cli_bound : oracle_bound_from_env();
  return opts;
}

std::string flags_text(const ClassFlags& f) {
  std::ostringstream os;
  os << "positive: " << (f.positive ? "yes" : "no") << "\n"
     << "source-positive: " << (f.source_positive ? "yes" : "no") << "\n"
     << "target-positive: " << (f.target_positive ? "yes" : "no") << "\n"
     << "many-to-one: " << (f.many_to_one ? "yes" : "no") << "\n"
     << "globular: " << (f.globular ? "yes" : "no") << "\n";
  return os.str();
}

json flags_json(const ClassFlags& f) {
  return json{{"positive", f.positive},
              {"source_positive", f.source_positive},
              {"target_positive", f.target_positive},
              {"many_to_one", f.many_to_one},
              {"globular", f.globular}};
}

std::string diagram_text(const LabeledDiagram& d) {
  std::ostringstream os;
  os << d.plex.canonical_text();
  for (CellId c = 0; c < d.plex.pg().cell_count(); ++c) {
    os << "label " << d.plex.pg().name(c) << " -> " << d.target->name(d.labeling[c]) << "\n";
  }
  if (!d.representation_unique) {
    os << "# representation not guaranteed unique (class is not source- or "
          "target-positive)\n";
  }
  return os.str();
}

const char* verdict_word(Verdict v) {
  switch (v) {
    case Verdict::True: return "equal";
    case Verdict::False: return "unequal";
    default: return "unknown";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite polygraphs, pasting diagrams and good-class certification"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  // --- validate ---
  auto* c_validate = app.add_subcommand("validate", "check that a file is a valid polygraph");
  Input in_validate;
  add_input(c_validate, in_validate);

  // --- classify ---
  auto* c_classify = app.add_subcommand("classify", "class membership flags");
  Input in_classify;
  add_input(c_classify, in_classify);

  // --- eq ---
  auto* c_eq = app.add_subcommand("eq", "decide equality of two arrows");
  Input in_eq;
  add_input(c_eq, in_eq);
  std::string lhs, rhs, expect_eq;
  int cli_bound = 0;
  c_eq->add_option("--lhs", lhs, "left expression")->required();
  c_eq->add_option("--rhs", rhs, "right expression")->required();
  c_eq->add_option("--expect", expect_eq, "fail unless the verdict matches");
  c_eq->add_option("--oracle-bound", cli_bound, "size bound for the brute-force oracle");

  // --- boundary ---
  auto* c_boundary = app.add_subcommand("boundary", "k-source or k-target of an expression");
  Input in_boundary;
  add_input(c_boundary, in_boundary);
  std::string bexpr, bsign = "-";
  int blevel = 0;
  c_boundary->add_option("--expr", bexpr, "expression")->required();
  c_boundary->add_option("--level,-k", blevel, "boundary level")->required();
  c_boundary->add_option("--sign", bsign, "- (source) or + (target)");

  // --- support ---
  auto* c_support = app.add_subcommand("support", "smallest sub-polygraph carrying an arrow");
  Input in_support;
  add_input(c_support, in_support);
  std::string sexpr;
  c_support->add_option("--expr", sexpr, "expression")->required();

  // --- eval ---
  auto* c_eval = app.add_subcommand("eval", "pasting diagram of an arrow");
  Input in_eval;
  add_input(c_eval, in_eval);
  std::string eexpr;
  c_eval->add_option("--expr", eexpr, "expression (defaults to the file's universal)");

  // --- autgroup ---
  auto* c_aut = app.add_subcommand("autgroup", "automorphism group of a polyplex");
  Input in_aut;
  add_input(c_aut, in_aut);

  // --- enumerate ---
  auto* c_enum = app.add_subcommand("enumerate", "plexes or polyplexes of a class");
  std::string what = "plexes", cls_name = "all";
  EnumerationBudget budget;
  c_enum->add_option("--what", what, "plexes | polyplexes");
  c_enum->add_option("--class", cls_name, "polygraph class");
  c_enum->add_option("--max-dim", budget.max_dim, "dimension cap");
  c_enum->add_option("--max-cells", budget.max_cells, "cell-count cap");
  c_enum->add_option("--max-top-cells", budget.max_top_cells, "top-cell cap");
  c_enum->add_option("--depth", budget.max_expression_depth, "composition-generation cap");

  // --- certify ---
  auto* c_cert = app.add_subcommand("certify", "good-class certification up to a budget");
  std::string cert_cls = "source-positive", expect_cert;
  EnumerationBudget cert_budget;
  bool serial = false;
  c_cert->add_option("--class", cert_cls, "polygraph class");
  c_cert->add_option("--max-dim", cert_budget.max_dim, "dimension cap");
  c_cert->add_option("--max-cells", cert_budget.max_cells, "cell-count cap");
  c_cert->add_option("--max-top-cells", cert_budget.max_top_cells, "top-cell cap");
  c_cert->add_option("--depth", cert_budget.max_expression_depth, "composition-generation cap");
  c_cert->add_flag("--serial", serial, "use the serial reference path");
  c_cert->add_option("--expect", expect_cert, "certified | refuted");

  // --- example ---
  auto* c_example = app.add_subcommand("example", "run a named demonstration");
  std::string example_name;
  bool list_examples = false;
  c_example->add_option("--name", example_name, "example name");
  c_example->add_flag("--list", list_examples, "list example names");

  // --- check-derivation ---
  auto* c_check = app.add_subcommand("check-derivation", "verify an equational certificate");
  Input in_check;
  add_input(c_check, in_check);
  std::string deriv_file;
  c_check->add_option("--derivation", deriv_file, "derivation file")->required();

  // --- eh demo ---
  auto* c_eh = app.add_subcommand("eh-demo", "Eckmann-Hilton derivation and witness group");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*c_validate) {
      auto entry = in_validate.load();
      ValidationReport rep = validate(*entry.pg);
      if (as_json) {
        json j{{"valid", rep.ok()}, {"issues", json::array()}};
        for (auto& i : rep.issues) j["issues"].push_back({{"cell", i.cell}, {"message", i.message}});
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << rep.to_string() << "\n";
      }
      return rep.ok() ? kOk : kClaimFailed;
    }

    if (*c_classify) {
      auto entry = in_classify.load();
      ClassFlags f = classify(*entry.pg);
      std::cout << (as_json ? flags_json(f).dump(2) + "\n" : flags_text(f));
      return kOk;
    }

    if (*c_eq) {
      auto entry = in_eq.load();
      Expr l = entry.pg->from_tree(parse_expr(lhs));
      Expr r = entry.pg->from_tree(parse_expr(rhs));
      if (entry.pg->well_formed(l) == Verdict::False ||
          entry.pg->well_formed(r) == Verdict::False) {
        std::cerr << "error: expression is not well-formed over this polygraph\n";
        return kUsage;
      }
      Verdict v = arrows_equal(*entry.pg, l, r, eq_options(cli_bound));
      std::cout << (as_json ? json{{"verdict", verdict_word(v)}}.dump(2) + "\n"
                            : std::string(verdict_word(v)) + "\n");
      if (!expect_eq.empty() && expect_eq != verdict_word(v)) return kClaimFailed;
      return v == Verdict::Unknown ? kUnknown : kOk;
    }

    if (*c_boundary) {
      auto entry = in_boundary.load();
      Expr e = entry.pg->from_tree(parse_expr(bexpr));
      Sign sg = bsign == "+" ? Sign::Plus : Sign::Minus;
      Expr b = entry.pg->boundary(e, blevel, sg);
      std::cout << entry.pg->expr_to_string(b) << "\n";
      return kOk;
    }

    if (*c_support) {
      auto entry = in_support.load();
      Expr e = entry.pg->from_tree(parse_expr(sexpr));
      auto cells = entry.pg->support(e);
      if (as_json) {
        json j = json::array();
        for (CellId c : cells) j.push_back(entry.pg->name(c));
        std::cout << j.dump(2) << "\n";
      } else {
        for (CellId c : cells) std::cout << entry.pg->name(c) << " ";
        std::cout << "\n";
      }
      return kOk;
    }

    if (*c_eval) {
      auto entry = in_eval.load();
      Expr e;
      if (!eexpr.empty()) {
        e = entry.pg->from_tree(parse_expr(eexpr));
      } else if (entry.has_universal) {
        e = entry.universal;
      } else {
        std::cerr << "error: no --expr given and the input has no universal\n";
        return kUsage;
      }
      LabeledDiagram d = eval(entry.pg, e);
      std::cout << diagram_text(d);
      return kOk;
    }

    if (*c_aut) {
      auto entry = in_aut.load();
      if (!entry.has_universal) {
        std::cerr << "error: autgroup needs a polyplex (universal = ... line)\n";
        return kUsage;
      }
      Polyplex p = polyplex_from_parts(*entry.pg, entry.universal);
      AutGroup g = automorphism_group(p);
      if (as_json) {
        json j{{"order", g.order()}, {"unresolved", g.unresolved.size()}};
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "order " << g.order() << "\n";
        for (const auto& w : g.elements) {
          if (w.is_identity_map()) continue;
          std::cout << "automorphism:";
          for (CellId c = 0; c < w.map.size(); ++c) {
            if (w.map[c] != c) std::cout << " " << p.pg().name(c) << "->" << p.pg().name(w.map[c]);
          }
          std::cout << "\n";
        }
        if (!g.unresolved.empty()) {
          std::cout << "unresolved candidates: " << g.unresolved.size() << "\n";
        }
      }
      return g.unresolved.empty() ? kOk : kUnknown;
    }

    if (*c_enum) {
      ClassSpec cls = ClassSpec::parse(cls_name);
      std::vector<Polyplex> items;
      std::size_t unknown = 0;
      if (what == "plexes") {
        items = enumerate_plexes(cls, budget);
      } else if (what == "polyplexes") {
        EnumerationResult r = enumerate_polyplexes(cls, budget);
        items = std::move(r.polyplexes);
        unknown = r.unknown_comparisons;
      } else {
        std::cerr << "error: --what must be plexes or polyplexes\n";
        return kUsage;
      }
      if (as_json) {
        json j{{"count", items.size()}, {"unknown_comparisons", unknown}, {"items", json::array()}};
        for (auto& p : items) j["items"].push_back(p.canonical_text());
        std::cout << j.dump(2) << "\n";
      } else {
        for (auto& p : items) std::cout << p.canonical_text() << "\n";
        std::cout << "count: " << items.size() << "\n";
        if (unknown) std::cout << "unknown comparisons: " << unknown << "\n";
      }
      return unknown == 0 ? kOk : kUnknown;
    }

    if (*c_cert) {
      CertReport rep = certify_good(ClassSpec::parse(cert_cls), cert_budget,
                                    serial ? CertifyMode::Serial : CertifyMode::Parallel);
      if (as_json) {
        json j{{"class", rep.class_name},
               {"verdict", rep.verdict == CertVerdict::CertifiedUpToBudget ? "certified-good-up-to-budget"
                           : rep.verdict == CertVerdict::Refuted           ? "refuted"
                                                                           : "inconclusive"},
               {"quarantined", rep.quarantined},
               {"condition_c_checked", rep.condition_c_checked},
               {"condition_c_ok", rep.condition_c_ok},
               {"counts", json::object()},
               {"witnesses", json::array()}};
        for (auto [d, n] : rep.counts_per_dim) j["counts"][std::to_string(d)] = n;
        for (auto& w : rep.witnesses) {
          json wj{{"polyplex", w.polyplex.canonical_text()}, {"map", json::array()}};
          for (CellId c = 0; c < w.automorphism.map.size(); ++c) {
            wj["map"].push_back(w.polyplex.pg().name(w.automorphism.map[c]));
          }
          j["witnesses"].push_back(wj);
        }
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << rep.to_string();
      }
      if (!expect_cert.empty()) {
        std::string word = rep.verdict == CertVerdict::CertifiedUpToBudget ? "certified"
                           : rep.verdict == CertVerdict::Refuted           ? "refuted"
                                                                           : "inconclusive";
        if (expect_cert != word) return kClaimFailed;
      }
      return rep.verdict == CertVerdict::Inconclusive ? kUnknown : kOk;
    }

    if (*c_example) {
      if (list_examples) {
        for (auto& n : example_names()) std::cout << n << "\n";
        return kOk;
      }
      if (example_name.empty()) {
        std::cerr << "error: --name or --list required\n";
        return kUsage;
      }
      ExampleReport rep = run_named_example(example_name);
      if (as_json) {
        json j{{"name", rep.name}, {"ok", rep.ok()}, {"claims", json::array()}};
        for (auto& [c, v] : rep.claims) j["claims"].push_back({{"claim", c}, {"holds", v}});
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << rep.to_string();
      }
      return rep.ok() ? kOk : kClaimFailed;
    }

    if (*c_check) {
      auto entry = in_check.load();
      Derivation d = parse_derivation_file(*entry.pg, deriv_file);
      DerivationCheck res = check_derivation(*entry.pg, d);
      if (as_json) {
        json j{{"ok", res.ok}, {"failed_step", res.failed_step}, {"message", res.message}};
        std::cout << j.dump(2) << "\n";
      } else if (res.ok) {
        std::cout << "ok (" << d.steps.size() << " steps)\n";
      } else {
        std::cout << "step " << res.failed_step << ": " << res.message << "\n";
      }
      return res.ok ? kOk : kClaimFailed;
    }

    if (*c_eh) {
      EhDemo demo = eckmann_hilton_demo();
      auto X = corpus::eh_polygraph();
      if (as_json) {
        json j{{"derivation_ok", demo.derivation_ok},
               {"derivation_steps", demo.derivation.steps.size()},
               {"group_order", demo.group.order()},
               {"rejected_by_positive", demo.rejected_by_positive}};
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << serialize_derivation(*X, demo.derivation);
        std::cout << "derivation: ok\n";
        std::cout << "automorphism group order: " << demo.group.order() << "\n";
        std::cout << "shape rejected by the positive classes: "
                  << (demo.rejected_by_positive ? "yes" : "no") << "\n";
      }
      return kOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
