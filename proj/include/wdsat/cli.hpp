#pragma once

// Command-line front end. `run` takes the streams explicitly so the tests can
// drive it in-process. Exit codes: 0 done, 1 usage error or failing
// selftest, 2 parse error, 3 node budget exhausted.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "checks.hpp"
#include "engine.hpp"
#include "kripke.hpp"
#include "syntax.hpp"

namespace wdsat::cli {

enum Exit : int { ok = 0, usage = 1, parse_error = 2, budget = 3 };

inline nlohmann::json stats_json(const SatStats& s) {
  return {{"max_stack_depth", s.max_stack_depth},
          {"max_window_chain", s.max_window_chain},
          {"ccs_enumerated", s.ccs_enumerated},
          {"nodes_visited", s.nodes_visited},
          {"windows_enumerated", s.windows_enumerated},
          {"context_loops", s.context_loops},
          {"fact1_checks", s.fact1_checks},
          {"fact1_violations", s.fact1_violations}};
}

inline std::string stats_text(const SatStats& s) {
  std::ostringstream o;
  o << "max_stack_depth=" << s.max_stack_depth << " max_window_chain=" << s.max_window_chain
    << " ccs_enumerated=" << s.ccs_enumerated << " nodes_visited=" << s.nodes_visited;
  return o.str();
}

inline std::string model_text(const KripkeModel& m) {
  std::ostringstream o;
  o << "worlds";
  for (WorldId w : m.worlds) o << ' ' << w;
  o << "\nroot " << m.root << '\n';
  for (Modality mod : {Modality::a, Modality::b}) {
    o << 'r' << modality_char(mod);
    for (auto [s, t] : m.rel(mod)) o << ' ' << s << "->" << t;
    o << '\n';
  }
  for (const auto& [atom, ws] : m.val) {
    o << "val " << atom;
    for (WorldId w : ws) o << ' ' << w;
    o << '\n';
  }
  return o.str();
}

/// 2*|f|^4, the bound on the recorded stack depth.
inline double depth_bound(Formula f) {
  const double n = static_cast<double>(f.size());
  return 2.0 * n * n * n * n;
}

struct Invocation {
  std::string command;
  std::string logic_name;
  bool de = false, four_a = false, four_b = false;
  std::string formula;
  std::string file;
  bool json = true;
  bool text = false;
  std::size_t fuel = 0;
  bool loop_detect = false;
  std::uint64_t budget_nodes = EngineOptions{}.budget_nodes;
  bool literal_loop_rule = false;
  // selftest
  std::size_t corpus_size = 5;
  std::uint64_t instances = 2'000;
  std::uint64_t seed = 1;

  LogicId logic() const {
    if (!logic_name.empty()) return LogicId::parse(logic_name);
    return LogicId{de, four_a, four_b};
  }

  EngineOptions engine() const {
    EngineOptions o;
    if (fuel > 0) {
      o.termination = EngineOptions::Termination::fuel;
      o.fuel = fuel;
    }
    o.budget_nodes = budget_nodes;
    o.literal_loop_rule = literal_loop_rule;
    return o;
  }
};

namespace detail {

inline void add_logic_options(CLI::App* sub, Invocation& inv) {
  auto* name = sub->add_option("--logic", inv.logic_name, "kab, kab4a, kab4a4b, kde, kde4a, kde4a4b")
                   ->check(CLI::IsMember({"kab", "kab4a", "kab4a4b", "kde", "kde4a", "kde4a4b", "kde4b"}));
  sub->add_flag("--de", inv.de, "weak density")->excludes(name);
  sub->add_flag("--4a", inv.four_a, "R_a transitive")->excludes(name);
  sub->add_flag("--4b", inv.four_b, "R_b transitive")->excludes(name);
}

inline void add_engine_options(CLI::App* sub, Invocation& inv) {
  auto* fuel = sub->add_option("--fuel", inv.fuel, "follow window chains for N steps")
                   ->check(CLI::PositiveNumber);
  sub->add_flag("--loop-detect", inv.loop_detect, "stop window chains at the first repeat (default)")
      ->excludes(fuel);
  sub->add_option("--budget-nodes", inv.budget_nodes, "node budget per query");
  sub->add_flag("--literal-loop-rule", inv.literal_loop_rule,
                "diagnostic: a repeated context refutes the branch");
}

inline void add_output_options(CLI::App* sub, Invocation& inv) {
  auto* text = sub->add_flag("--text", inv.text, "plain text output");
  sub->add_flag("--json", inv.json, "JSON output (default)")->excludes(text);
}

inline std::string read_all(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// The single formula of a sat/valid/model invocation.
inline std::string formula_source(const Invocation& inv, std::istream& in) {
  if (!inv.formula.empty()) return inv.formula;
  if (!inv.file.empty()) {
    std::ifstream f(inv.file);
    if (!f) throw CLI::ValidationError("cannot read " + inv.file);
    return read_all(f);
  }
  return read_all(in);
}

struct BenchLine {
  std::size_t line;
  std::string text;
};

inline std::vector<BenchLine> formula_lines(const std::string& content) {
  std::vector<BenchLine> out;
  std::istringstream s(content);
  std::string line;
  for (std::size_t n = 1; std::getline(s, line); ++n) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back({n, line});
  }
  return out;
}

inline int decide_command(const Invocation& inv, std::istream& in, std::ostream& out) {
  const LogicId logic = inv.logic();
  const Formula f = parse(formula_source(inv, in));
  const bool validity = inv.command == "valid";
  const Formula query = validity ? Formula::neg(f) : f;
  const SatResult r = decide(query, logic, inv.engine());

  const char* verdict = validity ? (r.satisfiable ? "invalid" : "valid") : (r.satisfiable ? "sat" : "unsat");
  if (inv.command == "model") {
    if (inv.text) out << (r.model ? model_text(*r.model) : std::string("unsat\n"));
    else out << (r.model ? to_json(*r.model) : nlohmann::json{{"result", "unsat"}}).dump(2) << '\n';
    return ok;
  }
  if (inv.text) {
    out << verdict << '\n' << stats_text(r.stats) << '\n';
    if (r.model) out << model_text(*r.model);
    return ok;
  }
  nlohmann::json doc{{"result", verdict},
                     {"logic", logic.name()},
                     {"formula", to_string(f)},
                     {"stats", stats_json(r.stats)}};
  if (r.model) {
    doc[validity ? "countermodel" : "model"] = to_json(*r.model);
    doc["certified"] = r.certified;
  }
  out << doc.dump(2) << '\n';
  return ok;
}

inline int bench_command(const Invocation& inv, std::istream& in, std::ostream& out,
                         std::ostream& err) {
  const LogicId logic = inv.logic();
  std::string content;
  if (!inv.file.empty()) {
    std::ifstream f(inv.file);
    if (!f) throw CLI::ValidationError("cannot read " + inv.file);
    content = read_all(f);
  } else if (!inv.formula.empty()) {
    content = inv.formula;
  } else {
    content = read_all(in);
  }
  std::vector<std::pair<BenchLine, Formula>> items;
  for (const BenchLine& l : formula_lines(content)) {
    try {
      items.emplace_back(l, parse(l.text));
    } catch (const ParseError& e) {
      err << "parse error: line " << l.line << ": " << e.what() << '\n';
      return parse_error;
    }
  }

  nlohmann::json rows = nlohmann::json::array();
  SatStats total;
  std::size_t sat = 0, unsat = 0, exhausted = 0;
  double worst = 0.0;
  for (const auto& [line, f] : items) {
    nlohmann::json row{{"line", line.line}, {"formula", to_string(f)}};
    try {
      SatResult r = decide(f, logic, inv.engine());
      (r.satisfiable ? sat : unsat)++;
      total.merge(r.stats);
      const double ratio = static_cast<double>(r.stats.max_stack_depth) / depth_bound(f);
      worst = std::max(worst, ratio);
      row["result"] = r.satisfiable ? "sat" : "unsat";
      if (r.satisfiable) row["certified"] = r.certified;
      row["stats"] = stats_json(r.stats);
      row["depth_bound"] = depth_bound(f);
      row["depth_ratio"] = ratio;
    } catch (const BudgetExhausted&) {
      ++exhausted;
      row["result"] = "budget_exhausted";
    }
    if (inv.text) {
      out << line.line << ' ' << row["result"].get<std::string>() << ' ' << row["formula"].get<std::string>();
      if (row.contains("stats")) out << "  depth " << row["stats"]["max_stack_depth"] << " / " << depth_bound(f);
      out << '\n';
    }
    rows.push_back(std::move(row));
  }
  nlohmann::json summary{{"formulas", items.size()},
                         {"sat", sat},
                         {"unsat", unsat},
                         {"budget_exhausted", exhausted},
                         {"max_stack_depth", total.max_stack_depth},
                         {"max_window_chain", total.max_window_chain},
                         {"nodes_visited", total.nodes_visited},
                         {"max_depth_ratio", worst}};
  if (inv.text) {
    out << "formulas " << items.size() << " sat " << sat << " unsat " << unsat << " budget_exhausted "
        << exhausted << " max_depth_ratio " << worst << '\n';
  } else {
    out << nlohmann::json{{"logic", logic.name()}, {"results", rows}, {"summary", summary}}.dump(2)
        << '\n';
  }
  return exhausted ? budget : ok;
}

inline int selftest_command(const Invocation& inv, std::ostream& out) {
  std::vector<PropertyReport> reports = oracle_agreement_suite(inv.corpus_size, LogicId::all(), inv.engine());
  Prop1Options p;
  p.seed = inv.seed;
  p.instances = inv.instances;
  for (auto& r : prop1_suite(p)) reports.push_back(std::move(r));
  for (auto& r : ccs_stream_suite(inv.seed, inv.instances)) reports.push_back(std::move(r));
  ContinuationOptions c;
  c.seed = inv.seed;
  c.triples = inv.instances;
  for (auto& r : continuation_suite({logics::kab, logics::kab4a, logics::kde, logics::kde4a}, c))
    reports.push_back(std::move(r));

  bool all_ok = true;
  nlohmann::json doc = nlohmann::json::array();
  for (const PropertyReport& r : reports) {
    if (!r.informational) all_ok &= r.ok();
    const char* status = r.ok() ? "pass" : (r.informational ? "info" : "FAIL");
    if (inv.text) {
      out << status << "  " << r.name << "  (" << r.failures << "/" << r.instances << ")\n";
      if (!r.ok()) out << "      e.g. " << r.first_failure << '\n';
    } else {
      nlohmann::json row{{"property", r.name}, {"status", status}, {"instances", r.instances},
                         {"failures", r.failures}};
      if (!r.ok()) row["example"] = r.first_failure;
      doc.push_back(std::move(row));
    }
  }
  if (!inv.text) out << nlohmann::json{{"passed", all_ok}, {"properties", doc}}.dump(2) << '\n';
  return all_ok ? ok : usage;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
               std::istream& in) {
  Invocation inv;
  CLI::App app{"Decision procedures for bimodal logics with weak density and transitivity", "wdsat"};
  app.require_subcommand(1);

  struct Spec {
    const char* name;
    const char* help;
  };
  for (Spec s : {Spec{"sat", "decide satisfiability"}, Spec{"valid", "decide validity"},
                 Spec{"model", "print a model of a satisfiable formula"},
                 Spec{"bench", "decide every formula of a file, one per line"},
                 Spec{"selftest", "run the oracle corpus and the property suites"}}) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->callback([&inv, name = std::string(s.name)] { inv.command = name; });
    detail::add_logic_options(sub, inv);
    detail::add_engine_options(sub, inv);
    detail::add_output_options(sub, inv);
    if (std::string(s.name) == "selftest") {
      sub->add_option("--corpus-size", inv.corpus_size, "largest corpus formula size")
          ->check(CLI::Range(1, 7));
      sub->add_option("--instances", inv.instances, "random instances per property");
      sub->add_option("--seed", inv.seed, "random seed");
      continue;
    }
    auto* formula = sub->add_option("formula", inv.formula, "formula text (default: read stdin)");
    sub->add_option("-f,--file", inv.file, "read from a file")->excludes(formula);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (!inv.logic().supported()) {
      err << "error: unsupported logic " << inv.logic().name() << '\n';
      return usage;
    }
    if (inv.logic().experimental()) err << "note: kde4b is experimental\n";
    if (inv.command == "bench") return detail::bench_command(inv, in, out, err);
    if (inv.command == "selftest") return detail::selftest_command(inv, out);
    return detail::decide_command(inv, in, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return parse_error;
  } catch (const BudgetExhausted& e) {
    if (inv.text) out << "budget_exhausted\n";
    else out << nlohmann::json{{"result", "budget_exhausted"}, {"error", e.what()}}.dump(2) << '\n';
    return budget;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               std::istream& in) {
  std::vector<const char*> argv{"wdsat"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err, in);
}

}  // namespace wdsat::cli
