// dlk: command-line front end for the dL proof kernel: parsing, static
// semantics, uniform substitution, axiom lookup, proof checking, evaluation,
// and ODE simulation. Results go to stdout, diagnostics to stderr.
// Exit codes: 0 success, 1 logical failure (clash, check error, false
// evaluation, refuted arithmetic), 2 usage or parse error.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dl/axioms.hpp"
#include "dl/kernel.hpp"
#include "dl/parse.hpp"
#include "dl/print.hpp"
#include "dl/script.hpp"
#include "dl/semantics.hpp"
#include "dl/statics.hpp"
#include "dl/usubst.hpp"

using nlohmann::json;
using namespace dl;

namespace {

json varset_json(const VarSet& s) {
  auto names = [](const std::set<VarId>& m) {
    json a = json::array();
    for (const auto& v : m) a.push_back(v.to_string());
    return a;
  };
  if (s.cofinite()) return json{{"allBut", names(s.members())}};
  return names(s.members());
}

json signature_json(const Signature& sig) {
  json a = json::array();
  for (const auto& s : sig) {
    const char* sort = s.sort == SymbolSort::Function      ? "function"
                       : s.sort == SymbolSort::Predicate   ? "predicate"
                       : s.sort == SymbolSort::Predicational ? "predicational"
                                                             : "program";
    json e = {{"name", s.name}, {"sort", sort}};
    if (s.sort == SymbolSort::Function || s.sort == SymbolSort::Predicate)
      e["arity"] = s.all_vars() ? json("allvars") : json(s.arity);
    a.push_back(e);
  }
  return a;
}

json clash_json(const SubstError& e) {
  json taboo = json::array();
  for (const auto& v : e.taboo) taboo.push_back(v.to_string());
  return json{{"schema", "1"},
              {"clash", {{"kind", e.kind == SubstError::Kind::Clash ? "clash" : "sort-mismatch"},
                         {"check", e.check},
                         {"taboo", taboo},
                         {"path", e.path}}}};
}

json provable_json(const Provable& p) {
  json obl = json::array();
  for (const auto& o : p.obligations) obl.push_back(pretty(o));
  return json{{"schema", "1"}, {"conclusion", pretty(p.conclusion)}, {"obligations", obl}};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Parsed {
  std::string kind;
  Term term;
  Formula formula;
  Program program;
};

Parsed parse_kind(const std::string& text, const std::string& kind) {
  Parsed out;
  out.kind = kind;
  if (kind == "term")
    out.term = parse_term(text);
  else if (kind == "program")
    out.program = parse_program(text);
  else
    out.formula = parse_formula(text);
  return out;
}

std::vector<Rational> parse_domain(const std::string& text) {
  std::vector<Rational> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ','))
    if (!item.empty()) out.push_back(Rational::parse(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dlk: differential dynamic logic proof kernel"};
  app.require_subcommand(1);
  bool as_json = false;

  std::string expr, kind = "formula";
  auto* cparse = app.add_subcommand("parse", "parse and pretty-print an expression");
  cparse->add_flag("--json", as_json, "machine-readable JSON output");
  cparse->add_option("expr", expr)->required();
  cparse->add_option("--kind", kind)->check(CLI::IsMember({"term", "formula", "program"}));

  auto* cstatic = app.add_subcommand("static", "free/bound/must-bound variables and signature");
  cstatic->add_flag("--json", as_json, "machine-readable JSON output");
  cstatic->add_option("expr", expr)->required();
  cstatic->add_option("--kind", kind)->check(CLI::IsMember({"term", "formula", "program"}));

  std::string subst_text, on_text;
  auto* csubst = app.add_subcommand("subst", "apply a uniform substitution");
  csubst->add_flag("--json", as_json, "machine-readable JSON output");
  csubst->add_option("--subst", subst_text, "pair list, e.g. ((fn f 0) \"x^2\")")->required();
  csubst->add_option("--on", on_text)->required();
  csubst->add_option("--kind", kind)->check(CLI::IsMember({"term", "formula", "program"}));

  std::string axiom_name;
  bool golden = false;
  auto* caxioms = app.add_subcommand("axioms", "list registry axioms and rules");
  caxioms->add_flag("--json", as_json, "machine-readable JSON output");
  caxioms->add_option("name", axiom_name, "look up one entry");
  caxioms->add_flag("--golden", golden, "print the canonical golden listing");

  std::string script_path, arith = "assume", external_cmd;
  std::uint64_t seed = 0;
  auto* ccheck = app.add_subcommand("check", "check a .dlp proof script");
  ccheck->add_flag("--json", as_json, "machine-readable JSON output");
  ccheck->add_option("file", script_path)->required();
  ccheck->add_option("--arith", arith)->check(CLI::IsMember({"assume", "sample", "external"}));
  ccheck->add_option("--cmd", external_cmd, "external arith command (or $DL_ARITH_CMD)");
  ccheck->add_option("--seed", seed);

  std::string formula_text, state_text, domain_text;
  int loop_bound = 8;
  std::string h_text = "1/100", tmax_text = "1";
  auto* ceval = app.add_subcommand("eval", "evaluate a formula in a state");
  ceval->add_flag("--json", as_json, "machine-readable JSON output");
  ceval->add_option("--formula", formula_text)->required();
  ceval->add_option("--state", state_text, "e.g. x=2,x'=3,y=0");
  ceval->add_option("--loop-bound", loop_bound);
  ceval->add_option("--domain", domain_text, "quantifier sample points, e.g. -1,0,1");
  ceval->add_option("--step", h_text, "ODE step size");
  ceval->add_option("--tmax", tmax_text, "ODE time horizon");

  std::string ode_text, csv_path;
  auto* csim = app.add_subcommand("simulate", "integrate an ODE and export samples");
  csim->add_option("--ode", ode_text)->required();
  csim->add_option("--state", state_text);
  csim->add_option("--step", h_text);
  csim->add_option("--tmax", tmax_text);
  csim->add_option("--csv", csv_path, "write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (cparse->parsed()) {
      Parsed p = parse_kind(expr, kind);
      std::string out = kind == "term"      ? pretty(p.term)
                        : kind == "program" ? pretty(p.program)
                                            : pretty(p.formula);
      if (as_json)
        std::cout << json{{"schema", "1"}, {"kind", kind}, {"pretty", out}} << "\n";
      else
        std::cout << out << "\n";
      return 0;
    }

    if (cstatic->parsed()) {
      Parsed p = parse_kind(expr, kind);
      json out{{"schema", "1"}};
      if (kind == "term") {
        out["fv"] = varset_json(fv_term(p.term));
        out["signature"] = signature_json(signature(p.term));
      } else if (kind == "program") {
        out["fv"] = varset_json(fv_program(p.program));
        out["bv"] = varset_json(bv_program(p.program));
        out["mbv"] = varset_json(mbv_program(p.program));
        out["signature"] = signature_json(signature(p.program));
      } else {
        out["fv"] = varset_json(fv_formula(p.formula));
        out["bv"] = varset_json(bv_formula(p.formula));
        out["signature"] = signature_json(signature(p.formula));
      }
      std::cout << out << "\n";
      return 0;
    }

    if (csubst->parsed()) {
      USubst sigma = parse_subst_text(subst_text);
      Parsed p = parse_kind(on_text, kind);
      SubstError err;
      bool clashed = false;
      std::string out;
      if (kind == "term") {
        auto r = dl::apply(sigma, p.term);
        if (const auto* e = std::get_if<SubstError>(&r)) { err = *e; clashed = true; }
        else out = pretty(std::get<Term>(r));
      } else if (kind == "program") {
        auto r = dl::apply(sigma, p.program);
        if (const auto* e = std::get_if<SubstError>(&r)) { err = *e; clashed = true; }
        else out = pretty(std::get<Program>(r));
      } else {
        auto r = dl::apply(sigma, p.formula);
        if (const auto* e = std::get_if<SubstError>(&r)) { err = *e; clashed = true; }
        else out = pretty(std::get<Formula>(r));
      }
      if (clashed) {
        if (as_json)
          std::cout << clash_json(err) << "\n";
        std::cerr << err.to_string() << "\n";
        return 1;
      }
      if (as_json)
        std::cout << json{{"schema", "1"}, {"result", out}} << "\n";
      else
        std::cout << out << "\n";
      return 0;
    }

    if (caxioms->parsed()) {
      const auto& base = AxiomBase::instance();
      if (golden) {
        std::cout << base.render_golden();
        return 0;
      }
      if (!axiom_name.empty()) {
        if (const AxiomEntry* e = base.axiom(axiom_name)) {
          if (as_json)
            std::cout << json{{"schema", "1"},
                              {"name", e->name},
                              {"formula", e->canonical},
                              {"kind", e->kind == EntryKind::Axiom ? "axiom" : "derived-axiom"}}
                      << "\n";
          else
            std::cout << e->name << "  " << e->canonical << "\n";
          return 0;
        }
        if (const RuleEntry* r = base.rule(axiom_name)) {
          json prem = json::array();
          for (const auto& p : r->premises) prem.push_back(pretty(p));
          if (as_json)
            std::cout << json{{"schema", "1"},
                              {"name", r->name},
                              {"premises", prem},
                              {"conclusion", pretty(r->conclusion)},
                              {"kind", r->kind == EntryKind::AxiomaticRule ? "axiomatic-rule"
                                                                           : "derived-rule"}}
                      << "\n";
          else {
            std::cout << r->name << "  rule:";
            for (const auto& p : r->premises) std::cout << " " << pretty(p) << " ;";
            std::cout << " |- " << pretty(r->conclusion) << "\n";
          }
          return 0;
        }
        std::cerr << "not found: " << axiom_name << "\n";
        return 1;
      }
      if (as_json) {
        json arr = json::array();
        for (const auto& e : base.axioms())
          arr.push_back({{"name", e.name},
                         {"formula", e.canonical},
                         {"kind", e.kind == EntryKind::Axiom ? "axiom" : "derived-axiom"}});
        std::cout << json{{"schema", "1"}, {"axioms", arr}} << "\n";
      } else {
        for (const auto& e : base.axioms()) std::cout << e.name << "\t" << e.canonical << "\n";
        for (const auto& r : base.rules()) {
          std::cout << r.name << "\trule:";
          for (const auto& p : r.premises) std::cout << " " << pretty(p) << " ;";
          std::cout << " |- " << pretty(r.conclusion) << "\n";
        }
      }
      return 0;
    }

    if (ccheck->parsed()) {
      CheckOptions opts;
      opts.seed = seed;
      if (arith == "sample") opts.arith_mode = ArithMode::Sample;
      if (arith == "external") {
        opts.arith_mode = ArithMode::External;
        opts.external_cmd = external_cmd;
        if (opts.external_cmd.empty())
          if (const char* env = std::getenv("DL_ARITH_CMD")) opts.external_cmd = env;
        if (opts.external_cmd.empty()) {
          std::cerr << "external arith mode needs --cmd or $DL_ARITH_CMD\n";
          return 2;
        }
      }
      Provable p = run_script(slurp(script_path), opts);
      if (as_json) {
        std::cout << provable_json(p) << "\n";
      } else {
        std::cout << pretty(p.conclusion) << "\n";
        for (const auto& o : p.obligations) std::cout << "obligation: " << pretty(o) << "\n";
      }
      return 0;
    }

    if (ceval->parsed()) {
      Formula f = parse_formula(formula_text);
      State nu = State::parse(state_text);
      EvalOpts opts;
      opts.loop_bound = loop_bound;
      opts.quantifier_domain = parse_domain(domain_text);
      opts.ode_h = Rational::parse(h_text);
      opts.ode_tmax = Rational::parse(tmax_text);
      Interpretation I;
      Truth v = eval_formula(f, I, nu, opts);
      const char* verdict = v == Truth::True ? "true" : v == Truth::False ? "false" : "unknown";
      if (as_json)
        std::cout << json{{"schema", "1"}, {"verdict", verdict}} << "\n";
      else
        std::cout << verdict << "\n";
      return v == Truth::False ? 1 : 0;
    }

    if (csim->parsed()) {
      Program ode = parse_program(ode_text);
      State nu = State::parse(state_text);
      Interpretation I;
      Trajectory tr = integrate_ode(ode, I, nu, Rational::parse(h_text),
                                    Rational::parse(tmax_text));
      const auto* o = std::get_if<PODE>(&ode->v);
      std::ostringstream csv;
      csv << "time";
      for (const auto& [v, rhs] : o->eqs) csv << "," << v.to_string() << "," << v.diff().to_string();
      csv << "\n";
      for (const auto& [t, s] : tr.samples) {
        csv << t.to_double();
        for (const auto& [v, rhs] : o->eqs)
          csv << "," << s.get(v).to_double() << "," << s.get(v.diff()).to_double();
        csv << "\n";
      }
      if (csv_path.empty()) {
        std::cout << csv.str();
      } else {
        std::ofstream out(csv_path);
        out << csv.str();
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const CheckError& e) {
    std::cerr << "check error: " << e.what() << "\n";
    return 1;
  } catch (const EvalError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
