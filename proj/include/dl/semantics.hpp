#ifndef DL_SEMANTICS_HPP
#define DL_SEMANTICS_HPP

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dl/ast.hpp"
#include "dl/usubst.hpp"

namespace dl {

// Total real-valued valuation of variables and differential symbols, with a
// finite explicit support and default 0. Zero entries are never stored, so
// map equality is state equality.
class State {
public:
  State() = default;

  Rational get(const VarId& v) const {
    auto it = vals_.find(v);
    return it == vals_.end() ? Rational(0) : it->second;
  }
  void set(const VarId& v, Rational r) {
    if (r.is_zero())
      vals_.erase(v);
    else
      vals_[v] = std::move(r);
  }
  State with(const VarId& v, Rational r) const {
    State s = *this;
    s.set(v, std::move(r));
    return s;
  }
  const std::map<VarId, Rational>& support() const { return vals_; }

  bool agrees_with(const State& o, const VarSet& on) const;

  friend bool operator==(const State& a, const State& b) { return a.vals_ == b.vals_; }
  friend bool operator<(const State& a, const State& b) { return a.vals_ < b.vals_; }

  std::string to_string() const;
  // "x=2,x'=3,y=1/2"; empty string is the zero state
  static State parse(const std::string& text);

private:
  std::map<VarId, Rational> vals_;
};

struct EvalError : std::runtime_error {
  EvalError(std::string k, const std::string& msg) : std::runtime_error(msg), kind(std::move(k)) {}
  std::string kind;  // undefined-symbol, non-polynomial, predicational-unsupported, ...
};

// Symbol meanings as closed-form bodies: functions and predicates are
// dot-abstracted terms/formulas, program constants are concrete programs.
// A definition carrying a closure state evaluates its body in that captured
// state (used by adjoint interpretations); otherwise in the current state.
class Interpretation {
public:
  struct FuncDef {
    int arity = 0;
    Term body;
    std::optional<State> closure;
  };
  struct PredDef {
    int arity = 0;
    Formula body;
    std::optional<State> closure;
  };

  void define_func(const std::string& name, int arity, Term body,
                   std::optional<State> closure = std::nullopt) {
    funcs_[{name, arity}] = FuncDef{arity, std::move(body), std::move(closure)};
  }
  void define_pred(const std::string& name, int arity, Formula body,
                   std::optional<State> closure = std::nullopt) {
    preds_[{name, arity}] = PredDef{arity, std::move(body), std::move(closure)};
  }
  void define_prog(const std::string& name, Program body) { progs_[name] = std::move(body); }

  const FuncDef* func(const std::string& name, int arity) const;
  const PredDef* pred(const std::string& name, int arity) const;
  const Program* prog(const std::string& name) const;

  // Definitions must not refer to one another cyclically.
  std::optional<std::string> validate() const;

private:
  std::map<std::pair<std::string, int>, FuncDef> funcs_;
  std::map<std::pair<std::string, int>, PredDef> preds_;
  std::map<std::string, Program> progs_;
};

enum class Truth { False, Unknown, True };

struct EvalOpts {
  int loop_bound = 8;
  std::vector<Rational> quantifier_domain;  // sample points for ∀/∃
  Rational ode_h = Rational::parse("1/100");
  Rational ode_tmax = Rational(1);
};

// Exact rational term evaluation; differentials evaluate by
// inlining interpreted definitions and taking symbolic spatial partials.
Rational eval_term(const Term& t, const Interpretation& I, const State& nu);

// Symbolic partial derivative by base variable x; input built from variables,
// differential symbols, numbers, + and · (differential symbols count as
// independent coordinates).
Term partial_derivative(const Term& t, const VarId& x);

// Three-valued formula evaluation. Quantifiers sample quantifier_domain
// and never certify; Box/Diamond enumerate bounded runs.
Truth eval_formula(const Formula& f, const Interpretation& I, const State& nu,
                   const EvalOpts& opts);

struct RunResult {
  std::set<State> states;
  bool complete = true;  // false when a bound was hit or a flow was sampled
};

// Bounded transition-relation enumeration. ODEs contribute the RK4 sample
// states of a single trajectory (always flagged incomplete).
RunResult run_program(const Program& p, const Interpretation& I, const State& nu,
                      const EvalOpts& opts);

struct Trajectory {
  Rational h;
  std::vector<std::pair<Rational, State>> samples;  // strictly increasing times from 0
};

// Fixed-step RK4 flow of an ODE program from nu. Differential symbols of the
// evolved variables are set at every sample (including time 0) by exact
// evaluation of the right-hand sides at that sample. Stops early when the
// evolution domain fails at a sample.
Trajectory integrate_ode(const Program& ode, const Interpretation& I, const State& nu,
                         const Rational& h, const Rational& t_max);

// Adjoint interpretation to sigma for (I, nu): replaced functions
// and predicates evaluate sigma's bodies in the captured state nu (arguments
// through dots); replaced program constants run sigma's programs in the
// runtime state. Predicational replacements are unsupported.
Interpretation adjoint(const USubst& sigma, const Interpretation& I, const State& nu);

// Max over interior samples of the guarded-relative gap between the central
// finite difference of eval(eta) along the flow and eval((eta)') at the
// sample: |cd - d| / max(1, |d|).
double check_differential_lemma(const Term& eta, const Program& ode,
                                const Interpretation& I, const State& nu,
                                const Rational& h, const Rational& t_max);

}  // namespace dl

#endif
