#include "dl/semantics.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "dl/print.hpp"
#include "dl/statics.hpp"

namespace dl {

bool State::agrees_with(const State& o, const VarSet& on) const {
  for (const auto& [v, r] : vals_)
    if (on.contains(v) && o.get(v) != r) return false;
  for (const auto& [v, r] : o.vals_)
    if (on.contains(v) && get(v) != r) return false;
  return true;
}

std::string State::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, r] : vals_) {
    if (!first) os << ",";
    os << v.to_string() << "=" << r.to_string();
    first = false;
  }
  return os.str();
}

State State::parse(const std::string& text) {
  State s;
  size_t i = 0;
  auto skip = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
  skip();
  while (i < text.size()) {
    size_t j = i;
    while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
    if (j == i) throw std::invalid_argument("state literal: expected variable at '" + text.substr(i) + "'");
    std::string name = text.substr(i, j - i);
    i = j;
    VarId v = base_var(name);
    if (i < text.size() && text[i] == '\'') {
      v = diff_var(name);
      ++i;
    }
    skip();
    if (i >= text.size() || text[i] != '=')
      throw std::invalid_argument("state literal: expected '=' after " + v.to_string());
    ++i;
    skip();
    j = i;
    while (j < text.size() && text[j] != ',') ++j;
    std::string val = text.substr(i, j - i);
    while (!val.empty() && std::isspace(static_cast<unsigned char>(val.back()))) val.pop_back();
    s.set(v, Rational::parse(val));
    i = j;
    if (i < text.size() && text[i] == ',') ++i;
    skip();
  }
  return s;
}

const Interpretation::FuncDef* Interpretation::func(const std::string& name, int arity) const {
  auto it = funcs_.find({name, arity});
  return it == funcs_.end() ? nullptr : &it->second;
}
const Interpretation::PredDef* Interpretation::pred(const std::string& name, int arity) const {
  auto it = preds_.find({name, arity});
  return it == preds_.end() ? nullptr : &it->second;
}
const Program* Interpretation::prog(const std::string& name) const {
  auto it = progs_.find(name);
  return it == progs_.end() ? nullptr : &it->second;
}

std::optional<std::string> Interpretation::validate() const {
  // definitions must form a DAG through the symbols they mention
  std::map<std::string, int> state;  // 0 fresh, 1 visiting, 2 done
  std::function<std::optional<std::string>(const SymbolId&)> visit;
  auto visit_sig = [&](const Signature& sg) -> std::optional<std::string> {
    for (const auto& s : sg)
      if (auto err = visit(s)) return err;
    return std::nullopt;
  };
  visit = [&](const SymbolId& s) -> std::optional<std::string> {
    std::string key = s.name + "#" + std::to_string(static_cast<int>(s.sort)) + "#" +
                      std::to_string(s.arity);
    int& st = state[key];
    if (st == 1) return "cyclic definition through " + s.name;
    if (st == 2) return std::nullopt;
    st = 1;
    std::optional<std::string> err;
    if (s.sort == SymbolSort::Function) {
      if (const auto* d = func(s.name, s.arity)) err = visit_sig(signature(d->body));
    } else if (s.sort == SymbolSort::Predicate) {
      if (const auto* d = pred(s.name, s.arity)) err = visit_sig(signature(d->body));
    } else if (s.sort == SymbolSort::ProgramConst) {
      if (const auto* d = prog(s.name)) err = visit_sig(signature(*d));
    }
    st = 2;
    return err;
  };
  for (const auto& [k, d] : funcs_)
    if (auto e = visit(SymbolId{k.first, SymbolSort::Function, k.second})) return e;
  for (const auto& [k, d] : preds_)
    if (auto e = visit(SymbolId{k.first, SymbolSort::Predicate, k.second})) return e;
  for (const auto& [k, d] : progs_)
    if (auto e = visit(SymbolId{k, SymbolSort::ProgramConst, 0})) return e;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Term evaluation

namespace {

struct Env {
  const Interpretation* I;
  const State* nu;
  const std::vector<Rational>* dots = nullptr;  // values for .1, .2, ...
  int depth = 0;
};

Rational eval_t(const Term& t, const Env& env);

Term simp_plus(const Term& a, const Term& b) {
  const auto* na = std::get_if<TNumber>(&a->v);
  const auto* nb = std::get_if<TNumber>(&b->v);
  if (na && na->value.is_zero()) return b;
  if (nb && nb->value.is_zero()) return a;
  return mk_plus(a, b);
}

Term simp_times(const Term& a, const Term& b) {
  const auto* na = std::get_if<TNumber>(&a->v);
  const auto* nb = std::get_if<TNumber>(&b->v);
  if (na && na->value.is_zero()) return mk_num(0);
  if (nb && nb->value.is_zero()) return mk_num(0);
  if (na && na->value == Rational(1)) return b;
  if (nb && nb->value == Rational(1)) return a;
  return mk_times(a, b);
}

void collect_base_vars(const Term& t, std::set<VarId>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TVar>) {
          if (!x.var.is_diff()) out.insert(x.var);
        } else if constexpr (std::is_same_v<T, TFuncApp>) {
          for (const auto& a : x.args) collect_base_vars(a, out);
        } else if constexpr (std::is_same_v<T, TPlus> || std::is_same_v<T, TTimes>) {
          collect_base_vars(x.lhs, out);
          collect_base_vars(x.rhs, out);
        } else if constexpr (std::is_same_v<T, TDifferential>) {
          collect_base_vars(x.arg, out);
        }
      },
      t->v);
}

// Differential of an already-expanded polynomial: Σ_x x'·∂π/∂x over the base
// variables occurring in π: the sum of spatial partials weighted by the
// differential symbols.
Term lower_differential(const Term& poly) {
  std::set<VarId> vars;
  collect_base_vars(poly, vars);
  Term sum = mk_num(0);
  for (const auto& x : vars)
    sum = simp_plus(sum, simp_times(mk_var(x.diff()), partial_derivative(poly, x)));
  return sum;
}

// Inline interpreted definitions and lower differentials, producing a
// polynomial over variables, differential symbols and numbers. Variables in
// closure-carrying definition bodies freeze to their captured values (they
// are constants with respect to the surrounding differential); the dots of a
// definition body are plugged with the expanded argument polynomials.
Term to_poly(const Term& t, const Interpretation& I, const std::optional<State>& closure,
             const std::vector<Term>& dot_polys, int depth) {
  if (depth > 64) throw EvalError("undefined-symbol", "definition expansion too deep");
  return std::visit(
      [&](const auto& x) -> Term {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TVar>) {
          if (closure) return mk_num(closure->get(x.var));
          return t;
        } else if constexpr (std::is_same_v<T, TNumber>) {
          return t;
        } else if constexpr (std::is_same_v<T, TDot>) {
          if (x.index < 1 || x.index > static_cast<int>(dot_polys.size()))
            throw EvalError("undefined-symbol", "dangling dot");
          return dot_polys[x.index - 1];
        } else if constexpr (std::is_same_v<T, TFuncApp>) {
          if (is_abs(x.sym))
            throw EvalError("non-polynomial", "absolute value under a differential");
          const auto* def = I.func(x.sym.name, x.sym.all_vars() ? kAllVars : x.sym.arity);
          if (!def)
            throw EvalError("undefined-symbol",
                            "uninterpreted function " + x.sym.name + " under a differential");
          if (x.sym.all_vars()) return to_poly(def->body, I, def->closure, {}, depth + 1);
          std::vector<Term> args;
          args.reserve(x.args.size());
          for (const auto& a : x.args) args.push_back(to_poly(a, I, closure, dot_polys, depth));
          return to_poly(def->body, I, def->closure, args, depth + 1);
        } else if constexpr (std::is_same_v<T, TPlus>) {
          return simp_plus(to_poly(x.lhs, I, closure, dot_polys, depth),
                           to_poly(x.rhs, I, closure, dot_polys, depth));
        } else if constexpr (std::is_same_v<T, TTimes>) {
          return simp_times(to_poly(x.lhs, I, closure, dot_polys, depth),
                            to_poly(x.rhs, I, closure, dot_polys, depth));
        } else {
          return lower_differential(to_poly(x.arg, I, closure, dot_polys, depth));
        }
      },
      t->v);
}

Rational eval_t(const Term& t, const Env& env) {
  return std::visit(
      [&](const auto& x) -> Rational {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TVar>) {
          return env.nu->get(x.var);
        } else if constexpr (std::is_same_v<T, TNumber>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, TDot>) {
          if (!env.dots || x.index < 1 || x.index > static_cast<int>(env.dots->size()))
            throw EvalError("undefined-symbol", "dangling dot");
          return (*env.dots)[x.index - 1];
        } else if constexpr (std::is_same_v<T, TFuncApp>) {
          if (is_abs(x.sym)) {
            Rational v = eval_t(x.args[0], env);
            return v.negative() ? -v : v;
          }
          const auto* def = env.I->func(x.sym.name, x.sym.all_vars() ? kAllVars : x.sym.arity);
          if (!def) throw EvalError("undefined-symbol", "undefined function " + x.sym.name);
          if (env.depth > 64) throw EvalError("undefined-symbol", "definition expansion too deep");
          Env sub;
          sub.I = env.I;
          sub.depth = env.depth + 1;
          std::vector<Rational> dots;
          if (!x.sym.all_vars()) {
            dots.reserve(x.args.size());
            for (const auto& a : x.args) dots.push_back(eval_t(a, env));
          }
          sub.dots = &dots;
          sub.nu = def->closure ? &*def->closure : env.nu;
          return eval_t(def->body, sub);
        } else if constexpr (std::is_same_v<T, TPlus>) {
          return eval_t(x.lhs, env) + eval_t(x.rhs, env);
        } else if constexpr (std::is_same_v<T, TTimes>) {
          return eval_t(x.lhs, env) * eval_t(x.rhs, env);
        } else {
          // Differential: lower to a polynomial in variables and differential
          // symbols, then evaluate structurally. Dot values in scope become
          // numerals inside the polynomial.
          std::vector<Term> dot_polys;
          if (env.dots)
            for (const auto& r : *env.dots) dot_polys.push_back(mk_num(r));
          Term low =
              lower_differential(to_poly(x.arg, *env.I, std::nullopt, dot_polys, env.depth));
          Env sub = env;
          sub.dots = nullptr;
          return eval_t(low, sub);
        }
      },
      t->v);
}

}  // namespace

Rational eval_term(const Term& t, const Interpretation& I, const State& nu) {
  Env env{&I, &nu, nullptr, 0};
  return eval_t(t, env);
}

Term partial_derivative(const Term& t, const VarId& x) {
  return std::visit(
      [&](const auto& n) -> Term {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TVar>) {
          return n.var == x ? mk_num(1) : mk_num(0);
        } else if constexpr (std::is_same_v<T, TNumber>) {
          return mk_num(0);
        } else if constexpr (std::is_same_v<T, TDot>) {
          return mk_num(0);
        } else if constexpr (std::is_same_v<T, TPlus>) {
          return simp_plus(partial_derivative(n.lhs, x), partial_derivative(n.rhs, x));
        } else if constexpr (std::is_same_v<T, TTimes>) {
          return simp_plus(simp_times(partial_derivative(n.lhs, x), n.rhs),
                           simp_times(n.lhs, partial_derivative(n.rhs, x)));
        } else {
          throw EvalError("unsupported-node",
                          "partial derivative of a non-polynomial node: " + pretty(t));
        }
      },
      t->v);
}

// ---------------------------------------------------------------------------
// Formula evaluation and program runs

namespace {

Truth t_not(Truth t) {
  if (t == Truth::Unknown) return Truth::Unknown;
  return t == Truth::True ? Truth::False : Truth::True;
}
Truth t_and(Truth a, Truth b) { return std::min(a, b); }
Truth t_or(Truth a, Truth b) { return std::max(a, b); }

struct FEnv {
  const Interpretation* I;
  const EvalOpts* opts;
  const std::vector<Rational>* dots = nullptr;
  int depth = 0;
};

Truth eval_f(const Formula& f, const State& nu, const FEnv& env);
RunResult run_p(const Program& p, const State& nu, const FEnv& env);

bool cmp_holds(CmpOp op, const Rational& a, const Rational& b) {
  switch (op) {
    case CmpOp::Ge: return a >= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
  }
  return false;
}

Truth eval_f(const Formula& f, const State& nu, const FEnv& env) {
  Env tenv{env.I, &nu, env.dots, env.depth};
  return std::visit(
      [&](const auto& x) -> Truth {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FCmp>) {
          return cmp_holds(x.op, eval_t(x.lhs, tenv), eval_t(x.rhs, tenv)) ? Truth::True
                                                                           : Truth::False;
        } else if constexpr (std::is_same_v<T, FPredApp>) {
          const auto* def = env.I->pred(x.sym.name, x.sym.all_vars() ? kAllVars : x.sym.arity);
          if (!def) throw EvalError("undefined-symbol", "undefined predicate " + x.sym.name);
          if (env.depth > 64) throw EvalError("undefined-symbol", "expansion too deep");
          FEnv sub = env;
          sub.depth++;
          std::vector<Rational> dots;
          if (!x.sym.all_vars()) {
            for (const auto& a : x.args) dots.push_back(eval_t(a, tenv));
          }
          sub.dots = &dots;
          const State& where = def->closure ? *def->closure : nu;
          return eval_f(def->body, where, sub);
        } else if constexpr (std::is_same_v<T, FPredicational>) {
          throw EvalError("predicational-unsupported",
                          "cannot evaluate predicational " + x.sym.name);
        } else if constexpr (std::is_same_v<T, FNot>) {
          return t_not(eval_f(x.arg, nu, env));
        } else if constexpr (std::is_same_v<T, FAnd>) {
          return t_and(eval_f(x.lhs, nu, env), eval_f(x.rhs, nu, env));
        } else if constexpr (std::is_same_v<T, FOr>) {
          return t_or(eval_f(x.lhs, nu, env), eval_f(x.rhs, nu, env));
        } else if constexpr (std::is_same_v<T, FImply>) {
          return t_or(t_not(eval_f(x.lhs, nu, env)), eval_f(x.rhs, nu, env));
        } else if constexpr (std::is_same_v<T, FEquiv>) {
          Truth a = eval_f(x.lhs, nu, env), b = eval_f(x.rhs, nu, env);
          if (a == Truth::Unknown || b == Truth::Unknown) return Truth::Unknown;
          return a == b ? Truth::True : Truth::False;
        } else if constexpr (std::is_same_v<T, FForall>) {
          // refutable by a sampled counterexample, never certified
          for (const auto& r : env.opts->quantifier_domain)
            if (eval_f(x.body, nu.with(x.var, r), env) == Truth::False) return Truth::False;
          return Truth::Unknown;
        } else if constexpr (std::is_same_v<T, FExists>) {
          for (const auto& r : env.opts->quantifier_domain)
            if (eval_f(x.body, nu.with(x.var, r), env) == Truth::True) return Truth::True;
          return Truth::Unknown;
        } else if constexpr (std::is_same_v<T, FBox>) {
          RunResult run = run_p(x.prog, nu, env);
          bool some_unknown = !run.complete;
          for (const auto& w : run.states) {
            Truth v = eval_f(x.post, w, env);
            if (v == Truth::False) return Truth::False;
            if (v == Truth::Unknown) some_unknown = true;
          }
          return some_unknown ? Truth::Unknown : Truth::True;
        } else if constexpr (std::is_same_v<T, FDiamond>) {
          RunResult run = run_p(x.prog, nu, env);
          bool some_unknown = !run.complete;
          for (const auto& w : run.states) {
            Truth v = eval_f(x.post, w, env);
            if (v == Truth::True) return Truth::True;
            if (v == Truth::Unknown) some_unknown = true;
          }
          return some_unknown ? Truth::Unknown : Truth::False;
        } else if constexpr (std::is_same_v<T, FBool>) {
          return x.value ? Truth::True : Truth::False;
        } else {
          throw EvalError("undefined-symbol", "dangling formula dot");
        }
      },
      f->v);
}

RunResult run_p(const Program& p, const State& nu, const FEnv& env) {
  return std::visit(
      [&](const auto& x) -> RunResult {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PProgConst>) {
          const Program* def = env.I->prog(x.sym.name);
          if (!def)
            throw EvalError("undefined-symbol", "undefined program constant " + x.sym.name);
          if (env.depth > 64) throw EvalError("undefined-symbol", "expansion too deep");
          FEnv sub = env;
          sub.depth++;
          sub.dots = nullptr;
          return run_p(*def, nu, sub);
        } else if constexpr (std::is_same_v<T, PAssign> || std::is_same_v<T, PDiffAssign>) {
          Env tenv{env.I, &nu, env.dots, env.depth};
          return RunResult{{nu.with(x.var, eval_t(x.value, tenv))}, true};
        } else if constexpr (std::is_same_v<T, PTest>) {
          Truth v = eval_f(x.cond, nu, env);
          if (v == Truth::True) return RunResult{{nu}, true};
          if (v == Truth::False) return RunResult{{}, true};
          return RunResult{{}, false};
        } else if constexpr (std::is_same_v<T, PODE>) {
          Trajectory tr = integrate_ode(p, *env.I, nu, env.opts->ode_h, env.opts->ode_tmax);
          RunResult r;
          r.complete = false;  // sampled approximation of a continuum of runs
          for (auto& [t, s] : tr.samples) r.states.insert(s);
          return r;
        } else if constexpr (std::is_same_v<T, PChoice>) {
          RunResult a = run_p(x.lhs, nu, env), b = run_p(x.rhs, nu, env);
          a.states.insert(b.states.begin(), b.states.end());
          a.complete = a.complete && b.complete;
          return a;
        } else if constexpr (std::is_same_v<T, PCompose>) {
          RunResult a = run_p(x.lhs, nu, env);
          RunResult out;
          out.complete = a.complete;
          for (const auto& mid : a.states) {
            RunResult b = run_p(x.rhs, mid, env);
            out.states.insert(b.states.begin(), b.states.end());
            out.complete = out.complete && b.complete;
          }
          return out;
        } else {
          // Loop: iterate up to the bound, flagged incomplete if the frontier
          // was still growing.
          RunResult out;
          out.states = {nu};
          std::set<State> frontier = {nu};
          for (int k = 0; k < env.opts->loop_bound && !frontier.empty(); ++k) {
            std::set<State> next;
            for (const auto& s : frontier) {
              RunResult step = run_p(x.body, s, env);
              out.complete = out.complete && step.complete;
              next.insert(step.states.begin(), step.states.end());
            }
            frontier.clear();
            for (const auto& s : next)
              if (out.states.insert(s).second) frontier.insert(s);
          }
          if (!frontier.empty()) out.complete = false;
          return out;
        }
      },
      p->v);
}

}  // namespace

Truth eval_formula(const Formula& f, const Interpretation& I, const State& nu,
                   const EvalOpts& opts) {
  FEnv env{&I, &opts, nullptr, 0};
  return eval_f(f, nu, env);
}

RunResult run_program(const Program& p, const Interpretation& I, const State& nu,
                      const EvalOpts& opts) {
  FEnv env{&I, &opts, nullptr, 0};
  return run_p(p, nu, env);
}

// ---------------------------------------------------------------------------
// ODE integration

Trajectory integrate_ode(const Program& ode, const Interpretation& I, const State& nu,
                         const Rational& h, const Rational& t_max) {
  const auto* o = std::get_if<PODE>(&ode->v);
  if (!o) throw EvalError("unsupported-node", "integrate_ode expects an ODE program");
  if (!(h > Rational(0))) throw EvalError("unsupported-node", "step size must be positive");

  const size_t n = o->eqs.size();
  std::vector<VarId> vars(n);
  for (size_t i = 0; i < n; ++i) vars[i] = o->eqs[i].first;

  EvalOpts opts;  // domain formulas along flows are quantifier/modality-free here
  Trajectory tr;
  tr.h = h;

  // exact sample construction: set x' from the right-hand sides at the sample
  auto finish_sample = [&](State s) -> std::optional<State> {
    for (size_t i = 0; i < n; ++i) s.set(vars[i].diff(), eval_term(o->eqs[i].second, I, s));
    Truth dom = eval_formula(o->domain, I, s, opts);
    if (dom != Truth::True) return std::nullopt;
    return s;
  };

  auto first = finish_sample(nu);
  if (!first) return tr;  // stuck immediately: no run at all
  tr.samples.emplace_back(Rational(0), *first);

  double hd = h.to_double();
  long steps = std::lround(t_max.to_double() / hd);

  // double-valued working copy of the evolving coordinates
  std::vector<double> y(n);
  for (size_t i = 0; i < n; ++i) y[i] = nu.get(vars[i]).to_double();
  State frame = nu;  // non-evolving coordinates stay exact

  auto deriv = [&](const std::vector<double>& yy, std::vector<double>& dy) {
    State s = frame;
    for (size_t i = 0; i < n; ++i) s.set(vars[i], Rational::from_double(yy[i]));
    for (size_t i = 0; i < n; ++i) dy[i] = eval_term(o->eqs[i].second, I, s).to_double();
  };

  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (long step = 1; step <= steps; ++step) {
    deriv(y, k1);
    for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * hd * k1[i];
    deriv(tmp, k2);
    for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * hd * k2[i];
    deriv(tmp, k3);
    for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + hd * k3[i];
    deriv(tmp, k4);
    for (size_t i = 0; i < n; ++i)
      y[i] += hd / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    for (size_t i = 0; i < n; ++i)
      if (!std::isfinite(y[i]))
        throw EvalError("integrator-failure", "non-finite value along the flow");
    State s = frame;
    for (size_t i = 0; i < n; ++i) s.set(vars[i], Rational::from_double(y[i]));
    auto sample = finish_sample(s);
    if (!sample) break;  // left the evolution domain
    tr.samples.emplace_back(h * Rational(step), *sample);
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Adjoint interpretations

Interpretation adjoint(const USubst& sigma, const Interpretation& I, const State& nu) {
  Interpretation J = I;
  for (const auto& p : sigma.pairs()) {
    switch (p.what.sort) {
      case SymbolSort::Function:
        if (p.what.all_vars())
          J.define_func(p.what.name, kAllVars, p.term_repl);
        else
          J.define_func(p.what.name, p.what.arity, p.term_repl, nu);
        break;
      case SymbolSort::Predicate:
        if (p.what.all_vars())
          J.define_pred(p.what.name, kAllVars, p.formula_repl);
        else
          J.define_pred(p.what.name, p.what.arity, p.formula_repl, nu);
        break;
      case SymbolSort::ProgramConst:
        J.define_prog(p.what.name, p.program_repl);
        break;
      case SymbolSort::Predicational:
        throw EvalError("predicational-unsupported",
                        "adjoint of a predicational replacement");
    }
  }
  return J;
}

// ---------------------------------------------------------------------------
// Differential lemma check

double check_differential_lemma(const Term& eta, const Program& ode,
                                const Interpretation& I, const State& nu,
                                const Rational& h, const Rational& t_max) {
  Trajectory tr = integrate_ode(ode, I, nu, h, t_max);
  if (tr.samples.size() < 3) return 0.0;
  Term deta = mk_differential(eta);
  std::vector<double> g(tr.samples.size()), d(tr.samples.size());
  for (size_t k = 0; k < tr.samples.size(); ++k) {
    g[k] = eval_term(eta, I, tr.samples[k].second).to_double();
    d[k] = eval_term(deta, I, tr.samples[k].second).to_double();
    if (!std::isfinite(g[k]) || !std::isfinite(d[k]))
      throw EvalError("integrator-failure", "non-finite value along the flow");
  }
  double hd = h.to_double();
  double worst = 0.0;
  for (size_t k = 1; k + 1 < tr.samples.size(); ++k) {
    double cd = (g[k + 1] - g[k - 1]) / (2.0 * hd);
    double dev = std::abs(cd - d[k]) / std::max(1.0, std::abs(d[k]));
    worst = std::max(worst, dev);
  }
  return worst;
}

}  // namespace dl
