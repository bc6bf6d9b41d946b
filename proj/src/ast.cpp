#include "dl/ast.hpp"

#include <cctype>
#include <map>
#include <set>

namespace dl {

Term mk_var(VarId v) { return std::make_shared<TermNode>(TermNode{TVar{std::move(v)}}); }
Term mk_num(Rational r) { return std::make_shared<TermNode>(TermNode{TNumber{std::move(r)}}); }
Term mk_num(std::int64_t n) { return mk_num(Rational(n)); }
Term mk_func(SymbolId sym, std::vector<Term> args) {
  return std::make_shared<TermNode>(TermNode{TFuncApp{std::move(sym), std::move(args)}});
}
Term mk_plus(Term a, Term b) {
  return std::make_shared<TermNode>(TermNode{TPlus{std::move(a), std::move(b)}});
}
Term mk_times(Term a, Term b) {
  return std::make_shared<TermNode>(TermNode{TTimes{std::move(a), std::move(b)}});
}
Term mk_differential(Term a) {
  return std::make_shared<TermNode>(TermNode{TDifferential{std::move(a)}});
}
Term mk_dot(int index) { return std::make_shared<TermNode>(TermNode{TDot{index}}); }

Formula mk_cmp(CmpOp op, Term a, Term b) {
  return std::make_shared<FormulaNode>(FormulaNode{FCmp{op, std::move(a), std::move(b)}});
}
Formula mk_pred(SymbolId sym, std::vector<Term> args) {
  return std::make_shared<FormulaNode>(FormulaNode{FPredApp{std::move(sym), std::move(args)}});
}
Formula mk_predicational(SymbolId sym, Formula arg) {
  return std::make_shared<FormulaNode>(FormulaNode{FPredicational{std::move(sym), std::move(arg)}});
}
Formula mk_not(Formula f) { return std::make_shared<FormulaNode>(FormulaNode{FNot{std::move(f)}}); }
Formula mk_and(Formula a, Formula b) {
  return std::make_shared<FormulaNode>(FormulaNode{FAnd{std::move(a), std::move(b)}});
}
Formula mk_or(Formula a, Formula b) {
  return std::make_shared<FormulaNode>(FormulaNode{FOr{std::move(a), std::move(b)}});
}
Formula mk_imply(Formula a, Formula b) {
  return std::make_shared<FormulaNode>(FormulaNode{FImply{std::move(a), std::move(b)}});
}
Formula mk_equiv(Formula a, Formula b) {
  return std::make_shared<FormulaNode>(FormulaNode{FEquiv{std::move(a), std::move(b)}});
}
Formula mk_forall(VarId v, Formula body) {
  return std::make_shared<FormulaNode>(FormulaNode{FForall{std::move(v), std::move(body)}});
}
Formula mk_exists(VarId v, Formula body) {
  return std::make_shared<FormulaNode>(FormulaNode{FExists{std::move(v), std::move(body)}});
}
Formula mk_box(Program p, Formula post) {
  return std::make_shared<FormulaNode>(FormulaNode{FBox{std::move(p), std::move(post)}});
}
Formula mk_diamond(Program p, Formula post) {
  return std::make_shared<FormulaNode>(FormulaNode{FDiamond{std::move(p), std::move(post)}});
}
Formula mk_bool(bool v) { return std::make_shared<FormulaNode>(FormulaNode{FBool{v}}); }
Formula mk_dot_formula() { return std::make_shared<FormulaNode>(FormulaNode{FDotFormula{}}); }

Program mk_prog_const(SymbolId sym) {
  return std::make_shared<ProgramNode>(ProgramNode{PProgConst{std::move(sym)}});
}
Program mk_assign(VarId v, Term t) {
  return std::make_shared<ProgramNode>(ProgramNode{PAssign{std::move(v), std::move(t)}});
}
Program mk_diff_assign(VarId v, Term t) {
  return std::make_shared<ProgramNode>(ProgramNode{PDiffAssign{std::move(v), std::move(t)}});
}
Program mk_test(Formula f) { return std::make_shared<ProgramNode>(ProgramNode{PTest{std::move(f)}}); }
Program mk_ode(std::vector<std::pair<VarId, Term>> eqs, Formula domain) {
  return std::make_shared<ProgramNode>(ProgramNode{PODE{std::move(eqs), std::move(domain)}});
}
Program mk_choice(Program a, Program b) {
  return std::make_shared<ProgramNode>(ProgramNode{PChoice{std::move(a), std::move(b)}});
}
Program mk_compose(Program a, Program b) {
  return std::make_shared<ProgramNode>(ProgramNode{PCompose{std::move(a), std::move(b)}});
}
Program mk_loop(Program body) {
  return std::make_shared<ProgramNode>(ProgramNode{PLoop{std::move(body)}});
}

// ---------------------------------------------------------------------------
// Structural equality

bool equal(const Term& a, const Term& b) {
  if (a == b) return true;
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->v);
        if constexpr (std::is_same_v<T, TVar>) {
          return x.var == y.var;
        } else if constexpr (std::is_same_v<T, TNumber>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, TFuncApp>) {
          if (x.sym != y.sym || x.args.size() != y.args.size()) return false;
          for (size_t i = 0; i < x.args.size(); ++i)
            if (!equal(x.args[i], y.args[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, TPlus>) {
          return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, TTimes>) {
          return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, TDifferential>) {
          return equal(x.arg, y.arg);
        } else {
          return x.index == std::get<TDot>(b->v).index;
        }
      },
      a->v);
}

bool equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->v);
        if constexpr (std::is_same_v<T, FCmp>) {
          return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, FPredApp>) {
          if (x.sym != y.sym || x.args.size() != y.args.size()) return false;
          for (size_t i = 0; i < x.args.size(); ++i)
            if (!equal(x.args[i], y.args[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, FPredicational>) {
          return x.sym == y.sym && equal(x.arg, y.arg);
        } else if constexpr (std::is_same_v<T, FNot>) {
          return equal(x.arg, y.arg);
        } else if constexpr (std::is_same_v<T, FAnd> || std::is_same_v<T, FOr> ||
                             std::is_same_v<T, FImply> || std::is_same_v<T, FEquiv>) {
          return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, FForall> || std::is_same_v<T, FExists>) {
          return x.var == y.var && equal(x.body, y.body);
        } else if constexpr (std::is_same_v<T, FBox> || std::is_same_v<T, FDiamond>) {
          return equal(x.prog, y.prog) && equal(x.post, y.post);
        } else if constexpr (std::is_same_v<T, FBool>) {
          return x.value == y.value;
        } else {
          return true;  // FDotFormula
        }
      },
      a->v);
}

bool equal(const Program& a, const Program& b) {
  if (a == b) return true;
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->v);
        if constexpr (std::is_same_v<T, PProgConst>) {
          return x.sym == y.sym;
        } else if constexpr (std::is_same_v<T, PAssign> || std::is_same_v<T, PDiffAssign>) {
          return x.var == y.var && equal(x.value, y.value);
        } else if constexpr (std::is_same_v<T, PTest>) {
          return equal(x.cond, y.cond);
        } else if constexpr (std::is_same_v<T, PODE>) {
          if (x.eqs.size() != y.eqs.size()) return false;
          for (size_t i = 0; i < x.eqs.size(); ++i) {
            if (x.eqs[i].first != y.eqs[i].first) return false;
            if (!equal(x.eqs[i].second, y.eqs[i].second)) return false;
          }
          return equal(x.domain, y.domain);
        } else if constexpr (std::is_same_v<T, PChoice> || std::is_same_v<T, PCompose>) {
          return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
        } else {
          return equal(x.body, std::get<PLoop>(b->v).body);
        }
      },
      a->v);
}

// ---------------------------------------------------------------------------
// Well-formedness

namespace {

struct WfCtx {
  // Arity consistency across one expression: (name, sort) -> arity.
  std::map<std::pair<std::string, int>, int> arities;
  std::optional<Violation> bad;

  void fail(const std::string& path, const std::string& msg) {
    if (!bad) bad = Violation{path, msg};
  }

  void symbol(const std::string& path, const SymbolId& s, size_t nargs) {
    if (is_abs(s)) {
      if (nargs != 1) fail(path, "abs takes exactly one argument");
      return;
    }
    if (s.name.empty()) fail(path, "empty symbol name");
    if (!s.all_vars() && static_cast<int>(nargs) != s.arity)
      fail(path, "arity mismatch: " + s.name + " declared " + std::to_string(s.arity) +
                     ", applied to " + std::to_string(nargs));
    if (s.all_vars() && nargs != 0) fail(path, "all-vars symbol applied to explicit arguments");
    auto key = std::make_pair(s.name, static_cast<int>(s.sort));
    auto [it, fresh] = arities.emplace(key, s.arity);
    if (!fresh && it->second != s.arity)
      fail(path, "inconsistent arity for " + s.name);
  }
};

bool valid_name(const std::string& n) {
  if (n.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(n[0]))) return false;
  for (char c : n)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

void wf(const Term& t, WfCtx& ctx, const std::string& path);
void wf(const Formula& f, WfCtx& ctx, const std::string& path);
void wf(const Program& p, WfCtx& ctx, const std::string& path);

void wf(const Term& t, WfCtx& ctx, const std::string& path) {
  if (ctx.bad) return;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TVar>) {
          if (!valid_name(x.var.name)) ctx.fail(path, "bad variable name");
        } else if constexpr (std::is_same_v<T, TFuncApp>) {
          ctx.symbol(path, x.sym, x.args.size());
          for (size_t i = 0; i < x.args.size(); ++i)
            wf(x.args[i], ctx, path + "." + std::to_string(i));
        } else if constexpr (std::is_same_v<T, TPlus> || std::is_same_v<T, TTimes>) {
          wf(x.lhs, ctx, path + ".0");
          wf(x.rhs, ctx, path + ".1");
        } else if constexpr (std::is_same_v<T, TDifferential>) {
          wf(x.arg, ctx, path + ".0");
        } else if constexpr (std::is_same_v<T, TDot>) {
          if (x.index < 1) ctx.fail(path, "dot index must be positive");
        }
      },
      t->v);
}

void wf(const Formula& f, WfCtx& ctx, const std::string& path) {
  if (ctx.bad) return;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FCmp>) {
          wf(x.lhs, ctx, path + ".0");
          wf(x.rhs, ctx, path + ".1");
        } else if constexpr (std::is_same_v<T, FPredApp>) {
          if (x.sym.sort != SymbolSort::Predicate) ctx.fail(path, "predicate sort expected");
          ctx.symbol(path, x.sym, x.args.size());
          for (size_t i = 0; i < x.args.size(); ++i)
            wf(x.args[i], ctx, path + "." + std::to_string(i));
        } else if constexpr (std::is_same_v<T, FPredicational>) {
          if (x.sym.sort != SymbolSort::Predicational)
            ctx.fail(path, "predicational sort expected");
          ctx.symbol(path, x.sym, 0);
          wf(x.arg, ctx, path + ".0");
        } else if constexpr (std::is_same_v<T, FNot>) {
          wf(x.arg, ctx, path + ".0");
        } else if constexpr (std::is_same_v<T, FAnd> || std::is_same_v<T, FOr> ||
                             std::is_same_v<T, FImply> || std::is_same_v<T, FEquiv>) {
          wf(x.lhs, ctx, path + ".0");
          wf(x.rhs, ctx, path + ".1");
        } else if constexpr (std::is_same_v<T, FForall> || std::is_same_v<T, FExists>) {
          if (x.var.is_diff()) ctx.fail(path, "quantifier binds differential symbol");
          if (!valid_name(x.var.name)) ctx.fail(path, "bad variable name");
          wf(x.body, ctx, path + ".0");
        } else if constexpr (std::is_same_v<T, FBox> || std::is_same_v<T, FDiamond>) {
          wf(x.prog, ctx, path + ".0");
          wf(x.post, ctx, path + ".1");
        }
      },
      f->v);
}

void wf(const Program& p, WfCtx& ctx, const std::string& path) {
  if (ctx.bad) return;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PProgConst>) {
          if (x.sym.sort != SymbolSort::ProgramConst)
            ctx.fail(path, "program constant sort expected");
          ctx.symbol(path, x.sym, 0);
        } else if constexpr (std::is_same_v<T, PAssign>) {
          if (x.var.is_diff()) ctx.fail(path, "assignment target must be a base variable");
          wf(x.value, ctx, path + ".0");
        } else if constexpr (std::is_same_v<T, PDiffAssign>) {
          if (!x.var.is_diff())
            ctx.fail(path, "differential assignment target must be a differential symbol");
          wf(x.value, ctx, path + ".0");
        } else if constexpr (std::is_same_v<T, PTest>) {
          wf(x.cond, ctx, path + ".0");
        } else if constexpr (std::is_same_v<T, PODE>) {
          if (x.eqs.empty()) ctx.fail(path, "ODE with empty equation list");
          std::set<VarId> seen;
          for (size_t i = 0; i < x.eqs.size(); ++i) {
            if (x.eqs[i].first.is_diff())
              ctx.fail(path, "ODE left-hand side must be a base variable");
            if (!seen.insert(x.eqs[i].first).second)
              ctx.fail(path, "duplicate ODE left-hand side " + x.eqs[i].first.name);
            wf(x.eqs[i].second, ctx, path + "." + std::to_string(i));
          }
          wf(x.domain, ctx, path + ".domain");
        } else if constexpr (std::is_same_v<T, PChoice> || std::is_same_v<T, PCompose>) {
          wf(x.lhs, ctx, path + ".0");
          wf(x.rhs, ctx, path + ".1");
        } else {
          wf(x.body, ctx, path + ".0");
        }
      },
      p->v);
}

}  // namespace

std::optional<Violation> wellformed(const Term& t) {
  WfCtx ctx;
  wf(t, ctx, ".");
  return ctx.bad;
}
std::optional<Violation> wellformed(const Formula& f) {
  WfCtx ctx;
  wf(f, ctx, ".");
  return ctx.bad;
}
std::optional<Violation> wellformed(const Program& p) {
  WfCtx ctx;
  wf(p, ctx, ".");
  return ctx.bad;
}

// ---------------------------------------------------------------------------
// Dot freeness

bool dot_free(const Term& t) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TDot>) return false;
        else if constexpr (std::is_same_v<T, TFuncApp>) {
          for (const auto& a : x.args)
            if (!dot_free(a)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, TPlus> || std::is_same_v<T, TTimes>) {
          return dot_free(x.lhs) && dot_free(x.rhs);
        } else if constexpr (std::is_same_v<T, TDifferential>) {
          return dot_free(x.arg);
        } else {
          return true;
        }
      },
      t->v);
}

bool dot_free(const Formula& f) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FDotFormula>) return false;
        else if constexpr (std::is_same_v<T, FCmp>) return dot_free(x.lhs) && dot_free(x.rhs);
        else if constexpr (std::is_same_v<T, FPredApp>) {
          for (const auto& a : x.args)
            if (!dot_free(a)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, FPredicational>) return dot_free(x.arg);
        else if constexpr (std::is_same_v<T, FNot>) return dot_free(x.arg);
        else if constexpr (std::is_same_v<T, FAnd> || std::is_same_v<T, FOr> ||
                           std::is_same_v<T, FImply> || std::is_same_v<T, FEquiv>)
          return dot_free(x.lhs) && dot_free(x.rhs);
        else if constexpr (std::is_same_v<T, FForall> || std::is_same_v<T, FExists>)
          return dot_free(x.body);
        else if constexpr (std::is_same_v<T, FBox> || std::is_same_v<T, FDiamond>)
          return dot_free(x.prog) && dot_free(x.post);
        else
          return true;
      },
      f->v);
}

bool dot_free(const Program& p) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PProgConst>) return true;
        else if constexpr (std::is_same_v<T, PAssign> || std::is_same_v<T, PDiffAssign>)
          return dot_free(x.value);
        else if constexpr (std::is_same_v<T, PTest>) return dot_free(x.cond);
        else if constexpr (std::is_same_v<T, PODE>) {
          for (const auto& [v, rhs] : x.eqs)
            if (!dot_free(rhs)) return false;
          return dot_free(x.domain);
        } else if constexpr (std::is_same_v<T, PChoice> || std::is_same_v<T, PCompose>)
          return dot_free(x.lhs) && dot_free(x.rhs);
        else
          return dot_free(x.body);
      },
      p->v);
}

// ---------------------------------------------------------------------------
// Desugaring

Term desugar(const Term& t) {
  return std::visit(
      [&](const auto& x) -> Term {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TFuncApp>) {
          std::vector<Term> args;
          args.reserve(x.args.size());
          for (const auto& a : x.args) args.push_back(desugar(a));
          return mk_func(x.sym, std::move(args));
        } else if constexpr (std::is_same_v<T, TPlus>) {
          return mk_plus(desugar(x.lhs), desugar(x.rhs));
        } else if constexpr (std::is_same_v<T, TTimes>) {
          return mk_times(desugar(x.lhs), desugar(x.rhs));
        } else if constexpr (std::is_same_v<T, TDifferential>) {
          return mk_differential(desugar(x.arg));
        } else {
          return t;
        }
      },
      t->v);
}

Formula desugar(const Formula& f) {
  return std::visit(
      [&](const auto& x) -> Formula {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FCmp>) {
          Term l = desugar(x.lhs), r = desugar(x.rhs);
          switch (x.op) {
            case CmpOp::Ge: return mk_cmp(CmpOp::Ge, l, r);
            case CmpOp::Le: return mk_cmp(CmpOp::Ge, r, l);             // θ≤η  as  η≥θ
            case CmpOp::Gt: return mk_not(mk_cmp(CmpOp::Ge, r, l));     // θ>η  as  ¬(η≥θ)
            case CmpOp::Lt: return mk_not(mk_cmp(CmpOp::Ge, l, r));     // θ<η  as  ¬(θ≥η)
            case CmpOp::Eq: return mk_cmp(CmpOp::Eq, l, r);             // primitive
            case CmpOp::Ne: return mk_cmp(CmpOp::Ne, l, r);             // primitive
          }
          return f;
        } else if constexpr (std::is_same_v<T, FPredApp>) {
          std::vector<Term> args;
          for (const auto& a : x.args) args.push_back(desugar(a));
          return mk_pred(x.sym, std::move(args));
        } else if constexpr (std::is_same_v<T, FPredicational>) {
          return mk_predicational(x.sym, desugar(x.arg));
        } else if constexpr (std::is_same_v<T, FNot>) {
          return mk_not(desugar(x.arg));
        } else if constexpr (std::is_same_v<T, FAnd>) {
          return mk_and(desugar(x.lhs), desugar(x.rhs));
        } else if constexpr (std::is_same_v<T, FOr>) {
          // φ∨ψ as ¬(¬φ∧¬ψ)
          return mk_not(mk_and(mk_not(desugar(x.lhs)), mk_not(desugar(x.rhs))));
        } else if constexpr (std::is_same_v<T, FImply>) {
          // φ→ψ as ¬(φ∧¬ψ)
          return mk_not(mk_and(desugar(x.lhs), mk_not(desugar(x.rhs))));
        } else if constexpr (std::is_same_v<T, FEquiv>) {
          // φ↔ψ as (φ→ψ)∧(ψ→φ), each implication desugared
          Formula l = desugar(x.lhs), r = desugar(x.rhs);
          return mk_and(mk_not(mk_and(l, mk_not(r))), mk_not(mk_and(r, mk_not(l))));
        } else if constexpr (std::is_same_v<T, FForall>) {
          // ∀x φ as ¬∃x ¬φ
          return mk_not(mk_exists(x.var, mk_not(desugar(x.body))));
        } else if constexpr (std::is_same_v<T, FExists>) {
          return mk_exists(x.var, desugar(x.body));
        } else if constexpr (std::is_same_v<T, FBox>) {
          // [α]φ as ¬⟨α⟩¬φ
          return mk_not(mk_diamond(desugar(x.prog), mk_not(desugar(x.post))));
        } else if constexpr (std::is_same_v<T, FDiamond>) {
          return mk_diamond(desugar(x.prog), desugar(x.post));
        } else {
          return f;
        }
      },
      f->v);
}

Program desugar(const Program& p) {
  return std::visit(
      [&](const auto& x) -> Program {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PProgConst>) return p;
        else if constexpr (std::is_same_v<T, PAssign>) return mk_assign(x.var, desugar(x.value));
        else if constexpr (std::is_same_v<T, PDiffAssign>)
          return mk_diff_assign(x.var, desugar(x.value));
        else if constexpr (std::is_same_v<T, PTest>) return mk_test(desugar(x.cond));
        else if constexpr (std::is_same_v<T, PODE>) {
          std::vector<std::pair<VarId, Term>> eqs;
          for (const auto& [v, rhs] : x.eqs) eqs.emplace_back(v, desugar(rhs));
          return mk_ode(std::move(eqs), desugar(x.domain));
        } else if constexpr (std::is_same_v<T, PChoice>)
          return mk_choice(desugar(x.lhs), desugar(x.rhs));
        else if constexpr (std::is_same_v<T, PCompose>)
          return mk_compose(desugar(x.lhs), desugar(x.rhs));
        else
          return mk_loop(desugar(x.body));
      },
      p->v);
}

}  // namespace dl
