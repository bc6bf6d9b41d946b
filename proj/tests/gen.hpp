#ifndef DL_TESTS_GEN_HPP
#define DL_TESTS_GEN_HPP

#include <random>
#include <set>
#include <string>
#include <vector>

#include "dl/ast.hpp"
#include "dl/semantics.hpp"

// Random AST generators for property tests. The full generators reach every
// grammar production (tracked in `seen` tags); the poly/discrete variants are
// restricted so the exact evaluator applies.
namespace dlgen {

using namespace dl;

struct Gen {
  std::mt19937_64 rng;
  std::set<std::string> seen;

  explicit Gen(std::uint64_t seed) : rng(seed) {}

  int upto(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
  bool coin() { return upto(2) == 0; }

  VarId var() {
    static const char* names[] = {"x", "y", "z", "u", "v", "w"};
    return base_var(names[upto(6)]);
  }
  VarId dvar() { return var().diff(); }

  Rational num() {
    int n = std::uniform_int_distribution<int>(-9, 9)(rng);
    int d = std::uniform_int_distribution<int>(1, 4)(rng);
    return Rational(BigInt(n), BigInt(d));
  }

  // ---- full grammar (round-trip coverage) ----

  Term term(int depth, bool with_dots = false) {
    if (depth <= 0) {
      switch (upto(with_dots ? 4 : 3)) {
        case 0: seen.insert("t:var"); return mk_var(var());
        case 1: seen.insert("t:diffsym"); return mk_var(dvar());
        case 2: seen.insert("t:number"); return mk_num(num());
        default: seen.insert("t:dot"); return mk_dot(1 + upto(2));
      }
    }
    switch (upto(6)) {
      case 0: return term(0, with_dots);
      case 1: seen.insert("t:plus"); return mk_plus(term(depth - 1, with_dots), term(depth - 1, with_dots));
      case 2: seen.insert("t:times"); return mk_times(term(depth - 1, with_dots), term(depth - 1, with_dots));
      case 3: seen.insert("t:differential"); return mk_differential(term(depth - 1, with_dots));
      case 4: {
        seen.insert("t:funcapp");
        static const char* fns[] = {"f", "g", "h"};
        std::string name = fns[upto(3)];
        int arity = upto(3);  // 0, 1, 2
        if (arity == 0 && coin()) {
          seen.insert("t:allvars");
          return mk_func(SymbolId{name + "av", SymbolSort::Function, kAllVars}, {});
        }
        std::vector<Term> args;
        for (int i = 0; i < arity; ++i) args.push_back(term(depth - 1, with_dots));
        // arity is encoded in the name so one expression stays consistent
        return mk_func(SymbolId{name + std::to_string(arity), SymbolSort::Function, arity},
                       std::move(args));
      }
      default: {
        seen.insert("t:abs");
        return mk_func(SymbolId{kAbsName, SymbolSort::Function, 1}, {term(depth - 1, with_dots)});
      }
    }
  }

  Formula formula(int depth, bool with_dots = false) {
    if (depth <= 0) {
      switch (upto(4)) {
        case 0: {
          seen.insert("f:cmp");
          CmpOp ops[] = {CmpOp::Ge, CmpOp::Gt, CmpOp::Le, CmpOp::Lt, CmpOp::Eq, CmpOp::Ne};
          return mk_cmp(ops[upto(6)], term(0, with_dots), term(0, with_dots));
        }
        case 1: seen.insert("f:bool"); return mk_bool(coin());
        case 2: {
          seen.insert("f:pred0");
          return mk_pred(SymbolId{"p0", SymbolSort::Predicate, 0}, {});
        }
        default:
          if (with_dots) {
            seen.insert("f:dotformula");
            return mk_dot_formula();
          }
          return mk_bool(true);
      }
    }
    switch (upto(11)) {
      case 0: return formula(0, with_dots);
      case 1: seen.insert("f:not"); return mk_not(formula(depth - 1, with_dots));
      case 2: seen.insert("f:and"); return mk_and(formula(depth - 1, with_dots), formula(depth - 1, with_dots));
      case 3: seen.insert("f:or"); return mk_or(formula(depth - 1, with_dots), formula(depth - 1, with_dots));
      case 4: seen.insert("f:imply"); return mk_imply(formula(depth - 1, with_dots), formula(depth - 1, with_dots));
      case 5: seen.insert("f:equiv"); return mk_equiv(formula(depth - 1, with_dots), formula(depth - 1, with_dots));
      case 6: {
        bool uni = coin();
        seen.insert(uni ? "f:forall" : "f:exists");
        return uni ? mk_forall(var(), formula(depth - 1, with_dots))
                   : mk_exists(var(), formula(depth - 1, with_dots));
      }
      case 7: seen.insert("f:box"); return mk_box(program(depth - 1, with_dots), formula(depth - 1, with_dots));
      case 8: seen.insert("f:diamond"); return mk_diamond(program(depth - 1, with_dots), formula(depth - 1, with_dots));
      case 9: {
        seen.insert("f:pred");
        int arity = 1 + upto(2);
        if (coin()) {
          seen.insert("f:predallvars");
          return mk_pred(SymbolId{"pav", SymbolSort::Predicate, kAllVars}, {});
        }
        std::vector<Term> args;
        for (int i = 0; i < arity; ++i) args.push_back(term(depth - 1, with_dots));
        return mk_pred(SymbolId{"p" + std::to_string(arity), SymbolSort::Predicate, arity},
                       std::move(args));
      }
      default:
        seen.insert("f:predicational");
        return mk_predicational(SymbolId{"C", SymbolSort::Predicational, 0},
                                formula(depth - 1, with_dots));
    }
  }

  Program program(int depth, bool with_dots = false) {
    if (depth <= 0) {
      switch (upto(3)) {
        case 0: seen.insert("p:assign"); return mk_assign(var(), term(0, with_dots));
        case 1: seen.insert("p:diffassign"); return mk_diff_assign(dvar(), term(0, with_dots));
        default: {
          seen.insert("p:const");
          static const char* cs[] = {"a", "b", "c"};
          return mk_prog_const(SymbolId{cs[upto(3)], SymbolSort::ProgramConst, 0});
        }
      }
    }
    switch (upto(7)) {
      case 0: return program(0, with_dots);
      case 1: seen.insert("p:test"); return mk_test(formula(depth - 1, with_dots));
      case 2: seen.insert("p:choice"); return mk_choice(program(depth - 1, with_dots), program(depth - 1, with_dots));
      case 3: seen.insert("p:compose"); return mk_compose(program(depth - 1, with_dots), program(depth - 1, with_dots));
      case 4: seen.insert("p:loop"); return mk_loop(program(depth - 1, with_dots));
      default: {
        seen.insert("p:ode");
        std::set<VarId> lhs;
        int n = 1 + upto(2);
        for (int i = 0; i < n; ++i) lhs.insert(var());
        std::vector<std::pair<VarId, Term>> eqs;
        for (const auto& v : lhs) eqs.emplace_back(v, term(depth - 1, with_dots));
        Formula dom = coin() ? mk_bool(true) : formula(0, with_dots);
        return mk_ode(std::move(eqs), dom);
      }
    }
  }

  // ---- restricted generators for the exact evaluator ----

  // polynomial over variables and differential symbols (optionally with
  // differentials, which the evaluator lowers)
  Term poly(int depth, bool with_differentials = true, bool with_diffsyms = true) {
    if (depth <= 0) {
      switch (upto(3)) {
        case 0: return mk_var(var());
        case 1: return with_diffsyms ? mk_var(dvar()) : mk_var(var());
        default: return mk_num(num());
      }
    }
    int n = upto(with_differentials ? 4 : 3);
    switch (n) {
      case 0: return poly(0, with_differentials, with_diffsyms);
      case 1: return mk_plus(poly(depth - 1, with_differentials, with_diffsyms),
                             poly(depth - 1, with_differentials, with_diffsyms));
      case 2: return mk_times(poly(depth - 1, with_differentials, with_diffsyms),
                              poly(depth - 1, with_differentials, with_diffsyms));
      default: return mk_differential(poly(depth - 1, false, false));
    }
  }

  // discrete loop-free programs over polynomial assignments and comparisons
  Program discrete(int depth) {
    if (depth <= 0) {
      switch (upto(3)) {
        case 0: return mk_assign(var(), poly(1, false));
        case 1: return mk_diff_assign(dvar(), poly(1, false));
        default: return mk_test(qfree(1));
      }
    }
    switch (upto(3)) {
      case 0: return discrete(0);
      case 1: return mk_choice(discrete(depth - 1), discrete(depth - 1));
      default: return mk_compose(discrete(depth - 1), discrete(depth - 1));
    }
  }

  // quantifier-free, symbol-free formulas over polynomial comparisons and
  // discrete programs
  Formula qfree(int depth) {
    if (depth <= 0) {
      CmpOp ops[] = {CmpOp::Ge, CmpOp::Gt, CmpOp::Le, CmpOp::Lt, CmpOp::Eq, CmpOp::Ne};
      return mk_cmp(ops[upto(6)], poly(1, false), poly(1, false));
    }
    switch (upto(6)) {
      case 0: return qfree(0);
      case 1: return mk_not(qfree(depth - 1));
      case 2: return mk_and(qfree(depth - 1), qfree(depth - 1));
      case 3: return mk_or(qfree(depth - 1), qfree(depth - 1));
      case 4: return mk_imply(qfree(depth - 1), qfree(depth - 1));
      default: return mk_box(discrete(depth - 1), qfree(depth - 1));
    }
  }

  dl::State state(const std::vector<VarId>& vars) {
    dl::State s;
    for (const auto& v : vars) s.set(v, num());
    return s;
  }
};

// The twelve-variable universe shared by the lemma property suites.
inline const std::vector<VarId>& universe() {
  static const std::vector<VarId> u = {base_var("x"), base_var("y"), base_var("z"),
                                       base_var("u"), base_var("v"), base_var("w"),
                                       diff_var("x"), diff_var("y"), diff_var("z"),
                                       diff_var("u"), diff_var("v"), diff_var("w")};
  return u;
}

// Expressions over the substitutable symbols f (unary function), g (nullary
// function), p (unary predicate), q (nullary predicate) and a (program
// constant), for the substitution lemma suites.
inline const SymbolId kSymF{"f", SymbolSort::Function, 1};
inline const SymbolId kSymG{"g", SymbolSort::Function, 0};
inline const SymbolId kSymP{"p", SymbolSort::Predicate, 1};
inline const SymbolId kSymQ{"q", SymbolSort::Predicate, 0};
inline const SymbolId kSymA{"a", SymbolSort::ProgramConst, 0};

inline Term sym_term(Gen& gen, int depth, bool dots, bool differentials) {
  if (depth <= 0) {
    switch (gen.upto(dots ? 4 : 3)) {
      case 0: return mk_var(gen.var());
      case 1: return mk_var(gen.dvar());
      case 2: return mk_num(gen.num());
      default: return mk_dot(1);
    }
  }
  switch (gen.upto(differentials ? 6 : 5)) {
    case 0: return sym_term(gen, 0, dots, differentials);
    case 1: return mk_plus(sym_term(gen, depth - 1, dots, differentials),
                           sym_term(gen, depth - 1, dots, differentials));
    case 2: return mk_times(sym_term(gen, depth - 1, dots, differentials),
                            sym_term(gen, depth - 1, dots, differentials));
    case 3: return mk_func(kSymF, {sym_term(gen, depth - 1, dots, differentials)});
    case 4: return mk_func(kSymG, {});
    default: return mk_differential(gen.poly(depth - 1, false));
  }
}

inline dl::Program sym_program(Gen& gen, int depth, bool dots);

inline Formula sym_formula(Gen& gen, int depth, bool dots) {
  if (depth <= 0) {
    switch (gen.upto(4)) {
      case 0: {
        CmpOp ops[] = {CmpOp::Ge, CmpOp::Gt, CmpOp::Le, CmpOp::Lt, CmpOp::Eq, CmpOp::Ne};
        return mk_cmp(ops[gen.upto(6)], sym_term(gen, 1, dots, false),
                      sym_term(gen, 1, dots, false));
      }
      case 1: return mk_pred(kSymP, {sym_term(gen, 1, dots, false)});
      case 2: return mk_pred(kSymQ, {});
      default: return mk_bool(gen.coin());
    }
  }
  switch (gen.upto(6)) {
    case 0: return sym_formula(gen, 0, dots);
    case 1: return mk_not(sym_formula(gen, depth - 1, dots));
    case 2: return mk_and(sym_formula(gen, depth - 1, dots), sym_formula(gen, depth - 1, dots));
    case 3: return mk_or(sym_formula(gen, depth - 1, dots), sym_formula(gen, depth - 1, dots));
    case 4: return mk_imply(sym_formula(gen, depth - 1, dots),
                            sym_formula(gen, depth - 1, dots));
    default: return mk_box(sym_program(gen, depth - 1, dots),
                           sym_formula(gen, depth - 1, dots));
  }
}

inline dl::Program sym_program(Gen& gen, int depth, bool dots) {
  if (depth <= 0) {
    switch (gen.upto(4)) {
      case 0: return mk_assign(gen.var(), sym_term(gen, 1, dots, false));
      case 1: return mk_diff_assign(gen.dvar(), sym_term(gen, 1, dots, false));
      case 2: return mk_test(sym_formula(gen, 0, dots));
      default: return mk_prog_const(kSymA);
    }
  }
  switch (gen.upto(3)) {
    case 0: return sym_program(gen, 0, dots);
    case 1: return mk_choice(sym_program(gen, depth - 1, dots),
                             sym_program(gen, depth - 1, dots));
    default: return mk_compose(sym_program(gen, depth - 1, dots),
                               sym_program(gen, depth - 1, dots));
  }
}

inline USubst random_subst(Gen& gen) {
  auto fbody = [&] {
    Term t = gen.poly(2, false);
    if (gen.coin()) t = mk_plus(t, mk_dot(1));
    if (gen.coin()) t = mk_times(t, mk_dot(1));
    return t;
  };
  auto pbody = [&] {
    CmpOp ops[] = {CmpOp::Ge, CmpOp::Lt, CmpOp::Eq};
    Term lhs = gen.coin() ? mk_dot(1) : mk_plus(mk_dot(1), gen.poly(1, false));
    return mk_cmp(ops[gen.upto(3)], lhs, gen.poly(1, false));
  };
  return USubst({fn_pair("f", 1, fbody()), fn_pair("g", 0, gen.poly(2, false)),
                 pred_pair("p", 1, pbody()), pred_pair("q", 0, gen.qfree(1)),
                 prog_pair("a", gen.discrete(2))});
}

}  // namespace dlgen

#endif
