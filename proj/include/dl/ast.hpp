#ifndef DL_AST_HPP
#define DL_AST_HPP

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dl/rational.hpp"

namespace dl {

// ---------------------------------------------------------------------------
// Identifiers

enum class VarKind { Base, Diff };

// A variable x or its differential symbol x'. The differential symbol is
// determined by its base name, so (name, kind) is the whole identity.
struct VarId {
  std::string name;
  VarKind kind = VarKind::Base;

  bool is_diff() const { return kind == VarKind::Diff; }
  VarId diff() const { return {name, VarKind::Diff}; }
  VarId base() const { return {name, VarKind::Base}; }
  std::string to_string() const { return is_diff() ? name + "'" : name; }

  friend bool operator==(const VarId& a, const VarId& b) {
    return a.kind == b.kind && a.name == b.name;
  }
  friend bool operator!=(const VarId& a, const VarId& b) { return !(a == b); }
  friend bool operator<(const VarId& a, const VarId& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.kind < b.kind;
  }
};

inline VarId base_var(std::string name) { return {std::move(name), VarKind::Base}; }
inline VarId diff_var(std::string name) { return {std::move(name), VarKind::Diff}; }

enum class SymbolSort { Function, Predicate, Predicational, ProgramConst };

// Arity of the all-vars marker f(||) / p(||): an application to the vector of
// all relevant variables.
constexpr int kAllVars = -1;

struct SymbolId {
  std::string name;
  SymbolSort sort = SymbolSort::Function;
  int arity = 0;  // kAllVars for x̄ forms; 0 for predicational / program constant

  bool all_vars() const { return arity == kAllVars; }

  friend bool operator==(const SymbolId& a, const SymbolId& b) {
    return a.sort == b.sort && a.arity == b.arity && a.name == b.name;
  }
  friend bool operator!=(const SymbolId& a, const SymbolId& b) { return !(a == b); }
  friend bool operator<(const SymbolId& a, const SymbolId& b) {
    if (a.name != b.name) return a.name < b.name;
    if (a.sort != b.sort) return a.sort < b.sort;
    return a.arity < b.arity;
  }
};

// Reserved interpreted unary function: |theta| with meaning max(theta, -theta).
// Not part of any signature and never substitutable, like number literals.
inline const std::string kAbsName = "abs";
inline bool is_abs(const SymbolId& s) {
  return s.sort == SymbolSort::Function && s.name == kAbsName && s.arity == 1;
}

// ---------------------------------------------------------------------------
// Terms

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TVar { VarId var; };
struct TNumber { Rational value; };
struct TFuncApp {
  SymbolId sym;
  std::vector<Term> args;  // empty when sym.all_vars()
};
struct TPlus { Term lhs, rhs; };
struct TTimes { Term lhs, rhs; };
struct TDifferential { Term arg; };
struct TDot { int index = 1; };  // 1-based; "." is index 1, ".k" is index k

struct TermNode {
  std::variant<TVar, TNumber, TFuncApp, TPlus, TTimes, TDifferential, TDot> v;
};

Term mk_var(VarId v);
Term mk_num(Rational r);
Term mk_num(std::int64_t n);
Term mk_func(SymbolId sym, std::vector<Term> args);
Term mk_plus(Term a, Term b);
Term mk_times(Term a, Term b);
Term mk_differential(Term a);
Term mk_dot(int index = 1);

// ---------------------------------------------------------------------------
// Formulas and programs (mutually recursive)

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;
struct ProgramNode;
using Program = std::shared_ptr<const ProgramNode>;

enum class CmpOp { Ge, Gt, Le, Lt, Eq, Ne };

struct FCmp { CmpOp op; Term lhs, rhs; };
struct FPredApp {
  SymbolId sym;
  std::vector<Term> args;
};
struct FPredicational {
  SymbolId sym;
  Formula arg;
};
struct FNot { Formula arg; };
struct FAnd { Formula lhs, rhs; };
struct FOr { Formula lhs, rhs; };
struct FImply { Formula lhs, rhs; };
struct FEquiv { Formula lhs, rhs; };
struct FForall { VarId var; Formula body; };
struct FExists { VarId var; Formula body; };
struct FBox { Program prog; Formula post; };
struct FDiamond { Program prog; Formula post; };
struct FBool { bool value; };
struct FDotFormula {};

struct FormulaNode {
  std::variant<FCmp, FPredApp, FPredicational, FNot, FAnd, FOr, FImply, FEquiv,
               FForall, FExists, FBox, FDiamond, FBool, FDotFormula>
      v;
};

struct PProgConst { SymbolId sym; };
struct PAssign { VarId var; Term value; };      // var is a base variable
struct PDiffAssign { VarId var; Term value; };  // var is a differential symbol
struct PTest { Formula cond; };
struct PODE {
  std::vector<std::pair<VarId, Term>> eqs;  // (base variable, right-hand side)
  Formula domain;
};
struct PChoice { Program lhs, rhs; };
struct PCompose { Program lhs, rhs; };
struct PLoop { Program body; };

struct ProgramNode {
  std::variant<PProgConst, PAssign, PDiffAssign, PTest, PODE, PChoice, PCompose, PLoop> v;
};

Formula mk_cmp(CmpOp op, Term a, Term b);
Formula mk_pred(SymbolId sym, std::vector<Term> args);
Formula mk_predicational(SymbolId sym, Formula arg);
Formula mk_not(Formula f);
Formula mk_and(Formula a, Formula b);
Formula mk_or(Formula a, Formula b);
Formula mk_imply(Formula a, Formula b);
Formula mk_equiv(Formula a, Formula b);
Formula mk_forall(VarId v, Formula body);
Formula mk_exists(VarId v, Formula body);
Formula mk_box(Program p, Formula post);
Formula mk_diamond(Program p, Formula post);
Formula mk_bool(bool v);
Formula mk_dot_formula();

Program mk_prog_const(SymbolId sym);
Program mk_assign(VarId v, Term t);
Program mk_diff_assign(VarId v, Term t);
Program mk_test(Formula f);
Program mk_ode(std::vector<std::pair<VarId, Term>> eqs, Formula domain);
Program mk_choice(Program a, Program b);
Program mk_compose(Program a, Program b);
Program mk_loop(Program body);

// ---------------------------------------------------------------------------
// Structural equality (no alpha conversion; renaming is a kernel step)

bool equal(const Term& a, const Term& b);
bool equal(const Formula& a, const Formula& b);
bool equal(const Program& a, const Program& b);

// ---------------------------------------------------------------------------
// Well-formedness

struct Violation {
  std::string path;     // path to the first offending subtree, "." for root
  std::string message;
};

// ok iff every structural invariant holds on every subtree: function/predicate
// arities consistent and matching argument counts, quantifiers binding base
// variables only, assignment targets of the right kind, ODE left-hand sides
// nonempty and pairwise distinct. Total; dots are checked separately.
std::optional<Violation> wellformed(const Term& t);
std::optional<Violation> wellformed(const Formula& f);
std::optional<Violation> wellformed(const Program& p);

// True iff no DotTerm / DotFormula occurs anywhere. Axiom formulas and user
// conjectures must be dot-free; substitution replacement bodies need not be.
bool dot_free(const Term& t);
bool dot_free(const Formula& f);
bool dot_free(const Program& p);

// ---------------------------------------------------------------------------
// Desugaring into the ¬/∧/≥/∃/⟨⟩ core (= and ≠ stay primitive). Idempotent.

Term desugar(const Term& t);
Formula desugar(const Formula& f);
Program desugar(const Program& p);

}  // namespace dl

#endif
