#ifndef DL_USUBST_HPP
#define DL_USUBST_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dl/ast.hpp"
#include "dl/statics.hpp"

namespace dl {

// One replacement: a symbol (function, predicate, predicational, or program
// constant; with numeric arity or the all-vars marker) together with its
// dot-abstracted replacement body of the matching kind.
struct SubstPair {
  SymbolId what;
  Term term_repl;        // functions
  Formula formula_repl;  // predicates and predicationals
  Program program_repl;  // program constants
};

SubstPair fn_pair(const std::string& name, int arity, Term repl);
SubstPair pred_pair(const std::string& name, int arity, Formula repl);
SubstPair predicational_pair(const std::string& name, Formula repl);
SubstPair prog_pair(const std::string& name, Program repl);

class USubst {
public:
  USubst() = default;
  // Validates: no two pairs for the same (name, sort, arity); replacement
  // kinds match sorts; bodies mention only the dots their arity declares.
  // Throws std::invalid_argument otherwise.
  explicit USubst(std::vector<SubstPair> pairs);

  const std::vector<SubstPair>& pairs() const { return pairs_; }
  const SubstPair* find(const SymbolId& sym) const;
  bool empty() const { return pairs_.empty(); }

  std::string to_string() const;

private:
  std::vector<SubstPair> pairs_;
};

// The free variables a substitution introduces, optionally restricted to the
// symbols of one expression:
// the union of the free variables of function and predicate replacement
// bodies. All-vars pairs, predicational pairs and program-constant pairs
// contribute nothing (their replacements' variables enter through x̄ or the
// runtime state).
VarSet fv_subst(const USubst& sigma, const std::optional<Signature>& restrict_to);

// σ is U-admissible for e iff fv(σ restricted to the symbols of e) ∩ U = ∅.
bool admissible(const USubst& sigma, const VarSet& taboo, const Term& e);
bool admissible(const USubst& sigma, const VarSet& taboo, const Formula& e);
bool admissible(const USubst& sigma, const VarSet& taboo, const Program& e);

struct SubstError {
  enum class Kind { Clash, SortMismatch };
  Kind kind = Kind::Clash;
  std::string check;         // which side condition was violated
  std::vector<VarId> taboo;  // offending variables (finite part)
  std::string taboo_desc;    // printable form, covers cofinite intersections
  std::string path;          // subexpression path from the root
  std::string to_string() const;
};

template <class T>
using SubstResult = std::variant<T, SubstError>;

// Recursive substitution application, checking each admissibility side
// condition at its binder during the pass. Clashes are reported as values.
SubstResult<Term> apply(const USubst& sigma, const Term& e);
SubstResult<Formula> apply(const USubst& sigma, const Formula& e);
SubstResult<Program> apply(const USubst& sigma, const Program& e);

// Bound variable renaming. φ must start with ∀x, ∃x, [x:=θ] or <x:=θ>; the
// binder variable becomes y and x is renamed throughout the scope. Fails
// unless y, y' and x' are absent from the scope (x' absence keeps assignment
// renaming sound; the assignment's right-hand side is outside the scope and
// untouched).
std::variant<Formula, std::string> bound_rename(const Formula& f, const VarId& x,
                                                const VarId& y);

}  // namespace dl

#endif
