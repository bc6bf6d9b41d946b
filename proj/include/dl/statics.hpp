#ifndef DL_STATICS_HPP
#define DL_STATICS_HPP

#include <set>
#include <string>

#include "dl/ast.hpp"

namespace dl {

// Finite or cofinite set of variables and differential symbols over the
// unbounded universe V ∪ V'. finite(S) is S itself; cofinite(S) is the
// complement of S. Canonical, so operator== is set equality. All lattice
// operations are total.
class VarSet {
public:
  static VarSet none() { return VarSet(false, {}); }
  static VarSet all() { return VarSet(true, {}); }
  static VarSet of(std::set<VarId> members) { return VarSet(false, std::move(members)); }
  static VarSet of(std::initializer_list<VarId> members) {
    return VarSet(false, std::set<VarId>(members));
  }
  static VarSet all_but(std::set<VarId> members) { return VarSet(true, std::move(members)); }

  bool cofinite() const { return cofinite_; }
  bool is_empty() const { return !cofinite_ && members_.empty(); }
  bool is_top() const { return cofinite_ && members_.empty(); }
  // Finite members, or the exception set when cofinite.
  const std::set<VarId>& members() const { return members_; }

  bool contains(const VarId& v) const {
    bool in = members_.count(v) > 0;
    return cofinite_ ? !in : in;
  }

  VarSet complement() const { return VarSet(!cofinite_, members_); }
  VarSet union_with(const VarSet& o) const;
  VarSet intersect(const VarSet& o) const;
  VarSet minus(const VarSet& o) const { return intersect(o.complement()); }

  bool subset_of(const VarSet& o) const { return minus(o).is_empty(); }
  bool disjoint_from(const VarSet& o) const { return intersect(o).is_empty(); }

  VarSet insert(const VarId& v) const;
  VarSet erase(const VarId& v) const;

  friend bool operator==(const VarSet& a, const VarSet& b) {
    return a.cofinite_ == b.cofinite_ && a.members_ == b.members_;
  }
  friend bool operator!=(const VarSet& a, const VarSet& b) { return !(a == b); }

  std::string to_string() const;

private:
  VarSet(bool cof, std::set<VarId> m) : cofinite_(cof), members_(std::move(m)) {}
  bool cofinite_;
  std::set<VarId> members_;
};

// S ∪ S' where S' = {x' : base x ∈ S}: the closure used by FV((θ)').
VarSet diff_closure(const VarSet& s);

using Signature = std::set<SymbolId>;

// Free variables of terms, formulas and programs.
VarSet fv_term(const Term& t);
VarSet fv_formula(const Formula& f);
VarSet fv_program(const Program& p);

// Bound and must-bound variables.
VarSet bv_formula(const Formula& f);
VarSet bv_program(const Program& p);
VarSet mbv_program(const Program& p);

// All function, predicate, predicational symbols and program constants, with
// every occurrence counting as free. The reserved interpreted |.| is excluded.
Signature signature(const Term& t);
Signature signature(const Formula& f);
Signature signature(const Program& p);

}  // namespace dl

#endif
