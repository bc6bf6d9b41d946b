#include "dl/statics.hpp"

#include <sstream>

namespace dl {

VarSet VarSet::union_with(const VarSet& o) const {
  if (!cofinite_ && !o.cofinite_) {
    std::set<VarId> m = members_;
    m.insert(o.members_.begin(), o.members_.end());
    return VarSet(false, std::move(m));
  }
  if (cofinite_ && o.cofinite_) {
    std::set<VarId> m;
    for (const auto& v : members_)
      if (o.members_.count(v)) m.insert(v);
    return VarSet(true, std::move(m));
  }
  // cofinite(S) ∪ finite(F) = cofinite(S \ F)
  const VarSet& cof = cofinite_ ? *this : o;
  const VarSet& fin = cofinite_ ? o : *this;
  std::set<VarId> m;
  for (const auto& v : cof.members_)
    if (!fin.members_.count(v)) m.insert(v);
  return VarSet(true, std::move(m));
}

VarSet VarSet::intersect(const VarSet& o) const {
  return complement().union_with(o.complement()).complement();
}

VarSet VarSet::insert(const VarId& v) const {
  VarSet r = *this;
  if (r.cofinite_)
    r.members_.erase(v);
  else
    r.members_.insert(v);
  return r;
}

VarSet VarSet::erase(const VarId& v) const {
  VarSet r = *this;
  if (r.cofinite_)
    r.members_.insert(v);
  else
    r.members_.erase(v);
  return r;
}

std::string VarSet::to_string() const {
  std::ostringstream os;
  if (cofinite_) os << "allBut";
  os << "{";
  bool first = true;
  for (const auto& v : members_) {
    if (!first) os << ",";
    os << v.to_string();
    first = false;
  }
  os << "}";
  return os.str();
}

VarSet diff_closure(const VarSet& s) {
  if (!s.cofinite()) {
    std::set<VarId> m = s.members();
    for (const auto& v : s.members())
      if (!v.is_diff()) m.insert(v.diff());
    return VarSet::of(std::move(m));
  }
  // complement(S) ∪ {x' : x ∈ complement(S) base}. An element is excluded iff
  // it is in S and (it is a base variable, or it is x' with x also in S).
  std::set<VarId> excl;
  for (const auto& v : s.members()) {
    if (!v.is_diff())
      excl.insert(v);
    else if (s.members().count(v.base()))
      excl.insert(v);
  }
  return VarSet::all_but(std::move(excl));
}

// ---------------------------------------------------------------------------
// Free variables

VarSet fv_term(const Term& t) {
  return std::visit(
      [&](const auto& x) -> VarSet {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TVar>) {
          return VarSet::of({x.var});
        } else if constexpr (std::is_same_v<T, TNumber> || std::is_same_v<T, TDot>) {
          return VarSet::none();
        } else if constexpr (std::is_same_v<T, TFuncApp>) {
          if (x.sym.all_vars()) return VarSet::all();
          VarSet r = VarSet::none();
          for (const auto& a : x.args) r = r.union_with(fv_term(a));
          return r;
        } else if constexpr (std::is_same_v<T, TPlus> || std::is_same_v<T, TTimes>) {
          return fv_term(x.lhs).union_with(fv_term(x.rhs));
        } else {
          // FV((θ)') = FV(θ) ∪ FV(θ)'; the tighter FV(θ)' alone is unsound.
          return diff_closure(fv_term(x.arg));
        }
      },
      t->v);
}

VarSet fv_formula(const Formula& f) {
  return std::visit(
      [&](const auto& x) -> VarSet {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FCmp>) {
          return fv_term(x.lhs).union_with(fv_term(x.rhs));
        } else if constexpr (std::is_same_v<T, FPredApp>) {
          if (x.sym.all_vars()) return VarSet::all();
          VarSet r = VarSet::none();
          for (const auto& a : x.args) r = r.union_with(fv_term(a));
          return r;
        } else if constexpr (std::is_same_v<T, FPredicational>) {
          return VarSet::all();
        } else if constexpr (std::is_same_v<T, FNot>) {
          return fv_formula(x.arg);
        } else if constexpr (std::is_same_v<T, FAnd> || std::is_same_v<T, FOr> ||
                             std::is_same_v<T, FImply> || std::is_same_v<T, FEquiv>) {
          return fv_formula(x.lhs).union_with(fv_formula(x.rhs));
        } else if constexpr (std::is_same_v<T, FForall> || std::is_same_v<T, FExists>) {
          return fv_formula(x.body).erase(x.var);
        } else if constexpr (std::is_same_v<T, FBox> || std::is_same_v<T, FDiamond>) {
          return fv_program(x.prog).union_with(
              fv_formula(x.post).minus(mbv_program(x.prog)));
        } else {
          return VarSet::none();  // true, false, dot formula
        }
      },
      f->v);
}

VarSet fv_program(const Program& p) {
  return std::visit(
      [&](const auto& x) -> VarSet {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PProgConst>) {
          return VarSet::all();
        } else if constexpr (std::is_same_v<T, PAssign> || std::is_same_v<T, PDiffAssign>) {
          return fv_term(x.value);
        } else if constexpr (std::is_same_v<T, PTest>) {
          return fv_formula(x.cond);
        } else if constexpr (std::is_same_v<T, PODE>) {
          // {x} ∪ FV(θ) ∪ FV(ψ); the lhs differential symbols are not read.
          VarSet r = VarSet::none();
          for (const auto& [v, rhs] : x.eqs) r = r.insert(v).union_with(fv_term(rhs));
          return r.union_with(fv_formula(x.domain));
        } else if constexpr (std::is_same_v<T, PChoice>) {
          return fv_program(x.lhs).union_with(fv_program(x.rhs));
        } else if constexpr (std::is_same_v<T, PCompose>) {
          return fv_program(x.lhs).union_with(
              fv_program(x.rhs).minus(mbv_program(x.lhs)));
        } else {
          return fv_program(x.body);
        }
      },
      p->v);
}

// ---------------------------------------------------------------------------
// Bound and must-bound variables

VarSet bv_formula(const Formula& f) {
  return std::visit(
      [&](const auto& x) -> VarSet {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FCmp> || std::is_same_v<T, FPredApp> ||
                      std::is_same_v<T, FBool> || std::is_same_v<T, FDotFormula>) {
          return VarSet::none();
        } else if constexpr (std::is_same_v<T, FPredicational>) {
          return VarSet::all();
        } else if constexpr (std::is_same_v<T, FNot>) {
          return bv_formula(x.arg);
        } else if constexpr (std::is_same_v<T, FAnd> || std::is_same_v<T, FOr> ||
                             std::is_same_v<T, FImply> || std::is_same_v<T, FEquiv>) {
          return bv_formula(x.lhs).union_with(bv_formula(x.rhs));
        } else if constexpr (std::is_same_v<T, FForall> || std::is_same_v<T, FExists>) {
          return bv_formula(x.body).insert(x.var);
        } else {
          return bv_program(x.prog).union_with(bv_formula(x.post));
        }
      },
      f->v);
}

VarSet bv_program(const Program& p) {
  return std::visit(
      [&](const auto& x) -> VarSet {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PProgConst>) {
          return VarSet::all();
        } else if constexpr (std::is_same_v<T, PAssign> || std::is_same_v<T, PDiffAssign>) {
          return VarSet::of({x.var});
        } else if constexpr (std::is_same_v<T, PTest>) {
          return VarSet::none();
        } else if constexpr (std::is_same_v<T, PODE>) {
          VarSet r = VarSet::none();
          for (const auto& [v, rhs] : x.eqs) r = r.insert(v).insert(v.diff());
          return r;
        } else if constexpr (std::is_same_v<T, PChoice> || std::is_same_v<T, PCompose>) {
          return bv_program(x.lhs).union_with(bv_program(x.rhs));
        } else {
          return bv_program(x.body);
        }
      },
      p->v);
}

VarSet mbv_program(const Program& p) {
  return std::visit(
      [&](const auto& x) -> VarSet {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PProgConst>) {
          return VarSet::none();
        } else if constexpr (std::is_same_v<T, PChoice>) {
          return mbv_program(x.lhs).intersect(mbv_program(x.rhs));
        } else if constexpr (std::is_same_v<T, PCompose>) {
          return mbv_program(x.lhs).union_with(mbv_program(x.rhs));
        } else if constexpr (std::is_same_v<T, PLoop>) {
          return VarSet::none();
        } else {
          return bv_program(p);  // other atomic programs
        }
      },
      p->v);
}

// ---------------------------------------------------------------------------
// Signature

namespace {

void sig(const Term& t, Signature& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TFuncApp>) {
          if (!is_abs(x.sym)) out.insert(x.sym);
          for (const auto& a : x.args) sig(a, out);
        } else if constexpr (std::is_same_v<T, TPlus> || std::is_same_v<T, TTimes>) {
          sig(x.lhs, out);
          sig(x.rhs, out);
        } else if constexpr (std::is_same_v<T, TDifferential>) {
          sig(x.arg, out);
        }
      },
      t->v);
}

void sig(const Formula& f, Signature& out);
void sig(const Program& p, Signature& out);

void sig(const Formula& f, Signature& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FCmp>) {
          sig(x.lhs, out);
          sig(x.rhs, out);
        } else if constexpr (std::is_same_v<T, FPredApp>) {
          out.insert(x.sym);
          for (const auto& a : x.args) sig(a, out);
        } else if constexpr (std::is_same_v<T, FPredicational>) {
          out.insert(x.sym);
          sig(x.arg, out);
        } else if constexpr (std::is_same_v<T, FNot>) {
          sig(x.arg, out);
        } else if constexpr (std::is_same_v<T, FAnd> || std::is_same_v<T, FOr> ||
                             std::is_same_v<T, FImply> || std::is_same_v<T, FEquiv>) {
          sig(x.lhs, out);
          sig(x.rhs, out);
        } else if constexpr (std::is_same_v<T, FForall> || std::is_same_v<T, FExists>) {
          sig(x.body, out);
        } else if constexpr (std::is_same_v<T, FBox> || std::is_same_v<T, FDiamond>) {
          sig(x.prog, out);
          sig(x.post, out);
        }
      },
      f->v);
}

void sig(const Program& p, Signature& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PProgConst>) {
          out.insert(x.sym);
        } else if constexpr (std::is_same_v<T, PAssign> || std::is_same_v<T, PDiffAssign>) {
          sig(x.value, out);
        } else if constexpr (std::is_same_v<T, PTest>) {
          sig(x.cond, out);
        } else if constexpr (std::is_same_v<T, PODE>) {
          for (const auto& [v, rhs] : x.eqs) sig(rhs, out);
          sig(x.domain, out);
        } else if constexpr (std::is_same_v<T, PChoice> || std::is_same_v<T, PCompose>) {
          sig(x.lhs, out);
          sig(x.rhs, out);
        } else {
          sig(x.body, out);
        }
      },
      p->v);
}

}  // namespace

Signature signature(const Term& t) {
  Signature s;
  sig(t, s);
  return s;
}
Signature signature(const Formula& f) {
  Signature s;
  sig(f, s);
  return s;
}
Signature signature(const Program& p) {
  Signature s;
  sig(p, s);
  return s;
}

}  // namespace dl
