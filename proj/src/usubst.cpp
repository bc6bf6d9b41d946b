#include "dl/usubst.hpp"

#include <sstream>
#include <stdexcept>

#include "dl/print.hpp"

namespace dl {

SubstPair fn_pair(const std::string& name, int arity, Term repl) {
  return SubstPair{SymbolId{name, SymbolSort::Function, arity}, std::move(repl), nullptr,
                   nullptr};
}
SubstPair pred_pair(const std::string& name, int arity, Formula repl) {
  return SubstPair{SymbolId{name, SymbolSort::Predicate, arity}, nullptr, std::move(repl),
                   nullptr};
}
SubstPair predicational_pair(const std::string& name, Formula repl) {
  return SubstPair{SymbolId{name, SymbolSort::Predicational, 0}, nullptr, std::move(repl),
                   nullptr};
}
SubstPair prog_pair(const std::string& name, Program repl) {
  return SubstPair{SymbolId{name, SymbolSort::ProgramConst, 0}, nullptr, nullptr,
                   std::move(repl)};
}

namespace {

// Highest dot index occurring, 0 if none; `formula_dots` reports whether a
// DotFormula occurs.
void dot_usage(const Term& t, int& max_index, bool& formula_dots);
void dot_usage(const Formula& f, int& max_index, bool& formula_dots);
void dot_usage(const Program& p, int& max_index, bool& formula_dots);

void dot_usage(const Term& t, int& mi, bool& fd) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TDot>) {
          mi = std::max(mi, x.index);
        } else if constexpr (std::is_same_v<T, TFuncApp>) {
          for (const auto& a : x.args) dot_usage(a, mi, fd);
        } else if constexpr (std::is_same_v<T, TPlus> || std::is_same_v<T, TTimes>) {
          dot_usage(x.lhs, mi, fd);
          dot_usage(x.rhs, mi, fd);
        } else if constexpr (std::is_same_v<T, TDifferential>) {
          dot_usage(x.arg, mi, fd);
        }
      },
      t->v);
}

void dot_usage(const Formula& f, int& mi, bool& fd) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FDotFormula>) {
          fd = true;
        } else if constexpr (std::is_same_v<T, FCmp>) {
          dot_usage(x.lhs, mi, fd);
          dot_usage(x.rhs, mi, fd);
        } else if constexpr (std::is_same_v<T, FPredApp>) {
          for (const auto& a : x.args) dot_usage(a, mi, fd);
        } else if constexpr (std::is_same_v<T, FPredicational>) {
          dot_usage(x.arg, mi, fd);
        } else if constexpr (std::is_same_v<T, FNot>) {
          dot_usage(x.arg, mi, fd);
        } else if constexpr (std::is_same_v<T, FAnd> || std::is_same_v<T, FOr> ||
                             std::is_same_v<T, FImply> || std::is_same_v<T, FEquiv>) {
          dot_usage(x.lhs, mi, fd);
          dot_usage(x.rhs, mi, fd);
        } else if constexpr (std::is_same_v<T, FForall> || std::is_same_v<T, FExists>) {
          dot_usage(x.body, mi, fd);
        } else if constexpr (std::is_same_v<T, FBox> || std::is_same_v<T, FDiamond>) {
          dot_usage(x.prog, mi, fd);
          dot_usage(x.post, mi, fd);
        }
      },
      f->v);
}

void dot_usage(const Program& p, int& mi, bool& fd) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PAssign> || std::is_same_v<T, PDiffAssign>) {
          dot_usage(x.value, mi, fd);
        } else if constexpr (std::is_same_v<T, PTest>) {
          dot_usage(x.cond, mi, fd);
        } else if constexpr (std::is_same_v<T, PODE>) {
          for (const auto& [v, rhs] : x.eqs) dot_usage(rhs, mi, fd);
          dot_usage(x.domain, mi, fd);
        } else if constexpr (std::is_same_v<T, PChoice> || std::is_same_v<T, PCompose>) {
          dot_usage(x.lhs, mi, fd);
          dot_usage(x.rhs, mi, fd);
        } else if constexpr (std::is_same_v<T, PLoop>) {
          dot_usage(x.body, mi, fd);
        }
      },
      p->v);
}

}  // namespace

USubst::USubst(std::vector<SubstPair> pairs) : pairs_(std::move(pairs)) {
  for (size_t i = 0; i < pairs_.size(); ++i) {
    const auto& p = pairs_[i];
    for (size_t j = i + 1; j < pairs_.size(); ++j)
      if (pairs_[j].what == p.what)
        throw std::invalid_argument("duplicate substitution pair for " + p.what.name);
    int mi = 0;
    bool fd = false;
    switch (p.what.sort) {
      case SymbolSort::Function:
        if (!p.term_repl) throw std::invalid_argument("function pair needs a term body");
        dot_usage(p.term_repl, mi, fd);
        break;
      case SymbolSort::Predicate:
        if (!p.formula_repl)
          throw std::invalid_argument("predicate pair needs a formula body");
        dot_usage(p.formula_repl, mi, fd);
        break;
      case SymbolSort::Predicational:
        if (!p.formula_repl)
          throw std::invalid_argument("predicational pair needs a formula body");
        dot_usage(p.formula_repl, mi, fd);
        if (mi > 0)
          throw std::invalid_argument("predicational body must not mention term dots");
        fd = false;  // the formula dot is exactly what a predicational declares
        break;
      case SymbolSort::ProgramConst:
        if (!p.program_repl)
          throw std::invalid_argument("program pair needs a program body");
        dot_usage(p.program_repl, mi, fd);
        break;
    }
    if (fd)
      throw std::invalid_argument("formula dot _ is only allowed in predicational bodies");
    int declared = p.what.all_vars() ? 0 : p.what.arity;
    if (p.what.sort == SymbolSort::Predicational || p.what.sort == SymbolSort::ProgramConst)
      declared = 0;
    if (mi > declared)
      throw std::invalid_argument("replacement for " + p.what.name + " mentions dot ." +
                                  std::to_string(mi) + " beyond arity " +
                                  std::to_string(declared));
  }
}

const SubstPair* USubst::find(const SymbolId& sym) const {
  for (const auto& p : pairs_)
    if (p.what == sym) return &p;
  return nullptr;
}

std::string USubst::to_string() const {
  std::ostringstream os;
  for (size_t i = 0; i < pairs_.size(); ++i) {
    const auto& p = pairs_[i];
    if (i) os << " ";
    os << p.what.name;
    if (p.what.all_vars())
      os << "(||)";
    else if (p.what.sort == SymbolSort::Function || p.what.sort == SymbolSort::Predicate)
      os << "/" << p.what.arity;
    os << " ~> ";
    switch (p.what.sort) {
      case SymbolSort::Function: os << pretty(p.term_repl); break;
      case SymbolSort::Predicate:
      case SymbolSort::Predicational: os << pretty(p.formula_repl); break;
      case SymbolSort::ProgramConst: os << pretty(p.program_repl); break;
    }
  }
  return os.str();
}

VarSet fv_subst(const USubst& sigma, const std::optional<Signature>& restrict_to) {
  VarSet r = VarSet::none();
  for (const auto& p : sigma.pairs()) {
    if (restrict_to && !restrict_to->count(p.what)) continue;
    if (p.what.all_vars()) continue;
    switch (p.what.sort) {
      case SymbolSort::Function:
        r = r.union_with(fv_term(p.term_repl));
        break;
      case SymbolSort::Predicate:
        r = r.union_with(fv_formula(p.formula_repl));
        break;
      default:
        break;  // predicationals and program constants contribute nothing
    }
  }
  return r;
}

bool admissible(const USubst& sigma, const VarSet& taboo, const Term& e) {
  return fv_subst(sigma, signature(e)).disjoint_from(taboo);
}
bool admissible(const USubst& sigma, const VarSet& taboo, const Formula& e) {
  return fv_subst(sigma, signature(e)).disjoint_from(taboo);
}
bool admissible(const USubst& sigma, const VarSet& taboo, const Program& e) {
  return fv_subst(sigma, signature(e)).disjoint_from(taboo);
}

std::string SubstError::to_string() const {
  std::ostringstream os;
  os << (kind == Kind::Clash ? "clash" : "sort mismatch") << ": " << check;
  if (!taboo_desc.empty()) os << ", taboo " << taboo_desc;
  os << ", at " << (path.empty() ? "." : path);
  return os.str();
}

// ---------------------------------------------------------------------------
// The recursive substitution engine. Runs in one of three modes: a symbol
// substitution σ, the
// internal dot substitution {·i ↦ θi} used for instantiating function and
// predicate arguments, or the internal formula-dot substitution {_ ↦ ψ} used
// for predicational arguments.

namespace {

struct ClashException {
  SubstError error;
};

class Engine {
public:
  enum class Mode { Symbols, Dots, FormulaDot };

  static Engine symbols(const USubst& s) {
    Engine e(Mode::Symbols);
    e.sigma_ = &s;
    return e;
  }
  static Engine dots(std::vector<Term> args) {
    Engine e(Mode::Dots);
    e.dot_args_ = std::move(args);
    return e;
  }
  static Engine formula_dot(Formula f) {
    Engine e(Mode::FormulaDot);
    e.dot_formula_ = std::move(f);
    return e;
  }

  Term run(const Term& t, const std::string& path) { return term(t, path); }
  Formula run(const Formula& f, const std::string& path) { return formula(f, path); }
  Program run(const Program& p, const std::string& path) { return program(p, path); }

private:
  explicit Engine(Mode m) : mode_(m) {}
  Mode mode_;
  const USubst* sigma_ = nullptr;
  std::vector<Term> dot_args_;
  Formula dot_formula_;

  // FV of this substitution restricted to the symbols (or dots) of e.
  template <class E>
  VarSet fv_restricted(const E& e) const {
    switch (mode_) {
      case Mode::Symbols:
        return fv_subst(*sigma_, signature(e));
      case Mode::Dots: {
        int mi = 0;
        bool fd = false;
        dot_usage(e, mi, fd);
        VarSet r = VarSet::none();
        for (int i = 1; i <= mi && i <= static_cast<int>(dot_args_.size()); ++i)
          r = r.union_with(fv_term(dot_args_[i - 1]));
        return r;
      }
      case Mode::FormulaDot:
        return VarSet::none();
    }
    return VarSet::none();
  }

  template <class E>
  void require(const VarSet& taboo, const E& e, const std::string& check,
               const std::string& path) const {
    VarSet inter = fv_restricted(e).intersect(taboo);
    if (inter.is_empty()) return;
    SubstError err;
    err.kind = SubstError::Kind::Clash;
    err.check = check;
    err.taboo_desc = inter.to_string();
    if (!inter.cofinite())
      err.taboo = std::vector<VarId>(inter.members().begin(), inter.members().end());
    err.path = path;
    throw ClashException{err};
  }

  Term term(const Term& t, const std::string& path) {
    return std::visit(
        [&](const auto& x) -> Term {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, TVar> || std::is_same_v<T, TNumber>) {
            return t;
          } else if constexpr (std::is_same_v<T, TDot>) {
            if (mode_ == Mode::Dots) {
              if (x.index < 1 || x.index > static_cast<int>(dot_args_.size()))
                return t;
              return dot_args_[x.index - 1];
            }
            return t;
          } else if constexpr (std::is_same_v<T, TFuncApp>) {
            std::vector<Term> sargs;
            sargs.reserve(x.args.size());
            for (size_t i = 0; i < x.args.size(); ++i)
              sargs.push_back(term(x.args[i], path + "." + std::to_string(i)));
            if (mode_ == Mode::Symbols) {
              if (const SubstPair* p = sigma_->find(x.sym)) {
                if (x.sym.all_vars() || x.sym.arity == 0) return p->term_repl;
                return Engine::dots(std::move(sargs)).run(p->term_repl, path);
              }
            }
            return mk_func(x.sym, std::move(sargs));
          } else if constexpr (std::is_same_v<T, TPlus>) {
            return mk_plus(term(x.lhs, path + ".0"), term(x.rhs, path + ".1"));
          } else if constexpr (std::is_same_v<T, TTimes>) {
            return mk_times(term(x.lhs, path + ".0"), term(x.rhs, path + ".1"));
          } else {
            // (θ)': substitution must not introduce any variable at all
            require(VarSet::all(), x.arg, "differential (V ∪ V' taboo)", path);
            return mk_differential(term(x.arg, path + ".0"));
          }
        },
        t->v);
  }

  Formula formula(const Formula& f, const std::string& path) {
    return std::visit(
        [&](const auto& x) -> Formula {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, FCmp>) {
            return mk_cmp(x.op, term(x.lhs, path + ".0"), term(x.rhs, path + ".1"));
          } else if constexpr (std::is_same_v<T, FPredApp>) {
            std::vector<Term> sargs;
            sargs.reserve(x.args.size());
            for (size_t i = 0; i < x.args.size(); ++i)
              sargs.push_back(term(x.args[i], path + "." + std::to_string(i)));
            if (mode_ == Mode::Symbols) {
              if (const SubstPair* p = sigma_->find(x.sym)) {
                if (x.sym.all_vars() || x.sym.arity == 0) return p->formula_repl;
                return Engine::dots(std::move(sargs)).run(p->formula_repl, path);
              }
            }
            return mk_pred(x.sym, std::move(sargs));
          } else if constexpr (std::is_same_v<T, FPredicational>) {
            require(VarSet::all(), x.arg, "predicational (V ∪ V' taboo)", path);
            Formula sarg = formula(x.arg, path + ".0");
            if (mode_ == Mode::Symbols) {
              if (const SubstPair* p = sigma_->find(x.sym))
                return Engine::formula_dot(std::move(sarg)).run(p->formula_repl, path);
            }
            return mk_predicational(x.sym, std::move(sarg));
          } else if constexpr (std::is_same_v<T, FNot>) {
            return mk_not(formula(x.arg, path + ".0"));
          } else if constexpr (std::is_same_v<T, FAnd>) {
            return mk_and(formula(x.lhs, path + ".0"), formula(x.rhs, path + ".1"));
          } else if constexpr (std::is_same_v<T, FOr>) {
            return mk_or(formula(x.lhs, path + ".0"), formula(x.rhs, path + ".1"));
          } else if constexpr (std::is_same_v<T, FImply>) {
            return mk_imply(formula(x.lhs, path + ".0"), formula(x.rhs, path + ".1"));
          } else if constexpr (std::is_same_v<T, FEquiv>) {
            return mk_equiv(formula(x.lhs, path + ".0"), formula(x.rhs, path + ".1"));
          } else if constexpr (std::is_same_v<T, FForall> || std::is_same_v<T, FExists>) {
            require(VarSet::of({x.var}), x.body, "quantifier binding " + x.var.to_string(),
                    path);
            Formula body = formula(x.body, path + ".0");
            if constexpr (std::is_same_v<T, FForall>)
              return mk_forall(x.var, std::move(body));
            else
              return mk_exists(x.var, std::move(body));
          } else if constexpr (std::is_same_v<T, FBox> || std::is_same_v<T, FDiamond>) {
            Program sprog = program(x.prog, path + ".0");
            require(bv_program(sprog), x.post, "modality postcondition", path);
            Formula spost = formula(x.post, path + ".postcondition");
            if constexpr (std::is_same_v<T, FBox>)
              return mk_box(std::move(sprog), std::move(spost));
            else
              return mk_diamond(std::move(sprog), std::move(spost));
          } else if constexpr (std::is_same_v<T, FDotFormula>) {
            if (mode_ == Mode::FormulaDot) return dot_formula_;
            return f;
          } else {
            return f;
          }
        },
        f->v);
  }

  Program program(const Program& p, const std::string& path) {
    return std::visit(
        [&](const auto& x) -> Program {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, PProgConst>) {
            if (mode_ == Mode::Symbols) {
              if (const SubstPair* sp = sigma_->find(x.sym)) return sp->program_repl;
            }
            return p;
          } else if constexpr (std::is_same_v<T, PAssign>) {
            return mk_assign(x.var, term(x.value, path + ".0"));
          } else if constexpr (std::is_same_v<T, PDiffAssign>) {
            return mk_diff_assign(x.var, term(x.value, path + ".0"));
          } else if constexpr (std::is_same_v<T, PTest>) {
            return mk_test(formula(x.cond, path + ".0"));
          } else if constexpr (std::is_same_v<T, PODE>) {
            VarSet taboo = VarSet::none();
            for (const auto& [v, rhs] : x.eqs) taboo = taboo.insert(v).insert(v.diff());
            std::vector<std::pair<VarId, Term>> eqs;
            for (size_t i = 0; i < x.eqs.size(); ++i) {
              require(taboo, x.eqs[i].second, "ode binding " + taboo.to_string(), path);
              eqs.emplace_back(x.eqs[i].first,
                               term(x.eqs[i].second, path + "." + std::to_string(i)));
            }
            require(taboo, x.domain, "ode binding " + taboo.to_string(), path);
            return mk_ode(std::move(eqs), formula(x.domain, path + ".domain"));
          } else if constexpr (std::is_same_v<T, PChoice>) {
            return mk_choice(program(x.lhs, path + ".0"), program(x.rhs, path + ".1"));
          } else if constexpr (std::is_same_v<T, PCompose>) {
            Program slhs = program(x.lhs, path + ".0");
            require(bv_program(slhs), x.rhs, "composition tail", path);
            return mk_compose(std::move(slhs), program(x.rhs, path + ".1"));
          } else {
            Program sbody = program(x.body, path + ".0");
            require(bv_program(sbody), x.body, "loop body", path);
            return mk_loop(std::move(sbody));
          }
        },
        p->v);
  }
};

template <class E>
SubstResult<E> apply_impl(const USubst& sigma, const E& e) {
  try {
    return Engine::symbols(sigma).run(e, "");
  } catch (const ClashException& c) {
    return c.error;
  }
}

}  // namespace

SubstResult<Term> apply(const USubst& sigma, const Term& e) { return apply_impl(sigma, e); }
SubstResult<Formula> apply(const USubst& sigma, const Formula& e) {
  return apply_impl(sigma, e);
}
SubstResult<Program> apply(const USubst& sigma, const Program& e) {
  return apply_impl(sigma, e);
}

// ---------------------------------------------------------------------------
// Bound variable renaming

namespace {

// Occurrence scan; an ODE equation for x counts as an occurrence of both x
// and x', a differential assignment to x' as an occurrence of x'.
bool occurs(const VarId& v, const Term& t);
bool occurs(const VarId& v, const Formula& f);
bool occurs(const VarId& v, const Program& p);

bool occurs(const VarId& v, const Term& t) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TVar>) return x.var == v;
        else if constexpr (std::is_same_v<T, TFuncApp>) {
          for (const auto& a : x.args)
            if (occurs(v, a)) return true;
          return false;
        } else if constexpr (std::is_same_v<T, TPlus> || std::is_same_v<T, TTimes>)
          return occurs(v, x.lhs) || occurs(v, x.rhs);
        else if constexpr (std::is_same_v<T, TDifferential>)
          return occurs(v, x.arg);
        else
          return false;
      },
      t->v);
}

bool occurs(const VarId& v, const Formula& f) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FCmp>) return occurs(v, x.lhs) || occurs(v, x.rhs);
        else if constexpr (std::is_same_v<T, FPredApp>) {
          for (const auto& a : x.args)
            if (occurs(v, a)) return true;
          return false;
        } else if constexpr (std::is_same_v<T, FPredicational>) return occurs(v, x.arg);
        else if constexpr (std::is_same_v<T, FNot>) return occurs(v, x.arg);
        else if constexpr (std::is_same_v<T, FAnd> || std::is_same_v<T, FOr> ||
                           std::is_same_v<T, FImply> || std::is_same_v<T, FEquiv>)
          return occurs(v, x.lhs) || occurs(v, x.rhs);
        else if constexpr (std::is_same_v<T, FForall> || std::is_same_v<T, FExists>)
          return x.var == v || occurs(v, x.body);
        else if constexpr (std::is_same_v<T, FBox> || std::is_same_v<T, FDiamond>)
          return occurs(v, x.prog) || occurs(v, x.post);
        else
          return false;
      },
      f->v);
}

bool occurs(const VarId& v, const Program& p) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PProgConst>) return false;
        else if constexpr (std::is_same_v<T, PAssign> || std::is_same_v<T, PDiffAssign>)
          return x.var == v || occurs(v, x.value);
        else if constexpr (std::is_same_v<T, PTest>) return occurs(v, x.cond);
        else if constexpr (std::is_same_v<T, PODE>) {
          for (const auto& [w, rhs] : x.eqs)
            if (w == v || w.diff() == v || occurs(v, rhs)) return true;
          return occurs(v, x.domain);
        } else if constexpr (std::is_same_v<T, PChoice> || std::is_same_v<T, PCompose>)
          return occurs(v, x.lhs) || occurs(v, x.rhs);
        else
          return occurs(v, x.body);
      },
      p->v);
}

// Does any ODE in the expression evolve x? Such an ODE binds x and x'
// together, and an x-only transposition would strand the x' occurrences in
// its scope.
bool ode_binds(const VarId& x, const Formula& f);
bool ode_binds(const VarId& x, const Program& p);

bool ode_binds(const VarId& x, const Formula& f) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FPredicational>) return ode_binds(x, n.arg);
        else if constexpr (std::is_same_v<T, FNot>) return ode_binds(x, n.arg);
        else if constexpr (std::is_same_v<T, FAnd> || std::is_same_v<T, FOr> ||
                           std::is_same_v<T, FImply> || std::is_same_v<T, FEquiv>)
          return ode_binds(x, n.lhs) || ode_binds(x, n.rhs);
        else if constexpr (std::is_same_v<T, FForall> || std::is_same_v<T, FExists>)
          return ode_binds(x, n.body);
        else if constexpr (std::is_same_v<T, FBox> || std::is_same_v<T, FDiamond>)
          return ode_binds(x, n.prog) || ode_binds(x, n.post);
        else
          return false;
      },
      f->v);
}

bool ode_binds(const VarId& x, const Program& p) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PTest>) return ode_binds(x, n.cond);
        else if constexpr (std::is_same_v<T, PODE>) {
          for (const auto& [v, rhs] : n.eqs)
            if (v == x) return true;
          return ode_binds(x, n.domain);
        } else if constexpr (std::is_same_v<T, PChoice> || std::is_same_v<T, PCompose>)
          return ode_binds(x, n.lhs) || ode_binds(x, n.rhs);
        else if constexpr (std::is_same_v<T, PLoop>)
          return ode_binds(x, n.body);
        else
          return false;
      },
      p->v);
}

Term rename_var(const Term& t, const VarId& x, const VarId& y);
Formula rename_var(const Formula& f, const VarId& x, const VarId& y);
Program rename_var(const Program& p, const VarId& x, const VarId& y);

Term rename_var(const Term& t, const VarId& x, const VarId& y) {
  return std::visit(
      [&](const auto& n) -> Term {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TVar>) return n.var == x ? mk_var(y) : t;
        else if constexpr (std::is_same_v<T, TFuncApp>) {
          std::vector<Term> args;
          for (const auto& a : n.args) args.push_back(rename_var(a, x, y));
          return mk_func(n.sym, std::move(args));
        } else if constexpr (std::is_same_v<T, TPlus>)
          return mk_plus(rename_var(n.lhs, x, y), rename_var(n.rhs, x, y));
        else if constexpr (std::is_same_v<T, TTimes>)
          return mk_times(rename_var(n.lhs, x, y), rename_var(n.rhs, x, y));
        else if constexpr (std::is_same_v<T, TDifferential>)
          return mk_differential(rename_var(n.arg, x, y));
        else
          return t;
      },
      t->v);
}

Formula rename_var(const Formula& f, const VarId& x, const VarId& y) {
  return std::visit(
      [&](const auto& n) -> Formula {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FCmp>)
          return mk_cmp(n.op, rename_var(n.lhs, x, y), rename_var(n.rhs, x, y));
        else if constexpr (std::is_same_v<T, FPredApp>) {
          std::vector<Term> args;
          for (const auto& a : n.args) args.push_back(rename_var(a, x, y));
          return mk_pred(n.sym, std::move(args));
        } else if constexpr (std::is_same_v<T, FPredicational>)
          return mk_predicational(n.sym, rename_var(n.arg, x, y));
        else if constexpr (std::is_same_v<T, FNot>)
          return mk_not(rename_var(n.arg, x, y));
        else if constexpr (std::is_same_v<T, FAnd>)
          return mk_and(rename_var(n.lhs, x, y), rename_var(n.rhs, x, y));
        else if constexpr (std::is_same_v<T, FOr>)
          return mk_or(rename_var(n.lhs, x, y), rename_var(n.rhs, x, y));
        else if constexpr (std::is_same_v<T, FImply>)
          return mk_imply(rename_var(n.lhs, x, y), rename_var(n.rhs, x, y));
        else if constexpr (std::is_same_v<T, FEquiv>)
          return mk_equiv(rename_var(n.lhs, x, y), rename_var(n.rhs, x, y));
        else if constexpr (std::is_same_v<T, FForall>)
          return mk_forall(n.var == x ? y : n.var, rename_var(n.body, x, y));
        else if constexpr (std::is_same_v<T, FExists>)
          return mk_exists(n.var == x ? y : n.var, rename_var(n.body, x, y));
        else if constexpr (std::is_same_v<T, FBox>)
          return mk_box(rename_var(n.prog, x, y), rename_var(n.post, x, y));
        else if constexpr (std::is_same_v<T, FDiamond>)
          return mk_diamond(rename_var(n.prog, x, y), rename_var(n.post, x, y));
        else
          return f;
      },
      f->v);
}

Program rename_var(const Program& p, const VarId& x, const VarId& y) {
  return std::visit(
      [&](const auto& n) -> Program {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PProgConst>) return p;
        else if constexpr (std::is_same_v<T, PAssign>)
          return mk_assign(n.var == x ? y : n.var, rename_var(n.value, x, y));
        else if constexpr (std::is_same_v<T, PDiffAssign>)
          return mk_diff_assign(n.var, rename_var(n.value, x, y));
        else if constexpr (std::is_same_v<T, PTest>)
          return mk_test(rename_var(n.cond, x, y));
        else if constexpr (std::is_same_v<T, PODE>) {
          std::vector<std::pair<VarId, Term>> eqs;
          for (const auto& [w, rhs] : n.eqs)
            eqs.emplace_back(w == x ? y : w, rename_var(rhs, x, y));
          return mk_ode(std::move(eqs), rename_var(n.domain, x, y));
        } else if constexpr (std::is_same_v<T, PChoice>)
          return mk_choice(rename_var(n.lhs, x, y), rename_var(n.rhs, x, y));
        else if constexpr (std::is_same_v<T, PCompose>)
          return mk_compose(rename_var(n.lhs, x, y), rename_var(n.rhs, x, y));
        else
          return mk_loop(rename_var(n.body, x, y));
      },
      p->v);
}

}  // namespace

std::variant<Formula, std::string> bound_rename(const Formula& f, const VarId& x,
                                                const VarId& y) {
  if (x.is_diff() || y.is_diff()) return std::string("rename works on base variables");
  if (x == y) return std::string("rename to the same variable");

  Formula scope;
  enum { Quant, Assign } shape;
  if (const auto* fa = std::get_if<FForall>(&f->v); fa && fa->var == x) {
    scope = fa->body;
    shape = Quant;
  } else if (const auto* fe = std::get_if<FExists>(&f->v); fe && fe->var == x) {
    scope = fe->body;
    shape = Quant;
  } else if (const auto* fb = std::get_if<FBox>(&f->v)) {
    const auto* as = std::get_if<PAssign>(&fb->prog->v);
    if (!as || as->var != x)
      return std::string("top connective does not bind " + x.to_string());
    scope = fb->post;
    shape = Assign;
  } else if (const auto* fd = std::get_if<FDiamond>(&f->v)) {
    const auto* as = std::get_if<PAssign>(&fd->prog->v);
    if (!as || as->var != x)
      return std::string("top connective does not bind " + x.to_string());
    scope = fd->post;
    shape = Assign;
  } else {
    return std::string("top connective is not a supported binder of " + x.to_string());
  }

  if (occurs(y, scope)) return std::string(y.to_string() + " is not fresh in the scope");
  if (occurs(y.diff(), scope))
    return std::string(y.diff().to_string() + " is not fresh in the scope");
  // Free reads of x' and assignments to x' survive an x-transposition, but a
  // differential equation for x binds x and x' together and is not renamed.
  if (ode_binds(x, scope))
    return std::string("a differential equation for " + x.to_string() +
                       " occurs in the scope; ODE binder renaming is not supported");
  if (shape == Assign && occurs(x.diff(), scope))
    return std::string(x.diff().to_string() +
                       " occurs in the scope of an assignment binder; it is not renamed");

  Formula renamed = rename_var(scope, x, y);
  if (const auto* fa = std::get_if<FForall>(&f->v); fa && fa->var == x)
    return mk_forall(y, renamed);
  if (const auto* fe = std::get_if<FExists>(&f->v); fe && fe->var == x)
    return mk_exists(y, renamed);
  if (const auto* fb = std::get_if<FBox>(&f->v)) {
    const auto& as = std::get<PAssign>(fb->prog->v);
    return mk_box(mk_assign(y, as.value), renamed);  // rhs is outside the scope
  }
  const auto& fd = std::get<FDiamond>(f->v);
  const auto& as = std::get<PAssign>(fd.prog->v);
  return mk_diamond(mk_assign(y, as.value), renamed);
}

}  // namespace dl
