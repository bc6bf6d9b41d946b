#include "dl/kernel.hpp"

#include <sys/wait.h>

#include <csignal>

#include <cstdio>
#include <map>
#include <random>
#include <set>

#include "dl/axioms.hpp"
#include "dl/parse.hpp"
#include "dl/print.hpp"
#include "dl/semantics.hpp"
#include "dl/statics.hpp"

namespace dl {

ProofNodePtr pn_axiom(std::string name) {
  return std::make_shared<ProofNode>(ProofNode{PnAxiom{std::move(name)}});
}
ProofNodePtr pn_us(USubst s, ProofNodePtr child) {
  return std::make_shared<ProofNode>(ProofNode{PnUS{std::move(s), std::move(child)}});
}
ProofNodePtr pn_rule(std::string name, USubst s, std::vector<ProofNodePtr> children) {
  return std::make_shared<ProofNode>(
      ProofNode{PnRuleApp{std::move(name), std::move(s), std::move(children)}});
}
ProofNodePtr pn_mp(ProofNodePtr l, ProofNodePtr r) {
  return std::make_shared<ProofNode>(ProofNode{PnMP{std::move(l), std::move(r)}});
}
ProofNodePtr pn_rename(VarId from, VarId to, ProofNodePtr child) {
  return std::make_shared<ProofNode>(
      ProofNode{PnRename{std::move(from), std::move(to), std::move(child)}});
}
ProofNodePtr pn_arith(Formula claim) {
  return std::make_shared<ProofNode>(ProofNode{PnArith{std::move(claim)}});
}
ProofNodePtr pn_ref(std::string label) {
  return std::make_shared<ProofNode>(ProofNode{PnRef{std::move(label)}});
}
ProofNodePtr pn_let(std::string label, ProofNodePtr bound, ProofNodePtr body) {
  return std::make_shared<ProofNode>(
      ProofNode{PnLet{std::move(label), std::move(bound), std::move(body)}});
}

// ---------------------------------------------------------------------------
// First-order glue certificate: propositional reasoning over opaque atoms,
// plus ground equality with congruence. Sound and deterministic; anything it
// cannot certify falls through to the oracle path.

namespace {

struct AtomTable {
  std::vector<Formula> atoms;

  int index_of(const Formula& f) {
    for (size_t i = 0; i < atoms.size(); ++i)
      if (equal(atoms[i], f)) return static_cast<int>(i);
    atoms.push_back(f);
    return static_cast<int>(atoms.size()) - 1;
  }
};


void collect_atoms(const Formula& f, AtomTable& table) {
  if (const auto* n = std::get_if<FNot>(&f->v)) return collect_atoms(n->arg, table);
  if (const auto* n = std::get_if<FAnd>(&f->v)) {
    collect_atoms(n->lhs, table);
    collect_atoms(n->rhs, table);
    return;
  }
  if (const auto* n = std::get_if<FOr>(&f->v)) {
    collect_atoms(n->lhs, table);
    collect_atoms(n->rhs, table);
    return;
  }
  if (const auto* n = std::get_if<FImply>(&f->v)) {
    collect_atoms(n->lhs, table);
    collect_atoms(n->rhs, table);
    return;
  }
  if (const auto* n = std::get_if<FEquiv>(&f->v)) {
    collect_atoms(n->lhs, table);
    collect_atoms(n->rhs, table);
    return;
  }
  if (std::holds_alternative<FBool>(f->v)) return;
  table.index_of(f);
}

bool eval_bool(const Formula& f, AtomTable& table, const std::vector<bool>& assign) {
  if (const auto* n = std::get_if<FNot>(&f->v)) return !eval_bool(n->arg, table, assign);
  if (const auto* n = std::get_if<FAnd>(&f->v))
    return eval_bool(n->lhs, table, assign) && eval_bool(n->rhs, table, assign);
  if (const auto* n = std::get_if<FOr>(&f->v))
    return eval_bool(n->lhs, table, assign) || eval_bool(n->rhs, table, assign);
  if (const auto* n = std::get_if<FImply>(&f->v))
    return !eval_bool(n->lhs, table, assign) || eval_bool(n->rhs, table, assign);
  if (const auto* n = std::get_if<FEquiv>(&f->v))
    return eval_bool(n->lhs, table, assign) == eval_bool(n->rhs, table, assign);
  if (const auto* n = std::get_if<FBool>(&f->v)) return n->value;
  return assign[table.index_of(f)];
}

// Congruence closure over the ground terms appearing in comparison and
// predicate atoms. Subterm DAG with union-find.
class Congruence {
public:
  explicit Congruence(const std::vector<Formula>& atoms) {
    for (const auto& a : atoms) {
      if (const auto* c = std::get_if<FCmp>(&a->v)) {
        AtomSig s;
        s.head = "cmp:" + std::to_string(static_cast<int>(c->op));
        s.args = {intern(c->lhs), intern(c->rhs)};
        s.is_eq = c->op == CmpOp::Eq;
        s.is_ne = c->op == CmpOp::Ne;
        sigs_.push_back(s);
      } else if (const auto* pa = std::get_if<FPredApp>(&a->v)) {
        AtomSig s;
        s.head = "pred:" + pa->sym.name + "/" + std::to_string(pa->sym.arity);
        for (const auto& t : pa->args) s.args.push_back(intern(t));
        sigs_.push_back(s);
      } else {
        sigs_.push_back(AtomSig{});  // opaque: no congruence information
      }
    }
  }

  // Is there a consistent ground-equality model for this truth assignment?
  bool consistent(const std::vector<bool>& assign) {
    parent_.assign(nodes_.size(), 0);
    for (size_t i = 0; i < nodes_.size(); ++i) parent_[i] = static_cast<int>(i);
    for (size_t a = 0; a < sigs_.size(); ++a) {
      const auto& s = sigs_[a];
      if (s.is_eq && assign[a]) merge(s.args[0], s.args[1]);
      if (s.is_ne && !assign[a]) merge(s.args[0], s.args[1]);
    }
    close();
    for (size_t a = 0; a < sigs_.size(); ++a) {
      const auto& s = sigs_[a];
      if (s.is_eq && !assign[a] && find(s.args[0]) == find(s.args[1])) return false;
      if (s.is_ne && assign[a] && find(s.args[0]) == find(s.args[1])) return false;
    }
    // congruent applications of the same head must agree
    for (size_t a = 0; a < sigs_.size(); ++a) {
      for (size_t b = a + 1; b < sigs_.size(); ++b) {
        const auto& sa = sigs_[a];
        const auto& sb = sigs_[b];
        if (sa.head.empty() || sa.head != sb.head || sa.args.size() != sb.args.size())
          continue;
        bool cong = true;
        for (size_t i = 0; cong && i < sa.args.size(); ++i)
          cong = find(sa.args[i]) == find(sb.args[i]);
        if (cong && assign[a] != assign[b]) return false;
      }
    }
    return true;
  }

private:
  struct Node {
    std::string head;        // operator / symbol / literal tag
    std::vector<int> kids;
    Term term;
  };
  struct AtomSig {
    std::string head;  // empty = opaque
    std::vector<int> args;
    bool is_eq = false;
    bool is_ne = false;
  };

  std::vector<Node> nodes_;
  std::vector<AtomSig> sigs_;
  std::vector<int> parent_;

  int intern(const Term& t) {
    Node n;
    n.term = t;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, TVar>) {
            n.head = "var:" + x.var.to_string();
          } else if constexpr (std::is_same_v<T, TNumber>) {
            n.head = "num:" + x.value.to_string();
          } else if constexpr (std::is_same_v<T, TDot>) {
            n.head = "dot:" + std::to_string(x.index);
          } else if constexpr (std::is_same_v<T, TFuncApp>) {
            n.head = "fn:" + x.sym.name + "/" + std::to_string(x.sym.arity);
            for (const auto& a : x.args) n.kids.push_back(intern(a));
          } else if constexpr (std::is_same_v<T, TPlus>) {
            n.head = "+";
            n.kids = {intern(x.lhs), intern(x.rhs)};
          } else if constexpr (std::is_same_v<T, TTimes>) {
            n.head = "*";
            n.kids = {intern(x.lhs), intern(x.rhs)};
          } else {
            n.head = "'";
            n.kids = {intern(x.arg)};
          }
        },
        t->v);
    for (size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].head == n.head && nodes_[i].kids == n.kids)
        return static_cast<int>(i);
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  int find(int a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void merge(int a, int b) { parent_[find(a)] = find(b); }

  void close() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i < nodes_.size(); ++i) {
        for (size_t j = i + 1; j < nodes_.size(); ++j) {
          if (nodes_[i].head != nodes_[j].head || nodes_[i].kids.size() != nodes_[j].kids.size())
            continue;
          if (find(static_cast<int>(i)) == find(static_cast<int>(j))) continue;
          bool cong = true;
          for (size_t k = 0; cong && k < nodes_[i].kids.size(); ++k)
            cong = find(nodes_[i].kids[k]) == find(nodes_[j].kids[k]);
          if (cong) {
            merge(static_cast<int>(i), static_cast<int>(j));
            changed = true;
          }
        }
      }
    }
  }
};

}  // namespace

bool fol_certified(const Formula& claim) {
  AtomTable table;
  collect_atoms(claim, table);
  size_t n = table.atoms.size();
  if (n > 12) return false;  // beyond glue size; leave to the oracle
  Congruence cc(table.atoms);
  std::vector<bool> assign(n, false);
  for (std::uint64_t bits = 0; bits < (1ull << n); ++bits) {
    for (size_t i = 0; i < n; ++i) assign[i] = (bits >> i) & 1;
    if (eval_bool(claim, table, assign)) continue;
    if (cc.consistent(assign)) return false;  // a genuine countermodel shape
  }
  return true;
}

// ---------------------------------------------------------------------------
// check()

namespace {

void collect_vars_occurring(const Formula& f, std::set<VarId>& out);
void collect_vars_occurring(const Term& t, std::set<VarId>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TVar>) out.insert(x.var);
        else if constexpr (std::is_same_v<T, TFuncApp>) {
          for (const auto& a : x.args) collect_vars_occurring(a, out);
        } else if constexpr (std::is_same_v<T, TPlus> || std::is_same_v<T, TTimes>) {
          collect_vars_occurring(x.lhs, out);
          collect_vars_occurring(x.rhs, out);
        } else if constexpr (std::is_same_v<T, TDifferential>) {
          collect_vars_occurring(x.arg, out);
        }
      },
      t->v);
}
void collect_vars_occurring(const Program& p, std::set<VarId>& out);
void collect_vars_occurring(const Formula& f, std::set<VarId>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FCmp>) {
          collect_vars_occurring(x.lhs, out);
          collect_vars_occurring(x.rhs, out);
        } else if constexpr (std::is_same_v<T, FPredApp>) {
          for (const auto& a : x.args) collect_vars_occurring(a, out);
        } else if constexpr (std::is_same_v<T, FPredicational>) {
          collect_vars_occurring(x.arg, out);
        } else if constexpr (std::is_same_v<T, FNot>) {
          collect_vars_occurring(x.arg, out);
        } else if constexpr (std::is_same_v<T, FAnd> || std::is_same_v<T, FOr> ||
                             std::is_same_v<T, FImply> || std::is_same_v<T, FEquiv>) {
          collect_vars_occurring(x.lhs, out);
          collect_vars_occurring(x.rhs, out);
        } else if constexpr (std::is_same_v<T, FForall> || std::is_same_v<T, FExists>) {
          out.insert(x.var);
          collect_vars_occurring(x.body, out);
        } else if constexpr (std::is_same_v<T, FBox> || std::is_same_v<T, FDiamond>) {
          collect_vars_occurring(x.prog, out);
          collect_vars_occurring(x.post, out);
        }
      },
      f->v);
}
void collect_vars_occurring(const Program& p, std::set<VarId>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PAssign> || std::is_same_v<T, PDiffAssign>) {
          out.insert(x.var);
          collect_vars_occurring(x.value, out);
        } else if constexpr (std::is_same_v<T, PTest>) {
          collect_vars_occurring(x.cond, out);
        } else if constexpr (std::is_same_v<T, PODE>) {
          for (const auto& [v, rhs] : x.eqs) {
            out.insert(v);
            out.insert(v.diff());
            collect_vars_occurring(rhs, out);
          }
          collect_vars_occurring(x.domain, out);
        } else if constexpr (std::is_same_v<T, PChoice> || std::is_same_v<T, PCompose>) {
          collect_vars_occurring(x.lhs, out);
          collect_vars_occurring(x.rhs, out);
        } else if constexpr (std::is_same_v<T, PLoop>) {
          collect_vars_occurring(x.body, out);
        }
      },
      p->v);
}

class Checker {
public:
  explicit Checker(const CheckOptions& opts) : opts_(opts) {}

  Provable run(const ProofNodePtr& node) { return visit(node, ""); }

private:
  const CheckOptions& opts_;
  std::vector<std::pair<std::string, Provable>> lets_;

  static void merge_obligations(std::vector<Formula>& into, const std::vector<Formula>& from) {
    for (const auto& o : from) {
      bool seen = false;
      for (const auto& e : into)
        if (equal(e, o)) {
          seen = true;
          break;
        }
      if (!seen) into.push_back(o);
    }
  }

  Formula instantiate(const USubst& s, const Formula& f, const std::string& path) {
    auto r = dl::apply(s, f);
    if (const auto* err = std::get_if<SubstError>(&r))
      throw CheckError(path, err->to_string());
    return std::get<Formula>(r);
  }

  Provable visit(const ProofNodePtr& node, const std::string& path) {
    return std::visit(
        [&](const auto& x) -> Provable {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, PnAxiom>) {
            const AxiomEntry* e = AxiomBase::instance().axiom(x.name);
            if (!e) throw CheckError(path, "unknown axiom: " + x.name);
            return Provable{e->formula, {}};
          } else if constexpr (std::is_same_v<T, PnUS>) {
            Provable child = visit(x.child, path + "/us-child");
            Formula conc = instantiate(x.subst, child.conclusion, path);
            return Provable{conc, child.obligations};
          } else if constexpr (std::is_same_v<T, PnRuleApp>) {
            const RuleEntry* r = AxiomBase::instance().rule(x.name);
            if (!r) throw CheckError(path, "unknown rule: " + x.name);
            VarSet fv = fv_subst(x.subst, std::nullopt);
            if (!fv.is_empty())
              throw CheckError(path, "rule instantiation requires FV(σ)=∅, but FV(σ)=" +
                                         fv.to_string());
            if (x.children.size() != r->premises.size())
              throw CheckError(path, "rule " + x.name + " expects " +
                                         std::to_string(r->premises.size()) + " premises, got " +
                                         std::to_string(x.children.size()));
            Provable out;
            out.conclusion = instantiate(x.subst, r->conclusion, path);
            for (size_t i = 0; i < x.children.size(); ++i) {
              Formula want = instantiate(x.subst, r->premises[i], path);
              Provable got = visit(x.children[i], path + "/premise" + std::to_string(i));
              if (!equal(got.conclusion, want))
                throw CheckError(path, "premise " + std::to_string(i) + " of " + x.name +
                                           " mismatch: expected " + pretty(want) + ", got " +
                                           pretty(got.conclusion));
              merge_obligations(out.obligations, got.obligations);
            }
            return out;
          } else if constexpr (std::is_same_v<T, PnMP>) {
            Provable l = visit(x.left, path + "/mp-left");
            Provable r = visit(x.right, path + "/mp-right");
            const auto* imp = std::get_if<FImply>(&l.conclusion->v);
            if (!imp)
              throw CheckError(path, "modus ponens needs an implication, got " +
                                         pretty(l.conclusion));
            if (!equal(imp->lhs, r.conclusion))
              throw CheckError(path, "modus ponens premise mismatch: needs " +
                                         pretty(imp->lhs) + ", got " + pretty(r.conclusion));
            Provable out{imp->rhs, l.obligations};
            merge_obligations(out.obligations, r.obligations);
            return out;
          } else if constexpr (std::is_same_v<T, PnRename>) {
            Provable child = visit(x.child, path + "/rename-child");
            auto res = bound_rename(child.conclusion, x.from, x.to);
            if (const auto* err = std::get_if<std::string>(&res))
              throw CheckError(path, "rename error: " + *err);
            return Provable{std::get<Formula>(res), child.obligations};
          } else if constexpr (std::is_same_v<T, PnArith>) {
            return arith_step(x.claim, path);
          } else if constexpr (std::is_same_v<T, PnRef>) {
            for (auto it = lets_.rbegin(); it != lets_.rend(); ++it)
              if (it->first == x.label) return it->second;
            throw CheckError(path, "unbound proof label: " + x.label);
          } else {
            Provable bound = visit(x.bound, path + "/let:" + x.label);
            lets_.emplace_back(x.label, bound);
            Provable out = visit(x.body, path);
            lets_.pop_back();
            return out;
          }
        },
        node->v);
  }

  Provable arith_step(const Formula& claim, const std::string& path) {
    if (auto v = wellformed(claim)) throw CheckError(path, "arith claim not wellformed");
    if (!dot_free(claim)) throw CheckError(path, "arith claim contains dots");
    // Pure first-order logic glue is certified internally with no obligation;
    // anything genuinely about the reals goes to the oracle path.
    if (fol_certified(claim)) return Provable{claim, {}};
    switch (opts_.arith_mode) {
      case ArithMode::Assume:
        return Provable{claim, {claim}};
      case ArithMode::Sample: {
        std::set<VarId> vars;
        collect_vars_occurring(claim, vars);
        std::mt19937_64 rng(opts_.seed ^ 0x9e3779b97f4a7c15ull);
        std::uniform_int_distribution<int> num(-50, 50);
        std::uniform_int_distribution<int> den(1, 8);
        Interpretation empty;
        EvalOpts eopts;
        for (int i = 0; i < 10000; ++i) {
          State nu;
          for (const auto& v : vars) nu.set(v, Rational(BigInt(num(rng)), BigInt(den(rng))));
          try {
            if (eval_formula(claim, empty, nu, eopts) == Truth::False)
              throw CheckError(path, "arith counterexample at state " + nu.to_string() +
                                         " for " + pretty(claim));
          } catch (const EvalError&) {
            break;  // not evaluable (uninterpreted symbols); sampling is moot
          }
        }
        return Provable{claim, {claim}};  // sampling never certifies
      }
      case ArithMode::External: {
        if (opts_.external_cmd.empty())
          throw CheckError(path, "external arith mode without a command");
        std::string text = pretty(claim);
        // the command may exit without reading stdin; that is a non-answer,
        // not a reason to die on SIGPIPE
        auto prev = std::signal(SIGPIPE, SIG_IGN);
        FILE* pipe = popen(opts_.external_cmd.c_str(), "w");
        if (!pipe) {
          std::signal(SIGPIPE, prev);
          return Provable{claim, {claim}};
        }
        fwrite(text.data(), 1, text.size(), pipe);
        fputc('\n', pipe);
        int status = pclose(pipe);
        std::signal(SIGPIPE, prev);
        int code = -1;
        if (status != -1 && WIFEXITED(status)) code = WEXITSTATUS(status);
        if (code == 0) return Provable{claim, {}};
        if (code == 1)
          throw CheckError(path, "external oracle refuted arith claim " + text);
        return Provable{claim, {claim}};  // non-answer: keep as obligation
      }
    }
    return Provable{claim, {claim}};
  }
};

}  // namespace

Provable check(const ProofNodePtr& tree, const CheckOptions& opts) {
  if (!tree) throw CheckError("", "empty proof");
  return Checker(opts).run(tree);
}

Provable derive_M() {
  // premise instance: the V∃ axiom (∃x p()) -> p()
  ProofNodePtr prem = pn_axiom("V∃");
  USubst sg({pred_pair("p", kAllVars, parse_formula("(\\exists x p()) -> p()"))});
  ProofNodePtr g = pn_rule("G", std::move(sg), {prem});
  USubst sk({pred_pair("p", kAllVars, parse_formula("\\exists x p()")),
             pred_pair("q", kAllVars, parse_formula("p()"))});
  ProofNodePtr k = pn_us(std::move(sk), pn_axiom("K"));
  return check(pn_mp(k, g));
}

}  // namespace dl
