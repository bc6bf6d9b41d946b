#ifndef DL_KERNEL_HPP
#define DL_KERNEL_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dl/ast.hpp"
#include "dl/usubst.hpp"

namespace dl {

// Proof trees whose only instantiation mechanism is uniform substitution on
// registry axioms and axiomatic rules.
struct ProofNode;
using ProofNodePtr = std::shared_ptr<const ProofNode>;

struct PnAxiom { std::string name; };
struct PnUS { USubst subst; ProofNodePtr child; };
struct PnRuleApp {
  std::string name;
  USubst subst;
  std::vector<ProofNodePtr> children;
};
struct PnMP { ProofNodePtr left, right; };
struct PnRename { VarId from, to; ProofNodePtr child; };
struct PnArith { Formula claim; };
struct PnRef { std::string label; };
struct PnLet { std::string label; ProofNodePtr bound; ProofNodePtr body; };

struct ProofNode {
  std::variant<PnAxiom, PnUS, PnRuleApp, PnMP, PnRename, PnArith, PnRef, PnLet> v;
};

ProofNodePtr pn_axiom(std::string name);
ProofNodePtr pn_us(USubst s, ProofNodePtr child);
ProofNodePtr pn_rule(std::string name, USubst s, std::vector<ProofNodePtr> children);
ProofNodePtr pn_mp(ProofNodePtr l, ProofNodePtr r);
ProofNodePtr pn_rename(VarId from, VarId to, ProofNodePtr child);
ProofNodePtr pn_arith(Formula claim);
ProofNodePtr pn_ref(std::string label);
ProofNodePtr pn_let(std::string label, ProofNodePtr bound, ProofNodePtr body);

// A kernel-certified conclusion plus the arithmetic obligations that were
// assumed rather than discharged.
struct Provable {
  Formula conclusion;
  std::vector<Formula> obligations;
};

enum class ArithMode { Assume, Sample, External };

struct CheckOptions {
  ArithMode arith_mode = ArithMode::Assume;
  std::uint64_t seed = 0;
  std::string external_cmd;  // required in External mode
};

class CheckError : public std::runtime_error {
public:
  CheckError(std::string path, std::string message)
      : std::runtime_error(path.empty() ? message : message + " (at " + path + ")"),
        path(std::move(path)),
        message(std::move(message)) {}
  std::string path;
  std::string message;
};

// The trusted checker. Constructs formulas only through registry lookup,
// substitution application, bound renaming and structural decomposition.
Provable check(const ProofNodePtr& tree, const CheckOptions& opts = {});

// Zero-obligation certificate for pure first-order logic glue: propositional
// tautologies and ground equational consequences over uninterpreted atoms
// (congruence reasoning; nothing about the theory of reals is decided).
// Claims that fail this test go to the arithmetic oracle path.
bool fol_certified(const Formula& claim);

// The shipped derived-rule witness: the monotonicity pattern [a]φ → [a]ψ from
// the premise φ → ψ, instantiated at the V∃ axiom and derived by G, then K,
// then MP, with empty obligations.
Provable derive_M();

}  // namespace dl

#endif
