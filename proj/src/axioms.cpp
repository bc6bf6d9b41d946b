#include "dl/axioms.hpp"

#include <sstream>
#include <stdexcept>

#include "dl/parse.hpp"
#include "dl/print.hpp"

namespace dl {

namespace {

struct AxiomSource {
  const char* name;
  std::vector<std::string> aliases;
  EntryKind kind;
  const char* source;
};

// Axioms are data: concrete dL formulas, never schema-matching code. The
// reserved symbols are a,b program constants, f,g,h functions, p,q,r
// predicates, C the predicational, x,y,z,t,s,l variables. DI is stored for
// atomic >= postconditions, writing (g(x))'>= (h(x))' for the differential of
// g(x)>=h(x); reverse implications are stored premise-first.
const std::vector<AxiomSource>& axiom_sources() {
  static const std::vector<AxiomSource> k = {
      {"⟨·⟩", {"<.>", "diamond"}, EntryKind::Axiom, "<a>p(||) <-> ![a]!p(||)"},
      {"[:=]", {":=", "assignb"}, EntryKind::Axiom, "[x:=f()]p(x) <-> p(f())"},
      {"[?]", {"?", "testb"}, EntryKind::Axiom, "[?q()]p() <-> (q() -> p())"},
      {"[∪]", {"[u]", "[++]", "choiceb"}, EntryKind::Axiom,
       "[a ++ b]p(||) <-> [a]p(||) & [b]p(||)"},
      {"[;]", {"composeb"}, EntryKind::Axiom, "[a;b]p(||) <-> [a][b]p(||)"},
      {"[*]", {"iterateb"}, EntryKind::Axiom, "[{a}*]p(||) <-> p(||) & [a][{a}*]p(||)"},
      {"K", {}, EntryKind::Axiom, "[a](p(||) -> q(||)) -> ([a]p(||) -> [a]q(||))"},
      {"I", {}, EntryKind::Axiom,
       "[{a}*](p(||) -> [a]p(||)) -> (p(||) -> [{a}*]p(||))"},
      {"V", {}, EntryKind::Axiom, "p() -> [a]p()"},
      {"∀i", {"alli", "allinst"}, EntryKind::Axiom, "(\\forall x p(x)) -> p(f())"},
      {"∀→", {"allimp", "alldist"}, EntryKind::Axiom,
       "(\\forall x (p(x) -> q(x))) -> ((\\forall x p(x)) -> \\forall x q(x))"},
      {"V∀", {"Vall", "vacuousall"}, EntryKind::Axiom, "p() -> \\forall x p()"},
      {"DW", {}, EntryKind::Axiom, "[{x'=f(x)&q(x)}]q(x)"},
      {"DC", {}, EntryKind::Axiom,
       "[{x'=f(x)&q(x)}]r(x) -> ([{x'=f(x)&q(x)}]p(x) <-> [{x'=f(x)&q(x)&r(x)}]p(x))"},
      {"DE", {}, EntryKind::Axiom,
       "[{x'=f(x)&q(x)}]p(x,x') <-> [{x'=f(x)&q(x)}][x':=f(x)]p(x,x')"},
      {"DI", {}, EntryKind::Axiom,
       "(q(x) -> g(x)>=h(x) & [{x'=f(x)&q(x)}](g(x))'>=(h(x))') -> "
       "[{x'=f(x)&q(x)}]g(x)>=h(x)"},
      {"DG", {}, EntryKind::Axiom,
       "[{x'=f(x)&q(x)}]p(x) <-> \\exists y [{x'=f(x),y'=a(x)*y+b(x)&q(x)}]p(x)"},
      {"DS", {}, EntryKind::Axiom,
       "[{x'=f()&q(x)}]p(x) <-> \\forall t (t>=0 -> ((\\forall s (0<=s & s<=t -> "
       "q(x+f()*s))) -> [x:=x+f()*t]p(x)))"},
      {"[′:=]", {"[':=]", "Dassignb"}, EntryKind::Axiom, "[x':=f()]p(x') <-> p(f())"},
      {"+′", {"+'", "Dplus"}, EntryKind::Axiom, "(f(||)+g(||))' = (f(||))'+(g(||))'"},
      {"·′", {"*'", "Dtimes"}, EntryKind::Axiom,
       "(f(||)*g(||))' = (f(||))'*g(||)+f(||)*(g(||))'"},
      {"∘′", {"o'", "Dcompose"}, EntryKind::Axiom,
       "[y:=g(x)][y':=1]((f(g(x)))' = (f(y))'*(g(x))')"},
      {"x′-id", {"x'-id", "Dvar"}, EntryKind::Axiom, "(x)' = x'"},
      {"const′", {"const'", "Dconst"}, EntryKind::Axiom, "(f())' = 0"},
      {"DG_ℓ", {"DGl", "DLG"}, EntryKind::Axiom,
       "(\\exists l \\forall x \\forall y \\forall z |g(x,y)-g(x,z)| <= l*|y-z|) -> "
       "([{x'=f(x)&q(x)}]p(x) <-> \\exists y [{x'=f(x),y'=g(x,y)&q(x)}]p(x))"},
      {"∃i", {"existsi", "existsinst"}, EntryKind::DerivedAxiom,
       "p(f()) -> \\exists x p(x)"},
      {"V∃", {"Vexists", "vacuousexists"}, EntryKind::DerivedAxiom,
       "(\\exists x p()) -> p()"},
      {"dW", {"diffweaken"}, EntryKind::DerivedAxiom,
       "[{x'=f(x)&q(x)}](q(x) -> p(x)) -> [{x'=f(x)&q(x)}]p(x)"},
  };
  return k;
}

struct RuleSource {
  const char* name;
  std::vector<std::string> aliases;
  EntryKind kind;
  std::vector<const char*> premises;
  const char* conclusion;
};

const std::vector<RuleSource>& rule_sources() {
  static const std::vector<RuleSource> k = {
      {"G", {}, EntryKind::AxiomaticRule, {"p(||)"}, "[a]p(||)"},
      {"∀gen", {"allgen", "gena"}, EntryKind::AxiomaticRule, {"p(x)"}, "\\forall x p(x)"},
      {"MP", {}, EntryKind::AxiomaticRule, {"p() -> q()", "p()"}, "q()"},
      {"CT", {}, EntryKind::DerivedRule, {"f(||) = g(||)"}, "c(f(||)) = c(g(||))"},
      {"CQ", {}, EntryKind::AxiomaticRule, {"f(||) = g(||)"}, "p(f(||)) <-> p(g(||))"},
      {"CE", {}, EntryKind::AxiomaticRule, {"p(||) <-> q(||)"}, "C{p(||)} <-> C{q(||)}"},
      {"M", {"mon"}, EntryKind::DerivedRule, {"p(||) -> q(||)"},
       "[a]p(||) -> [a]q(||)"},
      {"dW-rule", {"diffweaken-rule"}, EntryKind::DerivedRule, {"q(x) -> p(x)"},
       "[{x'=f(x)&q(x)}]p(x)"},
  };
  return k;
}

}  // namespace

AxiomBase::AxiomBase() {
  for (const auto& src : axiom_sources()) {
    AxiomEntry e;
    e.name = src.name;
    e.aliases = src.aliases;
    e.kind = src.kind;
    e.formula = parse_formula(src.source);
    e.canonical = pretty(e.formula);
    axioms_.push_back(std::move(e));
  }
  for (const auto& src : rule_sources()) {
    RuleEntry e;
    e.name = src.name;
    e.aliases = src.aliases;
    e.kind = src.kind;
    for (const char* p : src.premises) e.premises.push_back(parse_formula(p));
    e.conclusion = parse_formula(src.conclusion);
    rules_.push_back(std::move(e));
  }
}

const AxiomBase& AxiomBase::instance() {
  static const AxiomBase base;
  return base;
}

const AxiomEntry* AxiomBase::axiom(const std::string& name) const {
  for (const auto& e : axioms_) {
    if (e.name == name) return &e;
    for (const auto& a : e.aliases)
      if (a == name) return &e;
  }
  return nullptr;
}

const RuleEntry* AxiomBase::rule(const std::string& name) const {
  for (const auto& e : rules_) {
    if (e.name == name) return &e;
    for (const auto& a : e.aliases)
      if (a == name) return &e;
  }
  return nullptr;
}

std::optional<Violation> AxiomBase::self_check() const {
  for (const auto& e : axioms_) {
    if (auto v = wellformed(e.formula))
      return Violation{e.name, "not wellformed: " + v->message};
    if (!dot_free(e.formula)) return Violation{e.name, "axiom contains dots"};
    if (pretty(e.formula) != e.canonical)
      return Violation{e.name, "canonical string drifted"};
    try {
      if (!equal(parse_formula(e.canonical), e.formula))
        return Violation{e.name, "canonical string does not reparse to the formula"};
    } catch (const ParseError& pe) {
      return Violation{e.name, std::string("canonical string does not parse: ") + pe.what()};
    }
  }
  for (const auto& r : rules_) {
    for (const auto& p : r.premises) {
      if (auto v = wellformed(p)) return Violation{r.name, "premise not wellformed"};
      if (!dot_free(p)) return Violation{r.name, "premise contains dots"};
    }
    if (r.premises.empty()) return Violation{r.name, "rule without premises"};
    if (auto v = wellformed(r.conclusion))
      return Violation{r.name, "conclusion not wellformed"};
    if (!dot_free(r.conclusion)) return Violation{r.name, "conclusion contains dots"};
  }
  return std::nullopt;
}

std::string AxiomBase::render_golden() const {
  std::ostringstream os;
  for (const auto& e : axioms_) os << e.name << "\t" << e.canonical << "\n";
  return os.str();
}

std::optional<Violation> AxiomBase::self_check(const std::string& golden_text) const {
  if (auto v = self_check()) return v;
  std::string expect = render_golden();
  if (golden_text != expect) {
    // name the first differing line
    std::istringstream got(golden_text), want(expect);
    std::string gline, wline;
    while (std::getline(want, wline)) {
      if (!std::getline(got, gline) || gline != wline) {
        auto tab = wline.find('\t');
        return Violation{wline.substr(0, tab),
                         "golden drift: expected \"" + wline + "\", got \"" + gline + "\""};
      }
    }
    return Violation{"<golden>", "golden file has extra lines"};
  }
  return std::nullopt;
}

}  // namespace dl
