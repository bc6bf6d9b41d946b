#ifndef DL_AXIOMS_HPP
#define DL_AXIOMS_HPP

#include <optional>
#include <string>
#include <vector>

#include "dl/ast.hpp"

namespace dl {

enum class EntryKind { Axiom, DerivedAxiom, AxiomaticRule, DerivedRule };

struct AxiomEntry {
  std::string name;                  // canonical display name
  std::vector<std::string> aliases;  // ASCII lookup aliases
  EntryKind kind;
  Formula formula;
  std::string canonical;  // pretty-printed form, pinned by the golden file
};

struct RuleEntry {
  std::string name;
  std::vector<std::string> aliases;
  EntryKind kind;
  std::vector<Formula> premises;
  Formula conclusion;
};

// The fixed, immutable registry of concrete axiom formulas and axiomatic
// rules. Constructed once; the proof kernel consults nothing else. Barcan is
// deliberately absent.
class AxiomBase {
public:
  static const AxiomBase& instance();

  // nullptr when the name names nothing (for example "B").
  const AxiomEntry* axiom(const std::string& name) const;
  const RuleEntry* rule(const std::string& name) const;

  const std::vector<AxiomEntry>& axioms() const { return axioms_; }
  const std::vector<RuleEntry>& rules() const { return rules_; }

  // Every registry formula parses, is wellformed, dot-free, pretty-prints to
  // its canonical string and reparses to itself.
  std::optional<Violation> self_check() const;
  // Additionally compares against golden text (one "name\tcanonical" line per
  // axiom, as produced by render_golden).
  std::optional<Violation> self_check(const std::string& golden_text) const;
  std::string render_golden() const;

private:
  AxiomBase();
  std::vector<AxiomEntry> axioms_;
  std::vector<RuleEntry> rules_;
};

}  // namespace dl

#endif
