#include "dl/script.hpp"

#include <cctype>
#include <memory>
#include <stdexcept>
#include <vector>

#include "dl/parse.hpp"
#include "dl/print.hpp"

namespace dl {

namespace {

// minimal s-expressions: atoms, "quoted strings" and lists
struct Sexpr {
  enum class Kind { Atom, String, List } kind;
  std::string text;
  std::vector<Sexpr> items;
};

class SexprReader {
public:
  explicit SexprReader(const std::string& s) : s_(s) {}

  bool at_end() {
    skip();
    return i_ >= s_.size();
  }

  Sexpr read() {
    skip();
    if (i_ >= s_.size()) throw std::runtime_error("script: unexpected end of input");
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      Sexpr e{Sexpr::Kind::List, "", {}};
      for (;;) {
        skip();
        if (i_ >= s_.size()) throw std::runtime_error("script: missing ')'");
        if (s_[i_] == ')') {
          ++i_;
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (c == ')') throw std::runtime_error("script: stray ')'");
    if (c == '"') {
      ++i_;
      std::string out;
      while (i_ < s_.size() && s_[i_] != '"') {
        // only \" and \\ are escapes; formulas keep their backslashes
        if (s_[i_] == '\\' && i_ + 1 < s_.size() &&
            (s_[i_ + 1] == '"' || s_[i_ + 1] == '\\'))
          ++i_;
        out.push_back(s_[i_++]);
      }
      if (i_ >= s_.size()) throw std::runtime_error("script: unterminated string");
      ++i_;
      return Sexpr{Sexpr::Kind::String, out, {}};
    }
    std::string out;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) &&
           s_[i_] != '(' && s_[i_] != ')' && s_[i_] != ';')
      out.push_back(s_[i_++]);
    return Sexpr{Sexpr::Kind::Atom, out, {}};
  }

private:
  const std::string& s_;
  size_t i_ = 0;

  void skip() {
    for (;;) {
      while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (i_ < s_.size() && s_[i_] == ';') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
        continue;
      }
      return;
    }
  }
};

std::string atom_or_string(const Sexpr& e, const char* what) {
  if (e.kind == Sexpr::Kind::Atom || e.kind == Sexpr::Kind::String) return e.text;
  throw std::runtime_error(std::string("script: expected ") + what);
}

SubstPair parse_pair(const Sexpr& e) {
  if (e.kind != Sexpr::Kind::List || e.items.size() != 2 ||
      e.items[0].kind != Sexpr::Kind::List)
    throw std::runtime_error("script: substitution pair must be ((HEAD ...) \"BODY\")");
  const auto& head = e.items[0].items;
  if (head.empty()) throw std::runtime_error("script: empty substitution head");
  std::string tag = atom_or_string(head[0], "pair tag");
  std::string body = atom_or_string(e.items[1], "pair body");
  auto name_at = [&](size_t i) { return atom_or_string(head[i], "symbol name"); };
  if (tag == "fn" || tag == "pred") {
    if (head.size() != 3) throw std::runtime_error("script: (" + tag + " NAME ARITY)");
    int arity = std::stoi(atom_or_string(head[2], "arity"));
    if (tag == "fn") return fn_pair(name_at(1), arity, parse_term(body));
    return pred_pair(name_at(1), arity, parse_formula(body));
  }
  if (tag == "unitpred") {
    if (head.size() != 2) throw std::runtime_error("script: (unitpred NAME)");
    return pred_pair(name_at(1), 0, parse_formula(body));
  }
  if (tag == "fnall") {
    if (head.size() != 2) throw std::runtime_error("script: (fnall NAME)");
    return fn_pair(name_at(1), kAllVars, parse_term(body));
  }
  if (tag == "predall") {
    if (head.size() != 2) throw std::runtime_error("script: (predall NAME)");
    return pred_pair(name_at(1), kAllVars, parse_formula(body));
  }
  if (tag == "predicational") {
    if (head.size() != 2) throw std::runtime_error("script: (predicational NAME)");
    return predicational_pair(name_at(1), parse_formula(body));
  }
  if (tag == "prog") {
    if (head.size() != 2) throw std::runtime_error("script: (prog NAME)");
    return prog_pair(name_at(1), parse_program(body));
  }
  throw std::runtime_error("script: unknown substitution head '" + tag + "'");
}

USubst parse_pairs(const Sexpr& list) {
  if (list.kind != Sexpr::Kind::List)
    throw std::runtime_error("script: expected a substitution pair list");
  std::vector<SubstPair> pairs;
  for (const auto& item : list.items) pairs.push_back(parse_pair(item));
  return USubst(std::move(pairs));
}

VarId parse_varid(const std::string& s) {
  if (!s.empty() && s.back() == '\'') return diff_var(s.substr(0, s.size() - 1));
  return base_var(s);
}

ProofNodePtr parse_proof(const Sexpr& e) {
  if (e.kind != Sexpr::Kind::List || e.items.empty() ||
      e.items[0].kind != Sexpr::Kind::Atom)
    throw std::runtime_error("script: expected a proof form");
  const std::string& op = e.items[0].text;
  auto arity = [&](size_t n) {
    if (e.items.size() != n + 1)
      throw std::runtime_error("script: (" + op + " ...) takes " + std::to_string(n) +
                               " arguments");
  };
  if (op == "axiom") {
    arity(1);
    return pn_axiom(atom_or_string(e.items[1], "axiom name"));
  }
  if (op == "us") {
    arity(2);
    return pn_us(parse_pairs(e.items[1]), parse_proof(e.items[2]));
  }
  if (op == "rule") {
    if (e.items.size() < 3) throw std::runtime_error("script: (rule N (PAIRS) P...)");
    std::vector<ProofNodePtr> children;
    for (size_t i = 3; i < e.items.size(); ++i) children.push_back(parse_proof(e.items[i]));
    return pn_rule(atom_or_string(e.items[1], "rule name"), parse_pairs(e.items[2]),
                   std::move(children));
  }
  if (op == "mp") {
    arity(2);
    return pn_mp(parse_proof(e.items[1]), parse_proof(e.items[2]));
  }
  if (op == "rename") {
    arity(3);
    return pn_rename(parse_varid(atom_or_string(e.items[1], "variable")),
                     parse_varid(atom_or_string(e.items[2], "variable")),
                     parse_proof(e.items[3]));
  }
  if (op == "arith") {
    arity(1);
    return pn_arith(parse_formula(atom_or_string(e.items[1], "formula")));
  }
  if (op == "let") {
    arity(3);
    return pn_let(atom_or_string(e.items[1], "label"), parse_proof(e.items[2]),
                  parse_proof(e.items[3]));
  }
  if (op == "ref") {
    arity(1);
    return pn_ref(atom_or_string(e.items[1], "label"));
  }
  throw std::runtime_error("script: unknown proof form '" + op + "'");
}

}  // namespace

USubst parse_subst_text(const std::string& text) {
  SexprReader reader(text);
  std::vector<SubstPair> pairs;
  while (!reader.at_end()) pairs.push_back(parse_pair(reader.read()));
  return USubst(std::move(pairs));
}

Script parse_script(const std::string& text) {
  SexprReader reader(text);
  Sexpr top = reader.read();
  if (!reader.at_end()) throw std::runtime_error("script: trailing content after (qed ...)");
  if (top.kind != Sexpr::Kind::List || top.items.size() != 3 ||
      top.items[0].kind != Sexpr::Kind::Atom || top.items[0].text != "qed")
    throw std::runtime_error("script: top level must be (qed P \"EXPECTED\")");
  Script s;
  s.proof = parse_proof(top.items[1]);
  s.expected = parse_formula(atom_or_string(top.items[2], "expected conclusion"));
  return s;
}

Provable run_script(const std::string& text, const CheckOptions& opts) {
  Script s = parse_script(text);
  Provable p = check(s.proof, opts);
  if (!equal(p.conclusion, s.expected))
    throw CheckError("qed", "conclusion mismatch: proved " + pretty(p.conclusion) +
                                ", script asserts " + pretty(s.expected));
  return p;
}

}  // namespace dl
