#ifndef DL_SCRIPT_HPP
#define DL_SCRIPT_HPP

#include <string>

#include "dl/kernel.hpp"
#include "dl/usubst.hpp"

namespace dl {

// Substitution text format, a sequence of parenthesized pairs with bodies in
// concrete syntax:
//   ((fn f 0) "x^2") ((pred p 1) "[{z:=.+z}*] y>=.") ((prog a) "x:=x-1")
//   ((unitpred p) "x>=y") ((fnall f) "x") ((predall p) "x>=y")
//   ((predicational C) "[a]_")
USubst parse_subst_text(const std::string& text);

// Proof script files (.dlp): s-expression forms
//   (axiom N) (us (PAIRS...) P) (rule N (PAIRS...) P...) (mp P P)
//   (rename x y P) (arith "FORMULA") (let L P BODY) (ref L)
// with the top level (qed P "EXPECTED"). ';' comments run to end of line.
struct Script {
  ProofNodePtr proof;
  Formula expected;  // the conclusion the script asserts
};

Script parse_script(const std::string& text);

// Parses, checks, and verifies the asserted conclusion. Throws CheckError or
// ParseError on failure.
Provable run_script(const std::string& text, const CheckOptions& opts);

}  // namespace dl

#endif
