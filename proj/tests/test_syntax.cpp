#include <doctest.h>

#include "dl/ast.hpp"
#include "dl/parse.hpp"
#include "dl/print.hpp"
#include "dl/statics.hpp"

using namespace dl;

TEST_CASE("wellformed accepts plain terms and rejects arity mismatches") {
  CHECK(!wellformed(parse_term("x + 2")));

  // f applied once as arity 2 and once as arity 1 within one expression
  Term bad = mk_plus(mk_func(SymbolId{"f", SymbolSort::Function, 2},
                             {mk_var(base_var("x")), mk_var(base_var("y"))}),
                     mk_func(SymbolId{"f", SymbolSort::Function, 1}, {mk_var(base_var("x"))}));
  auto v = wellformed(bad);
  REQUIRE(v);
  CHECK(v->message.find("inconsistent arity") != std::string::npos);

  // declared arity 2, applied to one argument
  Term bad2 = mk_func(SymbolId{"f", SymbolSort::Function, 2}, {mk_var(base_var("x"))});
  auto v2 = wellformed(bad2);
  REQUIRE(v2);
  CHECK(v2->message.find("arity mismatch") != std::string::npos);
}

TEST_CASE("wellformed rejects quantifiers over differential symbols") {
  Formula f = mk_forall(diff_var("x"), mk_cmp(CmpOp::Ge, mk_var(diff_var("x")), mk_num(0)));
  auto v = wellformed(f);
  REQUIRE(v);
  CHECK(v->message.find("differential symbol") != std::string::npos);
}

TEST_CASE("wellformed rejects bad ODEs and assignment targets") {
  Program dup = mk_ode({{base_var("x"), mk_num(1)}, {base_var("x"), mk_num(2)}}, mk_bool(true));
  CHECK(wellformed(dup));
  Program empty = mk_ode({}, mk_bool(true));
  CHECK(wellformed(empty));
  CHECK(wellformed(mk_assign(diff_var("x"), mk_num(1))));
  CHECK(wellformed(mk_diff_assign(base_var("x"), mk_num(1))));
  CHECK(!wellformed(parse_program("x:=1; {x'=x & x>=0}")));
}

TEST_CASE("structural equality is syntactic") {
  CHECK(equal(parse_term("x+y"), parse_term("x+y")));
  CHECK(!equal(parse_term("x+y"), parse_term("y+x")));
  CHECK(!equal(parse_formula("\\forall x p(x)"), parse_formula("\\forall y p(y)")));
  CHECK(equal(parse_formula("x>=y"), desugar(parse_formula("y<=x"))));
}

TEST_CASE("desugar rewrites derived connectives into the core") {
  Formula imp = parse_formula("p() -> q()");
  CHECK(pretty(desugar(imp)) == "!(p()&!q())");
  Formula box = parse_formula("[a]p()");
  CHECK(pretty(desugar(box)) == "!<a>!p()");
  Formula all = parse_formula("\\forall x p(x)");
  CHECK(pretty(desugar(all)) == "!\\exists x !p(x)");
  CHECK(pretty(desugar(parse_formula("x>=y"))) == "x>=y");
  CHECK(pretty(desugar(parse_formula("x<y"))) == "!x>=y");
  CHECK(pretty(desugar(parse_formula("x>y"))) == "!y>=x");
  // = and != stay primitive
  CHECK(pretty(desugar(parse_formula("x=y"))) == "x=y");
  CHECK(pretty(desugar(parse_formula("x!=y"))) == "x!=y");
}

TEST_CASE("desugar is idempotent") {
  const char* samples[] = {
      "p() -> q() | r()",
      "x>=1 <-> [x:=x+1]x>=2",
      "\\forall x (p(x) -> \\exists y q(y))",
      "[{x'=x^2 & x<=5}](x*x>=0 & x!=7)",
      "<{a ++ b};?p()>true",
  };
  for (const char* s : samples) {
    Formula f = parse_formula(s);
    CHECK(equal(desugar(f), desugar(desugar(f))));
  }
}

TEST_CASE("desugar preserves free and bound variables") {
  const char* samples[] = {
      "x<=y -> [x:=1 ++ y:=2]x>=1",
      "\\forall x (x>y | x<z)",
      "[{x'=y & q(x)}](x>0 -> p(x))",
  };
  for (const char* s : samples) {
    Formula f = parse_formula(s);
    CHECK(fv_formula(f) == fv_formula(desugar(f)));
    CHECK(bv_formula(f) == bv_formula(desugar(f)));
  }
}

TEST_CASE("dot freeness") {
  CHECK(dot_free(parse_formula("p(x) & x>=0")));
  CHECK(!dot_free(parse_formula("p(.)")));
  CHECK(!dot_free(parse_formula("p(x) & _")));
}
