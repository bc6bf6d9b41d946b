#include <doctest.h>

#include "dl/parse.hpp"
#include "dl/print.hpp"
#include "gen.hpp"

using namespace dl;

TEST_CASE("parse examples") {
  Formula f = parse_formula("x*x>=1 -> [{x'=x^3}] x*x>=1");
  const auto* imp = std::get_if<FImply>(&f->v);
  REQUIRE(imp);
  const auto* box = std::get_if<FBox>(&imp->rhs->v);
  REQUIRE(box);
  const auto* ode = std::get_if<PODE>(&box->prog->v);
  REQUIRE(ode);
  CHECK(ode->eqs.size() == 1);
  CHECK(ode->eqs[0].first == base_var("x"));
  CHECK(equal(ode->eqs[0].second, parse_term("x*x*x")));
  CHECK(equal(ode->domain, mk_bool(true)));

  Program p = parse_program("x:=1 ++ {x:=0; y:=x+1}");
  const auto* ch = std::get_if<PChoice>(&p->v);
  REQUIRE(ch);
  CHECK(std::holds_alternative<PAssign>(ch->lhs->v));
  CHECK(std::holds_alternative<PCompose>(ch->rhs->v));

  Term t = parse_term("(x*y)'");
  const auto* d = std::get_if<TDifferential>(&t->v);
  REQUIRE(d);
  CHECK(std::holds_alternative<TTimes>(d->arg->v));
}

TEST_CASE("parse errors carry spans") {
  try {
    parse_formula("[a](");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.span.start >= 3);
    CHECK(e.span.start <= 4);
  }
  CHECK_THROWS_AS(parse_term("x +"), ParseError);
  CHECK_THROWS_AS(parse_formula("x >="), ParseError);
  CHECK_THROWS_AS(parse_program("x := "), ParseError);
}

TEST_CASE("arity consistency within one input") {
  CHECK_THROWS_AS(parse_formula("f(x) >= f(x,y)"), ParseError);
  CHECK_THROWS_AS(parse_formula("p(x) & p(x,y)"), ParseError);
  // different sorts may share a name
  CHECK_NOTHROW(parse_formula("p(x) & [p]true"));
}

TEST_CASE("x' is a differential symbol, (x)' a differential") {
  Term a = parse_term("x'");
  CHECK(std::holds_alternative<TVar>(a->v));
  CHECK(std::get<TVar>(a->v).var.is_diff());
  Term b = parse_term("(x)'");
  CHECK(std::holds_alternative<TDifferential>(b->v));
  CHECK(pretty(a) == "x'");
  CHECK(pretty(b) == "(x)'");
  CHECK(!equal(a, b));
}

TEST_CASE("sugar expands: subtraction, unary minus, powers, rationals") {
  CHECK(equal(parse_term("x-y"), parse_term("x+(-1)*y")));
  CHECK(equal(parse_term("-x"), parse_term("(-1)*x")));
  CHECK(equal(parse_term("x^3"), parse_term("x*x*x")));
  CHECK(equal(parse_term("x^0"), parse_term("1")));
  CHECK(equal(parse_term("x^1"), parse_term("x")));
  CHECK(equal(parse_term("0.5"), parse_term("1/2")));
  CHECK(equal(parse_term("-3"), mk_num(-3)));
}

TEST_CASE("precedence") {
  CHECK(pretty(parse_term("x+y*z")) == "x+y*z");
  CHECK(pretty(parse_term("(x+y)*z")) == "(x+y)*z");
  CHECK(equal(parse_formula("p() -> q() -> r()"), parse_formula("p() -> (q() -> r())")));
  CHECK(equal(parse_formula("!p() & q()"), parse_formula("(!p()) & q()")));
  CHECK(equal(parse_formula("p() & q() | r()"), parse_formula("(p() & q()) | r()")));
  CHECK(equal(parse_formula("[a]p() & q()"), parse_formula("([a]p()) & q()")));
  CHECK(equal(parse_formula("\\forall x p(x) -> q()"),
              parse_formula("(\\forall x p(x)) -> q()")));
  CHECK(equal(parse_program("a;b ++ c"), parse_program("{a;b} ++ c")));
  CHECK(equal(parse_program("a;b;c"), parse_program("a;{b;c}")));
}

TEST_CASE("pretty examples") {
  CHECK(pretty(mk_plus(mk_var(base_var("x")),
                       mk_times(mk_var(base_var("y")), mk_var(base_var("z"))))) == "x+y*z");
  CHECK(pretty(mk_times(mk_plus(mk_var(base_var("x")), mk_var(base_var("y"))),
                        mk_var(base_var("z")))) == "(x+y)*z");
  CHECK(pretty(parse_formula("p(.) & _")) == "p(.)&_");
}

TEST_CASE("diamond and less-than disambiguate") {
  CHECK(std::holds_alternative<FDiamond>(parse_formula("<a>p()")->v));
  CHECK(std::holds_alternative<FCmp>(parse_formula("x < y")->v));
  CHECK(std::holds_alternative<FDiamond>(parse_formula("<?x<y>z>=1")->v));
}

TEST_CASE("all-vars marker and absolute value") {
  Formula f = parse_formula("p(||)");
  CHECK(std::get<FPredApp>(f->v).sym.all_vars());
  Term t = parse_term("|x-y|");
  const auto* app = std::get_if<TFuncApp>(&t->v);
  REQUIRE(app);
  CHECK(is_abs(app->sym));
  bool printable = pretty(t) == "|x-y|" || pretty(t) == "|x+(-1)*y|";
  CHECK(printable);
}

TEST_CASE("round trip on random ASTs") {
  dlgen::Gen gen(20240202);
  for (int i = 0; i < 1500; ++i) {
    int depth = 1 + gen.upto(6);
    switch (gen.upto(3)) {
      case 0: {
        Term t = gen.term(depth, true);
        Term back = parse_term(pretty(t));
        CHECK(equal(t, back));
        CHECK(pretty(back) == pretty(t));
        break;
      }
      case 1: {
        Formula f = gen.formula(depth, true);
        Formula back = parse_formula(pretty(f));
        CHECK(equal(f, back));
        CHECK(pretty(back) == pretty(f));
        break;
      }
      default: {
        Program p = gen.program(depth, true);
        Program back = parse_program(pretty(p));
        CHECK(equal(p, back));
        CHECK(pretty(back) == pretty(p));
        break;
      }
    }
  }
  // every grammar production was exercised
  for (const char* tag :
       {"t:var", "t:diffsym", "t:number", "t:funcapp", "t:allvars", "t:plus", "t:times",
        "t:differential", "t:dot", "f:cmp", "f:pred", "f:predicational", "f:not", "f:and",
        "f:or", "f:imply", "f:equiv", "f:forall", "f:exists", "f:box", "f:diamond",
        "f:bool", "f:dotformula", "p:const", "p:assign", "p:diffassign", "p:test", "p:ode",
        "p:choice", "p:compose", "p:loop"}) {
    INFO(tag);
    CHECK(gen.seen.count(tag) == 1);
  }
}

TEST_CASE("random byte soup never crashes the parser") {
  std::mt19937_64 rng(4242);
  const std::string alphabet = "xyzfpq01+*-/^'()[]{}<>=!&|;,:?._\\ \t\n\"@#";
  std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(0, 40);
  int parsed = 0;
  for (int i = 0; i < 3000; ++i) {
    std::string s;
    int n = len(rng);
    for (int k = 0; k < n; ++k) s.push_back(alphabet[pick(rng)]);
    for (int kind = 0; kind < 3; ++kind) {
      try {
        if (kind == 0)
          parse_term(s);
        else if (kind == 1)
          parse_formula(s);
        else
          parse_program(s);
        ++parsed;
      } catch (const ParseError&) {
        // expected for almost everything
      } catch (const std::invalid_argument&) {
        // oversized numerals and the like
      }
    }
  }
  CHECK(parsed >= 0);  // reaching here crash-free is the property
}
