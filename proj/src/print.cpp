#include "dl/print.hpp"

#include <sstream>

namespace dl {

namespace {

// Term precedence: 0 additive, 1 multiplicative, 2 power, 3 primary.
void pt(std::ostream& os, const Term& t, int min_prec);
// Formula precedence: 0 equiv, 1 imply, 2 or, 3 and, 4 prefix (!,[],<>,quantifier), 5 atom.
void pf(std::ostream& os, const Formula& f, int min_prec);
// Program precedence: 0 choice, 1 compose, 2 primary.
void pp(std::ostream& os, const Program& p, int min_prec);

// A test on the right edge of a diamond's program would let the test formula
// swallow the closing '>'; such programs print braced.
bool ends_in_test(const Program& p) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PTest>) return true;
        else if constexpr (std::is_same_v<T, PCompose> || std::is_same_v<T, PChoice>)
          return ends_in_test(x.rhs);
        else
          return false;
      },
      p->v);
}

// Collect the maximal left spine of Times; returns factors left to right.
void times_spine(const Term& t, std::vector<Term>& out) {
  if (const auto* times = std::get_if<TTimes>(&t->v)) {
    times_spine(times->lhs, out);
    out.push_back(times->rhs);
  } else {
    out.push_back(t);
  }
}

void pt(std::ostream& os, const Term& t, int min_prec) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TVar>) {
          os << x.var.to_string();
        } else if constexpr (std::is_same_v<T, TNumber>) {
          if (x.value.negative())
            os << "(" << x.value.to_string() << ")";
          else
            os << x.value.to_string();
        } else if constexpr (std::is_same_v<T, TFuncApp>) {
          if (is_abs(x.sym)) {
            // keep adjacent bars from lexing as the all-vars marker '||'
            std::ostringstream inner;
            pt(inner, x.args[0], 0);
            std::string s = inner.str();
            os << "|" << (s.front() == '|' ? " " : "") << s
               << (s.back() == '|' ? " " : "") << "|";
            return;
          }
          os << x.sym.name << "(";
          if (x.sym.all_vars()) {
            os << "||";
          } else {
            for (size_t i = 0; i < x.args.size(); ++i) {
              if (i) os << ",";
              pt(os, x.args[i], 0);
            }
          }
          os << ")";
        } else if constexpr (std::is_same_v<T, TPlus>) {
          bool paren = min_prec > 0;
          if (paren) os << "(";
          pt(os, x.lhs, 0);
          os << "+";
          pt(os, x.rhs, 1);
          if (paren) os << ")";
        } else if constexpr (std::is_same_v<T, TTimes>) {
          // x*x*...*x collapses to x^n (left spines of equal factors only,
          // matching how the parser expands ^).
          std::vector<Term> fs;
          times_spine(t, fs);
          bool all_eq = fs.size() >= 2;
          for (size_t i = 1; all_eq && i < fs.size(); ++i)
            if (!equal(fs[0], fs[i])) all_eq = false;
          if (all_eq) {
            bool paren = min_prec > 2;
            if (paren) os << "(";
            pt(os, fs[0], 3);
            os << "^" << fs.size();
            if (paren) os << ")";
            return;
          }
          bool paren = min_prec > 1;
          if (paren) os << "(";
          pt(os, x.lhs, 1);
          os << "*";
          pt(os, x.rhs, 2);
          if (paren) os << ")";
        } else if constexpr (std::is_same_v<T, TDifferential>) {
          os << "(";
          pt(os, x.arg, 0);
          os << ")'";
        } else {
          if (x.index == 1)
            os << ".";
          else
            os << "." << x.index;
        }
      },
      t->v);
}

const char* cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
    case CmpOp::Le: return "<=";
    case CmpOp::Lt: return "<";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
  }
  return "?";
}

void binary_formula(std::ostream& os, const Formula& l, const Formula& r, const char* op,
                    int prec, int min_prec) {
  bool paren = min_prec > prec;
  if (paren) os << "(";
  pf(os, l, prec + 1);
  os << op;
  std::ostringstream rhs;
  pf(rhs, r, prec);  // right associative
  std::string s = rhs.str();
  // '|' followed by an absolute value must not lex as '||'
  if (op[0] == '|' && op[1] == '\0' && !s.empty() && s.front() == '|') os << " ";
  os << s;
  if (paren) os << ")";
}

void pf(std::ostream& os, const Formula& f, int min_prec) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FCmp>) {
          pt(os, x.lhs, 0);
          os << cmp_text(x.op);
          pt(os, x.rhs, 0);
        } else if constexpr (std::is_same_v<T, FPredApp>) {
          os << x.sym.name << "(";
          if (x.sym.all_vars()) {
            os << "||";
          } else {
            for (size_t i = 0; i < x.args.size(); ++i) {
              if (i) os << ",";
              pt(os, x.args[i], 0);
            }
          }
          os << ")";
        } else if constexpr (std::is_same_v<T, FPredicational>) {
          os << x.sym.name << "{";
          pf(os, x.arg, 0);
          os << "}";
        } else if constexpr (std::is_same_v<T, FNot>) {
          bool paren = min_prec > 4;
          if (paren) os << "(";
          os << "!";
          pf(os, x.arg, 4);
          if (paren) os << ")";
        } else if constexpr (std::is_same_v<T, FAnd>) {
          binary_formula(os, x.lhs, x.rhs, "&", 3, min_prec);
        } else if constexpr (std::is_same_v<T, FOr>) {
          binary_formula(os, x.lhs, x.rhs, "|", 2, min_prec);
        } else if constexpr (std::is_same_v<T, FImply>) {
          binary_formula(os, x.lhs, x.rhs, "->", 1, min_prec);
        } else if constexpr (std::is_same_v<T, FEquiv>) {
          binary_formula(os, x.lhs, x.rhs, "<->", 0, min_prec);
        } else if constexpr (std::is_same_v<T, FForall> || std::is_same_v<T, FExists>) {
          bool paren = min_prec > 4;
          if (paren) os << "(";
          os << (std::is_same_v<T, FForall> ? "\\forall " : "\\exists ") << x.var.name << " ";
          pf(os, x.body, 4);
          if (paren) os << ")";
        } else if constexpr (std::is_same_v<T, FBox>) {
          bool paren = min_prec > 4;
          if (paren) os << "(";
          os << "[";
          pp(os, x.prog, 0);
          os << "]";
          pf(os, x.post, 4);
          if (paren) os << ")";
        } else if constexpr (std::is_same_v<T, FDiamond>) {
          bool paren = min_prec > 4;
          if (paren) os << "(";
          os << "<";
          if (ends_in_test(x.prog)) {
            os << "{";
            pp(os, x.prog, 0);
            os << "}";
          } else {
            pp(os, x.prog, 0);
          }
          os << ">";
          pf(os, x.post, 4);
          if (paren) os << ")";
        } else if constexpr (std::is_same_v<T, FBool>) {
          os << (x.value ? "true" : "false");
        } else {
          os << "_";
        }
      },
      f->v);
}

void pp(std::ostream& os, const Program& p, int min_prec) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PProgConst>) {
          os << x.sym.name;
        } else if constexpr (std::is_same_v<T, PAssign> || std::is_same_v<T, PDiffAssign>) {
          os << x.var.to_string() << ":=";
          pt(os, x.value, 0);
        } else if constexpr (std::is_same_v<T, PTest>) {
          os << "?";
          pf(os, x.cond, 0);
        } else if constexpr (std::is_same_v<T, PODE>) {
          os << "{";
          for (size_t i = 0; i < x.eqs.size(); ++i) {
            if (i) os << ",";
            os << x.eqs[i].first.name << "'=";
            pt(os, x.eqs[i].second, 0);
          }
          const auto* b = std::get_if<FBool>(&x.domain->v);
          if (!b || !b->value) {
            os << "&";
            pf(os, x.domain, 0);
          }
          os << "}";
        } else if constexpr (std::is_same_v<T, PChoice>) {
          bool brace = min_prec > 0;
          if (brace) os << "{";
          pp(os, x.lhs, 1);
          os << " ++ ";
          pp(os, x.rhs, 0);
          if (brace) os << "}";
        } else if constexpr (std::is_same_v<T, PCompose>) {
          bool brace = min_prec > 1;
          if (brace) os << "{";
          pp(os, x.lhs, 2);
          os << ";";
          pp(os, x.rhs, 1);
          if (brace) os << "}";
        } else {
          os << "{";
          pp(os, x.body, 0);
          os << "}*";
        }
      },
      p->v);
}

}  // namespace

std::string pretty(const Term& t) {
  std::ostringstream os;
  pt(os, t, 0);
  return os.str();
}
std::string pretty(const Formula& f) {
  std::ostringstream os;
  pf(os, f, 0);
  return os.str();
}
std::string pretty(const Program& p) {
  std::ostringstream os;
  pp(os, p, 0);
  return os.str();
}

}  // namespace dl
