#include "dl/parse.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace dl {

namespace {

enum class Tok {
  Ident, DiffIdent, Number, Dot,        // Dot carries an index
  True, False, Forall, Exists,
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Comma, Semicolon, Question, Bang, Amp, Bar, BarBar,
  Arrow, Equiv, PlusPlus, Plus, Minus, Star, Slash, Caret, Prime,
  Assign, Eq, Ne, Le, Ge, Lt, Gt, Underscore,
  End
};

std::string tok_name(Tok k) {
  switch (k) {
    case Tok::Ident: return "identifier";
    case Tok::DiffIdent: return "differential symbol";
    case Tok::Number: return "number";
    case Tok::Dot: return "'.'";
    case Tok::True: return "'true'";
    case Tok::False: return "'false'";
    case Tok::Forall: return "'\\forall'";
    case Tok::Exists: return "'\\exists'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semicolon: return "';'";
    case Tok::Question: return "'?'";
    case Tok::Bang: return "'!'";
    case Tok::Amp: return "'&'";
    case Tok::Bar: return "'|'";
    case Tok::BarBar: return "'||'";
    case Tok::Arrow: return "'->'";
    case Tok::Equiv: return "'<->'";
    case Tok::PlusPlus: return "'++'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::Prime: return "'''";
    case Tok::Assign: return "':='";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Le: return "'<='";
    case Tok::Ge: return "'>='";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Underscore: return "'_'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;  // identifier name or number literal
  int dot_index = 1;
  SourceSpan span;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0, line = 1, col = 1;
  auto mkspan = [&](size_t start, size_t startcol) {
    return SourceSpan{start, i, line, startcol};
  };
  auto fail = [&](const std::string& msg) {
    throw ParseError(SourceSpan{i, i + 1, line, col}, msg, {});
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    size_t start = i, startcol = col;
    auto push = [&](Tok k, std::string text = "", int dot = 1) {
      out.push_back(Token{k, std::move(text), dot, mkspan(start, startcol)});
      col += i - start;
    };
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      std::string name = s.substr(i, j - i);
      i = j;
      bool prime = i < s.size() && s[i] == '\'';
      if (name == "true") {
        push(Tok::True);
      } else if (name == "false") {
        push(Tok::False);
      } else if (prime) {
        ++i;
        push(Tok::DiffIdent, name);
      } else {
        push(Tok::Ident, name);
      }
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && s[j] == '.' && j + 1 < s.size() &&
          std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
        ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      }
      std::string num = s.substr(i, j - i);
      i = j;
      push(Tok::Number, num);
      continue;
    }
    switch (c) {
      case '(': ++i; push(Tok::LParen); break;
      case ')': ++i; push(Tok::RParen); break;
      case '{': ++i; push(Tok::LBrace); break;
      case '}': ++i; push(Tok::RBrace); break;
      case '[': ++i; push(Tok::LBracket); break;
      case ']': ++i; push(Tok::RBracket); break;
      case ',': ++i; push(Tok::Comma); break;
      case ';': ++i; push(Tok::Semicolon); break;
      case '?': ++i; push(Tok::Question); break;
      case '&': ++i; push(Tok::Amp); break;
      case '^': ++i; push(Tok::Caret); break;
      case '\'': ++i; push(Tok::Prime); break;
      case '*': ++i; push(Tok::Star); break;
      case '/': ++i; push(Tok::Slash); break;
      case '_': ++i; push(Tok::Underscore); break;
      case '|':
        if (i + 1 < s.size() && s[i + 1] == '|') {
          i += 2;
          push(Tok::BarBar);
        } else {
          ++i;
          push(Tok::Bar);
        }
        break;
      case '+':
        if (i + 1 < s.size() && s[i + 1] == '+') {
          i += 2;
          push(Tok::PlusPlus);
        } else {
          ++i;
          push(Tok::Plus);
        }
        break;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          i += 2;
          push(Tok::Arrow);
        } else {
          ++i;
          push(Tok::Minus);
        }
        break;
      case '<':
        if (i + 2 < s.size() && s[i + 1] == '-' && s[i + 2] == '>') {
          i += 3;
          push(Tok::Equiv);
        } else if (i + 1 < s.size() && s[i + 1] == '=') {
          i += 2;
          push(Tok::Le);
        } else {
          ++i;
          push(Tok::Lt);
        }
        break;
      case '>':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          i += 2;
          push(Tok::Ge);
        } else {
          ++i;
          push(Tok::Gt);
        }
        break;
      case '=': ++i; push(Tok::Eq); break;
      case '!':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          i += 2;
          push(Tok::Ne);
        } else {
          ++i;
          push(Tok::Bang);
        }
        break;
      case ':':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          i += 2;
          push(Tok::Assign);
        } else {
          fail("expected ':='");
        }
        break;
      case '.': {
        size_t j = i + 1;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        int idx = 1;
        if (j > i + 1) idx = std::stoi(s.substr(i + 1, j - i - 1));
        i = j;
        push(Tok::Dot, "", idx);
        break;
      }
      case '\\': {
        size_t j = i + 1;
        while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
        std::string kw = s.substr(i + 1, j - i - 1);
        i = j;
        if (kw == "forall")
          push(Tok::Forall);
        else if (kw == "exists")
          push(Tok::Exists);
        else
          fail("unknown keyword '\\" + kw + "'");
        break;
      }
      default:
        fail(std::string("stray character '") + c + "'");
    }
  }
  out.push_back(Token{Tok::End, "", 1, SourceSpan{s.size(), s.size(), line, col}});
  return out;
}

class Parser {
public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  Term term_all() {
    Term t = term();
    expect(Tok::End);
    return t;
  }
  Formula formula_all() {
    Formula f = formula();
    expect(Tok::End);
    return f;
  }
  Program program_all() {
    Program p = program();
    expect(Tok::End);
    return p;
  }

private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  // (name, sort) -> arity, for consistency within one input
  std::map<std::pair<std::string, int>, int> arities_;

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(size_t k = 1) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool eat(Tok k) {
    if (at(k)) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void err(const std::string& msg, std::set<std::string> expected = {}) {
    throw ParseError(cur().span, msg + ", found " + tok_name(cur().kind),
                     std::move(expected));
  }
  Token expect(Tok k) {
    if (!at(k)) err("expected " + tok_name(k), {tok_name(k)});
    return toks_[pos_++];
  }

  void record_arity(const SymbolId& s, const SourceSpan& span) {
    if (is_abs(s)) return;
    auto key = std::make_pair(s.name, static_cast<int>(s.sort));
    auto [it, fresh] = arities_.emplace(key, s.arity);
    if (!fresh && it->second != s.arity)
      throw ParseError(span,
                       "inconsistent arity for '" + s.name + "': " +
                           std::to_string(it->second) + " vs " + std::to_string(s.arity),
                       {});
  }

  // ---- terms ----

  Term term() { return additive(); }

  Term additive() {
    Term t = multiplicative();
    for (;;) {
      if (eat(Tok::Plus)) {
        t = mk_plus(t, multiplicative());
      } else if (eat(Tok::Minus)) {
        // θ-η  ↦  θ+(-1)*η
        t = mk_plus(t, mk_times(mk_num(-1), multiplicative()));
      } else {
        return t;
      }
    }
  }

  Term multiplicative() {
    Term t = factor();
    while (eat(Tok::Star)) t = mk_times(t, factor());
    return t;
  }

  Term factor() {
    if (eat(Tok::Minus)) {
      if (at(Tok::Number)) return power_of(number_term(true));
      return mk_times(mk_num(-1), factor());
    }
    return power_of(postfix());
  }

  Term power_of(Term base) {
    if (eat(Tok::Caret)) {
      Token n = expect(Tok::Number);
      Rational r = Rational::parse(n.text);
      if (!r.is_integer() || r.negative())
        throw ParseError(n.span, "exponent must be a natural number literal", {});
      long e = std::stol(r.num().to_string());
      if (e == 0) return mk_num(1);
      Term t = base;
      for (long k = 1; k < e; ++k) t = mk_times(t, base);
      return t;
    }
    return base;
  }

  Term number_term(bool negate) {
    Token n = expect(Tok::Number);
    std::string lit = n.text;
    // rational literal n/d
    if (at(Tok::Slash) && peek().kind == Tok::Number) {
      ++pos_;
      lit += "/" + expect(Tok::Number).text;
    }
    Rational r = Rational::parse(lit);
    return mk_num(negate ? -r : r);
  }

  Term postfix() {
    Term t = primary();
    while (eat(Tok::Prime)) t = mk_differential(t);
    return t;
  }

  Term primary() {
    if (at(Tok::Number)) return number_term(false);
    if (at(Tok::Dot)) {
      Token d = toks_[pos_++];
      return mk_dot(d.dot_index);
    }
    if (at(Tok::DiffIdent)) {
      Token v = toks_[pos_++];
      return mk_var(diff_var(v.text));
    }
    if (at(Tok::Ident)) {
      Token id = toks_[pos_++];
      if (at(Tok::LParen)) return application(id);
      return mk_var(base_var(id.text));
    }
    if (eat(Tok::LParen)) {
      Term t = term();
      expect(Tok::RParen);
      return t;
    }
    if (eat(Tok::Bar)) {
      Term t = term();
      expect(Tok::Bar);
      return mk_func(SymbolId{kAbsName, SymbolSort::Function, 1}, {t});
    }
    err("expected term", {"identifier", "number", "'('"});
  }

  // id has been consumed, cur() is '('
  Term application(const Token& id) {
    expect(Tok::LParen);
    if (eat(Tok::BarBar)) {
      expect(Tok::RParen);
      SymbolId s{id.text, SymbolSort::Function, kAllVars};
      record_arity(s, id.span);
      return mk_func(s, {});
    }
    std::vector<Term> args;
    if (!at(Tok::RParen)) {
      args.push_back(term());
      while (eat(Tok::Comma)) args.push_back(term());
    }
    expect(Tok::RParen);
    SymbolId s{id.text, SymbolSort::Function, static_cast<int>(args.size())};
    record_arity(s, id.span);
    return mk_func(s, std::move(args));
  }

  // ---- formulas ----

  Formula formula() { return equiv(); }

  Formula equiv() {
    Formula f = imply();
    if (eat(Tok::Equiv)) return mk_equiv(f, equiv());
    return f;
  }
  Formula imply() {
    Formula f = orf();
    if (eat(Tok::Arrow)) return mk_imply(f, imply());
    return f;
  }
  Formula orf() {
    Formula f = andf();
    if (eat(Tok::Bar)) return mk_or(f, orf());
    return f;
  }
  Formula andf() {
    Formula f = prefix();
    if (eat(Tok::Amp)) return mk_and(f, andf());
    return f;
  }

  Formula prefix() {
    if (eat(Tok::Bang)) return mk_not(prefix());
    if (at(Tok::LBracket)) {
      ++pos_;
      Program p = program();
      expect(Tok::RBracket);
      return mk_box(p, prefix());
    }
    if (at(Tok::Lt)) {
      ++pos_;
      Program p = program();
      expect(Tok::Gt);
      return mk_diamond(p, prefix());
    }
    if (at(Tok::Forall) || at(Tok::Exists)) {
      bool uni = at(Tok::Forall);
      ++pos_;
      Token v = expect(Tok::Ident);
      Formula body = prefix();
      return uni ? mk_forall(base_var(v.text), body) : mk_exists(base_var(v.text), body);
    }
    return atom();
  }

  Formula atom() {
    if (eat(Tok::True)) return mk_bool(true);
    if (eat(Tok::False)) return mk_bool(false);
    if (eat(Tok::Underscore)) return mk_dot_formula();
    if (at(Tok::Ident) && peek().kind == Tok::LBrace) {
      Token id = toks_[pos_++];
      expect(Tok::LBrace);
      Formula body = formula();
      expect(Tok::RBrace);
      SymbolId s{id.text, SymbolSort::Predicational, 0};
      record_arity(s, id.span);
      return mk_predicational(s, body);
    }
    // Comparison, or a predicate application reinterpreted from a bare
    // function application. On '(', a parenthesized formula is the fallback.
    size_t save = pos_;
    auto save_arities = arities_;
    try {
      Term lhs = term();
      CmpOp op;
      bool have_op = true;
      if (at(Tok::Gt)) {
        // '>' may close an enclosing diamond; only a comparison if a term
        // follows
        size_t mark = pos_;
        auto mark_arities = arities_;
        ++pos_;
        try {
          Term rhs = term();
          return mk_cmp(CmpOp::Gt, lhs, rhs);
        } catch (ParseError&) {
          pos_ = mark;
          arities_ = mark_arities;
          have_op = false;
        }
      }
      if (have_op && eat(Tok::Ge)) op = CmpOp::Ge;
      else if (have_op && eat(Tok::Le)) op = CmpOp::Le;
      else if (have_op && eat(Tok::Lt)) op = CmpOp::Lt;
      else if (have_op && eat(Tok::Eq)) op = CmpOp::Eq;
      else if (have_op && eat(Tok::Ne)) op = CmpOp::Ne;
      else {
        // bare application becomes a predicate application; retract the
        // speculative function-arity recording for the head symbol
        if (const auto* app = std::get_if<TFuncApp>(&lhs->v); app && !is_abs(app->sym)) {
          auto key = std::make_pair(app->sym.name, static_cast<int>(SymbolSort::Function));
          auto prior = save_arities.find(key);
          if (prior == save_arities.end())
            arities_.erase(key);
          else
            arities_[key] = prior->second;
          SymbolId s{app->sym.name, SymbolSort::Predicate, app->sym.arity};
          record_arity(s, cur().span);
          return mk_pred(s, app->args);
        }
        err("expected comparison operator",
            {"'>='", "'>'", "'<='", "'<'", "'='", "'!='"});
      }
      return mk_cmp(op, lhs, term());
    } catch (ParseError& e) {
      if (toks_[save].kind != Tok::LParen) throw;
      pos_ = save;
      arities_ = save_arities;
      expect(Tok::LParen);
      Formula f = formula();
      expect(Tok::RParen);
      return f;
    }
  }

  // ---- programs ----

  Program program() { return choice(); }

  Program choice() {
    Program p = compose();
    if (eat(Tok::PlusPlus)) return mk_choice(p, choice());
    return p;
  }
  Program compose() {
    Program p = punit();
    if (eat(Tok::Semicolon)) return mk_compose(p, compose());
    return p;
  }

  Program punit() {
    if (at(Tok::Question)) {
      ++pos_;
      return mk_test(formula());
    }
    if (at(Tok::DiffIdent)) {
      Token v = toks_[pos_++];
      expect(Tok::Assign);
      return mk_diff_assign(diff_var(v.text), term());
    }
    if (at(Tok::Ident)) {
      Token id = toks_[pos_++];
      if (eat(Tok::Assign)) return mk_assign(base_var(id.text), term());
      SymbolId s{id.text, SymbolSort::ProgramConst, 0};
      record_arity(s, id.span);
      return mk_prog_const(s);
    }
    if (at(Tok::LBrace)) {
      ++pos_;
      Program inner;
      if (at(Tok::DiffIdent) && peek().kind == Tok::Eq) {
        inner = ode_tail();
      } else {
        inner = program();
        expect(Tok::RBrace);
      }
      if (eat(Tok::Star)) return mk_loop(inner);
      return inner;
    }
    err("expected program", {"identifier", "'?'", "'{'"});
  }

  // after '{', at a DiffIdent '=' pair; consumes through '}'
  Program ode_tail() {
    std::vector<std::pair<VarId, Term>> eqs;
    for (;;) {
      Token v = expect(Tok::DiffIdent);
      expect(Tok::Eq);
      eqs.emplace_back(base_var(v.text), term());
      if (!eat(Tok::Comma)) break;
    }
    Formula domain = mk_bool(true);
    if (eat(Tok::Amp)) domain = formula();
    expect(Tok::RBrace);
    // duplicate left-hand sides are a structural violation
    for (size_t i = 0; i < eqs.size(); ++i)
      for (size_t j = i + 1; j < eqs.size(); ++j)
        if (eqs[i].first == eqs[j].first)
          err("duplicate ODE left-hand side '" + eqs[i].first.name + "'");
    return mk_ode(std::move(eqs), domain);
  }
};

}  // namespace

ParseError::ParseError(SourceSpan sp, std::string msg, std::set<std::string> exp)
    : std::runtime_error(msg + " at line " + std::to_string(sp.line) + ":" +
                         std::to_string(sp.column)),
      span(sp),
      message(std::move(msg)),
      expected(std::move(exp)) {}

Term parse_term(const std::string& text) { return Parser(text).term_all(); }
Formula parse_formula(const std::string& text) { return Parser(text).formula_all(); }
Program parse_program(const std::string& text) { return Parser(text).program_all(); }

}  // namespace dl
