#include "clw/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace clw {

namespace {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Dot,
  Bar,
  Minus,
  DotMinus,
  DotPlus,
  Star,
  Equal,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  double num = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  Lexer(const std::string& s, int first_line) : s_(s), line_(first_line) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= s_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = s_[pos_];
      if (std::isalpha((unsigned char)c) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_' ||
                s_[pos_] == '\'')) {
          advance();
        }
        t.kind = Tok::Ident;
        t.text = s_.substr(start, pos_ - start);
      } else if (std::isdigit((unsigned char)c)) {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) advance();
        if (pos_ < s_.size() && s_[pos_] == '.' && pos_ + 1 < s_.size() &&
            std::isdigit((unsigned char)s_[pos_ + 1])) {
          advance();
          while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) advance();
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
          std::size_t save = pos_;
          advance();
          if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) advance();
          if (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) advance();
          } else {
            pos_ = save;
          }
        }
        t.kind = Tok::Number;
        t.text = s_.substr(start, pos_ - start);
        t.num = std::strtod(t.text.c_str(), nullptr);
      } else {
        switch (c) {
          case '(': t.kind = Tok::LParen; advance(); break;
          case ')': t.kind = Tok::RParen; advance(); break;
          case '[': t.kind = Tok::LBracket; advance(); break;
          case ']': t.kind = Tok::RBracket; advance(); break;
          case ',': t.kind = Tok::Comma; advance(); break;
          case '|': t.kind = Tok::Bar; advance(); break;
          case '*': t.kind = Tok::Star; advance(); break;
          case '=': t.kind = Tok::Equal; advance(); break;
          case '.':
            t.kind = Tok::Dot;
            advance();
            break;
          case '-':
            advance();
            if (pos_ < s_.size() && s_[pos_] == '.') {
              t.kind = Tok::DotMinus;
              advance();
            } else {
              t.kind = Tok::Minus;
            }
            break;
          case '+':
            advance();
            if (pos_ < s_.size() && s_[pos_] == '.') {
              t.kind = Tok::DotPlus;
              advance();
            } else {
              throw ParseError("unexpected '+' (use '+.' for truncated addition)",
                               t.line, t.col);
            }
            break;
          default:
            throw ParseError(std::string("unexpected character '") + c + "'",
                             t.line, t.col);
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void skip_space() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else if (std::isspace((unsigned char)c)) {
        advance();
      } else {
        break;
      }
    }
  }
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, const Signature& sig, const PlBindings& pl)
      : toks_(std::move(toks)), sig_(sig), pl_(pl) {}

  FormulaPtr formula() {
    FormulaPtr f = expr();
    expect(Tok::End, "end of input");
    post_check(f);
    return f;
  }

  CFormulaPtr classical() {
    CFormulaPtr f = cexpr();
    expect(Tok::End, "end of input");
    auto errs = check_classical(f, sig_);
    if (!errs.empty()) throw ParseError(errs.front(), toks_.front().line, 1);
    return f;
  }

 private:
  const Token& peek(int k = 0) const {
    std::size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(const char* w) const {
    return peek().kind == Tok::Ident && peek().text == w;
  }
  Token expect(Tok k, const char* what) {
    if (!at(k)) {
      throw ParseError(std::string("expected ") + what, peek().line, peek().col);
    }
    return take();
  }

  void post_check(const FormulaPtr& f) {
    for (const auto& e : check_formula(f, sig_)) {
      if (e.rfind("capture violation", 0) == 0) {
        throw ParseError(e, toks_.front().line, toks_.front().col);
      }
    }
  }

  // ---- continuous grammar ----

  FormulaPtr expr() {
    if (at_ident("sup") || at_ident("inf")) {
      bool is_sup = peek().text == "sup";
      take();
      std::vector<std::string> vars;
      vars.push_back(var_name());
      while (at(Tok::Comma)) {
        take();
        vars.push_back(var_name());
      }
      expect(Tok::Dot, "'.' after quantified variables");
      FormulaPtr body = expr();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        body = is_sup ? fml::sup(*it, body) : fml::inf(*it, body);
      }
      return body;
    }
    return sum();
  }

  std::string var_name() {
    Token t = expect(Tok::Ident, "variable name");
    if (sig_.has_symbol(t.text) || is_keyword(t.text)) {
      throw ParseError("cannot bind variable '" + t.text +
                           "': name already has a meaning",
                       t.line, t.col);
    }
    return t.text;
  }

  static bool is_keyword(const std::string& s) {
    return s == "sup" || s == "inf" || s == "max" || s == "min" || s == "d" ||
           s == "pl" || s == "not" || s == "and" || s == "or" ||
           s == "exists" || s == "forall";
  }

  FormulaPtr sum() {
    FormulaPtr f = unary();
    while (at(Tok::DotMinus) || at(Tok::DotPlus)) {
      bool minus = take().kind == Tok::DotMinus;
      FormulaPtr rhs = unary();
      if (minus) {
        // canonical form: 1 -. x is negation
        if (f->kind == Formula::Kind::Const && f->value == 1.0) {
          f = fml::neg(std::move(rhs));
        } else {
          f = fml::dminus(std::move(f), std::move(rhs));
        }
      } else {
        f = fml::tadd(std::move(f), std::move(rhs));
      }
    }
    return f;
  }

  FormulaPtr unary() {
    if (at(Tok::Number) && peek(1).kind == Tok::Star) {
      Token t = take();
      take();  // '*'
      if (!(t.num > 0.0 && t.num <= 1.0)) {
        throw ParseError("scale factor must lie in (0,1]", t.line, t.col);
      }
      return fml::scale(t.num, unary());
    }
    return primary();
  }

  FormulaPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        Token n = take();
        if (!(n.num >= 0.0 && n.num <= 1.0)) {
          throw ParseError("constant outside [0,1]", n.line, n.col);
        }
        return fml::cst(n.num);
      }
      case Tok::LParen: {
        take();
        FormulaPtr f = expr();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Bar: {
        take();
        FormulaPtr a = expr();
        expect(Tok::Minus, "'-' inside |...|");
        FormulaPtr b = expr();
        expect(Tok::Bar, "closing '|'");
        return fml::absdiff(std::move(a), std::move(b));
      }
      case Tok::Ident:
        return named();
      default:
        throw ParseError("expected a formula", t.line, t.col);
    }
  }

  FormulaPtr named() {
    Token t = take();
    const std::string& w = t.text;
    if (w == "max" || w == "min") {
      expect(Tok::LParen, "'('");
      std::vector<FormulaPtr> xs;
      xs.push_back(expr());
      while (at(Tok::Comma)) {
        take();
        xs.push_back(expr());
      }
      expect(Tok::RParen, "')'");
      return w == "max" ? fml::fmax(std::move(xs)) : fml::fmin(std::move(xs));
    }
    if (w == "d") {
      expect(Tok::LParen, "'('");
      Term a = term();
      expect(Tok::Comma, "','");
      Term b = term();
      expect(Tok::RParen, "')'");
      return fml::dist(std::move(a), std::move(b));
    }
    if (w == "pl") {
      PlFunc u = pl_literal(t);
      expect(Tok::LParen, "'('");
      FormulaPtr arg = expr();
      expect(Tok::RParen, "')'");
      return fml::apply("", std::move(u), std::move(arg));
    }
    if (auto it = pl_.find(w); it != pl_.end()) {
      expect(Tok::LParen, "'('");
      FormulaPtr arg = expr();
      expect(Tok::RParen, "')'");
      return fml::apply(w, it->second, std::move(arg));
    }
    if (const PredicateSymbol* ps = sig_.predicate(w)) {
      expect(Tok::LParen, "'('");
      std::vector<Term> args;
      args.push_back(term());
      while (at(Tok::Comma)) {
        take();
        args.push_back(term());
      }
      expect(Tok::RParen, "')'");
      if ((int)args.size() != ps->arity) {
        throw ParseError("arity mismatch for predicate " + w + ": expected " +
                             std::to_string(ps->arity) + ", got " +
                             std::to_string(args.size()),
                         t.line, t.col);
      }
      return fml::pred(w, std::move(args));
    }
    throw ParseError("unknown symbol '" + w + "' in formula position", t.line, t.col);
  }

  PlFunc pl_literal(const Token& at_tok) {
    expect(Tok::LBracket, "'[' after pl");
    std::vector<PlFunc::Point> pts;
    while (true) {
      expect(Tok::LParen, "'('");
      Token x = expect(Tok::Number, "number");
      expect(Tok::Comma, "','");
      Token y = expect(Tok::Number, "number");
      expect(Tok::RParen, "')'");
      pts.emplace_back(x.num, y.num);
      if (at(Tok::Comma)) {
        take();
        continue;
      }
      break;
    }
    expect(Tok::RBracket, "']'");
    try {
      return PlFunc(std::move(pts));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), at_tok.line, at_tok.col);
    }
  }

  Term term() {
    Token t = expect(Tok::Ident, "term");
    const std::string& w = t.text;
    if (at(Tok::LParen)) {
      const FunctionSymbol* fs = sig_.function(w);
      if (!fs) {
        throw ParseError("unknown function symbol '" + w + "'", t.line, t.col);
      }
      take();
      std::vector<Term> args;
      args.push_back(term());
      while (at(Tok::Comma)) {
        take();
        args.push_back(term());
      }
      expect(Tok::RParen, "')'");
      if ((int)args.size() != fs->arity) {
        throw ParseError("arity mismatch for function " + w + ": expected " +
                             std::to_string(fs->arity) + ", got " +
                             std::to_string(args.size()),
                         t.line, t.col);
      }
      return tapp(w, std::move(args));
    }
    if (sig_.has_constant(w)) return tconst(w);
    if (sig_.predicate(w) || sig_.function(w)) {
      throw ParseError("symbol '" + w + "' cannot appear as a variable or constant",
                       t.line, t.col);
    }
    if (is_keyword(w)) {
      throw ParseError("keyword '" + w + "' cannot be a variable", t.line, t.col);
    }
    return tvar(w);
  }

  // ---- classical grammar ----

  CFormulaPtr cexpr() {
    if (at_ident("exists") || at_ident("forall")) {
      bool ex = peek().text == "exists";
      take();
      std::vector<std::string> vars;
      vars.push_back(var_name());
      while (at(Tok::Comma)) {
        take();
        vars.push_back(var_name());
      }
      expect(Tok::Dot, "'.' after quantified variables");
      CFormulaPtr body = cexpr();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        body = ex ? cfml::exists(*it, body) : cfml::forall(*it, body);
      }
      return body;
    }
    return cor();
  }

  CFormulaPtr cor() {
    CFormulaPtr f = cand();
    while (at_ident("or")) {
      take();
      f = cfml::or_(std::move(f), cand());
    }
    return f;
  }

  CFormulaPtr cand() {
    CFormulaPtr f = cunary();
    while (at_ident("and")) {
      take();
      f = cfml::and_(std::move(f), cunary());
    }
    return f;
  }

  CFormulaPtr cunary() {
    if (at_ident("not")) {
      take();
      return cfml::not_(cunary());
    }
    return catom();
  }

  CFormulaPtr catom() {
    if (at(Tok::LParen)) {
      take();
      CFormulaPtr f = cexpr();
      expect(Tok::RParen, "')'");
      return f;
    }
    const Token& t = peek();
    if (t.kind == Tok::Ident && sig_.predicate(t.text) && peek(1).kind == Tok::LParen) {
      Token p = take();
      take();  // '('
      std::vector<Term> args;
      args.push_back(term());
      while (at(Tok::Comma)) {
        take();
        args.push_back(term());
      }
      expect(Tok::RParen, "')'");
      const PredicateSymbol* ps = sig_.predicate(p.text);
      if ((int)args.size() != ps->arity) {
        throw ParseError("arity mismatch for predicate " + p.text, p.line, p.col);
      }
      return cfml::pred(p.text, std::move(args));
    }
    Term a = term();
    expect(Tok::Equal, "'='");
    Term b = term();
    return cfml::eq(std::move(a), std::move(b));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Signature& sig_;
  const PlBindings& pl_;
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, const Signature& sig,
                         const PlBindings& pl, int first_line) {
  Parser p(Lexer(text, first_line).run(), sig, pl);
  return p.formula();
}

CFormulaPtr parse_classical(const std::string& text, const Signature& sig,
                            int first_line) {
  PlBindings none;
  Parser p(Lexer(text, first_line).run(), sig, none);
  return p.classical();
}

FormulaFile read_formula_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open formula file: " + path);
  FormulaFile out;
  std::string line;
  int lineno = 0;
  bool in_body = false;
  std::ostringstream body;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = line;
    auto first = trimmed.find_first_not_of(" \t\r");
    trimmed = first == std::string::npos ? "" : trimmed.substr(first);
    if (!in_body && (trimmed.empty() || trimmed[0] == '#')) continue;
    if (!in_body && trimmed.rfind("pl ", 0) == 0) {
      // pl NAME = (x,y) (x,y) ...
      std::istringstream ls(trimmed.substr(3));
      std::string name, eq;
      ls >> name >> eq;
      if (eq != "=") {
        throw ParseError("malformed pl definition (expected '=')", lineno, 1);
      }
      std::vector<PlFunc::Point> pts;
      char c;
      double x, y;
      while (ls >> c) {
        if (c != '(') throw ParseError("malformed pl breakpoint", lineno, 1);
        if (!(ls >> x >> c >> y) || c != ',') {
          throw ParseError("malformed pl breakpoint", lineno, 1);
        }
        if (!(ls >> c) || c != ')') {
          throw ParseError("malformed pl breakpoint", lineno, 1);
        }
        pts.emplace_back(x, y);
      }
      try {
        out.pl.emplace(name, PlFunc(std::move(pts)));
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), lineno, 1);
      }
      continue;
    }
    if (!in_body) {
      in_body = true;
      out.body_line = lineno;
    }
    body << line << "\n";
  }
  out.body = body.str();
  if (out.body.empty()) {
    throw ParseError("formula file has no formula", lineno, 1);
  }
  return out;
}

}  // namespace clw
