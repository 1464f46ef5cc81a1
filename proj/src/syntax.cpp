#include "syntax.hpp"

#include <cctype>
#include <sstream>

namespace telic {

TermPtr var(Name n) { return std::make_shared<const Term>(Term{Var{std::move(n)}}); }
TermPtr lam(Name binder, TermPtr body) {
  return std::make_shared<const Term>(Term{Lam{std::move(binder), std::move(body)}});
}
TermPtr alam(Name binder, TypePtr annotation, TermPtr body) {
  return std::make_shared<const Term>(
      Term{ALam{std::move(binder), std::move(annotation), std::move(body)}});
}
TermPtr app(TermPtr fun, TermPtr arg) {
  return std::make_shared<const Term>(Term{App{std::move(fun), std::move(arg)}});
}
TermPtr let(Name binder, TermPtr bound, TermPtr body) {
  return std::make_shared<const Term>(
      Term{Let{std::move(binder), std::move(bound), std::move(body)}});
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->node.index() != b->node.index()) return false;
  return std::visit(
      overload{
          [&](const Var& x) { return x.name == std::get<Var>(b->node).name; },
          [&](const Lam& x) {
            auto& y = std::get<Lam>(b->node);
            return x.binder == y.binder && term_equal(x.body, y.body);
          },
          [&](const ALam& x) {
            auto& y = std::get<ALam>(b->node);
            return x.binder == y.binder &&
                   type_equal(x.annotation, y.annotation) &&
                   term_equal(x.body, y.body);
          },
          [&](const App& x) {
            auto& y = std::get<App>(b->node);
            return term_equal(x.fun, y.fun) && term_equal(x.arg, y.arg);
          },
          [&](const Let& x) {
            auto& y = std::get<Let>(b->node);
            return x.binder == y.binder && term_equal(x.bound, y.bound) &&
                   term_equal(x.body, y.body);
          },
      },
      a->node);
}

ParseError::ParseError(std::string msg, int line, int column,
                       std::vector<std::string> expected)
    : std::runtime_error(std::move(msg)),
      line(line),
      column(column),
      expected(std::move(expected)) {}

namespace {

enum class Tok {
  Name,     // identifier, lowercase or uppercase initial
  Lambda,   // "\"
  Dot,      // "."
  LParen,
  RParen,
  Colon,
  Comma,
  Arrow,    // "->"
  Equals,   // "="
  KwLet,
  KwIn,
  KwForall,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Name: return "identifier";
    case Tok::Lambda: return "'\\'";
    case Tok::Dot: return "'.'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Colon: return "':'";
    case Tok::Comma: return "','";
    case Tok::Arrow: return "'->'";
    case Tok::Equals: return "'='";
    case Tok::KwLet: return "'let'";
    case Tok::KwIn: return "'in'";
    case Tok::KwForall: return "'forall'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto bump = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      bump(1);
      continue;
    }
    int tl = line, tc = col;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_' || text[j] == '\''))
        ++j;
      std::string word = text.substr(i, j - i);
      Tok kind = Tok::Name;
      if (word == "let") kind = Tok::KwLet;
      else if (word == "in") kind = Tok::KwIn;
      else if (word == "forall") kind = Tok::KwForall;
      out.push_back({kind, word, tl, tc});
      bump(j - i);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({Tok::Arrow, "->", tl, tc});
      bump(2);
      continue;
    }
    Tok kind;
    switch (c) {
      case '\\': kind = Tok::Lambda; break;
      case '.': kind = Tok::Dot; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case ':': kind = Tok::Colon; break;
      case ',': kind = Tok::Comma; break;
      case '=': kind = Tok::Equals; break;
      default:
        throw ParseError("parse error at " + std::to_string(tl) + ":" +
                             std::to_string(tc) + ": unexpected character '" +
                             std::string(1, c) + "'",
                         tl, tc, {});
    }
    out.push_back({kind, std::string(1, c), tl, tc});
    bump(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;

  const Token& peek() const { return toks[pos]; }
  Token next() { return toks[pos++]; }
  bool at(Tok k) const { return peek().kind == k; }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    const Token& t = peek();
    std::string msg = "parse error at " + std::to_string(t.line) + ":" +
                      std::to_string(t.column) + ": expected ";
    for (size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += " or ";
      msg += expected[i];
    }
    msg += ", got ";
    msg += t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg, t.line, t.column, std::move(expected));
  }

  Token expect(Tok k) {
    if (!at(k)) fail({tok_name(k)});
    return next();
  }

  Name name() {
    Token t = expect(Tok::Name);
    return Name{t.text};
  }

  Name lower_name() {
    if (!at(Tok::Name) || std::isupper(static_cast<unsigned char>(peek().text[0])))
      fail({"lowercase identifier"});
    return Name{next().text};
  }

  // type := atype ["->" type]   (right associative)
  TypePtr type() {
    TypePtr lhs = atype();
    if (at(Tok::Arrow)) {
      next();
      return arrow_type(lhs, type());
    }
    return lhs;
  }

  TypePtr atype() {
    if (at(Tok::LParen)) {
      next();
      TypePtr t = type();
      expect(Tok::RParen);
      return t;
    }
    if (at(Tok::Name)) {
      Token t = next();
      if (std::isupper(static_cast<unsigned char>(t.text[0])))
        return base_type(Name{t.text});
      return rigid_type(Name{t.text});
    }
    fail({"identifier", "'('"});
  }

  PolyType scheme() {
    if (at(Tok::KwForall)) {
      Token kw = next();
      std::vector<Name> bound;
      bound.push_back(lower_name());
      while (at(Tok::Name)) bound.push_back(lower_name());
      expect(Tok::Dot);
      for (size_t i = 0; i < bound.size(); ++i)
        for (size_t j = i + 1; j < bound.size(); ++j)
          if (bound[i] == bound[j])
            throw ParseError("parse error at " + std::to_string(kw.line) + ":" +
                                 std::to_string(kw.column) +
                                 ": duplicate bound variable '" +
                                 bound[i].text + "'",
                             kw.line, kw.column, {});
      return PolyType{std::move(bound), type()};
    }
    return mono_scheme(type());
  }

  // term := lam | let | app
  TermPtr term() {
    if (at(Tok::Lambda)) {
      next();
      Name binder = lower_name();
      if (at(Tok::Colon)) {
        next();
        TypePtr ann = type();
        expect(Tok::Dot);
        return alam(binder, ann, term());
      }
      expect(Tok::Dot);
      return lam(binder, term());
    }
    if (at(Tok::KwLet)) {
      next();
      Name binder = lower_name();
      expect(Tok::Equals);
      TermPtr bound = term();
      expect(Tok::KwIn);
      return let(binder, bound, term());
    }
    return application();
  }

  TermPtr application() {
    TermPtr t = atom_or_fail();
    while (true) {
      if (at(Tok::Name) &&
          !std::isupper(static_cast<unsigned char>(peek().text[0]))) {
        t = app(t, var(Name{next().text}));
      } else if (at(Tok::LParen)) {
        next();
        TermPtr arg = term();
        expect(Tok::RParen);
        t = app(t, arg);
      } else {
        break;
      }
    }
    return t;
  }

  TermPtr atom_or_fail() {
    if (at(Tok::Name) &&
        !std::isupper(static_cast<unsigned char>(peek().text[0])))
      return var(Name{next().text});
    if (at(Tok::LParen)) {
      next();
      TermPtr t = term();
      expect(Tok::RParen);
      return t;
    }
    fail({"identifier", "'('", "'\\'", "'let'"});
  }

  Context context() {
    Context out;
    if (at(Tok::End)) return out;
    while (true) {
      Name n = lower_name();
      expect(Tok::Colon);
      out.entries.emplace_back(std::move(n), scheme());
      if (!at(Tok::Comma)) break;
      next();
    }
    return out;
  }

  void eof() {
    if (!at(Tok::End)) fail({"end of input"});
  }
};

}  // namespace

TermPtr parse_term(const std::string& text) {
  Parser p{lex(text)};
  TermPtr t = p.term();
  p.eof();
  return t;
}

TypePtr parse_type(const std::string& text) {
  Parser p{lex(text)};
  TypePtr t = p.type();
  p.eof();
  return t;
}

PolyType parse_scheme(const std::string& text) {
  Parser p{lex(text)};
  PolyType s = p.scheme();
  p.eof();
  return s;
}

Context parse_context(const std::string& text) {
  Parser p{lex(text)};
  Context c = p.context();
  p.eof();
  return c;
}

namespace {

// Positions a subterm is printed in; decides the minimal parentheses.
enum class Pos { Top, AppFun, AppArg };

void print_into(const TermPtr& t, std::string& out, Pos pos) {
  std::visit(
      overload{
          [&](const Var& v) { out += v.name.text; },
          [&](const Lam& l) {
            bool paren = pos != Pos::Top;
            if (paren) out += '(';
            out += "\\" + l.binder.text + ". ";
            print_into(l.body, out, Pos::Top);
            if (paren) out += ')';
          },
          [&](const ALam& l) {
            bool paren = pos != Pos::Top;
            if (paren) out += '(';
            out += "\\" + l.binder.text + " : " + render_type(l.annotation) +
                   ". ";
            print_into(l.body, out, Pos::Top);
            if (paren) out += ')';
          },
          [&](const App& a) {
            bool paren = pos == Pos::AppArg;
            if (paren) out += '(';
            print_into(a.fun, out, Pos::AppFun);
            out += ' ';
            print_into(a.arg, out, Pos::AppArg);
            if (paren) out += ')';
          },
          [&](const Let& l) {
            bool paren = pos != Pos::Top;
            if (paren) out += '(';
            out += "let " + l.binder.text + " = ";
            print_into(l.bound, out, Pos::Top);
            out += " in ";
            print_into(l.body, out, Pos::Top);
            if (paren) out += ')';
          },
      },
      t->node);
}

}  // namespace

std::string print_term(const TermPtr& t) {
  std::string out;
  print_into(t, out, Pos::Top);
  return out;
}

std::string print_type(const TypePtr& t) { return render_type(t); }
std::string print_scheme(const PolyType& s) { return render_scheme(s); }

}  // namespace telic
