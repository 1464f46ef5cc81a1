#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "types.hpp"

namespace telic {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Var {
  Name name;
};
struct Lam {
  Name binder;
  TermPtr body;
};
struct ALam {
  Name binder;
  TypePtr annotation;
  TermPtr body;
};
struct App {
  TermPtr fun;
  TermPtr arg;
};
struct Let {
  Name binder;
  TermPtr bound;
  TermPtr body;
};

struct Term {
  std::variant<Var, Lam, ALam, App, Let> node;
};

TermPtr var(Name n);
TermPtr lam(Name binder, TermPtr body);
TermPtr alam(Name binder, TypePtr annotation, TermPtr body);
TermPtr app(TermPtr fun, TermPtr arg);
TermPtr let(Name binder, TermPtr bound, TermPtr body);

bool term_equal(const TermPtr& a, const TermPtr& b);

struct ParseError : std::runtime_error {
  int line;
  int column;
  std::vector<std::string> expected;
  ParseError(std::string msg, int line, int column,
             std::vector<std::string> expected);
};

TermPtr parse_term(const std::string& text);
TypePtr parse_type(const std::string& text);
PolyType parse_scheme(const std::string& text);
Context parse_context(const std::string& text);

std::string print_term(const TermPtr& t);
std::string print_type(const TypePtr& t);
std::string print_scheme(const PolyType& s);

}  // namespace telic
