#include "doctest.h"
#include "oracle.hpp"
#include "syntax.hpp"

using namespace telic;

TEST_CASE("parse basic terms") {
  CHECK(term_equal(parse_term("\\x. x"), lam(Name{"x"}, var(Name{"x"}))));
  CHECK(term_equal(parse_term("f x y"),
                   app(app(var(Name{"f"}), var(Name{"x"})), var(Name{"y"}))));
  CHECK(term_equal(parse_term("(\\x. x) y"),
                   app(lam(Name{"x"}, var(Name{"x"})), var(Name{"y"}))));
  CHECK(term_equal(
      parse_term("\\x : Int . x"),
      alam(Name{"x"}, base_type(Name{"Int"}), var(Name{"x"}))));
  CHECK(term_equal(parse_term("let x = y in x"),
                   let(Name{"x"}, var(Name{"y"}), var(Name{"x"}))));
}

TEST_CASE("parse types and schemes") {
  // arrow is right-associative
  CHECK(type_equal(parse_type("Int -> Int -> Bool"),
                   arrow_type(base_type(Name{"Int"}),
                              arrow_type(base_type(Name{"Int"}),
                                         base_type(Name{"Bool"})))));
  PolyType s = parse_scheme("Int -> Int");
  CHECK(s.bound.empty());
  s = parse_scheme("forall a. a -> a");
  REQUIRE(s.bound.size() == 1);
  CHECK(s.bound[0] == Name{"a"});
  CHECK(type_equal(s.body,
                   arrow_type(rigid_type(Name{"a"}), rigid_type(Name{"a"}))));
  CHECK_THROWS_AS(parse_scheme("forall a a. a"), ParseError);
}

TEST_CASE("parse contexts") {
  CHECK(parse_context("").entries.empty());
  Context c = parse_context("y : Int");
  REQUIRE(c.entries.size() == 1);
  CHECK(c.entries[0].first == Name{"y"});
  CHECK(type_equal(c.entries[0].second.body, base_type(Name{"Int"})));

  c = parse_context("f : forall a. a -> a, y : Int");
  REQUIRE(c.entries.size() == 2);
  CHECK(c.entries[0].first == Name{"f"});
  CHECK(c.entries[1].first == Name{"y"});
}

TEST_CASE("context lookup is innermost-first") {
  Context c = parse_context("x : Int, x : Bool");
  const PolyType* s = c.lookup(Name{"x"});
  REQUIRE(s != nullptr);
  CHECK(type_equal(s->body, base_type(Name{"Bool"})));
}

TEST_CASE("printing is minimal") {
  CHECK(print_term(lam(Name{"x"}, var(Name{"x"}))) == "\\x. x");
  CHECK(print_term(app(app(var(Name{"f"}), var(Name{"x"})), var(Name{"y"}))) ==
        "f x y");
  CHECK(print_term(parse_term("f (g x)")) == "f (g x)");
  CHECK(print_term(parse_term("(\\x. x) y")) == "(\\x. x) y");
  CHECK(print_scheme(parse_scheme("forall a. a -> a")) ==
        "forall a. a -> a");
  CHECK(print_type(parse_type("(Int -> Int) -> Bool")) ==
        "(Int -> Int) -> Bool");
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_term("let id");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column > 1);
    CHECK(!e.expected.empty());
  }
  CHECK_THROWS_AS(parse_term(""), ParseError);
  CHECK_THROWS_AS(parse_term("\\Int. x"), ParseError);  // binders are lowercase
  CHECK_THROWS_AS(parse_term("x)"), ParseError);        // trailing input
}

TEST_CASE("parse/print roundtrip on the fuzz corpus") {
  FuzzOptions opts;
  opts.p_free = 0.2;
  for (const TermPtr& t : make_corpus(99, 300, opts)) {
    TermPtr again = parse_term(print_term(t));
    CHECK(term_equal(t, again));
  }
}
