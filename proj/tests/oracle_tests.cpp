#include "doctest.h"
#include "oracle.hpp"
#include "syntax.hpp"

using namespace telic;

TEST_CASE("oracle hand-run examples") {
  auto r = oracle_infer(parse_context("y : Int"), parse_term("(\\x. x) y"));
  REQUIRE(std::holds_alternative<PolyType>(r));
  CHECK(print_scheme(std::get<PolyType>(r)) == "Int");

  r = oracle_infer(Context{}, parse_term("let id = \\x. x in id id"));
  REQUIRE(std::holds_alternative<PolyType>(r));
  CHECK(equiv_scheme(std::get<PolyType>(r), parse_scheme("forall a. a -> a")));

  r = oracle_infer(Context{}, parse_term("\\x. x x"));
  REQUIRE(std::holds_alternative<WError>(r));
  CHECK(std::get<WError>(r).kind == FailureKind::OccursCheck);

  r = oracle_infer(Context{}, parse_term("x"));
  REQUIRE(std::holds_alternative<WError>(r));
  CHECK(std::get<WError>(r).kind == FailureKind::UnboundVariable);
}

TEST_CASE("scheme equivalence") {
  CHECK(equiv_scheme(parse_scheme("forall a. a -> a"),
                     parse_scheme("forall b. b -> b")));
  CHECK(!equiv_scheme(parse_scheme("forall a. a -> a"),
                      parse_scheme("Int -> Int")));
  // binder list order is irrelevant after canonicalization
  PolyType x{{Name{"a"}, Name{"b"}},
             arrow_type(rigid_type(Name{"a"}), rigid_type(Name{"b"}))};
  PolyType y{{Name{"b"}, Name{"a"}},
             arrow_type(rigid_type(Name{"a"}), rigid_type(Name{"b"}))};
  CHECK(equiv_scheme(x, y));
  // unused binders are dropped
  PolyType z{{Name{"a"}, Name{"c"}},
             arrow_type(rigid_type(Name{"a"}), rigid_type(Name{"a"}))};
  CHECK(equiv_scheme(z, parse_scheme("forall a. a -> a")));
  // free rigids must match exactly
  CHECK(!equiv_scheme(PolyType{{}, rigid_type(Name{"a"})},
                      PolyType{{}, rigid_type(Name{"b"})}));
}

TEST_CASE("corpus generation is deterministic and bounded") {
  FuzzOptions opts;
  auto a = make_corpus(42, 50, opts);
  auto b = make_corpus(42, 50, opts);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); i++) CHECK(term_equal(a[i], b[i]));

  auto other = make_corpus(43, 50, opts);
  bool all_same = true;
  for (size_t i = 0; i < a.size(); i++)
    if (!term_equal(a[i], other[i])) all_same = false;
  CHECK(!all_same);

  // size and depth bounds
  auto measure = [](const TermPtr& t, auto&& self) -> std::pair<int, int> {
    return std::visit(
        overload{[&](const Var&) { return std::pair{1, 1}; },
                 [&](const Lam& l) {
                   auto [s, d] = self(l.body, self);
                   return std::pair{s + 1, d + 1};
                 },
                 [&](const ALam& l) {
                   auto [s, d] = self(l.body, self);
                   return std::pair{s + 1, d + 1};
                 },
                 [&](const App& x) {
                   auto [s1, d1] = self(x.fun, self);
                   auto [s2, d2] = self(x.arg, self);
                   return std::pair{s1 + s2 + 1, std::max(d1, d2) + 1};
                 },
                 [&](const Let& l) {
                   auto [s1, d1] = self(l.bound, self);
                   auto [s2, d2] = self(l.body, self);
                   return std::pair{s1 + s2 + 1, std::max(d1, d2) + 1};
                 }},
        t->node);
  };
  for (const TermPtr& t : a) {
    auto [size, depth] = measure(t, measure);
    // A binary node picked with one unit of budget left still gets two leaf
    // children, so the overshoot is bounded by the depth limit.
    CHECK(size <= opts.max_size + opts.max_depth);
    CHECK(depth <= opts.max_depth + 1);
  }

  std::string dump = dump_corpus(42, a);
  CHECK(dump.rfind("# seed=42\n", 0) == 0);
  CHECK(std::count(dump.begin(), dump.end(), '\n') == 51);
}
