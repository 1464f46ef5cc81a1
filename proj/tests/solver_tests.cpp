#include "doctest.h"
#include "flat.hpp"
#include "oracle.hpp"
#include "solver.hpp"
#include "syntax.hpp"

using namespace telic;

namespace {

const TypePtr Int = base_type(Name{"Int"});
const TypePtr Bool = base_type(Name{"Bool"});

// Reads an Ambiguous result as an implicitly quantified scheme so it can be
// compared up to renaming.
PolyType as_scheme(const SolveResult& r) {
  PolyType s = *r.result;
  if (s.bound.empty()) s.bound = free_rigids(s.body);
  return s;
}

}  // namespace

TEST_CASE("unification basics") {
  MetaStore store;
  store.declare(0, MetaKind::Mono);
  CHECK(!unify(store, meta_type(0), Int));
  CHECK(type_equal(*store.entry(0).solution, Int));

  MetaStore s2;
  s2.declare(0, MetaKind::Mono);
  auto err = unify(s2, meta_type(0), arrow_type(meta_type(0), Int));
  REQUIRE(err.has_value());
  CHECK(err->kind == FailureKind::OccursCheck);

  MetaStore s3;
  s3.declare(1, MetaKind::Mono);
  s3.declare(2, MetaKind::Mono);
  CHECK(!unify(s3, arrow_type(meta_type(1), meta_type(2)),
               arrow_type(Int, Bool)));
  Assignment a{{1, *s3.entry(1).solution}, {2, *s3.entry(2).solution}};
  CHECK(satisfies(EqTy{arrow_type(meta_type(1), meta_type(2)),
                       arrow_type(Int, Bool)},
                  a, {}));

  MetaStore s4;
  s4.declare(0, MetaKind::Mono);
  auto err2 = unify(s4, meta_type(0), meta_type(0));
  CHECK(!err2);  // reflexive, no binding
  CHECK(!s4.entry(0).solution);
}

TEST_CASE("instantiate declares fresh metas at the store end") {
  MetaStore store;
  Session sess;
  TypePtr t = instantiate(store, sess, parse_scheme("forall a. a -> a"));
  const auto* arr = std::get_if<TArrow>(&t->node);
  REQUIRE(arr != nullptr);
  CHECK(type_equal(arr->param, arr->result));
  CHECK(store.size() == 1);
}

TEST_CASE("generalize quantifies region metas in first-occurrence order") {
  MetaStore store;
  store.declare(0, MetaKind::Mono);
  PolyType s = generalize(store, 0, arrow_type(meta_type(0), meta_type(0)),
                          {}, {});
  CHECK(print_scheme(s) == "forall a. a -> a");

  MetaStore s2;
  CHECK(print_scheme(generalize(s2, 0, Int, {}, {})) == "Int");

  // a meta visible from an outer scope frame escapes
  MetaStore s3;
  s3.declare(0, MetaKind::Mono);
  s3.declare(1, MetaKind::Mono);
  std::vector<std::pair<Name, PolyType>> outer{
      {Name{"y"}, mono_scheme(meta_type(0))}};
  PolyType g = generalize(s3, 0, arrow_type(meta_type(0), meta_type(1)),
                          outer, {});
  REQUIRE(g.bound.size() == 1);
  CHECK(free_metas(g.body) == std::set<int>{0});
}

TEST_CASE("solving the application example") {
  TermPtr t = parse_term("(\\x. x) y");
  SolveResult ok = solve_tree(build_tree_stlc(t, parse_context("y : Int")));
  REQUIRE(ok.status == SolveResult::Status::Solved);
  CHECK(type_equal(ok.result->body, Int));

  SolveResult bad = solve_tree(build_tree_stlc(t, Context{}));
  REQUIRE(bad.status == SolveResult::Status::Failed);
  CHECK(bad.failure->kind == FailureKind::UnboundVariable);
  CHECK(bad.failure->path == std::vector<int>{2, 0});
}

TEST_CASE("ambiguity and occurs failures") {
  SolveResult amb = solve_tree(build_tree_stlc(parse_term("\\x. x"), Context{}));
  REQUIRE(amb.status == SolveResult::Status::Ambiguous);
  CHECK(amb.unsolved_metas.size() == 1);
  CHECK(print_type(amb.result->body) == "a -> a");

  SolveResult occ =
      solve_tree(build_tree_stlc(parse_term("\\x. x x"), Context{}));
  REQUIRE(occ.status == SolveResult::Status::Failed);
  CHECK(occ.failure->kind == FailureKind::OccursCheck);
}

TEST_CASE("solved quantifiers carry solutions in the annotated tree") {
  SolveResult r = solve_tree(
      build_tree_stlc(parse_term("(\\x. x) y"), parse_context("y : Int")));
  REQUIRE(r.status == SolveResult::Status::Solved);
  int with_solution = 0, total = 0;
  auto scan = [&](const Telescope& t, auto&& self) -> void {
    for (const TreeNode& n : t.nodes)
      std::visit(overload{[&](const Quantify& q) {
                            total++;
                            if (q.solution || q.scheme_solution) with_solution++;
                          },
                          [&](const Constr&) {},
                          [&](const Branch& b) {
                            for (const Telescope& c : b.children) self(c, self);
                          }},
                 n.node);
  };
  scan(r.annotated, scan);
  CHECK(total == 5);
  CHECK(with_solution == total);
}

TEST_CASE("store discipline and substitution idempotence over the corpus") {
  FuzzOptions opts;
  for (const TermPtr& t : make_corpus(31, 150, opts)) {
    SolveResult r = infer(t, Context{}, System::Hm, HmStart::Poly);
    // every solution references only earlier entries
    std::map<int, size_t> pos;
    for (size_t i = 0; i < r.store.size(); i++) pos[r.store[i].meta] = i;
    for (size_t i = 0; i < r.store.size(); i++) {
      std::set<int> used;
      if (r.store[i].solution) used = free_metas(*r.store[i].solution);
      if (r.store[i].scheme_solution)
        used = free_metas(r.store[i].scheme_solution->body);
      for (int m : used) CHECK(pos.at(m) < i);
    }
    if (r.status != SolveResult::Status::Failed) {
      // applying the final store twice equals applying it once
      Assignment a;
      for (const StoreEntry& e : r.store)
        if (e.solution) a[e.meta] = *e.solution;
      TypePtr once = apply_assignment(a, r.result->body);
      CHECK(type_equal(apply_assignment(a, once), once));
    }
  }
}

TEST_CASE("infer, check and free-variable modes") {
  CHECK(type_equal(
      infer(parse_term("(\\x. x) y"), parse_context("y : Int"), System::Stlc)
          .result->body,
      Int));

  SolveResult c = check(parse_term("\\x. x"), Context{},
                        parse_type("Int -> Bool"), System::Stlc);
  REQUIRE(c.status == SolveResult::Status::Failed);
  CHECK(c.failure->kind == FailureKind::Mismatch);

  CHECK(check(parse_term("\\x. x"), Context{}, parse_type("Int -> Int"),
              System::Stlc)
            .status == SolveResult::Status::Solved);

  SolveResult fv = free_vars(parse_term("f (g x)"), Context{}, System::Stlc);
  REQUIRE(fv.requirements.size() == 3);
  std::map<std::string, TypePtr> req;
  for (const auto& [n, ty] : fv.requirements) req[n.text] = ty;
  // up to renaming: x : a, g : a -> b, f : b -> c, result c
  const auto* gt = std::get_if<TArrow>(&req["g"]->node);
  const auto* ft = std::get_if<TArrow>(&req["f"]->node);
  REQUIRE(gt != nullptr);
  REQUIRE(ft != nullptr);
  CHECK(type_equal(gt->param, req["x"]));
  CHECK(type_equal(gt->result, ft->param));
  CHECK(type_equal(ft->result, fv.result->body));
  // the same requirements, used as a context, reproduce the result
  Context ctx;
  for (const auto& [n, ty] : fv.requirements)
    ctx = ctx.extended(n, mono_scheme(ty));
  SolveResult again = infer(parse_term("f (g x)"), ctx, System::Stlc);
  CHECK(equiv_scheme(as_scheme(again), as_scheme(fv)));
}

TEST_CASE("scoped generalisation in HM") {
  SolveResult r =
      infer(parse_term("let id = \\x. x in id id"), Context{}, System::Hm);
  REQUIRE(r.status == SolveResult::Status::Solved);
  CHECK(print_scheme(*r.result) == "forall a. a -> a");

  r = infer(parse_term("\\y. let f = \\x. y in f"), Context{}, System::Hm);
  REQUIRE(r.status == SolveResult::Status::Solved);
  CHECK(print_scheme(*r.result) == "forall a b. a -> b -> a");

  r = infer(parse_term("\\x. x x"), Context{}, System::Hm);
  REQUIRE(r.status == SolveResult::Status::Failed);
  CHECK(r.failure->kind == FailureKind::OccursCheck);
}

TEST_CASE("annotation consistency") {
  SolveResult r = infer(parse_term("\\x : Int . x"), Context{}, System::Stlc);
  REQUIRE(r.status == SolveResult::Status::Solved);
  CHECK(print_type(r.result->body) == "Int -> Int");

  CHECK(check(parse_term("\\x : Int . x"), Context{},
              parse_type("Int -> Int"), System::Stlc)
            .status == SolveResult::Status::Solved);
  SolveResult bad = check(parse_term("\\x : Int . x"), Context{},
                          parse_type("Bool -> Int"), System::Stlc);
  REQUIRE(bad.status == SolveResult::Status::Failed);
  CHECK(bad.failure->kind == FailureKind::Mismatch);
}

TEST_CASE("classification") {
  CHECK(classify(infer(parse_term("\\x : Int . x"), Context{}, System::Stlc)) ==
        Verdict::Sat);
  CHECK(classify(infer(parse_term("\\x. x"), Context{}, System::Stlc)) ==
        Verdict::Unknown);
  CHECK(classify(infer(parse_term("\\x. x x"), Context{}, System::Stlc)) ==
        Verdict::Unsat);
}

TEST_CASE("lifting preserves solutions over the corpus") {
  FuzzOptions opts;
  opts.allow_let = false;
  for (const TermPtr& t : make_corpus(32, 150, opts)) {
    Telescope tree = build_tree_stlc(t, Context{});
    SolveResult before = solve_tree(tree);
    SolveResult after = solve_tree(lift_quantifiers(tree));
    if (before.status == SolveResult::Status::Failed) {
      REQUIRE(after.status == SolveResult::Status::Failed);
      CHECK(after.failure->kind == before.failure->kind);
    } else {
      REQUIRE(after.status != SolveResult::Status::Failed);
      CHECK(equiv_scheme(as_scheme(before), as_scheme(after)));
    }
  }
}

TEST_CASE("polymorphic context bindings work in STLC mode") {
  SolveResult r = infer(parse_term("f y"),
                        parse_context("f : forall a. a -> a, y : Int"),
                        System::Stlc);
  REQUIRE(r.status == SolveResult::Status::Solved);
  CHECK(type_equal(r.result->body, Int));
}
