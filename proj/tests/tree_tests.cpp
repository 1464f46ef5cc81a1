#include <map>

#include "doctest.h"
#include "oracle.hpp"
#include "syntax.hpp"
#include "tree.hpp"

using namespace telic;

namespace {

struct Counts {
  int quantifiers = 0;
  std::map<std::string, int> kinds;
};

void count_nodes(const Telescope& t, Counts& c) {
  for (const TreeNode& n : t.nodes)
    std::visit(overload{[&](const Quantify&) { c.quantifiers++; },
                        [&](const Constr& k) {
                          c.kinds[std::visit(
                              [](const auto& x) {
                                using T = std::decay_t<decltype(x)>;
                                if constexpr (std::is_same_v<T, EqTy>) return "EqTy";
                                else if constexpr (std::is_same_v<T, DupTy>) return "DupTy";
                                else if constexpr (std::is_same_v<T, InCtx>) return "InCtx";
                                else if constexpr (std::is_same_v<T, ExtendCtx>) return "ExtendCtx";
                                else if constexpr (std::is_same_v<T, DupCtx>) return "DupCtx";
                                else if constexpr (std::is_same_v<T, Inst>) return "Inst";
                                else if constexpr (std::is_same_v<T, GenInCtx>) return "GenInCtx";
                                else if constexpr (std::is_same_v<T, Ask>) return "Ask";
                                else if constexpr (std::is_same_v<T, Tell>) return "Tell";
                                else if constexpr (std::is_same_v<T, GenOpen>) return "GenOpen";
                                else return "GenClose";
                              },
                              k.c)]++;
                        },
                        [&](const Branch& b) {
                          for (const Telescope& child : b.children)
                            count_nodes(child, c);
                        }},
               n.node);
}

struct TermCounts {
  int vars = 0, lams = 0, apps = 0, alams = 0, lets = 0;
};

void count_term(const TermPtr& t, TermCounts& c) {
  std::visit(overload{[&](const Var&) { c.vars++; },
                      [&](const Lam& l) {
                        c.lams++;
                        count_term(l.body, c);
                      },
                      [&](const ALam& l) {
                        c.alams++;
                        count_term(l.body, c);
                      },
                      [&](const App& a) {
                        c.apps++;
                        count_term(a.fun, c);
                        count_term(a.arg, c);
                      },
                      [&](const Let& l) {
                        c.lets++;
                        count_term(l.bound, c);
                        count_term(l.body, c);
                      }},
             t->node);
}

}  // namespace

TEST_CASE("golden tree for the application example") {
  Telescope t = build_tree_stlc(parse_term("(\\x. x) y"), Context{});
  CHECK(render_tree_text(t) ==
        "?t0\n"
        "?t1\n"
        "?t2\n"
        "t2 -> t0 ~ t1\n"
        "|\n"
        "  ?t3\n"
        "  ?t4\n"
        "  t1 ~ t3 -> t4\n"
        "  tell x : t3\n"
        "  ask x : t4\n"
        "|\n"
        "  ask y : t2\n");
  // byte-stable across runs
  CHECK(render_tree_text(build_tree_stlc(parse_term("(\\x. x) y"), Context{})) ==
        render_tree_text(t));
}

TEST_CASE("small STLC trees") {
  CHECK(render_tree_text(build_tree_stlc(parse_term("x"), Context{})) ==
        "?t0\nask x : t0\n");
  CHECK(render_tree_text(build_tree_stlc(parse_term("\\x. x"), Context{})) ==
        "?t0\n?t1\n?t2\nt0 ~ t1 -> t2\ntell x : t1\nask x : t2\n");
}

TEST_CASE("STLC generation rejects let") {
  CHECK_THROWS_AS(build_tree_stlc(parse_term("let x = y in x"), Context{}),
                  std::invalid_argument);
}

TEST_CASE("HM trees follow the start forms") {
  CHECK(render_tree_text(
            build_tree_hm(parse_term("x"), Context{}, HmStart::Mono)) ==
        "?t0\n?s1\nask x : s1\ns1 <= t0\n");
  CHECK(render_tree_text(
            build_tree_hm(parse_term("\\x. x"), Context{}, HmStart::Poly)) ==
        "?s0\ngen[\n?t1\n]gen s0 := t1\n?t2\n?t3\nt1 ~ t2 -> t3\n"
        "tell x : t2\n?s4\nask x : s4\ns4 <= t3\n");
}

TEST_CASE("HM let shape has a generalisation region around the bound term") {
  Telescope t = build_tree_hm(parse_term("let id = \\x. x in id"), Context{},
                              HmStart::Mono);
  CHECK(render_tree_text(t) ==
        "?t0\n"
        "?s1\n"
        "|\n"
        "  gen[\n"
        "  ?t2\n"
        "  ]gen s1 := t2\n"
        "  ?t3\n"
        "  ?t4\n"
        "  t2 ~ t3 -> t4\n"
        "  tell x : t3\n"
        "  ?s5\n"
        "  ask x : s5\n"
        "  s5 <= t4\n"
        "|\n"
        "  tell id : s1\n"
        "  ?s6\n"
        "  ask id : s6\n"
        "  s6 <= t0\n");
}

TEST_CASE("node-count law over the corpus") {
  FuzzOptions opts;
  opts.allow_let = false;
  for (const TermPtr& t : make_corpus(5, 200, opts)) {
    Counts c;
    count_nodes(build_tree_stlc(t, Context{}), c);
    TermCounts tc;
    count_term(t, tc);
    CHECK(c.quantifiers == 1 + 2 * tc.lams + 2 * tc.apps + 3 * tc.alams);
    CHECK(c.kinds["Ask"] == tc.vars);
    CHECK(c.kinds["Tell"] == tc.lams + tc.alams);
    CHECK(c.kinds["EqTy"] == tc.lams + tc.apps + tc.alams);
    CHECK(c.kinds["DupTy"] == tc.alams);
  }
}

TEST_CASE("scope discipline over the corpus") {
  FuzzOptions stlc_opts;
  stlc_opts.allow_let = false;
  for (const TermPtr& t : make_corpus(6, 150, stlc_opts))
    CHECK(scope_disciplined(build_tree_stlc(t, Context{})));
  FuzzOptions hm_opts;
  for (const TermPtr& t : make_corpus(7, 150, hm_opts)) {
    CHECK(scope_disciplined(build_tree_hm(t, Context{}, HmStart::Mono)));
    CHECK(scope_disciplined(build_tree_hm(t, Context{}, HmStart::Poly)));
  }
}

TEST_CASE("monomorphic HM trees mirror STLC plus one var triple") {
  FuzzOptions opts;
  opts.allow_let = false;
  opts.allow_annot = false;
  for (const TermPtr& t : make_corpus(8, 150, opts)) {
    Counts stlc, hm;
    count_nodes(build_tree_stlc(t, Context{}), stlc);
    count_nodes(build_tree_hm(t, Context{}, HmStart::Mono), hm);
    TermCounts tc;
    count_term(t, tc);
    CHECK(hm.quantifiers == stlc.quantifiers + tc.vars);
    CHECK(hm.kinds["Ask"] == stlc.kinds["Ask"]);
    CHECK(hm.kinds["Inst"] == tc.vars);
    CHECK(hm.kinds["EqTy"] == stlc.kinds["EqTy"]);
    CHECK(hm.kinds["Tell"] == stlc.kinds["Tell"]);
  }
}

TEST_CASE("quantifier lifting") {
  Telescope t = build_tree_stlc(parse_term("(\\x. x) y"), Context{});
  Telescope lifted = lift_quantifiers(t);
  CHECK(render_tree_text(lifted) ==
        "?t0\n"
        "?t1\n"
        "?t2\n"
        "?t3\n"
        "?t4\n"
        "t2 -> t0 ~ t1\n"
        "|\n"
        "  t1 ~ t3 -> t4\n"
        "  tell x : t3\n"
        "  ask x : t4\n"
        "|\n"
        "  ask y : t2\n");
  CHECK(telescope_equal(lift_quantifiers(lifted), lifted));  // idempotent
  CHECK_THROWS_AS(
      lift_quantifiers(build_tree_hm(parse_term("let x = y in x"), Context{},
                                     HmStart::Mono)),
      std::invalid_argument);
}

TEST_CASE("tree renderings exist in all formats") {
  Telescope t = build_tree_stlc(parse_term("(\\x. x) y"),
                                parse_context("y : Int"));
  std::string text = render_tree_text(t);
  CHECK(text.rfind("ctx: y : Int\n", 0) == 0);
  CHECK(render_tree_json(t).find("\"quantify\"") != std::string::npos);
  CHECK(render_tree_dot(t).rfind("digraph", 0) == 0);
}
