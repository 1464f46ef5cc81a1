// Acceptance checks for the typechecker, one verdict line each.
#include <chrono>
#include <cstdio>
#include <string>

#include "flat.hpp"
#include "modes.hpp"
#include "oracle.hpp"
#include "solver.hpp"
#include "syntax.hpp"

using namespace telic;

namespace {

int failures = 0;

void report(int n, const char* what, bool ok, const std::string& detail = "") {
  std::printf("%s %d: %s%s%s\n", ok ? "PASS" : "FAIL", n, what,
              detail.empty() ? "" : " — ", detail.c_str());
  if (!ok) failures++;
}

PolyType as_scheme(const SolveResult& r) {
  PolyType s = *r.result;
  if (s.bound.empty()) s.bound = free_rigids(s.body);
  return s;
}

constexpr std::uint64_t kSeed = 20260826;

}  // namespace

// The worked application example reproduces, byte-stable.
static void criterion1() {
  const std::string golden =
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
      "  ask y : t2\n";
  std::string a =
      render_tree_text(build_tree_stlc(parse_term("(\\x. x) y"), Context{}));
  std::string b =
      render_tree_text(build_tree_stlc(parse_term("(\\x. x) y"), Context{}));
  report(1, "golden constraint tree for (\\x. x) y", a == golden && b == a);
}

// Differential agreement with the reference implementation on 1,000 terms.
static void criterion2() {
  auto t0 = std::chrono::steady_clock::now();
  auto corpus = make_corpus(kSeed, 1000, FuzzOptions{});
  int bad = 0;
  std::string first;
  for (const TermPtr& t : corpus) {
    SolveResult sr = infer(t, Context{}, System::Hm, HmStart::Poly);
    auto wr = oracle_infer(Context{}, t);
    bool solver_ok = sr.status != SolveResult::Status::Failed;
    bool oracle_ok = std::holds_alternative<PolyType>(wr);
    bool agree = solver_ok == oracle_ok;
    if (agree && solver_ok)
      agree = equiv_scheme(as_scheme(sr), std::get<PolyType>(wr));
    if (agree && !solver_ok)
      agree = sr.failure->kind == std::get<WError>(wr).kind;
    if (!agree) {
      bad++;
      if (first.empty()) first = print_term(t);
    }
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  report(2, "solver agrees with the reference on 1000 terms",
         bad == 0 && ms < 10000,
         bad ? "first disagreement: " + first
             : std::to_string(ms) + " ms");
}

// Every metavariable occurs exactly twice across the flat constraint sets.
static void criterion3() {
  int bad = 0;
  for (const TermPtr& t : make_corpus(kSeed, 1000, FuzzOptions{}))
    if (!check_linearity(generate_flat(t, System::Hm)).ok) bad++;
  report(3, "linearity of flat constraint sets", bad == 0);
}

// Flat derivations translate back to exactly the generated trees.
static void criterion4() {
  int bad = 0;
  for (const TermPtr& t : make_corpus(kSeed, 1000, FuzzOptions{}))
    if (!telescope_equal(flat_to_tree(generate_flat(t, System::Hm)),
                         build_tree_hm(t, Context{}, HmStart::Mono)))
      bad++;
  FuzzOptions stlc;
  stlc.allow_let = false;
  for (const TermPtr& t : make_corpus(kSeed + 1, 1000, stlc))
    if (!telescope_equal(flat_to_tree(generate_flat(t, System::Stlc)),
                         build_tree_stlc(t, Context{})))
      bad++;
  report(4, "flat/tree correspondence", bad == 0);
}

// Lifting quantifiers never changes the solution.
static void criterion5() {
  FuzzOptions stlc;
  stlc.allow_let = false;
  int bad = 0;
  for (const TermPtr& t : make_corpus(kSeed + 2, 1000, stlc)) {
    Telescope tree = build_tree_stlc(t, Context{});
    SolveResult before = solve_tree(tree);
    SolveResult after = solve_tree(lift_quantifiers(tree));
    bool ok;
    if (before.status == SolveResult::Status::Failed)
      ok = after.status == SolveResult::Status::Failed &&
           after.failure->kind == before.failure->kind;
    else
      ok = after.status != SolveResult::Status::Failed &&
           equiv_scheme(as_scheme(before), as_scheme(after));
    if (!ok) bad++;
  }
  report(5, "quantifier lifting preserves results", bad == 0);
}

// Synthesis-mode rule annotations match the worked rules; mode table report.
static void criterion6() {
  auto table = default_mode_table();
  auto rules = stlc_rules();
  JudgmentMode synth = *parse_judgment_mode("+ + -");
  const char* golden[] = {
      "(Var)\n  x- : t+ in G-\n  -------------\n  G+ |- x+ : t-\n",
      "(Lam)\n  Gf+ := G- , x- : tp+\n  Gf- |- T- : tr+\n"
      "  tf+ ~ tp- ->+ tr-\n  -------------------\n  G+ |- \\x+. T+ : tf-\n",
      "(App)\n  dup G- -> Gf+ Gp+\n  Gf- |- Tf- : tf+\n  Gp- |- Tp- : tp+\n"
      "  tp- ->- tr+ ~ tf-\n  -------------------\n  G+ |- Tf+ Tp+ : tr-\n"};
  bool ok = true;
  for (size_t i = 0; i < rules.size(); i++) {
    auto r = assign_modes(rules[i], synth, table);
    const auto* m = std::get_if<ModedRule>(&r);
    if (!m || render_moded_rule(*m) != golden[i]) ok = false;
  }
  auto report_rows = classify_table_modes(rules, table);
  ok = ok && report_rows.size() == 5 && report_rows[0].moded &&
       report_rows[1].moded && report_rows[2].moded && report_rows[3].moded &&
       !report_rows[4].moded &&
       report_rows[4].reason == "InCtx cannot produce x without search";
  report(6, "mode analysis golden and mode table report", ok);
}

// Let-polymorphism with scope-respecting generalisation.
static void criterion7() {
  SolveResult a =
      infer(parse_term("let id = \\x. x in id id"), Context{}, System::Hm);
  bool ok = a.status == SolveResult::Status::Solved &&
            equiv_scheme(*a.result, parse_scheme("forall a. a -> a"));
  SolveResult b = infer(parse_term("\\x. x x"), Context{}, System::Hm);
  ok = ok && b.status == SolveResult::Status::Failed &&
       b.failure->kind == FailureKind::OccursCheck;
  SolveResult c =
      infer(parse_term("\\y. let f = \\x. y in f"), Context{}, System::Hm);
  ok = ok && c.status == SolveResult::Status::Solved &&
       equiv_scheme(*c.result, parse_scheme("forall a b. a -> b -> a"));
  report(7, "let-polymorphism spot checks", ok);
}

// Duplicated annotations serve the body context and the result arrow.
static void criterion8() {
  SolveResult a = infer(parse_term("\\x : Int . x"), Context{}, System::Stlc);
  bool ok = a.status == SolveResult::Status::Solved &&
            print_type(a.result->body) == "Int -> Int";
  SolveResult b = check(parse_term("\\x : Int . x"), Context{},
                        parse_type("Bool -> Int"), System::Stlc);
  ok = ok && b.status == SolveResult::Status::Failed &&
       b.failure->kind == FailureKind::Mismatch;
  report(8, "annotation duplication", ok);
}

// Ambiguity and failure are distinguished, with located diagnostics.
static void criterion9() {
  SolveResult a = infer(parse_term("\\x. x"), Context{}, System::Stlc);
  bool ok = classify(a) == Verdict::Unknown;
  SolveResult b = infer(parse_term("(\\x : Int . x) y"),
                        parse_context("y : Bool"), System::Stlc);
  ok = ok && classify(b) == Verdict::Unsat &&
       b.failure->kind == FailureKind::Mismatch &&
       b.failure->path == std::vector<int>{2, 0} &&
       b.failure->detail.find("~") != std::string::npos;
  report(9, "failure taxonomy", ok);
}

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  return failures == 0 ? 0 : 1;
}
