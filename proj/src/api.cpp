#include "api.hpp"

#include <sstream>

#include "flat.hpp"
#include "json.hpp"
#include "modes.hpp"
#include "oracle.hpp"
#include "syntax.hpp"

namespace telic::api {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_path(const std::vector<int>& path) {
  std::string s = "[";
  for (size_t i = 0; i < path.size(); i++) {
    if (i) s += ",";
    s += std::to_string(path[i]);
  }
  return s + "]";
}

std::string render_result_scheme(const PolyType& s) {
  return s.bound.empty() ? print_type(s.body) : print_scheme(s);
}

std::string failure_text(const Failure& f) {
  std::string what;
  switch (f.kind) {
    case FailureKind::Mismatch: what = "mismatch"; break;
    case FailureKind::OccursCheck: what = "occurs check"; break;
    case FailureKind::UnboundVariable: what = "unbound variable"; break;
  }
  return "type error (" + what + "): " + f.detail + " at " +
         format_path(f.path);
}

Run finish_solve(const SolveResult& r, Format format, bool with_requirements) {
  Run run;
  run.trace = r.trace;
  switch (classify(r)) {
    case Verdict::Sat: run.status = 0; break;
    case Verdict::Unsat: run.status = 1; break;
    case Verdict::Unknown: run.status = 2; break;
  }
  std::optional<std::string> result;
  std::vector<std::string> diagnostics;
  if (r.status == SolveResult::Status::Failed) {
    diagnostics.push_back(failure_text(*r.failure));
  } else {
    std::string text = render_result_scheme(*r.result);
    if (r.status == SolveResult::Status::Ambiguous)
      text += " (ambiguous: " + std::to_string(r.unsolved_metas.size()) +
              " unsolved)";
    result = text;
  }
  if (format == Format::Json) {
    ordered_json j;
    j["status"] = run.status;
    j["result"] = result ? ordered_json(*result) : ordered_json(nullptr);
    if (with_requirements) {
      ordered_json reqs = ordered_json::object();
      for (const auto& [name, ty] : r.requirements)
        reqs[name.text] = print_type(ty);
      j["requirements"] = reqs;
    }
    j["diagnostics"] = diagnostics;
    run.output = j.dump(2) + "\n";
    return run;
  }
  std::ostringstream os;
  if (with_requirements)
    for (const auto& [name, ty] : r.requirements)
      os << name.text << " : " << print_type(ty) << "\n";
  if (result) os << (with_requirements ? "result: " : "") << *result << "\n";
  for (const auto& d : diagnostics) os << d << "\n";
  run.output = os.str();
  return run;
}

Run usage_error(const std::string& message) {
  return Run{3, message + "\n", ""};
}

template <class F>
Run guarded(F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    return usage_error(e.what());
  } catch (const std::invalid_argument& e) {
    return usage_error(std::string("error: ") + e.what());
  }
}

Context parse_ctx(const std::string& ctx) {
  return ctx.empty() ? Context{} : parse_context(ctx);
}

Run wrap_plain(std::string text, Format format, int status = 0) {
  if (format == Format::Json) {
    ordered_json j;
    j["status"] = status;
    j["result"] = text;
    j["diagnostics"] = ordered_json::array();
    return Run{status, j.dump(2) + "\n", ""};
  }
  if (!text.empty() && text.back() != '\n') text += '\n';
  return Run{status, std::move(text), ""};
}

}  // namespace

Run run_infer(const std::string& term, const std::string& ctx, System system,
              HmStart start, Format format, bool trace) {
  return guarded([&] {
    SolveResult r = infer(parse_term(term), parse_ctx(ctx), system, start, trace);
    return finish_solve(r, format, false);
  });
}

Run run_check(const std::string& term, const std::string& ctx,
              const std::string& expected, System system, Format format,
              bool trace) {
  return guarded([&] {
    SolveResult r = check(parse_term(term), parse_ctx(ctx),
                          parse_type(expected), system, trace);
    return finish_solve(r, format, false);
  });
}

Run run_free_vars(const std::string& term, const std::string& ctx,
                  System system, Format format) {
  return guarded([&] {
    SolveResult r = free_vars(parse_term(term), parse_ctx(ctx), system);
    return finish_solve(r, format, true);
  });
}

Run run_tree(const std::string& term, const std::string& ctx, System system,
             HmStart start, bool lift, Format format) {
  return guarded([&] {
    TermPtr t = parse_term(term);
    Context c = parse_ctx(ctx);
    Telescope tree = system == System::Stlc ? build_tree_stlc(t, c)
                                            : build_tree_hm(t, c, start);
    if (lift) tree = lift_quantifiers(tree);
    switch (format) {
      case Format::Json: return Run{0, render_tree_json(tree) + "\n", ""};
      case Format::Dot: return Run{0, render_tree_dot(tree), ""};
      default: return Run{0, render_tree_text(tree), ""};
    }
  });
}

Run run_flat(const std::string& term, System system, Format format) {
  return guarded([&] {
    FlatDerivation d = generate_flat(parse_term(term), system);
    return wrap_plain(render_flat(d), format);
  });
}

Run run_modes(const std::string& mode, System system, Format format) {
  auto rules = system == System::Hm ? hm_rules() : stlc_rules();
  auto table = default_mode_table();
  std::ostringstream os;
  if (mode.empty()) {
    os << "note: the constraint mode table is a reconstruction, not taken "
          "from a published table\n";
    for (const auto& row : classify_table_modes(rules, table)) {
      os << "mode " << render_judgment_mode(row.mode) << " ("
         << row.description << "): ";
      if (row.moded)
        os << "moded\n";
      else
        os << "unmoded: " << row.reason << " (rule " << row.failing_rule
           << ")\n";
    }
    return wrap_plain(os.str(), format);
  }
  auto parsed = parse_judgment_mode(mode);
  if (!parsed)
    return usage_error("invalid mode pattern: " + mode +
                       " (expected three of + or -)");
  bool all_moded = true;
  for (const auto& rule : rules) {
    auto r = assign_modes(rule, *parsed, table);
    if (const auto* m = std::get_if<ModedRule>(&r)) {
      os << render_moded_rule(*m) << "\n";
    } else {
      os << "(" << rule.name << ") unmoded: " << std::get<Unmoded>(r).reason
         << "\n\n";
      all_moded = false;
    }
  }
  return wrap_plain(os.str(), format, all_moded ? 0 : 1);
}

namespace {

// For comparison against the oracle, an ambiguous result's canonical rigids
// are read as implicitly quantified.
std::optional<PolyType> solver_scheme(const SolveResult& r) {
  if (r.status == SolveResult::Status::Failed) return std::nullopt;
  if (r.status == SolveResult::Status::Solved) return *r.result;
  PolyType s = *r.result;
  if (s.bound.empty()) s.bound = free_rigids(s.body);
  return s;
}

}  // namespace

Run run_fuzz(std::uint64_t seed, int count, Format format) {
  FuzzOptions opts;
  auto corpus = make_corpus(seed, count, opts);
  int agreements = 0;
  std::ostringstream counterexample;
  for (size_t i = 0; i < corpus.size(); i++) {
    const auto& t = corpus[i];
    SolveResult sr = infer(t, Context{}, System::Hm, HmStart::Poly);
    auto wr = oracle_infer(Context{}, t);
    bool solver_ok = sr.status != SolveResult::Status::Failed;
    bool oracle_ok = std::holds_alternative<PolyType>(wr);
    bool agree;
    if (solver_ok != oracle_ok) {
      agree = false;
    } else if (solver_ok) {
      agree = equiv_scheme(*solver_scheme(sr), std::get<PolyType>(wr));
    } else {
      agree = sr.failure->kind == std::get<WError>(wr).kind;
    }
    if (agree) {
      agreements++;
    } else if (counterexample.str().empty()) {
      counterexample << "first counterexample (term " << i
                     << "): " << print_term(t) << "\n";
      counterexample << "  solver: "
                     << (solver_ok ? render_result_scheme(*solver_scheme(sr))
                                   : failure_text(*sr.failure))
                     << "\n";
      counterexample << "  oracle: "
                     << (oracle_ok
                             ? render_result_scheme(std::get<PolyType>(wr))
                             : std::get<WError>(wr).detail)
                     << "\n";
    }
  }
  std::ostringstream os;
  os << "seed=" << seed << " count=" << count << " agreements=" << agreements
     << " disagreements=" << (count - agreements) << "\n"
     << counterexample.str();
  return wrap_plain(os.str(), format, agreements == count ? 0 : 1);
}

}  // namespace telic::api
