#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tree.hpp"

namespace telic {

enum class Polarity { Plus, Minus };

Polarity negate(Polarity p);

/// A constraint premise template; slots name the rule's metavariables in a
/// fixed order per kind (see slot_count/render).
struct CTemplate {
  std::string kind;   // EqTy | DupTy | InCtx | ExtendCtx | DupCtx | Inst | GenInCtx
  std::string shape;  // EqTy only: "vv" (a~b), "vA" (a ~ b->c), "Av" (a->b ~ c)
  std::vector<std::string> slots;
};

/// A sub-judgment premise: ctx |- term : ty.
struct JTemplate {
  std::string ctx, term, ty;
};

using Premise = std::variant<CTemplate, JTemplate>;

/// A typing rule as a schema over metavariables; every metavariable occurs
/// exactly twice across conclusion and premises.
struct RuleSchema {
  std::string name;
  std::string ctx_var;
  /// Conclusion term, as literal/variable tokens (true = variable).
  std::vector<std::pair<bool, std::string>> term_format;
  std::vector<std::string> term_vars;
  std::string ty_var;
  std::vector<Premise> premises;
};

struct JudgmentMode {
  Polarity ctx, term, ty;
  bool operator==(const JudgmentMode&) const = default;
};

/// Supported polarity patterns per constraint kind (and shape), keyed
/// "kind" or "kind/shape". The default table reflects deterministic
/// dataflow with no search.
struct ConstraintModeTable {
  std::map<std::string, std::vector<std::vector<Polarity>>> patterns;
};

ConstraintModeTable default_mode_table();

struct ModedRule {
  RuleSchema rule;
  JudgmentMode mode;
  /// Per premise, the polarity of each slot (JTemplate: ctx, term, ty).
  std::vector<std::vector<Polarity>> premise_polarities;
};

struct Unmoded {
  std::string reason;
};

using ModeResult = std::variant<ModedRule, Unmoded>;

ModeResult assign_modes(const RuleSchema& rule, JudgmentMode mode,
                        const ConstraintModeTable& table);

/// Topological firing order of premises by dataflow, or an error naming the
/// premises stuck in a cycle.
std::variant<std::vector<size_t>, std::string> firing_order(
    const ModedRule& moded);

struct ModeReportRow {
  JudgmentMode mode;
  std::string description;
  bool moded;
  std::string failing_rule;
  std::string reason;
};

/// The five judgment modes of the mode table, checked against a rule set.
std::vector<ModeReportRow> classify_table_modes(
    const std::vector<RuleSchema>& rules, const ConstraintModeTable& table);

std::vector<RuleSchema> stlc_rules();      // Var, Lam, App
std::vector<RuleSchema> stlc_alam_rule();  // the annotated-lambda rule
std::vector<RuleSchema> hm_rules();        // Var, Lam, App, Let

std::string render_judgment_mode(JudgmentMode m);
std::optional<JudgmentMode> parse_judgment_mode(const std::string& text);
std::string render_moded_rule(const ModedRule& moded);

}  // namespace telic
