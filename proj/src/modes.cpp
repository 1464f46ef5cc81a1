#include "modes.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>
#include <stdexcept>

namespace telic {

Polarity negate(Polarity p) {
  return p == Polarity::Plus ? Polarity::Minus : Polarity::Plus;
}

ConstraintModeTable default_mode_table() {
  constexpr Polarity P = Polarity::Plus;
  constexpr Polarity M = Polarity::Minus;
  ConstraintModeTable t;
  // slots: l, r. An equation may run in either direction (or check two known
  // sides) but cannot invent both sides from nothing.
  t.patterns["EqTy/vv"] = {{P, M}, {M, P}, {M, M}};
  // slots: l, rp, rr   (l ~ rp -> rr). A produced slot next to a consumed
  // one is a fresh unknown component (e.g. checking an application pushes
  // the known result type in with a fresh parameter type); only the
  // no-input-at-all pattern is unsupported.
  t.patterns["EqTy/vA"] = {{P, M, M}, {P, M, P}, {P, P, M}, {M, P, P},
                           {M, P, M}, {M, M, P}, {M, M, M}};
  // slots: lp, lr, r   (lp -> lr ~ r)
  t.patterns["EqTy/Av"] = {{M, M, P}, {P, M, P}, {M, P, P}, {P, P, M},
                           {P, M, M}, {M, P, M}, {M, M, M}};
  // slots: src, out1, out2
  t.patterns["DupTy"] = {{M, P, P}, {P, M, M}, {M, M, M}};
  t.patterns["DupCtx/2"] = {{M, P, P}, {P, M, M}, {M, M, M}};
  t.patterns["DupCtx/3"] = {{M, P, P, P}, {P, M, M, M}, {M, M, M, M}};
  // slots: x, ty, ctx; the name is always an input — a lookup can run
  // forwards or backwards, but it cannot conjure the variable it is about
  t.patterns["InCtx"] = {{M, P, M}, {M, M, M}, {M, P, P}, {M, M, P}};
  // slots: out, base, x, ty; forwards the entry type may be a fresh unknown,
  // backwards the base (and optionally the type) is recovered from the result
  t.patterns["ExtendCtx"] = {
      {P, M, M, M}, {P, M, M, P}, {M, P, M, P}, {M, P, M, M}, {M, M, M, M}};
  // slots: scheme, target
  t.patterns["Inst"] = {{M, P}, {M, M}};
  // slots: scheme, mono, ctx
  t.patterns["GenInCtx"] = {{P, M, M}, {M, M, M}};
  return t;
}

namespace {

struct Loc {
  int premise;  // -1 = conclusion
  int slot;
};

// Conclusion slot layout: 0 = ctx, 1..n = term vars, n+1 = ty.
std::vector<std::string> conclusion_slots(const RuleSchema& rule) {
  std::vector<std::string> s;
  s.push_back(rule.ctx_var);
  for (const auto& v : rule.term_vars) s.push_back(v);
  s.push_back(rule.ty_var);
  return s;
}

std::vector<std::string> premise_slots(const Premise& p) {
  return std::visit(
      overload{[](const CTemplate& c) { return c.slots; },
               [](const JTemplate& j) {
                 return std::vector<std::string>{j.ctx, j.term, j.ty};
               }},
      p);
}

std::string table_key(const CTemplate& c) {
  if (c.kind == "EqTy") return "EqTy/" + c.shape;
  if (c.kind == "DupCtx")
    return "DupCtx/" + std::to_string(c.slots.size() - 1);
  return c.kind;
}

char sign(Polarity p) { return p == Polarity::Plus ? '+' : '-'; }

}  // namespace

ModeResult assign_modes(const RuleSchema& rule, JudgmentMode mode,
                        const ConstraintModeTable& table) {
  // Gather the two occurrences of every metavariable.
  std::map<std::string, std::vector<Loc>> occ;
  {
    auto concl = conclusion_slots(rule);
    for (int i = 0; i < (int)concl.size(); i++)
      occ[concl[i]].push_back({-1, i});
    for (int pi = 0; pi < (int)rule.premises.size(); pi++) {
      auto slots = premise_slots(rule.premises[pi]);
      for (int si = 0; si < (int)slots.size(); si++)
        occ[slots[si]].push_back({pi, si});
    }
  }
  for (const auto& [v, locs] : occ)
    if (locs.size() != 2)
      return Unmoded{"variable " + v + " does not occur exactly twice in rule " +
                     rule.name};

  // Fixed polarities: the conclusion carries the judgment mode as written,
  // sub-judgment premises carry it negated.
  auto fixed_at = [&](Loc l) -> std::optional<Polarity> {
    if (l.premise == -1) {
      if (l.slot == 0) return mode.ctx;
      if (l.slot == (int)rule.term_vars.size() + 1) return mode.ty;
      return mode.term;
    }
    if (std::holds_alternative<JTemplate>(rule.premises[l.premise])) {
      if (l.slot == 0) return negate(mode.ctx);
      if (l.slot == 1) return negate(mode.term);
      return negate(mode.ty);
    }
    return std::nullopt;
  };

  // Polarity of every constraint-premise slot, by variable; a variable's two
  // occurrences always get opposite signs (one producer, one consumer).
  std::map<std::string, Polarity> known;  // polarity at FIRST occurrence
  std::vector<std::string> free_vars;
  for (const auto& [v, locs] : occ) {
    auto f0 = fixed_at(locs[0]), f1 = fixed_at(locs[1]);
    if (f0 && f1) {
      if (*f0 == *f1)
        return Unmoded{"variable " + v + " is " +
                       std::string(1, sign(*f0)) + " at both occurrences in rule " +
                       rule.name};
      known[v] = *f0;
    } else if (f0) {
      known[v] = *f0;
    } else if (f1) {
      known[v] = negate(*f1);
    } else {
      free_vars.push_back(v);
    }
  }

  auto polarity_at = [&](const std::map<std::string, Polarity>& firsts,
                         Loc l, const std::string& v) {
    return l.premise == occ[v][0].premise && l.slot == occ[v][0].slot
               ? firsts.at(v)
               : negate(firsts.at(v));
  };

  auto build = [&](const std::map<std::string, Polarity>& firsts) {
    ModedRule out{rule, mode, {}};
    for (int pi = 0; pi < (int)rule.premises.size(); pi++) {
      auto slots = premise_slots(rule.premises[pi]);
      std::vector<Polarity> ps;
      for (int si = 0; si < (int)slots.size(); si++)
        ps.push_back(polarity_at(firsts, Loc{pi, si}, slots[si]));
      out.premise_polarities.push_back(std::move(ps));
    }
    return out;
  };

  auto table_ok = [&](const ModedRule& m, std::string* why) {
    for (size_t pi = 0; pi < rule.premises.size(); pi++) {
      const auto* c = std::get_if<CTemplate>(&rule.premises[pi]);
      if (!c) continue;
      auto it = table.patterns.find(table_key(*c));
      if (it == table.patterns.end()) {
        if (why) *why = "no mode table entry for " + table_key(*c);
        return false;
      }
      const auto& got = m.premise_polarities[pi];
      if (std::find(it->second.begin(), it->second.end(), got) ==
          it->second.end()) {
        if (why) {
          if (c->kind == "InCtx" && got[0] == Polarity::Plus)
            *why = "InCtx cannot produce " + c->slots[0] + " without search";
          else {
            std::ostringstream os;
            os << c->kind << " premise of rule " << rule.name
               << " has no supported mode";
            *why = os.str();
          }
        }
        return false;
      }
    }
    return true;
  };

  // Enumerate orientations of the variables that live only in constraints.
  std::string first_reason;
  size_t k = free_vars.size();
  for (size_t bits = 0; bits < (size_t{1} << k); bits++) {
    auto firsts = known;
    for (size_t i = 0; i < k; i++)
      firsts[free_vars[i]] =
          (bits >> i) & 1 ? Polarity::Minus : Polarity::Plus;
    ModedRule cand = build(firsts);
    std::string why;
    if (!table_ok(cand, &why)) {
      if (first_reason.empty()) first_reason = why;
      continue;
    }
    auto order = firing_order(cand);
    if (std::holds_alternative<std::string>(order)) {
      if (first_reason.empty()) first_reason = std::get<std::string>(order);
      continue;
    }
    return cand;
  }
  if (first_reason.empty())
    first_reason = "rule " + rule.name + " admits no mode assignment";
  return Unmoded{first_reason};
}

std::variant<std::vector<size_t>, std::string> firing_order(
    const ModedRule& moded) {
  const auto& rule = moded.rule;
  std::set<std::string> available;
  auto concl = conclusion_slots(rule);
  auto concl_pol = [&](int i) {
    if (i == 0) return moded.mode.ctx;
    if (i == (int)rule.term_vars.size() + 1) return moded.mode.ty;
    return moded.mode.term;
  };
  for (int i = 0; i < (int)concl.size(); i++)
    if (concl_pol(i) == Polarity::Plus) available.insert(concl[i]);

  std::vector<size_t> order;
  std::vector<bool> fired(rule.premises.size(), false);
  for (;;) {
    bool progress = false;
    for (size_t pi = 0; pi < rule.premises.size(); pi++) {
      if (fired[pi]) continue;
      auto slots = premise_slots(rule.premises[pi]);
      bool ready = true;
      for (size_t si = 0; si < slots.size(); si++)
        if (moded.premise_polarities[pi][si] == Polarity::Minus &&
            !available.count(slots[si]))
          ready = false;
      if (!ready) continue;
      for (size_t si = 0; si < slots.size(); si++)
        if (moded.premise_polarities[pi][si] == Polarity::Plus)
          available.insert(slots[si]);
      fired[pi] = true;
      order.push_back(pi);
      progress = true;
      break;  // restart scan so earlier premises fire as soon as possible
    }
    if (order.size() == rule.premises.size()) break;
    if (!progress) {
      std::ostringstream os;
      os << "dataflow cycle in rule " << rule.name << " among premises";
      for (size_t pi = 0; pi < rule.premises.size(); pi++)
        if (!fired[pi]) os << " #" << pi + 1;
      return os.str();
    }
  }
  return order;
}

std::vector<ModeReportRow> classify_table_modes(
    const std::vector<RuleSchema>& rules, const ConstraintModeTable& table) {
  constexpr Polarity P = Polarity::Plus;
  constexpr Polarity M = Polarity::Minus;
  struct Entry {
    JudgmentMode mode;
    std::string desc;
  };
  const Entry entries[] = {
      {{P, P, M}, "type synthesis"},
      {{P, P, P}, "type checking"},
      {{M, P, M}, "free variable synthesis"},
      {{M, P, P}, "free variable checking"},
      {{P, M, P}, "proof search"},
  };
  std::vector<ModeReportRow> report;
  for (const auto& e : entries) {
    ModeReportRow row{e.mode, e.desc, true, "", ""};
    for (const auto& rule : rules) {
      auto r = assign_modes(rule, e.mode, table);
      if (const auto* u = std::get_if<Unmoded>(&r)) {
        row.moded = false;
        row.failing_rule = rule.name;
        row.reason = u->reason;
        break;
      }
    }
    report.push_back(std::move(row));
  }
  return report;
}

namespace {

RuleSchema var_rule() {
  return {"Var",
          "G",
          {{true, "x"}},
          {"x"},
          "t",
          {CTemplate{"InCtx", "", {"x", "t", "G"}}}};
}

RuleSchema lam_rule() {
  return {"Lam",
          "G",
          {{false, "\\"}, {true, "x"}, {false, ". "}, {true, "T"}},
          {"x", "T"},
          "tf",
          {CTemplate{"ExtendCtx", "", {"Gf", "G", "x", "tp"}},
           JTemplate{"Gf", "T", "tr"},
           CTemplate{"EqTy", "vA", {"tf", "tp", "tr"}}}};
}

RuleSchema app_rule() {
  return {"App",
          "G",
          {{true, "Tf"}, {false, " "}, {true, "Tp"}},
          {"Tf", "Tp"},
          "tr",
          {CTemplate{"DupCtx", "", {"G", "Gf", "Gp"}},
           JTemplate{"Gf", "Tf", "tf"},
           JTemplate{"Gp", "Tp", "tp"},
           CTemplate{"EqTy", "Av", {"tp", "tr", "tf"}}}};
}

}  // namespace

std::vector<RuleSchema> stlc_rules() { return {var_rule(), lam_rule(), app_rule()}; }

std::vector<RuleSchema> stlc_alam_rule() {
  return {{"ALam",
           "G",
           {{false, "\\"},
            {true, "x"},
            {false, ":"},
            {true, "ta"},
            {false, ". "},
            {true, "T"}},
           {"x", "ta", "T"},
           "tf",
           {CTemplate{"DupTy", "", {"ta", "tap", "taf"}},
            CTemplate{"ExtendCtx", "", {"Gf", "G", "x", "tap"}},
            JTemplate{"Gf", "T", "tr"},
            CTemplate{"EqTy", "vA", {"tf", "taf", "tr"}}}}};
}

std::vector<RuleSchema> hm_rules() {
  RuleSchema var{"Var",
                 "G",
                 {{true, "x"}},
                 {"x"},
                 "t",
                 {CTemplate{"InCtx", "", {"x", "s", "G"}},
                  CTemplate{"Inst", "", {"s", "t"}}}};
  RuleSchema let{"Let",
                 "G",
                 {{false, "let "},
                  {true, "x"},
                  {false, " = "},
                  {true, "Tb"},
                  {false, " in "},
                  {true, "Tt"}},
                 {"x", "Tb", "Tt"},
                 "t",
                 {CTemplate{"DupCtx", "", {"G", "Gb", "Ggen", "Gt"}},
                  JTemplate{"Gb", "Tb", "tb"},
                  CTemplate{"GenInCtx", "", {"s", "tb", "Ggen"}},
                  CTemplate{"ExtendCtx", "", {"Gt2", "Gt", "x", "s"}},
                  JTemplate{"Gt2", "Tt", "t"}}};
  return {var, lam_rule(), app_rule(), let};
}

std::string render_judgment_mode(JudgmentMode m) {
  std::string s;
  s += sign(m.ctx);
  s += ' ';
  s += sign(m.term);
  s += ' ';
  s += sign(m.ty);
  return s;
}

std::optional<JudgmentMode> parse_judgment_mode(const std::string& text) {
  std::vector<Polarity> ps;
  for (char c : text) {
    if (c == '+')
      ps.push_back(Polarity::Plus);
    else if (c == '-')
      ps.push_back(Polarity::Minus);
    else if (c != ' ' && c != ',')
      return std::nullopt;
  }
  if (ps.size() != 3) return std::nullopt;
  return JudgmentMode{ps[0], ps[1], ps[2]};
}

namespace {

std::string render_premise(const Premise& prem, const std::vector<Polarity>& pol) {
  auto v = [&](const std::string& name, size_t i) {
    return name + std::string(1, sign(pol[i]));
  };
  return std::visit(
      overload{
          [&](const JTemplate& j) {
            return v(j.ctx, 0) + " |- " + v(j.term, 1) + " : " + v(j.ty, 2);
          },
          [&](const CTemplate& c) -> std::string {
            if (c.kind == "InCtx")
              return v(c.slots[0], 0) + " : " + v(c.slots[1], 1) + " in " +
                     v(c.slots[2], 2);
            if (c.kind == "ExtendCtx")
              return v(c.slots[0], 0) + " := " + v(c.slots[1], 1) + " , " +
                     v(c.slots[2], 2) + " : " + v(c.slots[3], 3);
            if (c.kind == "DupCtx" || c.kind == "DupTy") {
              std::string out = "dup " + v(c.slots[0], 0) + " ->";
              for (size_t i = 1; i < c.slots.size(); i++)
                out += " " + v(c.slots[i], i);
              return out;
            }
            if (c.kind == "Inst")
              return v(c.slots[0], 0) + " <= " + v(c.slots[1], 1);
            if (c.kind == "GenInCtx")
              return v(c.slots[0], 0) + " gen " + v(c.slots[1], 1) + " in " +
                     v(c.slots[2], 2);
            if (c.kind == "EqTy") {
              if (c.shape == "vv") return v(c.slots[0], 0) + " ~ " + v(c.slots[1], 1);
              if (c.shape == "vA") {
                // the arrow is produced exactly when the variable side is
                // produced from known components
                char arr = pol[0] == Polarity::Plus ? '+' : '-';
                return v(c.slots[0], 0) + " ~ " + v(c.slots[1], 1) + " ->" +
                       std::string(1, arr) + " " + v(c.slots[2], 2);
              }
              char arr = pol[2] == Polarity::Plus ? '+' : '-';
              return v(c.slots[0], 0) + " ->" + std::string(1, arr) + " " +
                     v(c.slots[1], 1) + " ~ " + v(c.slots[2], 2);
            }
            throw std::logic_error("unknown constraint template kind: " + c.kind);
          }},
      prem);
}

}  // namespace

std::string render_moded_rule(const ModedRule& moded) {
  const auto& rule = moded.rule;
  std::ostringstream os;
  os << "(" << rule.name << ")\n";
  for (size_t pi = 0; pi < rule.premises.size(); pi++)
    os << "  " << render_premise(rule.premises[pi], moded.premise_polarities[pi])
       << "\n";
  std::string concl = rule.ctx_var + std::string(1, sign(moded.mode.ctx)) +
                      " |- ";
  for (const auto& [is_var, text] : rule.term_format)
    concl += is_var ? text + std::string(1, sign(moded.mode.term)) : text;
  concl += " : " + rule.ty_var + std::string(1, sign(moded.mode.ty));
  os << "  " << std::string(std::max<size_t>(concl.size(), 10), '-') << "\n";
  os << "  " << concl << "\n";
  return os.str();
}

}  // namespace telic
