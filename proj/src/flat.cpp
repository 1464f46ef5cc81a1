#include "flat.hpp"

#include <map>
#include <stdexcept>

namespace telic {

namespace {

struct FlatGen {
  System system;
  Session session;
  FlatDerivation out;

  void add(size_t trace_idx, Constraint c) {
    out.constraints.push_back(std::move(c));
    (void)trace_idx;
  }

  size_t trace(std::string rule, Name name, std::optional<TypePtr> ann,
               std::vector<int> metas, std::vector<int> ctxs) {
    out.trace.push_back(TraceEntry{std::move(rule), std::move(name),
                                   std::move(ann), std::move(metas),
                                   std::move(ctxs)});
    return out.trace.size() - 1;
  }

  void gen(const TermPtr& t, CtxRef g, int m) {
    std::visit(
        overload{
            [&](const Var& v) {
              if (system == System::Stlc) {
                size_t e = trace("Var", v.name, {}, {m}, {g.id});
                add(e, InCtx{v.name, mono_scheme(meta_type(m)), g});
              } else {
                int s = session.fresh_meta();
                size_t e = trace("Var", v.name, {}, {m, s}, {g.id});
                add(e, InCtx{v.name, scheme_meta(s), g});
                add(e, Inst{scheme_meta(s), meta_type(m)});
              }
            },
            [&](const Lam& l) {
              int tp = session.fresh_meta();
              int tr = session.fresh_meta();
              CtxRef gf{session.fresh_ctx()};
              size_t e = trace("Lam", l.binder, {}, {m, tp, tr}, {g.id, gf.id});
              add(e, ExtendCtx{gf, g, l.binder, mono_scheme(meta_type(tp))});
              gen(l.body, gf, tr);
              add(e, EqTy{meta_type(m), arrow_type(meta_type(tp), meta_type(tr))});
            },
            [&](const ALam& l) {
              int tap = session.fresh_meta();
              int taf = session.fresh_meta();
              int tr = session.fresh_meta();
              CtxRef gf{session.fresh_ctx()};
              size_t e = trace("ALam", l.binder, l.annotation, {m, tap, taf, tr},
                               {g.id, gf.id});
              add(e, DupTy{l.annotation, meta_type(tap), meta_type(taf)});
              add(e, ExtendCtx{gf, g, l.binder, mono_scheme(meta_type(tap))});
              gen(l.body, gf, tr);
              add(e, EqTy{meta_type(m), arrow_type(meta_type(taf), meta_type(tr))});
            },
            [&](const App& a) {
              int tf = session.fresh_meta();
              int tp = session.fresh_meta();
              CtxRef gf{session.fresh_ctx()};
              CtxRef gp{session.fresh_ctx()};
              size_t e = trace("App", Name{}, {}, {m, tf, tp},
                               {g.id, gf.id, gp.id});
              add(e, DupCtx{g, {gf, gp}});
              gen(a.fun, gf, tf);
              gen(a.arg, gp, tp);
              add(e, EqTy{arrow_type(meta_type(tp), meta_type(m)), meta_type(tf)});
            },
            [&](const Let& l) {
              if (system == System::Stlc)
                throw std::invalid_argument(
                    "let is not part of the simply typed system");
              int s = session.fresh_meta();
              int tb = session.fresh_meta();
              CtxRef gb{session.fresh_ctx()};
              CtxRef ggen{session.fresh_ctx()};
              CtxRef gt{session.fresh_ctx()};
              CtxRef gt2{session.fresh_ctx()};
              size_t e = trace("Let", l.binder, {}, {m, s, tb},
                               {g.id, gb.id, ggen.id, gt.id, gt2.id});
              add(e, DupCtx{g, {gb, ggen, gt}});
              gen(l.bound, gb, tb);
              add(e, GenInCtx{scheme_meta(s), meta_type(tb), ggen});
              add(e, ExtendCtx{gt2, gt, l.binder, scheme_meta(s)});
              gen(l.body, gt2, m);
            },
        },
        t->node);
  }
};

// Attribution of constraints to trace entries, recomputed on demand by
// replaying the same emission order.
struct Attribution {
  std::vector<size_t> emitter;  // per constraint, index into trace
};

}  // namespace

FlatDerivation generate_flat(const TermPtr& t, System system) {
  FlatGen gen{system};
  gen.out.system = system;
  CtxRef root{gen.session.fresh_ctx()};
  int result = gen.session.fresh_meta();
  gen.out.root_ctx = root.id;
  gen.out.result_ty = result;
  gen.gen(t, root, result);
  return gen.out;
}

LinearityReport check_linearity(const FlatDerivation& d) {
  std::map<int, int> meta_count;
  std::map<int, int> ctx_count;
  auto count_type = [&](const TypePtr& t) {
    // occurrences with multiplicity, unlike free_metas
    auto rec = [&](auto&& self, const TypePtr& ty) -> void {
      std::visit(overload{
                     [&](const TMeta& m) { meta_count[m.id]++; },
                     [&](const TRigid&) {},
                     [&](const TBase&) {},
                     [&](const TArrow& f) {
                       self(self, f.param);
                       self(self, f.result);
                     },
                 },
                 ty->node);
    };
    rec(rec, t);
  };
  auto count_scheme = [&](const PolyType& s) { count_type(s.body); };
  for (const Constraint& c : d.constraints) {
    std::visit(overload{
                   [&](const EqTy& x) {
                     count_type(x.lhs);
                     count_type(x.rhs);
                   },
                   [&](const DupTy& x) {
                     count_type(x.src);
                     count_type(x.out1);
                     count_type(x.out2);
                   },
                   [&](const InCtx& x) {
                     count_scheme(x.scheme);
                     ctx_count[x.ctx.id]++;
                   },
                   [&](const ExtendCtx& x) {
                     count_scheme(x.scheme);
                     ctx_count[x.out.id]++;
                     ctx_count[x.base.id]++;
                   },
                   [&](const DupCtx& x) {
                     ctx_count[x.src.id]++;
                     for (const CtxRef& r : x.outs) ctx_count[r.id]++;
                   },
                   [&](const Inst& x) {
                     count_scheme(x.scheme);
                     count_type(x.target);
                   },
                   [&](const GenInCtx& x) {
                     count_scheme(x.scheme);
                     count_type(x.mono);
                     ctx_count[x.ctx.id]++;
                   },
                   [&](const Ask&) {},
                   [&](const Tell&) {},
                   [&](const GenOpen&) {},
                   [&](const GenClose&) {},
               },
               c);
  }
  // external designations: the root context is produced from outside, the
  // result type is consumed from outside
  ctx_count[d.root_ctx]++;
  meta_count[d.result_ty]++;

  LinearityReport report;
  for (auto& [id, n] : meta_count)
    if (n != 2) report.violations.push_back({false, id, n});
  for (auto& [id, n] : ctx_count)
    if (n != 2) report.violations.push_back({true, id, n});
  report.ok = report.violations.empty();
  return report;
}

namespace {

[[noreturn]] void untraceable(const std::string& why) {
  throw std::invalid_argument("untraceable derivation: " + why);
}

struct Replay {
  const FlatDerivation& d;
  size_t cursor = 0;
  Session session;

  const TraceEntry& next(size_t arity_metas) {
    if (cursor >= d.trace.size()) untraceable("trace exhausted");
    const TraceEntry& e = d.trace[cursor++];
    if (e.metas.size() != arity_metas &&
        !(e.rule == "Var" && d.system == System::Stlc))
      untraceable("unexpected arity for rule " + e.rule);
    return e;
  }

  TypePtr fresh() { return meta_type(session.fresh_meta()); }

  void quantify(std::vector<TreeNode>& out, const TypePtr& m) {
    out.push_back(
        TreeNode{Quantify{std::get<TMeta>(m->node).id, SchemeKind::Mono}});
  }

  void emit(const TypePtr& r, std::vector<TreeNode>& out) {
    if (cursor >= d.trace.size()) untraceable("trace exhausted");
    const TraceEntry& e = d.trace[cursor];
    if (e.rule == "Var") {
      ++cursor;
      if (d.system == System::Stlc) {
        // InCtx becomes a positional Ask
        out.push_back(TreeNode{Constr{Ask{e.name, mono_scheme(r)}}});
      } else {
        int s = session.fresh_meta();
        out.push_back(TreeNode{Quantify{s, SchemeKind::Poly}});
        out.push_back(TreeNode{Constr{Ask{e.name, scheme_meta(s)}}});
        out.push_back(TreeNode{Constr{Inst{scheme_meta(s), r}}});
      }
    } else if (e.rule == "Lam") {
      ++cursor;
      TypePtr tp = fresh(), tr = fresh();
      quantify(out, tp);
      quantify(out, tr);
      out.push_back(TreeNode{Constr{EqTy{r, arrow_type(tp, tr)}}});
      // ExtendCtx becomes a Tell at the extension point
      out.push_back(TreeNode{Constr{Tell{e.name, mono_scheme(tp)}}});
      emit(tr, out);
    } else if (e.rule == "ALam") {
      ++cursor;
      if (!e.annotation) untraceable("ALam entry without annotation");
      TypePtr tap = fresh(), taf = fresh(), tr = fresh();
      quantify(out, tap);
      quantify(out, taf);
      quantify(out, tr);
      out.push_back(TreeNode{Constr{DupTy{*e.annotation, tap, taf}}});
      out.push_back(TreeNode{Constr{Tell{e.name, mono_scheme(tap)}}});
      out.push_back(TreeNode{Constr{EqTy{r, arrow_type(taf, tr)}}});
      emit(tr, out);
    } else if (e.rule == "App") {
      ++cursor;
      TypePtr tf = fresh(), tp = fresh();
      quantify(out, tf);
      quantify(out, tp);
      out.push_back(TreeNode{Constr{EqTy{arrow_type(tp, r), tf}}});
      // DupCtx becomes a Branch
      Branch br;
      br.children.emplace_back();
      emit(tf, br.children.back().nodes);
      br.children.emplace_back();
      emit(tp, br.children.back().nodes);
      out.push_back(TreeNode{std::move(br)});
    } else if (e.rule == "Let") {
      ++cursor;
      if (d.system != System::Hm) untraceable("Let in a simply typed trace");
      int s = session.fresh_meta();
      out.push_back(TreeNode{Quantify{s, SchemeKind::Poly}});
      Branch br;
      br.children.emplace_back();
      {
        // GenInCtx becomes a generalisation region around the bound term
        auto& bound = br.children.back().nodes;
        bound.push_back(TreeNode{Constr{GenOpen{}}});
        TypePtr tb = fresh();
        quantify(bound, tb);
        bound.push_back(TreeNode{Constr{GenClose{scheme_meta(s), tb}}});
        emit(tb, bound);
      }
      br.children.emplace_back();
      {
        auto& body = br.children.back().nodes;
        body.push_back(TreeNode{Constr{Tell{e.name, scheme_meta(s)}}});
        emit(r, body);
      }
      out.push_back(TreeNode{std::move(br)});
    } else {
      untraceable("unknown rule " + e.rule);
    }
  }
};

}  // namespace

Telescope flat_to_tree(const FlatDerivation& d) {
  if (d.trace.empty()) untraceable("no trace");
  Replay replay{d};
  Telescope root;
  root.prefix = Context{};
  TypePtr result = replay.fresh();
  replay.quantify(root.nodes, result);
  replay.emit(result, root.nodes);
  if (replay.cursor != d.trace.size()) untraceable("trailing trace entries");
  return root;
}

namespace {

// Rule attribution for rendering: replay the generator's emission order.
std::vector<size_t> attribute(const FlatDerivation& d) {
  std::vector<size_t> emitter;
  size_t cursor = 0;
  auto walk = [&](auto&& self) -> void {
    if (cursor >= d.trace.size()) untraceable("trace exhausted");
    size_t me = cursor++;
    const std::string& rule = d.trace[me].rule;
    if (rule == "Var") {
      emitter.push_back(me);
      if (d.system == System::Hm) emitter.push_back(me);
    } else if (rule == "Lam" || rule == "ALam") {
      if (rule == "ALam") emitter.push_back(me);
      emitter.push_back(me);
      self(self);
      emitter.push_back(me);
    } else if (rule == "App") {
      emitter.push_back(me);
      self(self);
      self(self);
      emitter.push_back(me);
    } else if (rule == "Let") {
      emitter.push_back(me);
      self(self);
      emitter.push_back(me);
      emitter.push_back(me);
      self(self);
    } else {
      untraceable("unknown rule " + rule);
    }
  };
  walk(walk);
  return emitter;
}

}  // namespace

std::string render_flat(const FlatDerivation& d) {
  std::vector<size_t> emitter = attribute(d);
  std::string out = "root: G" + std::to_string(d.root_ctx) + " |- t" +
                    std::to_string(d.result_ty) + "\n";
  for (size_t i = 0; i < d.constraints.size(); ++i) {
    const TraceEntry& e = d.trace[emitter[i]];
    out += e.rule + "#" + std::to_string(emitter[i]) + ": " +
           render_constraint(d.constraints[i]) + "\n";
  }
  return out;
}

}  // namespace telic
