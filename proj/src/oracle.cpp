#include "oracle.hpp"

#include <map>
#include <set>
#include <sstream>

namespace telic {

namespace {

struct WFail {
  FailureKind kind;
  std::string detail;
};

struct W {
  int next = 0;
  std::map<int, TypePtr> subst;

  TypePtr fresh() { return meta_type(next++); }

  TypePtr apply(const TypePtr& t) {
    return std::visit(
        overload{[&](const TMeta& m) -> TypePtr {
                   auto it = subst.find(m.id);
                   return it == subst.end() ? t : apply(it->second);
                 },
                 [&](const TRigid&) { return t; },
                 [&](const TBase&) { return t; },
                 [&](const TArrow& a) -> TypePtr {
                   return arrow_type(apply(a.param), apply(a.result));
                 }},
        t->node);
  }

  bool occurs(int id, const TypePtr& t) {
    return std::visit(
        overload{[&](const TMeta& m) { return m.id == id; },
                 [&](const TRigid&) { return false; },
                 [&](const TBase&) { return false; },
                 [&](const TArrow& a) {
                   return occurs(id, a.param) || occurs(id, a.result);
                 }},
        t->node);
  }

  void bind(int id, const TypePtr& t) {
    if (const auto* m = std::get_if<TMeta>(&t->node); m && m->id == id) return;
    if (occurs(id, t))
      throw WFail{FailureKind::OccursCheck,
                  render_type(meta_type(id)) + " occurs in " + render_type(t)};
    subst[id] = t;
  }

  void unify(const TypePtr& a0, const TypePtr& b0) {
    TypePtr a = apply(a0), b = apply(b0);
    if (const auto* m = std::get_if<TMeta>(&a->node)) return bind(m->id, b);
    if (const auto* m = std::get_if<TMeta>(&b->node)) return bind(m->id, a);
    if (const auto* ba = std::get_if<TBase>(&a->node))
      if (const auto* bb = std::get_if<TBase>(&b->node);
          bb && ba->name == bb->name)
        return;
    if (const auto* ra = std::get_if<TRigid>(&a->node))
      if (const auto* rb = std::get_if<TRigid>(&b->node);
          rb && ra->name == rb->name)
        return;
    if (const auto* fa = std::get_if<TArrow>(&a->node))
      if (const auto* fb = std::get_if<TArrow>(&b->node)) {
        unify(fa->param, fb->param);
        unify(fa->result, fb->result);
        return;
      }
    throw WFail{FailureKind::Mismatch, render_type(a) + " ~ " + render_type(b)};
  }

  TypePtr replace_rigids(const TypePtr& t,
                         const std::map<Name, TypePtr>& repl) {
    return std::visit(
        overload{[&](const TMeta&) { return t; },
                 [&](const TRigid& r) -> TypePtr {
                   auto it = repl.find(r.name);
                   return it == repl.end() ? t : it->second;
                 },
                 [&](const TBase&) { return t; },
                 [&](const TArrow& a) -> TypePtr {
                   return arrow_type(replace_rigids(a.param, repl),
                                     replace_rigids(a.result, repl));
                 }},
        t->node);
  }

  TypePtr instantiate(const PolyType& s) {
    std::map<Name, TypePtr> repl;
    for (const auto& b : s.bound) repl[b] = fresh();
    return replace_rigids(s.body, repl);
  }

  void metas_of(const TypePtr& t, std::vector<int>& out, std::set<int>& seen) {
    std::visit(overload{[&](const TMeta& m) {
                          if (seen.insert(m.id).second) out.push_back(m.id);
                        },
                        [&](const TRigid&) {},
                        [&](const TBase&) {},
                        [&](const TArrow& a) {
                          metas_of(a.param, out, seen);
                          metas_of(a.result, out, seen);
                        }},
               t->node);
  }

  TypePtr replace_metas(const TypePtr& t, const std::map<int, TypePtr>& repl) {
    return std::visit(
        overload{[&](const TMeta& m) -> TypePtr {
                   auto it = repl.find(m.id);
                   return it == repl.end() ? t : it->second;
                 },
                 [&](const TRigid&) { return t; },
                 [&](const TBase&) { return t; },
                 [&](const TArrow& a) -> TypePtr {
                   return arrow_type(replace_metas(a.param, repl),
                                     replace_metas(a.result, repl));
                 }},
        t->node);
  }

  PolyType generalize(const Context& ctx, const TypePtr& t0) {
    TypePtr t = apply(t0);
    std::set<int> ctx_metas;
    for (const auto& [name, scheme] : ctx.entries) {
      std::vector<int> ms;
      std::set<int> seen;
      metas_of(apply(scheme.body), ms, seen);
      ctx_metas.insert(seen.begin(), seen.end());
    }
    std::vector<int> candidates;
    std::set<int> seen;
    metas_of(t, candidates, seen);
    std::set<Name> taken;
    for (const auto& r : free_rigids(t)) taken.insert(r);
    std::map<int, TypePtr> repl;
    std::vector<Name> bound;
    int counter = 0;
    for (int id : candidates) {
      if (ctx_metas.count(id)) continue;
      Name name;
      do {
        name.text = counter < 26 ? std::string(1, char('a' + counter))
                                 : "a" + std::to_string(counter - 26);
        counter++;
      } while (taken.count(name));
      bound.push_back(name);
      repl[id] = rigid_type(name);
    }
    return PolyType{bound, replace_metas(t, repl)};
  }

  void check(const Context& ctx, const TermPtr& term, const TypePtr& expected) {
    std::visit(
        overload{
            [&](const Var& v) {
              const PolyType* s = ctx.lookup(v.name);
              if (!s)
                throw WFail{FailureKind::UnboundVariable,
                            "unbound variable " + v.name.text};
              unify(instantiate(*s), expected);
            },
            [&](const Lam& l) {
              TypePtr tp = fresh();
              TypePtr tr = fresh();
              unify(expected, arrow_type(tp, tr));
              check(ctx.extended(l.binder, mono_scheme(tp)), l.body, tr);
            },
            [&](const ALam& l) {
              TypePtr tr = fresh();
              unify(expected, arrow_type(l.annotation, tr));
              check(ctx.extended(l.binder, mono_scheme(l.annotation)), l.body,
                    tr);
            },
            [&](const App& a) {
              TypePtr tf = fresh();
              TypePtr tp = fresh();
              unify(arrow_type(tp, expected), tf);
              check(ctx, a.fun, tf);
              check(ctx, a.arg, tp);
            },
            [&](const Let& l) {
              TypePtr tb = fresh();
              check(ctx, l.bound, tb);
              PolyType s = generalize(ctx, tb);
              check(ctx.extended(l.binder, s), l.body, expected);
            }},
        term->node);
  }
};

}  // namespace

std::variant<PolyType, WError> oracle_infer(const Context& ctx,
                                            const TermPtr& term) {
  W w;
  try {
    TypePtr root = w.fresh();
    w.check(ctx, term, root);
    return w.generalize(ctx, root);
  } catch (const WFail& f) {
    return WError{f.kind, f.detail};
  }
}

namespace {

TypePtr rename_rigids(const TypePtr& t, const std::map<Name, Name>& ren) {
  return std::visit(
      overload{[&](const TMeta&) { return t; },
               [&](const TRigid& r) -> TypePtr {
                 auto it = ren.find(r.name);
                 return it == ren.end() ? t : rigid_type(it->second);
               },
               [&](const TBase&) { return t; },
               [&](const TArrow& a) -> TypePtr {
                 return arrow_type(rename_rigids(a.param, ren),
                                   rename_rigids(a.result, ren));
               }},
      t->node);
}

}  // namespace

PolyType canonical_scheme(const PolyType& s) {
  std::set<Name> bound(s.bound.begin(), s.bound.end());
  // the body's rigids in first-occurrence order pick the canonical binders;
  // binders that never occur are dropped
  std::map<Name, Name> ren;
  std::vector<Name> new_bound;
  int counter = 0;
  for (const auto& r : free_rigids(s.body)) {
    if (!bound.count(r) || ren.count(r)) continue;
    Name name{"c" + std::to_string(counter++)};
    ren[r] = name;
    new_bound.push_back(name);
  }
  return PolyType{new_bound, rename_rigids(s.body, ren)};
}

bool equiv_scheme(const PolyType& a, const PolyType& b) {
  return scheme_equal(canonical_scheme(a), canonical_scheme(b));
}

namespace {

const char* kBinders[] = {"x", "y", "z", "f", "g", "h", "u", "v"};

TypePtr random_type(std::mt19937& rng, int depth) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (depth > 0 && coin(rng) < 0.35)
    return arrow_type(random_type(rng, depth - 1), random_type(rng, depth - 1));
  return base_type(Name{coin(rng) < 0.5 ? "Int" : "Bool"});
}

TermPtr gen(std::mt19937& rng, const FuzzOptions& opts, int depth, int& budget,
            std::vector<Name>& scope) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto pick_binder = [&] {
    std::uniform_int_distribution<size_t> d(0, std::size(kBinders) - 1);
    return Name{kBinders[d(rng)]};
  };
  auto make_var = [&]() -> TermPtr {
    if (!scope.empty() && coin(rng) >= opts.p_free) {
      std::uniform_int_distribution<size_t> d(0, scope.size() - 1);
      return var(scope[d(rng)]);
    }
    return var(pick_binder());
  };

  budget--;
  bool at_leaf = depth >= opts.max_depth || budget <= 0;
  if (at_leaf) {
    if (!scope.empty() || opts.p_free > 0) return make_var();
    Name b = pick_binder();
    return lam(b, var(b));
  }

  double r = coin(rng);
  double let_w = opts.allow_let ? opts.p_let : 0.0;
  if (r < let_w && !scope.empty()) {
    Name b = pick_binder();
    TermPtr bound = gen(rng, opts, depth + 1, budget, scope);
    scope.push_back(b);
    TermPtr body = gen(rng, opts, depth + 1, budget, scope);
    scope.pop_back();
    return let(b, bound, body);
  }
  r -= let_w;
  if (r < 0.30 && !scope.empty()) {
    TermPtr f = gen(rng, opts, depth + 1, budget, scope);
    TermPtr a = gen(rng, opts, depth + 1, budget, scope);
    return app(f, a);
  }
  if (r < 0.65 || scope.empty()) {
    Name b = pick_binder();
    bool annot = opts.allow_annot && coin(rng) < opts.p_annot;
    scope.push_back(b);
    TermPtr body = gen(rng, opts, depth + 1, budget, scope);
    scope.pop_back();
    return annot ? alam(b, random_type(rng, 2), body) : lam(b, body);
  }
  return make_var();
}

}  // namespace

TermPtr random_term(std::mt19937& rng, const FuzzOptions& opts) {
  int budget = opts.max_size;
  std::vector<Name> scope;
  return gen(rng, opts, 0, budget, scope);
}

std::vector<TermPtr> make_corpus(std::uint64_t seed, int count,
                                 const FuzzOptions& opts) {
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  std::vector<TermPtr> out;
  out.reserve(count);
  for (int i = 0; i < count; i++) out.push_back(random_term(rng, opts));
  return out;
}

std::string dump_corpus(std::uint64_t seed, const std::vector<TermPtr>& corpus) {
  std::ostringstream os;
  os << "# seed=" << seed << "\n";
  for (const auto& t : corpus) os << print_term(t) << "\n";
  return os.str();
}

}  // namespace telic
