#include "solver.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

namespace telic {

void MetaStore::declare(int meta, MetaKind kind) {
  if (index_.count(meta))
    throw std::invalid_argument("metavariable declared twice: " +
                                std::to_string(meta));
  index_[meta] = entries_.size();
  entries_.push_back(StoreEntry{meta, kind, std::nullopt, std::nullopt});
}

bool MetaStore::declared(int meta) const { return index_.count(meta) > 0; }

const StoreEntry& MetaStore::entry(int meta) const {
  auto it = index_.find(meta);
  if (it == index_.end())
    throw std::invalid_argument("metavariable not in store: " +
                                std::to_string(meta));
  return entries_[it->second];
}

size_t MetaStore::position(int meta) const {
  auto it = index_.find(meta);
  if (it == index_.end())
    throw std::invalid_argument("metavariable not in store: " +
                                std::to_string(meta));
  return it->second;
}

TypePtr MetaStore::walk(TypePtr t) const {
  while (true) {
    auto* m = std::get_if<TMeta>(&t->node);
    if (!m) return t;
    auto it = index_.find(m->id);
    if (it == index_.end()) return t;
    const StoreEntry& e = entries_[it->second];
    if (!e.solution) return t;
    t = *e.solution;
  }
}

TypePtr MetaStore::zonk(const TypePtr& t) const {
  TypePtr w = walk(t);
  if (auto* f = std::get_if<TArrow>(&w->node))
    return arrow_type(zonk(f->param), zonk(f->result));
  return w;
}

PolyType MetaStore::zonk(const PolyType& s) const {
  if (auto sm = as_scheme_meta(s)) {
    if (declared(*sm)) {
      const StoreEntry& e = entry(*sm);
      if (e.scheme_solution) return zonk(*e.scheme_solution);
    }
    return s;
  }
  return PolyType{s.bound, zonk(s.body)};
}

void MetaStore::move_entry(size_t from, size_t to) {
  StoreEntry e = entries_[from];
  entries_.erase(entries_.begin() + static_cast<long>(from));
  for (size_t& m : marks_)
    if (m > from) --m;
  entries_.insert(entries_.begin() + static_cast<long>(to), e);
  for (size_t& m : marks_)
    if (m > to) ++m;
  index_.clear();
  for (size_t i = 0; i < entries_.size(); ++i) index_[entries_[i].meta] = i;
}

void MetaStore::restore_order() {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < entries_.size(); ++i) {
      std::set<int> refs;
      if (entries_[i].solution) refs = free_metas(*entries_[i].solution);
      if (entries_[i].scheme_solution) {
        auto more = free_metas(entries_[i].scheme_solution->body);
        refs.insert(more.begin(), more.end());
      }
      size_t max_ref = i;
      for (int m : refs) {
        auto it = index_.find(m);
        if (it != index_.end()) max_ref = std::max(max_ref, it->second);
      }
      if (max_ref > i) {
        // solved entry placed before something it references: relocate
        move_entry(i, max_ref);
        changed = true;
        break;
      }
    }
  }
}

void MetaStore::assign(int meta, TypePtr solution) {
  StoreEntry& e = entries_[position(meta)];
  assert(!e.solution);
  e.solution = std::move(solution);
  restore_order();
}

void MetaStore::assign_scheme(int meta, PolyType scheme) {
  StoreEntry& e = entries_[position(meta)];
  assert(!e.scheme_solution);
  e.scheme_solution = std::move(scheme);
  restore_order();
}

size_t MetaStore::push_mark() {
  marks_.push_back(entries_.size());
  return marks_.size() - 1;
}

void MetaStore::pop_mark() { marks_.pop_back(); }

std::optional<UnifyError> unify(MetaStore& store, TypePtr a, TypePtr b) {
  a = store.walk(std::move(a));
  b = store.walk(std::move(b));
  auto* ma = std::get_if<TMeta>(&a->node);
  auto* mb = std::get_if<TMeta>(&b->node);
  if (ma && mb && ma->id == mb->id) return std::nullopt;
  if (ma && mb) {
    // define the later-declared one as the earlier
    if (store.position(ma->id) < store.position(mb->id))
      store.assign(mb->id, a);
    else
      store.assign(ma->id, b);
    return std::nullopt;
  }
  if (ma || mb) {
    int m = ma ? ma->id : mb->id;
    TypePtr t = ma ? b : a;
    if (free_metas(store.zonk(t)).count(m))
      return UnifyError{FailureKind::OccursCheck, store.zonk(ma ? a : b),
                        store.zonk(t)};
    store.assign(m, t);
    return std::nullopt;
  }
  if (auto* fa = std::get_if<TArrow>(&a->node)) {
    if (auto* fb = std::get_if<TArrow>(&b->node)) {
      if (auto err = unify(store, fa->param, fb->param)) return err;
      return unify(store, fa->result, fb->result);
    }
  }
  if (auto* ba = std::get_if<TBase>(&a->node)) {
    auto* bb = std::get_if<TBase>(&b->node);
    if (bb && ba->name == bb->name) return std::nullopt;
  }
  if (auto* ra = std::get_if<TRigid>(&a->node)) {
    auto* rb = std::get_if<TRigid>(&b->node);
    if (rb && ra->name == rb->name) return std::nullopt;
  }
  return UnifyError{FailureKind::Mismatch, store.zonk(a), store.zonk(b)};
}

namespace {

TypePtr substitute_rigids(const TypePtr& t,
                          const std::map<Name, TypePtr>& sub) {
  return std::visit(
      overload{
          [&](const TMeta&) { return t; },
          [&](const TRigid& r) -> TypePtr {
            auto it = sub.find(r.name);
            return it == sub.end() ? t : it->second;
          },
          [&](const TBase&) { return t; },
          [&](const TArrow& f) {
            return arrow_type(substitute_rigids(f.param, sub),
                              substitute_rigids(f.result, sub));
          },
      },
      t->node);
}

void first_occurrence_metas(const TypePtr& t, std::vector<int>& out) {
  std::visit(overload{
                 [&](const TMeta& m) {
                   if (std::find(out.begin(), out.end(), m.id) == out.end())
                     out.push_back(m.id);
                 },
                 [&](const TRigid&) {},
                 [&](const TBase&) {},
                 [&](const TArrow& f) {
                   first_occurrence_metas(f.param, out);
                   first_occurrence_metas(f.result, out);
                 },
             },
             t->node);
}

std::string fresh_rigid_name(std::set<std::string>& forbidden) {
  for (int i = 0;; ++i) {
    std::string name(1, static_cast<char>('a' + i % 26));
    if (i >= 26) name += std::to_string(i / 26);
    if (!forbidden.count(name)) {
      forbidden.insert(name);
      return name;
    }
  }
}

}  // namespace

TypePtr instantiate(MetaStore& store, Session& session, const PolyType& s) {
  std::map<Name, TypePtr> sub;
  for (const Name& n : s.bound) {
    int m = session.fresh_meta();
    store.declare(m, MetaKind::Mono);
    sub.emplace(n, meta_type(m));
  }
  return substitute_rigids(s.body, sub);
}

PolyType generalize(MetaStore& store, size_t region_start, const TypePtr& body,
                    const std::vector<std::pair<Name, PolyType>>& outer_frames,
                    const std::vector<Name>& forbidden_names) {
  TypePtr zonked = store.zonk(body);
  std::vector<int> order;
  first_occurrence_metas(zonked, order);

  std::set<int> escaping;
  for (const auto& [_, scheme] : outer_frames) {
    PolyType zs = store.zonk(scheme);
    auto ms = free_metas(zs.body);
    escaping.insert(ms.begin(), ms.end());
  }

  std::set<std::string> forbidden;
  for (const Name& n : forbidden_names) forbidden.insert(n.text);
  for (const Name& n : free_rigids(zonked)) forbidden.insert(n.text);

  std::vector<Name> bound;
  for (int m : order) {
    if (store.position(m) < region_start) continue;
    if (escaping.count(m)) continue;
    Name n{fresh_rigid_name(forbidden)};
    bound.push_back(n);
    store.assign(m, rigid_type(n));
  }
  return PolyType{bound, store.zonk(zonked)};
}

namespace {

struct SolveFailure {
  Failure failure;
};
struct AmbiguousAbort {
  int scheme_meta;
};

void collect_forbidden_type(const TypePtr& t, std::vector<Name>& out) {
  for (const Name& n : free_rigids(t))
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
}

void collect_forbidden_scheme(const PolyType& s, std::vector<Name>& out) {
  collect_forbidden_type(s.body, out);
  for (const Name& n : s.bound)
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
}

void collect_forbidden(const Telescope& t, std::vector<Name>& out) {
  if (t.prefix)
    for (const auto& [_, s] : t.prefix->entries) collect_forbidden_scheme(s, out);
  for (const TreeNode& n : t.nodes) {
    if (auto* c = std::get_if<Constr>(&n.node)) {
      std::visit(overload{
                     [&](const EqTy& x) {
                       collect_forbidden_type(x.lhs, out);
                       collect_forbidden_type(x.rhs, out);
                     },
                     [&](const DupTy& x) {
                       collect_forbidden_type(x.src, out);
                       collect_forbidden_type(x.out1, out);
                       collect_forbidden_type(x.out2, out);
                     },
                     [&](const Ask& x) { collect_forbidden_scheme(x.scheme, out); },
                     [&](const Tell& x) { collect_forbidden_scheme(x.scheme, out); },
                     [&](const Inst& x) {
                       collect_forbidden_scheme(x.scheme, out);
                       collect_forbidden_type(x.target, out);
                     },
                     [&](const GenClose& x) {
                       collect_forbidden_scheme(x.scheme, out);
                       collect_forbidden_type(x.mono, out);
                     },
                     [&](const auto&) {},
                 },
                 c->c);
    } else if (auto* b = std::get_if<Branch>(&n.node)) {
      for (const Telescope& child : b->children) collect_forbidden(child, out);
    }
  }
}

int max_meta(const Telescope& t) {
  int best = -1;
  for (const TreeNode& n : t.nodes) {
    if (auto* q = std::get_if<Quantify>(&n.node)) {
      best = std::max(best, q->meta);
    } else if (auto* c = std::get_if<Constr>(&n.node)) {
      for (int m : free_metas(c->c)) best = std::max(best, m);
    } else if (auto* b = std::get_if<Branch>(&n.node)) {
      for (const Telescope& child : b->children)
        best = std::max(best, max_meta(child));
    }
  }
  return best;
}

class Solver {
 public:
  Solver(const Telescope& tree, const SolveOptions& opts)
      : tree_(tree), opts_(opts) {
    session_.next_meta = max_meta(tree) + 1;
    collect_forbidden(tree, forbidden_);
  }

  SolveResult run();

 private:
  const Telescope& tree_;
  SolveOptions opts_;
  MetaStore store_;
  Session session_;
  std::vector<std::pair<Name, PolyType>> frames_;
  struct Region {
    size_t mark_idx;
    size_t frame_mark;
    std::optional<std::pair<int, TypePtr>> close;  // scheme meta, body
  };
  std::vector<Region> regions_;
  std::vector<Name> forbidden_;
  std::map<Name, int> requirements_;
  std::string trace_;
  std::vector<int> path_;

  [[noreturn]] void fail(FailureKind kind, int node_index, std::string detail) {
    std::vector<int> path = path_;
    path.push_back(node_index);
    throw SolveFailure{Failure{kind, std::move(path), std::move(detail)}};
  }

  void require_unify(const TypePtr& a, const TypePtr& b, int node_index) {
    if (auto err = unify(store_, a, b))
      fail(err->kind, node_index,
           render_type(err->lhs) + " ~ " + render_type(err->rhs));
  }

  const PolyType* lookup_frame(const Name& n) const {
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it)
      if (it->first == n) return &it->second;
    return nullptr;
  }

  PolyType resolve_scheme(const PolyType& s) { return store_.zonk(s); }

  void log(int node_index, const std::string& text) {
    if (!opts_.trace) return;
    trace_ += "[";
    for (int p : path_) trace_ += std::to_string(p) + ".";
    trace_ += std::to_string(node_index) + "] " + text + "\n";
  }

  void do_ask(const Ask& ask, int i) {
    log(i, render_constraint(Constraint{ask}));
    const PolyType* found = lookup_frame(ask.name);
    PolyType binding;
    if (found) {
      binding = *found;
    } else if (opts_.open_context) {
      auto it = requirements_.find(ask.name);
      int m;
      if (it == requirements_.end()) {
        m = session_.fresh_meta();
        store_.declare(m, MetaKind::Mono);
        requirements_.emplace(ask.name, m);
      } else {
        m = it->second;
      }
      binding = mono_scheme(meta_type(m));
    } else {
      fail(FailureKind::UnboundVariable, i,
           "unbound variable " + ask.name.text);
    }
    if (auto target = as_scheme_meta(ask.scheme)) {
      // HM variable: copy the found scheme into the target scheme meta
      store_.assign_scheme(*target, binding);
      return;
    }
    // monomorphic target
    PolyType resolved = resolve_scheme(binding);
    if (as_scheme_meta(resolved)) throw AmbiguousAbort{*as_scheme_meta(resolved)};
    if (resolved.bound.empty()) {
      require_unify(resolved.body, ask.scheme.body, i);
    } else {
      TypePtr inst = instantiate(store_, session_, resolved);
      require_unify(inst, ask.scheme.body, i);
    }
  }

  void do_constraint(const Constraint& c, int i) {
    std::visit(
        overload{
            [&](const EqTy& x) {
              log(i, render_constraint(c));
              require_unify(x.lhs, x.rhs, i);
            },
            [&](const DupTy& x) {
              log(i, render_constraint(c));
              require_unify(x.out1, x.src, i);
              require_unify(x.out2, x.src, i);
            },
            [&](const Ask& x) { do_ask(x, i); },
            [&](const Tell& x) {
              log(i, render_constraint(c));
              frames_.emplace_back(x.name, x.scheme);
            },
            [&](const Inst& x) {
              log(i, render_constraint(c));
              PolyType s = resolve_scheme(x.scheme);
              if (auto sm = as_scheme_meta(s)) throw AmbiguousAbort{*sm};
              TypePtr inst = instantiate(store_, session_, s);
              require_unify(inst, x.target, i);
            },
            [&](const GenOpen&) {
              log(i, "gen[");
              regions_.push_back(
                  Region{store_.push_mark(), frames_.size(), std::nullopt});
            },
            [&](const GenClose& x) {
              log(i, render_constraint(c));
              auto sm = as_scheme_meta(x.scheme);
              if (regions_.empty() || regions_.back().close || !sm)
                throw std::invalid_argument("malformed generalisation region");
              regions_.back().close = {*sm, x.mono};
            },
            [&](const auto&) {
              throw std::invalid_argument(
                  "context-explicit constraint in a tree: " +
                  render_constraint(c));
            },
        },
        c);
  }

  void solve_telescope(const Telescope& tel) {
    size_t frame_base = frames_.size();
    size_t region_base = regions_.size();
    if (tel.prefix)
      for (const auto& [n, s] : tel.prefix->entries) frames_.emplace_back(n, s);
    for (size_t i = 0; i < tel.nodes.size(); ++i) {
      const TreeNode& n = tel.nodes[i];
      std::visit(overload{
                     [&](const Quantify& q) {
                       log(static_cast<int>(i),
                           (q.kind == SchemeKind::Poly ? "?s" : "?t") +
                               std::to_string(q.meta));
                       store_.declare(q.meta, q.kind == SchemeKind::Poly
                                                  ? MetaKind::Poly
                                                  : MetaKind::Mono);
                     },
                     [&](const Constr& cn) {
                       do_constraint(cn.c, static_cast<int>(i));
                     },
                     [&](const Branch& b) {
                       for (size_t k = 0; k < b.children.size(); ++k) {
                         path_.push_back(static_cast<int>(k) + 1);
                         solve_telescope(b.children[k]);
                         path_.pop_back();
                       }
                     },
                 },
                 n.node);
    }
    // close generalisation regions opened in this telescope, innermost first
    while (regions_.size() > region_base) {
      Region r = regions_.back();
      regions_.pop_back();
      if (!r.close) throw std::invalid_argument("gen[ without ]gen");
      std::vector<std::pair<Name, PolyType>> outer(
          frames_.begin(), frames_.begin() + static_cast<long>(r.frame_mark));
      PolyType scheme = generalize(store_, store_.mark(r.mark_idx),
                                   r.close->second, outer, forbidden_);
      for (const Name& n : scheme.bound)
        if (std::find(forbidden_.begin(), forbidden_.end(), n) ==
            forbidden_.end())
          forbidden_.push_back(n);
      store_.assign_scheme(r.close->first, scheme);
      store_.pop_mark();
      if (opts_.trace)
        trace_ += "]gen s" + std::to_string(r.close->first) + " := " +
                  render_scheme(scheme) + "\n";
    }
    frames_.resize(frame_base);
  }

  const Quantify* root_quantifier() const {
    for (const TreeNode& n : tree_.nodes)
      if (auto* q = std::get_if<Quantify>(&n.node)) return q;
    return nullptr;
  }

  Telescope annotate(const Telescope& t) const {
    Telescope out;
    out.prefix = t.prefix;
    for (const TreeNode& n : t.nodes) {
      if (auto* q = std::get_if<Quantify>(&n.node)) {
        Quantify a = *q;
        if (store_.declared(q->meta)) {
          const StoreEntry& e = store_.entry(q->meta);
          if (q->kind == SchemeKind::Mono && e.solution) {
            TypePtr z = store_.zonk(*e.solution);
            if (free_metas(z).empty()) a.solution = z;
          } else if (q->kind == SchemeKind::Poly && e.scheme_solution) {
            PolyType z = store_.zonk(*e.scheme_solution);
            if (free_metas(z.body).empty()) a.scheme_solution = z;
          }
        }
        out.nodes.push_back(TreeNode{std::move(a)});
      } else if (auto* b = std::get_if<Branch>(&n.node)) {
        Branch ab;
        for (const Telescope& child : b->children)
          ab.children.push_back(annotate(child));
        out.nodes.push_back(TreeNode{std::move(ab)});
      } else {
        out.nodes.push_back(n);
      }
    }
    return out;
  }

  // Renames residual metas to rigid a, b, ... in first-occurrence order.
  TypePtr rename_residuals(const TypePtr& t, std::map<int, TypePtr>& renaming,
                           std::set<std::string>& taken) {
    return std::visit(
        overload{
            [&](const TMeta& m) -> TypePtr {
              auto it = renaming.find(m.id);
              if (it != renaming.end()) return it->second;
              TypePtr r = rigid_type(Name{fresh_rigid_name(taken)});
              renaming.emplace(m.id, r);
              return r;
            },
            [&](const TRigid&) { return t; },
            [&](const TBase&) { return t; },
            [&](const TArrow& f) {
              return arrow_type(rename_residuals(f.param, renaming, taken),
                                rename_residuals(f.result, renaming, taken));
            },
        },
        t->node);
  }

  SolveResult finish() {
    SolveResult r;
    r.annotated = annotate(tree_);
    r.store = store_.entries();
    r.trace = trace_;

    std::map<int, TypePtr> renaming;
    std::set<std::string> taken;
    for (const Name& n : forbidden_) taken.insert(n.text);

    if (opts_.open_context) {
      std::vector<Name> names;
      for (const auto& [n, _] : requirements_) names.push_back(n);
      std::sort(names.begin(), names.end());
      for (const Name& n : names) {
        TypePtr z = store_.zonk(meta_type(requirements_.at(n)));
        r.requirements.emplace_back(n, rename_residuals(z, renaming, taken));
      }
    }

    const Quantify* root = root_quantifier();
    if (!root) throw std::invalid_argument("tree has no result quantifier");

    PolyType result;
    if (root->kind == SchemeKind::Poly) {
      const StoreEntry& e = store_.entry(root->meta);
      if (!e.scheme_solution) {
        r.status = SolveResult::Status::Ambiguous;
        r.unsolved_metas = {root->meta};
        return r;
      }
      result = store_.zonk(*e.scheme_solution);
    } else {
      result = mono_scheme(store_.zonk(meta_type(root->meta)));
    }

    // Present bound variables in first-occurrence order as a, b, ...
    if (!result.bound.empty()) {
      std::set<Name> bound(result.bound.begin(), result.bound.end());
      std::set<std::string> used;
      for (const Name& n : free_rigids(result.body))
        if (!bound.count(n)) used.insert(n.text);
      std::map<Name, TypePtr> ren;
      std::vector<Name> new_bound;
      for (const Name& n : free_rigids(result.body)) {
        if (!bound.count(n) || ren.count(n)) continue;
        Name fresh{fresh_rigid_name(used)};
        ren.emplace(n, rigid_type(fresh));
        new_bound.push_back(fresh);
      }
      result = PolyType{new_bound, substitute_rigids(result.body, ren)};
    }

    std::vector<int> residual;
    first_occurrence_metas(result.body, residual);
    if (residual.empty()) {
      r.status = SolveResult::Status::Solved;
      r.result = result;
    } else {
      r.status = SolveResult::Status::Ambiguous;
      r.unsolved_metas = residual;
      r.result =
          PolyType{result.bound, rename_residuals(result.body, renaming, taken)};
    }
    return r;
  }

  friend SolveResult solve_tree_impl(Solver& s);
};

SolveResult solve_tree_impl(Solver& s) {
  try {
    s.solve_telescope(s.tree_);
    return s.finish();
  } catch (const SolveFailure& f) {
    SolveResult r;
    r.status = SolveResult::Status::Failed;
    r.failure = f.failure;
    r.annotated = s.annotate(s.tree_);
    r.store = s.store_.entries();
    r.trace = s.trace_;
    return r;
  } catch (const AmbiguousAbort& a) {
    SolveResult r;
    r.status = SolveResult::Status::Ambiguous;
    r.unsolved_metas = {a.scheme_meta};
    r.annotated = s.annotate(s.tree_);
    r.store = s.store_.entries();
    r.trace = s.trace_;
    return r;
  }
}

}  // namespace

SolveResult solve_tree(const Telescope& tree, const SolveOptions& opts) {
  Solver solver(tree, opts);
  return solve_tree_impl(solver);
}

Verdict classify(const SolveResult& r) {
  switch (r.status) {
    case SolveResult::Status::Solved: return Verdict::Sat;
    case SolveResult::Status::Failed: return Verdict::Unsat;
    case SolveResult::Status::Ambiguous: return Verdict::Unknown;
  }
  return Verdict::Unknown;
}

SolveResult infer(const TermPtr& t, const Context& ctx, System system,
                  HmStart start, bool trace) {
  Telescope tree = system == System::Stlc ? build_tree_stlc(t, ctx)
                                          : build_tree_hm(t, ctx, start);
  SolveOptions opts;
  opts.trace = trace;
  return solve_tree(tree, opts);
}

SolveResult check(const TermPtr& t, const Context& ctx, const TypePtr& expected,
                  System system, bool trace) {
  Telescope tree = system == System::Stlc
                       ? build_tree_stlc(t, ctx)
                       : build_tree_hm(t, ctx, HmStart::Mono);
  const Quantify* root = nullptr;
  for (const TreeNode& n : tree.nodes)
    if ((root = std::get_if<Quantify>(&n.node))) break;
  tree.nodes.push_back(
      TreeNode{Constr{EqTy{meta_type(root->meta), expected}}});
  SolveOptions opts;
  opts.trace = trace;
  return solve_tree(tree, opts);
}

SolveResult free_vars(const TermPtr& t, const Context& ctx, System system) {
  Telescope tree = system == System::Stlc
                       ? build_tree_stlc(t, ctx)
                       : build_tree_hm(t, ctx, HmStart::Mono);
  SolveOptions opts;
  opts.open_context = true;
  return solve_tree(tree, opts);
}

}  // namespace telic
