#include "types.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace telic {

TypePtr meta_type(int id, MetaKind kind) {
  return std::make_shared<const MonoType>(MonoType{TMeta{id, kind}});
}
TypePtr rigid_type(Name name) {
  return std::make_shared<const MonoType>(MonoType{TRigid{std::move(name)}});
}
TypePtr base_type(Name name) {
  return std::make_shared<const MonoType>(MonoType{TBase{std::move(name)}});
}
TypePtr arrow_type(TypePtr param, TypePtr result) {
  return std::make_shared<const MonoType>(
      MonoType{TArrow{std::move(param), std::move(result)}});
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return std::visit(
      overload{
          [&](const TMeta& m) {
            auto* o = std::get_if<TMeta>(&b->node);
            return o && o->id == m.id;
          },
          [&](const TRigid& r) {
            auto* o = std::get_if<TRigid>(&b->node);
            return o && o->name == r.name;
          },
          [&](const TBase& s) {
            auto* o = std::get_if<TBase>(&b->node);
            return o && o->name == s.name;
          },
          [&](const TArrow& f) {
            auto* o = std::get_if<TArrow>(&b->node);
            return o != nullptr && type_equal(f.param, o->param) &&
                   type_equal(f.result, o->result);
          },
      },
      a->node);
}

bool scheme_equal(const PolyType& a, const PolyType& b) {
  return a.bound == b.bound && type_equal(a.body, b.body);
}

PolyType mono_scheme(TypePtr body) { return PolyType{{}, std::move(body)}; }

PolyType scheme_meta(int id) {
  return PolyType{{}, meta_type(id, MetaKind::Poly)};
}

std::optional<int> as_scheme_meta(const PolyType& s) {
  if (!s.bound.empty()) return std::nullopt;
  if (auto* m = std::get_if<TMeta>(&s.body->node);
      m && m->kind == MetaKind::Poly)
    return m->id;
  return std::nullopt;
}

const PolyType* Context::lookup(const Name& n) const {
  for (auto it = entries.rbegin(); it != entries.rend(); ++it)
    if (it->first == n) return &it->second;
  return nullptr;
}

Context Context::extended(Name n, PolyType s) const {
  Context out = *this;
  out.entries.emplace_back(std::move(n), std::move(s));
  return out;
}

bool Context::operator==(const Context& o) const {
  if (entries.size() != o.entries.size()) return false;
  for (size_t i = 0; i < entries.size(); ++i)
    if (entries[i].first != o.entries[i].first ||
        !scheme_equal(entries[i].second, o.entries[i].second))
      return false;
  return true;
}

bool constraint_equal(const Constraint& a, const Constraint& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      overload{
          [&](const EqTy& x) {
            auto& y = std::get<EqTy>(b);
            return type_equal(x.lhs, y.lhs) && type_equal(x.rhs, y.rhs);
          },
          [&](const DupTy& x) {
            auto& y = std::get<DupTy>(b);
            return type_equal(x.src, y.src) && type_equal(x.out1, y.out1) &&
                   type_equal(x.out2, y.out2);
          },
          [&](const InCtx& x) {
            auto& y = std::get<InCtx>(b);
            return x.name == y.name && scheme_equal(x.scheme, y.scheme) &&
                   x.ctx == y.ctx;
          },
          [&](const ExtendCtx& x) {
            auto& y = std::get<ExtendCtx>(b);
            return x.out == y.out && x.base == y.base && x.name == y.name &&
                   scheme_equal(x.scheme, y.scheme);
          },
          [&](const DupCtx& x) {
            auto& y = std::get<DupCtx>(b);
            return x.src == y.src && x.outs == y.outs;
          },
          [&](const Inst& x) {
            auto& y = std::get<Inst>(b);
            return scheme_equal(x.scheme, y.scheme) &&
                   type_equal(x.target, y.target);
          },
          [&](const GenInCtx& x) {
            auto& y = std::get<GenInCtx>(b);
            return scheme_equal(x.scheme, y.scheme) &&
                   type_equal(x.mono, y.mono) && x.ctx == y.ctx;
          },
          [&](const Ask& x) {
            auto& y = std::get<Ask>(b);
            return x.name == y.name && scheme_equal(x.scheme, y.scheme);
          },
          [&](const Tell& x) {
            auto& y = std::get<Tell>(b);
            return x.name == y.name && scheme_equal(x.scheme, y.scheme);
          },
          [&](const GenOpen&) { return true; },
          [&](const GenClose& x) {
            auto& y = std::get<GenClose>(b);
            return scheme_equal(x.scheme, y.scheme) &&
                   type_equal(x.mono, y.mono);
          },
      },
      a);
}

static void collect_metas(const TypePtr& t, std::set<int>& out) {
  std::visit(overload{
                 [&](const TMeta& m) { out.insert(m.id); },
                 [&](const TRigid&) {},
                 [&](const TBase&) {},
                 [&](const TArrow& f) {
                   collect_metas(f.param, out);
                   collect_metas(f.result, out);
                 },
             },
             t->node);
}

std::set<int> free_metas(const TypePtr& t) {
  std::set<int> out;
  collect_metas(t, out);
  return out;
}

std::set<int> free_metas(const PolyType& s) { return free_metas(s.body); }

std::set<int> free_metas(const Constraint& c) {
  std::set<int> out;
  auto ty = [&](const TypePtr& t) { collect_metas(t, out); };
  auto sc = [&](const PolyType& s) { collect_metas(s.body, out); };
  std::visit(overload{
                 [&](const EqTy& x) {
                   ty(x.lhs);
                   ty(x.rhs);
                 },
                 [&](const DupTy& x) {
                   ty(x.src);
                   ty(x.out1);
                   ty(x.out2);
                 },
                 [&](const InCtx& x) { sc(x.scheme); },
                 [&](const ExtendCtx& x) { sc(x.scheme); },
                 [&](const DupCtx&) {},
                 [&](const Inst& x) {
                   sc(x.scheme);
                   ty(x.target);
                 },
                 [&](const GenInCtx& x) {
                   sc(x.scheme);
                   ty(x.mono);
                 },
                 [&](const Ask& x) { sc(x.scheme); },
                 [&](const Tell& x) { sc(x.scheme); },
                 [&](const GenOpen&) {},
                 [&](const GenClose& x) {
                   sc(x.scheme);
                   ty(x.mono);
                 },
             },
             c);
  return out;
}

static void collect_rigids(const TypePtr& t, std::vector<Name>& out) {
  std::visit(overload{
                 [&](const TMeta&) {},
                 [&](const TRigid& r) {
                   if (std::find(out.begin(), out.end(), r.name) == out.end())
                     out.push_back(r.name);
                 },
                 [&](const TBase&) {},
                 [&](const TArrow& f) {
                   collect_rigids(f.param, out);
                   collect_rigids(f.result, out);
                 },
             },
             t->node);
}

std::vector<Name> free_rigids(const TypePtr& t) {
  std::vector<Name> out;
  collect_rigids(t, out);
  return out;
}

TypePtr apply_assignment(const Assignment& a, const TypePtr& t) {
  return std::visit(
      overload{
          [&](const TMeta& m) -> TypePtr {
            auto it = a.find(m.id);
            if (it == a.end()) return t;
            return apply_assignment(a, it->second);
          },
          [&](const TRigid&) { return t; },
          [&](const TBase&) { return t; },
          [&](const TArrow& f) {
            return arrow_type(apply_assignment(a, f.param),
                              apply_assignment(a, f.result));
          },
      },
      t->node);
}

PolyType apply_assignment(const Assignment& a, const PolyType& s) {
  return PolyType{s.bound, apply_assignment(a, s.body)};
}

// Matches a scheme body against a target, binding the scheme's bound
// variables; each bound variable's image is forced by the match.
static bool match_instance(const std::vector<Name>& bound, const TypePtr& body,
                           const TypePtr& target,
                           std::map<Name, TypePtr>& images) {
  if (auto* r = std::get_if<TRigid>(&body->node)) {
    if (std::find(bound.begin(), bound.end(), r->name) != bound.end()) {
      auto it = images.find(r->name);
      if (it == images.end()) {
        images.emplace(r->name, target);
        return true;
      }
      return type_equal(it->second, target);
    }
  }
  if (auto* f = std::get_if<TArrow>(&body->node)) {
    auto* g = std::get_if<TArrow>(&target->node);
    return g != nullptr &&
           match_instance(bound, f->param, g->param, images) &&
           match_instance(bound, f->result, g->result, images);
  }
  return type_equal(body, target);
}

static Context lookup_ctx(const CtxAssignment& a, const CtxRef& r) {
  auto it = a.find(r.id);
  if (it == a.end())
    throw std::invalid_argument("no context assigned to " + render_ctx_ref(r));
  return it->second;
}

bool satisfies(const Constraint& c, const Assignment& assignment,
               const CtxAssignment& ctx_assignment) {
  auto ty = [&](const TypePtr& t) { return apply_assignment(assignment, t); };
  auto sc = [&](const PolyType& s) { return apply_assignment(assignment, s); };
  auto ctx = [&](const CtxRef& r) {
    Context g = lookup_ctx(ctx_assignment, r);
    for (auto& [n, s] : g.entries) s = apply_assignment(assignment, s);
    return g;
  };
  return std::visit(
      overload{
          [&](const EqTy& x) { return type_equal(ty(x.lhs), ty(x.rhs)); },
          [&](const DupTy& x) {
            auto src = ty(x.src);
            return type_equal(ty(x.out1), src) && type_equal(ty(x.out2), src);
          },
          [&](const InCtx& x) {
            auto g = ctx(x.ctx);
            const PolyType* found = g.lookup(x.name);
            return found != nullptr && scheme_equal(*found, sc(x.scheme));
          },
          [&](const ExtendCtx& x) {
            return ctx(x.out) == ctx(x.base).extended(x.name, sc(x.scheme));
          },
          [&](const DupCtx& x) {
            auto src = ctx(x.src);
            return std::all_of(x.outs.begin(), x.outs.end(),
                               [&](const CtxRef& o) { return ctx(o) == src; });
          },
          [&](const Inst& x) {
            auto s = sc(x.scheme);
            std::map<Name, TypePtr> images;
            return match_instance(s.bound, s.body, ty(x.target), images);
          },
          [&](const GenInCtx& x) {
            auto body = ty(x.mono);
            auto g = ctx(x.ctx);
            std::vector<Name> quantified;
            for (const Name& n : free_rigids(body)) {
              bool in_ctx = false;
              for (const auto& [_, s] : g.entries) {
                auto rs = free_rigids(s.body);
                if (std::find(rs.begin(), rs.end(), n) != rs.end() &&
                    std::find(s.bound.begin(), s.bound.end(), n) ==
                        s.bound.end()) {
                  in_ctx = true;
                  break;
                }
              }
              if (!in_ctx) quantified.push_back(n);
            }
            return scheme_equal(sc(x.scheme), PolyType{quantified, body});
          },
          [&](const Ask&) -> bool {
            throw std::invalid_argument("not a closed constraint: ask");
          },
          [&](const Tell&) -> bool {
            throw std::invalid_argument("not a closed constraint: tell");
          },
          [&](const GenOpen&) -> bool {
            throw std::invalid_argument("not a closed constraint: gen[");
          },
          [&](const GenClose&) -> bool {
            throw std::invalid_argument("not a closed constraint: ]gen");
          },
      },
      c);
}

// --- rendering ---

static void render_type_into(const TypePtr& t, std::string& out, bool atom) {
  std::visit(overload{
                 [&](const TMeta& m) {
                   out += (m.kind == MetaKind::Poly ? 's' : 't');
                   out += std::to_string(m.id);
                 },
                 [&](const TRigid& r) { out += r.name.text; },
                 [&](const TBase& b) { out += b.name.text; },
                 [&](const TArrow& f) {
                   if (atom) out += '(';
                   render_type_into(f.param, out, true);
                   out += " -> ";
                   render_type_into(f.result, out, false);
                   if (atom) out += ')';
                 },
             },
             t->node);
}

std::string render_type(const TypePtr& t) {
  std::string out;
  render_type_into(t, out, false);
  return out;
}

std::string render_scheme(const PolyType& s) {
  if (s.bound.empty()) return render_type(s.body);
  std::string out = "forall";
  for (const Name& n : s.bound) out += " " + n.text;
  out += ". " + render_type(s.body);
  return out;
}

std::string render_context(const Context& c) {
  std::string out;
  for (size_t i = 0; i < c.entries.size(); ++i) {
    if (i) out += ", ";
    out += c.entries[i].first.text + " : " + render_scheme(c.entries[i].second);
  }
  return out;
}

std::string render_ctx_ref(const CtxRef& r) { return "G" + std::to_string(r.id); }

std::string render_constraint(const Constraint& c) {
  return std::visit(
      overload{
          [&](const EqTy& x) {
            return render_type(x.lhs) + " ~ " + render_type(x.rhs);
          },
          [&](const DupTy& x) {
            return "dup " + render_type(x.src) + " -> " + render_type(x.out1) +
                   " " + render_type(x.out2);
          },
          [&](const InCtx& x) {
            return x.name.text + " : " + render_scheme(x.scheme) + " in " +
                   render_ctx_ref(x.ctx);
          },
          [&](const ExtendCtx& x) {
            return render_ctx_ref(x.out) + " := " + render_ctx_ref(x.base) +
                   " , " + x.name.text + " : " + render_scheme(x.scheme);
          },
          [&](const DupCtx& x) {
            std::string out = "dup " + render_ctx_ref(x.src) + " ->";
            for (const CtxRef& r : x.outs) out += " " + render_ctx_ref(r);
            return out;
          },
          [&](const Inst& x) {
            return render_scheme(x.scheme) + " <= " + render_type(x.target);
          },
          [&](const GenInCtx& x) {
            return render_scheme(x.scheme) + " gen " + render_type(x.mono) +
                   " in " + render_ctx_ref(x.ctx);
          },
          [&](const Ask& x) {
            return "ask " + x.name.text + " : " + render_scheme(x.scheme);
          },
          [&](const Tell& x) {
            return "tell " + x.name.text + " : " + render_scheme(x.scheme);
          },
          [&](const GenOpen&) { return std::string("gen["); },
          [&](const GenClose& x) {
            return "]gen " + render_scheme(x.scheme) + " := " +
                   render_type(x.mono);
          },
      },
      c);
}

}  // namespace telic
