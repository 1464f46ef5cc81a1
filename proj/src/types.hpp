#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace telic {

template <class... Ts>
struct overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overload(Ts...) -> overload<Ts...>;

/// Identifier for term variables, rigid type variables and base types.
/// Lowercase-initial names are variables, uppercase-initial are base types.
struct Name {
  std::string text;
  auto operator<=>(const Name&) const = default;
};

enum class MetaKind { Mono, Poly };

struct MonoType;
using TypePtr = std::shared_ptr<const MonoType>;

struct TMeta {
  int id;
  MetaKind kind;
};
struct TRigid {
  Name name;
};
struct TBase {
  Name name;
};
struct TArrow {
  TypePtr param;
  TypePtr result;
};

struct MonoType {
  std::variant<TMeta, TRigid, TBase, TArrow> node;
};

TypePtr meta_type(int id, MetaKind kind = MetaKind::Mono);
TypePtr rigid_type(Name name);
TypePtr base_type(Name name);
TypePtr arrow_type(TypePtr param, TypePtr result);

bool type_equal(const TypePtr& a, const TypePtr& b);

/// n-ary type scheme; an empty bound list embeds a monotype.
struct PolyType {
  std::vector<Name> bound;
  TypePtr body;
};

bool scheme_equal(const PolyType& a, const PolyType& b);

/// The n=0 scheme around a monotype.
PolyType mono_scheme(TypePtr body);

/// A scheme-metavariable, encoded as the n=0 scheme around a poly-kind meta.
PolyType scheme_meta(int id);

/// Is this scheme just a wrapper around a poly-kind metavariable?
std::optional<int> as_scheme_meta(const PolyType& s);

/// Ordered typing context; lookup is innermost (rightmost) first.
struct Context {
  std::vector<std::pair<Name, PolyType>> entries;

  const PolyType* lookup(const Name& n) const;
  Context extended(Name n, PolyType s) const;
  bool operator==(const Context&) const;
};

/// Names a context metavariable in flat constraint sets.
struct CtxRef {
  int id;
  auto operator<=>(const CtxRef&) const = default;
};

/// Issues metavariable (and context reference) ids, monotone per session.
struct Session {
  int next_meta = 0;
  int next_ctx = 0;
  int fresh_meta() { return next_meta++; }
  int fresh_ctx() { return next_ctx++; }
};

// --- constraint vocabulary ---

struct EqTy {
  TypePtr lhs, rhs;
};
struct DupTy {
  TypePtr src, out1, out2;
};
struct InCtx {
  Name name;
  PolyType scheme;
  CtxRef ctx;
};
struct ExtendCtx {
  CtxRef out, base;
  Name name;
  PolyType scheme;
};
struct DupCtx {
  CtxRef src;
  std::vector<CtxRef> outs;
};
struct Inst {
  PolyType scheme;
  TypePtr target;
};
struct GenInCtx {
  PolyType scheme;
  TypePtr mono;
  CtxRef ctx;
};
struct Ask {
  Name name;
  PolyType scheme;
};
struct Tell {
  Name name;
  PolyType scheme;
};
struct GenOpen {};
struct GenClose {
  PolyType scheme;
  TypePtr mono;
};

using Constraint = std::variant<EqTy, DupTy, InCtx, ExtendCtx, DupCtx, Inst,
                                GenInCtx, Ask, Tell, GenOpen, GenClose>;

bool constraint_equal(const Constraint& a, const Constraint& b);

/// Exact set of metavariable ids occurring in the argument.
std::set<int> free_metas(const TypePtr& t);
std::set<int> free_metas(const PolyType& s);
std::set<int> free_metas(const Constraint& c);

/// Free rigid variable names, in first-occurrence (left-to-right) order.
std::vector<Name> free_rigids(const TypePtr& t);

using Assignment = std::map<int, TypePtr>;
using CtxAssignment = std::map<int, Context>;

/// Substitutes an assignment into a type (recursively, until fixpoint).
TypePtr apply_assignment(const Assignment& a, const TypePtr& t);
PolyType apply_assignment(const Assignment& a, const PolyType& s);

/// Static satisfaction semantics for closed (non-situated) constraints.
/// Throws std::invalid_argument for Ask/Tell/GenOpen/GenClose, which are
/// checked by tree-level semantics instead.
bool satisfies(const Constraint& c, const Assignment& assignment,
               const CtxAssignment& ctx_assignment);

// --- canonical text rendering ---

std::string render_type(const TypePtr& t);
std::string render_scheme(const PolyType& s);
std::string render_context(const Context& c);
std::string render_constraint(const Constraint& c);
std::string render_ctx_ref(const CtxRef& r);

}  // namespace telic
