#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tree.hpp"
#include "types.hpp"

namespace telic {

struct StoreEntry {
  int meta;
  MetaKind kind;
  std::optional<TypePtr> solution;
  std::optional<PolyType> scheme_solution;
};

/// Ordered solution store; entries obey the telescope discipline (a solution
/// references only metavariables declared earlier in the order).
class MetaStore {
 public:
  void declare(int meta, MetaKind kind);
  bool declared(int meta) const;

  /// One-step resolution of a solved metavariable at the head.
  TypePtr walk(TypePtr t) const;
  /// Full substitution of the store into a type.
  TypePtr zonk(const TypePtr& t) const;
  PolyType zonk(const PolyType& s) const;

  const StoreEntry& entry(int meta) const;
  size_t position(int meta) const;
  size_t size() const { return entries_.size(); }
  const std::vector<StoreEntry>& entries() const { return entries_; }

  /// Records a solution, relocating the entry (and any dependents) so the
  /// order discipline is preserved. Position marks registered via push_mark
  /// are kept pointing at the same unsolved entries.
  void assign(int meta, TypePtr solution);
  void assign_scheme(int meta, PolyType scheme);

  size_t push_mark();
  void pop_mark();
  size_t mark(size_t idx) const { return marks_[idx]; }

 private:
  std::vector<StoreEntry> entries_;
  std::map<int, size_t> index_;
  std::vector<size_t> marks_;

  void move_entry(size_t from, size_t to);
  void restore_order();
};

enum class FailureKind { Mismatch, OccursCheck, UnboundVariable };

struct Failure {
  FailureKind kind;
  /// Branch child indices from the root (1-based), then the node index
  /// within that telescope (0-based).
  std::vector<int> path;
  /// Offending constraint after substitution.
  std::string detail;
};

struct UnifyError {
  FailureKind kind;  // Mismatch or OccursCheck
  TypePtr lhs, rhs;
};

/// Most general unifier; extends the store in place.
std::optional<UnifyError> unify(MetaStore& store, TypePtr a, TypePtr b);

/// Replaces the scheme's bound variables by fresh metavariables declared at
/// the store end.
TypePtr instantiate(MetaStore& store, Session& session, const PolyType& s);

enum class Verdict { Sat, Unsat, Unknown };

struct SolveResult {
  enum class Status { Solved, Ambiguous, Failed } status;
  /// Solved: the principal result (n=0 for monomorphic starts).
  /// Ambiguous: the result with residual metas renamed to rigid a, b, ...
  std::optional<PolyType> result;
  std::vector<int> unsolved_metas;  // Ambiguous only
  std::optional<Failure> failure;   // Failed only
  Telescope annotated;
  std::vector<StoreEntry> store;  // snapshot, for inspection
  /// free-variable mode: required bindings, canonically renamed.
  std::vector<std::pair<Name, TypePtr>> requirements;
  std::string trace;
};

struct SolveOptions {
  /// Treat the root context as open: unbound Asks record requirements
  /// instead of failing (free-variable analysis).
  bool open_context = false;
  bool trace = false;
};

SolveResult solve_tree(const Telescope& tree, const SolveOptions& opts = {});

Verdict classify(const SolveResult& r);

/// Scope-respecting generalisation: quantifies the unsolved metas of the
/// zonked body declared at or after the mark and not reachable from any
/// scope frame outside the region. Exposed for direct testing; solve_tree
/// invokes it when a generalisation region closes.
PolyType generalize(MetaStore& store, size_t region_start, const TypePtr& body,
                    const std::vector<std::pair<Name, PolyType>>& outer_frames,
                    const std::vector<Name>& forbidden_names);

// Convenience entry points for the Appendix A data modes.
SolveResult infer(const TermPtr& t, const Context& ctx, System system,
                  HmStart start = HmStart::Poly, bool trace = false);
SolveResult check(const TermPtr& t, const Context& ctx, const TypePtr& expected,
                  System system, bool trace = false);
SolveResult free_vars(const TermPtr& t, const Context& ctx, System system);

}  // namespace telic
