#pragma once

#include <optional>
#include <string>
#include <vector>

#include "syntax.hpp"
#include "tree.hpp"
#include "types.hpp"

namespace telic {

/// One typing-rule instantiation; recorded in pre-order so the derivation
/// can be replayed into a telescopic tree.
struct TraceEntry {
  std::string rule;  // Var | Lam | ALam | App | Let
  Name name;         // variable or binder, when the rule has one
  std::optional<TypePtr> annotation;
  std::vector<int> metas;
  std::vector<int> ctxs;
};

/// Flat, context-explicit constraint multiset for a whole term.
struct FlatDerivation {
  System system = System::Stlc;
  std::vector<Constraint> constraints;
  int root_ctx = 0;
  int result_ty = 0;
  std::vector<TraceEntry> trace;
};

FlatDerivation generate_flat(const TermPtr& t, System system);

struct LinearityViolation {
  bool is_ctx;  // false: metavariable, true: context reference
  int id;
  int count;
};

struct LinearityReport {
  bool ok = true;
  std::vector<LinearityViolation> violations;
};

/// Every metavariable and context reference must occur exactly twice,
/// counting the root context as one source and the result type as one sink.
LinearityReport check_linearity(const FlatDerivation& d);

/// Trace-directed translation into the telescopic form; the result equals
/// the direct tree generator on the originating term, node for node
/// (HM derivations correspond to a monomorphic start).
/// Throws std::invalid_argument ("untraceable derivation") when the trace
/// is absent or inconsistent.
Telescope flat_to_tree(const FlatDerivation& d);

std::string render_flat(const FlatDerivation& d);

}  // namespace telic
