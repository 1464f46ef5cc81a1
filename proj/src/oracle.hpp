#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "solver.hpp"
#include "syntax.hpp"

namespace telic {

struct WError {
  FailureKind kind;
  std::string detail;
};

/// Independent substitution-based reference inference, generalising at the
/// root. This is the top-down (expected-type) variant of Algorithm W, so
/// unifications happen at the same program points as the solver's
/// constraints and first-failure kinds are comparable. Deliberately shares
/// nothing with the solver: own unifier, own substitution map, no
/// constraint store.
std::variant<PolyType, WError> oracle_infer(const Context& ctx,
                                            const TermPtr& term);

/// Alpha-equivalence of schemes after canonicalising both sides to
/// first-occurrence binder order (unused binders are dropped).
bool equiv_scheme(const PolyType& a, const PolyType& b);

PolyType canonical_scheme(const PolyType& s);

struct FuzzOptions {
  int max_size = 30;
  int max_depth = 8;
  double p_let = 0.15;
  double p_annot = 0.15;
  double p_free = 0.0;  // chance a variable reference ignores scope
  bool allow_let = true;
  bool allow_annot = true;
};

TermPtr random_term(std::mt19937& rng, const FuzzOptions& opts);

std::vector<TermPtr> make_corpus(std::uint64_t seed, int count,
                                 const FuzzOptions& opts);

/// One term per line in surface syntax, preceded by "# seed=N".
std::string dump_corpus(std::uint64_t seed, const std::vector<TermPtr>& corpus);

}  // namespace telic
