#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "syntax.hpp"
#include "types.hpp"

namespace telic {

enum class SchemeKind { Mono, Poly };

struct TreeNode;

/// A telescope: an ordered run of quantifiers, situated constraints and
/// branch points. Only the root carries a context prefix.
struct Telescope {
  std::optional<Context> prefix;
  std::vector<TreeNode> nodes;
};

struct Quantify {
  int meta;
  SchemeKind kind;
  std::optional<TypePtr> solution;        // mono quantifiers
  std::optional<PolyType> scheme_solution;  // poly quantifiers
};
struct Constr {
  Constraint c;
};
struct Branch {
  std::vector<Telescope> children;
};

struct TreeNode {
  std::variant<Quantify, Constr, Branch> node;
};

enum class System { Stlc, Hm };
enum class HmStart { Mono, Poly };

/// Telescopic tree for the simply typed system. Throws std::invalid_argument
/// on let-expressions, which the simply typed rules do not cover.
Telescope build_tree_stlc(const TermPtr& t, const Context& ctx);

Telescope build_tree_hm(const TermPtr& t, const Context& ctx, HmStart start);

/// Moves every quantifier to the front of the root telescope, preserving
/// relative order. Throws std::invalid_argument when generalisation markers
/// are present (lifting is unsound across them).
Telescope lift_quantifiers(const Telescope& tree);

bool telescope_equal(const Telescope& a, const Telescope& b);

/// Every constraint's metavariables are bound by earlier quantifiers.
bool scope_disciplined(const Telescope& tree);

std::string render_tree_text(const Telescope& tree);
std::string render_tree_json(const Telescope& tree);
std::string render_tree_dot(const Telescope& tree);

}  // namespace telic
