#include "tree.hpp"

#include <json.hpp>
#include <set>
#include <stdexcept>

namespace telic {

namespace {

struct StlcGen {
  Session session;

  TypePtr fresh() { return meta_type(session.fresh_meta()); }

  void quantify(std::vector<TreeNode>& out, const TypePtr& m) {
    out.push_back(
        TreeNode{Quantify{std::get<TMeta>(m->node).id, SchemeKind::Mono}});
  }

  void emit(const TermPtr& t, const TypePtr& r, std::vector<TreeNode>& out) {
    std::visit(
        overload{
            [&](const Var& v) {
              out.push_back(TreeNode{Constr{Ask{v.name, mono_scheme(r)}}});
            },
            [&](const Lam& l) {
              TypePtr tp = fresh(), tr = fresh();
              quantify(out, tp);
              quantify(out, tr);
              out.push_back(TreeNode{Constr{EqTy{r, arrow_type(tp, tr)}}});
              out.push_back(TreeNode{Constr{Tell{l.binder, mono_scheme(tp)}}});
              emit(l.body, tr, out);
            },
            [&](const ALam& l) {
              TypePtr tap = fresh(), taf = fresh(), tr = fresh();
              quantify(out, tap);
              quantify(out, taf);
              quantify(out, tr);
              out.push_back(TreeNode{Constr{DupTy{l.annotation, tap, taf}}});
              out.push_back(TreeNode{Constr{Tell{l.binder, mono_scheme(tap)}}});
              out.push_back(TreeNode{Constr{EqTy{r, arrow_type(taf, tr)}}});
              emit(l.body, tr, out);
            },
            [&](const App& a) {
              TypePtr tf = fresh(), tp = fresh();
              quantify(out, tf);
              quantify(out, tp);
              out.push_back(
                  TreeNode{Constr{EqTy{arrow_type(tp, r), tf}}});
              Branch br;
              br.children.emplace_back();
              emit(a.fun, tf, br.children.back().nodes);
              br.children.emplace_back();
              emit(a.arg, tp, br.children.back().nodes);
              out.push_back(TreeNode{std::move(br)});
            },
            [&](const Let&) {
              throw std::invalid_argument(
                  "let is not part of the simply typed system");
            },
        },
        t->node);
  }
};

struct HmGen {
  Session session;

  TypePtr fresh() { return meta_type(session.fresh_meta()); }
  int fresh_poly() { return session.fresh_meta(); }

  void quantify(std::vector<TreeNode>& out, const TypePtr& m) {
    out.push_back(
        TreeNode{Quantify{std::get<TMeta>(m->node).id, SchemeKind::Mono}});
  }
  void quantify_poly(std::vector<TreeNode>& out, int id) {
    out.push_back(TreeNode{Quantify{id, SchemeKind::Poly}});
  }

  void emit(const TermPtr& t, const TypePtr& r, std::vector<TreeNode>& out) {
    std::visit(
        overload{
            [&](const Var& v) {
              int s = fresh_poly();
              quantify_poly(out, s);
              out.push_back(TreeNode{Constr{Ask{v.name, scheme_meta(s)}}});
              out.push_back(TreeNode{Constr{Inst{scheme_meta(s), r}}});
            },
            [&](const Lam& l) {
              TypePtr tp = fresh(), tr = fresh();
              quantify(out, tp);
              quantify(out, tr);
              out.push_back(TreeNode{Constr{EqTy{r, arrow_type(tp, tr)}}});
              out.push_back(TreeNode{Constr{Tell{l.binder, mono_scheme(tp)}}});
              emit(l.body, tr, out);
            },
            [&](const ALam& l) {
              TypePtr tap = fresh(), taf = fresh(), tr = fresh();
              quantify(out, tap);
              quantify(out, taf);
              quantify(out, tr);
              out.push_back(TreeNode{Constr{DupTy{l.annotation, tap, taf}}});
              out.push_back(TreeNode{Constr{Tell{l.binder, mono_scheme(tap)}}});
              out.push_back(TreeNode{Constr{EqTy{r, arrow_type(taf, tr)}}});
              emit(l.body, tr, out);
            },
            [&](const App& a) {
              TypePtr tf = fresh(), tp = fresh();
              quantify(out, tf);
              quantify(out, tp);
              out.push_back(
                  TreeNode{Constr{EqTy{arrow_type(tp, r), tf}}});
              Branch br;
              br.children.emplace_back();
              emit(a.fun, tf, br.children.back().nodes);
              br.children.emplace_back();
              emit(a.arg, tp, br.children.back().nodes);
              out.push_back(TreeNode{std::move(br)});
            },
            [&](const Let& l) {
              int s = fresh_poly();
              quantify_poly(out, s);
              Branch br;
              br.children.emplace_back();
              {
                auto& bound = br.children.back().nodes;
                bound.push_back(TreeNode{Constr{GenOpen{}}});
                TypePtr tb = fresh();
                quantify(bound, tb);
                bound.push_back(TreeNode{Constr{GenClose{scheme_meta(s), tb}}});
                emit(l.bound, tb, bound);
              }
              br.children.emplace_back();
              {
                auto& body = br.children.back().nodes;
                body.push_back(TreeNode{Constr{Tell{l.binder, scheme_meta(s)}}});
                emit(l.body, r, body);
              }
              out.push_back(TreeNode{std::move(br)});
            },
        },
        t->node);
  }
};

}  // namespace

Telescope build_tree_stlc(const TermPtr& t, const Context& ctx) {
  StlcGen gen;
  Telescope root;
  root.prefix = ctx;
  TypePtr result = gen.fresh();
  gen.quantify(root.nodes, result);
  gen.emit(t, result, root.nodes);
  return root;
}

Telescope build_tree_hm(const TermPtr& t, const Context& ctx, HmStart start) {
  HmGen gen;
  Telescope root;
  root.prefix = ctx;
  if (start == HmStart::Mono) {
    TypePtr result = gen.fresh();
    gen.quantify(root.nodes, result);
    gen.emit(t, result, root.nodes);
  } else {
    int s = gen.fresh_poly();
    gen.quantify_poly(root.nodes, s);
    root.nodes.push_back(TreeNode{Constr{GenOpen{}}});
    TypePtr result = gen.fresh();
    gen.quantify(root.nodes, result);
    root.nodes.push_back(TreeNode{Constr{GenClose{scheme_meta(s), result}}});
    gen.emit(t, result, root.nodes);
  }
  return root;
}

namespace {

bool has_gen_markers(const Telescope& t) {
  for (const TreeNode& n : t.nodes) {
    if (auto* c = std::get_if<Constr>(&n.node)) {
      if (std::holds_alternative<GenOpen>(c->c) ||
          std::holds_alternative<GenClose>(c->c))
        return true;
    } else if (auto* b = std::get_if<Branch>(&n.node)) {
      for (const Telescope& child : b->children)
        if (has_gen_markers(child)) return true;
    }
  }
  return false;
}

void split_quantifiers(const Telescope& t, std::vector<TreeNode>& quantifiers,
                       Telescope& rest) {
  for (const TreeNode& n : t.nodes) {
    if (std::holds_alternative<Quantify>(n.node)) {
      quantifiers.push_back(n);
    } else if (auto* b = std::get_if<Branch>(&n.node)) {
      Branch stripped;
      for (const Telescope& child : b->children) {
        Telescope out;
        split_quantifiers(child, quantifiers, out);
        stripped.children.push_back(std::move(out));
      }
      rest.nodes.push_back(TreeNode{std::move(stripped)});
    } else {
      rest.nodes.push_back(n);
    }
  }
}

}  // namespace

Telescope lift_quantifiers(const Telescope& tree) {
  if (has_gen_markers(tree))
    throw std::invalid_argument("lifting unsound for generalisation regions");
  std::vector<TreeNode> quantifiers;
  Telescope rest;
  split_quantifiers(tree, quantifiers, rest);
  Telescope out;
  out.prefix = tree.prefix;
  out.nodes = std::move(quantifiers);
  out.nodes.insert(out.nodes.end(), rest.nodes.begin(), rest.nodes.end());
  return out;
}

bool telescope_equal(const Telescope& a, const Telescope& b) {
  if (a.prefix.has_value() != b.prefix.has_value()) return false;
  if (a.prefix && !(*a.prefix == *b.prefix)) return false;
  if (a.nodes.size() != b.nodes.size()) return false;
  for (size_t i = 0; i < a.nodes.size(); ++i) {
    const TreeNode& x = a.nodes[i];
    const TreeNode& y = b.nodes[i];
    if (x.node.index() != y.node.index()) return false;
    bool ok = std::visit(
        overload{
            [&](const Quantify& q) {
              auto& p = std::get<Quantify>(y.node);
              return q.meta == p.meta && q.kind == p.kind;
            },
            [&](const Constr& c) {
              return constraint_equal(c.c, std::get<Constr>(y.node).c);
            },
            [&](const Branch& br) {
              auto& ob = std::get<Branch>(y.node);
              if (br.children.size() != ob.children.size()) return false;
              for (size_t k = 0; k < br.children.size(); ++k)
                if (!telescope_equal(br.children[k], ob.children[k]))
                  return false;
              return true;
            },
        },
        x.node);
    if (!ok) return false;
  }
  return true;
}

namespace {

bool check_scope(const Telescope& t, std::set<int> in_scope) {
  for (const TreeNode& n : t.nodes) {
    bool ok = std::visit(
        overload{
            [&](const Quantify& q) {
              in_scope.insert(q.meta);
              return true;
            },
            [&](const Constr& c) {
              for (int m : free_metas(c.c))
                if (!in_scope.count(m)) return false;
              return true;
            },
            [&](const Branch& b) {
              for (const Telescope& child : b.children)
                if (!check_scope(child, in_scope)) return false;
              return true;
            },
        },
        n.node);
    if (!ok) return false;
  }
  return true;
}

std::string render_quantifier(const Quantify& q) {
  std::string out = "?";
  out += (q.kind == SchemeKind::Poly ? 's' : 't');
  out += std::to_string(q.meta);
  if (q.solution) out += " := " + render_type(*q.solution);
  if (q.scheme_solution) out += " := " + render_scheme(*q.scheme_solution);
  return out;
}

void render_text(const Telescope& t, std::string& out, int indent) {
  std::string pad(indent, ' ');
  for (const TreeNode& n : t.nodes) {
    std::visit(overload{
                   [&](const Quantify& q) {
                     out += pad + render_quantifier(q) + "\n";
                   },
                   [&](const Constr& c) {
                     out += pad + render_constraint(c.c) + "\n";
                   },
                   [&](const Branch& b) {
                     for (const Telescope& child : b.children) {
                       out += pad + "|\n";
                       render_text(child, out, indent + 2);
                     }
                   },
               },
               n.node);
  }
}

nlohmann::ordered_json telescope_json(const Telescope& t);

nlohmann::ordered_json node_json(const TreeNode& n) {
  nlohmann::ordered_json j;
  std::visit(overload{
                 [&](const Quantify& q) {
                   j["kind"] = "quantify";
                   j["meta"] =
                       (q.kind == SchemeKind::Poly ? "s" : "t") +
                       std::to_string(q.meta);
                   if (q.solution)
                     j["solution"] = render_type(*q.solution);
                   else if (q.scheme_solution)
                     j["solution"] = render_scheme(*q.scheme_solution);
                   else
                     j["solution"] = nullptr;
                 },
                 [&](const Constr& c) {
                   j["kind"] = "constraint";
                   j["text"] = render_constraint(c.c);
                 },
                 [&](const Branch& b) {
                   j["kind"] = "branch";
                   j["children"] = nlohmann::ordered_json::array();
                   for (const Telescope& child : b.children)
                     j["children"].push_back(telescope_json(child));
                 },
             },
             n.node);
  return j;
}

nlohmann::ordered_json telescope_json(const Telescope& t) {
  nlohmann::ordered_json j;
  if (t.prefix)
    j["prefix"] = render_context(*t.prefix);
  j["nodes"] = nlohmann::ordered_json::array();
  for (const TreeNode& n : t.nodes) j["nodes"].push_back(node_json(n));
  return j;
}

int dot_telescope(const Telescope& t, std::string& out, int& counter,
                  int parent);

int dot_node(const TreeNode& n, std::string& out, int& counter) {
  int id = counter++;
  std::string label = std::visit(
      overload{
          [&](const Quantify& q) { return render_quantifier(q); },
          [&](const Constr& c) { return render_constraint(c.c); },
          [&](const Branch&) { return std::string("|"); },
      },
      n.node);
  std::string escaped;
  for (char c : label) {
    if (c == '"' || c == '\\') escaped += '\\';
    escaped += c;
  }
  out += "  n" + std::to_string(id) + " [label=\"" + escaped + "\"];\n";
  if (auto* b = std::get_if<Branch>(&n.node))
    for (const Telescope& child : b->children)
      dot_telescope(child, out, counter, id);
  return id;
}

int dot_telescope(const Telescope& t, std::string& out, int& counter,
                  int parent) {
  int prev = parent;
  for (const TreeNode& n : t.nodes) {
    int id = dot_node(n, out, counter);
    if (prev >= 0)
      out += "  n" + std::to_string(prev) + " -> n" + std::to_string(id) +
             ";\n";
    prev = id;
  }
  return prev;
}

}  // namespace

bool scope_disciplined(const Telescope& tree) {
  return check_scope(tree, {});
}

std::string render_tree_text(const Telescope& tree) {
  std::string out;
  if (tree.prefix && !tree.prefix->entries.empty())
    out += "ctx: " + render_context(*tree.prefix) + "\n";
  render_text(tree, out, 0);
  return out;
}

std::string render_tree_json(const Telescope& tree) {
  return telescope_json(tree).dump(2);
}

std::string render_tree_dot(const Telescope& tree) {
  std::string body;
  int counter = 0;
  dot_telescope(tree, body, counter, -1);
  return "digraph telescope {\n  node [shape=box];\n" + body + "}\n";
}

}  // namespace telic
