#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "telic/telic.h"

namespace {

struct Common {
  std::string term;
  std::string ctx;
  std::string system = "stlc";
  std::string start = "poly";
  std::string format = "text";
  bool trace = false;
};

int to_system(const std::string& s) {
  return s == "hm" ? TELIC_HM : TELIC_STLC;
}

int to_start(const std::string& s) {
  return s == "mono" ? TELIC_START_MONO : TELIC_START_POLY;
}

int to_format(const std::string& s) {
  if (s == "json") return TELIC_JSON;
  if (s == "dot") return TELIC_DOT;
  return TELIC_TEXT;
}

// --ctx accepts inline text or @path-to-file
bool load_ctx(std::string& ctx) {
  if (ctx.empty() || ctx[0] != '@') return true;
  std::ifstream in(ctx.substr(1));
  if (!in) {
    std::cerr << "error: cannot read context file " << ctx.substr(1) << "\n";
    return false;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  ctx = buf.str();
  return true;
}

void add_common(CLI::App* cmd, Common& c, bool with_term = true) {
  if (with_term) cmd->add_option("term", c.term, "term in surface syntax")->required();
  cmd->add_option("--ctx", c.ctx, "typing context, inline or @file");
  cmd->add_option("--system", c.system, "type system")
      ->check(CLI::IsMember({"stlc", "hm"}));
  cmd->add_option("--start", c.start, "root start for hm")
      ->check(CLI::IsMember({"mono", "poly"}));
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"text", "json", "dot"}));
  cmd->add_flag("--trace", c.trace, "print a solve trace to stderr");
}

int emit(telic_session* session, int status, char* out, char* out_trace) {
  if (out) std::fputs(out, stdout);
  if (out_trace && *out_trace) std::fputs(out_trace, stderr);
  if (status == TELIC_USAGE && (!out || !*out))
    std::cerr << telic_last_error(session) << "\n";
  telic_string_free(out);
  telic_string_free(out_trace);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constraint-based typechecker for the lambda calculus"};
  app.require_subcommand(1);

  Common c;
  std::string expected;
  bool lift = false;
  std::string mode;
  std::uint64_t seed = 0;
  int count = 100;

  auto* infer = app.add_subcommand("infer", "infer the type of a term");
  add_common(infer, c);
  auto* check = app.add_subcommand("check", "check a term against a type");
  add_common(check, c);
  check->add_option("--type", expected, "expected type")->required();
  auto* fv = app.add_subcommand("fv", "free-variable requirements of a term");
  add_common(fv, c);
  auto* tree = app.add_subcommand("tree", "dump the telescopic constraint tree");
  add_common(tree, c);
  tree->add_flag("--lift", lift, "lift quantifiers to the front");
  auto* flat = app.add_subcommand("flat", "dump the flat constraint set");
  add_common(flat, c);
  auto* modes = app.add_subcommand("modes", "mode analysis of the typing rules");
  add_common(modes, c, false);
  modes->add_option("--mode", mode, "judgment mode pattern, e.g. \"+ + -\"");
  auto* fuzz = app.add_subcommand("fuzz", "differential run against a substitution-based reference checker");
  add_common(fuzz, c, false);
  fuzz->add_option("--seed", seed, "corpus seed");
  fuzz->add_option("--count", count, "number of terms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : TELIC_USAGE;
  }

  if (!load_ctx(c.ctx)) return TELIC_USAGE;

  telic_session* session = telic_session_new();
  int system = to_system(c.system);
  int start = to_start(c.start);
  int format = to_format(c.format);
  int status = TELIC_USAGE;
  char* out = nullptr;
  char* out_trace = nullptr;

  if (infer->parsed()) {
    status = telic_infer(session, c.term.c_str(), c.ctx.c_str(), system, start,
                         format, c.trace, &out, &out_trace);
  } else if (check->parsed()) {
    status = telic_check(session, c.term.c_str(), c.ctx.c_str(),
                         expected.c_str(), system, format, c.trace, &out,
                         &out_trace);
  } else if (fv->parsed()) {
    status = telic_free_vars(session, c.term.c_str(), c.ctx.c_str(), system,
                             format, &out);
  } else if (tree->parsed()) {
    status = telic_tree(session, c.term.c_str(), c.ctx.c_str(), system, start,
                        lift, format, &out);
  } else if (flat->parsed()) {
    status = telic_flat(session, c.term.c_str(), system, format, &out);
  } else if (modes->parsed()) {
    status = telic_modes(session, mode.c_str(), system, format, &out);
  } else if (fuzz->parsed()) {
    status = telic_fuzz(session, seed, count, format, &out);
  }

  int code = emit(session, status, out, out_trace);
  telic_session_free(session);
  return code;
}
