#include "telic/telic.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "api.hpp"

using namespace telic;

struct telic_session {
  std::string last_error;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string or_empty(const char* s) { return s ? s : ""; }

api::Format to_format(int f) {
  switch (f) {
    case TELIC_JSON: return api::Format::Json;
    case TELIC_DOT: return api::Format::Dot;
    default: return api::Format::Text;
  }
}

System to_system(int s) { return s == TELIC_HM ? System::Hm : System::Stlc; }

HmStart to_start(int s) {
  return s == TELIC_START_MONO ? HmStart::Mono : HmStart::Poly;
}

int deliver(telic_session* s, const api::Run& run, char** out,
            char** out_trace = nullptr) {
  if (out) *out = dup_string(run.output);
  if (out_trace) *out_trace = dup_string(run.trace);
  s->last_error = run.status == TELIC_USAGE ? run.output : "";
  return run.status;
}

template <class F>
int guard(telic_session* s, char** out, char** out_trace, F&& body) {
  if (!s) return TELIC_USAGE;
  try {
    return deliver(s, body(), out, out_trace);
  } catch (const std::exception& e) {
    s->last_error = e.what();
    if (out) *out = dup_string("");
    if (out_trace) *out_trace = dup_string("");
    return TELIC_USAGE;
  }
}

}  // namespace

extern "C" {

telic_session* telic_session_new(void) { return new telic_session(); }

void telic_session_free(telic_session* s) { delete s; }

const char* telic_last_error(const telic_session* s) {
  return s ? s->last_error.c_str() : "";
}

void telic_string_free(char* s) { std::free(s); }

int telic_infer(telic_session* s, const char* term, const char* ctx,
                int system, int start, int format, int trace, char** out,
                char** out_trace) {
  return guard(s, out, out_trace, [&] {
    return api::run_infer(or_empty(term), or_empty(ctx), to_system(system),
                          to_start(start), to_format(format), trace != 0);
  });
}

int telic_check(telic_session* s, const char* term, const char* ctx,
                const char* expected, int system, int format, int trace,
                char** out, char** out_trace) {
  return guard(s, out, out_trace, [&] {
    return api::run_check(or_empty(term), or_empty(ctx), or_empty(expected),
                          to_system(system), to_format(format), trace != 0);
  });
}

int telic_free_vars(telic_session* s, const char* term, const char* ctx,
                    int system, int format, char** out) {
  return guard(s, out, nullptr, [&] {
    return api::run_free_vars(or_empty(term), or_empty(ctx), to_system(system),
                              to_format(format));
  });
}

int telic_tree(telic_session* s, const char* term, const char* ctx, int system,
               int start, int lift, int format, char** out) {
  return guard(s, out, nullptr, [&] {
    return api::run_tree(or_empty(term), or_empty(ctx), to_system(system),
                         to_start(start), lift != 0, to_format(format));
  });
}

int telic_flat(telic_session* s, const char* term, int system, int format,
               char** out) {
  return guard(s, out, nullptr, [&] {
    return api::run_flat(or_empty(term), to_system(system), to_format(format));
  });
}

int telic_modes(telic_session* s, const char* mode, int system, int format,
                char** out) {
  return guard(s, out, nullptr, [&] {
    return api::run_modes(or_empty(mode), to_system(system), to_format(format));
  });
}

int telic_fuzz(telic_session* s, uint64_t seed, int count, int format,
               char** out) {
  return guard(s, out, nullptr,
               [&] { return api::run_fuzz(seed, count, to_format(format)); });
}

}  // extern "C"
