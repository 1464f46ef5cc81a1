#include <string>

#include "doctest.h"
#include "telic/telic.h"

TEST_CASE("C API round trips") {
  telic_session* s = telic_session_new();
  REQUIRE(s != nullptr);

  char* out = nullptr;
  char* trace = nullptr;
  int rc = telic_infer(s, "(\\x. x) y", "y : Int", TELIC_STLC,
                       TELIC_START_POLY, TELIC_TEXT, 0, &out, &trace);
  CHECK(rc == TELIC_SAT);
  CHECK(std::string(out) == "Int\n");
  telic_string_free(out);
  telic_string_free(trace);

  rc = telic_infer(s, "\\x. x", "", TELIC_STLC, TELIC_START_POLY, TELIC_TEXT,
                   0, &out, &trace);
  CHECK(rc == TELIC_UNKNOWN);
  CHECK(std::string(out).find("ambiguous") != std::string::npos);
  telic_string_free(out);
  telic_string_free(trace);

  rc = telic_check(s, "\\x. x", nullptr, "Int -> Bool", TELIC_STLC, TELIC_TEXT,
                   0, &out, &trace);
  CHECK(rc == TELIC_UNSAT);
  telic_string_free(out);
  telic_string_free(trace);

  rc = telic_infer(s, "let x =", "", TELIC_HM, TELIC_START_POLY, TELIC_TEXT, 0,
                   &out, &trace);
  CHECK(rc == TELIC_USAGE);
  CHECK(std::string(telic_last_error(s)).find("parse error") !=
        std::string::npos);
  telic_string_free(out);
  telic_string_free(trace);

  rc = telic_infer(s, "\\x : Int . x", "", TELIC_STLC, TELIC_START_POLY,
                   TELIC_JSON, 0, &out, &trace);
  CHECK(rc == TELIC_SAT);
  {
    std::string j(out);
    CHECK(j.find("\"status\": 0") != std::string::npos);
    CHECK(j.find("\"result\": \"Int -> Int\"") != std::string::npos);
  }
  telic_string_free(out);
  telic_string_free(trace);

  rc = telic_tree(s, "(\\x. x) y", "", TELIC_STLC, TELIC_START_POLY, 0,
                  TELIC_DOT, &out);
  CHECK(rc == TELIC_SAT);
  CHECK(std::string(out).rfind("digraph", 0) == 0);
  telic_string_free(out);

  rc = telic_flat(s, "x", TELIC_STLC, TELIC_TEXT, &out);
  CHECK(rc == TELIC_SAT);
  CHECK(std::string(out).find("x : t0 in G0") != std::string::npos);
  telic_string_free(out);

  rc = telic_free_vars(s, "f (g x)", "", TELIC_STLC, TELIC_TEXT, &out);
  CHECK(rc == TELIC_UNKNOWN);
  CHECK(std::string(out).find("f : ") != std::string::npos);
  telic_string_free(out);

  rc = telic_modes(s, "+ + -", TELIC_STLC, TELIC_TEXT, &out);
  CHECK(rc == TELIC_SAT);
  CHECK(std::string(out).find("(Var)") != std::string::npos);
  telic_string_free(out);

  rc = telic_fuzz(s, 5, 50, TELIC_TEXT, &out);
  CHECK(rc == TELIC_SAT);
  CHECK(std::string(out).find("disagreements=0") != std::string::npos);
  telic_string_free(out);

  telic_session_free(s);
}
