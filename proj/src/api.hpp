#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "solver.hpp"

namespace telic::api {

enum class Format { Text, Json, Dot };

/// status follows the process exit convention: 0 = SAT, 1 = UNSAT,
/// 2 = UNKNOWN (ambiguous), 3 = usage or parse error.
struct Run {
  int status = 0;
  std::string output;
  std::string trace;
};

Run run_infer(const std::string& term, const std::string& ctx, System system,
              HmStart start, Format format, bool trace);
Run run_check(const std::string& term, const std::string& ctx,
              const std::string& expected, System system, Format format,
              bool trace);
Run run_free_vars(const std::string& term, const std::string& ctx,
                  System system, Format format);
Run run_tree(const std::string& term, const std::string& ctx, System system,
             HmStart start, bool lift, Format format);
Run run_flat(const std::string& term, System system, Format format);
/// mode: empty for the full mode-table report, else a pattern like "+ + -".
Run run_modes(const std::string& mode, System system, Format format);
Run run_fuzz(std::uint64_t seed, int count, Format format);

}  // namespace telic::api
