#pragma once

#include <string>

#include "strata/config.hpp"

namespace strata {

// Run orchestration behind the CLI verbs.  Exit codes: 0 success,
// 1 divergence, 2 configuration / checkpoint errors.

int run_solve(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed,
              const std::string& resume_path);

int run_sweep(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed);

int run_verify(const std::string& family, std::uint64_t seed);

int run_inspect(const std::string& checkpoint_path, const RunConfig* cfg);

}  // namespace strata
