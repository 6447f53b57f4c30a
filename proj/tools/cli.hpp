#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "format.hpp"
#include "trigene/model.hpp"

namespace trigene::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitThreshold = 1,
  kExitValidation = 2,
  kExitNumerical = 3,
};

/// Runs the command line `args` (without the program name). Normal output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  RateSet raw = fig1a_raw();
  std::size_t samples = 200000;
  std::uint64_t seed = 1;
  std::size_t replicas = 16;
  /// 0 picks max(200, suggest_n_max).
  std::size_t n_max = 0;
  std::size_t workers = 1;

  static RateSet fig1a_raw();
};

/// Closed form against both oracles. The report never mentions `workers`
/// or timings, so equal options give byte-identical dumps.
Json verify_report(const VerifyOptions& options);

}  // namespace trigene::cli
