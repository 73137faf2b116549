#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "padic/rational.hpp"
#include "padic/report.hpp"

namespace padic::cli {

enum ExitCode : int { kAllPassed = 0, kCheckFailed = 1, kUsageError = 2 };

/// Every flag any subcommand understands; each subcommand reads its own.
struct Options {
  std::uint32_t p = 3;
  std::uint32_t r = 1;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out;
  unsigned threads = 1;
  double ceiling = 10.0;

  std::optional<std::uint32_t> m;
  std::optional<std::uint32_t> n;
  std::optional<Rational> gamma;
  Rational delta_a{1, 2};
  Rational delta_b{1, 2};
  std::uint32_t trials = 20;
  /// Empty for "all".
  std::optional<std::uint64_t> g_sample;
  Rational c{1, 2};

  double autocorr_ceiling = 4.0;
  std::vector<std::uint32_t> trend_primes;
  std::vector<Rational> deltas;
  std::optional<std::uint64_t> r_size;
  bool prune = false;
};

Report run_group(const Options& o);
Report run_orbit(const Options& o);
Report run_fourier(const Options& o);
Report run_restriction(const Options& o);
Report run_incidence(const Options& o);
Report run_mattila(const Options& o);
Report run_sharpness(const Options& o);
Report run_conjecture(const Options& o);

/// Parses argv, runs one subcommand and writes its report. Returns 0 when
/// every check passed, 1 if any failed, 2 on usage or configuration errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace padic::cli
