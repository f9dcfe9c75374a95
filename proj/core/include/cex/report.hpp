#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace cex {

std::string version();

/// Provenance attached to every artifact. No timestamps, so reruns are
/// byte-identical.
struct RunInfo {
  std::string command;
  std::string config_hash;
  std::optional<std::uint64_t> seed;
  int workers = 1;
};

/// `# key=value` lines for CSV artifacts.
std::string csv_preamble(const RunInfo& info);

/// %.17g rendering shared by CSV writers.
std::string format_double(double v);

}  // namespace cex
