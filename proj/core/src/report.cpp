#include "cex/report.hpp"

#include <cstdio>

namespace cex {

std::string version() { return CEX_VERSION; }

std::string csv_preamble(const RunInfo& info) {
  std::string out = "# tool=cex version=" + version() + " command=" + info.command +
                    " config_hash=" + info.config_hash;
  out += " seed=" + (info.seed ? std::to_string(*info.seed) : std::string("none"));
  out += " workers=" + std::to_string(info.workers) + "\n";
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace cex
