#pragma once

#include <optional>
#include <string>

namespace arpsim::cli {

struct CommonOptions {
  std::string config;
  std::string out = "arpsim-out";
  unsigned workers = 0;
  bool no_plots = false;
  std::optional<std::string> engine;
};

int cmd_sweep(const CommonOptions& opts);
int cmd_scan(const CommonOptions& opts);
int cmd_tolerance(const CommonOptions& opts);
int cmd_compare(const CommonOptions& opts);
int cmd_lz(const CommonOptions& opts, std::optional<double> rabi, std::optional<double> rate);

}  // namespace arpsim::cli
