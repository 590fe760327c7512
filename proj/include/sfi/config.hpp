#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfi/sums.hpp"

namespace sfi {

// Flat key = value config, '#' comments, strict (unknown keys are errors).
//
// Keys:
//   command   density | fisher | verify | converge | decompose   (required)
//   source    gaussian | cauchy | student_t(<nu>) | stable(<alpha>,<beta>,<c>,<a>)
//   law       <alpha>,<beta>,<c>,<a>
//   ns        comma-separated positive integers
//   grid      <x_lo>,<dx>,<count>            (default depends on the tail index)
//   out       output directory
//   plot      path for the optional log-log plot (.svg)
//   threads   concurrency degree for independent rows (default 1)
//   pad       anti-aliasing padding factor (default 8)
//   tol.<name> = <real>   named tolerance override (see docs/defaults table)
struct RunConfig {
  std::string command;
  std::optional<SourceModel> source;
  std::optional<StableLaw> law;
  std::vector<int> ns;
  std::optional<Grid> grid;
  std::map<std::string, double> tolerances;
  std::string output_path;
  std::string plot_path;
  int threads = 1;
  int pad = 8;

  Grid effective_grid() const;  // explicit grid, or the alpha-dependent default
  double tolerance(const std::string& name, double fallback) const;
};

// Throws ParseError (line numbered) or ValidationError.  A non-empty
// command_override (the CLI subcommand) takes precedence over the config key.
RunConfig parse_config(const std::string& text, const std::string& command_override = "");
RunConfig load_config(const std::string& path, const std::string& command_override = "");

}  // namespace sfi
