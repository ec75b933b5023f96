#pragma once
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "entpert/spbasis.hpp"
#include "entpert/twobody.hpp"

namespace entpert::cli {

//! One run's worth of options: potential and interaction specs as given on the
//! command line plus the per-command numeric parameters.
struct RunConfig {
  std::string potential = "harmonic:1";
  std::string interaction = "delta";
  int level_n = 1;
  int k_max = 8;  // numeric modes solved for table potentials
  std::vector<double> lambdas = {0.2, 0.1, 0.05, 0.025, 0.0125};
  int ci_n_max = 12;
  int bounds_n_min = 0;
  int bounds_n_max = 8;
  double r_min = 0.0;
  double r_max = 3.0;
  int r_steps = 300;
  std::string csv_path;   // empty: CSV to stdout
  std::string json_path;  // level command only
};

//! Stable file float format: 12 significant digits.
std::string fmt12(double x);

//! Potential spec: "harmonic:OMEGA" or "table:PATH" (two whitespace-separated
//! columns x, U(x) on a uniform grid). Parenthesized forms are accepted too.
std::unique_ptr<SpatialBasis> make_basis(const RunConfig& config);

//! Interaction spec: "delta", "harmonic:OMEGA", "gaussian:A,S", "table:PATH".
InteractionSpec make_interaction(const std::string& spec);

//! Exit codes: 0 success, 1 invariant violation, 2 bad configuration.
int cmd_level(const RunConfig& config, std::ostream& out);
int cmd_bounds(const RunConfig& config, std::ostream& out);
int cmd_rcurve(const RunConfig& config, std::ostream& out);
int cmd_sweep(const RunConfig& config, std::ostream& out);

}  // namespace entpert::cli
