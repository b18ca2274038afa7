#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "phi4/field.hpp"
#include "phi4/schedule.hpp"

namespace phi4 {

/// Named test-function shape usable on a configured grid.
struct ShapeSpec {
  std::string name;
  std::string kind;  // gaussian-bump | indicator | constant
  std::vector<double> center;
  double width = 0.0;
  double amplitude = 1.0;
  std::vector<double> lo, hi;
  double value = 0.0;
};

struct RunConfig {
  int d = 2;
  int N = 16;
  double L = 1.0;
  RenormSchedule schedule;
  std::vector<int> n_list;
  int sweeps = 1000;
  int burn_in = 200;
  int thinning = 1;
  double proposal_width = 1.0;
  std::uint64_t seed = 0;
  std::string experiment;
  std::string output_dir = ".";
  std::vector<ShapeSpec> shapes;
};

/// Carries every invalid field with its path.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

private:
  std::vector<std::string> errors_;
  static std::string join(const std::vector<std::string>& errors);
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& json_text);

/// Deterministic canonical serialization; equal configs give equal strings.
std::string canonical_config(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

Field build_shape(const Grid& grid, const ShapeSpec& spec);

}  // namespace phi4
