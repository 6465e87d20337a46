#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace fermicert {

/// Resolved run configuration: config-file values overlaid by flags.  Echoed
/// verbatim (with the version string) into every output artifact.
struct RunConfig {
  int q1 = 3;
  int q2 = 5;
  std::string lambda0 = "0";
  std::string slice;  // "v11=61/17" style; empty = no slice equation
  int precision_bits = 200;
  std::uint64_t seed = 1;
  std::uint64_t budget = 1000;
  double tol = 1e-4;
  int threads = 1;
  std::string out_dir = ".";
  std::string format = "text";  // text | json
  bool allow_non_coprime = false;
  std::string system_file;  // explicit system for search (bypasses the lattice)
  std::string input_file;   // candidate / potential file

  nlohmann::ordered_json to_json() const;
};

/// Parses "v11", "v_(1,1)" or "v[1,1]" into the 1-based site pair.
std::pair<int, int> parse_site_label_text(const std::string& text);

/// Entry point.  Exit codes: 0 success, 1 negative result, 2 input error,
/// 3 budget exhausted.
int run_cli(int argc, char** argv);

}  // namespace fermicert
