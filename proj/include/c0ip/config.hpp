// Plain-text run configuration: `key = value` lines with `#` comments.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "c0ip/forms.hpp"
#include "c0ip/study.hpp"

namespace c0ip {

/// Parse or validation failure; `line()` is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

struct RunConfig {
  ProblemKind problem = ProblemKind::clamped_plate;
  std::string domain = "unit-square";
  int first_level = 1;
  int last_level = 4;
  double sigma = 5.0;
  double alpha = 0.1;
  ConsistencySign consistency = ConsistencySign::minus;
  /// Manufactured case name; empty selects the problem's default.
  std::string case_name;
  std::string output;
  std::vector<Norm> norms{Norm::l2, Norm::h, Norm::energy, Norm::qh};
  int reference_level = 6;
  std::optional<int> pin;

  bool operator==(const RunConfig&) const = default;

  /// The case this config resolves to.
  const ManufacturedCase& manufactured_case() const;
  StudyOptions study_options() const;
};

/// Required keys: problem, levels. Unknown keys, duplicates, malformed or
/// out-of-range values throw ConfigError with the offending line.
RunConfig parse_config(std::string_view text);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

}  // namespace c0ip
