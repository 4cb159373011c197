#include "c0ip/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace c0ip {

namespace {

constexpr int min_level = 1;
constexpr int max_level = 7;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int to_int(std::string_view s, int line, std::string_view key) {
  int v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size())
    throw ConfigError(line, std::string(key) + ": expected an integer, got '" + std::string(s) + "'");
  return v;
}

double to_double(std::string_view s, int line, std::string_view key) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError(line, std::string(key) + ": expected a number, got '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

ConfigError::ConfigError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

const ManufacturedCase& RunConfig::manufactured_case() const {
  return find_case(case_name.empty() ? default_case(problem) : std::string_view(case_name));
}

StudyOptions RunConfig::study_options() const {
  StudyOptions o;
  o.first_level = first_level;
  o.last_level = last_level;
  o.params.sigma = sigma;
  o.params.consistency = consistency;
  o.alpha = alpha;
  o.reference_level = reference_level;
  o.pinned_corner = pin;
  o.norms = norms;
  return o;
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::map<std::string, int, std::less<>> seen;  // key -> line
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "missing key before '='");
    if (value.empty()) throw ConfigError(line_no, key + ": missing value");
    if (const auto it = seen.find(key); it != seen.end())
      throw ConfigError(line_no, "duplicate key '" + key + "' (first set on line " + std::to_string(it->second) + ")");
    seen.emplace(key, line_no);

    try {
      if (key == "problem") {
        c.problem = parse_problem(value);
      } else if (key == "domain") {
        c.domain = std::string(value);
      } else if (key == "levels") {
        if (const auto dots = value.find(".."); dots != std::string_view::npos) {
          c.first_level = to_int(trim(value.substr(0, dots)), line_no, key);
          c.last_level = to_int(trim(value.substr(dots + 2)), line_no, key);
        } else {
          throw ConfigError(line_no, "levels: expected a range 'first..last'");
        }
        if (c.first_level < min_level || c.last_level > max_level)
          throw ConfigError(line_no, "levels must lie in [1, 7]");
        if (c.last_level <= c.first_level) throw ConfigError(line_no, "levels: need at least two levels");
      } else if (key == "sigma") {
        c.sigma = to_double(value, line_no, key);
        if (c.sigma < 1.0) throw ConfigError(line_no, "sigma must be >= 1");
      } else if (key == "alpha") {
        c.alpha = to_double(value, line_no, key);
        if (!(c.alpha > 0.0)) throw ConfigError(line_no, "alpha must be > 0");
      } else if (key == "consistency") {
        if (value == "minus") c.consistency = ConsistencySign::minus;
        else if (value == "plus") c.consistency = ConsistencySign::plus;
        else throw ConfigError(line_no, "consistency: expected 'minus' or 'plus'");
      } else if (key == "case") {
        c.case_name = value == "reference" ? "control-reference" : std::string(value);
      } else if (key == "output") {
        c.output = std::string(value);
      } else if (key == "norms") {
        c.norms.clear();
        std::string_view rest = value;
        while (!rest.empty()) {
          const auto comma = rest.find(',');
          const std::string_view item = trim(rest.substr(0, comma));
          const Norm n = parse_norm(item);
          if (std::find(c.norms.begin(), c.norms.end(), n) != c.norms.end())
            throw ConfigError(line_no, "norms: '" + std::string(item) + "' listed twice");
          c.norms.push_back(n);
          rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        if (c.norms.empty()) throw ConfigError(line_no, "norms: empty list");
      } else if (key == "reference_level") {
        c.reference_level = to_int(value, line_no, key);
        if (c.reference_level < min_level || c.reference_level > max_level)
          throw ConfigError(line_no, "reference_level must lie in [1, 7]");
      } else if (key == "pin") {
        const int p = to_int(value, line_no, key);
        if (p < 0) throw ConfigError(line_no, "pin must be a corner index >= 0");
        c.pin = p;
      } else {
        throw ConfigError(line_no, "unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line_no, e.what());
    }
  }

  for (const char* required : {"problem", "levels"})
    if (!seen.contains(required))
      throw ConfigError(line_no + 1, std::string("missing required key '") + required + "'");

  const auto line_of = [&](const char* key) {
    const auto it = seen.find(key);
    return it == seen.end() ? 0 : it->second;
  };
  if (!c.case_name.empty()) {
    try {
      if (find_case(c.case_name).problem != c.problem)
        throw ConfigError(line_of("case"), "case '" + c.case_name + "' does not belong to problem '" +
                                               std::string(to_string(c.problem)) + "'");
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line_of("case"), e.what());
    }
  }
  if (c.problem == ProblemKind::dirichlet_control && c.reference_level <= c.last_level &&
      c.manufactured_case().name == "control-reference")
    throw ConfigError(line_of("reference_level") ? line_of("reference_level") : line_of("levels"),
                      "reference_level must exceed the last level");
  if (c.pin && c.problem != ProblemKind::cahn_hilliard)
    throw ConfigError(line_of("pin"), "pin only applies to cahn-hilliard");
  return c;
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "problem = " << to_string(c.problem) << "\n";
  out << "domain = " << c.domain << "\n";
  out << "levels = " << c.first_level << ".." << c.last_level << "\n";
  out << "sigma = " << format_double(c.sigma) << "\n";
  out << "alpha = " << format_double(c.alpha) << "\n";
  out << "consistency = " << (c.consistency == ConsistencySign::minus ? "minus" : "plus") << "\n";
  if (!c.case_name.empty()) out << "case = " << c.case_name << "\n";
  if (!c.output.empty()) out << "output = " << c.output << "\n";
  out << "norms = ";
  for (std::size_t i = 0; i < c.norms.size(); ++i) out << (i ? "," : "") << to_string(c.norms[i]);
  out << "\n";
  out << "reference_level = " << c.reference_level << "\n";
  if (c.pin) out << "pin = " << *c.pin << "\n";
  return out.str();
}

}  // namespace c0ip
