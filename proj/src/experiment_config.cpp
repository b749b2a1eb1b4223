#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "aparareal/harness.hpp"

namespace aparareal {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Underscores and dashes are interchangeable in keys; case is kept because
// delta-T and delta-t differ only by it.
std::string normalize_key(std::string_view key) {
  std::string out(trim(key));
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw ConfigError("invalid value '" + std::string(value) + "' for '" +
                    std::string(key) + "'");
}

double to_double(std::string_view key, std::string_view value) {
  const std::string text(value);
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    bad_value(key, value);
  }
  if (used != text.size() || !std::isfinite(x)) bad_value(key, value);
  return x;
}

// Accepts "a/b" as well, since several published steps are fractions.
double to_real(std::string_view key, std::string_view value) {
  const auto slash = value.find('/');
  if (slash == std::string_view::npos) return to_double(key, value);
  const double num = to_double(key, trim(value.substr(0, slash)));
  const double den = to_double(key, trim(value.substr(slash + 1)));
  if (den == 0.0) bad_value(key, value);
  return num / den;
}

std::size_t to_count(std::string_view key, std::string_view value) {
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value);
  return n;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "on" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "off" || value == "no" || value == "0") return false;
  bad_value(key, value);
}

}  // namespace

void apply_setting(ExperimentSpec& spec, std::string_view raw_key,
                   std::string_view raw_value) {
  const std::string key = normalize_key(raw_key);
  const std::string_view value = trim(raw_value);

  if (key == "preset") {
    const auto output = spec.output_dir;
    spec = preset(value);
    spec.output_dir = output;
  } else if (key == "name") {
    if (value.empty()) bad_value(key, value);
    spec.name = std::string(value);
  } else if (key == "epsilon") {
    spec.params.epsilon = to_real(key, value);
  } else if (key == "froude") {
    spec.params.froude = to_real(key, value);
  } else if (key == "mu") {
    spec.params.mu = to_real(key, value);
  } else if (key == "modes") {
    spec.grid.num_modes = to_count(key, value);
  } else if (key == "delta-T") {
    spec.delta_T = to_real(key, value);
  } else if (key == "delta-t") {
    spec.delta_t = to_real(key, value);
  } else if (key == "slices") {
    spec.num_slices = to_count(key, value);
  } else if (key == "total-time") {
    const double slices = to_real(key, value) / spec.delta_T;
    const double rounded = std::round(slices);
    if (rounded < 1.0 || std::abs(rounded - slices) > 1e-9 * rounded) {
      throw ConfigError("total-time " + std::string(value) +
                        " is not a whole number of coarse steps");
    }
    spec.num_slices = static_cast<std::size_t>(rounded);
  } else if (key == "t0") {
    if (value == "match-coarse-step") {
      spec.match_coarse_step = true;
    } else {
      spec.match_coarse_step = false;
      spec.t0 = to_real(key, value);
    }
  } else if (key == "mbar") {
    spec.mbar = to_count(key, value);
  } else if (key == "tol") {
    spec.tol = to_real(key, value);
  } else if (key == "max-iter") {
    spec.max_iter = to_count(key, value);
  } else if (key == "reference-dt") {
    spec.reference_dt = to_real(key, value);
  } else if (key == "baseline") {
    spec.baseline = parse_baseline(value);
  } else if (key == "run-baseline") {
    spec.run_baseline = to_bool(key, value);
  } else if (key == "timing") {
    spec.record_timing = to_bool(key, value);
  } else if (key == "workers") {
    spec.workers = to_count(key, value);
  } else if (key == "output") {
    spec.output_dir = std::string(value);
  } else {
    throw ConfigError("unknown setting '" + std::string(raw_key) + "'");
  }
}

std::vector<std::pair<std::string, std::string>> parse_config(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto end = text.find('\n');
    std::string_view line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos || trim(line.substr(0, eq)).empty()) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    out.emplace_back(std::string(trim(line.substr(0, eq))),
                     std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

ExperimentSpec spec_from_settings(
    const std::vector<std::pair<std::string, std::string>>& settings,
    ExperimentSpec base) {
  for (const auto& [key, value] : settings) {
    if (normalize_key(key) == "preset") apply_setting(base, key, value);
  }
  for (const auto& [key, value] : settings) {
    if (normalize_key(key) != "preset") apply_setting(base, key, value);
  }
  return base;
}

ExperimentSpec load_config(const std::filesystem::path& path, ExperimentSpec base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return spec_from_settings(parse_config(text.str()), std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace aparareal
