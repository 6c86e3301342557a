#pragma once

// Run configuration: defaults, key = value config files, and selectors.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "motivic/curves.hpp"
#include "motivic/errors.hpp"
#include "motivic/finite_field.hpp"
#include "motivic/score.hpp"
#include "motivic/tolerances.hpp"

namespace motivic {

/// Environment variable that overrides the count cache directory.
inline constexpr const char* kCacheEnvVar = "MOTIVIC_CACHE_DIR";

struct PrimeRange {
  std::uint64_t lo = 7;
  std::uint64_t hi = 67;

  std::vector<std::uint64_t> primes() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = lo; n <= hi; ++n) {
      if (ff::is_prime(n)) out.push_back(n);
    }
    return out;
  }
};

struct RunConfig {
  std::string curve = "all"; ///< C1..C6, "all", or coefficients highest degree first
  PrimeRange primes;
  Tolerances tolerances;
  double tempo_scale = 1.0;
  int n_periods = 2;
  std::filesystem::path out_dir = "motivic-out";
  std::optional<std::filesystem::path> cache_dir; ///< defaults to <out_dir>/cache
  unsigned workers = std::max(1U, std::thread::hardware_concurrency());
  int k_max = 0; ///< 0 means "up to the genus"
  bool full = false;
  score::PitchMap pitch;

  std::filesystem::path effective_cache_dir() const { return cache_dir ? *cache_dir : out_dir / "cache"; }
};

namespace config_detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) throw InvalidArgument("bad value for " + key + ": '" + value + "'");
  return out;
}

inline double parse_positive(const std::string& key, const std::string& value) {
  const double v = parse_number<double>(key, value);
  if (!(v > 0.0)) throw InvalidArgument(key + " must be positive");
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw InvalidArgument("bad boolean for " + key + ": '" + value + "'");
}

/// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

} // namespace config_detail

/// Parses "lo..hi" (or a single prime); both ends must be odd primes.
inline PrimeRange parse_prime_range(const std::string& text) {
  const std::string t = config_detail::trim(text);
  const auto dots = t.find("..");
  PrimeRange r;
  if (dots == std::string::npos) {
    r.lo = r.hi = config_detail::parse_number<std::uint64_t>("primes", t);
  } else {
    r.lo = config_detail::parse_number<std::uint64_t>("primes", config_detail::trim(t.substr(0, dots)));
    r.hi = config_detail::parse_number<std::uint64_t>("primes", config_detail::trim(t.substr(dots + 2)));
  }
  for (std::uint64_t end : {r.lo, r.hi}) {
    if (end == 2 || !ff::is_prime(end)) throw InvalidArgument(std::to_string(end) + " is not an odd prime");
  }
  if (r.lo > r.hi) throw InvalidArgument("empty prime range");
  return r;
}

inline std::string format_prime_range(const PrimeRange& r) {
  return std::to_string(r.lo) + ".." + std::to_string(r.hi);
}

/// Applies one key = value setting; throws InvalidArgument on unknown keys.
inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  using namespace config_detail;
  if (key == "curve") cfg.curve = value;
  else if (key == "primes") cfg.primes = parse_prime_range(value);
  else if (key == "tempo_scale") cfg.tempo_scale = parse_positive(key, value);
  else if (key == "n_periods") {
    cfg.n_periods = parse_number<int>(key, value);
    if (cfg.n_periods < 1) throw InvalidArgument("n_periods must be at least 1");
  } else if (key == "out") cfg.out_dir = value;
  else if (key == "cache") cfg.cache_dir = std::filesystem::path(value);
  else if (key == "workers") cfg.workers = std::max(1U, parse_number<unsigned>(key, value));
  else if (key == "k_max") cfg.k_max = parse_number<int>(key, value);
  else if (key == "full") cfg.full = parse_bool(key, value);
  else if (key == "root_update") cfg.tolerances.root_update = parse_positive(key, value);
  else if (key == "residual") cfg.tolerances.residual = parse_positive(key, value);
  else if (key == "assertion") cfg.tolerances.assertion = parse_positive(key, value);
  else if (key == "max_iterations") cfg.tolerances.max_iterations = parse_number<int>(key, value);
  else if (key == "pitch_offset") cfg.pitch.offset = parse_number<int>(key, value);
  else throw InvalidArgument("unknown config key '" + key + "'");
}

/// "key = value" lines; blank lines and '#' comments are ignored.
inline void apply_config_text(RunConfig& cfg, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = config_detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw InvalidArgument("config line " + std::to_string(lineno) + " has no '='");
    apply_setting(cfg, config_detail::trim(t.substr(0, eq)), config_detail::trim(t.substr(eq + 1)));
  }
}

inline void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file " + path.string());
  apply_config_text(cfg, in);
}

/// Settings that affect output content, in config-file syntax. Paths and the
/// worker count are left out: they never change the produced bytes.
inline std::string effective_config_text(const RunConfig& cfg) {
  using config_detail::format_double;
  std::ostringstream os;
  os << "curve = " << cfg.curve << "\n"
     << "primes = " << format_prime_range(cfg.primes) << "\n"
     << "tempo_scale = " << format_double(cfg.tempo_scale) << "\n"
     << "n_periods = " << cfg.n_periods << "\n"
     << "k_max = " << cfg.k_max << "\n"
     << "full = " << (cfg.full ? "true" : "false") << "\n"
     << "root_update = " << format_double(cfg.tolerances.root_update) << "\n"
     << "residual = " << format_double(cfg.tolerances.residual) << "\n"
     << "assertion = " << format_double(cfg.tolerances.assertion) << "\n"
     << "max_iterations = " << cfg.tolerances.max_iterations << "\n"
     << "pitch_offset = " << cfg.pitch.offset << "\n";
  return os.str();
}

/// Stable label for a user-supplied polynomial (FNV-1a of its coefficients).
inline std::string custom_curve_name(const std::vector<std::int64_t>& coeffs) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::int64_t c : coeffs) {
    for (char ch : std::to_string(c) + ",") {
      h ^= static_cast<unsigned char>(ch);
      h *= 1099511628211ULL;
    }
  }
  std::ostringstream os;
  os << "custom-" << std::hex << h;
  return os.str();
}

/// "all", a catalog name, or comma-separated integers from the leading
/// coefficient down to the constant term.
inline std::vector<curves::CurveSpec> resolve_curves(const std::string& selector) {
  if (selector == "all") return curves::catalog();
  if (auto c = curves::find_catalog(selector)) return {*c};
  std::vector<std::int64_t> descending;
  std::stringstream ss(selector);
  std::string item;
  while (std::getline(ss, item, ',')) {
    descending.push_back(config_detail::parse_number<std::int64_t>("curve", config_detail::trim(item)));
  }
  if (descending.empty()) throw InvalidArgument("empty curve selector");
  std::vector<std::int64_t> coeffs(descending.rbegin(), descending.rend());
  return {curves::make_curve(custom_curve_name(coeffs), coeffs)};
}

} // namespace motivic
