// motivic: L-polynomials, rhythms, scores, sieve choreography and their
// MIDI / SVG / JSON renderings.
//
// Exit status: 0 when every check passed, 1 on a failed check or runtime
// error, 2 on a usage error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "motivic/config.hpp"
#include "motivic/pipeline.hpp"

namespace {

using namespace motivic;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string config_file;
  std::optional<std::string> curve;
  std::optional<std::string> prime;
  std::optional<std::string> primes;
  std::optional<std::string> out;
  std::optional<std::string> cache;
  std::optional<unsigned> workers;
  std::optional<int> k_max;
  bool full = false;
  std::optional<int> periods;
  std::optional<double> tempo_scale;
  std::string kind = "circle";
};

std::uint64_t parse_prime(const std::string& text) {
  std::uint64_t p = 0;
  try {
    p = config_detail::parse_number<std::uint64_t>("prime", config_detail::trim(text));
  } catch (const InvalidArgument&) {
    throw UsageError("--prime " + text + " is not a number");
  }
  if (!ff::is_prime(p)) throw UsageError("--prime " + text + " is not prime");
  if (p == 2) throw UsageError("--prime 2: characteristic 2 is not supported");
  return p;
}

/// Defaults, then the config file, then the cache environment variable, then flags.
RunConfig resolve_config(const Flags& f) {
  RunConfig cfg;
  try {
    if (!f.config_file.empty()) apply_config_file(cfg, f.config_file);
    if (const char* env = std::getenv(kCacheEnvVar); env != nullptr && *env != '\0') cfg.cache_dir = env;
    if (f.curve) cfg.curve = *f.curve;
    if (f.primes) cfg.primes = parse_prime_range(*f.primes);
    if (f.out) cfg.out_dir = *f.out;
    if (f.cache) cfg.cache_dir = std::filesystem::path(*f.cache);
    if (f.workers) cfg.workers = std::max(1U, *f.workers);
    if (f.k_max) cfg.k_max = *f.k_max;
    if (f.full) cfg.full = true;
    if (f.periods) apply_setting(cfg, "n_periods", std::to_string(*f.periods));
    if (f.tempo_scale) {
      if (!(*f.tempo_scale > 0.0)) throw InvalidArgument("--tempo-scale must be positive");
      cfg.tempo_scale = *f.tempo_scale;
    }
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

/// Single-shot commands only touch a cache that was asked for explicitly.
std::unique_ptr<CountCache> explicit_cache(const RunConfig& cfg) {
  if (!cfg.cache_dir) return nullptr;
  return std::make_unique<CountCache>(*cfg.cache_dir);
}

curves::CurveSpec single_curve(const RunConfig& cfg) {
  if (cfg.curve == "all") throw UsageError("this command needs a single --curve");
  try {
    return resolve_curves(cfg.curve).front();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

Motive motive_for(const RunConfig& cfg, const curves::CurveSpec& curve, std::uint64_t p) {
  curves::CountOptions opts;
  opts.workers = cfg.workers;
  curves::PointCounter counter(opts);
  const auto cache = explicit_cache(cfg);
  return compute_motive(curve, p, CountPolicy{cfg.k_max, cfg.full}, counter, cache.get(), cfg.tolerances);
}

void emit_text(const Flags& f, const std::string& text) {
  if (f.out) {
    write_file(*f.out, text);
  } else {
    std::cout << text;
  }
}

std::uint64_t required_prime(const Flags& f) {
  if (!f.prime) throw UsageError("--prime is required");
  return parse_prime(*f.prime);
}

int cmd_lpoly(const Flags& f) {
  const RunConfig cfg = resolve_config(f);
  const curves::CurveSpec curve = single_curve(cfg);
  const Motive m = motive_for(cfg, curve, required_prime(f));
  emit_text(f, emit::dump(emit::lpoly_json(curve.name, m.lpoly)));
  return 0;
}

int cmd_rhythm(const Flags& f) {
  const RunConfig cfg = resolve_config(f);
  const curves::CurveSpec curve = single_curve(cfg);
  const Motive m = motive_for(cfg, curve, required_prime(f));
  emit::Json doc = emit::rhythm_json(curve.name, m.rhythm);
  doc["onsets"] = emit::onsets_json(rhythm::onsets(m.rhythm, cfg.n_periods, cfg.tempo_scale));
  emit_text(f, emit::dump(doc));
  return 0;
}

int cmd_score(const Flags& f) {
  const RunConfig cfg = resolve_config(f);
  std::vector<std::uint64_t> primes;
  if (f.prime) {
    primes.push_back(parse_prime(*f.prime));
  } else {
    primes = cfg.primes.primes();
  }
  emit::Json doc = emit::Json::array();
  for (std::uint64_t p : primes) {
    const score::PrimeScore s = score::note_list(p, cfg.pitch);
    for (std::int64_t note : s.notes10) {
      if (score::pitch_of(note, cfg.pitch).clamped) {
        std::cerr << "warning: p = " << p << ": note " << note << " clamped into the MIDI range\n";
      }
    }
    doc.push_back(emit::score_json(s));
  }
  emit_text(f, emit::dump(doc));
  return 0;
}

int cmd_midi(const Flags& f) {
  const RunConfig cfg = resolve_config(f);
  const curves::CurveSpec curve = single_curve(cfg);
  if (!f.out) throw UsageError("midi needs --out <file.mid>");
  emit::PerformancePlan plan;
  int status = 0;
  for (std::uint64_t p : cfg.primes.primes()) {
    try {
      const Motive m = motive_for(cfg, curve, p);
      const score::PrimeScore s = score::note_list(p, cfg.pitch);
      if (m.rhythm.alphas.size() != s.pitches.size()) {
        throw InvalidArgument(curve.name + " has genus " + std::to_string(m.rhythm.genus) +
                              "; a performance needs ten onsets per period");
      }
      plan.segments.push_back({p, std::vector<int>(s.pitches.begin(), s.pitches.end()), m.rhythm, cfg.n_periods,
                               cfg.tempo_scale});
    } catch (const Error& e) {
      std::cerr << curve.name << " p=" << p << ": " << e.what() << "\n";
      status = 1;
    }
  }
  write_file(*f.out, emit::write_midi(plan));
  return status;
}

int cmd_svg(const Flags& f) {
  const RunConfig cfg = resolve_config(f);
  const curves::CurveSpec curve = single_curve(cfg);
  if (f.kind == "circle") {
    const Motive m = motive_for(cfg, curve, required_prime(f));
    emit_text(f, emit::write_svg_circle(m.rhythm, m.lpoly));
    return 0;
  }
  std::vector<rhythm::RhythmPattern> patterns;
  int status = 0;
  for (std::uint64_t p : cfg.primes.primes()) {
    try {
      patterns.push_back(motive_for(cfg, curve, p).rhythm);
    } catch (const Error& e) {
      std::cerr << curve.name << " p=" << p << ": " << e.what() << "\n";
      status = 1;
    }
  }
  emit_text(f, emit::write_svg_strip(patterns));
  return status;
}

int cmd_sieve(const Flags& f) {
  const RunConfig cfg = resolve_config(f);
  write_sieve_bundle(cfg.out_dir, cfg.pitch);
  const sieve::SieveRun run = sieve::run_all();
  std::cout << "initial upper: " << run.states.front().upper.count() << "\n"
            << "final upper: " << run.final_state().upper.count() << "\n"
            << "events: " << run.events.size() << "\n";
  return 0;
}

int cmd_suite(const Flags& f) {
  const RunConfig cfg = resolve_config(f);
  const SuiteReport report = run_suite(cfg, &std::cerr);
  for (const std::string& e : report.errors) std::cerr << "error: " << e << "\n";
  std::size_t failed = 0;
  for (const PairOutcome& o : report.pairs) failed += o.ok ? 0 : 1;
  std::cout << report.pairs.size() - failed << "/" << report.pairs.size() << " (curve, p) pairs passed; bundle in "
            << cfg.out_dir.string() << "\n";
  return report.ok() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"L-polynomials, rhythms and scores of hyperelliptic curves"};
  app.require_subcommand(1);
  Flags f;

  auto* lpoly = app.add_subcommand("lpoly", "L-polynomial of a curve at a prime, as JSON");
  auto* rhythm_cmd = app.add_subcommand("rhythm", "onset angles and schedule of a curve at a prime");
  auto* score = app.add_subcommand("score", "continued-fraction scores");
  auto* midi = app.add_subcommand("midi", "MIDI performance of one curve over a prime range");
  auto* svg = app.add_subcommand("svg", "circle diagram at one prime or strip over a range");
  auto* sieve_cmd = app.add_subcommand("sieve", "sieve frames, event log and music");
  auto* suite = app.add_subcommand("suite", "the full artifact bundle");

  for (CLI::App* cmd : {lpoly, rhythm_cmd, score, midi, svg, sieve_cmd, suite}) {
    cmd->add_option("--config", f.config_file, "key = value configuration file");
    cmd->add_option("-o,--out", f.out, "output file or directory");
  }
  for (CLI::App* cmd : {lpoly, rhythm_cmd, midi, svg, suite}) {
    cmd->add_option("--curve", f.curve, "C1..C6, all, or coefficients from the leading one down");
    cmd->add_option("--cache", f.cache, "point-count cache directory");
    cmd->add_option("--workers", f.workers, "point-counting threads");
    cmd->add_option("--k-max", f.k_max, "largest extension degree to count; higher N_k come from the cache");
    cmd->add_flag("--full", f.full, "allow counting over fields larger than 31^5");
  }
  for (CLI::App* cmd : {lpoly, rhythm_cmd, score, svg}) cmd->add_option("--prime", f.prime, "an odd prime");
  for (CLI::App* cmd : {score, midi, svg, suite}) cmd->add_option("--primes", f.primes, "prime range lo..hi");
  for (CLI::App* cmd : {rhythm_cmd, midi, suite}) {
    cmd->add_option("--periods", f.periods, "periods played per prime");
    cmd->add_option("--tempo-scale", f.tempo_scale, "multiplier on every period");
  }
  svg->add_option("--kind", f.kind, "circle or strip")->check(CLI::IsMember({"circle", "strip"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*lpoly) return cmd_lpoly(f);
    if (*rhythm_cmd) return cmd_rhythm(f);
    if (*score) return cmd_score(f);
    if (*midi) return cmd_midi(f);
    if (*svg) return cmd_svg(f);
    if (*sieve_cmd) return cmd_sieve(f);
    if (*suite) return cmd_suite(f);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const BadReduction& e) {
    std::cerr << "bad reduction at p = " << e.prime() << ": " << e.witness() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
