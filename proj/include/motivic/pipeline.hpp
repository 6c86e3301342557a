#pragma once

// Curve + prime -> counts -> traces -> L-polynomial -> Weil check -> rhythm,
// with an on-disk count cache, and the full artifact bundle ("suite").

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "motivic/config.hpp"
#include "motivic/curves.hpp"
#include "motivic/emit/json.hpp"
#include "motivic/emit/midi.hpp"
#include "motivic/emit/svg.hpp"
#include "motivic/errors.hpp"
#include "motivic/rhythm.hpp"
#include "motivic/score.hpp"
#include "motivic/sieve.hpp"
#include "motivic/zeta.hpp"

namespace motivic {

inline constexpr const char* kToolVersion = "0.1.0";

/// Without --full, fields larger than 31^5 are only read from the cache.
inline constexpr std::uint64_t kUngatedOrderLimit = 28629151;

/// Point counts on disk: one JSON document per (curve, p) holding N_1..N_k.
/// Documents written by another tool version are ignored.
class CountCache {
public:
  explicit CountCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& directory() const noexcept { return dir_; }

  std::filesystem::path file_for(const std::string& curve, std::uint64_t p) const {
    return dir_ / (curve + "_p" + std::to_string(p) + ".json");
  }

  std::vector<std::int64_t> load(const std::string& curve, std::uint64_t p) const {
    std::ifstream in(file_for(curve, p));
    if (!in) return {};
    const nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return {};
    if (doc.value("tool_version", "") != kToolVersion || doc.value("curve", "") != curve ||
        doc.value("p", std::uint64_t{0}) != p) {
      return {};
    }
    const auto it = doc.find("N_k");
    if (it == doc.end() || !it->is_array()) return {};
    std::vector<std::int64_t> counts;
    for (const auto& v : *it) {
      if (!v.is_number_integer()) return {};
      counts.push_back(v.get<std::int64_t>());
    }
    if (doc.value("k", -1) != static_cast<int>(counts.size())) return {};
    return counts;
  }

  /// Keeps whichever of the stored and given prefixes is longer.
  void store(const std::string& curve, std::uint64_t p, std::span<const std::int64_t> counts) const {
    if (load(curve, p).size() >= counts.size()) return;
    std::filesystem::create_directories(dir_);
    emit::Json doc{{"curve", curve},
                   {"p", p},
                   {"k", counts.size()},
                   {"N_k", std::vector<std::int64_t>(counts.begin(), counts.end())},
                   {"tool_version", kToolVersion}};
    std::ofstream out(file_for(curve, p), std::ios::binary);
    out << emit::dump(doc);
  }

private:
  std::filesystem::path dir_;
};

struct CountPolicy {
  int k_max = 0;     ///< count only up to F_{p^k_max}; 0 means the genus
  bool full = false; ///< allow counting fields above kUngatedOrderLimit
};

/// N_1..N_g, from the cache where possible and counted otherwise.
inline std::vector<std::int64_t> obtain_counts(const curves::CurveSpec& curve, std::uint64_t p,
                                               const CountPolicy& policy, curves::PointCounter& counter,
                                               const CountCache* cache) {
  const curves::ReducedCurve rc = curves::reduce_mod(curve, p);
  const int g = rc.genus;
  const int k_limit = policy.k_max > 0 ? std::min(policy.k_max, g) : g;
  std::vector<std::int64_t> counts = cache ? cache->load(curve.name, p) : std::vector<std::int64_t>{};
  if (static_cast<int>(counts.size()) > g) counts.resize(static_cast<std::size_t>(g));
  const std::size_t cached = counts.size();
  for (int k = static_cast<int>(counts.size()) + 1; k <= g; ++k) {
    if (k > k_limit) {
      throw CountUnavailable("N_" + std::to_string(k) + " for " + curve.name + " at p = " + std::to_string(p) +
                             " is not cached and k_max = " + std::to_string(k_limit) +
                             " forbids counting over F_{p^" + std::to_string(k) + "}");
    }
    const std::uint64_t q = ff::checked_power(p, k);
    if (q > kUngatedOrderLimit && !policy.full) {
      throw CountUnavailable("N_" + std::to_string(k) + " for " + curve.name + " at p = " + std::to_string(p) +
                             " needs a count over " + std::to_string(q) +
                             " elements; rerun with --full or provide a cached count");
    }
    counts.push_back(counter.count(rc, k));
  }
  if (cache != nullptr && counts.size() > cached) cache->store(curve.name, p, counts);
  return counts;
}

/// Everything derived for one (curve, p) pair.
struct Motive {
  std::string curve;
  std::uint64_t p = 0;
  std::vector<std::int64_t> counts;
  zeta::FrobeniusTraces traces;
  zeta::LPolynomial lpoly;
  zeta::WeilCheck weil;
  rhythm::RhythmPattern rhythm;
};

/// Runs the whole chain and throws on any failed invariant (Weil bound,
/// integrality, functional equation, circle, palindrome).
inline Motive compute_motive(const curves::CurveSpec& curve, std::uint64_t p, const CountPolicy& policy,
                             curves::PointCounter& counter, const CountCache* cache, const Tolerances& tol = {}) {
  Motive m;
  m.curve = curve.name;
  m.p = p;
  m.counts = obtain_counts(curve, p, policy, counter, cache);
  m.traces = zeta::traces_from_counts(p, curve.genus(), m.counts);
  m.lpoly = zeta::lpoly_from_traces(m.traces);
  if (!zeta::satisfies_functional_equation(m.lpoly)) {
    throw WeilBoundViolation("functional equation fails for " + curve.name + " at p = " + std::to_string(p));
  }
  m.weil = zeta::verify_weil(m.lpoly, tol.assertion, tol);
  if (!m.weil.ok) {
    throw WeilBoundViolation("roots of L for " + curve.name + " at p = " + std::to_string(p) +
                             " are off the circle |z| = p^{-1/2} by " + std::to_string(m.weil.max_deviation));
  }
  m.rhythm = rhythm::arguments(p, curve.genus(), m.weil.roots, tol);
  return m;
}

/// Equal-tempo playback of the scores for the sieve part: ten notes per prime,
/// one every half second.
inline emit::PerformancePlan sieve_plan(std::span<const score::PrimeScore> scores) {
  constexpr double kSegmentSeconds = 5.0;
  emit::PerformancePlan plan;
  for (const score::PrimeScore& s : scores) {
    emit::Segment seg;
    seg.p = s.p;
    seg.pitches.assign(s.pitches.begin(), s.pitches.end());
    seg.rhythm = rhythm::uniform_pattern(s.p, 5, kSegmentSeconds);
    seg.n_periods = 1;
    seg.tempo_scale = 1.0;
    plan.segments.push_back(std::move(seg));
  }
  return plan;
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  write_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

inline std::string prime_tag(std::uint64_t p) {
  std::string digits = std::to_string(p);
  if (digits.size() < 3) digits.insert(0, 3 - digits.size(), '0');
  return "p" + digits;
}

/// Writes the sieve frames, event log, snapshots, equal-tempo MIDI and manifest.
inline void write_sieve_bundle(const std::filesystem::path& dir, const score::PitchMap& pitch = {}) {
  const sieve::SieveRun run = sieve::run_all();
  std::vector<score::PrimeScore> scores;
  for (const sieve::SieveEvent& e : run.events) scores.push_back(score::note_list(e.p, pitch));
  const emit::Timeline timeline = emit::schedule(sieve_plan(scores));
  const std::vector<emit::SieveFrame> frames = emit::write_sieve_frames(run);
  for (const emit::SieveFrame& f : frames) write_file(dir / f.file, f.svg);
  write_file(dir / "manifest.json", emit::dump(emit::manifest_json(frames, timeline.segments)));
  write_file(dir / "events.json", emit::dump(emit::sieve_events_json(run.events)));
  write_file(dir / "snapshots.json", emit::dump(emit::sieve_snapshots_json(run)));
  write_file(dir / "sieve.mid", emit::write_midi(timeline));
}

struct PairOutcome {
  std::string curve;
  std::uint64_t p = 0;
  bool ok = false;
  std::string error;
};

struct SuiteReport {
  std::vector<PairOutcome> pairs;
  std::vector<std::string> errors; ///< failures not tied to a single pair

  bool ok() const {
    return errors.empty() && std::all_of(pairs.begin(), pairs.end(), [](const PairOutcome& o) { return o.ok; });
  }
};

/// The complete bundle for every selected curve and prime in range.
inline SuiteReport run_suite(const RunConfig& cfg, std::ostream* log = nullptr) {
  SuiteReport report;
  const std::filesystem::path& out = cfg.out_dir;
  std::filesystem::create_directories(out);
  write_file(out / "config.txt", effective_config_text(cfg));

  const std::vector<std::uint64_t> primes = cfg.primes.primes();
  std::vector<score::PrimeScore> scores;
  emit::Json scores_doc = emit::Json::array();
  for (std::uint64_t p : primes) {
    scores.push_back(score::note_list(p, cfg.pitch));
    scores_doc.push_back(emit::score_json(scores.back()));
  }
  write_file(out / "scores.json", emit::dump(scores_doc));

  const CountCache cache(cfg.effective_cache_dir());
  curves::CountOptions count_options;
  count_options.workers = cfg.workers;
  curves::PointCounter counter(count_options);
  const CountPolicy policy{cfg.k_max, cfg.full};

  emit::Json summary = emit::Json::array();
  for (const curves::CurveSpec& curve : resolve_curves(cfg.curve)) {
    const std::filesystem::path dir = out / curve.name;
    std::vector<rhythm::RhythmPattern> patterns;
    emit::PerformancePlan plan;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      const std::uint64_t p = primes[i];
      PairOutcome outcome{curve.name, p, false, {}};
      try {
        const Motive m = compute_motive(curve, p, policy, counter, &cache, cfg.tolerances);
        write_file(dir / ("lpoly_" + prime_tag(p) + ".json"), emit::dump(emit::lpoly_json(curve.name, m.lpoly)));
        write_file(dir / ("rhythm_" + prime_tag(p) + ".json"), emit::dump(emit::rhythm_json(curve.name, m.rhythm)));
        write_file(dir / ("circle_" + prime_tag(p) + ".svg"), emit::write_svg_circle(m.rhythm, m.lpoly));
        patterns.push_back(m.rhythm);
        if (static_cast<int>(m.rhythm.alphas.size()) == 10) {
          emit::Segment seg;
          seg.p = p;
          seg.pitches.assign(scores[i].pitches.begin(), scores[i].pitches.end());
          seg.rhythm = m.rhythm;
          seg.n_periods = cfg.n_periods;
          seg.tempo_scale = cfg.tempo_scale;
          plan.segments.push_back(std::move(seg));
        }
        outcome.ok = true;
      } catch (const Error& e) {
        outcome.error = e.what();
      }
      if (log != nullptr) {
        *log << curve.name << " p=" << p << ": " << (outcome.ok ? "ok" : outcome.error) << "\n";
      }
      summary.push_back(emit::Json{{"curve", outcome.curve}, {"p", outcome.p}, {"ok", outcome.ok},
                                   {"error", outcome.error}});
      report.pairs.push_back(std::move(outcome));
    }
    try {
      if (!patterns.empty()) write_file(dir / "strip.svg", emit::write_svg_strip(patterns));
      const emit::Timeline timeline = emit::schedule(plan);
      write_file(dir / "performance.mid", emit::write_midi(timeline));
      emit::Json segs = emit::Json::array();
      for (const emit::SegmentSpan& s : timeline.segments) {
        segs.push_back(emit::Json{{"p", s.p}, {"start_tick", s.start_tick}, {"end_tick", s.end_tick}});
      }
      write_file(dir / "performance.json", emit::dump(emit::Json{{"curve", curve.name}, {"segments", segs}}));
    } catch (const Error& e) {
      report.errors.push_back(curve.name + ": " + e.what());
    }
  }
  write_sieve_bundle(out / "sieve", cfg.pitch);
  write_file(out / "summary.json", emit::dump(emit::Json{{"ok", report.ok()}, {"pairs", summary}}));
  return report;
}

} // namespace motivic
