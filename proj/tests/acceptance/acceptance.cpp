// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "motivic/config.hpp"
#include "motivic/pipeline.hpp"
#include "oracles.hpp"

using namespace motivic;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) detail = why;
    pass = pass && ok;
  }
};

const std::vector<std::uint64_t> kCorePrimes = {7, 11, 13, 17, 19};

std::vector<std::uint64_t> all_primes() { return PrimeRange{}.primes(); }

/// Motives for the six catalog curves at p = 7..19, computed once.
struct CoreRun {
  std::vector<Motive> motives;
  std::vector<std::string> failures;
  double seconds = 0.0;
};

const CoreRun& core_run() {
  static const CoreRun run = [] {
    CoreRun r;
    const auto start = std::chrono::steady_clock::now();
    curves::PointCounter counter;
    // Checks are applied by the criteria themselves, so loosen the built-in gates.
    Tolerances loose;
    loose.assertion = 1.0;
    for (const curves::CurveSpec& c : curves::catalog()) {
      for (std::uint64_t p : kCorePrimes) {
        try {
          r.motives.push_back(compute_motive(c, p, {}, counter, nullptr, loose));
        } catch (const std::exception& e) {
          r.failures.push_back(c.name + " p=" + std::to_string(p) + ": " + e.what());
        }
      }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }();
  return run;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome weil_circle() {
  const CoreRun& run = core_run();
  Outcome o;
  o.require(run.failures.empty(), run.failures.empty() ? "" : run.failures.front());
  o.require(run.motives.size() == 30, "expected 30 (curve, p) pairs");
  double worst = 0.0;
  for (const Motive& m : run.motives) {
    o.require(m.weil.roots.size() == 10, m.curve + " p=" + std::to_string(m.p) + ": root count");
    const double radius = 1.0 / std::sqrt(static_cast<double>(m.p));
    for (const auto& z : m.weil.roots) worst = std::max(worst, std::abs(std::abs(z) - radius));
  }
  o.require(worst < 1e-9, "max | |z| - p^-1/2 | = " + fmt(worst));
  if (o.pass) o.detail = "30 pairs, max deviation " + fmt(worst) + ", " + fmt(run.seconds) + " s";
  return o;
}

Outcome palindrome() {
  const CoreRun& run = core_run();
  Outcome o;
  o.require(run.failures.empty() && run.motives.size() == 30, "core run incomplete");
  double worst = 0.0;
  for (const Motive& m : run.motives) {
    const auto& a = m.rhythm.alphas;
    o.require(a.size() == 10 && std::is_sorted(a.begin(), a.end()), "alphas not sorted");
    for (std::size_t j = 0; j < a.size(); ++j) {
      // Pairing alpha_{2g+1-j} = -alpha_j, taken on the circle so that alpha = pi pairs with itself.
      worst = std::max(worst, std::abs(rhythm::fold(a[j] + a[a.size() - 1 - j])));
    }
  }
  o.require(worst < 1e-9, "max pairing defect " + fmt(worst));
  if (o.pass) o.detail = "max pairing defect " + fmt(worst);
  return o;
}

Outcome good_reduction() {
  Outcome o;
  int good = 0;
  for (const curves::CurveSpec& c : curves::catalog()) {
    for (std::uint64_t p : all_primes()) {
      const bool ok = curves::has_good_reduction(c, p);
      good += ok ? 1 : 0;
      o.require(ok, c.name + " bad at p=" + std::to_string(p));
    }
  }
  const curves::ReductionCheck c1_at_5 = curves::check_reduction(*curves::find_catalog("C1"), 5);
  o.require(!c1_at_5.good, "C1 unexpectedly good at p=5");
  o.require(c1_at_5.witness.find("repeated factor") != std::string::npos, "C1 at 5: witness is not a repeated root");
  if (o.pass) o.detail = std::to_string(good) + "/96 good; C1 at 5: " + c1_at_5.witness;
  return o;
}

Outcome functional_equation() {
  const CoreRun& run = core_run();
  Outcome o;
  o.require(run.failures.empty() && run.motives.size() == 30, "core run incomplete");
  for (const Motive& m : run.motives) {
    const std::string tag = m.curve + " p=" + std::to_string(m.p);
    const auto& c = m.lpoly.c;
    o.require(c.size() == 11 && c[0] == 1, tag + ": shape");
    const auto p = static_cast<__int128>(m.p);
    o.require(c.size() == 11 && c[10] == p * p * p * p * p, tag + ": c10 != p^5");
    for (int i = 0; i <= 5 && c.size() == 11; ++i) {
      __int128 scale = 1;
      for (int e = 0; e < 5 - i; ++e) scale *= p;
      o.require(c[10 - i] == scale * c[i], tag + ": c_{10-i} != p^{5-i} c_i at i=" + std::to_string(i));
    }
  }
  if (o.pass) o.detail = "exact on all 30 polynomials";
  return o;
}

Outcome sieve_counts() {
  Outcome o;
  const sieve::SieveRun run = sieve::run_all();
  const std::size_t initial = run.states.front().upper.count();
  const std::size_t final_upper = run.final_state().upper.count();
  std::size_t descended = 0;
  for (const auto& e : run.events) descended += e.descending.size();
  const auto last = std::find_if(run.events.rbegin(), run.events.rend(),
                                 [](const sieve::SieveEvent& e) { return !e.descending.empty(); });
  o.require(initial == 963, "initial upper " + std::to_string(initial));
  o.require(final_upper == 504, "final upper " + std::to_string(final_upper) + " (expected 503 primes + 1)");
  o.require(descended == 459, "descended " + std::to_string(descended));
  o.require(last != run.events.rend() && last->p == 59, "last nonempty event is not p=59");
  if (last != run.events.rend()) {
    const auto& d = last->descending;
    o.require(d.size() >= 2 && d[d.size() - 2] == 3481 && d.back() == 3599, "largest two at p=59 are not {3481, 3599}");
  }
  const auto prime = oracle::classic_sieve(sieve::kCells);
  std::size_t primes = 0;
  for (std::uint32_t n = 1; n <= static_cast<std::uint32_t>(sieve::kCells); ++n) {
    primes += prime[n] ? 1 : 0;
    o.require(run.final_state().in_upper(n) == (n == 1 || prime[n]), "final upper differs at " + std::to_string(n));
  }
  o.require(primes == 503, "oracle prime count " + std::to_string(primes));
  if (o.pass) o.detail = "963 -> 504 (503 primes + 1), 459 descended, last event p=59 {3481, 3599}";
  return o;
}

Outcome score_determinism() {
  Outcome o;
  std::set<std::array<std::int64_t, 10>> seen;
  for (std::uint64_t p : all_primes()) {
    const std::string tag = "p=" + std::to_string(p);
    score::PrimeScore s;
    try {
      s = score::note_list(p);
    } catch (const std::exception& e) {
      o.require(false, tag + ": " + e.what());
      continue;
    }
    o.require(seen.insert(s.notes10).second, tag + ": duplicate score");
    for (std::size_t i = 0; i < 10; ++i) o.require(s.notes10[i] == s.notes10[9 - i], tag + ": not palindromic");
    const auto lo = score::cf_expansion(score::six_log2<score::kPrimaryDigits>(p), 5);
    const auto hi = score::cf_expansion(score::six_log2<2 * score::kPrimaryDigits>(p), 5);
    o.require(lo == hi, tag + ": terms change when precision doubles");
    const std::vector<long> ref = oracle::mpfr_six_log2_cf(p, 5, 50);
    o.require(!ref.empty() && s.n[0] == ref[0], tag + ": n1 differs from the 50-digit oracle");
    for (std::size_t i = 0; i < ref.size() && i < 5; ++i) {
      o.require(s.n[i] == ref[i], tag + ": term " + std::to_string(i + 1) + " differs from MPFR");
    }
  }
  const double gap = oracle::mpfr_root_gap(2, 12, 3, 19);
  o.require(gap < 1e-4, "|2^(1/12) - 3^(1/19)| = " + fmt(gap));
  if (o.pass) o.detail = "16 distinct palindromic scores; |2^(1/12) - 3^(1/19)| = " + fmt(gap);
  return o;
}

Outcome newton_integrality() {
  const CoreRun& run = core_run();
  Outcome o;
  o.require(run.failures.empty() && run.motives.size() == 30, "core run incomplete");
  for (const Motive& m : run.motives) {
    try {
      const zeta::LPolynomial l = zeta::lpoly_from_traces(m.traces);
      o.require(zeta::power_sums(l, 5) == m.traces.s, m.curve + " p=" + std::to_string(m.p) + ": round trip");
    } catch (const NonIntegralCoefficient& e) {
      o.require(false, e.what());
    }
  }
  std::mt19937_64 rng(7);
  int cases = 0;
  for (std::uint64_t p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 67, 97}) {
    const auto bound = static_cast<std::int64_t>(std::floor(2.0 * std::sqrt(static_cast<double>(p))));
    std::uniform_int_distribution<std::int64_t> pick(-bound, bound);
    for (int g = 1; g <= 5; ++g) {
      for (int trial = 0; trial < 50; ++trial, ++cases) {
        // Inverse roots w, conj(w) with w + conj(w) = a_i, |w| = sqrt(p).
        std::vector<std::int64_t> s(static_cast<std::size_t>(g), 0);
        for (int i = 0; i < g; ++i) {
          const std::int64_t a = pick(rng);
          std::int64_t prev = 2;
          std::int64_t cur = a;
          for (int k = 0; k < g; ++k) {
            s[static_cast<std::size_t>(k)] += cur;
            const std::int64_t next = a * cur - static_cast<std::int64_t>(p) * prev;
            prev = cur;
            cur = next;
          }
        }
        try {
          const zeta::LPolynomial l = zeta::lpoly_from_traces({p, g, s});
          o.require(zeta::power_sums(l, g) == s, "fuzz round trip failed at p=" + std::to_string(p));
        } catch (const Error& e) {
          o.require(false, std::string("fuzz: ") + e.what());
        }
      }
    }
  }
  if (o.pass) o.detail = "30 catalog trace vectors + " + std::to_string(cases) + " synthetic Weil multisets";
  return o;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    files[fs::relative(entry.path(), root).generic_string()] =
        std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return files;
}

Outcome emitter_determinism() {
  Outcome o;
  const fs::path base = fs::temp_directory_path() / "motivic_acceptance";
  fs::remove_all(base);
  std::vector<std::map<std::string, std::string>> bundles;
  for (const char* name : {"run_a", "run_b"}) {
    RunConfig cfg;
    cfg.primes = parse_prime_range("7..13");
    cfg.out_dir = base / name;
    const SuiteReport report = run_suite(cfg);
    o.require(report.ok(), std::string(name) + " reported failures");
    bundles.push_back(read_tree(cfg.out_dir));
  }
  o.require(bundles[0] == bundles[1], "bundles differ");
  std::size_t midi_files = 0;
  for (const auto& [path, bytes] : bundles[0]) {
    if (path.size() < 4 || path.substr(path.size() - 4) != ".mid") continue;
    ++midi_files;
    const std::span<const std::uint8_t> raw(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size());
    const emit::MidiFile f = emit::read_midi(raw);
    o.require(f.format == 1 && f.division == emit::kDivision, path + ": header");
    o.require(!f.events.empty(), path + ": no events");
  }
  // Independent round trip: rebuild C1's plan and compare the parsed event list.
  curves::PointCounter counter;
  emit::PerformancePlan plan;
  for (std::uint64_t p : {7, 11, 13}) {
    const Motive m = compute_motive(*curves::find_catalog("C1"), p, {}, counter, nullptr);
    const score::PrimeScore s = score::note_list(p);
    plan.segments.push_back({p, std::vector<int>(s.pitches.begin(), s.pitches.end()), m.rhythm, 2, 1.0});
  }
  const emit::Timeline timeline = emit::schedule(plan);
  const std::vector<std::uint8_t> bytes = emit::write_midi(timeline);
  o.require(emit::read_midi(bytes).events == timeline.events, "C1 MIDI round trip changed the event list");
  const std::string& on_disk = bundles[0]["C1/performance.mid"];
  o.require(std::string(bytes.begin(), bytes.end()) == on_disk, "C1 performance.mid differs from the rebuilt plan");
  o.require(midi_files == 7, std::to_string(midi_files) + " MIDI files in the bundle, expected 7");
  if (o.pass) {
    o.detail = std::to_string(bundles[0].size()) + " files byte-identical across runs; " + std::to_string(midi_files) +
               " MIDI files parsed; C1 round trip exact";
  }
  fs::remove_all(base);
  return o;
}

Outcome parallel_soundness() {
  Outcome o;
  const curves::ReducedCurve rc = curves::reduce_mod(*curves::find_catalog("C1"), 23);
  std::vector<std::int64_t> counts;
  for (unsigned w : {1U, 2U, 8U}) {
    curves::CountOptions opts;
    opts.workers = w;
    counts.push_back(curves::count_points(rc, 5, opts));
  }
  o.require(counts[0] == counts[1] && counts[1] == counts[2], "worker counts disagree");
  if (o.pass) o.detail = "C1, p=23, k=5 (q = 6436343): N_5 = " + std::to_string(counts[0]) + " for 1, 2, 8 workers";
  return o;
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 Weil circle, C1-C6 at p = 7..19, tol 1e-9", weil_circle},
      {"2 Palindromic arguments, tol 1e-9", palindrome},
      {"3 Good reduction at 7..67, bad for C1 at 5", good_reduction},
      {"4 Functional equation and c10 = p^5", functional_equation},
      {"5 Sieve counts", sieve_counts},
      {"6 Score determinism and injectivity", score_determinism},
      {"7 Newton integrality and fuzz round trip", newton_integrality},
      {"8 Emitter determinism and MIDI round trip", emitter_determinism},
      {"9 Parallel counting soundness", parallel_soundness},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
