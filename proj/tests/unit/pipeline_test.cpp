#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "motivic/config.hpp"
#include "motivic/pipeline.hpp"

using namespace motivic;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("motivic_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const curves::CurveSpec& c1() {
  static const curves::CurveSpec c = *curves::find_catalog("C1");
  return c;
}

} // namespace

TEST(ConfigTest, Defaults) {
  const RunConfig cfg;
  EXPECT_EQ(cfg.curve, "all");
  EXPECT_EQ(cfg.primes.primes().size(), 16U);
  EXPECT_EQ(cfg.primes.primes().front(), 7U);
  EXPECT_EQ(cfg.primes.primes().back(), 67U);
  EXPECT_EQ(cfg.effective_cache_dir(), fs::path("motivic-out") / "cache");
}

TEST(ConfigTest, PrimeRanges) {
  EXPECT_EQ(parse_prime_range("7..13").primes(), (std::vector<std::uint64_t>{7, 11, 13}));
  EXPECT_EQ(parse_prime_range(" 11 ").primes(), (std::vector<std::uint64_t>{11}));
  EXPECT_THROW((void)parse_prime_range("4..13"), InvalidArgument);
  EXPECT_THROW((void)parse_prime_range("2..13"), InvalidArgument);
  EXPECT_THROW((void)parse_prime_range("13..7"), InvalidArgument);
  EXPECT_THROW((void)parse_prime_range("seven"), InvalidArgument);
}

TEST(ConfigTest, ConfigTextAndEcho) {
  RunConfig cfg;
  std::istringstream in("# comment\ncurve = C2\nprimes = 7..19\n\ntempo_scale = 0.5\nassertion = 1e-10\n");
  apply_config_text(cfg, in);
  EXPECT_EQ(cfg.curve, "C2");
  EXPECT_EQ(cfg.primes.hi, 19U);
  EXPECT_EQ(cfg.tempo_scale, 0.5);
  EXPECT_EQ(cfg.tolerances.assertion, 1e-10);

  RunConfig round;
  std::istringstream echo(effective_config_text(cfg));
  apply_config_text(round, echo);
  EXPECT_EQ(effective_config_text(round), effective_config_text(cfg));
  EXPECT_NE(effective_config_text(cfg).find("assertion = 1e-10\n"), std::string::npos);
}

TEST(ConfigTest, RejectsBadSettings) {
  RunConfig cfg;
  EXPECT_THROW(apply_setting(cfg, "colour", "blue"), InvalidArgument);
  EXPECT_THROW(apply_setting(cfg, "tempo_scale", "0"), InvalidArgument);
  EXPECT_THROW(apply_setting(cfg, "residual", "-1"), InvalidArgument);
  EXPECT_THROW(apply_setting(cfg, "n_periods", "0"), InvalidArgument);
  EXPECT_THROW(apply_setting(cfg, "full", "maybe"), InvalidArgument);
  std::istringstream missing_eq("curve C1\n");
  EXPECT_THROW(apply_config_text(cfg, missing_eq), InvalidArgument);
}

TEST(ConfigTest, CurveSelectors) {
  EXPECT_EQ(resolve_curves("all").size(), 6U);
  EXPECT_EQ(resolve_curves("C5").front().name, "C5");
  const auto custom = resolve_curves("1, 0, 1, 0");
  ASSERT_EQ(custom.size(), 1U);
  EXPECT_EQ(custom.front().coeffs, (std::vector<std::int64_t>{0, 1, 0, 1}));
  EXPECT_EQ(custom.front().name, resolve_curves("1,0,1,0").front().name);
  EXPECT_EQ(custom.front().name.rfind("custom-", 0), 0U);
  EXPECT_THROW((void)resolve_curves("C9"), InvalidArgument);
  EXPECT_THROW((void)resolve_curves("2,0,1,0"), InvalidArgument);
}

TEST(CacheTest, StoreLoadAndMerge) {
  const CountCache cache(scratch("cache") / "c");
  EXPECT_TRUE(cache.load("C1", 7).empty());
  cache.store("C1", 7, std::vector<std::int64_t>{7, 55, 319});
  EXPECT_EQ(cache.load("C1", 7), (std::vector<std::int64_t>{7, 55, 319}));
  cache.store("C1", 7, std::vector<std::int64_t>{7});
  EXPECT_EQ(cache.load("C1", 7).size(), 3U);
  cache.store("C1", 7, std::vector<std::int64_t>{7, 55, 319, 2463, 16657});
  EXPECT_EQ(cache.load("C1", 7).size(), 5U);
  EXPECT_EQ(cache.file_for("C1", 7).filename(), "C1_p7.json");
}

TEST(CacheTest, ForeignVersionOrCorruptFilesAreIgnored) {
  const CountCache cache(scratch("cache_bad"));
  std::ofstream(cache.file_for("C1", 7)) << R"({"curve":"C1","p":7,"k":1,"N_k":[7],"tool_version":"0.0.0"})";
  EXPECT_TRUE(cache.load("C1", 7).empty());
  std::ofstream(cache.file_for("C1", 11)) << "not json";
  EXPECT_TRUE(cache.load("C1", 11).empty());
}

TEST(PipelineTest, KMaxFailsClearlyWithoutCache) {
  curves::PointCounter counter;
  try {
    (void)obtain_counts(c1(), 7, {3, false}, counter, nullptr);
    FAIL() << "expected CountUnavailable";
  } catch (const CountUnavailable& e) {
    EXPECT_NE(std::string(e.what()).find("N_4"), std::string::npos);
  }
}

TEST(PipelineTest, KMaxFillsFromCache) {
  const CountCache cache(scratch("kmax"));
  curves::PointCounter counter;
  const auto full = obtain_counts(c1(), 7, {}, counter, &cache);
  EXPECT_EQ(full, (std::vector<std::int64_t>{7, 55, 319, 2463, 16657}));
  EXPECT_EQ(obtain_counts(c1(), 7, {3, false}, counter, &cache), full);
}

TEST(PipelineTest, CachedValuesAreUsedAsIs) {
  const CountCache cache(scratch("tamper"));
  cache.store("C1", 7, std::vector<std::int64_t>{7, 55, 319, 2463, 16657});
  curves::PointCounter counter;
  const Motive m = compute_motive(c1(), 7, {1, false}, counter, &cache);
  EXPECT_EQ(m.lpoly.c.back(), 16807);
}

TEST(PipelineTest, LargeFieldsNeedFullOrCache) {
  curves::PointCounter counter;
  EXPECT_THROW((void)obtain_counts(c1(), 37, {}, counter, nullptr), CountUnavailable);
  EXPECT_THROW((void)obtain_counts(c1(), 37, {4, false}, counter, nullptr), CountUnavailable);
  const curves::ReducedCurve rc = curves::reduce_mod(c1(), 37);
  std::vector<std::int64_t> counts;
  for (int k = 1; k <= 4; ++k) counts.push_back(counter.count(rc, k));
  // A stored N_5 is read back without counting over 37^5 elements.
  counts.push_back(69343957 + 1);
  const CountCache cache(scratch("gate"));
  cache.store("C1", 37, counts);
  EXPECT_EQ(obtain_counts(c1(), 37, {}, counter, &cache), counts);
}

TEST(PipelineTest, MotiveForC1AtSeven) {
  curves::PointCounter counter;
  const Motive m = compute_motive(c1(), 7, {}, counter, nullptr);
  EXPECT_EQ(m.traces.s, (std::vector<std::int64_t>{1, -5, 25, -61, 151}));
  EXPECT_EQ(m.lpoly.c, (std::vector<std::int64_t>{1, -1, 3, -11, 28, -74, 196, -539, 1029, -2401, 16807}));
  EXPECT_TRUE(m.weil.ok);
  EXPECT_EQ(m.rhythm.alphas.size(), 10U);
}

TEST(PipelineTest, BadReductionPropagates) {
  curves::PointCounter counter;
  EXPECT_THROW((void)compute_motive(c1(), 5, {}, counter, nullptr), BadReduction);
}

TEST(SuiteTest, WritesTheBundleUnderTheOutputDirectory) {
  RunConfig cfg;
  cfg.primes = parse_prime_range("7..11");
  cfg.curve = "C3";
  cfg.out_dir = scratch("suite");
  const SuiteReport report = run_suite(cfg);
  EXPECT_TRUE(report.ok());
  ASSERT_EQ(report.pairs.size(), 2U);
  for (const char* f : {"config.txt", "scores.json", "summary.json", "C3/lpoly_p007.json", "C3/rhythm_p011.json",
                        "C3/circle_p007.svg", "C3/strip.svg", "C3/performance.mid", "C3/performance.json",
                        "sieve/manifest.json", "sieve/events.json", "sieve/snapshots.json", "sieve/sieve.mid",
                        "sieve/frame_p59_1_descending.svg", "cache/C3_p7.json"}) {
    EXPECT_TRUE(fs::exists(cfg.out_dir / f)) << f;
  }
}
