#pragma once

// JSON documents for L-polynomials, rhythms, scores, sieve logs and manifests.
// ordered_json keeps keys in schema order so output bytes are stable.

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "motivic/emit/midi.hpp"
#include "motivic/emit/svg.hpp"
#include "motivic/lpolynomial.hpp"
#include "motivic/rhythm.hpp"
#include "motivic/score.hpp"
#include "motivic/sieve.hpp"

namespace motivic::emit {

using Json = nlohmann::ordered_json;

inline Json lpoly_json(const std::string& curve, const zeta::LPolynomial& l) {
  return Json{{"curve", curve}, {"p", l.p}, {"coefficients", l.c}};
}

inline Json rhythm_json(const std::string& curve, const rhythm::RhythmPattern& rp) {
  return Json{{"curve", curve}, {"p", rp.p}, {"alphas", rp.alphas}, {"period", rp.period}, {"radius", rp.radius}};
}

inline Json onsets_json(const rhythm::OnsetSchedule& schedule) {
  Json out = Json::array();
  for (const rhythm::Onset& o : schedule) out.push_back(Json{{"time", o.time}, {"j", o.index + 1}, {"k", o.period}});
  return out;
}

inline Json score_json(const score::PrimeScore& s) {
  return Json{{"p", s.p}, {"cf_terms", s.n}, {"notes5", s.notes5}, {"notes10", s.notes10}, {"pitches", s.pitches}};
}

inline Json sieve_events_json(std::span<const sieve::SieveEvent> events) {
  Json out = Json::array();
  for (const sieve::SieveEvent& e : events) out.push_back(Json{{"p", e.p}, {"descending", e.descending}});
  return out;
}

/// One 3600-character membership string per state; "after" is null for the
/// initial state.
inline Json sieve_snapshots_json(const sieve::SieveRun& run) {
  Json out = Json::array();
  for (std::size_t i = 0; i < run.states.size(); ++i) {
    Json after = i == 0 ? Json(nullptr) : Json(run.events[i - 1].p);
    out.push_back(Json{{"after", after}, {"upper", run.states[i].membership_string()}});
  }
  return out;
}

inline Json manifest_json(std::span<const SieveFrame> frames, std::span<const SegmentSpan> segments) {
  Json names = Json::array();
  for (const SieveFrame& f : frames) names.push_back(f.file);
  Json segs = Json::array();
  for (const SegmentSpan& s : segments) {
    segs.push_back(Json{{"p", s.p}, {"start_tick", s.start_tick}, {"end_tick", s.end_tick}});
  }
  return Json{{"frames", names}, {"segments", segs}};
}

/// Serialized form used for every file written by the tools.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

} // namespace motivic::emit
