#pragma once

// Standard MIDI File (format 1) writer and reader for motivic performances.
// Tempo is fixed at 500000 us/quarter with 480 ticks/quarter, i.e. 960 ticks
// per second; acceleration lives entirely in the onset ticks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "motivic/errors.hpp"
#include "motivic/rhythm.hpp"

namespace motivic::emit {

inline constexpr std::uint16_t kDivision = 480;
inline constexpr std::uint32_t kTempoMicros = 500000;
inline constexpr double kTicksPerSecond = 960.0;
inline constexpr std::uint8_t kVelocity = 80;

/// One prime's share of a performance: the 2g pitches played in the order of
/// the sorted alphas, repeated for n_periods periods.
struct Segment {
  std::uint64_t p = 0;
  std::vector<int> pitches;
  rhythm::RhythmPattern rhythm;
  int n_periods = 2;
  double tempo_scale = 1.0;
};

struct PerformancePlan {
  std::vector<Segment> segments; ///< ascending p
};

struct NoteEvent {
  std::uint32_t tick = 0;
  bool on = false;
  std::uint8_t pitch = 0;
  std::uint8_t velocity = 0; ///< 0 for note-off

  friend bool operator==(const NoteEvent&, const NoteEvent&) = default;
};

struct SegmentSpan {
  std::uint64_t p = 0;
  std::uint32_t start_tick = 0;
  std::uint32_t end_tick = 0;
};

struct Timeline {
  std::vector<NoteEvent> events; ///< sorted by tick, note-offs before note-ons
  std::vector<SegmentSpan> segments;
};

inline std::uint32_t to_tick(double seconds) {
  if (!std::isfinite(seconds) || seconds < 0.0 ||
      seconds * kTicksPerSecond > static_cast<double>(std::numeric_limits<std::uint32_t>::max())) {
    throw InvalidArgument("onset time is not a finite nonnegative tick count");
  }
  return static_cast<std::uint32_t>(std::llround(seconds * kTicksPerSecond));
}

/// Lays the segments end to end. Each note lasts min(period / 4, gap to the
/// next onset) and at least one tick.
inline Timeline schedule(const PerformancePlan& plan) {
  struct Note {
    std::uint32_t on;
    std::uint8_t pitch;
    std::uint32_t quarter_period;
  };
  std::vector<Note> notes;
  Timeline timeline;
  double start = 0.0;
  for (std::size_t s = 0; s < plan.segments.size(); ++s) {
    const Segment& seg = plan.segments[s];
    if (s > 0 && seg.p <= plan.segments[s - 1].p) throw InvalidArgument("segments must be in ascending prime order");
    if (seg.pitches.size() != seg.rhythm.alphas.size()) {
      throw InvalidArgument("segment needs one pitch per onset slot");
    }
    for (int pitch : seg.pitches) {
      if (pitch < 0 || pitch > 127) throw InvalidArgument("pitch outside [0, 127]");
    }
    const double scaled_period = seg.tempo_scale * seg.rhythm.period;
    const auto quarter = static_cast<std::uint32_t>(std::llround(0.25 * scaled_period * kTicksPerSecond));
    for (const rhythm::Onset& o : rhythm::onsets(seg.rhythm, seg.n_periods, seg.tempo_scale)) {
      notes.push_back({to_tick(start + o.time), static_cast<std::uint8_t>(seg.pitches[o.index]), quarter});
    }
    const std::uint32_t begin = to_tick(start);
    start += seg.n_periods * scaled_period;
    timeline.segments.push_back({seg.p, begin, to_tick(start)});
  }
  std::stable_sort(notes.begin(), notes.end(), [](const Note& a, const Note& b) { return a.on < b.on; });

  for (std::size_t i = 0; i < notes.size(); ++i) {
    std::uint32_t duration = notes[i].quarter_period;
    if (i + 1 < notes.size()) duration = std::min(duration, notes[i + 1].on - notes[i].on);
    duration = std::max<std::uint32_t>(duration, 1);
    timeline.events.push_back({notes[i].on, true, notes[i].pitch, kVelocity});
    timeline.events.push_back({notes[i].on + duration, false, notes[i].pitch, 0});
  }
  std::stable_sort(timeline.events.begin(), timeline.events.end(), [](const NoteEvent& a, const NoteEvent& b) {
    return std::make_tuple(a.tick, a.on) < std::make_tuple(b.tick, b.on);
  });
  return timeline;
}

namespace detail {

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8U));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

/// MIDI variable-length quantity, at most four bytes (values < 2^28).
inline void put_vlq(std::vector<std::uint8_t>& out, std::uint32_t v) {
  if (v >= (1U << 28U)) throw InvalidArgument("delta time too large for a MIDI VLQ");
  std::uint8_t buf[4];
  int n = 0;
  buf[n++] = static_cast<std::uint8_t>(v & 0x7FU);
  while ((v >>= 7U) != 0) buf[n++] = static_cast<std::uint8_t>((v & 0x7FU) | 0x80U);
  while (n > 0) out.push_back(buf[--n]);
}

} // namespace detail

inline std::vector<std::uint8_t> write_midi(const Timeline& timeline) {
  std::vector<std::uint8_t> track;
  detail::put_vlq(track, 0);
  track.insert(track.end(), {0xFF, 0x51, 0x03});
  track.push_back(static_cast<std::uint8_t>(kTempoMicros >> 16U));
  track.push_back(static_cast<std::uint8_t>(kTempoMicros >> 8U));
  track.push_back(static_cast<std::uint8_t>(kTempoMicros));
  std::uint32_t last = 0;
  for (const NoteEvent& e : timeline.events) {
    detail::put_vlq(track, e.tick - last);
    last = e.tick;
    track.push_back(e.on ? 0x90 : 0x80);
    track.push_back(e.pitch);
    track.push_back(e.on ? e.velocity : 0);
  }
  detail::put_vlq(track, 0);
  track.insert(track.end(), {0xFF, 0x2F, 0x00});

  std::vector<std::uint8_t> out{'M', 'T', 'h', 'd'};
  detail::put_u32(out, 6);
  detail::put_u16(out, 1); // format
  detail::put_u16(out, 1); // tracks
  detail::put_u16(out, kDivision);
  out.insert(out.end(), {'M', 'T', 'r', 'k'});
  detail::put_u32(out, static_cast<std::uint32_t>(track.size()));
  out.insert(out.end(), track.begin(), track.end());
  return out;
}

inline std::vector<std::uint8_t> write_midi(const PerformancePlan& plan) { return write_midi(schedule(plan)); }

struct MidiFile {
  std::uint16_t format = 0;
  std::uint16_t tracks = 0;
  std::uint16_t division = 0;
  std::optional<std::uint32_t> tempo_micros;
  std::vector<NoteEvent> events; ///< all tracks merged, absolute ticks, file order within a tick
};

/// Parses any SMF with metrical division; handles running status, meta and
/// sysex events. Note-on with velocity 0 is reported as note-off.
inline MidiFile read_midi(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  const auto need = [&](std::size_t n) {
    if (bytes.size() - pos < n) throw MidiFormatError("truncated MIDI data");
  };
  const auto u8 = [&]() -> std::uint8_t {
    need(1);
    return bytes[pos++];
  };
  const auto u16 = [&]() -> std::uint16_t {
    const std::uint16_t hi = u8();
    return static_cast<std::uint16_t>((hi << 8U) | u8());
  };
  const auto u32 = [&]() -> std::uint32_t {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8U) | u8();
    return v;
  };
  const auto vlq = [&]() -> std::uint32_t {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      const std::uint8_t b = u8();
      v = (v << 7U) | (b & 0x7FU);
      if ((b & 0x80U) == 0) return v;
    }
    throw MidiFormatError("variable-length quantity longer than four bytes");
  };
  const auto tag = [&](const char* expected) {
    need(4);
    if (!std::equal(expected, expected + 4, bytes.begin() + static_cast<std::ptrdiff_t>(pos))) {
      throw MidiFormatError(std::string("expected chunk ") + expected);
    }
    pos += 4;
  };

  MidiFile file;
  tag("MThd");
  if (u32() != 6) throw MidiFormatError("header chunk length must be 6");
  file.format = u16();
  file.tracks = u16();
  file.division = u16();
  if ((file.division & 0x8000U) != 0) throw MidiFormatError("SMPTE division not supported");

  std::vector<NoteEvent> all;
  for (std::uint16_t t = 0; t < file.tracks; ++t) {
    tag("MTrk");
    const std::uint32_t length = u32();
    need(length);
    const std::size_t end = pos + length;
    std::uint32_t tick = 0;
    std::uint8_t status = 0;
    bool ended = false;
    while (pos < end && !ended) {
      tick += vlq();
      std::uint8_t b = u8();
      if (b == 0xFF) {
        const std::uint8_t type = u8();
        const std::uint32_t len = vlq();
        need(len);
        if (type == 0x51 && len == 3) {
          file.tempo_micros = (std::uint32_t{bytes[pos]} << 16U) | (std::uint32_t{bytes[pos + 1]} << 8U) | bytes[pos + 2];
        }
        if (type == 0x2F) ended = true;
        pos += len;
        continue;
      }
      if (b == 0xF0 || b == 0xF7) {
        const std::uint32_t len = vlq();
        need(len);
        pos += len;
        continue;
      }
      std::uint8_t first;
      if ((b & 0x80U) != 0) {
        status = b;
        first = u8();
      } else {
        if (status == 0) throw MidiFormatError("running status without a prior status byte");
        first = b;
      }
      const std::uint8_t kind = status & 0xF0U;
      const bool two_bytes = kind != 0xC0 && kind != 0xD0;
      const std::uint8_t second = two_bytes ? u8() : 0;
      if (kind == 0x90 || kind == 0x80) {
        const bool on = kind == 0x90 && second != 0;
        all.push_back({tick, on, first, on ? second : std::uint8_t{0}});
      }
    }
    if (!ended) throw MidiFormatError("track without end-of-track meta event");
    pos = end;
  }
  std::stable_sort(all.begin(), all.end(), [](const NoteEvent& a, const NoteEvent& b) { return a.tick < b.tick; });
  file.events = std::move(all);
  return file;
}

} // namespace motivic::emit
