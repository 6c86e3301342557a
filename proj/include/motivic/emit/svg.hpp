#pragma once

// Deterministic SVG 1.1 renderings: circular rhythm, one-period strip, and
// the two-grid sieve frames.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "motivic/errors.hpp"
#include "motivic/lpolynomial.hpp"
#include "motivic/rhythm.hpp"
#include "motivic/sieve.hpp"

namespace motivic::emit {

namespace svg {

/// Fixed nine-decimal formatting; independent of the global locale.
inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

inline std::string header(const std::string& view_box, int width, int height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" +
         view_box + "\" width=\"" + std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
}

inline constexpr double kCircleCenter = 0.5;
inline constexpr double kReferenceRadius = 0.45; // p = 7 spans 90% of the frame
inline constexpr std::uint64_t kReferencePrime = 7;

inline constexpr double kStripLeft = 60.0;
inline constexpr double kStripWidth = 1000.0;
inline constexpr double kStripRowHeight = 40.0;
inline constexpr double kStripTop = 10.0;

} // namespace svg

inline double circle_radius(std::uint64_t p) {
  return svg::kReferenceRadius * std::sqrt(static_cast<double>(svg::kReferencePrime) / static_cast<double>(p));
}

/// Zeros of L drawn on a circle of radius proportional to p^{-1/2}, root j at
/// angle -alpha_j; the horizontal axis is the palindrome mirror.
inline std::string write_svg_circle(const rhythm::RhythmPattern& rp, const zeta::LPolynomial& l) {
  const double c = svg::kCircleCenter;
  const double r = circle_radius(rp.p);
  std::string out = svg::header("0 0 1 1", 600, 600);
  out += "<title>p = " + std::to_string(rp.p) + "</title>\n<desc>L(z) coefficients:";
  for (std::int64_t coeff : l.c) out += " " + std::to_string(coeff);
  out += "</desc>\n";
  out += "<rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"white\"/>\n";
  out += "<line class=\"mirror\" x1=\"0.02\" y1=\"0.5\" x2=\"0.98\" y2=\"0.5\" stroke=\"#999\" stroke-width=\"0.002\"/>\n";
  out += "<circle class=\"weil\" cx=\"" + svg::num(c) + "\" cy=\"" + svg::num(c) + "\" r=\"" + svg::num(r) +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.003\"/>\n";
  for (double alpha : rp.alphas) {
    const double theta = -alpha;
    out += "<circle class=\"root\" cx=\"" + svg::num(c + r * std::cos(theta)) + "\" cy=\"" +
           svg::num(c - r * std::sin(theta)) + "\" r=\"0.012\" fill=\"#c0392b\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

/// One row per pattern, tick j at (alpha_j + pi) / 2pi of the row width.
inline std::string write_svg_strip(std::span<const rhythm::RhythmPattern> patterns) {
  for (const rhythm::RhythmPattern& rp : patterns) {
    if (rp.genus != patterns.front().genus) throw InvalidArgument("strip patterns must share a genus");
  }
  const double height = 2 * svg::kStripTop + svg::kStripRowHeight * static_cast<double>(patterns.size());
  const double width = svg::kStripLeft + svg::kStripWidth + 20.0;
  std::string out = svg::header("0 0 " + svg::num(width) + " " + svg::num(height), static_cast<int>(width),
                                static_cast<int>(height));
  out += "<rect x=\"0\" y=\"0\" width=\"" + svg::num(width) + "\" height=\"" + svg::num(height) +
         "\" fill=\"white\"/>\n";
  for (std::size_t row = 0; row < patterns.size(); ++row) {
    const rhythm::RhythmPattern& rp = patterns[row];
    const double mid = svg::kStripTop + svg::kStripRowHeight * (static_cast<double>(row) + 0.5);
    out += "<g class=\"row\" data-p=\"" + std::to_string(rp.p) + "\">\n";
    out += "<text x=\"8\" y=\"" + svg::num(mid + 5.0) + "\" font-size=\"14\">p = " + std::to_string(rp.p) +
           "</text>\n";
    out += "<line class=\"baseline\" x1=\"" + svg::num(svg::kStripLeft) + "\" y1=\"" + svg::num(mid) + "\" x2=\"" +
           svg::num(svg::kStripLeft + svg::kStripWidth) + "\" y2=\"" + svg::num(mid) +
           "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    for (double alpha : rp.alphas) {
      const double x = svg::kStripLeft + svg::kStripWidth * (alpha + rhythm::kPi) / (2.0 * rhythm::kPi);
      out += "<line class=\"onset\" x1=\"" + svg::num(x) + "\" y1=\"" + svg::num(mid - 12.0) + "\" x2=\"" +
             svg::num(x) + "\" y2=\"" + svg::num(mid + 12.0) + "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

enum class FramePhase { before, descending, after };

inline const char* phase_name(FramePhase phase) {
  switch (phase) {
  case FramePhase::before: return "before";
  case FramePhase::descending: return "descending";
  case FramePhase::after: return "after";
  }
  return "";
}

namespace svg {

inline constexpr int kLowerOffset = sieve::kSide + 1; // one empty row between the grids

inline std::string cell(int n, bool lower, const char* cls) {
  const sieve::GridCoord rc = sieve::grid_coords(n);
  const int y = rc.row - 1 + (lower ? kLowerOffset : 0);
  return "<rect class=\"" + std::string(cls) + "\" data-n=\"" + std::to_string(n) + "\" x=\"" +
         std::to_string(rc.col - 1) + ".05\" y=\"" + std::to_string(y) + ".05\" width=\"0.9\" height=\"0.9\"/>\n";
}

} // namespace svg

/// Two stacked 60x60 grids; every number occupies the same cell in whichever
/// grid it currently stands. `highlight` marks cells of the upper grid that are
/// about to descend.
inline std::string write_sieve_frame(const sieve::SieveState& state, std::span<const std::uint32_t> highlight,
                                     const std::string& title) {
  sieve::Membership marked;
  for (std::uint32_t n : highlight) marked.set(n - 1);
  const int side = sieve::kSide;
  std::string out = svg::header("0 0 " + std::to_string(side) + " " + std::to_string(side + svg::kLowerOffset),
                                480, 480 * (side + svg::kLowerOffset) / side);
  out += "<title>" + title + "</title>\n";
  out += "<style>.upper{fill:#2c3e50}.lower{fill:#95a5a6}.descending{fill:#e67e22}</style>\n";
  out += "<rect class=\"grid\" x=\"0\" y=\"0\" width=\"60\" height=\"60\" fill=\"none\" stroke=\"black\" "
         "stroke-width=\"0.2\"/>\n";
  out += "<rect class=\"grid\" x=\"0\" y=\"" + std::to_string(svg::kLowerOffset) +
         "\" width=\"60\" height=\"60\" fill=\"none\" stroke=\"black\" stroke-width=\"0.2\"/>\n";
  for (int n = 1; n <= sieve::kCells; ++n) {
    if (state.in_upper(static_cast<std::uint32_t>(n))) {
      out += svg::cell(n, false, marked.test(n - 1) ? "descending" : "upper");
    } else {
      out += svg::cell(n, true, "lower");
    }
  }
  out += "</svg>\n";
  return out;
}

struct SieveFrame {
  std::string file;
  std::uint32_t p = 0;
  FramePhase phase = FramePhase::before;
  std::string svg;
};

/// Three frames per event: before, descending highlight, after.
inline std::vector<SieveFrame> write_sieve_frames(const sieve::SieveRun& run) {
  std::vector<SieveFrame> frames;
  for (std::size_t i = 0; i < run.events.size(); ++i) {
    const sieve::SieveEvent& e = run.events[i];
    char stem[32];
    std::snprintf(stem, sizeof stem, "frame_p%02u", static_cast<unsigned>(e.p));
    const std::string base(stem);
    const std::string label = "sieve p = " + std::to_string(e.p);
    frames.push_back({base + "_0_before.svg", e.p, FramePhase::before,
                      write_sieve_frame(run.states[i], {}, label + " (before)")});
    frames.push_back({base + "_1_descending.svg", e.p, FramePhase::descending,
                      write_sieve_frame(run.states[i], e.descending, label + " (descending)")});
    frames.push_back({base + "_2_after.svg", e.p, FramePhase::after,
                      write_sieve_frame(run.states[i + 1], {}, label + " (after)")});
  }
  return frames;
}

} // namespace motivic::emit
