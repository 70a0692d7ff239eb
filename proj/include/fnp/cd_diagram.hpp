#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fnp/ranks.hpp"

namespace fnp {

enum class Side { left, right };

struct DiagramEntry {
  std::string label;
  double rank = 0.0;
  Side side = Side::left;
  int row = 0;  // 0 = label row nearest the axis
};

// Bold segment linking an indistinguishable group.
struct DiagramBar {
  double rank_lo = 0.0;
  double rank_hi = 0.0;
  int level = 0;
};

// Resolved geometry of a critical difference diagram, in rank units.
struct DiagramSpec {
  double axis_min = 1.0;
  double axis_max = 2.0;
  std::vector<int> ticks;
  double cd_start = 1.0;
  double cd_length = 0.0;
  std::vector<DiagramEntry> entries;  // sorted by rank
  std::vector<DiagramBar> bars;
  // Printed under the labels when present.
  std::optional<std::string> note;
};

struct RenderOptions {
  int width_px = 800;
  int row_height_px = 22;
  int font_size_px = 12;
  int decimals_for_rank = 3;
};

// Places models on the rank axis. The better-ranked ceil(k/2) models go on
// the left, the rest on the right; stems of models further from their edge
// drop to lower rows so no two stems cross. Bars come from the
// multi-member indistinguishable groups, each given the first level not
// already used by an overlapping (closed-interval) bar.
DiagramSpec layout(const AverageRanks& ranks, const std::vector<std::string>& labels, double cd);

// SVG 1.1 document for the spec. Pure: identical inputs give identical bytes.
std::string render_svg(const DiagramSpec& spec, const RenderOptions& opts = {});

}  // namespace fnp
