#include "fnp/cd_diagram.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "fnp/error.hpp"
#include "fnp/friedman_nemenyi.hpp"

namespace fnp {

namespace {

std::string fixed(double v, int decimals) {
  // avoids printing "-0.00"
  const double scale = std::pow(10.0, decimals);
  if (std::round(v * scale) == 0.0) v = 0.0;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

std::string px(double v) { return fixed(v, 2); }

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

void check_options(const RenderOptions& opts) {
  if (opts.width_px <= 0 || opts.row_height_px <= 0 || opts.font_size_px <= 0 || opts.decimals_for_rank < 0) {
    throw ValidationError("render options must be positive");
  }
}

}  // namespace

DiagramSpec layout(const AverageRanks& ranks, const std::vector<std::string>& labels, double cd) {
  if (labels.size() != ranks.size()) throw ValidationError("labels and ranks differ in length");
  if (ranks.size() < 2) throw ValidationError("a diagram needs at least 2 models");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw ValidationError("duplicate model label \"" + l + "\"");
  }

  const std::size_t k = ranks.size();
  DiagramSpec spec;
  spec.axis_min = 1.0;
  spec.axis_max = static_cast<double>(k);
  for (std::size_t t = 1; t <= k; ++t) spec.ticks.push_back(static_cast<int>(t));
  spec.cd_start = 1.0;
  spec.cd_length = cd;

  const auto order = rank_order(ranks, labels);
  const std::size_t left_count = (k + 1) / 2;
  for (std::size_t p = 0; p < k; ++p) {
    DiagramEntry e;
    e.label = labels[order[p]];
    e.rank = ranks[order[p]];
    if (p < left_count) {
      e.side = Side::left;
      e.row = static_cast<int>(p);
    } else {
      e.side = Side::right;
      e.row = static_cast<int>(k - 1 - p);
    }
    spec.entries.push_back(std::move(e));
  }

  // groups arrive ordered by rank_lo
  for (const auto& g : indistinguishable_groups(ranks, labels, cd)) {
    if (g.size() < 2) continue;
    DiagramBar bar{ranks[g.front()], ranks[g.back()], 0};
    for (int level = 0;; ++level) {
      const bool clash = std::any_of(spec.bars.begin(), spec.bars.end(), [&](const DiagramBar& b) {
        return b.level == level && b.rank_lo <= bar.rank_hi && bar.rank_lo <= b.rank_hi;
      });
      if (!clash) {
        bar.level = level;
        break;
      }
    }
    spec.bars.push_back(bar);
  }
  return spec;
}

std::string render_svg(const DiagramSpec& spec, const RenderOptions& opts) {
  check_options(opts);

  const double width = opts.width_px;
  const double row_h = opts.row_height_px;
  const double font = opts.font_size_px;
  const double pad = 10.0;

  const double axis_left = 0.25 * width;
  const double axis_right = 0.75 * width;
  const double span = spec.axis_max - spec.axis_min;
  auto x_of = [&](double rank) {
    return span > 0.0 ? axis_left + (rank - spec.axis_min) / span * (axis_right - axis_left) : axis_left;
  };

  int levels = 0;
  for (const auto& b : spec.bars) levels = std::max(levels, b.level + 1);
  int rows = 0;
  for (const auto& e : spec.entries) rows = std::max(rows, e.row + 1);

  const double y_cd = pad + font + 6.0;
  const double y_axis = y_cd + row_h + font;
  auto bar_y = [&](int level) { return y_axis + 0.5 * row_h * (level + 1); };
  const double rows_top = y_axis + 0.5 * row_h * (levels + 1) + 0.5 * row_h;
  auto row_y = [&](int row) { return rows_top + row * row_h; };
  double height = rows_top + std::max(rows - 1, 0) * row_h + row_h;
  if (spec.note) height += row_h;
  height = std::ceil(height);

  const std::string w = std::to_string(opts.width_px);
  const std::string h = fixed(height, 0);

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + w + "\" height=\"" + h +
         "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  out += "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h + "\" fill=\"white\"/>\n";
  out += "<g font-family=\"sans-serif\" font-size=\"" + std::to_string(opts.font_size_px) +
         "\" fill=\"black\" stroke-linecap=\"butt\">\n";

  // CD bracket anchored at cd_start, ticks at both ends
  {
    const double x1 = x_of(spec.cd_start);
    const double x2 = x_of(spec.cd_start + spec.cd_length);
    out += "<path class=\"cd-bracket\" d=\"M " + px(x1) + " " + px(y_cd - 4) + " V " + px(y_cd + 4) + " M " +
           px(x1) + " " + px(y_cd) + " H " + px(x2) + " M " + px(x2) + " " + px(y_cd - 4) + " V " +
           px(y_cd + 4) + "\" stroke=\"black\" stroke-width=\"1\" fill=\"none\"/>\n";
    out += "<text class=\"cd-label\" x=\"" + px(0.5 * (x1 + x2)) + "\" y=\"" + px(y_cd - 6) +
           "\" text-anchor=\"middle\">CD</text>\n";
  }

  out += "<line class=\"axis\" x1=\"" + px(axis_left) + "\" y1=\"" + px(y_axis) + "\" x2=\"" + px(axis_right) +
         "\" y2=\"" + px(y_axis) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int t : spec.ticks) {
    const double x = x_of(t);
    out += "<line class=\"tick\" x1=\"" + px(x) + "\" y1=\"" + px(y_axis - 5) + "\" x2=\"" + px(x) + "\" y2=\"" +
           px(y_axis) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out += "<text class=\"tick-label\" x=\"" + px(x) + "\" y=\"" + px(y_axis - 8) + "\" text-anchor=\"middle\">" +
           std::to_string(t) + "</text>\n";
  }

  for (const auto& b : spec.bars) {
    const double y = bar_y(b.level);
    out += "<line class=\"bar\" x1=\"" + px(x_of(b.rank_lo)) + "\" y1=\"" + px(y) + "\" x2=\"" +
           px(x_of(b.rank_hi)) + "\" y2=\"" + px(y) + "\" stroke=\"black\" stroke-width=\"4\"/>\n";
  }

  for (const auto& e : spec.entries) {
    const double x = x_of(e.rank);
    const double y = row_y(e.row);
    const bool left = e.side == Side::left;
    const double edge = left ? axis_left - 10.0 : axis_right + 10.0;
    out += "<polyline class=\"stem\" points=\"" + px(x) + "," + px(y_axis) + " " + px(x) + "," + px(y) + " " +
           px(edge) + "," + px(y) + "\" stroke=\"black\" stroke-width=\"1\" fill=\"none\"/>\n";
    const std::string rank_text = fixed(e.rank, opts.decimals_for_rank);
    const std::string text = left ? xml_escape(e.label) + " " + rank_text : rank_text + " " + xml_escape(e.label);
    out += "<text class=\"label\" x=\"" + px(left ? edge - 4.0 : edge + 4.0) + "\" y=\"" + px(y + 0.35 * font) +
           "\" text-anchor=\"" + (left ? "end" : "start") + "\">" + text + "</text>\n";
  }

  if (spec.note) {
    out += "<text class=\"annotation\" x=\"" + px(0.5 * width) + "\" y=\"" + px(height - 0.5 * row_h) +
           "\" text-anchor=\"middle\" font-style=\"italic\">" + xml_escape(*spec.note) + "</text>\n";
  }

  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace fnp
