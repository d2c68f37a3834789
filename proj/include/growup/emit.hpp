#pragma once

#include <string>
#include <vector>

namespace growup {

/// Shortest round-trip-stable text for a double (%.12g).
std::string format_number(double x);

/// CSV with `#`-prefixed header lines, a column-name row, then one row per index.
/// All columns must have equal length.
std::string csv_text(const std::string& header, const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& columns);

/// Prefixes every line of `text` with "# ".
std::string comment_block(const std::string& text);

/// Throws Error{Io, "write_failed"}.
void write_text(const std::string& path, const std::string& content);
/// Creates the directory (and parents). Throws Error{Io, "mkdir_failed"}.
void ensure_directory(const std::string& path);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f4e79";
  double width = 1.2;
  bool dashed = false;
};

struct PlotMarker {
  double x;
  double y;
  std::string label;
  std::string color = "#b22222";
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  double xmin = 0.0, xmax = 1.0;
  double ymin = 0.0, ymax = 1.0;
  bool logy = false;
  int width = 880;
  int height = 640;
  std::vector<PlotSeries> series;
  std::vector<PlotMarker> markers;
  std::vector<std::string> notes;  // legend lines below the title
};

/// Standalone SVG 1.1 document: clipped polylines, point markers, ticks and labels.
std::string render_svg(const PlotSpec& spec);

}  // namespace growup
