#pragma once

#include <string>

namespace qperc {

struct PlotSpec {
  std::string x_column;
  std::string y_column;
  std::string series_column;  // empty -> single series
  bool log_x = false;
  bool log_y = false;
  int width = 800;
  int height = 520;
  std::string title;
};

// Standalone SVG 1.1 document: axes, tick labels, a legend, and one
// polyline per series (id attribute = series name). Byte-deterministic for
// identical inputs. Throws on schema mismatch or empty data.
std::string render_svg(const std::string& csv_path, const PlotSpec& spec);

}  // namespace qperc
