#include "qperc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qperc/csvio.hpp"

namespace qperc {

namespace {

const char* kPalette[8] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                           "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

double parse_num(const std::string& s, const std::string& col) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw std::runtime_error("non-numeric value '" + s + "' in column " + col);
  }
}

}  // namespace

std::string render_svg(const std::string& csv_path, const PlotSpec& spec) {
  const CsvTable table = read_csv(csv_path);
  if (table.rows.empty()) throw std::runtime_error(csv_path + ": no data rows");
  const std::size_t xi = table.column(spec.x_column);
  const std::size_t yi = table.column(spec.y_column);
  const bool grouped = !spec.series_column.empty();
  const std::size_t si = grouped ? table.column(spec.series_column) : 0;

  struct Pt {
    double x, y;
  };
  std::vector<std::string> series_order;
  std::map<std::string, std::vector<Pt>> series;
  for (const std::vector<std::string>& row : table.rows) {
    if (row.size() < table.header.size()) continue;
    const std::string key = grouped ? row[si] : std::string("series");
    double x = parse_num(row[xi], spec.x_column);
    double y = parse_num(row[yi], spec.y_column);
    if (spec.log_x) {
      if (!(x > 0.0)) throw std::runtime_error("log-x axis needs positive values");
      x = std::log10(x);
    }
    if (spec.log_y) {
      if (!(y > 0.0)) throw std::runtime_error("log-y axis needs positive values");
      y = std::log10(y);
    }
    if (series.find(key) == series.end()) series_order.push_back(key);
    series[key].push_back({x, y});
  }
  if (series.empty()) throw std::runtime_error(csv_path + ": no plottable rows");

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& [k, pts] : series) {
    for (const Pt& p : pts) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const double ml = 70, mr = 20, mt = spec.title.empty() ? 20 : 40, mb = 50;
  const double pw = spec.width - ml - mr, ph = spec.height - mt - mb;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << spec.width << "\" height=\"" << spec.height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!spec.title.empty()) {
    out << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">"
        << spec.title << "</text>\n";
  }

  // axes
  out << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\""
      << fmt(ml + pw) << "\" y2=\"" << fmt(mt + ph)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(mt) << "\" x2=\"" << fmt(ml)
      << "\" y2=\"" << fmt(mt + ph) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  // ticks
  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    const double fx = xmin + (xmax - xmin) * i / nticks;
    const double fy = ymin + (ymax - ymin) * i / nticks;
    const double tx = px(fx), ty = py(fy);
    const double label_x = spec.log_x ? std::pow(10.0, fx) : fx;
    const double label_y = spec.log_y ? std::pow(10.0, fy) : fy;
    out << "<line x1=\"" << fmt(tx) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\"" << fmt(tx)
        << "\" y2=\"" << fmt(mt + ph + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(tx) << "\" y=\"" << fmt(mt + ph + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_tick(label_x) << "</text>\n";
    out << "<line x1=\"" << fmt(ml - 5) << "\" y1=\"" << fmt(ty) << "\" x2=\"" << fmt(ml)
        << "\" y2=\"" << fmt(ty) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(ty + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_tick(label_y) << "</text>\n";
  }

  // axis labels
  out << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(mt + ph + 38)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << spec.x_column << (spec.log_x ? " (log)" : "") << "</text>\n";
  out << "<text x=\"16\" y=\"" << fmt(mt + ph / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 "
      << fmt(mt + ph / 2) << ")\">" << spec.y_column << (spec.log_y ? " (log)" : "")
      << "</text>\n";

  // polylines + legend
  int color = 0;
  double legend_y = mt + 12;
  for (const std::string& key : series_order) {
    const std::vector<Pt>& pts = series[key];
    out << "<polyline id=\"" << key << "\" fill=\"none\" stroke=\"" << kPalette[color % 8]
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) out << " ";
      out << fmt(px(pts[i].x)) << "," << fmt(py(pts[i].y));
    }
    out << "\"/>\n";
    out << "<line x1=\"" << fmt(ml + pw - 130) << "\" y1=\"" << fmt(legend_y) << "\" x2=\""
        << fmt(ml + pw - 110) << "\" y2=\"" << fmt(legend_y) << "\" stroke=\""
        << kPalette[color % 8] << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fmt(ml + pw - 104) << "\" y=\"" << fmt(legend_y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << key << "</text>\n";
    legend_y += 16;
    ++color;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace qperc
