#include "chemo/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "chemo/error.hpp"

namespace chemo::svg {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

}  // namespace

std::string render(const PlotSpec& spec, const std::vector<Series>& series) {
  const double left = 70, right = 20, top = 40, bottom = 50;
  const double pw = spec.width - left - right;
  const double ph = spec.height - top - bottom;

  auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      if (spec.log_y && !(s.y[k] > 0.0)) continue;
      xmin = std::min(xmin, s.x[k]);
      xmax = std::max(xmax, s.x[k]);
      ymin = std::min(ymin, ty(s.y[k]));
      ymax = std::max(ymax, ty(s.y[k]));
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + ph - (ty(y) - ymin) / (ymax - ymin) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
     << spec.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << spec.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(spec.title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = xmin + (xmax - xmin) * t / 4.0;
    const double fy = ymin + (ymax - ymin) * t / 4.0;
    const double X = left + pw * t / 4.0;
    const double Y = top + ph - ph * t / 4.0;
    os << "<text x=\"" << X << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
       << num(fx) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << Y + 4 << "\" text-anchor=\"end\">"
       << (spec.log_y ? "1e" + num(fy) : num(fy)) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << spec.height - 10
     << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
  os << "<text transform=\"translate(16," << top + ph / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(spec.y_label) << "</text>\n";

  int legend_row = 0;
  for (const auto& s : series) {
    std::ostringstream pts;
    std::ostringstream dots;
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      if (spec.log_y && !(s.y[k] > 0.0)) continue;
      pts << px(s.x[k]) << ',' << py(s.y[k]) << ' ';
      dots << "<circle cx=\"" << px(s.x[k]) << "\" cy=\"" << py(s.y[k]) << "\" r=\"3\" fill=\""
           << s.color << "\"/>\n";
    }
    if (s.markers_only) os << dots.str();
    else os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" points=\"" << pts.str() << "\"/>\n";
    const double ly = top + 14 + 16 * legend_row++;
    os << "<rect x=\"" << left + pw - 150 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\""
       << s.color << "\"/><text x=\"" << left + pw - 135 << "\" y=\"" << ly << "\">"
       << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write(const std::filesystem::path& path, const PlotSpec& spec,
           const std::vector<Series>& series) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  os << render(spec, series);
}

}  // namespace chemo::svg
