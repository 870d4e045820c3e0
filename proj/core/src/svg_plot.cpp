#include "resobeam/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace resobeam {
namespace {

constexpr double kWidth = 800;
constexpr double kHeight = 500;
constexpr double kLeft = 80;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 60;
constexpr const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    } else if (hi == lo) {
      const double d = lo == 0.0 ? 1.0 : std::abs(lo) * 0.05;
      lo -= d;
      hi += d;
    }
  }
};

/// Keeps the first/last point and the min and max of each pixel column.
std::vector<std::pair<double, double>> envelope(const Series& s, const Range& xr, double columns) {
  std::vector<std::pair<double, double>> pts;
  const std::size_t n = std::min(s.x.size(), s.y.size());
  if (n <= 4 * static_cast<std::size_t>(columns)) {
    for (std::size_t i = 0; i < n; ++i) pts.emplace_back(s.x[i], s.y[i]);
    return pts;
  }
  long column = -1;
  std::size_t lo = 0;
  std::size_t hi = 0;
  const auto flush = [&] {
    if (column < 0) return;
    if (lo <= hi) {
      pts.emplace_back(s.x[lo], s.y[lo]);
      if (hi != lo) pts.emplace_back(s.x[hi], s.y[hi]);
    } else {
      pts.emplace_back(s.x[hi], s.y[hi]);
      pts.emplace_back(s.x[lo], s.y[lo]);
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<long>((s.x[i] - xr.lo) / (xr.hi - xr.lo) * columns);
    if (c != column) {
      flush();
      column = c;
      lo = hi = i;
    } else {
      if (s.y[i] < s.y[lo]) lo = i;
      if (s.y[i] > s.y[hi]) hi = i;
    }
  }
  flush();
  return pts;
}

}  // namespace

void write_svg(const Plot& plot, const std::filesystem::path& path) {
  Range xr;
  Range yr;
  const auto ty = [&](double y) { return plot.log_y ? (y > 0.0 ? std::log10(y) : std::nan("")) : y; };
  for (const auto& s : plot.series) {
    for (double x : s.x) xr.add(x);
    for (double y : s.y) yr.add(ty(y));
  }
  xr.pad();
  yr.pad();
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot create " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(plot.title)
      << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / 5.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * i / 5.0;
    out << "<text x=\"" << px(xv) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << num(xv)
        << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
        << (plot.log_y ? "1e" + num(yv) : num(yv)) << "</text>\n";
    out << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << py(yv) << "\" y2=\"" << py(yv)
        << "\" stroke=\"#ddd\"/>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
      << escape(plot.x_label) << "</text>\n";
  out << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(plot.y_label) << "</text>\n";

  std::size_t colour = 0;
  for (const auto& s : plot.series) {
    const char* c = kColours[colour++ % std::size(kColours)];
    const auto pts = envelope(s, xr, pw);
    if (s.markers) {
      for (const auto& [x, y] : pts) {
        const double v = ty(y);
        if (!std::isfinite(v)) continue;
        out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(v) << "\" r=\"3\" fill=\"" << c << "\"/>\n";
      }
    } else {
      out << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.2\" points=\"";
      for (const auto& [x, y] : pts) {
        const double v = ty(y);
        if (!std::isfinite(v)) continue;
        out << num(px(x)) << ',' << num(py(v)) << ' ';
      }
      out << "\"/>\n";
    }
    if (!s.label.empty()) {
      const double ly = kTop + 16 + 16 * static_cast<double>(colour - 1);
      out << "<line x1=\"" << kLeft + pw - 150 << "\" x2=\"" << kLeft + pw - 130 << "\" y1=\"" << ly - 4 << "\" y2=\""
          << ly - 4 << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << kLeft + pw - 125 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
    }
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace resobeam
