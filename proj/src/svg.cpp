#include "chainfair/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "chainfair/errors.hpp"

namespace chainfair {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

class Canvas {
 public:
  Canvas(const PlotSpec& spec, Range xr, Range yr) : spec_(spec), xr_(xr), yr_(yr) {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth)
         << "\" height=\"" << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' '
         << num(kHeight) << "\">\n";
    out_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out_ << "<text class=\"title\" x=\"" << num(kWidth / 2) << "\" y=\"24\" "
         << "text-anchor=\"middle\" font-size=\"16\">" << escape(spec.title) << "</text>\n";
  }

  double px(double x) const {
    return kLeft + (x - xr_.lo) / (xr_.hi - xr_.lo) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kHeight - kBottom - (y - yr_.lo) / (yr_.hi - yr_.lo) * (kHeight - kTop - kBottom);
  }

  void axes() {
    const double x0 = kLeft, x1 = kWidth - kRight;
    const double y0 = kHeight - kBottom, y1 = kTop;
    out_ << "<g class=\"axes\" stroke=\"black\">\n";
    out_ << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1)
         << "\" y2=\"" << num(y0) << "\"/>\n";
    out_ << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0)
         << "\" y2=\"" << num(y1) << "\"/>\n";
    out_ << "</g>\n";
    for (int k = 0; k <= 5; ++k) {
      const double xv = xr_.lo + (xr_.hi - xr_.lo) * k / 5.0;
      const double yv = yr_.lo + (yr_.hi - yr_.lo) * k / 5.0;
      out_ << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(y0 + 18)
           << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(xv) << "</text>\n";
      out_ << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(py(yv) + 4)
           << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(yv) << "</text>\n";
    }
    out_ << "<text class=\"xlabel\" x=\"" << num((x0 + x1) / 2) << "\" y=\""
         << num(kHeight - 16) << "\" text-anchor=\"middle\" font-size=\"13\">"
         << escape(spec_.x_label) << "</text>\n";
    out_ << "<text class=\"ylabel\" x=\"18\" y=\"" << num((y0 + y1) / 2)
         << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
         << num((y0 + y1) / 2) << ")\">" << escape(spec_.y_label) << "</text>\n";
    if (spec_.reference_y) {
      const double y = py(*spec_.reference_y);
      out_ << "<line class=\"reference\" x1=\"" << num(x0) << "\" y1=\"" << num(y)
           << "\" x2=\"" << num(x1) << "\" y2=\"" << num(y)
           << "\" stroke=\"gray\" stroke-dasharray=\"2,4\"/>\n";
    }
  }

  void legend(const std::vector<PlotSeries>& series) {
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double y = kTop + 16.0 * static_cast<double>(s);
      out_ << "<rect x=\"" << num(kWidth - kRight + 12) << "\" y=\"" << num(y)
           << "\" width=\"12\" height=\"12\" fill=\"" << color(s) << "\"/>\n";
      out_ << "<text class=\"legend\" x=\"" << num(kWidth - kRight + 30) << "\" y=\""
           << num(y + 10) << "\" font-size=\"12\">" << escape(series[s].name) << "</text>\n";
    }
  }

  static const char* color(std::size_t s) { return kPalette[s % std::size(kPalette)]; }

  std::ostringstream& out() { return out_; }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  const PlotSpec& spec_;
  Range xr_, yr_;
  std::ostringstream out_;
};

void check_series(const std::vector<PlotSeries>& series) {
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw ContractError("svg: series x and y lengths differ");
  }
}

}  // namespace

std::string svg_line_chart(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
  check_series(series);
  Range xr, yr;
  for (const auto& s : series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  if (spec.reference_y) yr.add(*spec.reference_y);
  xr.finish();
  yr.finish();
  Canvas c(spec, xr, yr);
  c.axes();
  for (std::size_t s = 0; s < series.size(); ++s) {
    auto& out = c.out();
    out << "<polyline class=\"series\" fill=\"none\" stroke=\"" << Canvas::color(s)
        << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      if (!std::isfinite(series[s].y[i])) continue;
      if (!first) out << ' ';
      first = false;
      out << num(c.px(series[s].x[i])) << ',' << num(c.py(series[s].y[i]));
    }
    out << "\"/>\n";
  }
  c.legend(series);
  return c.finish();
}

std::string svg_bar_chart(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
  check_series(series);
  if (series.empty()) throw ContractError("svg: bar chart needs at least one series");
  const auto& xs = series.front().x;
  for (const auto& s : series) {
    if (s.x != xs) throw ContractError("svg: bar series must share x positions");
  }
  Range xr, yr;
  const double half = 0.5;
  for (double v : xs) {
    xr.add(v - half);
    xr.add(v + half);
  }
  yr.add(0.0);
  for (const auto& s : series) {
    for (double v : s.y) yr.add(v);
  }
  if (spec.reference_y) yr.add(*spec.reference_y);
  xr.finish();
  yr.finish();
  Canvas c(spec, xr, yr);
  c.axes();
  const double slot = c.px(1.0) - c.px(0.0);
  const double bar = 0.8 * slot / static_cast<double>(series.size());
  for (std::size_t s = 0; s < series.size(); ++s) {
    auto& out = c.out();
    out << "<g class=\"series\" fill=\"" << Canvas::color(s) << "\">\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double y = series[s].y[i];
      if (!std::isfinite(y)) continue;
      const double left = c.px(xs[i]) - 0.4 * slot + bar * static_cast<double>(s);
      const double top = std::min(c.py(y), c.py(0.0));
      const double h = std::abs(c.py(0.0) - c.py(y));
      out << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(bar)
          << "\" height=\"" << num(h) << "\"/>\n";
    }
    out << "</g>\n";
  }
  c.legend(series);
  return c.finish();
}

}  // namespace chainfair
