#include "jjtrench/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace jjtrench::io {
namespace {

struct Box {
  double x, y, w, h;
};

struct Axis {
  double lo, hi;
  bool log;
  double map(double v, double a, double b) const {
    const double t = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo))
                         : (v - lo) / (hi - lo);
    return a + t * (b - a);
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Axis fit_axis(const std::vector<std::vector<double>*>& series, bool log) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto* s : series) {
    for (double v : *s) {
      if (!std::isfinite(v) || (log && v <= 0.0)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) return {1.0, 10.0, log};
  if (hi <= lo) {
    if (log) {
      lo /= 2.0;
      hi *= 2.0;
    } else {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  if (log) {
    lo = std::pow(10.0, std::floor(std::log10(lo)));
    hi = std::pow(10.0, std::ceil(std::log10(hi)));
  }
  return {lo, hi, log};
}

class Panel {
 public:
  Panel(std::ostringstream& os, Box box, Axis x, Axis y, const std::string& title,
        const std::string& xlabel, const std::string& ylabel)
      : os_(os), box_(box), x_(x), y_(y) {
    os_ << "<rect x='" << box.x << "' y='" << box.y << "' width='" << box.w << "' height='"
        << box.h << "' fill='none' stroke='black'/>\n";
    os_ << "<text x='" << box.x + box.w / 2 << "' y='" << box.y - 8
        << "' text-anchor='middle' font-size='13'>" << title << "</text>\n";
    os_ << "<text x='" << box.x + box.w / 2 << "' y='" << box.y + box.h + 32
        << "' text-anchor='middle' font-size='11'>" << xlabel << "</text>\n";
    os_ << "<text x='" << box.x - 44 << "' y='" << box.y + box.h / 2
        << "' text-anchor='middle' font-size='11' transform='rotate(-90 " << box.x - 44 << ' '
        << box.y + box.h / 2 << ")'>" << ylabel << "</text>\n";
    tick_labels();
  }

  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::string& style) {
    os_ << "<polyline fill='none' " << style << " points='";
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
      if (!visible(xs[i], ys[i])) continue;
      os_ << px(xs[i]) << ',' << py(ys[i]) << ' ';
    }
    os_ << "'/>\n";
  }

  void markers(const std::vector<double>& xs, const std::vector<double>& ys) {
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
      if (!visible(xs[i], ys[i])) continue;
      os_ << "<circle cx='" << px(xs[i]) << "' cy='" << py(ys[i]) << "' r='1.6' fill='#1f77b4'/>\n";
    }
  }

  void bar(double x0, double x1, double y) {
    const double top = py(y);
    os_ << "<rect x='" << px(x0) << "' y='" << top << "' width='" << std::max(0.0, px(x1) - px(x0))
        << "' height='" << box_.y + box_.h - top << "' fill='#9ecae1' stroke='#3182bd'/>\n";
  }

 private:
  bool visible(double x, double y) const {
    if (!std::isfinite(x) || !std::isfinite(y)) return false;
    if (x_.log && x <= 0.0) return false;
    if (y_.log && y <= 0.0) return false;
    return x >= x_.lo && x <= x_.hi && y >= y_.lo && y <= y_.hi;
  }
  double px(double x) const { return x_.map(x, box_.x, box_.x + box_.w); }
  double py(double y) const { return y_.map(y, box_.y + box_.h, box_.y); }

  void tick_labels() {
    os_ << "<text x='" << box_.x << "' y='" << box_.y + box_.h + 14 << "' font-size='9'>"
        << num(x_.lo) << "</text>\n";
    os_ << "<text x='" << box_.x + box_.w << "' y='" << box_.y + box_.h + 14
        << "' text-anchor='end' font-size='9'>" << num(x_.hi) << "</text>\n";
    os_ << "<text x='" << box_.x - 4 << "' y='" << box_.y + box_.h
        << "' text-anchor='end' font-size='9'>" << num(y_.lo) << "</text>\n";
    os_ << "<text x='" << box_.x - 4 << "' y='" << box_.y + 9
        << "' text-anchor='end' font-size='9'>" << num(y_.hi) << "</text>\n";
  }

  std::ostringstream& os_;
  Box box_;
  Axis x_, y_;
};

}  // namespace

std::string fluct_svg(const fluct::TimeTrace& trace, const fluct::TraceSummary& summary,
                      const fluct::AllanResult& allan, const fluct::PsdResult& psd,
                      const fluct::ReferenceLines& lines) {
  std::ostringstream os;
  const double width = 1260, height = 380;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
     << "' font-family='sans-serif'>\n<rect width='100%' height='100%' fill='white'/>\n";

  // (a) trace against time in hours, histogram alongside.
  {
    std::vector<double> hours(trace.values.size());
    for (std::size_t i = 0; i < hours.size(); ++i) hours[i] = i * trace.tau0_s / 3600.0;
    auto values = trace.values;
    Axis x = fit_axis({&hours}, false);
    Axis y = fit_axis({&values}, false);
    Panel p(os, {70, 40, 250, 280}, x, y, "(a) " + trace.label, "time (h)", "value");
    p.markers(hours, values);

    const auto& h = summary.histogram;
    std::vector<double> counts(h.counts.begin(), h.counts.end());
    std::vector<double> zero{0.0};
    Axis hx = fit_axis({&zero, &counts}, false);
    Panel hp(os, {340, 40, 80, 280}, {h.edges.front(), h.edges.back() > h.edges.front() ? h.edges.back() : h.edges.front() + 1, false},
             hx, "histogram", "value", "count");
    for (std::size_t b = 0; b < h.counts.size(); ++b) hp.bar(h.edges[b], h.edges[b + 1], counts[b]);
  }

  // (b) Allan deviation.
  {
    auto taus = allan.taus;
    auto adev = allan.adev;
    auto white = lines.white_adev;
    Axis x = fit_axis({&taus}, true);
    Axis y = fit_axis({&adev, &white}, true);
    Panel p(os, {500, 40, 330, 280}, x, y, "(b) overlapping Allan deviation", "tau (s)", "ADEV");
    p.polyline(taus, white, "stroke='gray' stroke-dasharray='5,4'");
    p.polyline(taus, adev, "stroke='#1f77b4' stroke-width='1.5'");
  }

  // (c) Welch PSD, DC bin dropped.
  {
    std::vector<double> f(psd.freqs.begin() + 1, psd.freqs.end());
    std::vector<double> s(psd.psd.begin() + 1, psd.psd.end());
    std::vector<double> pink(lines.one_over_f.begin() + 1, lines.one_over_f.end());
    std::vector<double> white(lines.white_psd.begin() + 1, lines.white_psd.end());
    Axis x = fit_axis({&f}, true);
    Axis y = fit_axis({&s, &white}, true);
    Panel p(os, {900, 40, 330, 280}, x, y, "(c) Welch PSD", "frequency (Hz)", "PSD");
    p.polyline(f, white, "stroke='gray' stroke-dasharray='5,4'");
    p.polyline(f, pink, "stroke='#d62728' stroke-dasharray='2,3'");
    p.polyline(f, s, "stroke='#1f77b4' stroke-width='1.5'");
  }

  os << "</svg>\n";
  return os.str();
}

}  // namespace jjtrench::io
