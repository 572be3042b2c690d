#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace sgpipe::cli {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 80, kRight = 150, kTop = 40, kBottom = 60;
const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

std::string header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%g", w) + "\" height=\"" + fmt("%g", h) +
         "\" viewBox=\"0 0 " + fmt("%g", w) + " " + fmt("%g", h) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle", const char* extra = "") {
  return "<text x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", y) + "\" text-anchor=\"" + anchor + "\"" + extra +
         ">" + escape(s) + "</text>\n";
}

// Round step of 1, 2 or 5 times a power of ten giving about five ticks.
std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    step = f * mag;
    if (span / step <= 6.0) break;
  }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) out.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  return out;
}

std::string colour_scale(double v) {
  // Diverging blue-white-red for v in [-1, 1].
  v = std::clamp(v, -1.0, 1.0);
  int r, g, b;
  if (v < 0) {
    r = static_cast<int>(255 * (1 + v));
    g = static_cast<int>(255 * (1 + v));
    b = 255;
  } else {
    r = 255;
    g = static_cast<int>(255 * (1 - v));
    b = static_cast<int>(255 * (1 - v));
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string line_chart(const ChartLabels& labels, const std::vector<Series>& series) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  auto tx = [&](double x) { return labels.log_x ? std::log10(x) : x; };
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || !std::isfinite(tx(s.x[i]))) continue;
      xmin = std::min(xmin, tx(s.x[i]));
      xmax = std::max(xmax, tx(s.x[i]));
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!std::isfinite(xmin)) throw std::runtime_error("line_chart: no finite data");
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) {
    ymax += 0.5 * std::max(1.0, std::abs(ymax));
    ymin -= 0.5 * std::max(1.0, std::abs(ymin));
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (tx(x) - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::string svg = header(kWidth, kHeight);
  svg += text(kWidth / 2, 22, labels.title, "middle", " font-size=\"14\"");
  svg += "<rect x=\"" + fmt("%g", kLeft) + "\" y=\"" + fmt("%g", kTop) + "\" width=\"" + fmt("%g", pw) +
         "\" height=\"" + fmt("%g", ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(ymin, ymax)) {
    const double y = py(t);
    svg += "<line x1=\"" + fmt("%g", kLeft - 5) + "\" x2=\"" + fmt("%g", kLeft) + "\" y1=\"" + fmt("%.2f", y) +
           "\" y2=\"" + fmt("%.2f", y) + "\" stroke=\"black\"/>\n";
    svg += text(kLeft - 8, y + 4, fmt("%.6g", t), "end");
  }
  const double xlo = xmin, xhi = xmax;
  for (double t : ticks(xlo, xhi)) {
    const double x = kLeft + (t - xmin) / (xmax - xmin) * pw;
    svg += "<line x1=\"" + fmt("%.2f", x) + "\" x2=\"" + fmt("%.2f", x) + "\" y1=\"" + fmt("%g", kTop + ph) +
           "\" y2=\"" + fmt("%g", kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    svg += text(x, kTop + ph + 18, labels.log_x ? "1e" + fmt("%g", t) : fmt("%.6g", t));
  }
  svg += text(kLeft + pw / 2, kHeight - 15, labels.x);
  svg += text(18, kTop + ph / 2, labels.y, "middle",
              (" transform=\"rotate(-90 18 " + fmt("%.2f", kTop + ph / 2) + ")\"").c_str());

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kColours[k % 8];
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || !std::isfinite(tx(s.x[i]))) continue;
      points += fmt("%.2f", px(s.x[i])) + "," + fmt("%.2f", py(s.y[i])) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"" + points +
           "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || !std::isfinite(tx(s.x[i]))) continue;
      svg += "<circle cx=\"" + fmt("%.2f", px(s.x[i])) + "\" cy=\"" + fmt("%.2f", py(s.y[i])) +
             "\" r=\"2.5\" fill=\"" + colour + "\"/>\n";
    }
    const double ly = kTop + 10 + 18 * k;
    svg += "<line x1=\"" + fmt("%g", kWidth - kRight + 12) + "\" x2=\"" + fmt("%g", kWidth - kRight + 32) +
           "\" y1=\"" + fmt("%g", ly) + "\" y2=\"" + fmt("%g", ly) + "\" stroke=\"" + colour +
           "\" stroke-width=\"2\"/>\n";
    svg += text(kWidth - kRight + 38, ly + 4, s.name, "start");
  }
  svg += "</svg>\n";
  return svg;
}

std::string polar_map(const std::string& title, const std::vector<double>& r, const std::vector<double>& theta,
                      const Eigen::MatrixXd& values) {
  const double size = 420, cx = 210, cy = 230, rad = 170;
  const double vmax = std::max(values.cwiseAbs().maxCoeff(), 1e-300);
  std::string svg = header(size, size + 40);
  svg += text(cx, 24, title, "middle", " font-size=\"14\"");
  const int nr = static_cast<int>(r.size()), nt = static_cast<int>(theta.size());
  const double dtheta = 2.0 * 3.14159265358979323846 / nt;
  for (int i = 0; i < nr; ++i) {
    const double r0 = i == 0 ? 0.0 : 0.5 * (r[i - 1] + r[i]);
    const double r1 = i == nr - 1 ? r[i] : 0.5 * (r[i] + r[i + 1]);
    for (int k = 0; k < nt; ++k) {
      const double a0 = theta[k] - 0.5 * dtheta, a1 = theta[k] + 0.5 * dtheta;
      std::string pts;
      for (auto [rr, aa] : {std::pair{r0, a0}, {r1, a0}, {r1, a1}, {r0, a1}})
        pts += fmt("%.2f", cx + rad * rr * std::cos(aa)) + "," + fmt("%.2f", cy - rad * rr * std::sin(aa)) + " ";
      svg += "<polygon points=\"" + pts + "\" fill=\"" + colour_scale(values(i, k) / vmax) + "\" stroke=\"none\"/>\n";
    }
  }
  svg += "<circle cx=\"" + fmt("%g", cx) + "\" cy=\"" + fmt("%g", cy) + "\" r=\"" + fmt("%g", rad) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += text(cx, size + 30, "colour scale: +-" + fmt("%.4g", vmax) + " (red positive, blue negative)");
  svg += "</svg>\n";
  return svg;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace sgpipe::cli
