#include "tpp/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "tpp/errors.hpp"

namespace tpp {

namespace {

constexpr int kWidth = 960;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 28;
constexpr int kMarginBottom = 46;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void open_svg(std::string& svg, int width, int height) {
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
  svg += std::to_string(width);
  svg += "\" height=\"";
  svg += std::to_string(height);
  svg += "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void add_line(std::string& svg, double x1, double y1, double x2, double y2,
              const char* color, double width = 1.0, bool dashed = false) {
  svg += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" +
         num(x2) + "\" y2=\"" + num(y2) + "\" stroke=\"" + color +
         "\" stroke-width=\"" + num(width) + "\"";
  if (dashed) svg += " stroke-dasharray=\"6 4\"";
  svg += "/>\n";
}

void add_text(std::string& svg, double x, double y, const std::string& text,
              const char* anchor = "start", const char* color = "#333") {
  svg += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" +
         std::string(anchor) + "\" fill=\"" + color + "\">" + text +
         "</text>\n";
}

void add_polyline(std::string& svg, const std::vector<double>& xs,
                  const std::vector<double>& ys, const char* color,
                  bool dashed = false) {
  svg += "<polyline fill=\"none\" stroke=\"";
  svg += color;
  svg += "\" stroke-width=\"1.4\"";
  if (dashed) svg += " stroke-dasharray=\"6 4\"";
  svg += " points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    svg += num(xs[i]);
    svg += ',';
    svg += num(ys[i]);
    svg += ' ';
  }
  svg += "\"/>\n";
}

void write_svg(const std::filesystem::path& path, const std::string& svg) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open plot file: " + path.string());
  out << svg;
  if (!out) throw ConfigError("write to plot file failed: " + path.string());
}

} // namespace

void write_loss_svg(const std::filesystem::path& path,
                    const std::vector<HistoryRecord>& history) {
  const int height = 540;
  std::string svg;
  open_svg(svg, kWidth, height);
  if (history.empty()) {
    add_text(svg, kWidth / 2.0, height / 2.0, "empty history", "middle");
    svg += "</svg>\n";
    write_svg(path, svg);
    return;
  }

  const double x_max_iter = static_cast<double>(history.back().internal_iter);
  const double floor_val = 1e-30;
  double lo = 300.0, hi = -300.0;
  for (const auto& rec : history) {
    for (double v : {rec.l1, rec.l2, rec.sum}) {
      if (!std::isfinite(v)) continue;
      const double lg = std::log10(std::max(v, floor_val));
      lo = std::min(lo, lg);
      hi = std::max(hi, lg);
    }
  }
  if (lo > hi) {
    lo = -1.0;
    hi = 1.0;
  }
  lo = std::floor(lo);
  hi = std::ceil(hi);
  if (hi - lo < 1.0) hi = lo + 1.0;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = height - kMarginTop - kMarginBottom;
  const auto x_of = [&](double iter) {
    return kMarginLeft + plot_w * (iter - 1.0) / std::max(x_max_iter - 1.0, 1.0);
  };
  const auto y_of = [&](double value) {
    const double lg = std::log10(std::max(value, floor_val));
    return kMarginTop + plot_h * (hi - lg) / (hi - lo);
  };

  const int decades = static_cast<int>(hi - lo);
  const int decade_step = std::max(1, decades / 8);
  for (int d = 0; d <= decades; d += decade_step) {
    const double lg = lo + d;
    const double y = kMarginTop + plot_h * (hi - lg) / (hi - lo);
    add_line(svg, kMarginLeft, y, kWidth - kMarginRight, y, "#ddd");
    add_text(svg, kMarginLeft - 8, y + 4, "1e" + label(lg), "end");
  }
  for (int i = 0; i <= 4; ++i) {
    const double iter = 1.0 + (x_max_iter - 1.0) * i / 4.0;
    const double x = x_of(iter);
    add_line(svg, x, kMarginTop, x, height - kMarginBottom, "#eee");
    add_text(svg, x, height - kMarginBottom + 18, label(std::round(iter)),
             "middle");
  }
  add_line(svg, kMarginLeft, kMarginTop, kMarginLeft, height - kMarginBottom,
           "#333");
  add_line(svg, kMarginLeft, height - kMarginBottom, kWidth - kMarginRight,
           height - kMarginBottom, "#333");
  add_text(svg, kMarginLeft + plot_w / 2.0, height - 10, "internal iteration",
           "middle");

  const std::size_t stride = std::max<std::size_t>(1, history.size() / 2000);
  std::vector<double> xs, y1, y2, ys;
  for (std::size_t i = 0; i < history.size(); i += stride) {
    const auto& rec = history[i];
    xs.push_back(x_of(static_cast<double>(rec.internal_iter)));
    y1.push_back(y_of(rec.l1));
    y2.push_back(y_of(rec.l2));
    ys.push_back(y_of(rec.sum));
  }
  add_polyline(svg, xs, y1, "#d62728");
  add_polyline(svg, xs, y2, "#1f77b4");
  add_polyline(svg, xs, ys, "#2ca02c");

  const double lx = kWidth - kMarginRight - 150;
  add_line(svg, lx, kMarginTop + 8, lx + 28, kMarginTop + 8, "#d62728", 2.0);
  add_text(svg, lx + 34, kMarginTop + 12, "L1");
  add_line(svg, lx, kMarginTop + 26, lx + 28, kMarginTop + 26, "#1f77b4", 2.0);
  add_text(svg, lx + 34, kMarginTop + 30, "L2");
  add_line(svg, lx, kMarginTop + 44, lx + 28, kMarginTop + 44, "#2ca02c", 2.0);
  add_text(svg, lx + 34, kMarginTop + 48, "L1 + L2");

  svg += "</svg>\n";
  write_svg(path, svg);
}

void write_slices_svg(const std::filesystem::path& path,
                      const Problem& problem,
                      const std::function<double(double, double)>& predictor,
                      int grid_points) {
  if (grid_points < 2) throw ConfigError("grid_points must be >= 2");
  if (!predictor) throw ConfigError("predictor required");
  const int panel_h = 250;
  const int n_panels = static_cast<int>(problem.report_slices.size());
  const int height = n_panels * panel_h + kMarginBottom;
  std::string svg;
  open_svg(svg, kWidth, height);

  const Domain& dom = problem.domain;
  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  for (int p = 0; p < n_panels; ++p) {
    const double t = problem.report_slices[p];
    const double top = p * panel_h + kMarginTop;
    const double plot_h = panel_h - kMarginTop - 24;

    std::vector<double> xs(grid_points), pred(grid_points), ref(grid_points);
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < grid_points; ++i) {
      const double x =
          dom.x_min + (dom.x_max - dom.x_min) * i / (grid_points - 1);
      xs[i] = x;
      pred[i] = predictor(t, x);
      ref[i] = problem.reference(t, x);
      lo = std::min({lo, pred[i], ref[i]});
      hi = std::max({hi, pred[i], ref[i]});
    }
    const double pad = std::max((hi - lo) * 0.08, 1e-6);
    lo -= pad;
    hi += pad;

    const auto px = [&](double x) {
      return kMarginLeft + plot_w * (x - dom.x_min) / (dom.x_max - dom.x_min);
    };
    const auto py = [&](double v) { return top + plot_h * (hi - v) / (hi - lo); };

    add_line(svg, kMarginLeft, top, kMarginLeft, top + plot_h, "#333");
    add_line(svg, kMarginLeft, top + plot_h, kWidth - kMarginRight,
             top + plot_h, "#333");
    if (lo < 0.0 && hi > 0.0)
      add_line(svg, kMarginLeft, py(0.0), kWidth - kMarginRight, py(0.0),
               "#ddd");
    add_text(svg, kMarginLeft - 8, py(hi - pad) + 4, label(hi - pad), "end");
    add_text(svg, kMarginLeft - 8, py(lo + pad) + 4, label(lo + pad), "end");
    add_text(svg, kMarginLeft, top + plot_h + 18, label(dom.x_min), "middle");
    add_text(svg, kWidth - kMarginRight, top + plot_h + 18, label(dom.x_max),
             "middle");
    add_text(svg, kMarginLeft + 10, top + 6, "t = " + label(t));

    std::vector<double> pxs(grid_points), ppred(grid_points), pref(grid_points);
    for (int i = 0; i < grid_points; ++i) {
      pxs[i] = px(xs[i]);
      ppred[i] = py(pred[i]);
      pref[i] = py(ref[i]);
    }
    add_polyline(svg, pxs, pref, "#555", true);
    add_polyline(svg, pxs, ppred, "#d62728");
  }

  const double lx = kWidth - kMarginRight - 210;
  add_line(svg, lx, 14, lx + 28, 14, "#d62728", 2.0);
  add_text(svg, lx + 34, 18, "predicted");
  add_line(svg, lx + 110, 14, lx + 138, 14, "#555", 2.0, true);
  add_text(svg, lx + 144, 18, "reference");

  svg += "</svg>\n";
  write_svg(path, svg);
}

} // namespace tpp
