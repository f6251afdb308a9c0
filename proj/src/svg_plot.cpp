#include "mudag/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "mudag/trace.hpp"

namespace fs = std::filesystem;

namespace mudag {

namespace {

const char* const kPalette[8] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                 "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string gnum(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '&')
      o += "&amp;";
    else if (c == '<')
      o += "&lt;";
    else if (c == '>')
      o += "&gt;";
    else
      o += c;
  }
  return o;
}

}  // namespace

std::string render_log_plot(const std::string& title,
                            const std::string& x_label,
                            const std::vector<PlotSeries>& series) {
  // Clean per-series data, establish ranges.
  struct Clean {
    std::string label;
    std::vector<double> x, ly;  // ly = log10(y)
  };
  std::vector<Clean> data;
  double xmin = 0.0, xmax = 0.0, lmin = 0.0, lmax = 0.0;
  bool any = false;
  for (const PlotSeries& s : series) {
    Clean c;
    c.label = s.label;
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || s.y[i] <= 0.0)
        continue;
      const double ly = std::log10(s.y[i]);
      if (!any) {
        xmin = xmax = s.x[i];
        lmin = lmax = ly;
        any = true;
      } else {
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        lmin = std::min(lmin, ly);
        lmax = std::max(lmax, ly);
      }
      c.x.push_back(s.x[i]);
      c.ly.push_back(ly);
    }
    if (!c.x.empty()) data.push_back(std::move(c));
  }
  if (!any) throw std::runtime_error("plot: nothing to plot");
  std::sort(data.begin(), data.end(),
            [](const Clean& a, const Clean& b) { return a.label < b.label; });

  if (xmax <= xmin) xmax = xmin + 1.0;
  double dlo = std::floor(lmin), dhi = std::ceil(lmax);
  if (dhi <= dlo) dhi = dlo + 1.0;

  const double px0 = 70.0, px1 = 540.0, py0 = 40.0, py1 = 430.0;
  auto X = [&](double x) {
    return px0 + (x - xmin) / (xmax - xmin) * (px1 - px0);
  };
  auto Y = [&](double ly) {
    return py1 - (ly - dlo) / (dhi - dlo) * (py1 - py0);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" "
         "height=\"480\" viewBox=\"0 0 720 480\">\n";
  svg += "<rect width=\"720\" height=\"480\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"305\" y=\"22\" text-anchor=\"middle\" font-family=\""
         "monospace\" font-size=\"15\">" +
         escape(title) + "</text>\n";

  // Decade gridlines and labels, thinned when the range is wide.
  const int decades = int(dhi - dlo);
  const int step = std::max(1, (decades + 11) / 12);
  for (int d = 0; d <= decades; d += step) {
    const double ly = dlo + d;
    const double y = Y(ly);
    svg += "<line x1=\"" + num(px0) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(px1) + "\" y2=\"" + num(y) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + num(px0 - 6.0) + "\" y=\"" + num(y + 4.0) +
           "\" text-anchor=\"end\" font-family=\"monospace\" "
           "font-size=\"11\">1e" +
           gnum(ly) + "</text>\n";
  }

  // Five linear x divisions.
  for (int i = 0; i <= 5; ++i) {
    const double x = xmin + (xmax - xmin) * i / 5.0;
    const double px = X(x);
    svg += "<line x1=\"" + num(px) + "\" y1=\"" + num(py1) + "\" x2=\"" +
           num(px) + "\" y2=\"" + num(py1 + 5.0) +
           "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + num(px) + "\" y=\"" + num(py1 + 20.0) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" "
           "font-size=\"11\">" +
           gnum(x) + "</text>\n";
  }

  svg += "<rect x=\"" + num(px0) + "\" y=\"" + num(py0) + "\" width=\"" +
         num(px1 - px0) + "\" height=\"" + num(py1 - py0) +
         "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  svg += "<text x=\"305\" y=\"468\" text-anchor=\"middle\" font-family=\""
         "monospace\" font-size=\"13\">" +
         escape(x_label) + "</text>\n";
  svg += "<text x=\"16\" y=\"240\" text-anchor=\"middle\" font-family=\""
         "monospace\" font-size=\"13\" transform=\"rotate(-90 16 240)\">"
         "f-gap</text>\n";

  for (std::size_t s = 0; s < data.size(); ++s) {
    const char* color = kPalette[s % 8];
    std::string pts;
    for (std::size_t i = 0; i < data[s].x.size(); ++i) {
      pts += num(X(data[s].x[i]));
      pts += ',';
      pts += num(Y(data[s].ly[i]));
      pts += ' ';
    }
    svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" +
           color + "\" stroke-width=\"1.5\"/>\n";
    const double ly = 50.0 + 20.0 * double(s);
    svg += "<line x1=\"552\" y1=\"" + num(ly - 4.0) + "\" x2=\"572\" y2=\"" +
           num(ly - 4.0) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"578\" y=\"" + num(ly) +
           "\" font-family=\"monospace\" font-size=\"12\">" +
           escape(data[s].label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string emit_plot(const std::string& dir, const std::string& axis) {
  if (axis != "t" && axis != "grad_evals" && axis != "comm_rounds")
    throw std::runtime_error(
        "plot: axis must be t, grad_evals or comm_rounds, got '" + axis +
        "'");

  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const fs::path& p = e.path();
    if (p.extension() != ".csv" || p.filename() == "summary.csv") continue;
    files.push_back(p);
  }
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw std::runtime_error("plot: no trace CSVs in '" + dir + "'");

  std::vector<PlotSeries> series;
  for (const fs::path& f : files) {
    const std::vector<TraceRecord> trace = read_trace_csv(f.string());
    PlotSeries s;
    s.label = f.stem().string();
    for (const TraceRecord& r : trace) {
      s.x.push_back(axis == "t" ? double(r.t)
                                : axis == "grad_evals" ? double(r.grad_evals)
                                                       : double(r.comm_rounds));
      s.y.push_back(r.f_gap);
    }
    series.push_back(std::move(s));
  }

  const std::string svg =
      render_log_plot("f-gap vs " + axis, axis, series);
  const fs::path out = fs::path(dir) / ("plot_" + axis + ".svg");
  std::ofstream f(out);
  if (!f) throw std::runtime_error("plot: cannot write '" + out.string() + "'");
  f << svg;
  return out.string();
}

}  // namespace mudag
