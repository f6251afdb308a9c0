#pragma once

#include <string>
#include <vector>

namespace mudag {

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

// Standalone SVG, deterministic bytes for identical inputs: log10(y) against
// x, one polyline per series, decade gridlines, legend sorted by label.
// Non-finite or non-positive y values are dropped. Throws when no point
// survives.
std::string render_log_plot(const std::string& title,
                            const std::string& x_label,
                            const std::vector<PlotSeries>& series);

// Reads every trace CSV directly inside dir (summary.csv excluded), plots
// f_gap against the chosen axis column (t, grad_evals or comm_rounds),
// writes plot_<axis>.svg into dir and returns its path.
std::string emit_plot(const std::string& dir, const std::string& axis);

}  // namespace mudag
