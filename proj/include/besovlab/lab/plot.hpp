#pragma once

// Static SVG line and histogram plots of report rows.

#include <string>
#include <utility>
#include <vector>

#include "besovlab/lab/report.hpp"

namespace besovlab::lab {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
  std::vector<std::string> notes;  // printed in the upper left corner
};

std::string render_svg(const LinePlot& plot);
std::string render_histogram(const std::string& title, const std::string& x_label, const std::vector<double>& values,
                             int bins = 12);

/// divergence | trace-limit | ratio-histogram | decay
const std::vector<std::string>& plot_selectors();

/// (file name, SVG document) pairs for one selector. Throws
/// PreconditionError "empty selection" when the report has no matching rows.
std::vector<std::pair<std::string, std::string>> plot(const Report& report, const std::string& selector);

}  // namespace besovlab::lab
