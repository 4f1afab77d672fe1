#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace chemo::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool markers_only = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  int width = 640;
  int height = 420;
};

/// Minimal line/scatter chart with axes, tick labels and a legend.
std::string render(const PlotSpec& spec, const std::vector<Series>& series);
void write(const std::filesystem::path& path, const PlotSpec& spec,
           const std::vector<Series>& series);

}  // namespace chemo::svg
