#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sgpipe::cli {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartLabels {
  std::string title;
  std::string x;
  std::string y;
  bool log_x = false;
};

// Static line chart with markers, axes, ticks and a legend.
std::string line_chart(const ChartLabels& labels, const std::vector<Series>& series);

// Filled colour map of values(i, k) on the polar grid (r_i, theta_k) of the unit disk.
std::string polar_map(const std::string& title, const std::vector<double>& r, const std::vector<double>& theta,
                      const Eigen::MatrixXd& values);

void write_file(const std::string& path, const std::string& text);

}  // namespace sgpipe::cli
