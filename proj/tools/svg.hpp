#pragma once

#include <string>
#include <vector>

namespace einlab::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Standalone SVG with one stacked panel per series and a dashed y = 0 line.
/// `comment` is embedded verbatim in an XML comment.
std::string stacked_plot(const std::string& title, const std::string& xlabel, const std::vector<Series>& panels,
                         const std::string& comment);

}  // namespace einlab::cli
