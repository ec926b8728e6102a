#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace einlab::cli {

namespace {

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
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

// "--" may not appear inside an XML comment
std::string comment_safe(std::string s) {
  for (std::size_t i = s.find("--"); i != std::string::npos; i = s.find("--", i)) s.replace(i, 2, "- -");
  return s;
}

}  // namespace

std::string stacked_plot(const std::string& title, const std::string& xlabel, const std::vector<Series>& panels,
                         const std::string& comment) {
  const double width = 760.0, left = 80.0, right = 20.0, top = 40.0, panel_h = 200.0, gap = 50.0;
  const double height = top + panels.size() * (panel_h + gap) + 10.0;
  const double plot_w = width - left - right;
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<!--\n" << comment_safe(comment) << "\n-->\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width, "%.0f") << "\" height=\""
    << fmt(height, "%.0f") << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << fmt(width / 2, "%.0f") << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << escape(title) << "</text>\n";

  for (std::size_t pi = 0; pi < panels.size(); ++pi) {
    const auto& s = panels[pi];
    const double y0 = top + pi * (panel_h + gap);
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) keep.push_back(i);
    if (!keep.empty()) {
      xmin = xmax = s.x[keep[0]];
      ymin = ymax = s.y[keep[0]];
      for (auto i : keep) {
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
    ymin = std::min(ymin, 0.0);
    ymax = std::max(ymax, 0.0);
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return y0 + panel_h - (y - ymin) / (ymax - ymin) * panel_h; };

    o << "<g>\n<rect x=\"" << fmt(left) << "\" y=\"" << fmt(y0) << "\" width=\"" << fmt(plot_w) << "\" height=\""
      << fmt(panel_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
      const double xv = xmin + t * (xmax - xmin) / 4;
      const double yv = ymin + t * (ymax - ymin) / 4;
      o << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(y0 + panel_h + 14) << "\" text-anchor=\"middle\">"
        << fmt(xv, "%.4g") << "</text>\n";
      o << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(py(yv) + 4) << "\" text-anchor=\"end\">"
        << fmt(yv, "%.4g") << "</text>\n";
    }
    o << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(py(0)) << "\" x2=\"" << fmt(left + plot_w) << "\" y2=\""
      << fmt(py(0)) << "\" stroke=\"#c00\" stroke-dasharray=\"4 3\"/>\n";
    o << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < keep.size(); ++k) {
      if (k) o << ' ';
      o << fmt(px(s.x[keep[k]])) << ',' << fmt(py(s.y[keep[k]]));
    }
    o << "\"/>\n";
    o << "<text x=\"" << fmt(left + 6) << "\" y=\"" << fmt(y0 + 14) << "\">" << escape(s.label) << "</text>\n";
    o << "<text x=\"" << fmt(left + plot_w / 2) << "\" y=\"" << fmt(y0 + panel_h + 30)
      << "\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n</g>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace einlab::cli
