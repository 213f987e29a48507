// SPDX-License-Identifier: Apache-2.0
#include "neuronscope/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace neuronscope::svg {

namespace {

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
                                    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e",
                                    "#e6ab02", "#a6761d"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Fixed-precision numbers keep the output byte-stable across runs.
std::string num(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", value);
  return buffer;
}

struct Frame {
  double width = 800;
  double height = 420;
  double left = 60;
  double right = 200;
  double top = 40;
  double bottom = 50;

  double plot_w() const { return width - left - right; }
  double plot_h() const { return height - top - bottom; }
};

void open_svg(std::ostringstream& out, const Frame& f, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(f.width) << "\" height=\""
      << num(f.height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(f.width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title) << "</text>\n";
}

void axes(std::ostringstream& out, const Frame& f) {
  const double x0 = f.left;
  const double y0 = f.top + f.plot_h();
  out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(f.top) << "\" x2=\"" << num(x0)
      << "\" y2=\"" << num(y0) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0 + f.plot_w())
      << "\" y2=\"" << num(y0) << "\" stroke=\"black\"/>\n";
}

void legend(std::ostringstream& out, const Frame& f, const std::vector<std::string>& names) {
  const double x = f.width - f.right + 15;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double y = f.top + 14.0 * static_cast<double>(i);
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"10\" height=\"10\" fill=\""
        << kPalette[i % kPaletteSize] << "\"/>\n";
    out << "<text x=\"" << num(x + 14) << "\" y=\"" << num(y + 9) << "\">" << escape(names[i])
        << "</text>\n";
  }
}

}  // namespace

std::string layer_histogram_chart(const LayerHistogram& histogram, SubmoduleGroup group,
                                  const std::string& title) {
  const auto& scope = histogram.scope;
  std::vector<std::size_t> subs;
  for (std::size_t s = 0; s < scope.submodules.size(); ++s) {
    if (scope.submodules[s].group == group) subs.push_back(s);
  }
  std::size_t peak = 1;
  for (std::size_t l = 0; l < scope.layers; ++l) {
    std::size_t total = 0;
    for (auto s : subs) total += histogram.count(l, s);
    peak = std::max(peak, total);
  }

  Frame f;
  std::ostringstream out;
  open_svg(out, f, title);
  axes(out, f);
  const double slot = f.plot_w() / static_cast<double>(std::max<std::size_t>(1, scope.layers));
  const double y0 = f.top + f.plot_h();
  for (std::size_t l = 0; l < scope.layers; ++l) {
    double y = y0;
    const double x = f.left + slot * static_cast<double>(l) + slot * 0.1;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      const auto c = histogram.count(l, subs[i]);
      if (c == 0) continue;
      const double h = f.plot_h() * static_cast<double>(c) / static_cast<double>(peak);
      y -= h;
      out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(slot * 0.8)
          << "\" height=\"" << num(h) << "\" fill=\"" << kPalette[i % kPaletteSize] << "\"/>\n";
    }
    out << "<text x=\"" << num(x + slot * 0.4) << "\" y=\"" << num(y0 + 14)
        << "\" text-anchor=\"middle\">" << l << "</text>\n";
  }
  out << "<text x=\"" << num(f.left - 8) << "\" y=\"" << num(f.top + 4)
      << "\" text-anchor=\"end\">" << peak << "</text>\n";
  out << "<text x=\"" << num(f.left + f.plot_w() / 2) << "\" y=\"" << num(f.height - 10)
      << "\" text-anchor=\"middle\">layer</text>\n";
  std::vector<std::string> names;
  for (auto s : subs) names.push_back(scope.submodules[s].name);
  legend(out, f, names);
  out << "</svg>\n";
  return out.str();
}

std::string magnitude_chart(std::span<const MagnitudeCurve> curves, bool deviations,
                            const std::string& title) {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t layers = 0;
  for (const auto& c : curves) {
    const auto& ys = deviations ? c.deviations : c.values;
    layers = std::max(layers, ys.size());
    for (double y : ys) {
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
  }
  if (hi - lo < 1e-12) {
    hi += 1.0;
    lo -= 1.0;
  }

  Frame f;
  std::ostringstream out;
  open_svg(out, f, title);
  axes(out, f);
  auto px = [&](std::size_t l) {
    return f.left + f.plot_w() * (layers > 1 ? static_cast<double>(l) / (layers - 1) : 0.5);
  };
  auto py = [&](double y) { return f.top + f.plot_h() * (hi - y) / (hi - lo); };

  out << "<line x1=\"" << num(f.left) << "\" y1=\"" << num(py(0.0)) << "\" x2=\""
      << num(f.left + f.plot_w()) << "\" y2=\"" << num(py(0.0))
      << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  std::vector<std::string> names;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& ys = deviations ? curves[i].deviations : curves[i].values;
    out << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << kPalette[i % kPaletteSize]
        << "\" points=\"";
    for (std::size_t l = 0; l < ys.size(); ++l) {
      out << (l ? " " : "") << num(px(l)) << ',' << num(py(ys[l]));
    }
    out << "\"/>\n";
    names.push_back(curves[i].condition.label());
  }
  out << "<text x=\"" << num(f.left - 8) << "\" y=\"" << num(py(hi) + 4)
      << "\" text-anchor=\"end\">" << num(hi) << "</text>\n";
  out << "<text x=\"" << num(f.left - 8) << "\" y=\"" << num(py(lo) + 4)
      << "\" text-anchor=\"end\">" << num(lo) << "</text>\n";
  out << "<text x=\"" << num(f.left + f.plot_w() / 2) << "\" y=\"" << num(f.height - 10)
      << "\" text-anchor=\"middle\">layer</text>\n";
  legend(out, f, names);
  out << "</svg>\n";
  return out.str();
}

std::string overlap_chart(const OverlapMatrix& matrix, const std::string& title) {
  const std::size_t rows = matrix.row_labels.size();
  const std::size_t cols = matrix.col_labels.size();
  std::size_t peak = 1;
  for (auto c : matrix.cells) peak = std::max(peak, c);

  const double cell = 48;
  const double left = 260;
  const double top = 200;
  Frame f;
  f.width = left + cell * static_cast<double>(cols) + 20;
  f.height = top + cell * static_cast<double>(rows) + 20;
  std::ostringstream out;
  open_svg(out, f, title);
  for (std::size_t c = 0; c < cols; ++c) {
    const double x = left + cell * (static_cast<double>(c) + 0.5);
    out << "<text transform=\"translate(" << num(x) << "," << num(top - 6)
        << ") rotate(-60)\">" << escape(matrix.col_labels[c]) << "</text>\n";
  }
  for (std::size_t r = 0; r < rows; ++r) {
    const double y = top + cell * static_cast<double>(r);
    out << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y + cell / 2 + 4)
        << "\" text-anchor=\"end\">" << escape(matrix.row_labels[r]) << "</text>\n";
    for (std::size_t c = 0; c < cols; ++c) {
      const double x = left + cell * static_cast<double>(c);
      const double shade = static_cast<double>(matrix.at(r, c)) / static_cast<double>(peak);
      const int level = static_cast<int>(std::lround(255.0 * (1.0 - shade)));
      char fill[16];
      std::snprintf(fill, sizeof fill, "#%02x%02xff", level, level);
      out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(cell)
          << "\" height=\"" << num(cell) << "\" fill=\"" << fill << "\" stroke=\"white\"/>\n";
      out << "<text x=\"" << num(x + cell / 2) << "\" y=\"" << num(y + cell / 2 + 4)
          << "\" text-anchor=\"middle\">" << matrix.at(r, c) << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace neuronscope::svg
