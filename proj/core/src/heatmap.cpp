#include "qobs/heatmap.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "qobs/csv.hpp"

namespace qobs {

namespace {

std::uint8_t lerp(std::uint8_t a, std::uint8_t b, double t) {
  return static_cast<std::uint8_t>(std::lround(a + (static_cast<double>(b) - a) * t));
}

std::string hex(Rgb c) { return fmt::format("#{:02x}{:02x}{:02x}", c.r, c.g, c.b); }

}  // namespace

Rgb diverging_color(double value, double scale) {
  if (!(scale > 0.0) || !std::isfinite(value)) return kMidpoint;
  const double t = std::clamp(value / scale, -1.0, 1.0);
  const Rgb pole = t < 0.0 ? kNegativePole : kPositivePole;
  const double w = std::abs(t);
  return {lerp(kMidpoint.r, pole.r, w), lerp(kMidpoint.g, pole.g, w), lerp(kMidpoint.b, pole.b, w)};
}

double HeatmapGrid::scale() const {
  double s = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values.data()[i];
    if (std::isfinite(v)) s = std::max(s, std::abs(v));
  }
  return s;
}

HeatmapGrid heatmap_grid(const SweepResult& result, std::string_view column) {
  if (!is_column(column)) throw std::invalid_argument(fmt::format("unknown column '{}'", column));
  HeatmapGrid grid;
  grid.column = std::string(column);
  grid.gamma_values = result.grid.gamma_values;
  grid.kdT_values = result.grid.kdT_values;
  const auto nk = static_cast<Eigen::Index>(grid.kdT_values.size());
  const auto ng = static_cast<Eigen::Index>(grid.gamma_values.size());
  grid.values.resize(nk, ng);
  for (Eigen::Index i = 0; i < nk; ++i) {
    for (Eigen::Index j = 0; j < ng; ++j) {
      const auto& row = result.at(i, j);
      grid.values(i, j) = row.error ? std::numeric_limits<double>::quiet_NaN() : *column_value(row.record, column);
    }
  }
  return grid;
}

std::vector<SignChange> zero_crossings(const HeatmapGrid& grid) {
  std::vector<SignChange> out;
  const auto& v = grid.values;
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      if (j + 1 < v.cols() && v(i, j) * v(i, j + 1) < 0.0) {
        out.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), true});
      }
      if (i + 1 < v.rows() && v(i, j) * v(i + 1, j) < 0.0) {
        out.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), false});
      }
    }
  }
  return out;
}

std::string render_grid_data(const HeatmapGrid& grid) {
  std::string out;
  out += fmt::format("# column: {}\n", grid.column);
  out += "# x axis (columns): gamma_D (a.u.)\n";
  out += "# y axis (rows): k_B dT (hartree)\n";
  out += fmt::format("# color scale: diverging, centred at 0, |max| = {}\n", grid.scale());
  out += "kdT\\gamma_D";
  for (double g : grid.gamma_values) out += fmt::format(",{}", g);
  out += '\n';
  for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
    out += fmt::format("{}", grid.kdT_values[i]);
    for (Eigen::Index j = 0; j < grid.values.cols(); ++j) out += fmt::format(",{}", grid.values(i, j));
    out += '\n';
  }
  return out;
}

std::string render_svg(const HeatmapGrid& grid) {
  constexpr int cell = 24;
  constexpr int margin_left = 90;
  constexpr int margin_top = 40;
  constexpr int margin_bottom = 60;
  constexpr int legend = 110;
  const int nx = static_cast<int>(grid.values.cols());
  const int ny = static_cast<int>(grid.values.rows());
  const int width = margin_left + nx * cell + legend;
  const int height = margin_top + ny * cell + margin_bottom;
  const double scale = grid.scale();

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n",
      width, height);
  svg += fmt::format("<text x=\"{}\" y=\"20\" font-size=\"14\">{}</text>\n", margin_left, grid.column);
  // Row 0 (kdT = 0) at the bottom.
  auto cell_x = [&](int j) { return margin_left + j * cell; };
  auto cell_y = [&](int i) { return margin_top + (ny - 1 - i) * cell; };
  for (int i = 0; i < ny; ++i) {
    for (int j = 0; j < nx; ++j) {
      svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n", cell_x(j), cell_y(i),
                         cell, cell, hex(diverging_color(grid.values(i, j), scale)));
    }
  }
  for (const auto& z : zero_crossings(grid)) {
    const int i = static_cast<int>(z.kdT_index);
    const int j = static_cast<int>(z.gamma_index);
    if (z.along_gamma) {
      svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\" stroke-width=\"2\"/>\n",
                         cell_x(j + 1), cell_y(i), cell_y(i) + cell);
    } else {
      svg += fmt::format("<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"black\" stroke-width=\"2\"/>\n",
                         cell_x(j), cell_x(j) + cell, cell_y(i));
    }
  }
  const int axis_y = margin_top + ny * cell;
  if (nx > 0) {
    svg += fmt::format("<text x=\"{}\" y=\"{}\">{:.3g}</text>\n", cell_x(0), axis_y + 15, grid.gamma_values.front());
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.3g}</text>\n", cell_x(nx), axis_y + 15,
                       grid.gamma_values.back());
  }
  if (ny > 0) {
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.3g}</text>\n", margin_left - 4, axis_y,
                       grid.kdT_values.front());
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.3g}</text>\n", margin_left - 4,
                       margin_top + 12, grid.kdT_values.back());
  }
  svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">gamma_D (a.u.)</text>\n",
                     margin_left + nx * cell / 2, axis_y + 40);
  svg += fmt::format(
      "<text x=\"20\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0})\">k_B dT (a.u.)</text>\n",
      margin_top + ny * cell / 2);
  const int lx = margin_left + nx * cell + 20;
  for (int k = 0; k <= 20; ++k) {
    const double v = scale * (1.0 - k / 10.0);
    svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"16\" height=\"{}\" fill=\"{}\"/>\n", lx,
                       margin_top + k * (ny * cell) / 21, (ny * cell) / 21 + 1, hex(diverging_color(v, scale)));
  }
  svg += fmt::format("<text x=\"{}\" y=\"{}\">{:+.2e}</text>\n", lx + 20, margin_top + 10, scale);
  svg += fmt::format("<text x=\"{}\" y=\"{}\">0</text>\n", lx + 20, margin_top + ny * cell / 2 + 4);
  svg += fmt::format("<text x=\"{}\" y=\"{}\">{:+.2e}</text>\n", lx + 20, margin_top + ny * cell, -scale);
  svg += "</svg>\n";
  return svg;
}

void emit_heatmap(const SweepResult& result, std::string_view column, const std::filesystem::path& path) {
  const HeatmapGrid grid = heatmap_grid(result, column);
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  out << (path.extension() == ".svg" ? render_svg(grid) : render_grid_data(grid));
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace qobs
