#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qobs/sweep.hpp"

namespace qobs {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kNegativePole{33, 102, 172};
inline constexpr Rgb kMidpoint{247, 247, 247};
inline constexpr Rgb kPositivePole{178, 24, 43};

/// Diverging scale centred at zero: -scale maps to kNegativePole, 0 to
/// kMidpoint, +scale to kPositivePole. A zero scale maps everything to the
/// midpoint. Values outside [-scale, scale] saturate.
Rgb diverging_color(double value, double scale);

/// One column of a sweep on the (kdT, gamma_D) grid. values(i, j) belongs to
/// kdT_values[i], gamma_values[j]. Failed rows are NaN.
struct HeatmapGrid {
  std::string column;
  std::vector<double> gamma_values;
  std::vector<double> kdT_values;
  Eigen::MatrixXd values;

  /// max |value| over finite cells.
  [[nodiscard]] double scale() const;
};

/// Throws std::invalid_argument for a column outside the CSV schema.
HeatmapGrid heatmap_grid(const SweepResult& result, std::string_view column);

struct SignChange {
  std::size_t kdT_index = 0;
  std::size_t gamma_index = 0;
  bool along_gamma = true;  // neighbour is (kdT_index, gamma_index + 1), else (kdT_index + 1, gamma_index)
};

/// Neighbouring cell pairs whose values have strictly opposite signs.
std::vector<SignChange> zero_crossings(const HeatmapGrid& grid);

/// Plain-text grid: comment lines describing the axes, then a header row of
/// gamma_D values and one row per kdT value.
std::string render_grid_data(const HeatmapGrid& grid);

/// SVG rendering with labelled axes and the zero-crossing contour drawn on cell edges.
std::string render_svg(const HeatmapGrid& grid);

/// Writes an SVG when `path` ends in .svg and the plain grid otherwise.
void emit_heatmap(const SweepResult& result, std::string_view column, const std::filesystem::path& path);

}  // namespace qobs
