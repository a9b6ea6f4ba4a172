#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "qobs/sweep.hpp"
#include "qobs/thermo.hpp"

namespace qobs {

/// CSV columns in schema order.
inline constexpr std::array<std::string_view, 14> kCsvColumns{
    "gamma_D", "kdT",    "j_p_up", "j_h_up", "j_h_down", "Qdot_H",   "Qdot_C",
    "Qdot_D",  "Phi_H", "Phi_C",  "P_prod", "S_vn",     "residual", "min_eig"};

/// Value of a named CSV column; nullopt for unknown names.
std::optional<double> column_value(const ObservablesRecord& record, std::string_view column);

bool is_column(std::string_view column);

/// Header plus one row per record, shortest round-trip decimal formatting.
/// Failed rows (keep-going sweeps) keep their coordinates and write nan elsewhere.
void write_csv(const SweepResult& result, std::ostream& out);
void write_csv(const SweepResult& result, const std::filesystem::path& path);

/// Parses a file written by write_csv. Throws std::runtime_error on a
/// malformed header or row.
std::vector<ObservablesRecord> read_csv(std::istream& in);

}  // namespace qobs
