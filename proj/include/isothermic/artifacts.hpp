#pragma once

// On-disk formats: chart artifacts (JSON header plus sample arrays), OBJ
// meshes, CSV point clouds. All writes go through a temp file and a rename.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "isothermic/chart.hpp"
#include "isothermic/parallel.hpp"

namespace isothermic {

using Json = nlohmann::json;

inline constexpr int kArtifactVersion = 1;

std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

void write_atomic(const std::filesystem::path& path, const std::string& content);
// Throws ArtifactError when the file is missing or not valid JSON.
Json read_json(const std::filesystem::path& path);

// Sampled values (and first derivatives with `jets`) over the chart box, row-major.
Json chart_samples(const Chart& chart, bool jets, Execution exec = Execution::parallel);

// Header with format, version, label and dimensions, plus the construction that
// rebuilds the chart.
Json chart_artifact(const Chart& chart, const Json& construction, bool jets, Execution exec = Execution::parallel);

// Vertices row-major over a 2D grid, each quad split along its (i,j)-(i+1,j+1)
// diagonal. Throws DimensionMismatch unless n = 2 and N = 3.
std::string obj_mesh(const Chart& chart, Execution exec = Execution::parallel);
// Header u1..un,x1..xN then one row per sample.
std::string csv_points(const Chart& chart, Execution exec = Execution::parallel);

}  // namespace isothermic
