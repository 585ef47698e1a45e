#include "isothermic/artifacts.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "isothermic/error.hpp"

namespace isothermic {

namespace fs = std::filesystem;

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ArtifactError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw ArtifactError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

Json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("missing artifact " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ArtifactError(path.string() + ": " + e.what());
  }
}

namespace {

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

std::vector<Vec> sample_values(const Chart& chart, Execution exec) {
  return map_indices<Vec>(chart.box.size(), exec, [&](std::size_t k) { return chart.map(chart.box.point(k)); });
}

}  // namespace

Json chart_samples(const Chart& chart, bool jets, Execution exec) {
  const auto x = sample_values(chart, exec);
  Json u = Json::array(), xs = Json::array();
  for (std::size_t k = 0; k < x.size(); ++k) {
    u.push_back(to_std(chart.box.point(k)));
    xs.push_back(to_std(x[k]));
  }
  Json out{{"u", u}, {"x", xs}};
  if (jets) {
    const auto d = map_indices<Mat>(chart.box.size(), exec, [&](std::size_t k) {
      const TVec j = chart.map.jet(chart.box.point(k), 1);
      Mat m(chart.ambient_dim(), chart.dim());
      for (int i = 0; i < chart.dim(); ++i) m.col(i) = values(diff(j, i));
      return m;
    });
    Json dx = Json::array();
    for (const auto& m : d) {
      Json cols = Json::array();
      for (int i = 0; i < m.cols(); ++i) cols.push_back(to_std(m.col(i)));
      dx.push_back(cols);
    }
    out["dx"] = dx;
  }
  return out;
}

Json chart_artifact(const Chart& chart, const Json& construction, bool jets, Execution exec) {
  Json j;
  j["format"] = "isothermic-chart";
  j["version"] = kArtifactVersion;
  j["label"] = chart.label;
  j["n"] = chart.dim();
  j["N"] = chart.ambient_dim();
  j["ambient"] = chart.ambient == Ambient::euclidean ? "euclidean" : "lorentz";
  j["box"] = {{"lo", to_std(chart.box.lo)}, {"hi", to_std(chart.box.hi)}, {"counts", chart.box.counts}};
  if (chart.net) j["net"] = chart.net->blocks;
  j["construction"] = construction;
  j["samples"] = chart_samples(chart, jets, exec);
  return j;
}

std::string obj_mesh(const Chart& chart, Execution exec) {
  if (chart.dim() != 2 || chart.ambient_dim() != 3)
    throw DimensionMismatch("OBJ export needs a surface in R^3, got n = " + std::to_string(chart.dim()) +
                            ", N = " + std::to_string(chart.ambient_dim()));
  const auto x = sample_values(chart, exec);
  const int rows = chart.box.counts[0], cols = chart.box.counts[1];
  std::ostringstream out;
  out.precision(17);
  out << "# " << chart.label << "\n";
  for (const Vec& p : x) out << "v " << p(0) << ' ' << p(1) << ' ' << p(2) << "\n";
  // OBJ indices are 1-based; the last axis varies fastest.
  auto id = [cols](int i, int j) { return i * cols + j + 1; };
  for (int i = 0; i + 1 < rows; ++i)
    for (int j = 0; j + 1 < cols; ++j) {
      out << "f " << id(i, j) << ' ' << id(i + 1, j) << ' ' << id(i + 1, j + 1) << "\n";
      out << "f " << id(i, j) << ' ' << id(i + 1, j + 1) << ' ' << id(i, j + 1) << "\n";
    }
  return out.str();
}

std::string csv_points(const Chart& chart, Execution exec) {
  const auto x = sample_values(chart, exec);
  std::ostringstream out;
  out.precision(17);
  for (int i = 0; i < chart.dim(); ++i) out << (i ? "," : "") << "u" << i + 1;
  for (int a = 0; a < chart.ambient_dim(); ++a) out << ",x" << a + 1;
  out << "\n";
  for (std::size_t k = 0; k < x.size(); ++k) {
    const Vec u = chart.box.point(k);
    for (int i = 0; i < u.size(); ++i) out << (i ? "," : "") << u(i);
    for (int a = 0; a < x[k].size(); ++a) out << ',' << x[k](a);
    out << "\n";
  }
  return out.str();
}

}  // namespace isothermic
