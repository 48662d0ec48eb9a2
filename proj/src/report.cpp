#include "kfp/report.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace kfp {

namespace {

constexpr char kMagic[8] = {'K', 'F', 'P', 'F', 'L', 'D', '1', '\n'};

void write_u32(std::ofstream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::ifstream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json to_json(const SolveReport& r) {
  return {{"algebraic_residual", r.algebraic_residual},
          {"weak_residual", r.weak_residual},
          {"w_norm", r.w_norm},
          {"energy_ratio", r.energy_ratio},
          {"iterations", r.iterations},
          {"wall_time_s", r.wall_time_s},
          {"unknowns", r.unknowns}};
}

nlohmann::json to_json(const NormReport& r) {
  return {{"l2", r.l2},
          {"h1x", r.h1x},
          {"h1x_dual", r.h1x_dual},
          {"transport_dual", r.transport_dual},
          {"w_norm", r.w_norm}};
}

nlohmann::json to_json(const McEstimate& r) {
  return {{"mean", r.mean},
          {"std_error", r.std_error},
          {"lost_fraction", r.lost_fraction},
          {"resampled", r.resampled},
          {"paths", r.paths}};
}

nlohmann::json to_json(const MeasureEstimate& r) {
  return {{"masses", r.masses},
          {"lost_fraction", r.lost_fraction},
          {"resampled", r.resampled},
          {"paths", r.paths}};
}

nlohmann::json to_json(const MinimizerPair& r) {
  return {{"objective", r.objective},
          {"constraint_residual", r.constraint_residual},
          {"kkt_residual", r.kkt_residual}};
}

nlohmann::json to_json(const ConvexityReport& r) {
  return {{"ratios", r.ratios}, {"min_ratio", r.min_ratio}};
}

nlohmann::json to_json(const ExhaustionResult& r) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& st : r.steps)
    steps.push_back({{"R", st.R},
                     {"sup_difference", st.sup_difference},
                     {"sup_norm", st.sup_norm},
                     {"data_sup", st.data_sup},
                     {"report", to_json(st.report)}});
  return {{"steps", steps},
          {"differences_monotone", r.differences_monotone},
          {"max_principle_ok", r.max_principle_ok}};
}

void write_field_csv(const Grid& g, const DiscreteField& u,
                     const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_field_csv: cannot open " + path);
  for (std::size_t a = 0; a < g.m; ++a) os << "x" << a << ",";
  for (std::size_t a = 0; a < g.m; ++a) os << "y" << a << ",";
  os << "t,value\n";
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (g.cls[idx] == NodeClass::Inactive) continue;
    const Point p = g.point(idx);
    for (std::size_t a = 0; a < g.m; ++a) os << format_g17(p.X[a]) << ",";
    for (std::size_t a = 0; a < g.m; ++a) os << format_g17(p.Y[a]) << ",";
    os << format_g17(p.t) << "," << format_g17(u[idx]) << "\n";
  }
}

void write_field_binary(const Grid& g, const DiscreteField& u,
                        const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field_binary: cannot open " + path);
  os.write(kMagic, sizeof kMagic);
  write_u32(os, static_cast<std::uint32_t>(g.m));
  for (std::size_t a = 0; a < g.m; ++a)
    write_u32(os, static_cast<std::uint32_t>(g.x[a].n()));
  for (std::size_t a = 0; a < g.m; ++a)
    write_u32(os, static_cast<std::uint32_t>(g.y[a].n()));
  write_u32(os, static_cast<std::uint32_t>(g.t.n()));
  os.write(reinterpret_cast<const char*>(u.values.data()),
           static_cast<std::streamsize>(sizeof(double) * g.size()));
}

DiscreteField read_field_binary(const Grid& g, const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field_binary: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw std::runtime_error("read_field_binary: bad magic in " + path);
  if (read_u32(is) != g.m)
    throw std::runtime_error("read_field_binary: dimension mismatch");
  for (std::size_t a = 0; a < g.m; ++a)
    if (read_u32(is) != g.x[a].n())
      throw std::runtime_error("read_field_binary: x-axis count mismatch");
  for (std::size_t a = 0; a < g.m; ++a)
    if (read_u32(is) != g.y[a].n())
      throw std::runtime_error("read_field_binary: y-axis count mismatch");
  if (read_u32(is) != g.t.n())
    throw std::runtime_error("read_field_binary: t-axis count mismatch");
  DiscreteField u(g);
  is.read(reinterpret_cast<char*>(u.values.data()),
          static_cast<std::streamsize>(sizeof(double) * g.size()));
  if (!is) throw std::runtime_error("read_field_binary: truncated " + path);
  return u;
}

}  // namespace kfp
