#include "satnls/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include "satnls/error.hpp"

namespace satnls {

namespace {

nlohmann::ordered_json num(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::vector<double> Table::column(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] != name) continue;
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.at(c));
    return out;
  }
  throw Error("table has no column '" + name + "'");
}

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  Table t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto p = line.find_first_not_of("# ");
      t.comments.push_back(p == std::string::npos ? std::string() : line.substr(p));
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (t.columns.empty()) {
      while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (row.size() != t.columns.size()) throw Error("ragged row in " + path);
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_fields_csv(const std::string& path, const Grid& grid, std::span<const double> u,
                      std::span<const double> xi, const std::string& header_comment) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!fp) throw Error("cannot open " + path + " for writing");
  if (!header_comment.empty()) std::fprintf(fp.get(), "# %s\n", header_comment.c_str());
  std::fprintf(fp.get(), "x,u,xi\n");
  for (std::size_t j = 0; j < u.size(); ++j) std::fprintf(fp.get(), "%.17g,%.17g,%.17g\n", grid.x(j), u[j], xi[j]);
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return nlohmann::json::parse(in);
}

nlohmann::ordered_json to_json(const AuditReport& report) {
  nlohmann::ordered_json j;
  j["all_pass"] = report.all_pass();
  auto& arr = j["assumptions"] = nlohmann::ordered_json::array();
  for (const auto& e : report.entries) {
    arr.push_back({{"assumption", e.assumption},
                   {"description", e.description},
                   {"pass", e.pass},
                   {"worst_value", num(e.worst_value)},
                   {"worst_x", num(e.worst_x)},
                   {"worst_s", num(e.worst_s)},
                   {"detail", e.detail}});
  }
  return j;
}

nlohmann::ordered_json to_json(const SpectrumReport& r) {
  nlohmann::ordered_json j;
  j["eigenvalues"] = r.eigenvalues;
  j["morse_index"] = r.morse_index;
  j["kernel_dimension"] = r.kernel_candidates.size();
  j["residuals"] = r.residuals;
  j["essential_threshold"] = r.essential_threshold;
  j["kernel_tol"] = r.kernel_tol;
  return j;
}

nlohmann::ordered_json to_json(const StandingWave& w) {
  nlohmann::ordered_json j;
  j["lambda"] = w.lambda;
  j["residual"] = w.residual_inf;
  j["decay_ratio"] = w.decay_ratio;
  j["mass"] = w.mass;
  j["iterations"] = w.iterations;
  return j;
}

}  // namespace satnls
