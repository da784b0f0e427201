#include "fkpp/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fkpp/errors.hpp"

namespace fkpp {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : width_(header.size()) {
  add_cells(header);
  rows_ = 0;
}

void CsvTable::add(const std::vector<double>& row) {
  std::vector<std::string> cells;
  cells.reserve(row.size());
  for (double v : row) cells.push_back(format_double(v));
  add_cells(cells);
}

void CsvTable::add_cells(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw DomainError("CSV row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].find_first_of(",\n\"") != std::string::npos) {
      std::string q = "\"";
      for (char c : cells[i]) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      text_ += (i ? "," : "") + q + "\"";
    } else {
      text_ += (i ? "," : "") + cells[i];
    }
  }
  text_ += "\n";
  ++rows_;
}

std::string CsvTable::str() const { return text_; }

ArtifactTree::ArtifactTree(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw DomainError("cannot create output directory '" + root_.string() + "': " + ec.message());
}

void ArtifactTree::write_text(const std::string& rel, const std::string& content) {
  const auto path = root_ / rel;
  std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DomainError("cannot write '" + path.string() + "'");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw DomainError("short write to '" + path.string() + "'");
  for (auto& e : entries_) {
    if (e.path == rel) {
      e = {rel, content.size(), fnv1a64(content)};
      return;
    }
  }
  entries_.push_back({rel, content.size(), fnv1a64(content)});
}

void ArtifactTree::record_existing(const std::string& rel) {
  std::ifstream f(root_ / rel, std::ios::binary);
  if (!f) throw DomainError("cannot read '" + (root_ / rel).string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  const std::string content = ss.str();
  entries_.push_back({rel, content.size(), fnv1a64(content)});
}

void ArtifactTree::write_manifest(Json header) {
  Json files = Json::array();
  for (const auto& e : entries_) files.push_back({{"path", e.path}, {"bytes", e.bytes}, {"fnv1a64", hex64(e.hash)}});
  header["files"] = files;
  const std::string text = header.dump(2) + "\n";
  std::ofstream f(root_ / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!f) throw DomainError("cannot write manifest in '" + root_.string() + "'");
  f << text;
}

CsvTable snapshots_table(const RunResult& run, const RadialGrid& grid) {
  CsvTable t({"t", "r", "u"});
  for (const auto& s : run.snapshots)
    for (std::size_t i = 0; i < s.u.size(); ++i) t.add({s.t, grid.centers[i], s.u[i]});
  return t;
}

CsvTable trajectories_table(const std::vector<LevelSetTrajectory>& trajectories) {
  CsvTable t({"omega", "t", "r"});
  for (const auto& tr : trajectories)
    for (const auto& s : tr.samples)
      t.add_cells({format_double(tr.omega), format_double(s.t), s.r ? format_double(*s.r) : std::string()});
  return t;
}

Json diagnostics_json(const RunDiagnostics& d) {
  return {{"steps", d.steps},
          {"min_dt", d.minDt},
          {"clip_events", d.clipEvents},
          {"boundary_alarm", d.boundaryAlarm},
          {"boundary_flux_integral", d.boundaryFluxIntegral},
          {"monotonicity_violation", d.monotonicityViolation},
          {"monotonicity_flag", d.monotonicityFlag}};
}

Json rate_fit_json(const RateFit& fit) {
  return {{"slope", fit.slope},
          {"intercept", fit.intercept},
          {"t_lo", fit.window.tLo},
          {"t_hi", fit.window.tHi},
          {"r_squared", fit.rSquared},
          {"slope_half_width", fit.slopeHalfWidth},
          {"samples", fit.samples}};
}

Json band_json(const BandReport& band) {
  return {{"c_band", band.Cband},
          {"first_half", band.firstHalf},
          {"second_half", band.secondHalf},
          {"t_lo", band.window.tLo},
          {"t_hi", band.window.tHi},
          {"ok", band.ok}};
}

}  // namespace fkpp
