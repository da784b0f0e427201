#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fkpp/fronts.hpp"
#include "fkpp/pde_solver.hpp"

namespace fkpp {

using Json = nlohmann::ordered_json;

// 17 significant digits, '.' decimal separator, no grouping.
std::string format_double(double v);
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// Plain CSV rows; numbers go through format_double.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add(const std::vector<double>& row);
  void add_cells(const std::vector<std::string>& cells);
  std::string str() const;
  std::size_t rows() const { return rows_; }

 private:
  std::size_t width_;
  std::size_t rows_ = 0;
  std::string text_;
};

// Files written under one directory, each recorded with size and hash for the manifest.
class ArtifactTree {
 public:
  explicit ArtifactTree(std::filesystem::path root);
  const std::filesystem::path& root() const { return root_; }

  void write_text(const std::string& rel, const std::string& content);
  void write_csv(const std::string& rel, const CsvTable& table) { write_text(rel, table.str()); }
  void write_json(const std::string& rel, const Json& j) { write_text(rel, j.dump(2) + "\n"); }
  // Records a file already present under the root, e.g. one written by a nested tree.
  void record_existing(const std::string& rel);

  struct Entry {
    std::string path;
    std::size_t bytes = 0;
    std::uint64_t hash = 0;
  };
  const std::vector<Entry>& entries() const { return entries_; }

  // manifest.json: the given header plus every file written so far, in write order.
  void write_manifest(Json header);

 private:
  std::filesystem::path root_;
  std::vector<Entry> entries_;
};

// Columns t, r, u over every snapshot.
CsvTable snapshots_table(const RunResult& run, const RadialGrid& grid);
// Columns omega, t, r with empty r for gaps.
CsvTable trajectories_table(const std::vector<LevelSetTrajectory>& trajectories);
Json diagnostics_json(const RunDiagnostics& d);
Json rate_fit_json(const RateFit& fit);
Json band_json(const BandReport& band);

}  // namespace fkpp
