#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ipvem/exec.hpp"
#include "ipvem/verify.hpp"

namespace ipvem {

enum class MeshKind { cvt, uniform, files };

struct StudyConfig {
  int example = 1;
  std::vector<double> eps{1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  MeshKind mesh_kind = MeshKind::cvt;
  std::vector<int> sizes{32, 64, 128, 256, 512};  ///< cells (cvt) or cells per side (uniform)
  std::vector<std::string> mesh_files;
  int k = 2;
  double penalty_a = 2.0;
  std::uint64_t seed = 7;
  int lloyd_iters = 100;
  int quadrature_order = 8;
  std::string out_dir;  ///< empty: no files written
  bool write_vtk = false;
  Exec exec = Exec::parallel;
};

/// Throws ConfigError on any violated constraint.
void validate(const StudyConfig& config);

/// JSON object with keys example, eps, mesh_kind, sizes, mesh_files, k,
/// penalty_a, seed, lloyd_iters, quadrature_order, out_dir, write_vtk, exec.
/// Missing keys keep the defaults; unknown keys are rejected.
StudyConfig parse_config(const std::string& json_text, StudyConfig base = {});
std::string config_to_json(const StudyConfig& config);

MeshKind parse_mesh_kind(const std::string& name);
std::string to_string(MeshKind kind);

struct RunRecord {
  int example = 1;
  std::string mesh;   ///< descriptor, e.g. "cvt-64" or a file name
  ErrorRecord error;
  std::optional<double> rate_fit;  ///< over this eps's records so far, >= 3 of them
  double wall_ms = 0.0;
  std::string solver;
  double relative_residual = 0.0;
};

struct RunFailure {
  double eps = 0.0;
  std::string mesh;
  std::string message;
};

struct StudyOutput {
  StudyConfig config;
  std::vector<RunRecord> runs;
  std::vector<RunFailure> failures;
  ConvergenceReport report;
  bool ok() const { return failures.empty(); }
};

using StudyLog = std::function<void(const std::string&)>;

/// Builds each mesh once, then solves every eps on it.
StudyOutput run_study(const StudyConfig& config, const StudyLog& log = {});

inline constexpr const char* kCsvHeader = "example,eps,n_cells,h_max,E_I,H2_part,H1_part,J1_energy,rate_fit,wall_ms";

std::string to_csv(const StudyOutput& out);
std::string to_json(const StudyOutput& out);
/// eps rows by mesh columns of E_I, with rate columns.
std::string format_table(const StudyOutput& out);

/// Writes study.csv and report.json (and per-run VTK when requested) into config.out_dir.
void write_outputs(const StudyOutput& out);

}  // namespace ipvem
