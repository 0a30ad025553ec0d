// Command-line driver: convergence studies, mesh generation and single solves.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ipvem/cvt.hpp"
#include "ipvem/errors.hpp"
#include "ipvem/kernels.hpp"
#include "ipvem/study.hpp"
#include "ipvem/vtk.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailed = 1;
constexpr int kExitBadConfig = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ipvem::ConfigError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ipvem::Error("cannot write '" + path + "'");
  out << text;
}

struct MeshFlags {
  std::string kind = "cvt";
  int n = 64;
  std::uint64_t seed = 7;
  int lloyd_iters = 100;
  std::string file;

  void attach(CLI::App* app) {
    app->add_option("--kind", kind, "cvt or uniform")->check(CLI::IsMember({"cvt", "uniform"}));
    app->add_option("-n,--n", n, "cells (cvt) or cells per side (uniform)")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "CVT generator seed");
    app->add_option("--lloyd-iters", lloyd_iters, "Lloyd iterations")->check(CLI::NonNegativeNumber);
  }

  ipvem::PolygonalMesh build() const {
    if (!file.empty()) {
      auto imp = ipvem::import_mesh(slurp(file));
      for (const auto& w : imp.warnings) std::cerr << "warning: " << w << '\n';
      return std::move(imp.mesh);
    }
    if (kind == "uniform") return ipvem::generate_uniform_squares(n);
    return ipvem::generate_cvt(n, seed, lloyd_iters);
  }
};

int run_study(const std::string& config_path, ipvem::StudyConfig flags, const CLI::App& app, bool quiet) {
  ipvem::StudyConfig config;
  if (!config_path.empty()) config = ipvem::parse_config(slurp(config_path));
  auto given = [&](const char* name) { return app.count(name) > 0; };
  if (given("--example")) config.example = flags.example;
  if (given("--eps")) config.eps = flags.eps;
  if (given("--mesh-kind")) config.mesh_kind = flags.mesh_kind;
  if (given("--sizes")) config.sizes = flags.sizes;
  if (given("--mesh-file")) {
    config.mesh_kind = ipvem::MeshKind::files;
    config.mesh_files = flags.mesh_files;
  }
  if (given("--seed")) config.seed = flags.seed;
  if (given("--lloyd-iters")) config.lloyd_iters = flags.lloyd_iters;
  if (given("--penalty-a")) config.penalty_a = flags.penalty_a;
  if (given("--out-dir")) config.out_dir = flags.out_dir;
  if (given("--vtk")) config.write_vtk = true;
  if (given("--exec")) config.exec = flags.exec;
  ipvem::validate(config);

  const auto out = ipvem::run_study(config, quiet ? ipvem::StudyLog{} : [](const std::string& s) {
    std::cerr << s << '\n';
  });
  std::cout << ipvem::format_table(out);
  for (const auto& f : out.failures) std::cerr << "FAILED " << f.mesh << " eps=" << f.eps << ": " << f.message << '\n';
  ipvem::write_outputs(out);
  return out.ok() ? kExitOk : kExitRunFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interior penalty virtual element solver for eps^2 Lap^2 u - Lap u = f on the unit square"};
  app.require_subcommand(1);

  // study
  auto* study = app.add_subcommand("study", "Run a convergence study");
  std::string config_path;
  ipvem::StudyConfig flags;
  std::string mesh_kind = "cvt", exec_name = "parallel";
  bool quiet = false;
  study->add_option("--config", config_path, "JSON study configuration");
  study->add_option("--example", flags.example, "manufactured solution (1 or 2)");
  study->add_option("--eps", flags.eps, "perturbation parameter (repeatable)");
  study->add_option("--mesh-kind", mesh_kind, "cvt or uniform")->check(CLI::IsMember({"cvt", "uniform"}));
  study->add_option("--sizes", flags.sizes, "mesh sizes, strictly increasing");
  study->add_option("--mesh-file", flags.mesh_files, "mesh files in vem-mesh format (repeatable)");
  study->add_option("--seed", flags.seed, "CVT generator seed");
  study->add_option("--lloyd-iters", flags.lloyd_iters, "Lloyd iterations");
  study->add_option("--penalty-a", flags.penalty_a, "penalty constant a > 1");
  study->add_option("--out-dir", flags.out_dir, "directory for study.csv and report.json");
  study->add_flag("--vtk", "also write VTK files per run into --out-dir");
  study->add_option("--exec", exec_name, "serial or parallel kernels");
  study->add_flag("-q,--quiet", quiet, "no per-run progress on stderr");

  // mesh
  auto* mesh_cmd = app.add_subcommand("mesh", "Generate a mesh and print its quality report");
  MeshFlags mesh_flags;
  mesh_flags.attach(mesh_cmd);
  std::string mesh_out;
  mesh_cmd->add_option("-o,--output", mesh_out, "write the mesh in vem-mesh format");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve one problem and report its errors");
  MeshFlags solve_mesh;
  solve_mesh.attach(solve_cmd);
  solve_cmd->add_option("--mesh-file", solve_mesh.file, "mesh in vem-mesh format");
  int example = 2;
  double eps = 1.0, penalty_a = 2.0;
  std::string vtk_out, coo_out;
  solve_cmd->add_option("--example", example, "manufactured solution (1 or 2)");
  solve_cmd->add_option("--eps", eps, "perturbation parameter in (0, 1]");
  solve_cmd->add_option("--penalty-a", penalty_a, "penalty constant a > 1");
  solve_cmd->add_option("--vtk", vtk_out, "write the sampled solution as legacy VTK");
  solve_cmd->add_option("--coo", coo_out, "write the system matrix as 'row col value' lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadConfig;
  }

  try {
    if (*study) {
      flags.mesh_kind = ipvem::parse_mesh_kind(mesh_kind);
      flags.exec = ipvem::parse_exec(exec_name);
      flags.write_vtk = study->count("--vtk") > 0;
      return run_study(config_path, flags, *study, quiet);
    }

    if (*mesh_cmd) {
      const auto mesh = mesh_flags.build();
      const auto q = ipvem::quality_report(mesh);
      std::printf("cells %d  vertices %d  edges %d  max edges/cell %d\n", mesh.n_cells(), mesh.n_vertices(),
                  mesh.n_edges(), q.max_edges);
      std::printf("diameter [%.4e, %.4e]  min edge/diameter %.4f  min fan aspect %.4f  non-star-shaped %d\n",
                  q.min_diameter, q.max_diameter, q.min_edge_ratio, q.min_fan_aspect, q.non_star_shaped_cells());
      if (!mesh_out.empty()) spill(mesh_out, ipvem::export_mesh(mesh));
      return kExitOk;
    }

    if (!(eps > 0.0 && eps <= 1.0)) throw ipvem::ConfigError("eps must lie in (0, 1]");
    const auto exact = ipvem::example_by_id(example);
    const auto mesh = solve_mesh.build();
    const auto dofs = ipvem::number_dofs(mesh, ipvem::kSupportedOrder);
    const auto elements = ipvem::build_elements(mesh, dofs, ipvem::Exec::parallel);
    const auto stencils =
        ipvem::build_stencils(mesh, elements, {penalty_a, mesh.max_edges_per_cell()}, ipvem::Exec::parallel);
    const auto loads = ipvem::build_loads(
        elements, [&](const ipvem::Point& p) { return ipvem::forcing(exact, eps, p); }, 8, ipvem::Exec::parallel);
    auto system = ipvem::assemble(dofs, elements, stencils, loads, eps);
    const auto sol = ipvem::solve(dofs, system);
    auto err = ipvem::energy_error(elements, sol.values, exact, eps);
    err.j1_energy = ipvem::j1_energy(ipvem::assemble_j1(dofs, elements, stencils), sol.values);
    std::printf("cells %d  free dofs %d  solver %s  residual %.2e\n", err.n_cells, dofs.n_free,
                sol.diagnostics.method.c_str(), sol.diagnostics.relative_residual);
    std::printf("h_max %.4e  E_I %.6e  H2 %.6e  H1 %.6e  J1 %.6e\n", err.h_max, err.E_I, err.h2_part, err.h1_part,
                err.j1_energy);
    if (!vtk_out.empty()) ipvem::write_vtk(vtk_out, ipvem::sample_solution(elements, sol.values, &exact));
    if (!coo_out.empty()) spill(coo_out, ipvem::export_coo(system.matrix));
    return kExitOk;
  } catch (const ipvem::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRunFailed;
  }
}
