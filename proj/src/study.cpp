#include "ipvem/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ipvem/cvt.hpp"
#include "ipvem/errors.hpp"
#include "ipvem/kernels.hpp"
#include "ipvem/vtk.hpp"

namespace ipvem {

using nlohmann::json;

MeshKind parse_mesh_kind(const std::string& name) {
  if (name == "cvt") return MeshKind::cvt;
  if (name == "uniform") return MeshKind::uniform;
  if (name == "files") return MeshKind::files;
  throw ConfigError("unknown mesh kind '" + name + "' (cvt, uniform, files)");
}

std::string to_string(MeshKind kind) {
  switch (kind) {
    case MeshKind::cvt: return "cvt";
    case MeshKind::uniform: return "uniform";
    case MeshKind::files: return "files";
  }
  return "?";
}

void validate(const StudyConfig& c) {
  if (c.example != 1 && c.example != 2) throw ConfigError("example must be 1 or 2");
  if (c.eps.empty()) throw ConfigError("eps list is empty");
  for (double e : c.eps)
    if (!(e > 0.0 && e <= 1.0)) throw ConfigError("eps values must lie in (0, 1]");
  if (c.k != kSupportedOrder) throw ConfigError("only k = 2 is supported");
  if (!(c.penalty_a > 1.0)) throw ConfigError("penalty constant a must exceed 1");
  if (c.lloyd_iters < 0) throw ConfigError("lloyd_iters must be non-negative");
  if (c.quadrature_order < 1 || c.quadrature_order > kMaxTriangleOrder)
    throw ConfigError("quadrature_order must be in [1, " + std::to_string(kMaxTriangleOrder) + "]");
  if (c.mesh_kind == MeshKind::files) {
    if (c.mesh_files.empty()) throw ConfigError("mesh kind 'files' needs mesh_files");
    return;
  }
  if (c.sizes.empty()) throw ConfigError("sizes list is empty");
  for (std::size_t i = 0; i < c.sizes.size(); ++i) {
    const int min = c.mesh_kind == MeshKind::cvt ? 2 : 1;
    if (c.sizes[i] < min) throw ConfigError("mesh size too small");
    if (i > 0 && c.sizes[i] <= c.sizes[i - 1]) throw ConfigError("sizes must be strictly increasing");
  }
}

StudyConfig parse_config(const std::string& text, StudyConfig c) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      const json& v = it.value();
      if (key == "example") c.example = v.get<int>();
      else if (key == "eps") c.eps = v.get<std::vector<double>>();
      else if (key == "mesh_kind") c.mesh_kind = parse_mesh_kind(v.get<std::string>());
      else if (key == "sizes") c.sizes = v.get<std::vector<int>>();
      else if (key == "mesh_files") c.mesh_files = v.get<std::vector<std::string>>();
      else if (key == "k") c.k = v.get<int>();
      else if (key == "penalty_a") c.penalty_a = v.get<double>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "lloyd_iters") c.lloyd_iters = v.get<int>();
      else if (key == "quadrature_order") c.quadrature_order = v.get<int>();
      else if (key == "out_dir") c.out_dir = v.get<std::string>();
      else if (key == "write_vtk") c.write_vtk = v.get<bool>();
      else if (key == "exec") c.exec = parse_exec(v.get<std::string>());
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

std::string config_to_json(const StudyConfig& c) {
  json j{{"example", c.example},
         {"eps", c.eps},
         {"mesh_kind", to_string(c.mesh_kind)},
         {"sizes", c.sizes},
         {"mesh_files", c.mesh_files},
         {"k", c.k},
         {"penalty_a", c.penalty_a},
         {"seed", c.seed},
         {"lloyd_iters", c.lloyd_iters},
         {"quadrature_order", c.quadrature_order},
         {"out_dir", c.out_dir},
         {"write_vtk", c.write_vtk},
         {"exec", c.exec == Exec::serial ? "serial" : "parallel"}};
  return j.dump(2);
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct MeshJob {
  std::string name;
  std::function<PolygonalMesh()> make;
};

std::vector<MeshJob> mesh_jobs(const StudyConfig& c) {
  std::vector<MeshJob> jobs;
  if (c.mesh_kind == MeshKind::files) {
    for (const auto& f : c.mesh_files)
      jobs.push_back({std::filesystem::path(f).filename().string(), [f] { return import_mesh(read_file(f)).mesh; }});
    return jobs;
  }
  for (int n : c.sizes) {
    if (c.mesh_kind == MeshKind::cvt)
      jobs.push_back({"cvt-" + std::to_string(n), [n, &c] { return generate_cvt(n, c.seed, c.lloyd_iters); }});
    else
      jobs.push_back({"uniform-" + std::to_string(n), [n] { return generate_uniform_squares(n); }});
  }
  return jobs;
}

std::optional<double> rate_so_far(const std::vector<RunRecord>& runs, double eps) {
  std::vector<ErrorRecord> recs;
  for (const auto& r : runs)
    if (r.error.eps == eps) recs.push_back(r.error);
  const auto report = make_report(recs, 0, 0, 0);
  if (report.series.empty()) return std::nullopt;
  return report.series.front().rate;
}

}  // namespace

StudyOutput run_study(const StudyConfig& config, const StudyLog& log) {
  validate(config);
  StudyOutput out;
  out.config = config;
  const ManufacturedSolution exact = example_by_id(config.example);
  const bool vtk = config.write_vtk && !config.out_dir.empty();
  if (vtk) std::filesystem::create_directories(config.out_dir);

  for (const auto& job : mesh_jobs(config)) {
    const auto t_setup = Clock::now();
    std::optional<PolygonalMesh> mesh;
    GlobalDofMap dofs;
    std::vector<ElementContext> elements;
    std::vector<EdgeStencil> stencils;
    SparseMatrix j1;
    try {
      mesh.emplace(job.make());
      dofs = number_dofs(*mesh, config.k);
      elements = build_elements(*mesh, dofs, config.exec);
      stencils = build_stencils(*mesh, elements, {config.penalty_a, mesh->max_edges_per_cell()}, config.exec);
      j1 = assemble_j1(dofs, elements, stencils);
    } catch (const std::exception& e) {
      for (double eps : config.eps) out.failures.push_back({eps, job.name, e.what()});
      if (log) log(job.name + ": setup failed: " + e.what());
      continue;
    }
    const double setup_ms = ms_since(t_setup);

    for (double eps : config.eps) {
      const auto t_run = Clock::now();
      try {
        const auto loads = build_loads(
            elements, [&](const Point& p) { return forcing(exact, eps, p); }, config.quadrature_order, config.exec);
        SparseSystem system = assemble(dofs, elements, stencils, loads, eps, config.exec);
        const DiscreteSolution sol = solve(dofs, system);
        RunRecord r;
        r.example = config.example;
        r.mesh = job.name;
        r.error = energy_error(elements, sol.values, exact, eps, config.quadrature_order, config.exec);
        r.error.j1_energy = j1_energy(j1, sol.values);
        r.solver = sol.diagnostics.method;
        r.relative_residual = sol.diagnostics.relative_residual;
        if (!std::isfinite(r.error.E_I)) throw SolveError("non-finite error norm");
        if (vtk) {
          char name[96];
          std::snprintf(name, sizeof name, "%s_eps%.0e.vtk", job.name.c_str(), eps);
          write_vtk((std::filesystem::path(config.out_dir) / name).string(),
                    sample_solution(elements, sol.values, &exact));
        }
        r.wall_ms = setup_ms + ms_since(t_run);
        out.runs.push_back(r);
        out.runs.back().rate_fit = rate_so_far(out.runs, eps);
        if (log) {
          char line[160];
          std::snprintf(line, sizeof line, "%-12s eps=%-8.1e E_I=%.4e (%s, %.1f ms)", job.name.c_str(), eps,
                        r.error.E_I, r.solver.c_str(), r.wall_ms);
          log(line);
        }
      } catch (const std::exception& e) {
        out.failures.push_back({eps, job.name, e.what()});
        if (log) log(job.name + ": eps=" + std::to_string(eps) + " failed: " + e.what());
      }
    }
  }

  std::vector<ErrorRecord> recs;
  for (const auto& r : out.runs) recs.push_back(r.error);
  out.report = make_report(recs, config.seed, config.penalty_a, config.k);
  return out;
}

std::string to_csv(const StudyOutput& out) {
  std::ostringstream s;
  s << kCsvHeader << '\n';
  char buf[512];
  for (const auto& r : out.runs) {
    const auto& e = r.error;
    std::snprintf(buf, sizeof buf, "%d,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,", r.example, e.eps, e.n_cells, e.h_max,
                  e.E_I, e.h2_part, e.h1_part, e.j1_energy);
    s << buf;
    if (r.rate_fit) {
      std::snprintf(buf, sizeof buf, "%.17g", *r.rate_fit);
      s << buf;
    }
    std::snprintf(buf, sizeof buf, ",%.3f\n", r.wall_ms);
    s << buf;
  }
  return s.str();
}

namespace {

json record_json(const ErrorRecord& e) {
  return {{"eps", e.eps},         {"n_cells", e.n_cells}, {"h_max", e.h_max},
          {"h_equiv", e.h_equiv}, {"E_I", e.E_I},         {"H2_part", e.h2_part},
          {"H1_part", e.h1_part}, {"J1_energy", e.j1_energy}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string to_json(const StudyOutput& out) {
  json runs = json::array();
  for (const auto& r : out.runs) {
    json j = record_json(r.error);
    j["example"] = r.example;
    j["mesh"] = r.mesh;
    j["rate_fit"] = optional_json(r.rate_fit);
    j["wall_ms"] = r.wall_ms;
    j["solver"] = r.solver;
    j["relative_residual"] = r.relative_residual;
    runs.push_back(j);
  }
  json series = json::array();
  for (const auto& s : out.report.series) {
    json recs = json::array();
    for (const auto& r : s.records) recs.push_back(record_json(r));
    series.push_back({{"eps", s.eps},
                      {"records", recs},
                      {"rate_h_max", optional_json(s.rate)},
                      {"rate_n_inv_sqrt", optional_json(s.rate_equiv)}});
  }
  json failures = json::array();
  for (const auto& f : out.failures) failures.push_back({{"eps", f.eps}, {"mesh", f.mesh}, {"message", f.message}});
  json j{{"config", json::parse(config_to_json(out.config))},
         {"runs", runs},
         {"report",
          {{"seed", out.report.seed}, {"penalty_a", out.report.penalty_a}, {"k", out.report.k}, {"series", series}}},
         {"failures", failures},
         {"ok", out.ok()}};
  return j.dump(2);
}

std::string format_table(const StudyOutput& out) {
  std::vector<int> ns;
  for (const auto& s : out.report.series)
    for (const auto& r : s.records)
      if (std::find(ns.begin(), ns.end(), r.n_cells) == ns.end()) ns.push_back(r.n_cells);
  std::sort(ns.begin(), ns.end());

  std::ostringstream t;
  char buf[64];
  t << "eps \\ N   ";
  for (int n : ns) {
    std::snprintf(buf, sizeof buf, " %11d", n);
    t << buf;
  }
  t << "   rate(h)  rate(N)\n";
  for (const auto& s : out.report.series) {
    std::snprintf(buf, sizeof buf, "%-10.0e", s.eps);
    t << buf;
    for (int n : ns) {
      auto it = std::find_if(s.records.begin(), s.records.end(), [n](const ErrorRecord& r) { return r.n_cells == n; });
      if (it == s.records.end())
        std::snprintf(buf, sizeof buf, " %11s", "-");
      else
        std::snprintf(buf, sizeof buf, " %11.4e", it->E_I);
      t << buf;
    }
    auto rate = [&](const std::optional<double>& r) {
      if (r)
        std::snprintf(buf, sizeof buf, " %8.4f", *r);
      else
        std::snprintf(buf, sizeof buf, " %8s", "-");
      t << buf;
    };
    t << "  ";
    rate(s.rate);
    rate(s.rate_equiv);
    t << '\n';
  }
  return t.str();
}

void write_outputs(const StudyOutput& out) {
  if (out.config.out_dir.empty()) return;
  const std::filesystem::path dir(out.config.out_dir);
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream f(dir / name);
    if (!f) throw Error("cannot write " + (dir / name).string());
    f << text;
  };
  write("study.csv", to_csv(out));
  write("report.json", to_json(out) + "\n");
}

}  // namespace ipvem
