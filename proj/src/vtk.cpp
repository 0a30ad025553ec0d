#include "ipvem/vtk.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ipvem/errors.hpp"

namespace ipvem {

SampledField sample_solution(const std::vector<ElementContext>& elements, const Eigen::VectorXd& solution,
                             const ManufacturedSolution* exact) {
  SampledField f;
  for (const auto& e : elements) {
    Eigen::VectorXd local(e.layout.size());
    for (int i = 0; i < e.layout.size(); ++i) local[i] = solution[e.layout.global[i]];
    const Eigen::VectorXd c = e.projectors.h1 * local;
    const CellGeometry& g = *e.geometry;
    const int base = static_cast<int>(f.points.size());
    const int m = g.n_edges();
    auto add = [&](const Point& p) {
      f.points.push_back(p);
      f.u_h.push_back(e.basis.evaluate(c, p));
      if (exact) f.u_exact.push_back(exact->value(p));
    };
    for (const auto& v : g.vertices) add(v);
    add(g.centroid);
    for (int i = 0; i < m; ++i) {
      f.triangles.push_back({base + m, base + i, base + (i + 1) % m});
      f.cell_of_triangle.push_back(e.cell);
    }
  }
  return f;
}

std::string to_vtk(const SampledField& field, std::string_view title) {
  std::ostringstream out;
  char buf[128];
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << field.points.size() << " double\n";
  for (const auto& p : field.points) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g 0\n", p.x(), p.y());
    out << buf;
  }
  const std::size_t nt = field.triangles.size();
  out << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (const auto& t : field.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << nt << '\n';
  for (std::size_t i = 0; i < nt; ++i) out << "5\n";
  out << "CELL_DATA " << nt << "\nSCALARS cell_id int 1\nLOOKUP_TABLE default\n";
  for (int c : field.cell_of_triangle) out << c << '\n';
  out << "POINT_DATA " << field.points.size() << '\n';
  auto scalars = [&](const char* name, const std::vector<double>& v) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double x : v) {
      std::snprintf(buf, sizeof buf, "%.17g\n", x);
      out << buf;
    }
  };
  scalars("u_h", field.u_h);
  if (!field.u_exact.empty()) scalars("u_exact", field.u_exact);
  return out.str();
}

void write_vtk(const std::string& path, const SampledField& field) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << to_vtk(field);
  if (!out) throw Error("failed writing '" + path + "'");
}

VtkContents read_vtk(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty()) return true;
    }
    return false;
  };
  if (!next() || line.rfind("# vtk DataFile", 0) != 0) throw ParseError(line_no, "missing VTK header");
  if (!next()) throw ParseError(line_no, "missing title");
  if (!next() || line != "ASCII") throw ParseError(line_no, "only ASCII VTK is supported");
  if (!next() || line != "DATASET UNSTRUCTURED_GRID") throw ParseError(line_no, "expected an unstructured grid");

  VtkContents v;
  std::string word;
  int pending_scalars = -1;  // point count of the active POINT_DATA section
  bool in_point_data = false;
  while (next()) {
    std::istringstream ls(line);
    ls >> word;
    long n = 0;
    if (word == "POINTS") {
      ls >> n;
      v.n_points = static_cast<int>(n);
      for (long i = 0; i < n; ++i)
        if (!next()) throw ParseError(line_no, "truncated POINTS");
    } else if (word == "CELLS") {
      ls >> n;
      v.n_cells = static_cast<int>(n);
      for (long i = 0; i < n; ++i)
        if (!next()) throw ParseError(line_no, "truncated CELLS");
    } else if (word == "CELL_TYPES") {
      ls >> n;
      for (long i = 0; i < n; ++i)
        if (!next()) throw ParseError(line_no, "truncated CELL_TYPES");
    } else if (word == "CELL_DATA") {
      ls >> n;
      in_point_data = false;
      pending_scalars = static_cast<int>(n);
    } else if (word == "POINT_DATA") {
      ls >> n;
      if (n != v.n_points) throw ParseError(line_no, "POINT_DATA count differs from POINTS");
      in_point_data = true;
      pending_scalars = static_cast<int>(n);
    } else if (word == "SCALARS") {
      std::string name;
      ls >> name;
      if (pending_scalars < 0) throw ParseError(line_no, "SCALARS outside a data section");
      if (!next() || line.rfind("LOOKUP_TABLE", 0) != 0) throw ParseError(line_no, "expected LOOKUP_TABLE");
      std::vector<double> values;
      for (int i = 0; i < pending_scalars; ++i) {
        if (!next()) throw ParseError(line_no, "truncated SCALARS " + name);
        try {
          values.push_back(std::stod(line));
        } catch (const std::exception&) {
          throw ParseError(line_no, "bad scalar value");
        }
      }
      if (in_point_data) v.point_data[name] = std::move(values);
    } else {
      throw ParseError(line_no, "unexpected section '" + word + "'");
    }
  }
  return v;
}

}  // namespace ipvem
