#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ipvem/forms.hpp"
#include "ipvem/manufactured.hpp"

namespace ipvem {

/// Per-cell samples of Pi^nabla u_h at the cell's vertices and centroid.
/// Each cell owns its sample points, so the field may jump across edges.
struct SampledField {
  std::vector<Point> points;
  std::vector<std::vector<int>> triangles;  ///< centroid fans
  std::vector<int> cell_of_triangle;
  std::vector<double> u_h;
  std::vector<double> u_exact;
};

SampledField sample_solution(const std::vector<ElementContext>& elements, const Eigen::VectorXd& solution,
                             const ManufacturedSolution* exact);

/// Legacy ASCII VTK unstructured grid with point data u_h (and u_exact when sampled).
std::string to_vtk(const SampledField& field, std::string_view title = "ipvem solution");
void write_vtk(const std::string& path, const SampledField& field);

struct VtkContents {
  int n_points = 0;
  int n_cells = 0;
  std::map<std::string, std::vector<double>> point_data;
};

/// Reads back the subset of legacy VTK written by to_vtk. Throws ParseError.
VtkContents read_vtk(std::string_view text);

}  // namespace ipvem
