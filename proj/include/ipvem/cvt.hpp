#pragma once

#include <cstdint>
#include <vector>

#include "ipvem/mesh.hpp"

namespace ipvem {

struct CvtOptions {
  int lloyd_iters = 100;
  /// Collapse edges that subtend less than collapse_tol * (2 pi / n_vertices)
  /// at the cell's vertex mean, as PolyMesher does. Boundary vertices stay on
  /// the boundary and corners are never moved.
  bool collapse_short_edges = true;
  double collapse_tol = 0.1;
};

struct CvtResult {
  PolygonalMesh mesh;
  std::vector<Point> generators;   ///< after the last Lloyd step
  std::vector<double> max_move;    ///< largest generator displacement per Lloyd step
  int collapsed_edges = 0;
};

/// Voronoi region of generator i restricted to the unit square. Clipping the
/// square by bisectors yields exactly the cells obtained by reflecting the
/// generators across the four sides, since the bisector of a generator and its
/// reflection is the side itself.
std::vector<Point> clipped_voronoi_cell(const std::vector<Point>& generators, int i);

/// Lloyd-relaxed clipped Voronoi mesh of (0,1)^2 from explicit generators.
/// Throws MeshError for fewer than two generators, generators outside the
/// square or coincident generators.
CvtResult build_cvt(std::vector<Point> generators, const CvtOptions& options = {});

/// n_cells uniformly random generators from a seeded 64-bit Mersenne twister.
CvtResult build_cvt(int n_cells, std::uint64_t seed, const CvtOptions& options = {});

PolygonalMesh generate_cvt(int n_cells, std::uint64_t seed, int lloyd_iters);

/// Deterministic uniform samples in the unit square.
std::vector<Point> random_points(int n, std::uint64_t seed);

}  // namespace ipvem
