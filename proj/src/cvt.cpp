#include "ipvem/cvt.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <unordered_map>

#include "ipvem/errors.hpp"

namespace ipvem {
namespace {

constexpr double kWeldTol = 1e-9;

// Keep {x : (x - mid) . dir <= 0}.
std::vector<Point> clip_half_plane(const std::vector<Point>& poly, const Point& mid, const Point& dir) {
  std::vector<Point> out;
  out.reserve(poly.size() + 1);
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % m];
    const double fp = (p - mid).dot(dir);
    const double fq = (q - mid).dot(dir);
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
      const double t = fp / (fp - fq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

Point polygon_centroid(const std::vector<Point>& poly) {
  double a2 = 0.0;
  Point c = Point::Zero();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    const double w = p.x() * q.y() - p.y() * q.x();
    a2 += w;
    c += w * (p + q);
  }
  return c / (3.0 * a2);
}

struct KeyHash {
  std::size_t operator()(const std::pair<long long, long long>& k) const {
    return std::hash<long long>()(k.first) ^ (std::hash<long long>()(k.second) * 0x9e3779b97f4a7c15ULL);
  }
};

// Merge points closer than kWeldTol; returns per-input welded index.
class Welder {
 public:
  int insert(const Point& p) {
    const long long ix = std::llround(std::floor(p.x() / kWeldTol));
    const long long iy = std::llround(std::floor(p.y() / kWeldTol));
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = grid_.find({ix + dx, iy + dy});
        if (it == grid_.end()) continue;
        for (int id : it->second)
          if ((points_[id] - p).norm() < kWeldTol) return id;
      }
    const int id = static_cast<int>(points_.size());
    points_.push_back(p);
    grid_[{ix, iy}].push_back(id);
    return id;
  }
  std::vector<Point>& points() { return points_; }

 private:
  std::vector<Point> points_;
  std::unordered_map<std::pair<long long, long long>, std::vector<int>, KeyHash> grid_;
};

// Bit mask of unit-square sides a vertex lies on: 1 x=0, 2 x=1, 4 y=0, 8 y=1.
int side_mask(const Point& p) {
  return (p.x() == 0.0 ? 1 : 0) | (p.x() == 1.0 ? 2 : 0) | (p.y() == 0.0 ? 4 : 0) | (p.y() == 1.0 ? 8 : 0);
}

bool is_corner(int mask) { return std::popcount(static_cast<unsigned>(mask)) >= 2; }

void remove_repeats(std::vector<int>& loop) {
  std::vector<int> out;
  for (int v : loop)
    if (out.empty() || out.back() != v) out.push_back(v);
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  loop = std::move(out);
}

// One PolyMesher-style pass over vertex-disjoint short edges; returns the number collapsed.
int collapse_pass(std::vector<Point>& points, std::vector<std::vector<int>>& cells, double tol) {
  std::vector<std::pair<int, int>> candidates;
  for (const auto& loop : cells) {
    const int nv = static_cast<int>(loop.size());
    if (nv < 4) continue;
    Point mean = Point::Zero();
    for (int v : loop) mean += points[v];
    mean /= nv;
    const double ideal = 2.0 * std::numbers::pi / nv;
    for (int i = 0; i < nv; ++i) {
      const Point a = points[loop[i]] - mean;
      const Point b = points[loop[(i + 1) % nv]] - mean;
      double beta = std::atan2(b.y(), b.x()) - std::atan2(a.y(), a.x());
      beta = std::fmod(beta + 4.0 * std::numbers::pi, 2.0 * std::numbers::pi);
      if (beta < tol * ideal) candidates.emplace_back(std::min(loop[i], loop[(i + 1) % nv]),
                                                      std::max(loop[i], loop[(i + 1) % nv]));
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<int> cell_size_min(points.size(), std::numeric_limits<int>::max());
  for (const auto& loop : cells)
    for (int v : loop) cell_size_min[v] = std::min<int>(cell_size_min[v], static_cast<int>(loop.size()));

  std::vector<int> target(points.size());
  std::iota(target.begin(), target.end(), 0);
  std::vector<bool> touched(points.size(), false);
  int collapsed = 0;
  for (auto [a, b] : candidates) {
    if (touched[a] || touched[b]) continue;
    if (cell_size_min[a] < 4 || cell_size_min[b] < 4) continue;
    const int ma = side_mask(points[a]);
    const int mb = side_mask(points[b]);
    int keep = a;
    int drop = b;
    if (ma && mb) {
      // both on the boundary: only merge along one side, never drop a corner
      if ((ma & mb) == 0) continue;
      if (is_corner(ma) && is_corner(mb)) continue;
      if (is_corner(mb)) std::swap(keep, drop);
    } else if (mb) {
      std::swap(keep, drop);
    }
    target[drop] = keep;
    touched[a] = touched[b] = true;
    ++collapsed;
  }
  if (collapsed == 0) return 0;

  for (auto& loop : cells) {
    for (int& v : loop) v = target[v];
    remove_repeats(loop);
  }
  // renumber surviving vertices in order of first use
  std::vector<int> renum(points.size(), -1);
  std::vector<Point> kept;
  for (auto& loop : cells)
    for (int& v : loop) {
      if (renum[v] < 0) {
        renum[v] = static_cast<int>(kept.size());
        kept.push_back(points[v]);
      }
      v = renum[v];
    }
  points = std::move(kept);
  return collapsed;
}

void check_generators(const std::vector<Point>& g) {
  if (g.size() < 2) throw MeshError("CVT needs at least two generators");
  for (const Point& p : g)
    if (!(p.x() > 0.0 && p.x() < 1.0 && p.y() > 0.0 && p.y() < 1.0))
      throw MeshError("CVT generator outside the open unit square");
  std::vector<std::size_t> idx(g.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return g[i].x() < g[j].x(); });
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size() && g[idx[b]].x() - g[idx[a]].x() < 1e-12; ++b)
      if ((g[idx[a]] - g[idx[b]]).norm() < 1e-12)
        throw MeshError("duplicate CVT generators " + std::to_string(idx[a]) + " and " + std::to_string(idx[b]));
}

}  // namespace

std::vector<Point> clipped_voronoi_cell(const std::vector<Point>& generators, int i) {
  const Point& s = generators[i];
  std::vector<Point> poly = {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};
  std::vector<std::pair<double, int>> order;
  order.reserve(generators.size());
  for (int j = 0; j < static_cast<int>(generators.size()); ++j)
    if (j != i) order.emplace_back((generators[j] - s).squaredNorm(), j);
  std::sort(order.begin(), order.end());
  double reach2 = 0.0;
  for (const Point& p : poly) reach2 = std::max(reach2, (p - s).squaredNorm());
  for (const auto& [d2, j] : order) {
    // bisector lies at distance sqrt(d2)/2; nothing beyond twice the cell radius can cut
    if (d2 > 4.0 * reach2) break;
    const Point dir = generators[j] - s;
    poly = clip_half_plane(poly, 0.5 * (generators[j] + s), dir);
    reach2 = 0.0;
    for (const Point& p : poly) reach2 = std::max(reach2, (p - s).squaredNorm());
  }
  return poly;
}

std::vector<Point> random_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto uniform = [&rng] {
    double u;
    do u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    while (u == 0.0);
    return u;
  };
  std::vector<Point> pts(n);
  for (auto& p : pts) {
    const double x = uniform();
    const double y = uniform();
    p = Point(x, y);
  }
  return pts;
}

CvtResult build_cvt(std::vector<Point> generators, const CvtOptions& options) {
  check_generators(generators);
  const int n = static_cast<int>(generators.size());
  std::vector<double> moves;
  std::vector<std::vector<Point>> cells(n);
  for (int it = 0;; ++it) {
    for (int i = 0; i < n; ++i) cells[i] = clipped_voronoi_cell(generators, i);
    if (it == options.lloyd_iters) break;
    double max_move = 0.0;
    for (int i = 0; i < n; ++i) {
      const Point c = polygon_centroid(cells[i]);
      max_move = std::max(max_move, (c - generators[i]).norm());
      generators[i] = c;
    }
    moves.push_back(max_move);
  }

  Welder welder;
  std::vector<std::vector<int>> loops(n);
  for (int i = 0; i < n; ++i) {
    for (const Point& p : cells[i]) loops[i].push_back(welder.insert(p));
    remove_repeats(loops[i]);
    if (loops[i].size() < 3) throw MeshError("degenerate Voronoi cell for generator " + std::to_string(i));
  }
  std::vector<Point>& points = welder.points();
  int collapsed = 0;
  if (options.collapse_short_edges) {
    while (int c = collapse_pass(points, loops, options.collapse_tol)) collapsed += c;
  }
  CvtResult result{PolygonalMesh::from_cells(std::move(points), std::move(loops)), std::move(generators),
                   std::move(moves), collapsed};
  return result;
}

CvtResult build_cvt(int n_cells, std::uint64_t seed, const CvtOptions& options) {
  if (n_cells < 2) throw MeshError("CVT needs n_cells >= 2");
  return build_cvt(random_points(n_cells, seed), options);
}

PolygonalMesh generate_cvt(int n_cells, std::uint64_t seed, int lloyd_iters) {
  CvtOptions options;
  options.lloyd_iters = lloyd_iters;
  return std::move(build_cvt(n_cells, seed, options).mesh);
}

}  // namespace ipvem
