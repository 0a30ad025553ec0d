#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "ipvem/errors.hpp"
#include "ipvem/mesh.hpp"

namespace ipvem {
namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  // Next non-blank line split into tokens; empty result at end of input.
  std::vector<std::string_view> next() {
    while (pos_ < text_.size()) {
      std::size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++line_;
      auto tokens = split(line);
      if (!tokens.empty()) return tokens;
    }
    ++line_;
    return {};
  }
  int line() const { return line_; }

 private:
  static std::vector<std::string_view> split(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
      if (j > i) out.push_back(s.substr(i, j - i));
      i = j;
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 0;
};

template <typename T>
T parse_number(std::string_view tok, int line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "expected a number, found '" + std::string(tok) + "'");
  return value;
}

int expect_count(LineReader& in, std::string_view keyword) {
  auto t = in.next();
  if (t.size() != 2 || t[0] != keyword)
    throw ParseError(in.line(), "expected '" + std::string(keyword) + " <count>'");
  const long n = parse_number<long>(t[1], in.line());
  if (n < 0) throw ParseError(in.line(), "negative count");
  return static_cast<int>(n);
}

double loop_area(const std::vector<Point>& pts, const std::vector<int>& loop) {
  double a = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Point& p = pts[loop[i]];
    const Point& q = pts[loop[(i + 1) % loop.size()]];
    a += p.x() * q.y() - p.y() * q.x();
  }
  return 0.5 * a;
}

}  // namespace

MeshImport import_mesh(std::string_view text) {
  LineReader in(text);
  auto header = in.next();
  if (header.size() != 2 || header[0] != "vem-mesh" || header[1] != "1")
    throw ParseError(in.line(), "expected header 'vem-mesh 1'");

  const int nv = expect_count(in, "vertices");
  std::vector<Point> vertices;
  vertices.reserve(nv);
  for (int i = 0; i < nv; ++i) {
    auto t = in.next();
    if (t.size() != 2) throw ParseError(in.line(), "expected 'x y'");
    vertices.emplace_back(parse_number<double>(t[0], in.line()), parse_number<double>(t[1], in.line()));
  }

  const int nc = expect_count(in, "cells");
  std::vector<std::vector<int>> cells;
  std::vector<std::string> warnings;
  cells.reserve(nc);
  for (int c = 0; c < nc; ++c) {
    auto t = in.next();
    if (t.empty()) throw ParseError(in.line(), "unexpected end of input in cell list");
    const int k = parse_number<int>(t[0], in.line());
    if (k < 3) throw ParseError(in.line(), "a cell needs at least 3 vertices");
    if (static_cast<int>(t.size()) != k + 1)
      throw ParseError(in.line(), "cell declares " + std::to_string(k) + " vertices but lists " +
                                      std::to_string(t.size() - 1));
    std::vector<int> loop(k);
    for (int i = 0; i < k; ++i) {
      loop[i] = parse_number<int>(t[i + 1], in.line());
      if (loop[i] < 0 || loop[i] >= nv)
        throw ParseError(in.line(), "vertex index " + std::to_string(loop[i]) + " out of range");
    }
    if (loop_area(vertices, loop) < 0.0) {
      std::reverse(loop.begin(), loop.end());
      warnings.push_back("cell " + std::to_string(c) + " was clockwise; orientation reversed");
    }
    cells.push_back(std::move(loop));
  }
  if (!in.next().empty()) throw ParseError(in.line(), "trailing content after cell list");

  try {
    return {PolygonalMesh::from_cells(std::move(vertices), std::move(cells)), std::move(warnings)};
  } catch (const MeshError& e) {
    throw ParseError(in.line(), std::string("invalid mesh: ") + e.what());
  }
}

std::string export_mesh(const PolygonalMesh& mesh) {
  std::ostringstream out;
  out << "vem-mesh 1\n";
  out << "vertices " << mesh.n_vertices() << "\n";
  char buf[64];
  for (const Point& p : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x(), p.y());
    out << buf;
  }
  out << "cells " << mesh.n_cells() << "\n";
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto loop = mesh.cell(c);
    out << loop.size();
    for (int v : loop) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

}  // namespace ipvem
