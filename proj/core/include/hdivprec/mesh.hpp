#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace hdivprec {

/// Sides of the unit square, used to tag boundary edges and select
/// essential boundary conditions.
enum class Side : int { Left = 0, Right = 1, Bottom = 2, Top = 3 };

const char* to_string(Side s);

/// A set of sides of the unit square.
class SideSet {
public:
  constexpr SideSet() = default;
  constexpr SideSet(std::initializer_list<Side> sides) {
    for (Side s : sides) bits_ |= bit(s);
  }

  static constexpr SideSet all() { return {Side::Left, Side::Right, Side::Bottom, Side::Top}; }
  static constexpr SideSet none() { return {}; }

  constexpr bool contains(Side s) const { return (bits_ & bit(s)) != 0; }
  constexpr SideSet with(Side s) const {
    SideSet out = *this;
    out.bits_ |= bit(s);
    return out;
  }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int count() const {
    int n = 0;
    for (unsigned b = bits_; b != 0; b >>= 1) n += b & 1u;
    return n;
  }
  constexpr SideSet complement() const {
    SideSet s;
    s.bits_ = ~bits_ & 0xfu;
    return s;
  }
  constexpr bool operator==(const SideSet&) const = default;

private:
  static constexpr unsigned bit(Side s) { return 1u << static_cast<int>(s); }
  unsigned bits_ = 0;
};

struct FacetGeometry {
  double length;
  Eigen::Vector2d normal;    // unit; out of edge_cells(e)[0], outward on the boundary
  Eigen::Vector2d midpoint;
};

/// Structured triangulation of the unit square: N x N squares, each split
/// along the diagonal from its lower-left to its upper-right corner.
///
/// Immutable after construction. Edges store their vertex pair with the
/// lower index first; the global edge normal is the edge tangent
/// (low vertex -> high vertex) rotated clockwise by 90 degrees. Orientation
/// signs record whether a cell's outward normal agrees with the global one.
class Mesh {
public:
  struct Cell {
    std::array<int, 3> vertices;  // counterclockwise
  };
  struct Edge {
    std::array<int, 2> vertices;  // ascending
  };

  /// Builds the N x N structured triangulation. Throws std::invalid_argument
  /// for N < 1.
  static Mesh unit_square(int n_subdivisions);

  int subdivisions() const { return n_; }
  double mesh_size() const { return 1.0 / n_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const Eigen::Vector2d& vertex(int v) const { return vertices_[v]; }
  const Cell& cell(int c) const { return cells_[c]; }
  const Edge& edge(int e) const { return edges_[e]; }

  /// Edge indices of cell c; entry i is the edge opposite local vertex i.
  const std::array<int, 3>& cell_edges(int c) const { return cell_edges_[c]; }
  /// +1 if the global normal of cell_edges(c)[i] points out of cell c, else -1.
  const std::array<int, 3>& cell_edge_signs(int c) const { return cell_edge_signs_[c]; }

  /// Incident cells; second entry is -1 for boundary edges. For interior
  /// edges the global normal points from the first cell into the second.
  const std::array<int, 2>& edge_cells(int e) const { return edge_cells_[e]; }
  bool is_boundary_edge(int e) const { return edge_cells_[e][1] < 0; }
  /// Side of the square a boundary edge lies on. Throws for interior edges.
  Side boundary_side(int e) const;

  /// Unit normal by the global convention (vertex order low -> high,
  /// tangent rotated clockwise).
  Eigen::Vector2d edge_normal(int e) const;
  double edge_length(int e) const;

  double cell_area(int c) const;
  Eigen::Vector2d cell_centroid(int c) const;
  double cell_diameter(int c) const;

  /// Length, unit normal and midpoint of an edge. The normal points from
  /// the first incident cell to the second, outward on the boundary.
  FacetGeometry facet_geometry(int e) const;

  /// Plain-text dump (vertex list then cell list), for debugging.
  void dump(std::ostream& os) const;

private:
  Mesh() = default;

  int n_ = 0;
  std::vector<Eigen::Vector2d> vertices_;
  std::vector<Cell> cells_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> cell_edges_;
  std::vector<std::array<int, 3>> cell_edge_signs_;
  std::vector<std::array<int, 2>> edge_cells_;
};

}  // namespace hdivprec
