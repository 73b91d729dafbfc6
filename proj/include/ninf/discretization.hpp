#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <utility>
#include <vector>

#include "ninf/geometry.hpp"

namespace ninf {

/// Lattice layout shared by grids and field files.
struct GridSpec {
  int nx = 0;
  int ny = 1;
  double h = 0.0;
  Point origin = Point::Zero();
};

/// Uniform lattice over the bounding box of a convex domain.
///
/// Node (ix, iy) sits at origin + h * (ix, iy) and has flat index iy * nx + ix.
/// A node is inside when it lies in the open domain; all other nodes carry
/// boundary data.
class Grid {
 public:
  Grid(ConvexDomain domain, const GridSpec& spec);

  const ConvexDomain& domain() const { return domain_; }
  const GridSpec& spec() const { return spec_; }
  int nx() const { return spec_.nx; }
  int ny() const { return spec_.ny; }
  double h() const { return spec_.h; }
  int dimension() const { return domain_.dimension(); }
  std::size_t size() const { return inside_.size(); }

  int index(int ix, int iy) const { return iy * spec_.nx + ix; }
  int ix(int node) const { return node % spec_.nx; }
  int iy(int node) const { return node / spec_.nx; }
  Point position(int node) const { return spec_.origin + spec_.h * Point(ix(node), iy(node)); }

  bool inside(int node) const { return inside_[static_cast<std::size_t>(node)] != 0; }
  /// Distance to the boundary for inside nodes, signed distance otherwise.
  double boundary_dist(int node) const { return boundary_dist_[static_cast<std::size_t>(node)]; }
  const std::vector<int>& inside_nodes() const { return inside_nodes_; }
  /// Position of a node within inside_nodes(), or -1.
  int inside_rank(int node) const { return inside_rank_[static_cast<std::size_t>(node)]; }

  /// Nodes in the closed domain: inside nodes plus lattice points lying on the
  /// boundary (to within 1e-9 h).
  std::vector<int> closure_nodes() const;

  /// Lower-left node of the interpolation cell containing x and the local
  /// coordinates within it. Coordinates within 1e-12 of a lattice line snap.
  struct Cell {
    int base;
    double fx;
    double fy;
  };
  Cell locate(const Point& x) const;

 private:
  ConvexDomain domain_;
  GridSpec spec_;
  std::vector<std::uint8_t> inside_;
  std::vector<double> boundary_dist_;
  std::vector<int> inside_nodes_;
  std::vector<int> inside_rank_;
};

/// Lattice covering the bounding box of `domain` with spacing h.
/// Rejects h outside (0, diameter/4), fewer than 3^dim inside nodes, and
/// inside sets that are not connected through axis steps.
std::shared_ptr<const Grid> build_grid(const ConvexDomain& domain, double h);

/// Grid values on every lattice node. Non-inside nodes hold boundary data.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(std::shared_ptr<const Grid> grid, double fill, bool dirichlet_zero);
  ScalarField(std::shared_ptr<const Grid> grid, std::vector<double> values, bool dirichlet_zero);

  template <class Fn>
  static ScalarField sample(std::shared_ptr<const Grid> grid, Fn&& fn, bool dirichlet_zero = false) {
    std::vector<double> values(grid->size());
    for (std::size_t n = 0; n < values.size(); ++n) {
      const int node = static_cast<int>(n);
      values[n] = (dirichlet_zero && !grid->inside(node)) ? 0.0 : fn(grid->position(node));
    }
    return ScalarField(std::move(grid), std::move(values), dirichlet_zero);
  }

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  bool dirichlet_zero() const { return dirichlet_zero_; }

  double operator[](int node) const { return values_[static_cast<std::size_t>(node)]; }
  double& operator[](int node) { return values_[static_cast<std::size_t>(node)]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Bilinear (linear in 1D) interpolation.
  double interpolate(const Point& x) const;
  double interpolate(const Grid::Cell& cell) const;

  /// Largest |value| over inside nodes.
  double sup_inside() const;

 private:
  std::shared_ptr<const Grid> grid_;
  std::vector<double> values_;
  bool dirichlet_zero_ = false;
};

/// One of the m samples around a node.
struct RingSample {
  Point point;  // x + eps v, or the exit point on the boundary
  Grid::Cell cell;
  bool on_boundary;
};

/// The eps-circle of directions around every inside node, clipped at the
/// boundary of the domain.
class RingStencil {
 public:
  RingStencil(std::shared_ptr<const Grid> grid, double eps, int directions);

  double eps() const { return eps_; }
  int directions() const { return m_; }
  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  const std::vector<Eigen::Vector2d>& unit_vectors() const { return dirs_; }

  /// Samples for an inside node, one per direction.
  const RingSample* samples(int node) const {
    return samples_.data() + static_cast<std::size_t>(grid_->inside_rank(node)) * static_cast<std::size_t>(m_);
  }

 private:
  std::shared_ptr<const Grid> grid_;
  double eps_;
  int m_;
  std::vector<Eigen::Vector2d> dirs_;
  std::vector<RingSample> samples_;
};

/// m equally spaced unit vectors (m = 2 gives +-e1).
std::vector<Eigen::Vector2d> ring_directions(int m);

/// Rejects eps < 2h and direction counts other than 2 in 1D or an even m >= 8 in 2D.
RingStencil build_ring(std::shared_ptr<const Grid> grid, double eps, int directions);

struct RingExtrema {
  double max;
  double min;
};

/// Value of a field at one ring sample; boundary hits carry the Dirichlet
/// datum (zero for dirichlet_zero fields, the interpolated field otherwise).
inline double ring_value(const ScalarField& field, const RingSample& s) {
  if (s.on_boundary && field.dirichlet_zero()) return 0.0;
  return field.interpolate(s.cell);
}

RingExtrema ring_extrema(const ScalarField& field, const RingStencil& stencil, int node);

// Field file: "# grid nx=.. ny=.. h=.. ox=.. oy=.." then "ix iy inside value"
// per node in row-major order, values printed with 17 significant digits.
void write_field(std::ostream& out, const ScalarField& field);
void write_field(const std::string& path, const ScalarField& field);

struct FieldFile {
  GridSpec spec;
  std::vector<std::uint8_t> inside;
  std::vector<double> values;
};
FieldFile read_field_file(std::istream& in);
FieldFile read_field_file(const std::string& path);

/// Rebuilds the field on `domain`; the inside mask in the file must agree
/// with the domain.
ScalarField load_field(const std::string& path, const ConvexDomain& domain, bool dirichlet_zero = true);

}  // namespace ninf
