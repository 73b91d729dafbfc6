#include "ninf/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ninf {

Grid::Grid(ConvexDomain domain, const GridSpec& spec) : domain_(std::move(domain)), spec_(spec) {
  if (!(spec_.h > 0.0) || spec_.nx < 2 || spec_.ny < 1) throw std::invalid_argument("malformed grid layout");
  if (domain_.dimension() == 1 && spec_.ny != 1) throw std::invalid_argument("1D grids must have ny = 1");
  if (domain_.dimension() == 2 && spec_.ny < 2) throw std::invalid_argument("2D grids need ny >= 2");
  const std::size_t n = static_cast<std::size_t>(spec_.nx) * static_cast<std::size_t>(spec_.ny);
  inside_.assign(n, 0);
  boundary_dist_.assign(n, 0.0);
  inside_rank_.assign(n, -1);
  for (std::size_t k = 0; k < n; ++k) {
    const double sd = domain_.signed_distance(position(static_cast<int>(k)));
    if (sd < 0.0) {
      inside_[k] = 1;
      boundary_dist_[k] = -sd;
      inside_rank_[k] = static_cast<int>(inside_nodes_.size());
      inside_nodes_.push_back(static_cast<int>(k));
    } else {
      boundary_dist_[k] = sd;
    }
  }
}

std::vector<int> Grid::closure_nodes() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < inside_.size(); ++k) {
    if (inside_[k] || boundary_dist_[k] <= 1e-9 * spec_.h) out.push_back(static_cast<int>(k));
  }
  return out;
}

Grid::Cell Grid::locate(const Point& x) const {
  auto axis = [this](double coord, double origin, int count, int& base, double& frac) {
    double s = (coord - origin) / spec_.h;
    const double r = std::round(s);
    if (std::abs(s - r) < 1e-12) s = r;
    const int hi = std::max(count - 2, 0);
    base = std::clamp(static_cast<int>(std::floor(s)), 0, hi);
    frac = std::clamp(s - base, 0.0, 1.0);
  };
  int bx = 0;
  int by = 0;
  double fx = 0.0;
  double fy = 0.0;
  axis(x.x(), spec_.origin.x(), spec_.nx, bx, fx);
  if (spec_.ny > 1) axis(x.y(), spec_.origin.y(), spec_.ny, by, fy);
  return {index(bx, by), fx, fy};
}

namespace {

void require_connected(const Grid& g) {
  const auto& nodes = g.inside_nodes();
  std::vector<std::uint8_t> seen(g.size(), 0);
  std::vector<int> stack{nodes.front()};
  seen[static_cast<std::size_t>(nodes.front())] = 1;
  std::size_t reached = 0;
  while (!stack.empty()) {
    const int node = stack.back();
    stack.pop_back();
    ++reached;
    const int ix = g.ix(node);
    const int iy = g.iy(node);
    const int steps[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& s : steps) {
      const int jx = ix + s[0];
      const int jy = iy + s[1];
      if (jx < 0 || jy < 0 || jx >= g.nx() || jy >= g.ny()) continue;
      const int next = g.index(jx, jy);
      if (g.inside(next) && !seen[static_cast<std::size_t>(next)]) {
        seen[static_cast<std::size_t>(next)] = 1;
        stack.push_back(next);
      }
    }
  }
  if (reached != nodes.size()) throw std::invalid_argument("inside nodes are not grid-connected; refine h");
}

}  // namespace

std::shared_ptr<const Grid> build_grid(const ConvexDomain& domain, double h) {
  const double diam = domain.diameter();
  if (!std::isfinite(h) || !(h > 0.0) || !(h < diam / 4.0)) {
    throw std::invalid_argument("grid spacing h=" + std::to_string(h) + " must lie in (0, diameter/4) with diameter=" +
                                std::to_string(diam));
  }
  const BoundingBox box = domain.bounding_box();
  GridSpec spec;
  spec.h = h;
  spec.origin = box.min;
  spec.nx = static_cast<int>(std::ceil((box.max.x() - box.min.x()) / h - 1e-9)) + 1;
  spec.ny = domain.dimension() == 1 ? 1 : static_cast<int>(std::ceil((box.max.y() - box.min.y()) / h - 1e-9)) + 1;
  auto grid = std::make_shared<const Grid>(domain, spec);
  const std::size_t min_inside = domain.dimension() == 1 ? 3 : 9;
  if (grid->inside_nodes().size() < min_inside) {
    throw std::invalid_argument("domain under-resolved: only " + std::to_string(grid->inside_nodes().size()) +
                                " inside nodes");
  }
  require_connected(*grid);
  return grid;
}

ScalarField::ScalarField(std::shared_ptr<const Grid> grid, double fill, bool dirichlet_zero)
    : grid_(std::move(grid)), values_(grid_->size(), fill), dirichlet_zero_(dirichlet_zero) {
  if (dirichlet_zero_) {
    for (std::size_t k = 0; k < values_.size(); ++k)
      if (!grid_->inside(static_cast<int>(k))) values_[k] = 0.0;
  }
}

ScalarField::ScalarField(std::shared_ptr<const Grid> grid, std::vector<double> values, bool dirichlet_zero)
    : grid_(std::move(grid)), values_(std::move(values)), dirichlet_zero_(dirichlet_zero) {
  if (values_.size() != grid_->size()) throw std::invalid_argument("field size does not match grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("field values must be finite");
}

double ScalarField::interpolate(const Grid::Cell& c) const {
  const auto at = [this](int node) { return values_[static_cast<std::size_t>(node)]; };
  const double bottom = (1.0 - c.fx) * at(c.base) + (c.fx > 0.0 ? c.fx * at(c.base + 1) : 0.0);
  if (grid_->ny() == 1 || c.fy == 0.0) return bottom;
  const int up = c.base + grid_->nx();
  const double top = (1.0 - c.fx) * at(up) + (c.fx > 0.0 ? c.fx * at(up + 1) : 0.0);
  return (1.0 - c.fy) * bottom + c.fy * top;
}

double ScalarField::interpolate(const Point& x) const { return interpolate(grid_->locate(x)); }

double ScalarField::sup_inside() const {
  double s = 0.0;
  for (int node : grid_->inside_nodes()) s = std::max(s, std::abs((*this)[node]));
  return s;
}

std::vector<Eigen::Vector2d> ring_directions(int m) {
  std::vector<Eigen::Vector2d> dirs;
  dirs.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / m;
    // exact axis directions keep lattice-aligned samples exact
    double c = std::cos(theta);
    double s = std::sin(theta);
    if (std::abs(c) < 1e-15) c = 0.0;
    if (std::abs(s) < 1e-15) s = 0.0;
    dirs.emplace_back(c, s);
  }
  return dirs;
}

RingStencil::RingStencil(std::shared_ptr<const Grid> grid, double eps, int directions)
    : grid_(std::move(grid)), eps_(eps), m_(directions), dirs_(ring_directions(directions)) {
  const Grid& g = *grid_;
  samples_.reserve(g.inside_nodes().size() * static_cast<std::size_t>(m_));
  for (int node : g.inside_nodes()) {
    const Point x = g.position(node);
    for (const auto& v : dirs_) {
      RingSample s{};
      if (auto t = g.domain().ray_exit(x, v, eps_)) {
        s.point = x + *t * v;
        s.on_boundary = true;
      } else {
        s.point = x + eps_ * v;
        s.on_boundary = false;
      }
      s.cell = g.locate(s.point);
      samples_.push_back(s);
    }
  }
}

RingStencil build_ring(std::shared_ptr<const Grid> grid, double eps, int directions) {
  if (!std::isfinite(eps) || eps < 2.0 * grid->h() * (1.0 - 1e-12)) {
    throw std::invalid_argument("ring radius eps=" + std::to_string(eps) + " must be at least 2h=" +
                                std::to_string(2.0 * grid->h()));
  }
  if (grid->dimension() == 1 && directions != 2) throw std::invalid_argument("1D rings use exactly 2 directions");
  if (grid->dimension() == 2 && (directions < 8 || directions % 2 != 0)) {
    throw std::invalid_argument("2D rings need an even direction count >= 8");
  }
  return RingStencil(std::move(grid), eps, directions);
}

RingExtrema ring_extrema(const ScalarField& field, const RingStencil& stencil, int node) {
  const RingSample* s = stencil.samples(node);
  double hi = ring_value(field, s[0]);
  double lo = hi;
  for (int j = 1; j < stencil.directions(); ++j) {
    const double v = ring_value(field, s[j]);
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  return {hi, lo};
}

namespace {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) throw std::invalid_argument("malformed number for " + what + ": '" + text + "'");
  return v;
}

}  // namespace

void write_field(std::ostream& out, const ScalarField& field) {
  const GridSpec& s = field.grid().spec();
  out << "# grid nx=" << s.nx << " ny=" << s.ny << " h=" << format17(s.h) << " ox=" << format17(s.origin.x())
      << " oy=" << format17(s.origin.y()) << '\n';
  const Grid& g = field.grid();
  for (int iy = 0; iy < s.ny; ++iy) {
    for (int ix = 0; ix < s.nx; ++ix) {
      const int node = g.index(ix, iy);
      out << ix << ' ' << iy << ' ' << (g.inside(node) ? 1 : 0) << ' ' << format17(field[node]) << '\n';
    }
  }
}

void write_field(const std::string& path, const ScalarField& field) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_field(out, field);
}

FieldFile read_field_file(std::istream& in) {
  FieldFile file;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty field file");
  std::istringstream header(line);
  std::string hash;
  std::string word;
  header >> hash >> word;
  if (hash != "#" || word != "grid") throw std::invalid_argument("field file must start with '# grid'");
  bool seen[5] = {};
  std::string kv;
  while (header >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("malformed header entry '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    if (key == "nx") {
      file.spec.nx = static_cast<int>(parse_double(val, key));
      seen[0] = true;
    } else if (key == "ny") {
      file.spec.ny = static_cast<int>(parse_double(val, key));
      seen[1] = true;
    } else if (key == "h") {
      file.spec.h = parse_double(val, key);
      seen[2] = true;
    } else if (key == "ox") {
      file.spec.origin.x() = parse_double(val, key);
      seen[3] = true;
    } else if (key == "oy") {
      file.spec.origin.y() = parse_double(val, key);
      seen[4] = true;
    } else {
      throw std::invalid_argument("unknown header key '" + key + "'");
    }
  }
  for (bool b : seen)
    if (!b) throw std::invalid_argument("field header must define nx, ny, h, ox, oy");
  const std::size_t n = static_cast<std::size_t>(file.spec.nx) * static_cast<std::size_t>(file.spec.ny);
  file.inside.resize(n);
  file.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::getline(in, line)) throw std::invalid_argument("field file truncated at node " + std::to_string(k));
    std::istringstream row(line);
    long ix = -1;
    long iy = -1;
    int inside = -1;
    std::string value;
    row >> ix >> iy >> inside >> value;
    const long expect_x = static_cast<long>(k % static_cast<std::size_t>(file.spec.nx));
    const long expect_y = static_cast<long>(k / static_cast<std::size_t>(file.spec.nx));
    if (!row || ix != expect_x || iy != expect_y || (inside != 0 && inside != 1)) {
      throw std::invalid_argument("malformed field row " + std::to_string(k + 2) + ": '" + line + "'");
    }
    file.inside[k] = static_cast<std::uint8_t>(inside);
    file.values[k] = parse_double(value, "value");
  }
  return file;
}

FieldFile read_field_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open field file " + path);
  return read_field_file(in);
}

ScalarField load_field(const std::string& path, const ConvexDomain& domain, bool dirichlet_zero) {
  FieldFile file = read_field_file(path);
  auto grid = std::make_shared<const Grid>(domain, file.spec);
  for (std::size_t k = 0; k < file.inside.size(); ++k) {
    if ((file.inside[k] != 0) != grid->inside(static_cast<int>(k))) {
      throw std::invalid_argument("field file " + path + " does not match the domain at node " + std::to_string(k));
    }
  }
  return ScalarField(std::move(grid), std::move(file.values), dirichlet_zero);
}

}  // namespace ninf
