#include "gdr/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace gdr {

Grid::Grid(double x_min, double x_max, std::size_t nx, double T, std::size_t nt,
           Differencing differencing)
    : x_min_(x_min), x_max_(x_max), nx_(nx), nt_(nt), T_(T), differencing_(differencing) {
  if (!(x_min < x_max)) throw std::invalid_argument("grid needs x_min < x_max");
  if (nx < 2) throw std::invalid_argument("grid needs at least two space intervals");
  if (nt < 1) throw std::invalid_argument("grid needs at least one time step");
  if (!(T > 0.0)) throw std::invalid_argument("grid horizon must be positive");
  dx_ = (x_max - x_min) / static_cast<double>(nx);
  dt_ = T / static_cast<double>(nt);
}

Layer Grid::x_nodes() const {
  Layer xs(static_cast<Eigen::Index>(x_count()));
  for (std::size_t j = 0; j < x_count(); ++j) xs(static_cast<Eigen::Index>(j)) = x(j);
  return xs;
}

std::size_t Grid::nearest_slice(double t) const {
  const double k = std::round(t / dt_);
  if (k <= 0.0) return 0;
  if (k >= static_cast<double>(nt_)) return nt_;
  return static_cast<std::size_t>(k);
}

std::size_t Grid::nearest_node(double x) const {
  const double j = std::round((x - x_min_) / dx_);
  if (j <= 0.0) return 0;
  if (j >= static_cast<double>(nx_)) return nx_;
  return static_cast<std::size_t>(j);
}

std::size_t Grid::inner_first() const { return nearest_node(x_min_ + 0.25 * (x_max_ - x_min_)); }
std::size_t Grid::inner_last() const { return nearest_node(x_max_ - 0.25 * (x_max_ - x_min_)); }

bool Grid::same_lattice(const Grid& other) const {
  return nx_ == other.nx_ && nt_ == other.nt_ && x_min_ == other.x_min_ &&
         x_max_ == other.x_max_ && T_ == other.T_;
}

Field::Field(const Grid& grid)
    : grid_(grid),
      values_(LayerMatrix::Zero(static_cast<Eigen::Index>(grid.t_count()),
                                static_cast<Eigen::Index>(grid.x_count()))) {}

}  // namespace gdr
