#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace gdr {

using Layer = Eigen::ArrayXd;
using LayerMatrix = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// How the first-order terms are differenced.
enum class Differencing { central, upwind };

/// Uniform space-time lattice: nx intervals in x, nt intervals in t.
class Grid {
 public:
  Grid() = default;
  Grid(double x_min, double x_max, std::size_t nx, double T, std::size_t nt,
       Differencing differencing = Differencing::central);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t nx() const { return nx_; }
  std::size_t nt() const { return nt_; }
  double dx() const { return dx_; }
  double dt() const { return dt_; }
  double T() const { return T_; }
  Differencing differencing() const { return differencing_; }

  std::size_t x_count() const { return nx_ + 1; }
  std::size_t t_count() const { return nt_ + 1; }
  double x(std::size_t j) const { return x_min_ + static_cast<double>(j) * dx_; }
  double t(std::size_t k) const { return k == nt_ ? T_ : static_cast<double>(k) * dt_; }
  Layer x_nodes() const;

  /// Index of the time slice closest to t.
  std::size_t nearest_slice(double t) const;
  /// Index of the node closest to x.
  std::size_t nearest_node(double x) const;
  /// Node range [first, last] covering the central half of the domain.
  std::size_t inner_first() const;
  std::size_t inner_last() const;

  bool same_lattice(const Grid& other) const;

 private:
  double x_min_ = 0.0;
  double x_max_ = 1.0;
  std::size_t nx_ = 1;
  std::size_t nt_ = 1;
  double dx_ = 1.0;
  double dt_ = 1.0;
  double T_ = 1.0;
  Differencing differencing_ = Differencing::central;
};

/// Scalar function on a grid. Row k holds the slice at time t(k).
class Field {
 public:
  Field() = default;
  explicit Field(const Grid& grid);

  const Grid& grid() const { return grid_; }
  LayerMatrix& values() { return values_; }
  const LayerMatrix& values() const { return values_; }

  double operator()(std::size_t k, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
  }
  double& operator()(std::size_t k, std::size_t j) {
    return values_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
  }

  Layer slice(std::size_t k) const { return values_.row(static_cast<Eigen::Index>(k)).transpose(); }
  void set_slice(std::size_t k, const Layer& layer) {
    values_.row(static_cast<Eigen::Index>(k)) = layer.transpose();
  }

  bool all_finite() const { return values_.allFinite(); }

 private:
  Grid grid_;
  LayerMatrix values_;
};

}  // namespace gdr
