#pragma once

#include "robust/forms.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

namespace robust {

/// Tensor-product lattice in R^p (p = 1 or 2) with a validity mask.
///
/// Node (i, j) sits at lo + h * (i, j); its flat index is i + nx * j.
class Lattice {
 public:
  Lattice() = default;
  Lattice(int p, int nx, int ny, Vec lo, double h);

  /// Square lattice of n nodes per axis over [-r, r]^p, masked to the closed disk |x| <= r.
  static Lattice disk(int p, int n, double r);

  int p() const { return p_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  const Vec& lo() const { return lo_; }
  int size() const { return nx_ * ny_; }

  int index(int i, int j = 0) const { return i + nx_ * j; }
  int ix(int k) const { return k % nx_; }
  int iy(int k) const { return k / nx_; }
  bool in_range(int i, int j) const { return i >= 0 && i < nx_ && j >= 0 && j < ny_; }

  Vec coord(int k) const;
  bool valid(int k) const { return mask_[k] != 0; }
  bool valid(int i, int j) const { return in_range(i, j) && valid(index(i, j)); }
  void set_valid(int k, bool v) { mask_[k] = v ? 1 : 0; }
  int count_valid() const;

  /// Node with all 3^p - 1 neighbours valid.
  bool interior(int k) const;
  /// Valid node nearest to a point (ties broken by index); -1 if none.
  int nearest_valid(const Vec& x) const;
  /// Node closest to the lattice centre among valid nodes.
  int center() const;

  /// Neighbour offsets of the 8-connected (p = 2) or 2-connected (p = 1) stencil.
  std::vector<std::array<int, 2>> ring_offsets() const;

 private:
  int p_ = 0;
  int nx_ = 0;
  int ny_ = 1;
  Vec lo_;
  double h_ = 0.0;
  std::vector<std::uint8_t> mask_;
};

/// Per-node metric tensors in lattice coordinates.  For p = 1 only g(0,0) is used.
struct MetricField {
  std::vector<Eigen::Matrix2d> g;  // indexed by flat node index
  std::vector<bool> ok;            // positive definite at this node
};

/// Single-source shortest paths on the lattice graph.  Edges join valid nodes
/// along primitive offsets (a, b) with max(|a|,|b|) <= stencil; the edge
/// length integrates sqrt(v^T g v) with the trapezoid rule at the grid-line
/// crossings, interpolating g linearly between the bracketing nodes.
/// The result is an upper-bound scheme for the Riemannian distance.
std::vector<double> shortest_paths(const Lattice& lat, const MetricField& metric, int source,
                                   int stencil = 5);

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

}  // namespace robust
