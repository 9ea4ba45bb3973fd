#include "robust/lattice.hpp"

#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace robust {

Lattice::Lattice(int p, int nx, int ny, Vec lo, double h)
    : p_(p), nx_(nx), ny_(p == 1 ? 1 : ny), lo_(std::move(lo)), h_(h) {
  if (p != 1 && p != 2) throw std::invalid_argument("Lattice: only p = 1, 2 supported");
  if (nx < 3 || (p == 2 && ny < 3)) throw std::invalid_argument("Lattice: need at least 3 nodes per axis");
  if (!(h > 0.0)) throw std::invalid_argument("Lattice: degenerate grid (h <= 0)");
  if (lo_.size() != p) throw std::invalid_argument("Lattice: origin dimension mismatch");
  mask_.assign(static_cast<size_t>(nx_) * ny_, 1);
}

Lattice Lattice::disk(int p, int n, double r) {
  if (n % 2 == 0) throw std::invalid_argument("Lattice::disk: grid size must be odd");
  const double h = 2.0 * r / (n - 1);
  Lattice lat(p, n, p == 1 ? 1 : n, Vec::Constant(p, -r), h);
  const double lim = r * (1.0 + 1e-12);
  for (int k = 0; k < lat.size(); ++k) lat.set_valid(k, lat.coord(k).norm() <= lim);
  return lat;
}

Vec Lattice::coord(int k) const {
  Vec x(p_);
  x(0) = lo_(0) + h_ * ix(k);
  if (p_ == 2) x(1) = lo_(1) + h_ * iy(k);
  return x;
}

int Lattice::count_valid() const { return static_cast<int>(std::accumulate(mask_.begin(), mask_.end(), 0)); }

std::vector<std::array<int, 2>> Lattice::ring_offsets() const {
  if (p_ == 1) return {{-1, 0}, {1, 0}};
  return {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}};
}

bool Lattice::interior(int k) const {
  if (!valid(k)) return false;
  const int i = ix(k), j = iy(k);
  for (auto [a, b] : ring_offsets())
    if (!valid(i + a, j + b)) return false;
  return true;
}

int Lattice::nearest_valid(const Vec& x) const {
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (int k = 0; k < size(); ++k) {
    if (!valid(k)) continue;
    const double d = (coord(k) - x).squaredNorm();
    if (d < bd - 1e-15) {
      bd = d;
      best = k;
    }
  }
  return best;
}

int Lattice::center() const {
  Vec c(p_);
  c(0) = lo_(0) + h_ * (nx_ - 1) / 2.0;
  if (p_ == 2) c(1) = lo_(1) + h_ * (ny_ - 1) / 2.0;
  return nearest_valid(c);
}

namespace {

int gcd(int a, int b) {
  a = std::abs(a);
  b = std::abs(b);
  while (b) {
    const int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

double quad_len(const Eigen::Matrix2d& g, const Eigen::Vector2d& v) {
  const double q = v.dot(g * v);
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

}  // namespace

std::vector<double> shortest_paths(const Lattice& lat, const MetricField& metric, int source, int stencil) {
  const int n = lat.size();
  if (source < 0 || source >= n || !lat.valid(source))
    throw std::invalid_argument("shortest_paths: source is not a valid node");
  std::vector<std::array<int, 2>> offsets;
  if (lat.p() == 1) {
    offsets = {{1, 0}, {-1, 0}};
  } else {
    for (int a = -stencil; a <= stencil; ++a)
      for (int b = -stencil; b <= stencil; ++b)
        if ((a || b) && gcd(a, b) == 1) offsets.push_back({a, b});
  }
  const double h = lat.h();
  auto usable = [&](int k) { return lat.valid(k) && metric.ok[k]; };

  // Metric at a point on a grid line, linearly interpolated between the two
  // bracketing nodes (falls back to whichever one is usable).
  auto metric_on_line = [&](int i0, int j0, double frac, bool along_x, Eigen::Matrix2d& out) -> bool {
    int i1 = i0, j1 = j0;
    if (along_x) ++i1; else ++j1;
    const bool ok0 = lat.in_range(i0, j0) && usable(lat.index(i0, j0));
    const bool ok1 = lat.in_range(i1, j1) && usable(lat.index(i1, j1));
    if (ok0 && ok1) {
      out = (1.0 - frac) * metric.g[lat.index(i0, j0)] + frac * metric.g[lat.index(i1, j1)];
      return true;
    }
    if (ok0 && frac <= 0.5) { out = metric.g[lat.index(i0, j0)]; return true; }
    if (ok1 && frac >= 0.5) { out = metric.g[lat.index(i1, j1)]; return true; }
    return false;
  };

  auto edge_length = [&](int k, int a, int b, double& len) -> bool {
    const int i = lat.ix(k), j = lat.iy(k);
    const int m = std::max(std::abs(a), std::abs(b));
    const Eigen::Vector2d v(a * h, lat.p() == 2 ? b * h : 0.0);
    if (m == 1) {
      const int k2 = lat.index(i + a, j + b);
      len = 0.5 * (quad_len(metric.g[k], v) + quad_len(metric.g[k2], v));
      return true;
    }
    const bool major_x = std::abs(a) >= std::abs(b);
    double acc = 0.0;
    Eigen::Matrix2d g;
    for (int s = 0; s <= m; ++s) {
      const double t = static_cast<double>(s) / m;
      double val;
      if (s == 0) {
        val = quad_len(metric.g[k], v);
      } else if (s == m) {
        val = quad_len(metric.g[lat.index(i + a, j + b)], v);
      } else if (major_x) {
        const int ii = i + (a > 0 ? s : -s);
        const double y = j + t * b;
        const int j0 = static_cast<int>(std::floor(y));
        if (!metric_on_line(ii, j0, y - j0, false, g)) return false;
        val = quad_len(g, v);
      } else {
        const int jj = j + (b > 0 ? s : -s);
        const double x = i + t * a;
        const int i0 = static_cast<int>(std::floor(x));
        if (!metric_on_line(i0, jj, x - i0, true, g)) return false;
        val = quad_len(g, v);
      }
      acc += (s == 0 || s == m) ? 0.5 * val : val;
    }
    len = acc / m;
    return true;
  };

  std::vector<double> dist(n, kUnreachable);
  std::vector<bool> done(n, false);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [d, k] = pq.top();
    pq.pop();
    if (done[k]) continue;
    done[k] = true;
    if (!usable(k)) continue;
    const int i = lat.ix(k), j = lat.iy(k);
    for (auto [a, b] : offsets) {
      if (!lat.in_range(i + a, j + b)) continue;
      const int k2 = lat.index(i + a, j + b);
      if (done[k2] || !usable(k2)) continue;
      double len;
      if (!edge_length(k, a, b, len)) continue;
      if (d + len < dist[k2]) {
        dist[k2] = d + len;
        pq.push({dist[k2], k2});
      }
    }
  }
  return dist;
}

}  // namespace robust
