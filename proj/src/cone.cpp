#include "robust/cone.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace robust::affine {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool Domain::contains(const Vec& x, double margin) const {
  if (kind == Kind::Ball) return x.norm() < 1.0 - margin;
  return ((A * x).array() < (b.array() - margin)).all();
}

double Domain::exit_param(const Vec& x, const Vec& d) const {
  if (kind == Kind::Ball) {
    const double a = d.squaredNorm(), bb = x.dot(d), c = x.squaredNorm() - 1.0;
    if (a == 0.0) return kInf;
    return (-bb + std::sqrt(std::max(0.0, bb * bb - a * c))) / a;
  }
  double t = kInf;
  const Vec Ad = A * d, slack = b - A * x;
  for (Eigen::Index i = 0; i < Ad.size(); ++i)
    if (Ad(i) > 0.0) t = std::min(t, slack(i) / Ad(i));
  return t;
}

std::vector<double> Domain::faces(const Vec& x) const {
  if (kind == Kind::Ball) return {1.0 - x.squaredNorm()};
  const Vec s = b - A * x;
  return {s.data(), s.data() + s.size()};
}

std::vector<Vec> Domain::vertices() const {
  std::vector<Vec> out;
  if (kind == Kind::Ball) return out;
  auto feasible = [&](const Vec& v) { return ((A * v).array() <= (b.array() + 1e-9)).all(); };
  auto take = [&](const Vec& v) {
    for (const auto& u : out)
      if ((u - v).norm() < 1e-12) return;
    if (feasible(v)) out.push_back(v);
  };
  if (p == 1) {
    for (Eigen::Index i = 0; i < A.rows(); ++i) take(Vec::Constant(1, b(i) / A(i, 0)));
    return out;
  }
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = i + 1; j < A.rows(); ++j) {
      Eigen::Matrix2d m;
      m << A(i, 0), A(i, 1), A(j, 0), A(j, 1);
      if (std::abs(m.determinant()) < 1e-14) continue;
      take(m.inverse() * Eigen::Vector2d(b(i), b(j)));
    }
  return out;
}

std::pair<Vec, Vec> Domain::bbox() const {
  if (kind == Kind::Ball) return {Vec::Constant(p, -1.0), Vec::Constant(p, 1.0)};
  const auto vs = vertices();
  if (vs.size() < static_cast<size_t>(p + 1)) throw std::domain_error("Domain: unbounded chart domain");
  Vec lo = vs.front(), hi = vs.front();
  for (const auto& v : vs) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

ConvexCone ConvexCone::round(const Vec& axis, double half_angle) {
  const int d = static_cast<int>(axis.size());
  if (d < 2 || d > 3) throw std::invalid_argument("round cone: dimension must be 2 or 3");
  if (!(axis.norm() > 0.0)) throw std::invalid_argument("round cone: zero axis");
  if (!(half_angle > 0.0)) throw std::invalid_argument("round cone: empty interior");
  if (half_angle >= std::numbers::pi / 2) throw std::invalid_argument("contains a line");
  ConvexCone c;
  c.kind_ = Kind::Round;
  c.dim_ = d;
  c.axis_ = axis.normalized();
  c.angle_ = half_angle;
  // orthonormal frame whose last column is the axis
  Eigen::HouseholderQR<Mat> qr(c.axis_);
  Mat Q = qr.householderQ();
  Mat R(d, d);
  R.leftCols(d - 1) = Q.rightCols(d - 1);
  R.col(d - 1) = c.axis_;
  if (R.determinant() < 0) R.col(0) = -R.col(0);
  Vec scale = Vec::Constant(d, std::tan(half_angle));
  scale(d - 1) = 1.0;
  c.G_ = R * scale.asDiagonal();
  return c;
}

ConvexCone ConvexCone::polytope(const std::vector<Vec>& rays) {
  if (rays.empty()) throw std::invalid_argument("polytope cone: no rays");
  const int d = static_cast<int>(rays.front().size());
  if (d < 2 || d > 3) throw std::invalid_argument("polytope cone: dimension must be 2 or 3");
  ConvexCone c;
  c.kind_ = Kind::Polytope;
  c.dim_ = d;
  for (const auto& r : rays) {
    if (r.size() != d) throw std::invalid_argument("polytope cone: ray dimension mismatch");
    if (!(r.norm() > 0.0)) throw std::invalid_argument("polytope cone: zero ray");
    c.rays_.push_back(r.normalized());
  }
  c.build_facets();
  return c;
}

ConvexCone ConvexCone::orthant(int dim) {
  std::vector<Vec> rays;
  for (int i = 0; i < dim; ++i) rays.push_back(Vec::Unit(dim, i));
  return polytope(rays);
}

void ConvexCone::build_facets() {
  normals_.clear();
  const double tol = 1e-12;
  Mat V(dim_, rays_.size());
  for (size_t i = 0; i < rays_.size(); ++i) V.col(i) = rays_[i];
  for (size_t i = 0; i < rays_.size(); ++i)
    for (size_t j = i + 1; j < rays_.size(); ++j)
      if ((rays_[i] + rays_[j]).norm() < 1e-9) throw std::invalid_argument("contains a line");
  if (Eigen::FullPivLU<Mat>(V).rank() < dim_) throw std::invalid_argument("degenerate cone (empty interior)");

  auto add = [&](Vec n) {
    n.normalize();
    const Vec vals = V.transpose() * n;
    if (vals.minCoeff() < -tol) {
      if (vals.maxCoeff() > tol) return;
      n = -n;
    }
    for (const auto& m : normals_)
      if ((m - n).norm() < 1e-10) return;
    normals_.push_back(n);
  };
  if (dim_ == 2) {
    for (const auto& r : rays_) {
      add(Vec((Eigen::Vector2d() << -r(1), r(0)).finished()));
    }
  } else {
    for (size_t i = 0; i < rays_.size(); ++i)
      for (size_t j = i + 1; j < rays_.size(); ++j) {
        const Eigen::Vector3d n = Eigen::Vector3d(rays_[i]).cross(Eigen::Vector3d(rays_[j]));
        if (n.norm() < 1e-12) continue;
        add(Vec(n));
      }
  }
  // A pointed cone has a functional positive on every ray; the sum of facet
  // normals is one exactly when the cone contains no line.
  Vec s = Vec::Zero(dim_);
  for (const auto& n : normals_) s += n;
  const Vec vals = V.transpose() * s;
  if (normals_.size() < static_cast<size_t>(dim_) || vals.minCoeff() <= 1e-12)
    throw std::invalid_argument("contains a line");
  // keep only extreme rays (those lying on at least dim - 1 facets)
  std::vector<Vec> extreme;
  for (const auto& r : rays_) {
    int on = 0;
    for (const auto& n : normals_) on += std::abs(n.dot(r)) < 1e-10;
    if (on >= dim_ - 1) extreme.push_back(r);
  }
  rays_ = extreme;
}

ConvexCone ConvexCone::transformed(const Mat& g) const {
  if (g.rows() != dim_ || g.cols() != dim_) throw std::invalid_argument("transformed: dimension mismatch");
  if (kind_ == Kind::Round) {
    ConvexCone c = *this;
    c.G_ = g * G_;
    c.axis_ = (g * axis_).normalized();
    return c;
  }
  std::vector<Vec> r;
  for (const auto& v : rays_) r.push_back(g * v);
  return polytope(r);
}

bool ConvexCone::contains(const Vec& z) const {
  if (z.size() != dim_) throw std::invalid_argument("contains: dimension mismatch");
  if (kind_ == Kind::Round) {
    const Vec u = G_.partialPivLu().solve(z);
    return u(dim_ - 1) > u.head(dim_ - 1).norm();
  }
  for (const auto& n : normals_)
    if (!(n.dot(z) > 0.0)) return false;
  return true;
}

Mat ConvexCone::chart() const {
  const int d = dim_;
  Mat L;
  if (kind_ == Kind::Round) {
    L = G_;
  } else if (static_cast<int>(rays_.size()) == d) {
    // simplicial: the standard simplex chart, (x, 1) -> (x, 1 - sum x) in ray coordinates
    Mat V(d, d);
    for (int i = 0; i < d; ++i) V.col(i) = rays_[i];
    if (V.determinant() < 0) V.col(0).swap(V.col(1));
    Mat Minv = Mat::Identity(d, d);
    Minv.row(d - 1).head(d - 1).setConstant(-1.0);
    L = V * Minv;
  } else {
    Vec ell = Vec::Zero(d);
    for (const auto& n : normals_) ell += n;
    Vec c0 = Vec::Zero(d);
    for (const auto& r : rays_) c0 += r / ell.dot(r);
    c0 /= ell.dot(c0);
    Eigen::HouseholderQR<Mat> qr(ell);
    const Mat Q = qr.householderQ();
    L = Mat(d, d);
    L.leftCols(d - 1) = Q.rightCols(d - 1);
    L.col(d - 1) = c0;
  }
  if (L.determinant() < 0) L.col(0) = -L.col(0);
  return L / std::pow(L.determinant(), 1.0 / d);
}

Domain ConvexCone::chart_domain() const {
  Domain D;
  D.p = dim_ - 1;
  if (kind_ == Kind::Round) {
    D.kind = Domain::Kind::Ball;
    return D;
  }
  D.kind = Domain::Kind::Polytope;
  const Mat L = chart();
  D.A = Mat(normals_.size(), D.p);
  D.b = Vec(normals_.size());
  for (size_t i = 0; i < normals_.size(); ++i) {
    const Vec m = L.transpose() * normals_[i];
    const double s = m.head(D.p).norm();
    D.A.row(i) = -m.head(D.p).transpose() / s;
    D.b(i) = m(D.p) / s;
  }
  return D;
}

double ConvexCone::exponent() const { return kind_ == Kind::Round ? 0.5 : 1.0 / dim_; }

Sector sector(const ConvexCone& C, const Vec& x, const Vec& y) {
  if (!C.contains(x) || !C.contains(y)) throw std::domain_error("outside cone");
  Sector s;
  s.e1 = x.normalized();
  Vec yp = y - y.dot(s.e1) * s.e1;
  if (yp.norm() <= 1e-14 * y.norm()) {
    // parallel rays: any complementary direction inside the span is irrelevant
    s.e2 = Vec::Zero(x.size());
    s.phi_a = s.phi_b = s.phi_y = 0.0;
    return s;
  }
  s.e2 = yp.normalized();
  s.phi_y = std::atan2(y.dot(s.e2), y.dot(s.e1));
  auto inside = [&](double phi) { return C.contains(std::cos(phi) * s.e1 + std::sin(phi) * s.e2); };
  auto bisect = [&](double in, double out) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (in + out);
      if (mid == in || mid == out) break;
      (inside(mid) ? in : out) = mid;
    }
    return in;
  };
  s.phi_b = bisect(s.phi_y, std::numbers::pi);
  s.phi_a = bisect(0.0, -std::numbers::pi);
  return s;
}

double hilbert_distance(const ConvexCone& C, const Vec& x, const Vec& y) {
  const Sector s = sector(C, x, y);
  if (s.phi_y == 0.0) return 0.0;
  const double B = std::sin(s.phi_y - s.phi_a) * std::sin(s.phi_b) /
                   (std::sin(-s.phi_a) * std::sin(s.phi_b - s.phi_y));
  return std::log(B);
}

}  // namespace robust::affine
