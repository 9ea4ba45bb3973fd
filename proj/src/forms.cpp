#include "robust/forms.hpp"

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace robust::forms {

QuadraticForm::QuadraticForm(int p, int q_plus_1) : p_(p), q1_(q_plus_1) {
  if (p < 1 || q_plus_1 < 1) throw std::invalid_argument("QuadraticForm: p and q+1 must be positive");
}

Mat QuadraticForm::signature() const {
  Vec diag(dim());
  for (int i = 0; i < dim(); ++i) diag(i) = sign(i);
  return diag.asDiagonal();
}

double QuadraticForm::operator()(const Vec& z, const Vec& w) const { return bilinear(z, w, *this); }

Mat QuadraticForm::adjoint(const Mat& phi) const {
  const Mat J = signature();
  return J * phi.transpose() * J;
}

double bilinear(const Vec& z, const Vec& zp, const QuadraticForm& Q) {
  if (z.size() != Q.dim() || zp.size() != Q.dim())
    throw std::invalid_argument("bilinear: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < Q.dim(); ++i) s += Q.sign(i) * z(i) * zp(i);
  return s;
}

std::string to_string(GroupTag tag) { return tag == GroupTag::SO ? "SO" : "SL"; }

GroupTag group_tag_from_string(const std::string& s) {
  if (s == "SO") return GroupTag::SO;
  if (s == "SL") return GroupTag::SL;
  throw std::invalid_argument("unknown group tag '" + s + "'");
}

bool is_member_sl(const Mat& g, double tol) {
  if (g.rows() != g.cols() || g.rows() == 0) return false;
  return std::abs(g.determinant() - 1.0) <= tol * std::max(1.0, g.norm());
}

bool is_member(const Mat& g, GroupTag tag, const QuadraticForm& Q, double tol) {
  if (g.rows() != Q.dim() || g.cols() != Q.dim()) return false;
  if (tag == GroupTag::SL) return is_member_sl(g, tol);
  const Mat J = Q.signature();
  const double scale = std::max(1.0, g.squaredNorm());
  if ((g.transpose() * J * g - J).cwiseAbs().maxCoeff() > tol * scale) return false;
  // O(p,q+1) has four components; the determinant picks SO.
  return g.determinant() > 0.0;
}

ProjectiveMatrix::ProjectiveMatrix(const Mat& m) {
  const double n = m.norm();
  if (!(n > 0.0)) throw std::invalid_argument("ProjectiveMatrix: zero matrix");
  m_ = m / n;
  const double eps = 1e-14;
  for (Eigen::Index k = 0; k < m_.size(); ++k) {
    // column-major walk would change the representative; use row-major order
    const Eigen::Index i = k / m_.cols(), j = k % m_.cols();
    if (std::abs(m_(i, j)) > eps) {
      if (m_(i, j) < 0) m_ = -m_;
      break;
    }
  }
}

RescaledLimit rescaled_limit(const std::vector<Mat>& seq, double tol) {
  if (seq.empty()) throw std::invalid_argument("rescaled_limit: empty sequence");
  std::vector<double> scales;
  scales.reserve(seq.size());
  for (const auto& g : seq) {
    const double n = g.norm();
    if (!(n > 0.0)) throw std::invalid_argument("rescaled_limit: zero matrix in sequence");
    scales.push_back(1.0 / n);
  }
  ProjectiveMatrix last(seq.back());
  double residual = 0.0;
  if (seq.size() > 1) {
    ProjectiveMatrix prev(seq[seq.size() - 2]);
    residual = (last.matrix() - prev.matrix()).norm();
  }
  return RescaledLimit{last, residual, residual <= tol, std::move(scales)};
}

bool is_unbounded(const std::vector<Mat>& seq, double threshold) {
  for (const auto& g : seq)
    if (g.norm() > threshold) return true;
  return false;
}

KernelImage kernel_and_image(const Mat& phi, double rel_tol) {
  Eigen::JacobiSVD<Mat> svd(phi, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (smax > 0.0 && s(i) > rel_tol * smax) ++rank;
  KernelImage out;
  out.rank = rank;
  out.image = svd.matrixU().leftCols(rank);
  out.kernel = svd.matrixV().rightCols(phi.cols() - rank);
  return out;
}

double isotropy_defect(const Mat& basis, const QuadraticForm& Q) {
  if (basis.cols() == 0) throw std::invalid_argument("trivial subspace");
  if (basis.rows() != Q.dim()) throw std::invalid_argument("isotropy: dimension mismatch");
  const Mat gram = basis.transpose() * Q.signature() * basis;
  return gram.cwiseAbs().maxCoeff();
}

bool is_totally_isotropic(const Mat& basis, const QuadraticForm& Q, double tol) {
  return isotropy_defect(basis, Q) <= tol;
}

bool avoidance_check(const Mat& phi, const Mat& samples, double tol) {
  if (samples.cols() == 0) throw std::invalid_argument("avoidance_check: empty sample");
  for (Eigen::Index k = 0; k < samples.cols(); ++k) {
    const Vec x = samples.col(k);
    if ((phi * x).norm() > tol * x.norm()) return true;
  }
  return false;
}

Mat boost(int d, int i, int j, double t) {
  Mat g = Mat::Identity(d, d);
  g(i, i) = g(j, j) = std::cosh(t);
  g(i, j) = g(j, i) = std::sinh(t);
  return g;
}

Mat rotation(int d, int i, int j, double angle) {
  Mat g = Mat::Identity(d, d);
  g(i, i) = g(j, j) = std::cos(angle);
  g(i, j) = -std::sin(angle);
  g(j, i) = std::sin(angle);
  return g;
}

Mat sl_exp(const Mat& traceless) { return traceless.exp(); }

}  // namespace robust::forms
