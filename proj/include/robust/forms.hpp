#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace robust {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace forms {

inline constexpr double kGroupTol = 1e-9;
inline constexpr double kRankCutoff = 1e-8;
inline constexpr double kUnboundedNorm = 1e6;

/// Signature (p, q+1) form on R^{p+q+1}: J = diag(+1 x p, -1 x (q+1)).
class QuadraticForm {
 public:
  QuadraticForm(int p, int q_plus_1);

  int p() const { return p_; }
  int q_plus_1() const { return q1_; }
  int q() const { return q1_ - 1; }
  int dim() const { return p_ + q1_; }

  /// Diagonal signature matrix J.
  Mat signature() const;
  double sign(int i) const { return i < p_ ? 1.0 : -1.0; }

  double operator()(const Vec& z, const Vec& w) const;

  /// J-adjoint of a map: the phi^t with <phi v, u> = <v, phi^t u>.
  Mat adjoint(const Mat& phi) const;

  bool operator==(const QuadraticForm&) const = default;

 private:
  int p_;
  int q1_;
};

/// z^T J z'.  Throws std::invalid_argument on dimension mismatch.
double bilinear(const Vec& z, const Vec& zp, const QuadraticForm& Q);

enum class GroupTag { SO, SL };

std::string to_string(GroupTag tag);
GroupTag group_tag_from_string(const std::string& s);

/// Membership of g in SO(p,q+1) (tag SO, using Q) or SL(d,R) (tag SL).
bool is_member(const Mat& g, GroupTag tag, const QuadraticForm& Q, double tol = kGroupTol);
bool is_member_sl(const Mat& g, double tol = kGroupTol);

/// Matrix normalized to unit Frobenius norm, sign fixed by first nonzero entry > 0.
class ProjectiveMatrix {
 public:
  explicit ProjectiveMatrix(const Mat& m);
  const Mat& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

 private:
  Mat m_;
};

struct RescaledLimit {
  ProjectiveMatrix limit;
  double residual;  // Frobenius gap between the last two normalized iterates
  bool converged;
  std::vector<double> scales;  // a_n = 1 / ||g_n||_F
};

/// Projective limit of g_n / ||g_n||_F.  A residual above tol means the
/// sequence has no projective limit (converged = false).
RescaledLimit rescaled_limit(const std::vector<Mat>& seq, double tol = 1e-6);

/// True when the sequence leaves every bounded set at the configured threshold.
bool is_unbounded(const std::vector<Mat>& seq, double threshold = kUnboundedNorm);

struct KernelImage {
  Mat kernel;  // columns: orthonormal basis of Ker(phi)
  Mat image;   // columns: orthonormal basis of Im(phi)
  int rank;
};

KernelImage kernel_and_image(const Mat& phi, double rel_tol = kRankCutoff);
inline KernelImage kernel_and_image(const ProjectiveMatrix& phi, double rel_tol = kRankCutoff) {
  return kernel_and_image(phi.matrix(), rel_tol);
}

/// All Gram entries w_i^T J w_j within tol.  Throws on an empty basis.
bool is_totally_isotropic(const Mat& basis, const QuadraticForm& Q, double tol);

/// Largest |w_i^T J w_j| over the basis.
double isotropy_defect(const Mat& basis, const QuadraticForm& Q);

/// True iff some sample column x has |phi x| > tol |x|, i.e. the sample is not inside Ker(phi).
bool avoidance_check(const Mat& phi, const Mat& samples, double tol = 1e-8);

// Elementary group elements used throughout the tests and scenarios.

/// Hyperbolic rotation mixing coordinate i (positive) with coordinate j (negative).
Mat boost(int d, int i, int j, double t);
/// Euclidean rotation in the (i, j) plane.
Mat rotation(int d, int i, int j, double angle);
/// Random element of SO_0(p,q+1) as a product of boosts and rotations.
template <class Rng>
Mat random_so(const QuadraticForm& Q, Rng& rng, double scale = 1.0);
/// Random element of SL(d,R) near the identity (exp of a traceless matrix).
template <class Rng>
Mat random_sl(int d, Rng& rng, double scale = 0.5);

Mat sl_exp(const Mat& traceless);

}  // namespace forms
}  // namespace robust

#include <random>

namespace robust::forms {

template <class Rng>
Mat random_so(const QuadraticForm& Q, Rng& rng, double scale) {
  std::uniform_real_distribution<double> U(-scale, scale);
  const int d = Q.dim();
  Mat g = Mat::Identity(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const bool mixed = (i < Q.p()) != (j < Q.p());
      g = g * (mixed ? boost(d, i, j, U(rng)) : rotation(d, i, j, 3.0 * U(rng)));
    }
  }
  return g;
}

template <class Rng>
Mat random_sl(int d, Rng& rng, double scale) {
  std::normal_distribution<double> N(0.0, scale);
  Mat a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = N(rng);
  a -= (a.trace() / d) * Mat::Identity(d, d);
  return sl_exp(a);
}

}  // namespace robust::forms
