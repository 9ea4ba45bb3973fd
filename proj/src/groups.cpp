#include "robust/groups.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace robust::rep {

using forms::boost;
using forms::rotation;

void FinGenGroup::validate_word(const Word& w) const {
  for (int l : w)
    if (l == 0 || std::abs(l) > rank())
      throw std::invalid_argument("word letter " + std::to_string(l) + " outside the generating set");
}

Word reduce(const Word& w) {
  Word out;
  for (int l : w) {
    if (!out.empty() && out.back() == -l) out.pop_back();
    else out.push_back(l);
  }
  return out;
}

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& l : out) l = -l;
  return out;
}

int word_length(const Word& w) { return static_cast<int>(reduce(w).size()); }

std::vector<Word> ball(int rank, int n) {
  std::vector<Word> out{{}};
  size_t start = 0;
  for (int len = 1; len <= n; ++len) {
    const size_t end = out.size();
    for (size_t i = start; i < end; ++i)
      for (int g = 1; g <= rank; ++g)
        for (int l : {g, -g}) {
          if (!out[i].empty() && out[i].back() == -l) continue;
          Word w = out[i];
          w.push_back(l);
          out.push_back(std::move(w));
        }
    start = end;
  }
  return out;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "e";
  std::ostringstream os;
  for (size_t i = 0; i < w.size(); ++i) os << (i ? " " : "") << w[i];
  return os.str();
}

Word parse_word(const std::string& s) {
  std::istringstream is(s);
  Word w;
  std::string tok;
  while (is >> tok) {
    if (tok == "e") continue;
    size_t pos = 0;
    int l = 0;
    try {
      l = std::stoi(tok, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad word letter '" + tok + "'");
    }
    if (pos != tok.size() || l == 0) throw std::invalid_argument("bad word letter '" + tok + "'");
    w.push_back(l);
  }
  return w;
}

Mat evaluate(const Representation& rho, const Word& w) {
  rho.group.validate_word(w);
  const int d = rho.dim();
  Mat out = Mat::Identity(d, d);
  std::vector<Mat> inv;
  for (int l : w) {
    if (l > 0) {
      out = out * rho.matrices[l - 1];
    } else {
      if (inv.empty()) {
        for (const auto& m : rho.matrices) inv.push_back(m.inverse());
      }
      out = out * inv[-l - 1];
    }
  }
  return out;
}

double relator_defect(const Representation& rho) {
  double worst = 0.0;
  const int d = rho.dim();
  for (const auto& r : rho.group.relators) worst = std::max(worst, (evaluate(rho, r) - Mat::Identity(d, d)).norm());
  return worst;
}

void validate(const Representation& rho, double tol) {
  if (rho.matrices.size() != rho.group.generators.size())
    throw std::invalid_argument("representation: one matrix per generator required");
  const int d = rho.dim();
  for (const auto& m : rho.matrices) {
    if (m.rows() != d || m.cols() != d) throw std::invalid_argument("representation: matrix size mismatch");
    if (rho.tag == forms::GroupTag::SO && rho.form.dim() != d)
      throw std::invalid_argument("representation: form dimension mismatch");
    if (!forms::is_member(m, rho.tag, rho.form)) throw std::invalid_argument("representation: matrix outside the group");
  }
  for (const auto& r : rho.group.relators) rho.group.validate_word(r);
  if (relator_defect(rho) > tol) throw std::invalid_argument("representation: relator not satisfied");
}

Representation conjugate(const Representation& rho, const Mat& g) {
  Representation out = rho;
  const Mat gi = g.inverse();
  for (auto& m : out.matrices) m = g * m * gi;
  return out;
}

namespace {
Representation so21(FinGenGroup grp, std::vector<Mat> mats) {
  Representation r;
  r.group = std::move(grp);
  r.matrices = std::move(mats);
  r.tag = forms::GroupTag::SO;
  r.form = forms::QuadraticForm(2, 1);
  return r;
}
}  // namespace

Representation triangle_237() {
  using std::numbers::pi;
  // right angle at the origin, pi/3 at a vertex on the e1 axis
  const double a = std::acosh(std::cos(pi / 7) / std::sin(pi / 3));
  const Mat Bq = boost(3, 0, 2, a);
  const Mat x = rotation(3, 0, 1, pi);
  const Mat y = Bq * rotation(3, 0, 1, 2 * pi / 3) * Bq.inverse();
  return so21({{"x", "y"}, {{1, 1}, {2, 2, 2}, {1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2}}}, {x, y});
}

Representation genus2() {
  using std::numbers::pi;
  const double d = std::acosh(1.0 / std::tan(pi / 8));
  std::vector<Mat> T;
  for (int k = 0; k < 4; ++k) T.push_back(rotation(3, 0, 1, k * pi / 4) * boost(3, 0, 2, 2 * d) * rotation(3, 0, 1, -k * pi / 4));
  return so21({{"t0", "t1", "t2", "t3"}, {{1, -2, 3, -4, -1, 2, -3, 4}}}, T);
}

Representation parabolic(double s) {
  // exp of the nilpotent generator of the stabilizer of the null vector (1, 0, 1)
  Mat N = Mat::Zero(3, 3);
  N(0, 1) = s;
  N(1, 0) = -s;
  N(1, 2) = s;
  N(2, 1) = s;
  const Mat P = Mat::Identity(3, 3) + N + 0.5 * N * N;
  return so21({{"p"}, {}}, {P});
}

Representation embed_so22(const Representation& rho) {
  if (rho.dim() != 3) throw std::invalid_argument("embed_so22: expects 3x3 matrices");
  Representation out = rho;
  out.form = forms::QuadraticForm(2, 2);
  out.tag = forms::GroupTag::SO;
  for (auto& m : out.matrices) {
    Mat b = Mat::Identity(4, 4);
    b.topLeftCorner(3, 3) = m;
    m = b;
  }
  return out;
}

Representation as_sl3(const Representation& rho) {
  if (rho.dim() != 3) throw std::invalid_argument("as_sl3: expects 3x3 matrices");
  Representation out = rho;
  out.tag = forms::GroupTag::SL;
  return out;
}

}  // namespace robust::rep
