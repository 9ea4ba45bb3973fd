#pragma once

#include "robust/forms.hpp"

#include <string>
#include <vector>

namespace robust::rep {

/// Signed 1-based generator indices: +i is generator i, -i its inverse.
using Word = std::vector<int>;

inline constexpr double kRepTol = 1e-8;

struct FinGenGroup {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  int rank() const { return static_cast<int>(generators.size()); }
  /// Throws std::invalid_argument on an index outside [-rank, rank] or equal to 0.
  void validate_word(const Word& w) const;
};

/// Free reduction (cancel adjacent s s^-1).
Word reduce(const Word& w);
Word inverse(const Word& w);
/// Length after free reduction.
int word_length(const Word& w);
/// All reduced words of length <= n in the free group on `rank` generators, by length.
std::vector<Word> ball(int rank, int n);

std::string to_string(const Word& w);
/// Parses whitespace-separated signed integers; "e" or an empty string is the identity.
Word parse_word(const std::string& s);

struct Representation {
  FinGenGroup group;
  std::vector<Mat> matrices;
  forms::GroupTag tag = forms::GroupTag::SL;
  forms::QuadraticForm form{1, 1};  // used when tag == SO

  int dim() const { return matrices.empty() ? 0 : static_cast<int>(matrices.front().rows()); }
};

/// Product of generator matrices (inverses for negative letters) in word order.
Mat evaluate(const Representation& rho, const Word& w);

/// Largest Frobenius distance of a relator image from the identity.
double relator_defect(const Representation& rho);
/// Throws std::invalid_argument when a relator misses the identity by more than tol or a
/// matrix fails group membership.
void validate(const Representation& rho, double tol = kRepTol);

/// g rho g^{-1}.
Representation conjugate(const Representation& rho, const Mat& g);

// Fuchsian corpus.  Matrices in SO(2,1) act on coordinates (e1, e2, f1) and preserve the
// hyperboloid z3^2 - z1^2 - z2^2 = 1.

/// Orientation-preserving (2,3,7) triangle group <x, y | x^2, y^3, (xy)^7>; x fixes the
/// origin (0,0,1).
Representation triangle_237();
/// Genus-2 surface group: side pairings T_0..T_3 of the regular octagon with angles pi/4
/// centred at the origin, pairing opposite sides.
Representation genus2();
/// Single parabolic generator fixing the boundary point (1,0,1), translation parameter s.
Representation parabolic(double s);

/// SO(2,1) representation block-embedded into SO(2,2) acting on (e1, e2, f1, f2).
Representation embed_so22(const Representation& rho);
/// The same matrices viewed in SL(3,R).
Representation as_sl3(const Representation& rho);

}  // namespace robust::rep
