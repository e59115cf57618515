#pragma once

#include "flrw/types.hpp"

namespace flrw {

// Determinant by explicit expansion, dimensions 1..3 only.
inline double det_small(const Mat& A) {
  switch (A.rows()) {
    case 1:
      return A(0, 0);
    case 2:
      return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    case 3:
      return A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) -
             A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
             A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
    default:
      throw std::invalid_argument("det_small: dimension must be 1..3");
  }
}

// Inverse through the cofactor formula, keeping the determinant in hand.
// Throws on a singular matrix; the caller decides what det <= 0 means.
inline Mat cofactor_inverse(const Mat& A, double& det) {
  det = det_small(A);
  if (det == 0.0) throw std::runtime_error("cofactor_inverse: singular matrix");
  const auto n = A.rows();
  Mat inv(n, n);
  if (n == 1) {
    inv(0, 0) = 1.0 / det;
  } else if (n == 2) {
    inv(0, 0) = A(1, 1) / det;
    inv(0, 1) = -A(0, 1) / det;
    inv(1, 0) = -A(1, 0) / det;
    inv(1, 1) = A(0, 0) / det;
  } else {
    inv(0, 0) = (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) / det;
    inv(0, 1) = (A(0, 2) * A(2, 1) - A(0, 1) * A(2, 2)) / det;
    inv(0, 2) = (A(0, 1) * A(1, 2) - A(0, 2) * A(1, 1)) / det;
    inv(1, 0) = (A(1, 2) * A(2, 0) - A(1, 0) * A(2, 2)) / det;
    inv(1, 1) = (A(0, 0) * A(2, 2) - A(0, 2) * A(2, 0)) / det;
    inv(1, 2) = (A(0, 2) * A(1, 0) - A(0, 0) * A(1, 2)) / det;
    inv(2, 0) = (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0)) / det;
    inv(2, 1) = (A(0, 1) * A(2, 0) - A(0, 0) * A(2, 1)) / det;
    inv(2, 2) = (A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0)) / det;
  }
  return inv;
}

}  // namespace flrw
