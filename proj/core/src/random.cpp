#include "macrocoh/random.hpp"

#include <cmath>

namespace macrocoh {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix g(rows, cols);
  // Column-major fill order is part of the determinism contract.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

Matrix haar_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  if (cols > rows) throw ValidationError({"haar_isometry needs cols <= rows"});
  const Matrix g = gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  const Matrix& r = qr.matrixQR();
  // Fixing the phases of diag(R) makes the distribution exactly Haar.
  for (Eigen::Index k = 0; k < cols; ++k) {
    const cplx d = r(k, k);
    const double a = std::abs(d);
    if (a > 0.0) q.col(k) *= d / a;
  }
  return q;
}

Matrix random_unitary(Eigen::Index dim, Rng& rng) { return haar_isometry(dim, dim, rng); }

Matrix random_hermitian(Eigen::Index dim, Rng& rng) {
  const Matrix g = gaussian_matrix(dim, dim, rng);
  return hermitian_part(g);
}

}  // namespace macrocoh
