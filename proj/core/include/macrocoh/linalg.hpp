#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace macrocoh {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

// Error hierarchy. Every library failure is one of these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented invariant. `violations` lists each broken bound
// with its measured magnitude.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Requested dimension exceeds the configured cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Tolerances for state and observable validation.
struct Tolerances {
  double hermiticity = 1e-10;  // max |H - H^dagger| entry, relative to max(1, max|H|)
  double trace = 1e-10;
  double negativity = 1e-10;  // smallest admissible eigenvalue is -negativity
  double normalization = 1e-10;
};

inline constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 16;

// Eigenvalues sorted descending, eigenvectors as columns. Each eigenvector has
// its largest-magnitude component real and positive.
struct Eigensystem {
  RealVector values;
  Matrix vectors;

  Matrix reconstruct() const;
};

// Largest entry of |H - H^dagger|.
double hermiticity_residual(const Matrix& h);

bool is_diagonal(const Matrix& m);

// Throws ValidationError when `h` is not Hermitian within tolerance.
Eigensystem spectral_decompose(const Matrix& h, const Tolerances& tol = {});

// Applies f to the spectrum of a Hermitian matrix: V f(Lambda) V^dagger.
Matrix hermitian_function(const Eigensystem& es, const std::function<double(double)>& f);

// Principal square root of a nominally positive semidefinite Hermitian
// matrix. Eigenvalues in [-clamp, 0) are treated as zero; anything below
// -clamp raises ValidationError.
Matrix psd_sqrt(const Matrix& h, double clamp = 1e-10);

// exp(-i t H) for Hermitian H.
Matrix unitary_exp(const Matrix& h, double t);

// Sum of singular values.
double trace_norm(const Matrix& m);

// Kronecker product, first factor is the slow index:
// (X (x) Y)(i*ry + k, j*cy + l) = X(i,j) * Y(k,l).
Matrix tensor_product(const Matrix& x, const Matrix& y,
                      std::size_t dimension_cap = kDefaultDimensionCap);
Vector tensor_product(const Vector& x, const Vector& y,
                      std::size_t dimension_cap = kDefaultDimensionCap);

Matrix hermitian_part(const Matrix& m);

Matrix commutator(const Matrix& a, const Matrix& b);

// Throws ValidationError if any entry is NaN or infinite.
void require_finite(const Matrix& m, const std::string& what);

}  // namespace macrocoh
