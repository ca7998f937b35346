#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "macrocoh/linalg.hpp"

namespace macrocoh {

// Eigenvalues at or below this are treated as exact zeros by every spectral
// formula in the library.
inline constexpr double kRankCutoff = 1e-12;

/// A normalized state vector.
class PureState {
 public:
  /// Validates that `amplitudes` has unit norm within `tol.normalization`.
  explicit PureState(Vector amplitudes, const Tolerances& tol = {});

  /// Rescales a nonzero vector to unit norm.
  static PureState normalized(const Vector& v);
  static PureState basis(Eigen::Index dim, Eigen::Index index);

  Eigen::Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  Matrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  Vector amplitudes_;
};

PureState tensor_product(const PureState& a, const PureState& b,
                         std::size_t dimension_cap = kDefaultDimensionCap);

// Eigenpairs with eigenvalue above a cutoff.
struct Support {
  RealVector values;
  Matrix vectors;  // dim x rank, orthonormal columns
};

/// Support eigenpairs of W W^dagger / tr(W W^dagger) from the Gram matrix
/// W^dagger W, without forming the dim x dim product.
Support factor_support(const Matrix& w);

/// Hermitian, positive, unit-trace matrix with its spectral decomposition.
///
/// The spectrum is computed at construction, so instances are immutable and
/// safe to share between threads. States built from a low-rank factor store
/// only the support eigenpairs; the kernel is implicit.
class DensityMatrix {
 public:
  static DensityMatrix from_pure(const PureState& psi);
  /// rho = W W^dagger / tr(W W^dagger). Low-rank factors keep a support-only
  /// spectrum obtained from the Gram matrix.
  static DensityMatrix from_factor(const Matrix& w);
  /// sum_k p_k |psi_k><psi_k|; weights must be nonnegative and sum to one.
  static DensityMatrix from_ensemble(std::span<const double> weights,
                                     std::span<const PureState> states);
  static DensityMatrix maximally_mixed(Eigen::Index dim);

  Eigen::Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }
  /// Descending; may hold only the support.
  const RealVector& eigenvalues() const { return spectrum_.values; }
  const Matrix& eigenvectors() const { return spectrum_.vectors; }
  const Eigensystem& spectrum() const { return spectrum_; }

  Support support(double cutoff = kRankCutoff) const;
  Eigen::Index rank(double cutoff = kRankCutoff) const;
  double purity() const;

  /// U rho U^dagger with the spectrum carried over exactly.
  DensityMatrix rotated(const Matrix& unitary) const;

 private:
  DensityMatrix(Matrix m, Eigensystem es) : matrix_(std::move(m)), spectrum_(std::move(es)) {}
  friend DensityMatrix validate_density(const Matrix& rho, const Tolerances& tol);
  friend DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b,
                                      std::size_t dimension_cap);

  Matrix matrix_;
  Eigensystem spectrum_;
};

/// Checks squareness, finiteness, Hermiticity, unit trace and positivity.
/// Throws ValidationError listing every violated bound with its magnitude.
DensityMatrix validate_density(const Matrix& rho, const Tolerances& tol = {});

/// Hermitizes and renormalizes `rho` before validating; used on the outputs of
/// channels and integrators where rounding drift is expected.
DensityMatrix repair_density(const Matrix& rho, const Tolerances& tol = {});

/// Hermitian operator with cached eigensystem (eigenvalues descending).
class Observable {
 public:
  explicit Observable(const Matrix& m, const Tolerances& tol = {});
  static Observable diagonal(const RealVector& values);
  /// Trusted construction from a known orthonormal eigensystem.
  static Observable from_eigensystem(Eigensystem es);

  Eigen::Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }
  const RealVector& eigenvalues() const { return spectrum_.values; }
  const Matrix& eigenvectors() const { return spectrum_.vectors; }
  const Eigensystem& spectrum() const { return spectrum_; }
  double spectral_range() const;

  Matrix to_eigenbasis(const Matrix& m) const;
  Matrix from_eigenbasis(const Matrix& m) const;

 private:
  Observable(Matrix m, Eigensystem es) : matrix_(std::move(m)), spectrum_(std::move(es)) {}
  friend Observable tensor_product(const Observable& a, const Observable& b,
                                   std::size_t dimension_cap);

  Matrix matrix_;
  Eigensystem spectrum_;
};

Observable tensor_product(const Observable& a, const Observable& b,
                          std::size_t dimension_cap = kDefaultDimensionCap);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b,
                             std::size_t dimension_cap = kDefaultDimensionCap);

/// Reduced state on the subsystems listed in `keep` (any order; the result
/// uses ascending subsystem order). An empty `keep` gives the 1x1 state [1].
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Eigen::Index> dims,
                            std::span<const Eigen::Index> keep);

/// Normalized G G^dagger for a dim x rank matrix G of standard complex
/// Gaussians drawn from `seed`.
DensityMatrix random_density(Eigen::Index dim, Eigen::Index rank, std::uint64_t seed);
PureState random_pure_state(Eigen::Index dim, std::uint64_t seed);

/// exp(-i x A) rho exp(i x A), built in the eigenbasis of A.
DensityMatrix phase_conjugate(const DensityMatrix& rho, const Observable& a, double x);
/// The unitary exp(-i x A).
Matrix phase_unitary(const Observable& a, double x);

}  // namespace macrocoh
