#pragma once

#include <memory>
#include <span>
#include <vector>

#include "macrocoh/state.hpp"

namespace macrocoh {

// A bosonic state or operator does not fit in the truncated Fock space.
class TruncationError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kDefaultFockDim = 40;
// Largest admissible weight on the top two Fock levels of any mode.
inline constexpr double kTruncationWeightBound = 1e-6;

/// Truncated Fock space of `n_modes` modes with `dim_per_mode` levels each.
///
/// Quadratures are x = (a + a^dagger)/sqrt(2), p = (a - a^dagger)/(i sqrt(2)),
/// so [x, p] = i on every level except the top one. Mode 0 is the slowest
/// tensor index. Operators are built once and shared between copies.
class FockSpace {
 public:
  FockSpace(int n_modes, int dim_per_mode, std::size_t dimension_cap = kDefaultDimensionCap);

  int n_modes() const { return n_modes_; }
  int dim_per_mode() const { return dim_per_mode_; }
  Eigen::Index dim() const { return dim_; }

  const Matrix& annihilation(int mode) const;
  const Matrix& creation(int mode) const;
  const Matrix& position(int mode) const;
  const Matrix& momentum(int mode) const;
  Matrix number(int mode) const;
  /// cos(theta) x + sin(theta) p on `mode`.
  Matrix quadrature(int mode, double theta) const;

  /// Largest weight, over modes, that rho puts on the top `levels` Fock levels.
  double edge_weight(const DensityMatrix& rho, int levels = 2) const;
  /// Throws TruncationError when edge_weight exceeds `bound`.
  void require_healthy(const DensityMatrix& rho, double bound = kTruncationWeightBound) const;

  /// Embeds a single-mode operator on `mode`.
  Matrix embed(const Matrix& single_mode, int mode) const;

 private:
  struct Operators {
    std::vector<Matrix> a, ad, x, p;
  };

  void check_mode(int mode) const;

  int n_modes_;
  int dim_per_mode_;
  Eigen::Index dim_;
  std::shared_ptr<const Operators> ops_;
};

/// Single-mode ladder operator with sqrt(n) on the first superdiagonal.
Matrix annihilation_matrix(int dim);

struct StateRecipe {
  enum class Kind { number, coherent, cat, squeezed };
  Kind kind = Kind::number;
  int n = 0;
  cplx alpha{0.0, 0.0};
  cplx xi{0.0, 0.0};

  static StateRecipe number_state(int n);
  static StateRecipe coherent(cplx alpha);
  /// Normalized |alpha> + |-alpha>.
  static StateRecipe cat(cplx alpha);
  /// exp((xi^* a^2 - xi a^dagger^2)/2) |alpha>.
  static StateRecipe squeezed(cplx xi, cplx alpha = {0.0, 0.0});
};

/// Throws TruncationError unless the recipe's a-priori bound holds:
/// n <= dim - 3 for number states, |alpha|^2 + 4|alpha| <= dim for
/// coherent, cat and the displacement part of squeezed states.
void check_recipe_health(const StateRecipe& recipe, int dim_per_mode);

/// Builds a single-mode state on `fock` (which must have one mode).
/// Squeezed states are built in a padded workspace and rejected when more
/// than kTruncationWeightBound of their weight lands on or beyond the top two
/// retained levels.
PureState standard_state(const StateRecipe& recipe, const FockSpace& fock);

/// exp(alpha a^dagger - alpha^* a) for one mode, by spectral exponential in a
/// workspace padded by 2*ceil(|alpha|^2) levels and projected back.
Matrix displacement_operator(cplx alpha, int dim_per_mode);
/// Product of single-mode displacements, one amplitude per mode.
Matrix displacement_operator(std::span<const cplx> alpha, const FockSpace& fock);

/// Exact matrix elements <m|D(alpha)|n> for m, n < dim (generalized Laguerre
/// form); no truncation of the exponential is involved.
Matrix displacement_elements(cplx alpha, int dim);

/// chi(alpha) = tr[rho D(alpha)]. Uses exact displacement matrix elements, so
/// it is valid for any |alpha| given the truncated rho.
cplx characteristic_function(const DensityMatrix& rho, std::span<const cplx> alpha, const FockSpace& fock);
cplx characteristic_function(const DensityMatrix& rho, cplx alpha, const FockSpace& fock);

}  // namespace macrocoh
