#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "macrocoh/state.hpp"

namespace macrocoh {

// Eigenvalue differences too dense to resolve at the requested tolerance.
class AmbiguityError : public Error {
 public:
  using Error::Error;
};

/// The set of eigenvalue gaps of an observable.
///
/// Eigenvalues are first grouped into levels (degenerate within `tolerance`);
/// level differences are then grouped into gaps by single-linkage clustering.
/// Indices below refer to the observable's eigenvalue order (descending).
struct GapSet {
  std::vector<double> gaps;  // ascending; symmetric about 0; contains 0
  double tolerance = 0.0;
  std::vector<int> level_of;   // eigen index -> level
  std::vector<double> levels;  // level representative eigenvalue, descending
  Eigen::MatrixXi level_gap;   // (level, level) -> index into gaps

  std::size_t size() const { return gaps.size(); }
  std::size_t zero_index() const { return (gaps.size() - 1) / 2; }
  /// Gap index of eigen pair (i, j), i.e. of a_i - a_j.
  int label(Eigen::Index i, Eigen::Index j) const {
    return level_gap(level_of[static_cast<std::size_t>(i)], level_of[static_cast<std::size_t>(j)]);
  }
  std::optional<std::size_t> find(double delta) const;
  /// Like find, but throws ValidationError when delta is not a gap.
  std::size_t index_of(double delta) const;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> index_pairs(std::size_t gap) const;
};

/// Default grouping tolerance: 1e-9 times the spectral range (1e-9 for a
/// multiple of the identity).
double default_gap_tolerance(const Observable& a);

GapSet gap_set(const Observable& a, std::optional<double> group_tolerance = std::nullopt);

enum class Basis { eigen, computational };

/// One block rho^(delta) of the mode decomposition.
struct ModeComponent {
  double delta = 0.0;
  Matrix block;
  Basis basis = Basis::eigen;
};

/// Keeps the entries (i, j) of an eigenbasis matrix whose gap label is `gap`.
Matrix mode_filter(const Matrix& in_eigenbasis, const GapSet& gaps, std::size_t gap);

/// Mode component of an arbitrary operator given in the computational basis.
ModeComponent mode_component(const Matrix& op, const Observable& a, const GapSet& gaps,
                             double delta, Basis out = Basis::eigen);
ModeComponent mode_component(const DensityMatrix& rho, const Observable& a, double delta,
                             Basis out = Basis::eigen);

/// All components, ordered by ascending delta; they sum to rho.
std::vector<ModeComponent> mode_decompose(const DensityMatrix& rho, const Observable& a,
                                          std::optional<double> group_tolerance = std::nullopt);

Matrix to_computational(const ModeComponent& c, const Observable& a);

/// Trace norm of the delta component.
double delta_coherence_norm(const Matrix& op, const Observable& a, const GapSet& gaps, double delta);
double delta_coherence_norm(const DensityMatrix& rho, const Observable& a, double delta);

/// Trace norm of (|psi><psi|)^(delta) without forming the projector:
/// sum over level pairs (L, M) with gap delta of ||P_L psi|| ||P_M psi||.
double pure_delta_coherence_norm(const PureState& psi, const Observable& a, const GapSet& gaps,
                                 double delta);

/// rho^(0) in the computational basis (block dephasing over A's eigenspaces).
Matrix dephase(const Matrix& rho, const Observable& a, const GapSet& gaps);

}  // namespace macrocoh
