#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "macrocoh/measures.hpp"
#include "macrocoh/modes.hpp"

namespace macrocoh {

/// Kraus operators (computational basis), each labelled with the single gap
/// delta on which it is supported in the observable's eigenbasis.
struct FreeChannel {
  std::vector<Matrix> kraus;
  std::vector<double> mode_labels;
  bool trace_preserving = true;

  Eigen::Index dim() const;
  /// sum_k K^dagger K.
  Matrix completeness() const;
};

/// Random covariant channel. Kraus operator k gets Gaussian entries on the
/// eigenbasis pairs with gap mode_choices[k % size], the set is rescaled so
/// that ||sum K^dagger K|| = scale, and, when `complete`, the gap-0 operator
/// sqrt(I - sum K^dagger K) is prepended to make it trace preserving.
/// n_kraus = 0 gives the identity channel.
FreeChannel random_free_channel(const Observable& a, std::span<const double> mode_choices, std::size_t n_kraus,
                                double scale, std::uint64_t seed, bool complete = true);

/// On system (x) ancilla: discards the ancilla and prepares |target>.
/// Kraus operators are I (x) |target><j|, all with gap 0 for observables of
/// the form A (x) I.
FreeChannel ancilla_reset_channel(Eigen::Index system_dim, const PureState& target);

struct CovarianceVerdict {
  bool passed = false;
  bool support_ok = false;
  double max_residual = 0.0;  // largest ||E(T_x rho) - T_x E(rho)||_1
  std::vector<std::string> violations;
};

/// Checks every Kraus operator against its gap label, then compares
/// E(T_x rho) with T_x E(rho) for `n_samples` random phases and full-rank states.
CovarianceVerdict verify_covariance(const FreeChannel& channel, const Observable& a, std::size_t n_samples = 8,
                                    std::uint64_t seed = 0, double tolerance = 1e-9);

/// sum_k K rho K^dagger for any operator rho.
Matrix apply_kraus(const FreeChannel& channel, const Matrix& rho);
/// Deterministic action; the output is renormalized if the channel is not
/// trace preserving.
DensityMatrix apply_channel(const FreeChannel& channel, const DensityMatrix& rho);

struct Outcome {
  std::size_t kraus_index = 0;
  double probability = 0.0;
  DensityMatrix state;
};

inline constexpr double kOutcomeCutoff = 1e-14;

/// Normalized outcomes K rho K^dagger / p with p = tr(K rho K^dagger); outcomes
/// with p below kOutcomeCutoff are dropped.
std::vector<Outcome> apply_selective(const FreeChannel& channel, const DensityMatrix& rho);

struct MonotonicityReport {
  MeasureId measure_id = MeasureId::qfi;
  double before = 0.0;
  double deterministic_after = 0.0;
  std::vector<std::pair<double, double>> selective;  // (p, value)
  double average_after = 0.0;
  bool m2a = false;  // deterministic_after <= before + slack
  bool m2b = false;  // average_after <= before + slack
  double slack = 1e-8;
};

/// Measure value used by the monotonicity checks. For `variance` a mixed
/// state is scored by its convex-roof extension qfi/4.
double monotone_value(MeasureId id, const DensityMatrix& rho, const Observable& a, const MeasureOptions& opts = {});

MonotonicityReport monotonicity_report(MeasureId id, const DensityMatrix& rho, const Observable& a,
                                       const FreeChannel& channel, const MeasureOptions& opts = {},
                                       double slack = 1e-8);

}  // namespace macrocoh
