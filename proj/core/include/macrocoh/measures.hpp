#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "macrocoh/state.hpp"

namespace macrocoh {

enum class MeasureId { variance, qfi, qfi_bures, skew, il, rel_ent, roof, delta_norm };

std::string_view to_string(MeasureId id);
std::optional<MeasureId> parse_measure_id(std::string_view name);

struct ConvexRoofConfig {
  std::size_t n_decompositions = 2000;
  // Size of each sampled ensemble; 0 means rank(rho).
  std::size_t max_ensemble_size = 0;
  std::uint64_t seed = 0;
};

struct MeasureOptions {
  double rank_cutoff = kRankCutoff;
  double bures_dx = 1e-4;
  double delta = 0.0;  // only for delta_norm
  ConvexRoofConfig roof{};
};

struct MeasureReport {
  double value = 0.0;
  MeasureId measure_id = MeasureId::qfi;
  double rank_cutoff = kRankCutoff;
  Eigen::Index rank = 0;
  std::size_t terms_skipped = 0;  // ordered eigen pairs with lambda_a + lambda_b <= cutoff
};

/// <A^2> - <A>^2.
double variance(const PureState& psi, const Matrix& a);
double variance(const PureState& psi, const Observable& a);

/// Quantum Fisher information of rho under exp(-ixA):
///   2 sum_{a,b} (l_a - l_b)^2 / (l_a + l_b) |<a|A|b>|^2
/// over pairs with l_a + l_b above `rank_cutoff`. Only the support of rho is
/// diagonalized; pairs touching the kernel are summed through A^2.
double qfi(const DensityMatrix& rho, const Matrix& a, double rank_cutoff = kRankCutoff);
double qfi(const DensityMatrix& rho, const Observable& a, double rank_cutoff = kRankCutoff);

/// qfi and il_measure from support eigenpairs `s` and image = A * s.vectors,
/// for states too large to hold densely.
double qfi_from_support(const Support& s, const Matrix& image);
double il_from_support(const Support& s, const Matrix& image);

/// tr sqrt(sqrt(rho) sigma sqrt(rho)), evaluated on the support of rho.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// 8 (1 - Fid(rho, T_dx(rho))) / dx^2. Independent of the spectral formula;
/// used to cross-check qfi.
double qfi_bures_oracle(const DensityMatrix& rho, const Observable& a, double dx = 1e-4);

/// -1/2 tr([sqrt(rho), A]^2).
double skew_information(const DensityMatrix& rho, const Matrix& a);
double skew_information(const DensityMatrix& rho, const Observable& a);

/// -1/2 tr([rho, A]^2).
double il_measure(const DensityMatrix& rho, const Matrix& a);
double il_measure(const DensityMatrix& rho, const Observable& a);

/// Von Neumann entropy in nats, 0 log 0 = 0.
double von_neumann_entropy(const RealVector& eigenvalues);

/// S(rho^(0)) - S(rho) in nats, rho^(0) the block dephasing of rho.
double relative_entropy_asymmetry(const DensityMatrix& rho, const Observable& a);

struct Decomposition {
  std::vector<double> weights;
  std::vector<PureState> states;
  double average_variance = 0.0;
};

struct RoofResult {
  double upper_bound = 0.0;   // smallest ensemble-average variance found
  double largest_average = 0.0;
  std::size_t samples = 0;
  std::size_t ensemble_size = 0;
  Decomposition best_ensemble;
};

/// Random search over pure-state decompositions of rho.
///
/// Decompositions come from Haar-random isometries applied to the
/// environment of the canonical purification, followed by a computational
/// basis measurement of the environment. Sample 0 is the spectral ensemble.
/// Every sample average is an upper bound on the convex roof of the variance,
/// which equals qfi/4.
RoofResult convex_roof_search(const DensityMatrix& rho, const Observable& a,
                              const ConvexRoofConfig& cfg = {});

/// Dispatch by id. `variance` requires a pure state; `roof` runs the search.
MeasureReport evaluate_measure(MeasureId id, const DensityMatrix& rho, const Observable& a,
                               const MeasureOptions& opts = {});

}  // namespace macrocoh
