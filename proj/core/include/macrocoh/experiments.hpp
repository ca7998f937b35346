#pragma once

#include <span>
#include <vector>

#include "macrocoh/measures.hpp"

namespace macrocoh {

/// Columns sqrt(2/N) (|0^{N-k} 1^k> + |1^{N-k} 0^k>)/sqrt(2), k = 0..N/2-1.
/// N even, 2 <= N <= 14.
Matrix rho_n_factor(int n);

/// The uniform mixture of the rho_n_factor columns as a dense state. N even,
/// 2 <= N <= 12 (a dense 2^14 state does not fit in desk memory).
DensityMatrix build_rho_n(int n);

/// (|0...0> + |1...1>)/sqrt(2), 1 <= N <= 14.
PureState ghz_state(int n);

/// Diagonal of Z = sum_i Z_i, site 0 the slowest index.
RealVector collective_z_diagonal(int n);
/// Z = sum_i Z_i as an observable, 1 <= N <= 12.
Observable collective_z(int n);

double scaling_qfi_formula(int n);  // 4 (N+1)(N+2) / 3
double scaling_il_formula(int n);   // sum_{k=0}^{N/2} (2/N)^2 (N-2k)^2

struct ScalingRow {
  int n = 0;
  double qfi_value = 0.0;
  double il_value = 0.0;
  double qfi_formula = 0.0;
  double il_formula = 0.0;

  double ratio() const { return qfi_value / il_value; }
  /// Both values within rel_tol of their formulas.
  bool consistent(double rel_tol = 1e-8) const;
};

/// qfi and il_measure of rho_N against Z for each N, evaluated from the
/// support so that N = 14 needs no dense matrices.
std::vector<ScalingRow> scaling_table(std::span<const int> ns);

struct CopyProfile {
  int n = 0;            // copies of psi
  int m_requested = 0;  // round(n V(psi) / V(phi))
  int m = 0;            // copies of phi actually used
  bool capped = false;  // m limited by the dimension cap
  double x0 = 0.0;      // n <A>_psi - m <A>_phi
  std::vector<double> delta_grid;
  std::vector<double> psi_norms;
  std::vector<double> phi_norms;
  std::vector<double> vanishing_gaps;  // grid gaps where both norms are below 1e-12
  double profile_distance = 0.0;
};

/// Compares the delta-coherence profiles of psi^{(x)n} and phi^{(x)m} under the
/// collective observable sum_i A_i. Norms come from the level distribution of
/// the product state (a convolution of single-site weights) and the pure-state
/// identity ||(|v><v|)^(delta)||_1 = sum_X sqrt(p(X) p(X - delta)). Profiles are
/// linearly interpolated onto the union of both gap grids. Both profiles are
/// functions of gaps only, so the mean shift x0 is reported but leaves them
/// unchanged.
CopyProfile copy_equivalence(const PureState& psi, const Observable& a_single, const PureState& phi, int n,
                             std::size_t dimension_cap = std::size_t{1} << 14);

}  // namespace macrocoh
