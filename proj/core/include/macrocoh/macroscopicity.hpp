#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "macrocoh/bosonic.hpp"
#include "macrocoh/measures.hpp"

namespace macrocoh {

struct SearchConfig {
  std::size_t restarts = 20;
  std::size_t max_sweeps = 200;
  double convergence_tol = 1e-10;  // stop when a sweep gains less than this
  std::uint64_t seed = 0;
};

/// v^T M v over coefficient vectors split into `n_blocks` blocks of
/// `block_dim` entries. Block i holds the coefficients of site or mode i.
struct QuadraticForm {
  int block_dim = 0;
  int n_blocks = 0;
  RealMatrix matrix;

  double value(const RealVector& v) const { return v.dot(matrix * v); }
};

/// M_kl = 2 sum_{a,b} (l_a - l_b)^2/(l_a + l_b) Re(<a|B_k|b><b|B_l|a>), so that
/// v.Mv = qfi(rho, sum_k v_k B_k). `basis_ops[i]` lists the operators of block
/// i; every block must have the same length.
QuadraticForm qfi_quadratic_form(const DensityMatrix& rho, const std::vector<std::vector<Matrix>>& basis_ops);
/// Same with weights (l_a - l_b)^2 / 2, so that v.Mv = il_measure.
QuadraticForm il_quadratic_form(const DensityMatrix& rho, const std::vector<std::vector<Matrix>>& basis_ops);

/// argmax of x^T m x + 2 x^T c over the unit sphere, by the secular equation
/// of the Lagrange condition. `current` is returned if it scores at least as
/// well, which keeps block updates monotone under rounding.
RealVector maximize_block(const RealMatrix& m, const RealVector& c, const RealVector& current);

struct AscentResult {
  RealVector v;
  double objective = 0.0;
  std::size_t sweeps = 0;
  std::size_t restart = 0;       // index of the winning restart
  std::vector<double> history;   // objective after every block update of the winner
  bool converged = false;
};

/// Block coordinate ascent of the form over a product of unit spheres.
/// Restart 0 starts from the blockwise-normalized top eigenvector of M; the
/// others start from random points. Ties between restarts go to the
/// lexicographically smallest vector.
AscentResult maximize_on_spheres(const QuadraticForm& form, const SearchConfig& cfg = {});

/// A = sum_i n_i . (X, Y, Z)_i with unit Bloch vectors n_i.
struct LocalObservableFamily {
  std::vector<Eigen::Vector3d> bloch_vectors;

  int n_sites() const { return static_cast<int>(bloch_vectors.size()); }
  Matrix observable() const;
};

/// (X_i, Y_i, Z_i) for each of n qubits, site 0 the slowest index.
std::vector<std::vector<Matrix>> pauli_basis_ops(int n_sites);

struct QubitNf {
  double value = 0.0;  // qfi / (4N), in [0, N]
  LocalObservableFamily family;
  AscentResult ascent;
};

/// Effective size over sums of local unit-norm qubit observables.
QubitNf nf_qubits(const DensityMatrix& rho, const SearchConfig& cfg = {});

/// x^theta = sum_i cos(theta_i) x_i + sin(theta_i) p_i.
struct QuadratureFamily {
  std::vector<double> angles;  // in [0, 2 pi)
  int fock_dim = 0;

  Matrix observable(const FockSpace& fock) const;
};

struct QuadratureNf {
  double value = 0.0;
  QuadratureFamily family;
  AscentResult ascent;
};

/// max over quadrature sums of qfi / (4N). Requires a healthy truncation.
QuadratureNf nf_quadratures(const DensityMatrix& rho, const FockSpace& fock, const SearchConfig& cfg = {});

/// max over quadrature sums of il_measure / N.
QuadratureNf nlj_tilde(const DensityMatrix& rho, const FockSpace& fock, const SearchConfig& cfg = {});

/// 1/2 sum_i [I_L(rho, x_i) + I_L(rho, p_i)].
double nlj_closed_form(const DensityMatrix& rho, const FockSpace& fock);

struct NljIntegralOptions {
  std::optional<double> radius;  // half-width of the square; automatic if unset
  int points = 128;              // Gauss-Legendre nodes per axis
  double tail_tolerance = 1e-9;  // bound on |alpha|^2 |chi|^2 on the radius circle
};

struct NljIntegral {
  double value = 0.0;
  double radius = 0.0;
  int points = 0;
  double tail = 0.0;  // largest sampled |alpha|^2 |chi|^2 at the radius
};

/// (1/2 pi) int d^2 alpha |alpha|^2 |chi(alpha)|^2 for a single mode, by
/// tensor-product Gauss-Legendre quadrature on [-R, R]^2. An explicit radius
/// whose tail exceeds the tolerance is rejected.
NljIntegral nlj_integral(const DensityMatrix& rho, const FockSpace& fock, const NljIntegralOptions& opts = {});

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
std::pair<RealVector, RealVector> gauss_legendre(int n);

enum class Ordering { greater, equal, less };

struct M4Verdict {
  double value1 = 0.0;
  double value2 = 0.0;
  double gap1 = 0.0;
  double gap2 = 0.0;
  Ordering ordering = Ordering::equal;
  bool satisfies_m4 = false;  // strict order for distinct gaps, equality for equal gaps
};

/// Compares the measure on (|i> + |j>)/sqrt(2) and (|k> + |l>)/sqrt(2), with
/// indices into A's eigenvectors (descending eigenvalue order). Requires
/// |a_i - a_j| >= |a_k - a_l|. Values are equal when they agree to 1e-9
/// relative.
M4Verdict m4_ordering_check(MeasureId id, const Observable& a, std::pair<Eigen::Index, Eigen::Index> pair1,
                            std::pair<Eigen::Index, Eigen::Index> pair2);

std::string_view to_string(Ordering o);

}  // namespace macrocoh
