#pragma once

#include <vector>

#include "macrocoh/bosonic.hpp"

namespace macrocoh {

// The integrator produced a state that cannot be repaired into a valid one.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

struct GeneratorTerm {
  Matrix b;        // Hermitian
  double c = 0.0;  // nonnegative rate
};

/// L(rho) = -sum_k c_k [B_k, [B_k, rho]].
class DoubleCommutatorGenerator {
 public:
  explicit DoubleCommutatorGenerator(std::vector<GeneratorTerm> terms);

  Eigen::Index dim() const { return dim_; }
  const std::vector<GeneratorTerm>& terms() const { return terms_; }
  Matrix apply(const Matrix& rho) const;

 private:
  std::vector<GeneratorTerm> terms_;
  Eigen::Index dim_ = 0;
};

/// Rates 1/4 on x_i and p_i of every mode.
DoubleCommutatorGenerator isotropic_generator(const FockSpace& fock);

/// Rates c_x on x and c_p on p of every mode. Throws on negative rates.
DoubleCommutatorGenerator quadrature_generator(double c_x, double c_p, const FockSpace& fock);

struct TrajectoryPoint {
  double time = 0.0;
  DensityMatrix state;
  double purity = 1.0;
};

/// Negative eigenvalues down to this size are clipped after each RK4 step.
inline constexpr double kEvolveRepairTolerance = 1e-8;

/// Fixed-step classical RK4 from 0 to t. Each step is Hermitized, trace
/// renormalized and has rounding-level negative eigenvalues clipped; a state
/// beyond the repair tolerance raises IntegrationError. The trajectory holds
/// steps + 1 points.
std::vector<TrajectoryPoint> evolve(const DensityMatrix& rho, const DoubleCommutatorGenerator& gen, double t,
                                    std::size_t steps);

/// -tr(rho L(rho)), half the rate of purity loss.
double purity_rate(const DensityMatrix& rho, const DoubleCommutatorGenerator& gen);

}  // namespace macrocoh
