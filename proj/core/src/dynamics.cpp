#include "macrocoh/dynamics.hpp"

#include <sstream>

namespace macrocoh {

DoubleCommutatorGenerator::DoubleCommutatorGenerator(std::vector<GeneratorTerm> terms) : terms_(std::move(terms)) {
  std::vector<std::string> problems;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto& t = terms_[k];
    if (k == 0) dim_ = t.b.rows();
    std::ostringstream os;
    if (t.b.rows() != dim_ || t.b.cols() != dim_) {
      os << "term " << k << ": operator shape does not match";
    } else if (!(t.c >= 0.0)) {
      os << "term " << k << ": rate " << t.c << " is negative";
    } else if (hermiticity_residual(t.b) > 1e-10 * std::max(1.0, t.b.cwiseAbs().maxCoeff())) {
      os << "term " << k << ": operator is not Hermitian";
    }
    if (!os.str().empty()) problems.push_back(os.str());
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

Matrix DoubleCommutatorGenerator::apply(const Matrix& rho) const {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& t : terms_) {
    if (t.c == 0.0) continue;
    out -= t.c * commutator(t.b, commutator(t.b, rho));
  }
  return out;
}

DoubleCommutatorGenerator isotropic_generator(const FockSpace& fock) { return quadrature_generator(0.25, 0.25, fock); }

DoubleCommutatorGenerator quadrature_generator(double c_x, double c_p, const FockSpace& fock) {
  if (!(c_x >= 0.0) || !(c_p >= 0.0)) throw ValidationError({"decoherence rates must be nonnegative"});
  std::vector<GeneratorTerm> terms;
  for (int i = 0; i < fock.n_modes(); ++i) {
    terms.push_back({fock.position(i), c_x});
    terms.push_back({fock.momentum(i), c_p});
  }
  return DoubleCommutatorGenerator(std::move(terms));
}

std::vector<TrajectoryPoint> evolve(const DensityMatrix& rho, const DoubleCommutatorGenerator& gen, double t,
                                    std::size_t steps) {
  if (!(t >= 0.0)) throw ValidationError({"evolution time must be nonnegative"});
  if (steps < 1) throw ValidationError({"evolution needs at least one step"});
  if (!gen.terms().empty() && gen.dim() != rho.dim())
    throw ValidationError({"generator and state dimensions differ"});

  const double h = t / static_cast<double>(steps);
  std::vector<TrajectoryPoint> traj;
  traj.reserve(steps + 1);
  traj.push_back({0.0, rho, rho.purity()});
  Matrix r = rho.matrix();
  for (std::size_t n = 1; n <= steps; ++n) {
    const Matrix k1 = gen.apply(r);
    const Matrix k2 = gen.apply(r + 0.5 * h * k1);
    const Matrix k3 = gen.apply(r + 0.5 * h * k2);
    const Matrix k4 = gen.apply(r + h * k3);
    r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    r = hermitian_part(r);
    const cplx tr = r.trace();
    if (!(std::abs(tr) > 0.0) || !r.allFinite()) {
      std::ostringstream os;
      os << "step " << n << " (t = " << n * h << "): state has trace " << tr.real();
      throw IntegrationError(os.str());
    }
    r /= tr.real();
    // RK4 is not positivity preserving; rounding-level negative eigenvalues near
    // the boundary are clipped, anything larger is reported.
    Eigensystem es = spectral_decompose(hermitian_part(r));
    const double lmin = es.values(es.values.size() - 1);
    if (lmin < -kEvolveRepairTolerance) {
      std::ostringstream os;
      os << "step " << n << " (t = " << n * h << ", h = " << h << "): eigenvalue " << lmin
         << " is beyond the repair tolerance";
      throw IntegrationError(os.str());
    }
    if (lmin < 0.0) {
      es.values = es.values.cwiseMax(0.0);
      es.values /= es.values.sum();
      r = hermitian_part(es.reconstruct());
    }
    try {
      DensityMatrix s = validate_density(r);
      const double p = s.purity();
      traj.push_back({static_cast<double>(n) * h, std::move(s), p});
    } catch (const ValidationError& e) {
      std::ostringstream os;
      os << "step " << n << " (t = " << n * h << ", h = " << h << "): " << e.what();
      throw IntegrationError(os.str());
    }
  }
  return traj;
}

double purity_rate(const DensityMatrix& rho, const DoubleCommutatorGenerator& gen) {
  if (!gen.terms().empty() && gen.dim() != rho.dim())
    throw ValidationError({"generator and state dimensions differ"});
  return -(rho.matrix().cwiseProduct(gen.apply(rho.matrix()).transpose())).sum().real();
}

}  // namespace macrocoh
