#include "macrocoh/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "macrocoh/random.hpp"

namespace macrocoh {

namespace {

// Sorts eigenpairs by descending eigenvalue.
Eigensystem sorted(const RealVector& values, const Matrix& vectors) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values(a) > values(b); });
  Eigensystem es;
  es.values.resize(values.size());
  es.vectors.resize(vectors.rows(), values.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    es.values(static_cast<Eigen::Index>(k)) = values(order[k]);
    es.vectors.col(static_cast<Eigen::Index>(k)) = vectors.col(order[k]);
  }
  return es;
}

// Spectrum of a tensor product: eigenvalue products, Kronecker eigenvectors.
Eigensystem kron_spectrum(const Eigensystem& a, const Eigensystem& b) {
  const Eigen::Index na = a.values.size();
  const Eigen::Index nb = b.values.size();
  RealVector values(na * nb);
  Matrix vectors(a.vectors.rows() * b.vectors.rows(), na * nb);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < nb; ++j) {
      values(i * nb + j) = a.values(i) * b.values(j);
      vectors.col(i * nb + j) = tensor_product(Vector(a.vectors.col(i)), Vector(b.vectors.col(j)));
    }
  return sorted(values, vectors);
}

Tolerances trusting_hermiticity() {
  Tolerances t;
  t.hermiticity = std::numeric_limits<double>::infinity();
  return t;
}

}  // namespace

PureState::PureState(Vector amplitudes, const Tolerances& tol) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw ValidationError({"state vector is empty"});
  if (!amplitudes_.allFinite()) throw ValidationError({"state vector contains NaN or infinite entries"});
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > tol.normalization) {
    std::ostringstream os;
    os << "state norm " << norm << " differs from 1 by " << std::abs(norm - 1.0);
    throw ValidationError({os.str()});
  }
}

PureState PureState::normalized(const Vector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError({"cannot normalize a zero or non-finite vector"});
  return PureState(v / n);
}

PureState PureState::basis(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) throw ValidationError({"basis index out of range"});
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

PureState tensor_product(const PureState& a, const PureState& b, std::size_t dimension_cap) {
  return PureState::normalized(tensor_product(a.amplitudes(), b.amplitudes(), dimension_cap));
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  Eigensystem es;
  es.values = RealVector::Ones(1);
  es.vectors = psi.amplitudes();
  Matrix fixed = es.vectors;
  // Phase convention on the single eigenvector.
  Eigen::Index best = 0;
  fixed.col(0).cwiseAbs().maxCoeff(&best);
  const cplx c = fixed(best, 0);
  if (std::abs(c) > 0.0) fixed *= std::conj(c) / std::abs(c);
  es.vectors = fixed;
  return DensityMatrix(psi.projector(), std::move(es));
}

Support factor_support(const Matrix& w) {
  require_finite(w, "factor");
  const double t = w.squaredNorm();
  if (!(t > 0.0)) throw ValidationError({"factor is zero"});
  const Matrix gram = (w.adjoint() * w) / t;
  const Eigensystem g = spectral_decompose(gram, trusting_hermiticity());
  Eigen::Index r = 0;
  while (r < g.values.size() && g.values(r) > kRankCutoff) ++r;
  Support s{g.values.head(r), Matrix(w.rows(), r)};
  for (Eigen::Index k = 0; k < r; ++k) {
    Vector v = w * g.vectors.col(k) / std::sqrt(g.values(k) * t);
    Eigen::Index best = 0;
    v.cwiseAbs().maxCoeff(&best);
    const cplx c = v(best);
    v *= std::conj(c) / std::abs(c);
    s.vectors.col(k) = v;
  }
  return s;
}

DensityMatrix DensityMatrix::from_factor(const Matrix& w) {
  require_finite(w, "factor");
  const double t = w.squaredNorm();
  if (!(t > 0.0)) throw ValidationError({"factor is zero"});
  Matrix rho = (w * w.adjoint()) / t;
  if (w.cols() >= w.rows()) return validate_density(rho);
  Support s = factor_support(w);
  return DensityMatrix(std::move(rho), Eigensystem{std::move(s.values), std::move(s.vectors)});
}

DensityMatrix DensityMatrix::from_ensemble(std::span<const double> weights,
                                           std::span<const PureState> states) {
  if (weights.size() != states.size() || states.empty())
    throw ValidationError({"ensemble weights and states must be non-empty and equal in length"});
  double total = 0.0;
  for (double p : weights) {
    if (!(p >= 0.0)) throw ValidationError({"ensemble weight is negative"});
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "ensemble weights sum to " << total;
    throw ValidationError({os.str()});
  }
  const Eigen::Index dim = states.front().dim();
  Matrix w(dim, static_cast<Eigen::Index>(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].dim() != dim) throw ValidationError({"ensemble states differ in dimension"});
    w.col(static_cast<Eigen::Index>(k)) = std::sqrt(weights[k]) * states[k].amplitudes();
  }
  return from_factor(w);
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  if (dim <= 0) throw ValidationError({"dimension must be positive"});
  Eigensystem es;
  es.values = RealVector::Constant(dim, 1.0 / static_cast<double>(dim));
  es.vectors = Matrix::Identity(dim, dim);
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim), std::move(es));
}

Support DensityMatrix::support(double cutoff) const {
  const Eigen::Index r = rank(cutoff);
  return Support{spectrum_.values.head(r), spectrum_.vectors.leftCols(r)};
}

Eigen::Index DensityMatrix::rank(double cutoff) const {
  Eigen::Index r = 0;
  while (r < spectrum_.values.size() && spectrum_.values(r) > cutoff) ++r;
  return r;
}

double DensityMatrix::purity() const { return spectrum_.values.squaredNorm(); }

DensityMatrix DensityMatrix::rotated(const Matrix& unitary) const {
  Eigensystem es{spectrum_.values, unitary * spectrum_.vectors};
  return DensityMatrix(unitary * matrix_ * unitary.adjoint(), std::move(es));
}

DensityMatrix validate_density(const Matrix& rho, const Tolerances& tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    std::ostringstream os;
    os << "density matrix must be square and non-empty, got " << rho.rows() << "x" << rho.cols();
    throw ValidationError({os.str()});
  }
  require_finite(rho, "density matrix");
  std::vector<std::string> violations;
  const double herm = hermiticity_residual(rho);
  if (herm > tol.hermiticity) {
    std::ostringstream os;
    os << "non-Hermitian: max |rho - rho^dagger| = " << herm;
    violations.push_back(os.str());
  }
  const cplx tr = rho.trace();
  if (std::abs(tr - cplx(1.0, 0.0)) > tol.trace) {
    std::ostringstream os;
    os << "trace " << tr.real();
    if (tr.imag() != 0.0) os << (tr.imag() > 0 ? "+" : "") << tr.imag() << "i";
    os << " differs from 1 by " << std::abs(tr - cplx(1.0, 0.0));
    violations.push_back(os.str());
  }
  Eigensystem es = spectral_decompose(rho, trusting_hermiticity());
  const double lmin = es.values.minCoeff();
  if (lmin < -tol.negativity) {
    std::ostringstream os;
    os << "negative eigenvalue " << lmin;
    violations.push_back(os.str());
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return DensityMatrix(hermitian_part(rho), std::move(es));
}

DensityMatrix repair_density(const Matrix& rho, const Tolerances& tol) {
  Matrix h = hermitian_part(rho);
  const double tr = h.trace().real();
  if (!(tr > 0.0)) throw ValidationError({"cannot renormalize: trace is not positive"});
  h /= tr;
  return validate_density(h, tol);
}

Observable::Observable(const Matrix& m, const Tolerances& tol)
    : matrix_(hermitian_part(m)), spectrum_(spectral_decompose(m, tol)) {}

Observable Observable::diagonal(const RealVector& values) {
  Matrix m = values.cast<cplx>().asDiagonal();
  Eigensystem es = spectral_decompose(m);
  return Observable(std::move(m), std::move(es));
}

Observable Observable::from_eigensystem(Eigensystem es) {
  Eigensystem s = sorted(es.values, es.vectors);
  Matrix m = s.reconstruct();
  return Observable(hermitian_part(m), std::move(s));
}

double Observable::spectral_range() const {
  return spectrum_.values.maxCoeff() - spectrum_.values.minCoeff();
}

Matrix Observable::to_eigenbasis(const Matrix& m) const {
  return spectrum_.vectors.adjoint() * m * spectrum_.vectors;
}

Matrix Observable::from_eigenbasis(const Matrix& m) const {
  return spectrum_.vectors * m * spectrum_.vectors.adjoint();
}

Observable tensor_product(const Observable& a, const Observable& b, std::size_t dimension_cap) {
  Matrix m = tensor_product(a.matrix(), b.matrix(), dimension_cap);
  return Observable(std::move(m), kron_spectrum(a.spectrum(), b.spectrum()));
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b, std::size_t dimension_cap) {
  Matrix m = tensor_product(a.matrix(), b.matrix(), dimension_cap);
  return DensityMatrix(std::move(m), kron_spectrum(a.spectrum(), b.spectrum()));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Eigen::Index> dims,
                            std::span<const Eigen::Index> keep) {
  Eigen::Index total = 1;
  for (Eigen::Index d : dims) {
    if (d <= 0) throw ValidationError({"subsystem dimensions must be positive"});
    total *= d;
  }
  if (total != rho.dim()) {
    std::ostringstream os;
    os << "subsystem dimensions multiply to " << total << " but state has dimension " << rho.dim();
    throw ValidationError({os.str()});
  }
  const auto n = static_cast<Eigen::Index>(dims.size());
  std::vector<bool> kept(dims.size(), false);
  for (Eigen::Index k : keep) {
    if (k < 0 || k >= n) throw ValidationError({"kept subsystem index out of range"});
    if (kept[static_cast<std::size_t>(k)]) throw ValidationError({"kept subsystem listed twice"});
    kept[static_cast<std::size_t>(k)] = true;
  }

  Eigen::Index dk = 1;
  for (Eigen::Index s = 0; s < n; ++s)
    if (kept[static_cast<std::size_t>(s)]) dk *= dims[static_cast<std::size_t>(s)];
  const Eigen::Index dt = total / dk;

  // full index of (kept index, traced index); digits are row-major with the
  // first subsystem slowest, in both the full and the reduced labelling.
  Eigen::MatrixXi full(dk, dt);
  std::vector<Eigen::Index> digits(dims.size());
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index rem = idx;
    for (Eigen::Index s = n - 1; s >= 0; --s) {
      digits[static_cast<std::size_t>(s)] = rem % dims[static_cast<std::size_t>(s)];
      rem /= dims[static_cast<std::size_t>(s)];
    }
    Eigen::Index ik = 0;
    Eigen::Index it = 0;
    for (Eigen::Index s = 0; s < n; ++s) {
      const auto su = static_cast<std::size_t>(s);
      if (kept[su])
        ik = ik * dims[su] + digits[su];
      else
        it = it * dims[su] + digits[su];
    }
    full(ik, it) = static_cast<int>(idx);
  }

  Matrix out = Matrix::Zero(dk, dk);
  const Matrix& m = rho.matrix();
  for (Eigen::Index t = 0; t < dt; ++t)
    for (Eigen::Index j = 0; j < dk; ++j)
      for (Eigen::Index i = 0; i < dk; ++i) out(i, j) += m(full(i, t), full(j, t));
  return repair_density(out);
}

DensityMatrix random_density(Eigen::Index dim, Eigen::Index rank, std::uint64_t seed) {
  if (dim < 1 || rank < 1 || rank > dim) {
    std::ostringstream os;
    os << "random_density requires 1 <= rank <= dim, got dim=" << dim << " rank=" << rank;
    throw ValidationError({os.str()});
  }
  Rng rng(seed);
  return DensityMatrix::from_factor(gaussian_matrix(dim, rank, rng));
}

PureState random_pure_state(Eigen::Index dim, std::uint64_t seed) {
  if (dim < 1) throw ValidationError({"dimension must be positive"});
  Rng rng(seed);
  return PureState::normalized(gaussian_matrix(dim, 1, rng).col(0));
}

Matrix phase_unitary(const Observable& a, double x) {
  const Eigensystem& es = a.spectrum();
  Vector phases(es.values.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(-kI * x * es.values(k));
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

DensityMatrix phase_conjugate(const DensityMatrix& rho, const Observable& a, double x) {
  if (rho.dim() != a.dim()) {
    std::ostringstream os;
    os << "dimension mismatch: state " << rho.dim() << ", observable " << a.dim();
    throw ValidationError({os.str()});
  }
  return rho.rotated(phase_unitary(a, x));
}

}  // namespace macrocoh
