#include "macrocoh/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "macrocoh/modes.hpp"
#include "macrocoh/random.hpp"
#include "parallel.hpp"

namespace macrocoh {

namespace {

constexpr std::array<std::pair<MeasureId, std::string_view>, 8> kMeasureNames{{
    {MeasureId::variance, "variance"},
    {MeasureId::qfi, "qfi"},
    {MeasureId::qfi_bures, "qfi_bures"},
    {MeasureId::skew, "skew"},
    {MeasureId::il, "il"},
    {MeasureId::rel_ent, "relent"},
    {MeasureId::roof, "roof"},
    {MeasureId::delta_norm, "delta_norm"},
}};

void require_same_dim(Eigen::Index state_dim, Eigen::Index op_rows, Eigen::Index op_cols) {
  if (op_rows != state_dim || op_cols != state_dim) {
    std::ostringstream os;
    os << "dimension mismatch: state " << state_dim << ", observable " << op_rows << "x" << op_cols;
    throw ValidationError({os.str()});
  }
}

// sum_{a,b} w(l_a, l_b) |<a|A|b>|^2 over the full eigenbasis of rho, with w
// symmetric and w(0, 0) = 0, from the support and its image y = A V_S. Pairs
// with one index in the kernel are resolved through ||A|a>||^2 so the kernel
// never needs to be diagonalized.
template <class Weight>
double support_pair_sum(const Support& s, const Matrix& y, Weight w) {
  if (y.rows() != s.vectors.rows() || y.cols() != s.vectors.cols())
    throw ValidationError({"support image has the wrong shape"});
  const Eigen::Index r = s.values.size();
  const Matrix a_ss = s.vectors.adjoint() * y;
  double sum = 0.0;
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index i = 0; i < r; ++i) sum += w(s.values(i), s.values(j)) * std::norm(a_ss(i, j));
  for (Eigen::Index i = 0; i < r; ++i) {
    const double to_kernel = std::max(0.0, y.col(i).squaredNorm() - a_ss.col(i).squaredNorm());
    sum += 2.0 * w(s.values(i), 0.0) * to_kernel;
  }
  return sum;
}

template <class Weight>
double spectral_pair_sum(const DensityMatrix& rho, const Matrix& a, double cutoff, Weight w) {
  require_same_dim(rho.dim(), a.rows(), a.cols());
  const Support s = rho.support(cutoff);
  return support_pair_sum(s, a * s.vectors, w);
}

double qfi_weight(double la, double lb) {
  const double d = la - lb;
  return 2.0 * d * d / (la + lb);
}

double il_weight(double la, double lb) {
  const double d = la - lb;
  return 0.5 * d * d;
}

}  // namespace

std::string_view to_string(MeasureId id) {
  for (const auto& [k, name] : kMeasureNames)
    if (k == id) return name;
  return "unknown";
}

std::optional<MeasureId> parse_measure_id(std::string_view name) {
  for (const auto& [k, n] : kMeasureNames)
    if (n == name) return k;
  if (name == "rel_ent") return MeasureId::rel_ent;
  return std::nullopt;
}

double variance(const PureState& psi, const Matrix& a) {
  require_same_dim(psi.dim(), a.rows(), a.cols());
  const Vector& v = psi.amplitudes();
  const Vector av = a * v;
  const double mean = v.dot(av).real();
  return av.squaredNorm() - mean * mean;
}

double variance(const PureState& psi, const Observable& a) { return variance(psi, a.matrix()); }

double qfi(const DensityMatrix& rho, const Matrix& a, double rank_cutoff) {
  return spectral_pair_sum(rho, a, rank_cutoff, qfi_weight);
}

double qfi(const DensityMatrix& rho, const Observable& a, double rank_cutoff) {
  return qfi(rho, a.matrix(), rank_cutoff);
}

double qfi_from_support(const Support& s, const Matrix& image) { return support_pair_sum(s, image, qfi_weight); }

double il_from_support(const Support& s, const Matrix& image) { return support_pair_sum(s, image, il_weight); }

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw ValidationError({"fidelity: dimension mismatch"});
  const Support s = rho.support();
  const RealVector root = s.values.cwiseSqrt();
  Matrix m = root.cast<cplx>().asDiagonal() * (s.vectors.adjoint() * sigma.matrix() * s.vectors) *
             root.cast<cplx>().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  double f = 0.0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) f += std::sqrt(std::max(0.0, solver.eigenvalues()(k)));
  return f;
}

double qfi_bures_oracle(const DensityMatrix& rho, const Observable& a, double dx) {
  if (!(dx > 0.0)) throw ValidationError({"qfi_bures_oracle: dx must be positive"});
  const DensityMatrix shifted = phase_conjugate(rho, a, dx);
  return 8.0 * (1.0 - fidelity(rho, shifted)) / (dx * dx);
}

double skew_information(const DensityMatrix& rho, const Matrix& a) {
  return spectral_pair_sum(rho, a, kRankCutoff, [](double la, double lb) {
    const double d = std::sqrt(la) - std::sqrt(lb);
    return 0.5 * d * d;
  });
}

double skew_information(const DensityMatrix& rho, const Observable& a) {
  return skew_information(rho, a.matrix());
}

double il_measure(const DensityMatrix& rho, const Matrix& a) {
  return spectral_pair_sum(rho, a, kRankCutoff, il_weight);
}

double il_measure(const DensityMatrix& rho, const Observable& a) { return il_measure(rho, a.matrix()); }

double von_neumann_entropy(const RealVector& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
    const double l = eigenvalues(k);
    if (l > 0.0) s -= l * std::log(l);
  }
  return s;
}

double relative_entropy_asymmetry(const DensityMatrix& rho, const Observable& a) {
  require_same_dim(rho.dim(), a.dim(), a.dim());
  const GapSet gaps = gap_set(a);
  const Matrix dephased = dephase(rho.matrix(), a, gaps);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(dephased), Eigen::EigenvaluesOnly);
  return von_neumann_entropy(solver.eigenvalues()) - von_neumann_entropy(rho.eigenvalues());
}

RoofResult convex_roof_search(const DensityMatrix& rho, const Observable& a, const ConvexRoofConfig& cfg) {
  require_same_dim(rho.dim(), a.dim(), a.dim());
  if (cfg.n_decompositions == 0) throw ValidationError({"n_decompositions must be positive"});
  const Support s = rho.support();
  const Eigen::Index r = s.values.size();
  const auto k = static_cast<Eigen::Index>(cfg.max_ensemble_size == 0 ? static_cast<std::size_t>(r)
                                                                       : cfg.max_ensemble_size);
  if (k < r) {
    std::ostringstream os;
    os << "ensemble size " << k << " is smaller than rank " << r;
    throw ValidationError({os.str()});
  }

  // Columns of base are sqrt(l_a)|psi_a>, the purification read from the
  // system side.
  const Matrix base = s.vectors * s.values.cwiseSqrt().cast<cplx>().asDiagonal();
  const Matrix a_base = a.matrix() * base;

  auto isometry = [&](std::size_t t) -> Matrix {
    if (t == 0) return Matrix::Identity(k, r);
    Rng rng(derive_seed(cfg.seed, t));
    return haar_isometry(k, r, rng);
  };
  auto average = [&](const Matrix& u) {
    const Matrix w = base * u.transpose();
    const Matrix aw = a_base * u.transpose();
    double avg = 0.0;
    for (Eigen::Index mu = 0; mu < k; ++mu) {
      const double p = w.col(mu).squaredNorm();
      if (p < 1e-300) continue;
      const double mean = w.col(mu).dot(aw.col(mu)).real() / p;
      avg += aw.col(mu).squaredNorm() - p * mean * mean;
    }
    return avg;
  };

  std::vector<double> averages(cfg.n_decompositions);
  detail::parallel_for(cfg.n_decompositions, [&](std::size_t t) { averages[t] = average(isometry(t)); });

  const auto best_it = std::min_element(averages.begin(), averages.end());
  const auto best = static_cast<std::size_t>(best_it - averages.begin());

  RoofResult out;
  out.upper_bound = *best_it;
  out.largest_average = *std::max_element(averages.begin(), averages.end());
  out.samples = cfg.n_decompositions;
  out.ensemble_size = static_cast<std::size_t>(k);
  const Matrix w = base * isometry(best).transpose();
  for (Eigen::Index mu = 0; mu < k; ++mu) {
    const double p = w.col(mu).squaredNorm();
    if (p < 1e-300) continue;
    out.best_ensemble.weights.push_back(p);
    out.best_ensemble.states.push_back(PureState::normalized(w.col(mu)));
  }
  out.best_ensemble.average_variance = out.upper_bound;
  return out;
}

MeasureReport evaluate_measure(MeasureId id, const DensityMatrix& rho, const Observable& a,
                               const MeasureOptions& opts) {
  MeasureReport rep;
  rep.measure_id = id;
  rep.rank_cutoff = opts.rank_cutoff;
  rep.rank = rho.rank(opts.rank_cutoff);
  const auto kernel = static_cast<std::size_t>(rho.dim() - rep.rank);
  switch (id) {
    case MeasureId::variance: {
      if (rep.rank != 1 || std::abs(rho.purity() - 1.0) > 1e-9)
        throw ValidationError({"variance is defined for pure states only"});
      rep.value = variance(PureState::normalized(rho.eigenvectors().col(0)), a);
      break;
    }
    case MeasureId::qfi:
      rep.value = qfi(rho, a, opts.rank_cutoff);
      rep.terms_skipped = kernel * kernel;
      break;
    case MeasureId::qfi_bures:
      rep.value = qfi_bures_oracle(rho, a, opts.bures_dx);
      break;
    case MeasureId::skew:
      rep.value = skew_information(rho, a);
      rep.terms_skipped = kernel * kernel;
      break;
    case MeasureId::il:
      rep.value = il_measure(rho, a);
      rep.terms_skipped = kernel * kernel;
      break;
    case MeasureId::rel_ent:
      rep.value = relative_entropy_asymmetry(rho, a);
      break;
    case MeasureId::roof:
      rep.value = convex_roof_search(rho, a, opts.roof).upper_bound;
      break;
    case MeasureId::delta_norm:
      rep.value = delta_coherence_norm(rho, a, opts.delta);
      break;
  }
  return rep;
}

}  // namespace macrocoh
