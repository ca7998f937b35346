#include "macrocoh/channels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "macrocoh/random.hpp"

namespace macrocoh {

Eigen::Index FreeChannel::dim() const { return kraus.empty() ? 0 : kraus.front().cols(); }

Matrix FreeChannel::completeness() const {
  Matrix s = Matrix::Zero(dim(), dim());
  for (const auto& k : kraus) s += k.adjoint() * k;
  return s;
}

FreeChannel random_free_channel(const Observable& a, std::span<const double> mode_choices, std::size_t n_kraus,
                                double scale, std::uint64_t seed, bool complete) {
  if (!(scale > 0.0 && scale <= 1.0)) throw ValidationError({"channel scale must lie in (0, 1]"});
  if (n_kraus > 0 && mode_choices.empty()) throw ValidationError({"mode_choices is empty"});
  const GapSet gaps = gap_set(a);
  std::vector<std::size_t> gap_index;
  for (double delta : mode_choices) gap_index.push_back(gaps.index_of(delta));

  const Eigen::Index d = a.dim();
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::vector<Matrix> eig_kraus;
  FreeChannel ch;
  Matrix s = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < n_kraus; ++k) {
    const std::size_t g = gap_index[k % gap_index.size()];
    Matrix e = Matrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index i = 0; i < d; ++i)
        if (gaps.label(i, j) == static_cast<int>(g)) e(i, j) = cplx(normal(rng), normal(rng));
    s += e.adjoint() * e;
    eig_kraus.push_back(std::move(e));
    ch.mode_labels.push_back(gaps.gaps[g]);
  }
  if (n_kraus > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(s), Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    if (!(top > 0.0)) throw ValidationError({"sampled Kraus operators vanish"});
    const double f = std::sqrt(scale / top);
    for (auto& e : eig_kraus) e *= f;
    s *= f * f;
  }

  ch.trace_preserving = complete;
  if (complete) {
    // I - S is block diagonal over eigenspaces of A, so its square root lives
    // on gap 0; the filter only removes rounding noise.
    const Matrix k0 = mode_filter(psd_sqrt(hermitian_part(Matrix::Identity(d, d) - s)), gaps, gaps.zero_index());
    eig_kraus.insert(eig_kraus.begin(), k0);
    ch.mode_labels.insert(ch.mode_labels.begin(), 0.0);
  }
  for (const auto& e : eig_kraus) ch.kraus.push_back(a.from_eigenbasis(e));
  return ch;
}

FreeChannel ancilla_reset_channel(Eigen::Index system_dim, const PureState& target) {
  if (system_dim < 1) throw ValidationError({"system dimension must be positive"});
  const Eigen::Index anc = target.dim();
  const Matrix id = Matrix::Identity(system_dim, system_dim);
  FreeChannel ch;
  for (Eigen::Index j = 0; j < anc; ++j) {
    const Matrix op = target.amplitudes() * PureState::basis(anc, j).amplitudes().adjoint();
    ch.kraus.push_back(tensor_product(id, op));
    ch.mode_labels.push_back(0.0);
  }
  ch.trace_preserving = true;
  return ch;
}

CovarianceVerdict verify_covariance(const FreeChannel& channel, const Observable& a, std::size_t n_samples,
                                    std::uint64_t seed, double tolerance) {
  CovarianceVerdict v;
  if (channel.kraus.size() != channel.mode_labels.size()) {
    v.violations.push_back("kraus and mode_labels lengths differ");
    return v;
  }
  if (channel.dim() != a.dim()) {
    v.violations.push_back("channel and observable dimensions differ");
    return v;
  }
  const GapSet gaps = gap_set(a);
  v.support_ok = true;
  for (std::size_t k = 0; k < channel.kraus.size(); ++k) {
    const auto g = gaps.find(channel.mode_labels[k]);
    if (!g) {
      std::ostringstream os;
      os << "Kraus " << k << ": label " << channel.mode_labels[k] << " is not a gap";
      v.violations.push_back(os.str());
      v.support_ok = false;
      continue;
    }
    const Matrix e = a.to_eigenbasis(channel.kraus[k]);
    const double floor = 1e-10 * std::max(1.0, e.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < e.cols(); ++j)
      for (Eigen::Index i = 0; i < e.rows(); ++i) {
        const int label = gaps.label(i, j);
        if (std::abs(e(i, j)) > floor && label != static_cast<int>(*g)) {
          std::ostringstream os;
          os << "Kraus " << k << ": entry (" << i << ", " << j << ") has gap "
             << gaps.gaps[static_cast<std::size_t>(label)] << " but the label is " << channel.mode_labels[k];
          v.violations.push_back(os.str());
          v.support_ok = false;
        }
      }
  }

  Rng rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (std::size_t t = 0; t < n_samples; ++t) {
    const double x = phase(rng) / std::max(1.0, a.spectral_range());
    const DensityMatrix rho = random_density(a.dim(), a.dim(), derive_seed(seed, t));
    const Matrix u = phase_unitary(a, x);
    const Matrix lhs = apply_kraus(channel, u * rho.matrix() * u.adjoint());
    const Matrix rhs = u * apply_kraus(channel, rho.matrix()) * u.adjoint();
    v.max_residual = std::max(v.max_residual, trace_norm(lhs - rhs));
  }
  if (v.max_residual > tolerance) {
    std::ostringstream os;
    os << "phase covariance residual " << v.max_residual << " exceeds " << tolerance;
    v.violations.push_back(os.str());
  }
  v.passed = v.support_ok && v.max_residual <= tolerance;
  return v;
}

Matrix apply_kraus(const FreeChannel& channel, const Matrix& rho) {
  if (rho.rows() != channel.dim() || rho.cols() != channel.dim())
    throw ValidationError({"channel and state dimensions differ"});
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : channel.kraus) out += k * rho * k.adjoint();
  return out;
}

DensityMatrix apply_channel(const FreeChannel& channel, const DensityMatrix& rho) {
  return repair_density(apply_kraus(channel, rho.matrix()));
}

std::vector<Outcome> apply_selective(const FreeChannel& channel, const DensityMatrix& rho) {
  if (rho.dim() != channel.dim()) throw ValidationError({"channel and state dimensions differ"});
  std::vector<Outcome> out;
  // Through the support factor, so rank and spectrum stay exact.
  const Support s = rho.support();
  for (std::size_t k = 0; k < channel.kraus.size(); ++k) {
    const Matrix& op = channel.kraus[k];
    const Matrix w = op * s.vectors * s.values.cwiseSqrt().cast<cplx>().asDiagonal();
    const double p = w.squaredNorm();
    if (p < kOutcomeCutoff) continue;
    out.push_back({k, p, DensityMatrix::from_factor(w)});
  }
  return out;
}

double monotone_value(MeasureId id, const DensityMatrix& rho, const Observable& a, const MeasureOptions& opts) {
  if (id == MeasureId::variance && rho.rank(opts.rank_cutoff) > 1) return qfi(rho, a, opts.rank_cutoff) / 4.0;
  return evaluate_measure(id, rho, a, opts).value;
}

MonotonicityReport monotonicity_report(MeasureId id, const DensityMatrix& rho, const Observable& a,
                                       const FreeChannel& channel, const MeasureOptions& opts, double slack) {
  MonotonicityReport r;
  r.measure_id = id;
  r.slack = slack;
  r.before = monotone_value(id, rho, a, opts);
  r.deterministic_after = monotone_value(id, apply_channel(channel, rho), a, opts);
  double total_p = 0.0;
  for (const auto& o : apply_selective(channel, rho)) {
    const double value = monotone_value(id, o.state, a, opts);
    r.selective.emplace_back(o.probability, value);
    r.average_after += o.probability * value;
    total_p += o.probability;
  }
  if (!channel.trace_preserving && total_p > 0.0) r.average_after /= total_p;
  r.m2a = r.deterministic_after <= r.before + slack;
  r.m2b = r.average_after <= r.before + slack;
  return r;
}

}  // namespace macrocoh
