#include "macrocoh/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace macrocoh {

namespace {

struct Cluster {
  double lo;
  double hi;
  double sum;
  std::size_t count;
  double mean() const { return sum / static_cast<double>(count); }
};

// Single-linkage clustering of sorted values: a new cluster starts whenever
// consecutive values are more than `tol` apart.
std::vector<Cluster> single_linkage(const std::vector<double>& sorted_values, double tol,
                                    std::vector<std::size_t>& assignment) {
  std::vector<Cluster> clusters;
  assignment.assign(sorted_values.size(), 0);
  for (std::size_t k = 0; k < sorted_values.size(); ++k) {
    const double v = sorted_values[k];
    if (clusters.empty() || v - clusters.back().hi > tol) {
      clusters.push_back({v, v, 0.0, 0});
    }
    Cluster& c = clusters.back();
    c.hi = v;
    c.sum += v;
    ++c.count;
    assignment[k] = clusters.size() - 1;
  }
  for (const auto& c : clusters) {
    if (c.hi - c.lo > 10.0 * tol) {
      std::ostringstream os;
      os << "spectrum too dense to resolve: a cluster spans [" << c.lo << ", " << c.hi
         << "], more than 10x the grouping tolerance " << tol;
      throw AmbiguityError(os.str());
    }
  }
  return clusters;
}

}  // namespace

std::optional<std::size_t> GapSet::find(double delta) const {
  const auto it = std::lower_bound(gaps.begin(), gaps.end(), delta);
  std::optional<std::size_t> best;
  double best_dist = 10.0 * tolerance;
  for (auto cand : {it, it == gaps.begin() ? it : std::prev(it)}) {
    if (cand == gaps.end()) continue;
    const double d = std::abs(*cand - delta);
    if (d <= best_dist) {
      best_dist = d;
      best = static_cast<std::size_t>(cand - gaps.begin());
    }
  }
  return best;
}

std::size_t GapSet::index_of(double delta) const {
  const auto k = find(delta);
  if (!k) {
    std::ostringstream os;
    os << "delta = " << delta << " is not an eigenvalue gap of the observable";
    throw ValidationError({os.str()});
  }
  return *k;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> GapSet::index_pairs(std::size_t gap) const {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  const auto n = static_cast<Eigen::Index>(level_of.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (label(i, j) == static_cast<int>(gap)) out.emplace_back(i, j);
  return out;
}

double default_gap_tolerance(const Observable& a) {
  const double range = a.spectral_range();
  return range > 0.0 ? 1e-9 * range : 1e-9;
}

GapSet gap_set(const Observable& a, std::optional<double> group_tolerance) {
  const double tol = group_tolerance.value_or(default_gap_tolerance(a));
  if (!(tol > 0.0)) throw ValidationError({"gap grouping tolerance must be positive"});

  GapSet g;
  g.tolerance = tol;

  // Levels. Eigenvalues arrive descending; cluster them ascending.
  const RealVector& ev = a.eigenvalues();
  const auto n = static_cast<std::size_t>(ev.size());
  std::vector<double> asc(n);
  for (std::size_t k = 0; k < n; ++k) asc[k] = ev(static_cast<Eigen::Index>(n - 1 - k));
  std::vector<std::size_t> asg;
  const auto level_clusters = single_linkage(asc, tol, asg);
  const std::size_t nl = level_clusters.size();
  g.levels.resize(nl);
  for (std::size_t l = 0; l < nl; ++l) g.levels[l] = level_clusters[nl - 1 - l].mean();
  g.level_of.resize(n);
  for (std::size_t k = 0; k < n; ++k) g.level_of[n - 1 - k] = static_cast<int>(nl - 1 - asg[k]);

  // Positive level differences (L < M means levels[L] > levels[M]).
  struct Diff {
    double value;
    std::size_t hi;
    std::size_t lo;
  };
  std::vector<Diff> diffs;
  diffs.reserve(nl * (nl - 1) / 2);
  for (std::size_t l = 0; l < nl; ++l)
    for (std::size_t m = l + 1; m < nl; ++m) diffs.push_back({g.levels[l] - g.levels[m], l, m});
  std::sort(diffs.begin(), diffs.end(), [](const Diff& x, const Diff& y) { return x.value < y.value; });
  std::vector<double> values(diffs.size());
  for (std::size_t k = 0; k < diffs.size(); ++k) values[k] = diffs[k].value;
  if (!values.empty() && values.front() <= tol) {
    std::ostringstream os;
    os << "level difference " << values.front() << " is within the grouping tolerance " << tol
       << " of zero";
    throw AmbiguityError(os.str());
  }
  std::vector<std::size_t> dasg;
  const auto gap_clusters = single_linkage(values, tol, dasg);
  const std::size_t np = gap_clusters.size();

  g.gaps.resize(2 * np + 1);
  g.gaps[np] = 0.0;
  for (std::size_t c = 0; c < np; ++c) {
    g.gaps[np + 1 + c] = gap_clusters[c].mean();
    g.gaps[np - 1 - c] = -gap_clusters[c].mean();
  }
  g.level_gap = Eigen::MatrixXi::Constant(static_cast<Eigen::Index>(nl), static_cast<Eigen::Index>(nl),
                                          static_cast<int>(np));
  for (std::size_t k = 0; k < diffs.size(); ++k) {
    const auto hi = static_cast<Eigen::Index>(diffs[k].hi);
    const auto lo = static_cast<Eigen::Index>(diffs[k].lo);
    g.level_gap(hi, lo) = static_cast<int>(np + 1 + dasg[k]);
    g.level_gap(lo, hi) = static_cast<int>(np - 1 - dasg[k]);
  }
  return g;
}

Matrix mode_filter(const Matrix& in_eigenbasis, const GapSet& gaps, std::size_t gap) {
  Matrix out = Matrix::Zero(in_eigenbasis.rows(), in_eigenbasis.cols());
  const int target = static_cast<int>(gap);
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      if (gaps.label(i, j) == target) out(i, j) = in_eigenbasis(i, j);
  return out;
}

ModeComponent mode_component(const Matrix& op, const Observable& a, const GapSet& gaps, double delta,
                             Basis out) {
  if (op.rows() != a.dim() || op.cols() != a.dim())
    throw ValidationError({"operator and observable dimensions differ"});
  const std::size_t k = gaps.index_of(delta);
  ModeComponent c{gaps.gaps[k], mode_filter(a.to_eigenbasis(op), gaps, k), Basis::eigen};
  if (out == Basis::computational) {
    c.block = a.from_eigenbasis(c.block);
    c.basis = Basis::computational;
  }
  return c;
}

ModeComponent mode_component(const DensityMatrix& rho, const Observable& a, double delta, Basis out) {
  return mode_component(rho.matrix(), a, gap_set(a), delta, out);
}

std::vector<ModeComponent> mode_decompose(const DensityMatrix& rho, const Observable& a,
                                          std::optional<double> group_tolerance) {
  if (rho.dim() != a.dim()) throw ValidationError({"state and observable dimensions differ"});
  const GapSet gaps = gap_set(a, group_tolerance);
  const Matrix eig = a.to_eigenbasis(rho.matrix());
  std::vector<ModeComponent> out;
  out.reserve(gaps.size());
  for (std::size_t k = 0; k < gaps.size(); ++k)
    out.push_back({gaps.gaps[k], mode_filter(eig, gaps, k), Basis::eigen});
  return out;
}

Matrix to_computational(const ModeComponent& c, const Observable& a) {
  return c.basis == Basis::computational ? c.block : a.from_eigenbasis(c.block);
}

double delta_coherence_norm(const Matrix& op, const Observable& a, const GapSet& gaps, double delta) {
  // The trace norm is unitarily invariant, so the eigenbasis block suffices.
  return trace_norm(mode_component(op, a, gaps, delta, Basis::eigen).block);
}

double delta_coherence_norm(const DensityMatrix& rho, const Observable& a, double delta) {
  return delta_coherence_norm(rho.matrix(), a, gap_set(a), delta);
}

double pure_delta_coherence_norm(const PureState& psi, const Observable& a, const GapSet& gaps,
                                 double delta) {
  if (psi.dim() != a.dim()) throw ValidationError({"state and observable dimensions differ"});
  const std::size_t k = gaps.index_of(delta);
  const Vector c = a.eigenvectors().adjoint() * psi.amplitudes();
  std::vector<double> weight(gaps.levels.size(), 0.0);
  for (Eigen::Index i = 0; i < c.size(); ++i)
    weight[static_cast<std::size_t>(gaps.level_of[static_cast<std::size_t>(i)])] += std::norm(c(i));

  const auto nl = static_cast<Eigen::Index>(gaps.levels.size());
  double total = 0.0;
  for (Eigen::Index l = 0; l < nl; ++l) {
    int partners = 0;
    for (Eigen::Index m = 0; m < nl; ++m) {
      if (gaps.level_gap(l, m) != static_cast<int>(k)) continue;
      if (++partners > 1)
        throw AmbiguityError("a level has two partners at the same gap; use the SVD route");
      total += std::sqrt(weight[static_cast<std::size_t>(l)] * weight[static_cast<std::size_t>(m)]);
    }
  }
  return total;
}

Matrix dephase(const Matrix& rho, const Observable& a, const GapSet& gaps) {
  return a.from_eigenbasis(mode_filter(a.to_eigenbasis(rho), gaps, gaps.zero_index()));
}

}  // namespace macrocoh
