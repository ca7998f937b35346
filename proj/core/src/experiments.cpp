#include "macrocoh/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "macrocoh/modes.hpp"
#include "parallel.hpp"

namespace macrocoh {

namespace {

void require_even_sites(int n, int max_n) {
  if (n < 2 || n > max_n || n % 2 != 0) {
    std::ostringstream os;
    os << "N = " << n << " must be even and between 2 and " << max_n;
    throw ValidationError({os.str()});
  }
}

struct Level {
  double value;
  double weight;
};

// Sorts by value and merges neighbours closer than tol.
std::vector<Level> merge_levels(std::vector<Level> levels, double tol) {
  std::sort(levels.begin(), levels.end(), [](const Level& x, const Level& y) { return x.value < y.value; });
  std::vector<Level> out;
  double first = 0.0;
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& l : levels) {
    if (!out.empty() && l.value - first <= tol) {
      out.back().weight += l.weight;
      sum += l.value;
      ++count;
      out.back().value = sum / static_cast<double>(count);
      continue;
    }
    out.push_back(l);
    first = l.value;
    sum = l.value;
    count = 1;
  }
  return out;
}

// Level distribution of the observable in a single copy of psi.
std::vector<Level> single_site_levels(const PureState& psi, const Observable& a, const GapSet& gaps) {
  const Vector c = a.eigenvectors().adjoint() * psi.amplitudes();
  std::vector<Level> levels(gaps.levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) levels[l] = {gaps.levels[l], 0.0};
  for (Eigen::Index i = 0; i < c.size(); ++i)
    levels[static_cast<std::size_t>(gaps.level_of[static_cast<std::size_t>(i)])].weight += std::norm(c(i));
  return merge_levels(levels, 0.0);
}

std::vector<Level> copies_levels(const std::vector<Level>& single, int copies, double tol) {
  std::vector<Level> dist{{0.0, 1.0}};
  for (int k = 0; k < copies; ++k) {
    std::vector<Level> next;
    next.reserve(dist.size() * single.size());
    for (const auto& x : dist)
      for (const auto& y : single) next.push_back({x.value + y.value, x.weight * y.weight});
    dist = merge_levels(std::move(next), tol);
  }
  return dist;
}

// (delta, sum sqrt(w_L w_M)) over level pairs, merged within tol.
std::vector<Level> gap_profile(const std::vector<Level>& dist, double tol) {
  std::vector<Level> pairs;
  pairs.reserve(dist.size() * dist.size());
  for (const auto& l : dist)
    for (const auto& m : dist) pairs.push_back({l.value - m.value, std::sqrt(l.weight * m.weight)});
  return merge_levels(std::move(pairs), tol);
}

double interpolate(const std::vector<Level>& profile, double x, double tol) {
  if (profile.empty() || x < profile.front().value - tol || x > profile.back().value + tol) return 0.0;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    if (std::abs(x - profile[k].value) <= tol) return profile[k].weight;
    if (k + 1 < profile.size() && x < profile[k + 1].value) {
      const double t = (x - profile[k].value) / (profile[k + 1].value - profile[k].value);
      return (1.0 - t) * profile[k].weight + t * profile[k + 1].weight;
    }
  }
  return 0.0;
}

double expectation(const PureState& psi, const Observable& a) {
  return psi.amplitudes().dot(a.matrix() * psi.amplitudes()).real();
}

}  // namespace

Matrix rho_n_factor(int n) {
  require_even_sites(n, 14);
  const Eigen::Index dim = Eigen::Index{1} << n;
  const int r = n / 2;
  Matrix w = Matrix::Zero(dim, r);
  const double amp = std::sqrt(2.0 / n) / std::numbers::sqrt2;
  for (int k = 0; k < r; ++k) {
    // |0^{N-k} 1^k> sets the k lowest bits; its complement is |1^{N-k} 0^k>.
    const Eigen::Index low = (Eigen::Index{1} << k) - 1;
    w(low, k) = amp;
    w(dim - 1 - low, k) = amp;
  }
  return w;
}

DensityMatrix build_rho_n(int n) {
  require_even_sites(n, 12);
  return DensityMatrix::from_factor(rho_n_factor(n));
}

PureState ghz_state(int n) {
  if (n < 1 || n > 14) throw ValidationError({"GHZ state supports 1 to 14 sites"});
  const Eigen::Index dim = Eigen::Index{1} << n;
  Vector v = Vector::Zero(dim);
  v(0) = v(dim - 1) = 1.0 / std::numbers::sqrt2;
  return PureState(v);
}

RealVector collective_z_diagonal(int n) {
  if (n < 1 || n > 14) throw ValidationError({"collective Z supports 1 to 14 sites"});
  const Eigen::Index dim = Eigen::Index{1} << n;
  RealVector z(dim);
  for (Eigen::Index x = 0; x < dim; ++x) z(x) = n - 2.0 * std::popcount(static_cast<std::uint64_t>(x));
  return z;
}

Observable collective_z(int n) {
  if (n > 12) throw ValidationError({"dense collective Z supports at most 12 sites"});
  return Observable::diagonal(collective_z_diagonal(n));
}

double scaling_qfi_formula(int n) { return 4.0 * (n + 1) * (n + 2) / 3.0; }

double scaling_il_formula(int n) {
  double s = 0.0;
  const double c = 2.0 / n;
  for (int k = 0; k <= n / 2; ++k) s += c * c * (n - 2.0 * k) * (n - 2.0 * k);
  return s;
}

bool ScalingRow::consistent(double rel_tol) const {
  return std::abs(qfi_value - qfi_formula) <= rel_tol * qfi_formula &&
         std::abs(il_value - il_formula) <= rel_tol * il_formula;
}

std::vector<ScalingRow> scaling_table(std::span<const int> ns) {
  for (int n : ns) require_even_sites(n, 14);
  std::vector<ScalingRow> rows(ns.size());
  detail::parallel_for(ns.size(), [&](std::size_t i) {
    const int n = ns[i];
    const Support s = factor_support(rho_n_factor(n));
    const Matrix image = collective_z_diagonal(n).cast<cplx>().asDiagonal() * s.vectors;
    rows[i] = {n, qfi_from_support(s, image), il_from_support(s, image), scaling_qfi_formula(n),
               scaling_il_formula(n)};
  });
  return rows;
}

CopyProfile copy_equivalence(const PureState& psi, const Observable& a_single, const PureState& phi, int n,
                             std::size_t dimension_cap) {
  if (psi.dim() != a_single.dim() || phi.dim() != a_single.dim())
    throw ValidationError({"states and observable dimensions differ"});
  if (n < 1) throw ValidationError({"number of copies must be positive"});
  const double v_psi = variance(psi, a_single);
  const double v_phi = variance(phi, a_single);
  if (!(v_phi > 1e-14)) throw ValidationError({"reference state has zero variance, so no coherence to match"});

  int max_copies = 0;
  for (double dim = a_single.dim(); dim <= static_cast<double>(dimension_cap); dim *= a_single.dim()) ++max_copies;
  if (n > max_copies) {
    std::ostringstream os;
    os << n << " copies exceed the dimension cap " << dimension_cap << " (at most " << max_copies << ")";
    throw ValidationError({os.str()});
  }

  CopyProfile out;
  out.n = n;
  out.m_requested = static_cast<int>(std::lround(n * v_psi / v_phi));
  out.m = std::min(out.m_requested, max_copies);
  out.capped = out.m < out.m_requested;
  out.x0 = n * expectation(psi, a_single) - out.m * expectation(phi, a_single);

  const GapSet gaps = gap_set(a_single);
  const double tol = gaps.tolerance;
  const auto psi_profile = gap_profile(copies_levels(single_site_levels(psi, a_single, gaps), n, tol), tol);
  const auto phi_profile = gap_profile(copies_levels(single_site_levels(phi, a_single, gaps), out.m, tol), tol);

  std::vector<Level> grid;
  for (const auto& p : psi_profile) grid.push_back({p.value, 0.0});
  for (const auto& p : phi_profile) grid.push_back({p.value, 0.0});
  grid = merge_levels(std::move(grid), tol);

  for (const auto& g : grid) {
    const double a = interpolate(psi_profile, g.value, tol);
    const double b = interpolate(phi_profile, g.value, tol);
    out.delta_grid.push_back(g.value);
    out.psi_norms.push_back(a);
    out.phi_norms.push_back(b);
    if (a < 1e-12 && b < 1e-12) {
      out.vanishing_gaps.push_back(g.value);
      continue;
    }
    out.profile_distance += std::abs(a - b);
  }
  return out;
}

}  // namespace macrocoh
