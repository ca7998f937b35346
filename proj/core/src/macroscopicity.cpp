#include "macrocoh/macroscopicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "macrocoh/modes.hpp"
#include "macrocoh/random.hpp"
#include "parallel.hpp"

namespace macrocoh {

namespace {

double qfi_weight(double la, double lb) {
  const double d = la - lb;
  return 2.0 * d * d / (la + lb);
}

double il_weight(double la, double lb) {
  const double d = la - lb;
  return 0.5 * d * d;
}

// Form from the images Y_k = B_k V_S of the support vectors. Kernel pairs are
// resolved through <B_k a|B_l a> as in the scalar measures.
template <class Weight>
QuadraticForm form_from_images(const Support& s, const std::vector<Matrix>& images, int block_dim,
                               int n_blocks, Weight w) {
  const auto n_ops = static_cast<Eigen::Index>(images.size());
  const Eigen::Index r = s.values.size();
  std::vector<Matrix> z(images.size());
  for (std::size_t k = 0; k < images.size(); ++k) z[k] = s.vectors.adjoint() * images[k];

  RealMatrix pair_w(r, r);
  RealVector kernel_w(r);
  for (Eigen::Index a = 0; a < r; ++a) {
    kernel_w(a) = 2.0 * w(s.values(a), 0.0);
    for (Eigen::Index b = 0; b < r; ++b) pair_w(a, b) = w(s.values(a), s.values(b));
  }

  QuadraticForm f{block_dim, n_blocks, RealMatrix::Zero(n_ops, n_ops)};
  for (Eigen::Index k = 0; k < n_ops; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    for (Eigen::Index l = 0; l <= k; ++l) {
      const auto lu = static_cast<std::size_t>(l);
      double sum = (pair_w.array() * (z[ku].array() * z[lu].array().conjugate()).real()).sum();
      for (Eigen::Index a = 0; a < r; ++a) {
        const cplx to_kernel = images[ku].col(a).dot(images[lu].col(a)) - z[ku].col(a).dot(z[lu].col(a));
        sum += kernel_w(a) * to_kernel.real();
      }
      f.matrix(k, l) = sum;
      f.matrix(l, k) = sum;
    }
  }
  return f;
}

template <class Weight>
QuadraticForm form_from_ops(const DensityMatrix& rho, const std::vector<std::vector<Matrix>>& basis_ops,
                            Weight w) {
  if (basis_ops.empty() || basis_ops.front().empty())
    throw ValidationError({"quadratic form needs at least one basis operator"});
  const std::size_t bd = basis_ops.front().size();
  const Support s = rho.support();
  std::vector<Matrix> images;
  for (const auto& block : basis_ops) {
    if (block.size() != bd) throw ValidationError({"all blocks need the same number of operators"});
    for (const auto& b : block) {
      if (b.rows() != rho.dim() || b.cols() != rho.dim())
        throw ValidationError({"basis operator and state dimensions differ"});
      images.push_back(b * s.vectors);
    }
  }
  return form_from_images(s, images, static_cast<int>(bd), static_cast<int>(basis_ops.size()), w);
}

// Pauli mu (0 = X, 1 = Y, 2 = Z) on `site` of n qubits applied to the columns of v.
Matrix apply_pauli(int site, int mu, int n_sites, const Matrix& v) {
  const Eigen::Index mask = Eigen::Index{1} << (n_sites - 1 - site);
  Matrix out(v.rows(), v.cols());
  for (Eigen::Index x = 0; x < v.rows(); ++x) {
    const bool one = (x & mask) != 0;
    switch (mu) {
      case 0:
        out.row(x) = v.row(x ^ mask);
        break;
      case 1:
        out.row(x) = (one ? kI : -kI) * v.row(x ^ mask);
        break;
      default:
        out.row(x) = one ? Matrix(-v.row(x)) : Matrix(v.row(x));
        break;
    }
  }
  return out;
}

int qubit_count(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if (dim < 2 || (Eigen::Index{1} << n) != dim) {
    std::ostringstream os;
    os << "dimension " << dim << " is not a power of two";
    throw ValidationError({os.str()});
  }
  return n;
}

void normalize_blocks(RealVector& v, int block_dim, int n_blocks) {
  for (int i = 0; i < n_blocks; ++i) {
    auto blk = v.segment(i * block_dim, block_dim);
    const double nrm = blk.norm();
    if (nrm > 1e-12) {
      blk /= nrm;
    } else {
      blk.setZero();
      blk(block_dim - 1) = 1.0;
    }
  }
}

bool lexicographically_less(const RealVector& a, const RealVector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

AscentResult ascend(const QuadraticForm& form, RealVector v, const SearchConfig& cfg) {
  const int bd = form.block_dim;
  const RealMatrix& m = form.matrix;
  normalize_blocks(v, bd, form.n_blocks);
  AscentResult out;
  double f = form.value(v);
  out.history.push_back(f);
  for (std::size_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    const double before = f;
    for (int i = 0; i < form.n_blocks; ++i) {
      const Eigen::Index off = static_cast<Eigen::Index>(i) * bd;
      const RealMatrix mii = m.block(off, off, bd, bd);
      const RealVector vi = v.segment(off, bd);
      const RealVector c = m.middleRows(off, bd) * v - mii * vi;
      v.segment(off, bd) = maximize_block(mii, c, vi);
      f = form.value(v);
      out.history.push_back(f);
    }
    out.sweeps = sweep + 1;
    if (f - before < cfg.convergence_tol) {
      out.converged = true;
      break;
    }
  }
  out.v = std::move(v);
  out.objective = f;
  return out;
}

template <class NfResult>
void fill_quadrature_result(NfResult& out, const AscentResult& asc, int n_modes, int fock_dim) {
  out.family.fock_dim = fock_dim;
  out.family.angles.resize(static_cast<std::size_t>(n_modes));
  for (int i = 0; i < n_modes; ++i) {
    double th = std::atan2(asc.v(2 * i + 1), asc.v(2 * i));
    if (th < 0.0) th += 2.0 * std::numbers::pi;
    if (th >= 2.0 * std::numbers::pi) th = 0.0;
    out.family.angles[static_cast<std::size_t>(i)] = th;
  }
  out.ascent = asc;
}

std::vector<std::vector<Matrix>> quadrature_ops(const FockSpace& fock) {
  std::vector<std::vector<Matrix>> ops;
  for (int i = 0; i < fock.n_modes(); ++i) ops.push_back({fock.position(i), fock.momentum(i)});
  return ops;
}

}  // namespace

QuadraticForm qfi_quadratic_form(const DensityMatrix& rho, const std::vector<std::vector<Matrix>>& basis_ops) {
  return form_from_ops(rho, basis_ops, qfi_weight);
}

QuadraticForm il_quadratic_form(const DensityMatrix& rho, const std::vector<std::vector<Matrix>>& basis_ops) {
  return form_from_ops(rho, basis_ops, il_weight);
}

RealVector maximize_block(const RealMatrix& m, const RealVector& c, const RealVector& current) {
  const Eigen::Index n = m.rows();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (m + m.transpose()));
  const RealVector mu = es.eigenvalues().reverse();
  const RealMatrix q = es.eigenvectors().rowwise().reverse();
  const RealVector g = q.transpose() * c;
  const double gn = g.norm();
  const double scale = std::max({1.0, mu.cwiseAbs().maxCoeff(), gn});

  RealVector y = RealVector::Zero(n);
  if (gn <= 1e-15 * scale) {
    y(0) = 1.0;
  } else {
    // Root of sum_k g_k^2 / (l - mu_k)^2 = 1 in (mu_1, mu_1 + |g|]; the upper
    // end always satisfies the sum <= 1.
    auto secular = [&](double lam) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        const double d = lam - mu(k);
        if (d <= 0.0) return std::numeric_limits<double>::infinity();
        s += g(k) * g(k) / (d * d);
      }
      return s;
    };
    double lo = mu(0);
    double hi = mu(0) + gn;
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (secular(mid) > 1.0 ? lo : hi) = mid;
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      const double d = hi - mu(k);
      y(k) = d > 0.0 ? g(k) / d : 0.0;
    }
    // Hard case (g_1 ~ 0): the remaining norm goes along the top eigenvector.
    const double rest = 1.0 - y.squaredNorm();
    if (rest > 0.0) y(0) = std::copysign(std::sqrt(y(0) * y(0) + rest), g(0) != 0.0 ? g(0) : 1.0);
  }
  RealVector v = q * y;
  v.normalize();

  auto score = [&](const RealVector& x) { return x.dot(m * x) + 2.0 * x.dot(c); };
  if (current.size() == n && std::abs(current.norm() - 1.0) < 1e-9 && score(current) >= score(v)) return current;
  return v;
}

AscentResult maximize_on_spheres(const QuadraticForm& form, const SearchConfig& cfg) {
  if (cfg.restarts == 0 || cfg.max_sweeps == 0 || !(cfg.convergence_tol > 0.0))
    throw ValidationError({"search configuration entries must be positive"});
  const Eigen::Index total = static_cast<Eigen::Index>(form.block_dim) * form.n_blocks;
  if (form.block_dim < 1 || form.n_blocks < 1 || form.matrix.rows() != total || form.matrix.cols() != total)
    throw ValidationError({"quadratic form shape does not match its block layout"});

  std::vector<AscentResult> runs(cfg.restarts);
  detail::parallel_for(cfg.restarts, [&](std::size_t r) {
    RealVector v0;
    if (r == 0) {
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(form.matrix);
      v0 = es.eigenvectors().col(total - 1);
    } else {
      Rng rng(derive_seed(cfg.seed, r));
      std::normal_distribution<double> normal;
      v0.resize(total);
      for (Eigen::Index k = 0; k < total; ++k) v0(k) = normal(rng);
    }
    runs[r] = ascend(form, std::move(v0), cfg);
    runs[r].restart = r;
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    const double a = runs[r].objective;
    const double b = runs[best].objective;
    const double tie = 1e-12 * std::max(1.0, std::abs(b));
    if (a > b + tie || (std::abs(a - b) <= tie && lexicographically_less(runs[r].v, runs[best].v))) best = r;
  }
  return runs[best];
}

Matrix LocalObservableFamily::observable() const {
  const int n = n_sites();
  if (n < 1) throw ValidationError({"observable family needs at least one site"});
  const auto dim = Eigen::Index{1} << n;
  Matrix a = Matrix::Zero(dim, dim);
  const Matrix id = Matrix::Identity(dim, dim);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d& b = bloch_vectors[static_cast<std::size_t>(i)];
    for (int mu = 0; mu < 3; ++mu)
      if (b(mu) != 0.0) a += b(mu) * apply_pauli(i, mu, n, id);
  }
  return a;
}

std::vector<std::vector<Matrix>> pauli_basis_ops(int n_sites) {
  if (n_sites < 1 || n_sites > 14) throw ValidationError({"pauli_basis_ops supports 1 to 14 sites"});
  const auto dim = Eigen::Index{1} << n_sites;
  const Matrix id = Matrix::Identity(dim, dim);
  std::vector<std::vector<Matrix>> ops(static_cast<std::size_t>(n_sites));
  for (int i = 0; i < n_sites; ++i)
    for (int mu = 0; mu < 3; ++mu) ops[static_cast<std::size_t>(i)].push_back(apply_pauli(i, mu, n_sites, id));
  return ops;
}

QubitNf nf_qubits(const DensityMatrix& rho, const SearchConfig& cfg) {
  const int n = qubit_count(rho.dim());
  const Support s = rho.support();
  std::vector<Matrix> images;
  for (int i = 0; i < n; ++i)
    for (int mu = 0; mu < 3; ++mu) images.push_back(apply_pauli(i, mu, n, s.vectors));
  const QuadraticForm form = form_from_images(s, images, 3, n, qfi_weight);

  QubitNf out;
  out.ascent = maximize_on_spheres(form, cfg);
  out.value = std::max(0.0, out.ascent.objective) / (4.0 * n);
  for (int i = 0; i < n; ++i) out.family.bloch_vectors.emplace_back(out.ascent.v.segment<3>(3 * i));
  return out;
}

Matrix QuadratureFamily::observable(const FockSpace& fock) const {
  if (static_cast<int>(angles.size()) != fock.n_modes())
    throw ValidationError({"need one angle per mode"});
  Matrix a = Matrix::Zero(fock.dim(), fock.dim());
  for (int i = 0; i < fock.n_modes(); ++i) a += fock.quadrature(i, angles[static_cast<std::size_t>(i)]);
  return a;
}

QuadratureNf nf_quadratures(const DensityMatrix& rho, const FockSpace& fock, const SearchConfig& cfg) {
  fock.require_healthy(rho);
  const QuadraticForm form = qfi_quadratic_form(rho, quadrature_ops(fock));
  QuadratureNf out;
  const AscentResult asc = maximize_on_spheres(form, cfg);
  out.value = std::max(0.0, asc.objective) / (4.0 * fock.n_modes());
  fill_quadrature_result(out, asc, fock.n_modes(), fock.dim_per_mode());
  return out;
}

QuadratureNf nlj_tilde(const DensityMatrix& rho, const FockSpace& fock, const SearchConfig& cfg) {
  fock.require_healthy(rho);
  const QuadraticForm form = il_quadratic_form(rho, quadrature_ops(fock));
  QuadratureNf out;
  const AscentResult asc = maximize_on_spheres(form, cfg);
  out.value = std::max(0.0, asc.objective) / fock.n_modes();
  fill_quadrature_result(out, asc, fock.n_modes(), fock.dim_per_mode());
  return out;
}

double nlj_closed_form(const DensityMatrix& rho, const FockSpace& fock) {
  fock.require_healthy(rho);
  double sum = 0.0;
  for (int i = 0; i < fock.n_modes(); ++i)
    sum += il_measure(rho, fock.position(i)) + il_measure(rho, fock.momentum(i));
  return 0.5 * sum;
}

std::pair<RealVector, RealVector> gauss_legendre(int n) {
  if (n < 1) throw ValidationError({"Gauss-Legendre order must be positive"});
  RealVector x(n), w(n);
  const auto un = static_cast<unsigned>(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      const double p = std::legendre(un, t);
      const double p1 = n > 1 ? std::legendre(un - 1, t) : 1.0;
      dp = n * (t * p - p1) / (t * t - 1.0);
      const double step = p / dp;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double p = std::legendre(un, t);
    const double p1 = n > 1 ? std::legendre(un - 1, t) : 1.0;
    dp = n * (t * p - p1) / (t * t - 1.0);
    x(n - 1 - i) = t;
    w(n - 1 - i) = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  return {x, w};
}

NljIntegral nlj_integral(const DensityMatrix& rho, const FockSpace& fock, const NljIntegralOptions& opts) {
  if (fock.n_modes() != 1) throw ValidationError({"nlj_integral is implemented for a single mode"});
  if (opts.points < 2) throw ValidationError({"nlj_integral needs at least two points per axis"});
  fock.require_healthy(rho);

  auto integrand = [&](cplx alpha) { return std::norm(alpha) * std::norm(characteristic_function(rho, alpha, fock)); };
  // Sampled on rings R(1 + k/8), k = 0..8, so an isolated zero ring of chi
  // cannot hide a large tail.
  auto tail_at = [&](double radius) {
    double sup = 0.0;
    for (int k = 0; k <= 8; ++k)
      for (int j = 0; j < 64; ++j)
        sup = std::max(sup, integrand(std::polar(radius * (1.0 + k / 8.0), 2.0 * std::numbers::pi * j / 64.0)));
    return sup;
  };

  NljIntegral out;
  out.points = opts.points;
  if (opts.radius) {
    out.radius = *opts.radius;
    if (!(out.radius > 0.0)) throw ValidationError({"integration radius must be positive"});
    out.tail = tail_at(out.radius);
    if (out.tail > opts.tail_tolerance) {
      std::ostringstream os;
      os << "integrand tail " << out.tail << " at radius " << out.radius << " exceeds " << opts.tail_tolerance
         << "; increase the radius";
      throw ValidationError({os.str()});
    }
  } else {
    const double max_radius = 4.0 * std::sqrt(static_cast<double>(fock.dim_per_mode())) + 10.0;
    out.radius = 3.0;
    out.tail = tail_at(out.radius);
    while (out.tail > opts.tail_tolerance) {
      out.radius *= 1.2;
      if (out.radius > max_radius) throw ValidationError({"no integration radius meets the tail tolerance"});
      out.tail = tail_at(out.radius);
    }
  }

  const auto [nodes, weights] = gauss_legendre(opts.points);
  const double r = out.radius;
  std::vector<double> rows(static_cast<std::size_t>(opts.points));
  detail::parallel_for(rows.size(), [&](std::size_t i) {
    const auto ii = static_cast<Eigen::Index>(i);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < nodes.size(); ++j) acc += weights(j) * integrand({r * nodes(ii), r * nodes(j)});
    rows[i] = weights(ii) * acc;
  });
  double total = 0.0;
  for (double v : rows) total += v;
  out.value = total * r * r / (2.0 * std::numbers::pi);
  return out;
}

std::string_view to_string(Ordering o) {
  switch (o) {
    case Ordering::greater:
      return "greater";
    case Ordering::equal:
      return "equal";
    case Ordering::less:
      return "less";
  }
  return "unknown";
}

M4Verdict m4_ordering_check(MeasureId id, const Observable& a, std::pair<Eigen::Index, Eigen::Index> pair1,
                            std::pair<Eigen::Index, Eigen::Index> pair2) {
  const Eigen::Index d = a.dim();
  for (Eigen::Index idx : {pair1.first, pair1.second, pair2.first, pair2.second})
    if (idx < 0 || idx >= d) throw ValidationError({"eigen index out of range"});
  if (pair1.first == pair1.second || pair2.first == pair2.second)
    throw ValidationError({"each pair needs two distinct indices"});

  const RealVector& ev = a.eigenvalues();
  M4Verdict v;
  v.gap1 = std::abs(ev(pair1.first) - ev(pair1.second));
  v.gap2 = std::abs(ev(pair2.first) - ev(pair2.second));
  const double gap_tol = default_gap_tolerance(a);
  if (v.gap1 < v.gap2 - gap_tol) throw ValidationError({"pair1 must have the larger or equal gap"});

  auto value = [&](std::pair<Eigen::Index, Eigen::Index> p) {
    const Vector psi = (a.eigenvectors().col(p.first) + a.eigenvectors().col(p.second)) / std::numbers::sqrt2;
    const DensityMatrix rho = DensityMatrix::from_pure(PureState::normalized(psi));
    MeasureOptions opts;
    opts.delta = ev(p.first) - ev(p.second);
    return evaluate_measure(id, rho, a, opts).value;
  };
  v.value1 = value(pair1);
  v.value2 = value(pair2);

  const double tie = 1e-9 * std::max({1.0, std::abs(v.value1), std::abs(v.value2)});
  if (std::abs(v.value1 - v.value2) <= tie)
    v.ordering = Ordering::equal;
  else
    v.ordering = v.value1 > v.value2 ? Ordering::greater : Ordering::less;
  const bool equal_gaps = std::abs(v.gap1 - v.gap2) <= gap_tol;
  v.satisfies_m4 = equal_gaps ? v.ordering == Ordering::equal : v.ordering == Ordering::greater;
  return v;
}

}  // namespace macrocoh
