#include "macrocoh/bosonic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace macrocoh {

namespace {

Vector coherent_amplitudes(cplx alpha, int dim) {
  Vector v(dim);
  v(0) = std::exp(-0.5 * std::norm(alpha));
  for (int k = 1; k < dim; ++k) v(k) = v(k - 1) * alpha / std::sqrt(static_cast<double>(k));
  return v;
}

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

Eigen::Index ipow(Eigen::Index base, int exp) {
  Eigen::Index r = 1;
  for (int k = 0; k < exp; ++k) r *= base;
  return r;
}

void check_alpha(cplx alpha, int dim_per_mode, const char* what) {
  const double a = std::abs(alpha);
  if (a * a + 4.0 * a > dim_per_mode) {
    std::ostringstream os;
    os << what << ": |alpha| = " << a << " needs |alpha|^2 + 4|alpha| <= " << dim_per_mode
       << "; increase the Fock dimension";
    throw TruncationError(os.str());
  }
}

}  // namespace

Matrix annihilation_matrix(int dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

FockSpace::FockSpace(int n_modes, int dim_per_mode, std::size_t dimension_cap)
    : n_modes_(n_modes), dim_per_mode_(dim_per_mode) {
  if (n_modes < 1 || dim_per_mode < 2)
    throw ValidationError({"FockSpace needs at least one mode and two levels per mode"});
  double total = std::pow(static_cast<double>(dim_per_mode), n_modes);
  if (total > static_cast<double>(dimension_cap)) {
    std::ostringstream os;
    os << "Fock space dimension " << total << " exceeds cap " << dimension_cap;
    throw ResourceError(os.str());
  }
  dim_ = ipow(dim_per_mode, n_modes);

  auto ops = std::make_shared<Operators>();
  const Matrix a1 = annihilation_matrix(dim_per_mode);
  const double s = 1.0 / std::numbers::sqrt2;
  for (int m = 0; m < n_modes; ++m) {
    Matrix a = embed(a1, m);
    Matrix ad = a.adjoint();
    ops->x.push_back(s * (a + ad));
    ops->p.push_back(-kI * s * (a - ad));
    ops->a.push_back(std::move(a));
    ops->ad.push_back(std::move(ad));
  }
  ops_ = std::move(ops);
}

void FockSpace::check_mode(int mode) const {
  if (mode < 0 || mode >= n_modes_) throw ValidationError({"mode index out of range"});
}

const Matrix& FockSpace::annihilation(int mode) const {
  check_mode(mode);
  return ops_->a[static_cast<std::size_t>(mode)];
}
const Matrix& FockSpace::creation(int mode) const {
  check_mode(mode);
  return ops_->ad[static_cast<std::size_t>(mode)];
}
const Matrix& FockSpace::position(int mode) const {
  check_mode(mode);
  return ops_->x[static_cast<std::size_t>(mode)];
}
const Matrix& FockSpace::momentum(int mode) const {
  check_mode(mode);
  return ops_->p[static_cast<std::size_t>(mode)];
}

Matrix FockSpace::number(int mode) const { return creation(mode) * annihilation(mode); }

Matrix FockSpace::quadrature(int mode, double theta) const {
  return std::cos(theta) * position(mode) + std::sin(theta) * momentum(mode);
}

Matrix FockSpace::embed(const Matrix& single_mode, int mode) const {
  if (mode < 0 || mode >= n_modes_) throw ValidationError({"mode index out of range"});
  if (single_mode.rows() != dim_per_mode_ || single_mode.cols() != dim_per_mode_)
    throw ValidationError({"single-mode operator has the wrong dimension"});
  const Matrix left = identity(ipow(dim_per_mode_, mode));
  const Matrix right = identity(ipow(dim_per_mode_, n_modes_ - mode - 1));
  return tensor_product(tensor_product(left, single_mode), right);
}

double FockSpace::edge_weight(const DensityMatrix& rho, int levels) const {
  if (rho.dim() != dim_) throw ValidationError({"state does not live on this Fock space"});
  double worst = 0.0;
  for (int m = 0; m < n_modes_; ++m) {
    const Eigen::Index stride = ipow(dim_per_mode_, n_modes_ - m - 1);
    double w = 0.0;
    for (Eigen::Index i = 0; i < dim_; ++i) {
      const Eigen::Index digit = (i / stride) % dim_per_mode_;
      if (digit >= dim_per_mode_ - levels) w += rho.matrix()(i, i).real();
    }
    worst = std::max(worst, w);
  }
  return worst;
}

void FockSpace::require_healthy(const DensityMatrix& rho, double bound) const {
  const double w = edge_weight(rho);
  if (w > bound) {
    std::ostringstream os;
    os << "truncation health check failed: weight " << w << " on the top two Fock levels exceeds "
       << bound << "; use a larger Fock dimension";
    throw TruncationError(os.str());
  }
}

StateRecipe StateRecipe::number_state(int n) { return {Kind::number, n, {}, {}}; }
StateRecipe StateRecipe::coherent(cplx alpha) { return {Kind::coherent, 0, alpha, {}}; }
StateRecipe StateRecipe::cat(cplx alpha) { return {Kind::cat, 0, alpha, {}}; }
StateRecipe StateRecipe::squeezed(cplx xi, cplx alpha) { return {Kind::squeezed, 0, alpha, xi}; }

void check_recipe_health(const StateRecipe& recipe, int dim_per_mode) {
  switch (recipe.kind) {
    case StateRecipe::Kind::number:
      if (recipe.n < 0 || recipe.n > dim_per_mode - 3) {
        std::ostringstream os;
        os << "number state |" << recipe.n << "> needs 0 <= n <= " << dim_per_mode - 3;
        throw TruncationError(os.str());
      }
      break;
    case StateRecipe::Kind::coherent:
    case StateRecipe::Kind::cat:
    case StateRecipe::Kind::squeezed:
      check_alpha(recipe.alpha, dim_per_mode, "state recipe");
      break;
  }
}

PureState standard_state(const StateRecipe& recipe, const FockSpace& fock) {
  if (fock.n_modes() != 1) throw ValidationError({"standard_state builds single-mode states"});
  const int d = fock.dim_per_mode();
  check_recipe_health(recipe, d);
  switch (recipe.kind) {
    case StateRecipe::Kind::number:
      return PureState::basis(d, recipe.n);
    case StateRecipe::Kind::coherent:
      return PureState::normalized(coherent_amplitudes(recipe.alpha, d));
    case StateRecipe::Kind::cat:
      return PureState::normalized(coherent_amplitudes(recipe.alpha, d) + coherent_amplitudes(-recipe.alpha, d));
    case StateRecipe::Kind::squeezed: {
      const int work = 2 * d;
      const Matrix a = annihilation_matrix(work);
      const Matrix ad = a.adjoint();
      const Matrix generator = 0.5 * (std::conj(recipe.xi) * a * a - recipe.xi * ad * ad);
      // exp(G) = exp(-i H) with H = iG Hermitian.
      const Vector v = unitary_exp(kI * generator, 1.0) * coherent_amplitudes(recipe.alpha, work);
      const double edge = v.tail(work - d + 2).squaredNorm() / v.squaredNorm();
      if (edge > kTruncationWeightBound) {
        std::ostringstream os;
        os << "squeezed state puts weight " << edge << " on or beyond the top two of " << d
           << " levels; increase the Fock dimension";
        throw TruncationError(os.str());
      }
      return PureState::normalized(v.head(d));
    }
  }
  throw ValidationError({"unknown state recipe"});
}

Matrix displacement_operator(cplx alpha, int dim_per_mode) {
  check_alpha(alpha, dim_per_mode, "displacement_operator");
  const int pad = 2 * static_cast<int>(std::ceil(std::norm(alpha)));
  const int work = dim_per_mode + pad;
  const Matrix a = annihilation_matrix(work);
  const Matrix generator = alpha * a.adjoint() - std::conj(alpha) * a;
  const Matrix full = unitary_exp(kI * generator, 1.0);
  return full.topLeftCorner(dim_per_mode, dim_per_mode);
}

Matrix displacement_operator(std::span<const cplx> alpha, const FockSpace& fock) {
  if (static_cast<int>(alpha.size()) != fock.n_modes())
    throw ValidationError({"need one displacement amplitude per mode"});
  Matrix out = Matrix::Identity(1, 1);
  for (cplx a : alpha) out = tensor_product(out, displacement_operator(a, fock.dim_per_mode()));
  return out;
}

Matrix displacement_elements(cplx alpha, int dim) {
  Matrix d = Matrix::Zero(dim, dim);
  const double x = std::norm(alpha);
  const double r = std::abs(alpha);
  const double phi = std::arg(alpha);
  std::vector<double> log_fact(static_cast<std::size_t>(dim));
  for (int n = 0; n < dim; ++n) log_fact[static_cast<std::size_t>(n)] = std::lgamma(n + 1.0);
  for (int k = 0; k < dim; ++k) {
    if (k > 0 && r == 0.0) break;
    const double base = (k > 0 ? k * std::log(r) : 0.0) - 0.5 * x;
    const cplx below = std::polar(1.0, k * phi);
    const cplx above = std::polar(1.0, k * (std::numbers::pi - phi));
    // Generalized Laguerre L_n^{(k)}(x) by upward recurrence in n.
    double l_prev = 0.0;
    double l_cur = 1.0;
    for (int n = 0; n + k < dim; ++n) {
      if (n == 1) {
        l_prev = 1.0;
        l_cur = 1.0 + k - x;
      } else if (n > 1) {
        const double next = ((2.0 * (n - 1) + 1.0 + k - x) * l_cur - (n - 1 + k) * l_prev) / n;
        l_prev = l_cur;
        l_cur = next;
      }
      const int m = n + k;
      const double mag =
          std::exp(0.5 * (log_fact[static_cast<std::size_t>(n)] - log_fact[static_cast<std::size_t>(m)]) + base) * l_cur;
      d(m, n) = mag * below;
      if (k > 0) d(n, m) = mag * above;
    }
  }
  return d;
}

cplx characteristic_function(const DensityMatrix& rho, std::span<const cplx> alpha, const FockSpace& fock) {
  if (rho.dim() != fock.dim()) throw ValidationError({"state does not live on this Fock space"});
  if (static_cast<int>(alpha.size()) != fock.n_modes())
    throw ValidationError({"need one displacement amplitude per mode"});
  Matrix d = Matrix::Identity(1, 1);
  for (cplx a : alpha) d = tensor_product(d, displacement_elements(a, fock.dim_per_mode()));
  return rho.matrix().cwiseProduct(d.transpose()).sum();
}

cplx characteristic_function(const DensityMatrix& rho, cplx alpha, const FockSpace& fock) {
  return characteristic_function(rho, std::span<const cplx>(&alpha, 1), fock);
}

}  // namespace macrocoh
