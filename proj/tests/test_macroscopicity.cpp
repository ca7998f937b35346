#include <doctest.h>

#include <numbers>

#include "macrocoh/bosonic.hpp"
#include "macrocoh/experiments.hpp"
#include "macrocoh/macroscopicity.hpp"
#include "macrocoh/random.hpp"
#include "oracles.hpp"

using namespace macrocoh;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix pauli(int k) {
  Matrix m = Matrix::Zero(2, 2);
  if (k == 0) m << 0, 1, 1, 0;
  if (k == 1) m << 0, cplx(0, -1), cplx(0, 1), 0;
  if (k == 2) m << 1, 0, 0, -1;
  return m;
}

Matrix local_sum(const std::vector<Eigen::Vector3d>& n) {
  const auto sites = static_cast<int>(n.size());
  Matrix total = Matrix::Zero(Eigen::Index{1} << sites, Eigen::Index{1} << sites);
  for (int i = 0; i < sites; ++i) {
    Matrix site = n[static_cast<std::size_t>(i)](0) * pauli(0) + n[static_cast<std::size_t>(i)](1) * pauli(1) +
                  n[static_cast<std::size_t>(i)](2) * pauli(2);
    Matrix op = Matrix::Identity(1, 1);
    for (int j = 0; j < sites; ++j) op = oracle::kron(op, j == i ? site : Matrix(Matrix::Identity(2, 2)));
    total += op;
  }
  return total;
}

// Best qfi/(4N) over a 10 degree grid of one direction shared by all sites.
double symmetric_grid_nf(const DensityMatrix& rho, int sites) {
  double best = 0.0;
  for (int t = 0; t <= 18; ++t)
    for (int p = 0; p < 36; ++p) {
      const double th = t * kPi / 18.0, ph = p * kPi / 18.0;
      const Eigen::Vector3d n(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
      const std::vector<Eigen::Vector3d> dirs(static_cast<std::size_t>(sites), n);
      best = std::max(best, oracle::qfi(rho.matrix(), local_sum(dirs)) / (4.0 * sites));
    }
  return best;
}

}  // namespace

TEST_CASE("pauli_basis_ops builds the single-site Paulis") {
  const auto ops = pauli_basis_ops(2);
  REQUIRE(ops.size() == 2);
  CHECK((ops[0][2] - oracle::kron(pauli(2), Matrix::Identity(2, 2))).norm() == 0.0);
  CHECK((ops[1][1] - oracle::kron(Matrix::Identity(2, 2), pauli(1))).norm() == 0.0);
  CHECK_THROWS_AS(pauli_basis_ops(0), ValidationError);
}

TEST_CASE("quadratic forms reproduce qfi and I_L of the combined observable") {
  const DensityMatrix rho = random_density(8, 3, 7);
  const auto ops = pauli_basis_ops(3);
  const QuadraticForm fq = qfi_quadratic_form(rho, ops);
  const QuadraticForm fl = il_quadratic_form(rho, ops);
  CHECK(fq.block_dim == 3);
  CHECK(fq.n_blocks == 3);
  Rng rng(1);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 5; ++trial) {
    RealVector v(9);
    for (auto& x : v) x = g(rng);
    Matrix a = Matrix::Zero(8, 8);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) a += v(3 * i + k) * ops[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    CHECK(fq.value(v) == doctest::Approx(oracle::qfi(rho.matrix(), a)).epsilon(1e-9));
    CHECK(fl.value(v) == doctest::Approx(oracle::il(rho.matrix(), a)).epsilon(1e-9));
  }
}

TEST_CASE("maximize_block solves the single-sphere problem") {
  Rng rng(2);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    RealMatrix m(3, 3);
    for (auto& x : m.reshaped()) x = g(rng);
    m = 0.5 * (m + m.transpose()).eval();
    RealVector c(3);
    for (auto& x : c) x = trial % 4 == 0 ? 0.0 : g(rng);
    const RealVector x = maximize_block(m, c, RealVector::Unit(3, 0));
    CHECK(x.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const double got = x.dot(m * x) + 2.0 * x.dot(c);
    double best = -1e300;
    for (int t = 0; t <= 180; ++t)
      for (int p = 0; p < 360; ++p) {
        const double th = t * kPi / 180.0, ph = p * kPi / 180.0;
        const RealVector y = Eigen::Vector3d(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
        best = std::max(best, y.dot(m * y) + 2.0 * y.dot(c));
      }
    CHECK(got >= best - 1e-9);
  }
}

TEST_CASE("maximize_block keeps the current point when it is already optimal") {
  RealMatrix m = RealMatrix::Identity(2, 2);
  const RealVector current = RealVector::Unit(2, 1);
  CHECK(maximize_block(m, RealVector::Zero(2), current) == current);
}

TEST_CASE("block ascent is monotone and reproducible") {
  const DensityMatrix rho = random_density(8, 2, 31);
  const QuadraticForm f = qfi_quadratic_form(rho, pauli_basis_ops(3));
  SearchConfig cfg;
  cfg.restarts = 6;
  cfg.seed = 3;
  const AscentResult r = maximize_on_spheres(f, cfg);
  for (std::size_t k = 1; k < r.history.size(); ++k) CHECK(r.history[k] >= r.history[k - 1] - 1e-12);
  CHECK(r.objective == doctest::Approx(f.value(r.v)).epsilon(1e-12));
  for (int b = 0; b < 3; ++b) CHECK(r.v.segment(3 * b, 3).norm() == doctest::Approx(1.0).epsilon(1e-12));
  const AscentResult again = maximize_on_spheres(f, cfg);
  CHECK((again.v - r.v).norm() == 0.0);
}

TEST_CASE("nf_qubits on GHZ states matches the grid oracle and equals N") {
  for (int n = 1; n <= 4; ++n) {
    const DensityMatrix rho = DensityMatrix::from_pure(ghz_state(n));
    const QubitNf r = nf_qubits(rho);
    CHECK(r.value == doctest::Approx(n).epsilon(1e-9));
    CHECK(std::abs(r.value - symmetric_grid_nf(rho, n)) <= 1e-6);
    CHECK(oracle::qfi(rho.matrix(), r.family.observable()) / (4.0 * n) == doctest::Approx(r.value).epsilon(1e-9));
  }
}

TEST_CASE("nf_qubits: product states have effective size at most one") {
  const PureState plus = PureState::normalized(Vector::Ones(2));
  PureState prod = plus;
  for (int k = 1; k < 3; ++k) prod = tensor_product(prod, plus);
  const QubitNf r = nf_qubits(DensityMatrix::from_pure(prod));
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(nf_qubits(random_density(6, 2, 1)), ValidationError);
}

TEST_CASE("nf_qubits never exceeds N on random states") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const QubitNf r = nf_qubits(random_density(8, 1 + static_cast<Eigen::Index>(s % 3), s));
    CHECK(r.value <= 3.0 + 1e-9);
    CHECK(r.value >= 0.0);
  }
}

TEST_CASE("quadrature family: coherent state and squeezed vacuum") {
  const FockSpace fock(1, 40);
  const DensityMatrix coh = DensityMatrix::from_pure(standard_state(StateRecipe::coherent({1.2, 0.4}), fock));
  const QuadratureNf r = nf_quadratures(coh, fock);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-6));  // variance 1/2 in every direction

  const DensityMatrix sq = DensityMatrix::from_pure(standard_state(StateRecipe::squeezed({0.4, 0.0}), fock));
  const QuadratureNf s = nf_quadratures(sq, fock);
  CHECK(s.value == doctest::Approx(0.5 * std::exp(0.8)).epsilon(1e-6));
  const double theta = s.family.angles[0];
  CHECK(std::abs(std::sin(theta)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("quadrature family: even cat matches the dense covariance oracle") {
  const int dim = 40;
  const FockSpace fock(1, dim);
  const oracle::Vec v = oracle::coherent(2.0, dim) + oracle::coherent(-2.0, dim);
  const oracle::Vec psi = v / v.norm();
  const oracle::Mat a = oracle::ladder(dim);
  const oracle::Mat x = (a + a.adjoint()) / std::sqrt(2.0);
  const oracle::Mat p = (a - a.adjoint()) / cplx(0.0, std::sqrt(2.0));
  const auto mean = [&](const oracle::Mat& m) { return psi.dot(m * psi).real(); };
  Eigen::Matrix2d cov;
  cov(0, 0) = oracle::variance(psi, x);
  cov(1, 1) = oracle::variance(psi, p);
  cov(0, 1) = cov(1, 0) = 0.5 * mean(x * p + p * x) - mean(x) * mean(p);
  const double v_max = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(cov).eigenvalues().maxCoeff();
  const double n_mean = mean(a.adjoint() * a);
  const QuadratureNf r = nf_quadratures(DensityMatrix::from_pure(PureState::normalized(psi)), fock);
  CHECK(r.value == doctest::Approx(v_max).epsilon(1e-8));
  // Close to 2<n> + 1/2 rather than <n>.
  CHECK(r.value == doctest::Approx(2.0 * n_mean + 0.5).epsilon(1e-3));
}

TEST_CASE("nlj_tilde equals nf on pure states and stays below it on mixed ones") {
  const FockSpace fock(1, 30);
  const DensityMatrix cat = DensityMatrix::from_pure(standard_state(StateRecipe::cat({1.5, 0.0}), fock));
  CHECK(nlj_tilde(cat, fock).value == doctest::Approx(nf_quadratures(cat, fock).value).epsilon(1e-8));
  const PureState a = standard_state(StateRecipe::coherent({1.0, 0.0}), fock);
  const PureState b = standard_state(StateRecipe::coherent({-1.0, 0.5}), fock);
  const std::vector<double> w{0.5, 0.5};
  const DensityMatrix mix = DensityMatrix::from_ensemble(w, std::vector<PureState>{a, b});
  CHECK(nlj_tilde(mix, fock).value <= nf_quadratures(mix, fock).value + 1e-9);
}

TEST_CASE("nlj_closed_form on number and coherent states") {
  const FockSpace fock(1, 40);
  // I_L(|n>, x) = V(|n>, x) = n + 1/2, same for p.
  for (int n : {0, 1, 3}) {
    const DensityMatrix rho = DensityMatrix::from_pure(standard_state(StateRecipe::number_state(n), fock));
    CHECK(nlj_closed_form(rho, fock) == doctest::Approx(n + 0.5).epsilon(1e-10));
  }
  const DensityMatrix coh = DensityMatrix::from_pure(standard_state(StateRecipe::coherent({2.0, 0.0}), fock));
  CHECK(nlj_closed_form(coh, fock) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  const auto [x, w] = gauss_legendre(8);
  for (Eigen::Index k = 1; k < x.size(); ++k) CHECK(x(k) > x(k - 1));
  CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-14));
  double m14 = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) m14 += w(k) * std::pow(x(k), 14);
  CHECK(m14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
}

TEST_CASE("nlj_integral agrees with the closed form") {
  const FockSpace fock(1, 40);
  for (const auto& recipe : {StateRecipe::number_state(0), StateRecipe::number_state(2),
                             StateRecipe::cat({1.2, 0.0}), StateRecipe::squeezed({0.3, 0.0})}) {
    const DensityMatrix rho = DensityMatrix::from_pure(standard_state(recipe, fock));
    const double closed = nlj_closed_form(rho, fock);
    const NljIntegral r = nlj_integral(rho, fock);
    CHECK(std::abs(r.value - closed) <= std::max(1e-3, 0.01 * closed));
    CHECK(r.tail <= 1e-9);
  }
}

TEST_CASE("nlj_integral rejects an explicit radius that cuts the tail") {
  const FockSpace fock(1, 40);
  const DensityMatrix cat = DensityMatrix::from_pure(standard_state(StateRecipe::cat({2.0, 0.0}), fock));
  NljIntegralOptions opts;
  opts.radius = 1.0;
  CHECK_THROWS_AS(nlj_integral(cat, fock, opts), ValidationError);
  CHECK_THROWS_AS(nlj_integral(cat, FockSpace(2, 6)), ValidationError);
}

TEST_CASE("m4_ordering_check") {
  const Observable a = Observable::diagonal(RealVector{{0.0, 1.0, 2.0, 3.0}});
  for (auto id : {MeasureId::qfi, MeasureId::variance, MeasureId::skew, MeasureId::il}) {
    const M4Verdict v = m4_ordering_check(id, a, {0, 3}, {0, 1});
    CHECK(v.ordering == Ordering::greater);
    CHECK(v.satisfies_m4);
  }
  const M4Verdict re = m4_ordering_check(MeasureId::rel_ent, a, {0, 3}, {0, 1});
  CHECK(re.ordering == Ordering::equal);
  CHECK_FALSE(re.satisfies_m4);
  const M4Verdict same = m4_ordering_check(MeasureId::qfi, a, {0, 1}, {2, 3});
  CHECK(same.ordering == Ordering::equal);
  CHECK(same.satisfies_m4);
  CHECK_THROWS_AS(m4_ordering_check(MeasureId::qfi, a, {0, 1}, {0, 3}), ValidationError);
  CHECK(to_string(Ordering::greater) == "greater");
}
