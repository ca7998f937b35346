#include <doctest.h>

#include "macrocoh/channels.hpp"
#include "macrocoh/modes.hpp"
#include "macrocoh/random.hpp"
#include "oracles.hpp"

using namespace macrocoh;

namespace {

Observable integer_observable(std::uint64_t seed) {
  Rng rng(seed);
  const RealVector d{{0.0, 1.0, 1.0, 2.0, 3.0}};
  const Matrix u = random_unitary(5, rng);
  return Observable(hermitian_part(u * d.cast<cplx>().asDiagonal() * u.adjoint()));
}

}  // namespace

TEST_CASE("random free channels are trace preserving and covariant") {
  const Observable a = integer_observable(1);
  const std::vector<double> modes{0.0, 1.0, -2.0};
  const FreeChannel ch = random_free_channel(a, modes, 4, 0.8, 7);
  CHECK(ch.kraus.size() == 5);
  CHECK(ch.mode_labels.front() == 0.0);
  CHECK((ch.completeness() - Matrix::Identity(5, 5)).norm() < 1e-10);
  const CovarianceVerdict v = verify_covariance(ch, a);
  CHECK(v.passed);
  CHECK(v.support_ok);
  CHECK(v.max_residual < 1e-9);
}

TEST_CASE("each Kraus operator shifts mode delta to delta + label") {
  const Observable a = integer_observable(2);
  const GapSet g = gap_set(a);
  const std::vector<double> modes{1.0};
  const FreeChannel ch = random_free_channel(a, modes, 1, 0.5, 3, false);
  REQUIRE(ch.kraus.size() == 1);
  const Matrix k = ch.kraus[0];
  const double x = 0.6;
  // T_x(K) = e^{-i delta x} K for an operator in mode delta.
  const Matrix u = phase_unitary(a, x);
  CHECK((u * k * u.adjoint() - std::exp(-kI * x) * k).norm() < 1e-10);
  CHECK(delta_coherence_norm(k, a, g, 1.0) == doctest::Approx(trace_norm(k)).epsilon(1e-10));
}

TEST_CASE("verify_covariance flags a non-covariant operator") {
  const Observable a = Observable::diagonal(RealVector{{1.0, 0.0}});
  FreeChannel bad;
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  bad.kraus = {h / std::sqrt(2.0)};
  bad.mode_labels = {0.0};
  const CovarianceVerdict v = verify_covariance(bad, a);
  CHECK_FALSE(v.passed);
  CHECK_FALSE(v.support_ok);
  CHECK_FALSE(v.violations.empty());
}

TEST_CASE("apply_channel equals the Kraus sum and selective outcomes average back") {
  const Observable a = integer_observable(3);
  const std::vector<double> modes{0.0, 2.0};
  const FreeChannel ch = random_free_channel(a, modes, 3, 0.9, 11);
  const DensityMatrix rho = random_density(5, 3, 4);
  Matrix ref = Matrix::Zero(5, 5);
  for (const auto& k : ch.kraus) ref += k * rho.matrix() * k.adjoint();
  CHECK((apply_channel(ch, rho).matrix() - ref).norm() < 1e-12);
  const auto outcomes = apply_selective(ch, rho);
  Matrix avg = Matrix::Zero(5, 5);
  double p = 0.0;
  for (const auto& o : outcomes) {
    avg += o.probability * o.state.matrix();
    p += o.probability;
  }
  CHECK(p == doctest::Approx(1.0).epsilon(1e-10));
  CHECK((avg - ref).norm() < 1e-10);
}

TEST_CASE("n_kraus = 0 gives the identity channel") {
  const Observable a = integer_observable(4);
  const std::vector<double> modes{1.0};
  const FreeChannel ch = random_free_channel(a, modes, 0, 0.5, 1);
  const DensityMatrix rho = random_density(5, 2, 2);
  CHECK((apply_channel(ch, rho).matrix() - rho.matrix()).norm() < 1e-10);
}

TEST_CASE("random_free_channel rejects bad inputs") {
  const Observable a = integer_observable(5);
  const std::vector<double> not_a_gap{0.5};
  CHECK_THROWS_AS(random_free_channel(a, not_a_gap, 2, 0.5, 1), ValidationError);
  const std::vector<double> modes{1.0};
  CHECK_THROWS_AS(random_free_channel(a, modes, 2, 1.5, 1), ValidationError);
}

TEST_CASE("ancilla reset channel") {
  const PureState zero = PureState::basis(2, 0);
  const FreeChannel ch = ancilla_reset_channel(3, zero);
  CHECK(ch.kraus.size() == 2);
  CHECK((ch.completeness() - Matrix::Identity(6, 6)).norm() < 1e-12);
  const DensityMatrix rho = random_density(3, 2, 8);
  const DensityMatrix in = tensor_product(rho, DensityMatrix::maximally_mixed(2));
  const DensityMatrix out = apply_channel(ch, in);
  const Matrix ref = oracle::kron(rho.matrix(), zero.projector());
  CHECK((out.matrix() - ref).norm() < 1e-12);
  const Observable big = tensor_product(Observable::diagonal(RealVector{{0.0, 1.0, 2.0}}),
                                        Observable(Matrix(Matrix::Identity(2, 2))));
  CHECK(verify_covariance(ch, big).passed);
}

TEST_CASE("monotonicity report on a qfi example") {
  const Observable a = integer_observable(7);
  const std::vector<double> modes{0.0, 1.0, -1.0};
  for (std::uint64_t s = 0; s < 10; ++s) {
    const FreeChannel ch = random_free_channel(a, modes, 3, 0.7, 100 + s);
    const DensityMatrix rho = random_density(5, 1 + static_cast<Eigen::Index>(s % 5), s);
    const MonotonicityReport r = monotonicity_report(MeasureId::qfi, rho, a, ch);
    CHECK(r.m2a);
    CHECK(r.m2b);
    double avg = 0.0;
    for (const auto& [p, v] : r.selective) avg += p * v;
    CHECK(avg == doctest::Approx(r.average_after));
  }
}

TEST_CASE("monotone_value scores mixed states by qfi/4 for the variance") {
  const Observable a = integer_observable(8);
  const DensityMatrix rho = random_density(5, 2, 1);
  CHECK(monotone_value(MeasureId::variance, rho, a) == doctest::Approx(qfi(rho, a) / 4.0));
}
