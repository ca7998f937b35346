#include <doctest.h>

#include "macrocoh/modes.hpp"
#include "macrocoh/random.hpp"
#include "oracles.hpp"

using namespace macrocoh;

namespace {

Observable rotated_diagonal(const RealVector& d, std::uint64_t seed) {
  Rng rng(seed);
  const Matrix u = random_unitary(d.size(), rng);
  return Observable(hermitian_part(u * d.cast<cplx>().asDiagonal() * u.adjoint()));
}

}  // namespace

TEST_CASE("gap_set of an evenly spaced spectrum") {
  const Observable a = Observable::diagonal(RealVector{{0.0, 1.0, 2.0, 3.0}});
  const GapSet g = gap_set(a);
  REQUIRE(g.size() == 7);
  for (int k = 0; k < 7; ++k) CHECK(g.gaps[static_cast<std::size_t>(k)] == doctest::Approx(k - 3.0));
  CHECK(g.gaps[g.zero_index()] == 0.0);
  CHECK(g.levels == std::vector<double>{3.0, 2.0, 1.0, 0.0});
  CHECK(g.label(0, 3) == static_cast<int>(g.index_of(3.0)));
  CHECK(g.index_pairs(g.index_of(1.0)).size() == 3);
  CHECK_THROWS_AS(g.index_of(0.5), ValidationError);
}

TEST_CASE("gap_set groups degenerate levels") {
  const Observable a = Observable::diagonal(RealVector{{1.0, 1.0 + 1e-12, -1.0}});
  const GapSet g = gap_set(a);
  CHECK(g.levels.size() == 2);
  CHECK(g.size() == 3);
}

TEST_CASE("gap_set raises on spectra too dense to resolve") {
  RealVector d(40);
  for (int k = 0; k < 40; ++k) d(k) = k * 1e-10;
  CHECK_THROWS_AS(gap_set(Observable::diagonal(d), 2e-10), AmbiguityError);
  CHECK_THROWS_AS(gap_set(Observable::diagonal(d), -1.0), ValidationError);
}

TEST_CASE("mode components sum to rho and match the diagonal oracle") {
  const RealVector d{{0.0, 1.0, 1.0, 2.5, 4.0}};
  const Observable a = Observable::diagonal(d);
  const DensityMatrix rho = random_density(5, 3, 8);
  const auto comps = mode_decompose(rho, a);
  Matrix sum = Matrix::Zero(5, 5);
  for (const auto& c : comps) {
    sum += to_computational(c, a);
    CHECK(delta_coherence_norm(rho, a, c.delta) ==
          doctest::Approx(oracle::delta_norm_diag(rho.matrix(), d, c.delta)).epsilon(1e-10));
  }
  CHECK((sum - rho.matrix()).norm() < 1e-12);
  for (std::size_t k = 1; k < comps.size(); ++k) CHECK(comps[k - 1].delta < comps[k].delta);
}

TEST_CASE("mode component transforms as exp(-i delta x) under phase conjugation") {
  const Observable a = rotated_diagonal(RealVector{{0.0, 1.0, 3.0, 3.0}}, 12);
  const DensityMatrix rho = random_density(4, 4, 5);
  const GapSet g = gap_set(a);
  const double x = 0.81;
  const DensityMatrix moved = phase_conjugate(rho, a, x);
  for (double delta : g.gaps) {
    const Matrix before = mode_component(rho.matrix(), a, g, delta).block;
    const Matrix after = mode_component(moved.matrix(), a, g, delta).block;
    CHECK((after - std::exp(-kI * delta * x) * before).norm() < 1e-10);
  }
}

TEST_CASE("delta norm is invariant under phase conjugation and symmetric in delta") {
  const Observable a = rotated_diagonal(RealVector{{-1.0, 0.0, 2.0}}, 3);
  const DensityMatrix rho = random_density(3, 2, 6);
  for (double delta : gap_set(a).gaps) {
    const double n = delta_coherence_norm(rho, a, delta);
    CHECK(delta_coherence_norm(phase_conjugate(rho, a, 1.3), a, delta) == doctest::Approx(n).epsilon(1e-10));
    CHECK(delta_coherence_norm(rho, a, -delta) == doctest::Approx(n).epsilon(1e-10));
  }
}

TEST_CASE("pure_delta_coherence_norm agrees with the SVD route") {
  const RealVector d{{0.0, 1.0, 2.0, 4.0}};
  const Observable a = rotated_diagonal(d, 44);
  const GapSet g = gap_set(a);
  const PureState psi = random_pure_state(4, 17);
  const DensityMatrix rho = DensityMatrix::from_pure(psi);
  // Gap 1 chains three levels; each level still has one partner per signed gap.
  for (double delta : {0.0, 1.0, 3.0, 4.0, -2.0})
    CHECK(pure_delta_coherence_norm(psi, a, g, delta) == doctest::Approx(delta_coherence_norm(rho, a, delta)));
  CHECK_THROWS_AS(pure_delta_coherence_norm(psi, a, g, 0.5), ValidationError);
}

TEST_CASE("dephase zeroes all coherences between distinct levels") {
  const RealVector d{{0.0, 0.0, 1.0}};
  const DensityMatrix rho = random_density(3, 3, 2);
  const Observable a = Observable::diagonal(d);
  const Matrix dep = dephase(rho.matrix(), a, gap_set(a));
  CHECK((dep - oracle::dephase_diag(rho.matrix(), d)).norm() < 1e-12);
}
