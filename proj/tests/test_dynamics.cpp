#include <doctest.h>

#include "macrocoh/dynamics.hpp"
#include "macrocoh/macroscopicity.hpp"
#include "oracles.hpp"

using namespace macrocoh;

TEST_CASE("generator validation") {
  const Matrix h = Matrix::Identity(2, 2);
  Matrix nh = Matrix::Zero(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(DoubleCommutatorGenerator({{h, -1.0}}), ValidationError);
  CHECK_THROWS_AS(DoubleCommutatorGenerator({{nh, 1.0}}), ValidationError);
  CHECK_THROWS_AS(DoubleCommutatorGenerator({{h, 1.0}, {Matrix::Identity(3, 3), 1.0}}), ValidationError);
  const FockSpace fock(1, 6);
  CHECK_THROWS_AS(quadrature_generator(-0.1, 0.2, fock), ValidationError);
}

TEST_CASE("generator is traceless and Hermiticity preserving") {
  const FockSpace fock(1, 10);
  const auto gen = quadrature_generator(0.3, 0.1, fock);
  const DensityMatrix rho = DensityMatrix::from_pure(standard_state(StateRecipe::cat({1.0, 0.0}), fock));
  const Matrix l = gen.apply(rho.matrix());
  CHECK(std::abs(l.trace()) < 1e-12);
  CHECK(hermiticity_residual(l) < 1e-12);
  const Matrix x = fock.position(0), p = fock.momentum(0);
  const Matrix ref = -0.3 * oracle::commutator(x, oracle::commutator(x, rho.matrix())) -
                     0.1 * oracle::commutator(p, oracle::commutator(p, rho.matrix()));
  CHECK((l - ref).norm() < 1e-12);
}

TEST_CASE("purity rate equals the closed-form phase-space measure") {
  const FockSpace fock(1, 40);
  const auto iso = isotropic_generator(fock);
  for (const auto& recipe : {StateRecipe::number_state(0), StateRecipe::number_state(1),
                             StateRecipe::coherent({1.5, 0.0}), StateRecipe::cat({2.0, 0.0}),
                             StateRecipe::squeezed({0.5, 0.0})}) {
    const DensityMatrix rho = DensityMatrix::from_pure(standard_state(recipe, fock));
    CHECK(std::abs(purity_rate(rho, iso) - nlj_closed_form(rho, fock)) <= 1e-8);
  }
}

TEST_CASE("evolve: purity decreases and trajectories are valid states") {
  const FockSpace fock(1, 30);
  const DensityMatrix cat = DensityMatrix::from_pure(standard_state(StateRecipe::cat({1.5, 0.0}), fock));
  const auto traj = evolve(cat, isotropic_generator(fock), 0.5, 50);
  REQUIRE(traj.size() == 51);
  CHECK(traj.front().time == 0.0);
  CHECK(traj.back().time == doctest::Approx(0.5));
  for (std::size_t k = 1; k < traj.size(); ++k) {
    CHECK(traj[k].purity <= traj[k - 1].purity + 1e-12);
    CHECK(std::abs(traj[k].state.matrix().trace() - 1.0) < 1e-12);
  }
}

TEST_CASE("evolve: finite-difference purity slope matches -2 x purity rate") {
  const FockSpace fock(1, 40);
  const auto iso = isotropic_generator(fock);
  const DensityMatrix sq = DensityMatrix::from_pure(standard_state(StateRecipe::squeezed({0.5, 0.0}), fock));
  const double h = 1e-4;
  const auto traj = evolve(sq, iso, 2 * h, 2);
  const double slope = (-3.0 * traj[0].purity + 4.0 * traj[1].purity - traj[2].purity) / (2 * h);
  CHECK(std::abs(slope + 2.0 * purity_rate(sq, iso)) <= 1e-5);
}

TEST_CASE("evolve: dephasing in the number basis kills off-diagonal terms") {
  Matrix n = Matrix::Zero(2, 2);
  n(1, 1) = 1.0;
  const DoubleCommutatorGenerator gen({{n, 1.0}});
  const DensityMatrix plus = DensityMatrix::from_pure(PureState::normalized(Vector::Ones(2)));
  const auto traj = evolve(plus, gen, 1.0, 200);
  CHECK(std::abs(traj.back().state.matrix()(0, 1)) == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-8));
}

TEST_CASE("evolve: an unstable step raises IntegrationError") {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  const DoubleCommutatorGenerator gen({{x, 50.0}});
  const DensityMatrix zero = DensityMatrix::from_pure(PureState::basis(2, 0));
  CHECK_THROWS_AS(evolve(zero, gen, 1.0, 2), IntegrationError);
  CHECK_THROWS_AS(evolve(zero, gen, 1.0, 0), ValidationError);
}

TEST_CASE("evolve: pure states at large truncation stay positive to rounding after clipping") {
  const FockSpace fock(1, 40);
  const DensityMatrix coh = DensityMatrix::from_pure(standard_state(StateRecipe::coherent({1.0, 0.5}), fock));
  const auto traj = evolve(coh, isotropic_generator(fock), 0.3, 30);
  for (const auto& p : traj) CHECK(p.state.eigenvalues().minCoeff() >= -1e-14);  // unrepaired, step 1 reaches -1e-10
  CHECK(traj.back().purity < 1.0);
}
