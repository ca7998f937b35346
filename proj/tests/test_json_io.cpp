#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "macrocoh/json_io.hpp"
#include "macrocoh/random.hpp"

using namespace macrocoh;

TEST_CASE("matrix JSON round trip") {
  Rng rng(1);
  const Matrix m = gaussian_matrix(3, 2, rng);
  CHECK((parse_matrix_json(matrix_to_json(m)) - m).norm() < 1e-15);
}

TEST_CASE("parse_matrix_json accepts columns and a missing imaginary part") {
  const Matrix v = parse_matrix_json(R"({"re": [0.6, 0.8]})");
  CHECK(v.rows() == 2);
  CHECK(v.cols() == 1);
  CHECK(v(1, 0) == cplx(0.8, 0.0));
}

TEST_CASE("parse_matrix_json diagnostics") {
  CHECK_THROWS_AS(parse_matrix_json("{not json"), ValidationError);
  CHECK_THROWS_AS(parse_matrix_json(R"({"im": [[1]]})"), ValidationError);
  CHECK_THROWS_AS(parse_matrix_json(R"({"re": [[1, 0], [0]]})"), ValidationError);
  CHECK_THROWS_AS(parse_matrix_json(R"({"dim": 3, "re": [[1, 0], [0, 1]]})"), ValidationError);
  CHECK_THROWS_AS(parse_matrix_json(R"({"re": [["a"]]})"), ValidationError);
  try {
    parse_matrix_json("{not json");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("JSON parse error") != std::string::npos);
  }
}

TEST_CASE("load_state accepts vectors and density matrices") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto vec = dir / "macrocoh_test_vec.json";
  const auto rho = dir / "macrocoh_test_rho.json";
  const auto bad = dir / "macrocoh_test_bad.json";
  save_matrix(vec, Matrix(Vector{{0.6, cplx(0.0, 0.8)}}));
  save_matrix(rho, Matrix(Matrix::Identity(3, 3) / 3.0));
  save_matrix(bad, Matrix(Matrix::Identity(2, 2)));
  CHECK(load_state(vec).purity() == doctest::Approx(1.0));
  CHECK(load_state(rho).dim() == 3);
  try {
    load_state(bad);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.violations().front().find(bad.string()) != std::string::npos);
  }
  CHECK_THROWS_AS(load_state(dir / "macrocoh_missing.json"), ValidationError);
  CHECK(load_observable(rho).dim() == 3);
  std::filesystem::remove(vec);
  std::filesystem::remove(rho);
  std::filesystem::remove(bad);
}
