#include "macrocoh/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace macrocoh {

namespace {

using nlohmann::json;

// Rows of a "re"/"im" entry; a flat list of numbers is a column.
std::vector<std::vector<double>> rows_of(const json& j, const char* key) {
  if (!j.is_array()) throw ValidationError({std::string("\"") + key + "\" must be an array"});
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) {
    if (row.is_number()) {
      rows.push_back({row.get<double>()});
    } else if (row.is_array()) {
      std::vector<double> r;
      for (const auto& x : row) {
        if (!x.is_number()) throw ValidationError({std::string("\"") + key + "\" holds a non-number"});
        r.push_back(x.get<double>());
      }
      rows.push_back(std::move(r));
    } else {
      throw ValidationError({std::string("\"") + key + "\" holds a non-number"});
    }
  }
  return rows;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError({"cannot open file"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Prefixes every violation raised by `f` with the file name.
template <class F>
auto with_path(const std::filesystem::path& path, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    std::vector<std::string> v;
    for (const auto& s : e.violations()) v.push_back(path.string() + ": " + s);
    throw ValidationError(std::move(v));
  }
}

}  // namespace

Matrix parse_matrix_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string("JSON parse error: ") + e.what()});
  }
  if (!j.is_object() || !j.contains("re")) throw ValidationError({"matrix JSON needs an object with \"re\""});
  const auto re = rows_of(j["re"], "re");
  const auto im = j.contains("im") ? rows_of(j["im"], "im") : std::vector<std::vector<double>>{};
  const auto rows = static_cast<Eigen::Index>(re.size());
  if (rows == 0) throw ValidationError({"matrix is empty"});
  const auto cols = static_cast<Eigen::Index>(re.front().size());
  std::vector<std::string> problems;
  for (const auto& r : re)
    if (static_cast<Eigen::Index>(r.size()) != cols) problems.emplace_back("\"re\" rows have different lengths");
  if (!im.empty()) {
    if (im.size() != re.size()) problems.emplace_back("\"im\" and \"re\" have different row counts");
    for (const auto& r : im)
      if (static_cast<Eigen::Index>(r.size()) != cols) problems.emplace_back("\"im\" rows have different lengths");
  }
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() != rows)
      problems.push_back("\"dim\" does not match the number of rows " + std::to_string(rows));
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));

  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto iu = static_cast<std::size_t>(i);
      const auto ku = static_cast<std::size_t>(k);
      m(i, k) = cplx(re[iu][ku], im.empty() ? 0.0 : im[iu][ku]);
    }
  require_finite(m, "matrix");
  return m;
}

std::string matrix_to_json(const Matrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    json c = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      r.push_back(m(i, k).real());
      c.push_back(m(i, k).imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(c));
  }
  json out;
  out["dim"] = m.rows();
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out.dump();
}

Matrix load_matrix(const std::filesystem::path& path) {
  return with_path(path, [&] { return parse_matrix_json(read_file(path)); });
}

void save_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw ValidationError({"cannot write " + path.string()});
  out << matrix_to_json(m) << '\n';
}

DensityMatrix load_state(const std::filesystem::path& path) {
  const Matrix m = load_matrix(path);
  return with_path(path, [&] {
    if (m.cols() == 1) return DensityMatrix::from_pure(PureState(m.col(0)));
    return validate_density(m);
  });
}

Observable load_observable(const std::filesystem::path& path) {
  const Matrix m = load_matrix(path);
  return with_path(path, [&] { return Observable(m); });
}

}  // namespace macrocoh
