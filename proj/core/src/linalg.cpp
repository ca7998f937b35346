#include "macrocoh/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace macrocoh {

namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::ostringstream os;
  os << "validation failed";
  for (const auto& s : v) os << "; " << s;
  return os.str();
}

void fix_phase(Matrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double a = std::abs(vectors(r, c));
      if (a > best_abs + 1e-12) {
        best_abs = a;
        best = r;
      }
    }
    if (best_abs > 0.0) {
      const cplx phase = std::conj(vectors(best, c)) / best_abs;
      vectors.col(c) *= phase;
      vectors(best, c) = cplx(std::abs(vectors(best, c)), 0.0);
    }
  }
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

Matrix Eigensystem::reconstruct() const {
  return vectors * values.cast<cplx>().asDiagonal() * vectors.adjoint();
}

double hermiticity_residual(const Matrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  if (h.size() == 0) return 0.0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

bool is_diagonal(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != cplx(0.0, 0.0)) return false;
  return true;
}

Eigensystem spectral_decompose(const Matrix& h, const Tolerances& tol) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    std::ostringstream os;
    os << "matrix must be square and non-empty, got " << h.rows() << "x" << h.cols();
    throw ValidationError({os.str()});
  }
  require_finite(h, "matrix");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double herm = hermiticity_residual(h);
  if (herm > tol.hermiticity * scale) {
    std::ostringstream os;
    os << "non-Hermitian: max |H - H^dagger| = " << herm << " exceeds " << tol.hermiticity * scale;
    throw ValidationError({os.str()});
  }

  const Eigen::Index n = h.rows();
  Eigensystem es;
  if (is_diagonal(h)) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return h(a, a).real() > h(b, b).real();
    });
    es.values.resize(n);
    es.vectors = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      es.values(k) = h(order[k], order[k]).real();
      es.vectors(order[k], k) = 1.0;
    }
    return es;
  }

  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(h));
  if (solver.info() != Eigen::Success) throw Error("eigensolver did not converge");
  es.values = solver.eigenvalues().reverse();
  es.vectors = solver.eigenvectors().rowwise().reverse();
  fix_phase(es.vectors);
  return es;
}

Matrix hermitian_function(const Eigensystem& es, const std::function<double(double)>& f) {
  RealVector fv(es.values.size());
  for (Eigen::Index k = 0; k < fv.size(); ++k) fv(k) = f(es.values(k));
  return es.vectors * fv.cast<cplx>().asDiagonal() * es.vectors.adjoint();
}

Matrix psd_sqrt(const Matrix& h, double clamp) {
  Tolerances tol;
  tol.hermiticity = std::max(tol.hermiticity, clamp);
  const Eigensystem es = spectral_decompose(h, tol);
  if (es.values.size() > 0 && es.values.minCoeff() < -clamp) {
    std::ostringstream os;
    os << "negative eigenvalue " << es.values.minCoeff() << " below -" << clamp;
    throw ValidationError({os.str()});
  }
  return hermitian_function(es, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

Matrix unitary_exp(const Matrix& h, double t) {
  const Eigensystem es = spectral_decompose(h);
  Vector phases(es.values.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(-kI * t * es.values(k));
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

double trace_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

Matrix tensor_product(const Matrix& x, const Matrix& y, std::size_t dimension_cap) {
  const auto rows = static_cast<std::size_t>(x.rows()) * static_cast<std::size_t>(y.rows());
  const auto cols = static_cast<std::size_t>(x.cols()) * static_cast<std::size_t>(y.cols());
  if (rows > dimension_cap || cols > dimension_cap) {
    std::ostringstream os;
    os << "tensor product dimension " << rows << "x" << cols << " exceeds cap " << dimension_cap;
    throw ResourceError(os.str());
  }
  Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

Vector tensor_product(const Vector& x, const Vector& y, std::size_t dimension_cap) {
  const auto n = static_cast<std::size_t>(x.size()) * static_cast<std::size_t>(y.size());
  if (n > dimension_cap) {
    std::ostringstream os;
    os << "tensor product dimension " << n << " exceeds cap " << dimension_cap;
    throw ResourceError(os.str());
  }
  Vector out(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x(i) * y;
  return out;
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

void require_finite(const Matrix& m, const std::string& what) {
  if (!m.allFinite()) throw ValidationError({what + " contains NaN or infinite entries"});
}

}  // namespace macrocoh
