#include "bievolve/linops.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bievolve::linops {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("matrix dimension must be in [1, " + std::to_string(kMaxDim) +
                                "], got " + std::to_string(dim));
}

void check_same_dim(int a, int b) {
  if (a != b)
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " +
                                std::to_string(b));
}

using EigenMat =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

EigenMat to_eigen(const ComplexMatrix& m) {
  return Eigen::Map<const EigenMat>(m.entries().data(), m.dim(), m.dim());
}

}  // namespace

ComplexMatrix::ComplexMatrix(int dim) : dim_(dim) {
  check_dim(dim);
  entries_.assign(static_cast<size_t>(dim) * dim, Complex(0.0, 0.0));
}

ComplexMatrix::ComplexMatrix(int dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  check_dim(dim);
  if (entries_.size() != static_cast<size_t>(dim) * dim)
    throw std::invalid_argument("entry count does not match dimension");
}

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  check_same_dim(dim_, rhs.dim_);
  for (size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  check_same_dim(dim_, rhs.dim_);
  for (size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& e : entries_) s += std::norm(e);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e));
  return m;
}

double ComplexMatrix::hermiticity_defect() const {
  double d = 0.0;
  for (int r = 0; r < dim_; ++r)
    for (int c = r; c < dim_; ++c)
      d = std::max(d, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return d;
}

bool ComplexMatrix::is_finite() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Complex& e) {
    return std::isfinite(e.real()) && std::isfinite(e.imag());
  });
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  check_same_dim(lhs.dim(), rhs.dim());
  const int d = lhs.dim();
  ComplexMatrix out(d);
  for (int r = 0; r < d; ++r) {
    for (int k = 0; k < d; ++k) {
      const Complex l = lhs(r, k);
      if (l == Complex(0.0, 0.0)) continue;
      for (int c = 0; c < d; ++c) out(r, c) += l * rhs(k, c);
    }
  }
  return out;
}

ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
  StateVector out = *this;
  for (auto& a : out.amplitudes) a /= n;
  return out;
}

bool StateVector::is_finite() const {
  return std::all_of(amplitudes.begin(), amplitudes.end(), [](const Complex& a) {
    return std::isfinite(a.real()) && std::isfinite(a.imag());
  });
}

StateVector operator+(StateVector lhs, const StateVector& rhs) {
  check_same_dim(lhs.dim(), rhs.dim());
  for (int i = 0; i < lhs.dim(); ++i) lhs[i] += rhs[i];
  return lhs;
}

StateVector operator-(StateVector lhs, const StateVector& rhs) {
  check_same_dim(lhs.dim(), rhs.dim());
  for (int i = 0; i < lhs.dim(); ++i) lhs[i] -= rhs[i];
  return lhs;
}

StateVector operator*(Complex s, StateVector v) {
  for (auto& a : v.amplitudes) a *= s;
  return v;
}

StateVector operator*(const ComplexMatrix& m, const StateVector& v) {
  check_same_dim(m.dim(), v.dim());
  StateVector out(v.dim());
  for (int r = 0; r < m.dim(); ++r) {
    Complex s = 0.0;
    for (int c = 0; c < m.dim(); ++c) s += m(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

Complex inner(const StateVector& bra, const StateVector& ket) {
  check_same_dim(bra.dim(), ket.dim());
  Complex s = 0.0;
  for (int i = 0; i < bra.dim(); ++i) s += std::conj(bra[i]) * ket[i];
  return s;
}

double SpectralDecomposition::max_abs_eigenvalue() const {
  double m = 0.0;
  for (double ev : eigenvalues) m = std::max(m, std::abs(ev));
  return m;
}

ComplexMatrix mat_exp(const ComplexMatrix& a, Complex scale) {
  if (!a.is_finite() || !(std::isfinite(scale.real()) && std::isfinite(scale.imag())))
    throw std::invalid_argument("mat_exp: non-finite input");
  const int d = a.dim();
  ComplexMatrix b = scale * a;

  // Scale so ||B/2^s||_max is small, exponentiate by Taylor, square back.
  const double norm = b.max_abs() * d;  // cheap upper bound on the 1-norm
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  b *= Complex(std::ldexp(1.0, -squarings), 0.0);

  ComplexMatrix sum = ComplexMatrix::identity(d);
  ComplexMatrix term = ComplexMatrix::identity(d);
  for (int k = 1; k <= 64; ++k) {
    term = term * b;
    term *= Complex(1.0 / k, 0.0);
    sum += term;
    if (term.max_abs() <= 1e-18 * std::max(1.0, sum.max_abs())) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

ComplexMatrix mat_exp_hermitian(const ComplexMatrix& a, Complex scale) {
  const SpectralDecomposition dec = hermitian_eigendecomposition(a);
  ComplexMatrix out(a.dim());
  for (size_t j = 0; j < dec.eigenvalues.size(); ++j) {
    const Complex w = std::exp(scale * dec.eigenvalues[j]);
    ComplexMatrix p = dec.projectors[j];
    p *= w;
    out += p;
  }
  return out;
}

SpectralDecomposition hermitian_eigendecomposition(const ComplexMatrix& a, double degeneracy_tol) {
  if (!a.is_finite()) throw std::invalid_argument("hermitian_eigendecomposition: non-finite input");
  const double defect_tol = 1e-12 * std::max(1.0, a.max_abs());
  if (a.hermiticity_defect() > defect_tol)
    throw std::invalid_argument("hermitian_eigendecomposition: input is not Hermitian");

  const int d = a.dim();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(a));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eigendecomposition: eigensolver failed");

  const auto& lambda = solver.eigenvalues();   // ascending
  const auto& vectors = solver.eigenvectors(); // columns

  double max_abs_ev = 0.0;
  for (int i = 0; i < d; ++i) max_abs_ev = std::max(max_abs_ev, std::abs(lambda[i]));
  const double tol = degeneracy_tol >= 0.0 ? degeneracy_tol : 1e-9 * max_abs_ev;

  SpectralDecomposition dec;
  int start = 0;
  while (start < d) {
    int stop = start + 1;
    while (stop < d && lambda[stop] - lambda[stop - 1] <= tol) ++stop;

    double mean = 0.0;
    ComplexMatrix proj(d);
    for (int i = start; i < stop; ++i) {
      mean += lambda[i];
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) proj(r, c) += vectors(r, i) * std::conj(vectors(c, i));
    }
    dec.eigenvalues.push_back(mean / (stop - start));
    dec.multiplicities.push_back(stop - start);
    dec.projectors.push_back(std::move(proj));
    start = stop;
  }
  return dec;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

ComplexMatrix kernel_projector(const SpectralDecomposition& dec, double zero_tol) {
  const double tol = zero_tol >= 0.0 ? zero_tol : 1e-9 * dec.max_abs_eigenvalue();
  ComplexMatrix out(dec.dim());
  for (size_t j = 0; j < dec.eigenvalues.size(); ++j)
    if (std::abs(dec.eigenvalues[j]) <= tol) out += dec.projectors[j];
  return out;
}

}  // namespace bievolve::linops
