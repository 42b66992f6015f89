#pragma once

// Dense complex linear algebra for small Hilbert spaces (dim <= kMaxDim).
// Everything is value-typed and row-major; no aliasing surprises, no shared
// state. Matrix functions needed elsewhere in the library:
//   mat_exp                      scaling-and-squaring Taylor core
//   mat_exp_hermitian            independent spectral route, cross-check
//   hermitian_eigendecomposition distinct eigenvalues + spectral projectors
//   commutator, kernel_projector

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace bievolve::linops {

using Complex = std::complex<double>;

inline constexpr int kMaxDim = 64;

class ComplexMatrix {
 public:
  ComplexMatrix() : dim_(0) {}
  explicit ComplexMatrix(int dim);
  ComplexMatrix(int dim, std::vector<Complex> entries);

  static ComplexMatrix identity(int dim);
  static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }

  int dim() const { return dim_; }
  Complex& operator()(int r, int c) { return entries_[static_cast<size_t>(r) * dim_ + c]; }
  const Complex& operator()(int r, int c) const {
    return entries_[static_cast<size_t>(r) * dim_ + c];
  }
  std::span<const Complex> entries() const { return entries_; }

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex s);

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  // max_ij |a_ij - conj(a_ji)|
  double hermiticity_defect() const;
  bool is_finite() const;

 private:
  int dim_;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex s, ComplexMatrix m);

struct StateVector {
  std::vector<Complex> amplitudes;

  StateVector() = default;
  explicit StateVector(int dim) : amplitudes(static_cast<size_t>(dim)) {}
  StateVector(std::initializer_list<Complex> init) : amplitudes(init) {}

  int dim() const { return static_cast<int>(amplitudes.size()); }
  Complex& operator[](int i) { return amplitudes[static_cast<size_t>(i)]; }
  const Complex& operator[](int i) const { return amplitudes[static_cast<size_t>(i)]; }

  double norm() const;
  StateVector normalized() const;
  bool is_finite() const;
};

StateVector operator+(StateVector lhs, const StateVector& rhs);
StateVector operator-(StateVector lhs, const StateVector& rhs);
StateVector operator*(Complex s, StateVector v);
StateVector operator*(const ComplexMatrix& m, const StateVector& v);
Complex inner(const StateVector& bra, const StateVector& ket);  // <bra|ket>

// Distinct eigenvalues in ascending order with orthogonal spectral projectors.
// multiplicities[j] = rank of projectors[j]; sums to dim.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<int> multiplicities;
  std::vector<ComplexMatrix> projectors;

  int dim() const { return projectors.empty() ? 0 : projectors.front().dim(); }
  double max_abs_eigenvalue() const;
};

// exp(scale * a) for a general square matrix. Scaling-and-squaring with a
// Taylor core run to convergence; accurate to ~1e-14 for the operator norms
// used here (||scale*a|| up to a few hundred).
ComplexMatrix mat_exp(const ComplexMatrix& a, Complex scale = Complex(1.0, 0.0));

// exp(scale * a) for Hermitian a via the spectral theorem. Independent of
// mat_exp; used as a cross-check and wherever a function of a Hermitian
// operator is needed in log/large-argument form.
ComplexMatrix mat_exp_hermitian(const ComplexMatrix& a, Complex scale = Complex(1.0, 0.0));

// Eigendecomposition of a Hermitian matrix. Eigenvalues within
// degeneracy_tol of each other are merged into one projector; pass a
// negative tolerance to use the default 1e-9 * max|eigenvalue|.
SpectralDecomposition hermitian_eigendecomposition(const ComplexMatrix& a,
                                                   double degeneracy_tol = -1.0);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

// Projector onto the span of eigenspaces with |eigenvalue| <= zero_tol
// (negative zero_tol -> 1e-9 * max|eigenvalue|). Zero matrix if none.
ComplexMatrix kernel_projector(const SpectralDecomposition& dec, double zero_tol = -1.0);

}  // namespace bievolve::linops
