#ifndef GSTMAR_LINALG_HPP
#define GSTMAR_LINALG_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace gstmar {

using Vector = std::vector<double>;

// Small dense row-major matrix. Everything in this library is p x p with
// p <= ~12, so no effort is spent on blocking or BLAS.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    Matrix transpose() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    Vector data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& v);
Matrix operator-(const Matrix& a, const Matrix& b);

// Cholesky factor (lower triangular) of a symmetric positive definite matrix.
// The pivot tolerance is relative to the largest diagonal entry; failure
// throws DefinitenessError naming the offending pivot.
class Cholesky {
public:
    explicit Cholesky(const Matrix& a, double rel_tol = 1e-12);

    // Solves L y = b (forward substitution).
    Vector forward_solve(const Vector& b) const;
    // Solves A x = b via the factorization.
    Vector solve(const Vector& b) const;
    // log det(A) = 2 sum log L_ii.
    double log_det() const { return log_det_; }
    // (x)' A^{-1} (x) computed as |L^{-1} x|^2.
    double quad_form(const Vector& x) const;
    // Allocation-free variant for hot loops; scratch must hold dim() values.
    double quad_form_into(const double* x, double* scratch) const;

    const Matrix& lower() const { return l_; }
    std::size_t dim() const { return l_.rows(); }

private:
    Matrix l_;
    double log_det_ = 0.0;
};

// General dense solve with partial pivoting; used for the vec-equation
// system whose matrix is not symmetric.
Vector gauss_solve(Matrix a, Vector b);

// Roots of the monic polynomial z^n + c[0] z^{n-1} + ... + c[n-1] by the
// Durand-Kerner iteration. Adequate for companion polynomials of order <= 12.
std::vector<std::complex<double>> poly_roots_monic(const Vector& coeffs);

} // namespace gstmar

#endif
