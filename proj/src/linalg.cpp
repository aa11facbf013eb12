#include "gstmar/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gstmar/error.hpp"

namespace gstmar {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j)
            out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(j, i) = (*this)(i, j);
    return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(i, j) += aik * b(k, j);
        }
    return out;
}

Vector operator*(const Matrix& a, const Vector& v) {
    Vector out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(i, j) = a(i, j) - b(i, j);
    return out;
}

Cholesky::Cholesky(const Matrix& a, double rel_tol) {
    const std::size_t n = a.rows();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
    const double tol = rel_tol * std::max(max_diag, 1e-300);

    l_ = Matrix(n, n);
    log_det_ = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
        if (!(d > tol)) {
            std::ostringstream msg;
            msg << "matrix not positive definite: Cholesky pivot " << j
                << " = " << d << " (tolerance " << tol << ")";
            throw DefinitenessError(msg.str(), static_cast<int>(j), d);
        }
        const double ljj = std::sqrt(d);
        l_(j, j) = ljj;
        log_det_ += 2.0 * std::log(ljj);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
            l_(i, j) = s / ljj;
        }
    }
}

Vector Cholesky::forward_solve(const Vector& b) const {
    const std::size_t n = dim();
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l_(i, k) * y[k];
        y[i] = s / l_(i, i);
    }
    return y;
}

Vector Cholesky::solve(const Vector& b) const {
    const std::size_t n = dim();
    Vector y = forward_solve(b);
    // back substitution with L'
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l_(k, ii) * y[k];
        y[ii] = s / l_(ii, ii);
    }
    return y;
}

double Cholesky::quad_form(const Vector& x) const {
    Vector y = forward_solve(x);
    double q = 0.0;
    for (double v : y) q += v * v;
    return q;
}

double Cholesky::quad_form_into(const double* x, double* scratch) const {
    const std::size_t n = dim();
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (std::size_t k = 0; k < i; ++k) s -= l_(i, k) * scratch[k];
        const double yi = s / l_(i, i);
        scratch[i] = yi;
        q += yi * yi;
    }
    return q;
}

Vector gauss_solve(Matrix a, Vector b) {
    const std::size_t n = a.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::fabs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::fabs(a(r, col));
            if (v > best) { best = v; piv = r; }
        }
        if (best == 0.0) {
            std::ostringstream msg;
            msg << "singular system: zero pivot in column " << col;
            throw DefinitenessError(msg.str(), static_cast<int>(col), 0.0);
        }
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
            std::swap(b[piv], b[col]);
        }
        const double inv = 1.0 / a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) * inv;
            if (f == 0.0) continue;
            a(r, col) = 0.0;
            for (std::size_t c = col + 1; c < n; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
        }
    }
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t c = ii + 1; c < n; ++c) s -= a(ii, c) * x[c];
        x[ii] = s / a(ii, ii);
    }
    return x;
}

std::vector<std::complex<double>> poly_roots_monic(const Vector& coeffs) {
    using cplx = std::complex<double>;
    const std::size_t n = coeffs.size();
    if (n == 0) return {};
    if (n == 1) return {cplx(-coeffs[0], 0.0)};

    auto eval = [&](cplx z) {
        cplx v(1.0, 0.0);
        for (double c : coeffs) v = v * z + c;
        return v;
    };

    // Standard (0.4 + 0.9i)^k spread, scaled by a root magnitude bound.
    double bound = 0.0;
    for (double c : coeffs) bound = std::max(bound, std::fabs(c));
    bound = 1.0 + bound;
    std::vector<cplx> r(n);
    cplx seed(0.4, 0.9), acc(1.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        acc *= seed;
        r[k] = acc * (0.5 * bound);
    }

    for (int iter = 0; iter < 500; ++iter) {
        double max_step = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx denom(1.0, 0.0);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= (r[i] - r[j]);
            if (denom == cplx(0.0, 0.0)) {
                r[i] += cplx(1e-8, 1e-8);
                continue;
            }
            const cplx delta = eval(r[i]) / denom;
            r[i] -= delta;
            max_step = std::max(max_step, std::abs(delta));
        }
        if (max_step < 1e-13 * bound) break;
    }
    return r;
}

} // namespace gstmar
