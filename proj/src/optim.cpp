#include "gstmar/optim.hpp"

#include <algorithm>
#include <cmath>

#include "gstmar/error.hpp"

namespace gstmar {

namespace {

// Central differences with a one-sided fallback next to the feasible
// boundary; *ok turns false only when both sides are infeasible.
Vector numeric_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                        double f_at_x, double step, bool* ok) {
    const int n = static_cast<int>(x.size());
    Vector g(n, 0.0);
    Vector probe = x;
    *ok = true;
    for (int i = 0; i < n; ++i) {
        const double h = step * std::max(1.0, std::fabs(x[i]));
        probe[i] = x[i] + h;
        const double fp = f(probe);
        probe[i] = x[i] - h;
        const double fm = f(probe);
        probe[i] = x[i];
        if (std::isfinite(fp) && std::isfinite(fm)) {
            g[i] = (fp - fm) / (2.0 * h);
        } else if (std::isfinite(fp)) {
            g[i] = (fp - f_at_x) / h;
        } else if (std::isfinite(fm)) {
            g[i] = (f_at_x - fm) / h;
        } else {
            *ok = false;
            g[i] = 0.0;
        }
    }
    return g;
}

} // namespace

BfgsResult bfgs_maximize(const std::function<double(const Vector&)>& objective,
                         Vector x0, const BfgsOptions& opts) {
    const int n = static_cast<int>(x0.size());
    BfgsResult result;
    result.x = std::move(x0);
    result.f = objective(result.x);
    if (!std::isfinite(result.f))
        throw DomainError("bfgs_maximize requires a finite objective at the start");

    Matrix h_inv = Matrix::identity(n);
    bool grad_ok = false;
    Vector g = numeric_gradient(objective, result.x, result.f, opts.diff_step, &grad_ok);

    int iter = 0;
    int flat_steps = 0;
    for (; iter < opts.max_iterations; ++iter) {
        double g_inf = 0.0;
        for (double v : g) g_inf = std::max(g_inf, std::fabs(v));
        result.grad_inf_norm = g_inf;
        if (g_inf < opts.grad_tol) {
            result.converged = true;
            break;
        }

        // Ascent direction d = H g, H approximating (-Hessian)^{-1}.
        Vector d = h_inv * g;
        double dg = 0.0;
        for (int i = 0; i < n; ++i) dg += d[i] * g[i];
        if (!(dg > 0.0)) {
            h_inv = Matrix::identity(n);
            d = g;
            dg = 0.0;
            for (int i = 0; i < n; ++i) dg += g[i] * g[i];
            if (!(dg > 0.0)) break;
        }

        double step = 1.0;
        Vector x_new(n);
        double f_new = -HUGE_VAL;
        bool accepted = false;
        for (int ls = 0; ls < 50; ++ls) {
            for (int i = 0; i < n; ++i) x_new[i] = result.x[i] + step * d[i];
            f_new = objective(x_new);
            if (std::isfinite(f_new) && f_new >= result.f + 1e-4 * step * dg) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        // Weakly identified directions form long, nearly flat ridges; a
        // run of negligible improvements is treated as convergence rather
        // than crawled to the iteration cap.
        if (f_new - result.f < 1e-9 * (1.0 + std::fabs(f_new))) {
            if (++flat_steps >= 10) {
                result.x = std::move(x_new);
                result.f = f_new;
                result.converged = true;
                ++iter;
                break;
            }
        } else {
            flat_steps = 0;
        }

        Vector g_new =
            numeric_gradient(objective, x_new, f_new, opts.diff_step, &grad_ok);
        if (!grad_ok) {
            result.x = std::move(x_new);
            result.f = f_new;
            break;
        }

        Vector s(n), y(n);
        double sy = 0.0;
        for (int i = 0; i < n; ++i) {
            s[i] = x_new[i] - result.x[i];
            y[i] = g[i] - g_new[i]; // ascent bookkeeping
            sy += s[i] * y[i];
        }
        if (sy > 1e-12) {
            const Vector hy = h_inv * y;
            double yhy = 0.0;
            for (int i = 0; i < n; ++i) yhy += y[i] * hy[i];
            const double c1 = (sy + yhy) / (sy * sy);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    h_inv(i, j) +=
                        c1 * s[i] * s[j] - (hy[i] * s[j] + s[i] * hy[j]) / sy;
        }

        result.x = std::move(x_new);
        result.f = f_new;
        g = std::move(g_new);
    }
    result.iterations = iter;
    return result;
}

} // namespace gstmar
