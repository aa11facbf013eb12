#ifndef GSTMAR_OPTIM_HPP
#define GSTMAR_OPTIM_HPP

#include <functional>

#include "gstmar/linalg.hpp"

namespace gstmar {

struct BfgsOptions {
    int max_iterations = 2000;
    // Absolute gradient tolerance. Weakly identified coordinates (huge
    // dof) produce long nearly flat ridges whose gradient decays slowly;
    // an |f|-scaled tolerance would abandon them early.
    double grad_tol = 2e-5;
    // Central-difference step scale, h_i = step * max(1, |x_i|).
    double diff_step = 6e-6;
};

struct BfgsResult {
    Vector x;
    double f = -HUGE_VAL;
    bool converged = false;
    int iterations = 0;
    double grad_inf_norm = HUGE_VAL;
};

// Variable-metric (BFGS) ascent with central-difference gradients. The
// objective may return -inf outside its feasible set; such points are
// rejected by the backtracking line search.
BfgsResult bfgs_maximize(const std::function<double(const Vector&)>& objective,
                         Vector x0, const BfgsOptions& opts = {});

} // namespace gstmar

#endif
