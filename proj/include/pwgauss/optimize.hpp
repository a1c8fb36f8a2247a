#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pwgauss {

struct OptimizerConfig {
    double grad_tol = 1e-7;
    std::size_t max_iters = 500;
    std::size_t restarts = 3;

    void validate() const;
};

struct MinimizeResult {
    std::vector<double> x;
    double fx = 0.0;
    double grad_max_norm = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

// Objective over an unconstrained vector. Returning +inf or NaN marks a
// point as infeasible; the line search backs away from it.
using Objective = std::function<double(std::span<const double>)>;

// Central-difference gradient with step h_i = rel_step * max(1, |x_i|).
std::vector<double> numerical_gradient(const Objective& f, std::span<const double> x, double rel_step = 1e-5);

// BFGS on the inverse Hessian with Armijo backtracking. Gradients come from
// numerical_gradient. The returned point never has a larger objective than
// x0. converged means max|grad| <= cfg.grad_tol at the returned point.
MinimizeResult minimize_bfgs(const Objective& f, std::vector<double> x0, const OptimizerConfig& cfg);

}  // namespace pwgauss
