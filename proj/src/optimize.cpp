#include "pwgauss/optimize.hpp"

#include "pwgauss/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pwgauss {

namespace {

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::fabs(e));
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool usable(double v) { return std::isfinite(v); }

}  // namespace

void OptimizerConfig::validate() const {
    if (!(grad_tol > 0.0)) detail::domain_fail("OptimizerConfig", "grad_tol must be > 0");
    if (max_iters < 1) detail::domain_fail("OptimizerConfig", "max_iters must be >= 1");
}

std::vector<double> numerical_gradient(const Objective& f, std::span<const double> x, double rel_step) {
    std::vector<double> g(x.size());
    std::vector<double> probe(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = rel_step * std::max(1.0, std::fabs(x[i]));
        probe[i] = x[i] + h;
        const double fp = f(probe);
        probe[i] = x[i] - h;
        const double fm = f(probe);
        probe[i] = x[i];
        if (usable(fp) && usable(fm)) {
            g[i] = (fp - fm) / (2.0 * h);
        } else {
            // One-sided at a feasibility boundary.
            const double f0 = f(probe);
            g[i] = usable(fp) ? (fp - f0) / h : usable(fm) ? (f0 - fm) / h : 0.0;
        }
    }
    return g;
}

MinimizeResult minimize_bfgs(const Objective& f, std::vector<double> x0, const OptimizerConfig& cfg) {
    cfg.validate();
    const std::size_t n = x0.size();
    MinimizeResult res;
    res.x = std::move(x0);
    res.fx = f(res.x);
    if (!usable(res.fx)) {
        res.fx = std::numeric_limits<double>::infinity();
        return res;
    }

    std::vector<double> g = numerical_gradient(f, res.x);
    res.grad_max_norm = max_abs(g);

    auto identity = [n] {
        std::vector<double> h(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1.0;
        return h;
    };
    std::vector<double> hinv = identity();
    std::vector<double> dir(n), xn(n), s(n), y(n), hy(n);
    constexpr double kArmijo = 1e-4;
    constexpr double kMaxStep = 5.0;
    bool fresh_hessian = true;

    while (res.iterations < cfg.max_iters) {
        if (res.grad_max_norm <= cfg.grad_tol) {
            res.converged = true;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc -= hinv[i * n + j] * g[j];
            dir[i] = acc;
        }
        double slope = dot(g, dir);
        if (!(slope < 0.0)) {
            hinv = identity();
            for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
            slope = dot(g, dir);
            fresh_hessian = true;
        }
        const double step_len = max_abs(dir);
        double t = step_len > kMaxStep ? kMaxStep / step_len : 1.0;

        double fn = 0.0;
        bool accepted = false;
        for (int k = 0; k < 60; ++k) {
            for (std::size_t i = 0; i < n; ++i) xn[i] = res.x[i] + t * dir[i];
            fn = f(xn);
            if (usable(fn) && fn <= res.fx + kArmijo * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        ++res.iterations;
        if (!accepted) {
            if (fresh_hessian) break;  // no descent even along -grad: stuck at noise level
            hinv = identity();
            fresh_hessian = true;
            continue;
        }

        std::vector<double> gn = numerical_gradient(f, xn);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = xn[i] - res.x[i];
            y[i] = gn[i] - g[i];
        }
        const double sy = dot(s, y);
        if (fresh_hessian && sy > 0.0) {
            // Scale the initial inverse Hessian to the observed curvature.
            const double scale = sy / dot(y, y);
            for (std::size_t i = 0; i < n; ++i) hinv[i * n + i] = scale;
        }
        if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
            // H+ = (I - r s y^T) H (I - r y s^T) + r s s^T, r = 1/(y^T s)
            const double r = 1.0 / sy;
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) acc += hinv[i * n + j] * y[j];
                hy[i] = acc;
            }
            const double yhy = dot(y, hy);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    hinv[i * n + j] += -r * (hy[i] * s[j] + s[i] * hy[j]) + (r * r * yhy + r) * s[i] * s[j];
                }
            }
            fresh_hessian = false;
        }
        res.x = xn;
        res.fx = fn;
        g = std::move(gn);
        res.grad_max_norm = max_abs(g);
    }
    if (res.grad_max_norm <= cfg.grad_tol) res.converged = true;
    return res;
}

}  // namespace pwgauss
