#pragma once

#include <span>

namespace pwgauss {

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

// Upper tail P(T > t) of Student's t with `dof` degrees of freedom.
double student_t_upper_tail(double t, double dof);

// One-sided paired t-test of H1: mean(a - b) > 0. Returns the p-value with
// n-1 degrees of freedom. When every difference is identical (zero sample
// variance) the statistic is +-inf or undefined: p = 0 for a positive common
// difference, 1 for a negative one and 0.5 when all differences are zero.
double paired_t_test_one_sided(std::span<const double> a, std::span<const double> b);

}  // namespace pwgauss
