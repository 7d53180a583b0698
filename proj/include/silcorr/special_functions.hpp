#pragma once

namespace silcorr::special
{

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
/// Continued fraction evaluated with the modified Lentz method.
double incomplete_beta(double a, double b, double x);

/// Two-sided tail probability P(|T| >= |t|) of Student's t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);

}  // namespace silcorr::special
