#pragma once

namespace sentopics::stats {

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation (Lentz), relative accuracy ~1e-14.
double incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t with df degrees of freedom.
double student_t_cdf(double t, double df);

// Two-sided tail probability P(|T| >= |t|).
double student_t_two_sided_p(double t, double df);

}  // namespace sentopics::stats
