#pragma once

// Gamma-function primitives shared by every module.

namespace fracmix::special {

// Lanczos approximation (g = 7, 9 terms); relative error below 1e-13 on the
// positive axis, reflection formula for x < 1/2. Poles return +-inf.
double gamma(double x);

// log|Gamma(x)|, usable where gamma(x) overflows.
double log_gamma(double x);

// 1/Gamma(x); exact zero at the non-positive integers.
double rgamma(double x);

// Lower incomplete gamma integral_0^x e^{-r} r^{a-1} dr for a > 0, x >= 0.
double lower_incomplete_gamma(double a, double x);

}  // namespace fracmix::special
