#pragma once

#include <complex>

#include "otwr/quadrature.hpp"

namespace otwr::specfun {

/// Zero-order Bessel function of the first kind. Valid for any finite x;
/// absolute accuracy ~1e-13, relative ~1e-12 away from zero crossings.
/// Cost grows linearly with |x| (trapezoidal evaluation of the cosine
/// integral representation, node count chosen from the aliasing bound).
double bessel_j0(double x);

/// Modified Bessel function I0, x >= 0. Ascending series below x = 20,
/// asymptotic expansion above. Overflows to +inf only where e^x does.
double bessel_i0(double x);

/// e^{-x} I0(x), never overflows.
double bessel_i0_scaled(double x);

/// Modified Bessel function K1, x > 0. Ascending log-series below x = 2,
/// Temme continued fraction above; relative accuracy ~1e-14 across
/// [1e-8, 700]. Underflows to 0 for x beyond ~745.
double bessel_k1(double x);

/// e^{x} K1(x), x > 0.
double bessel_k1_scaled(double x);

/// g(z) = 2 sqrt(z) K1(2 sqrt(z)) for z >= 0. g(0) = 1, 0 < g <= 1,
/// strictly decreasing. Series branch below z = 1e-4 keeps full relative
/// accuracy of 1 - g(z) near zero; both branches agree to ~1e-14 at the seam.
double xk1_scaled(double z);

/// g(z) - 1 with full relative accuracy of the difference (series branch
/// below z = 0.01, direct above). Negative for z > 0.
double xk1_scaled_m1(double z);

/// Gamma function for x > 0 (Lanczos g=7, n=9).
double gamma_fn(double x);

/// log Gamma on the complex plane (principal branch), Lanczos with
/// reflection for Re z < 0.5. Used by the Mellin-Barnes contour.
std::complex<double> lgamma_complex(std::complex<double> z);

/// Gaussian tail probability Q(x) = P(N(0,1) > x) = erfc(x / sqrt(2)) / 2.
double q_function(double x);

/// Meijer G^{2,1}_{1,2}( z | 1 ; c2+2, c2+1 ) for z > 0, c2 > -1,
/// evaluated by numerical Mellin-Barnes contour integration. Relative
/// accuracy ~1e-12 for c2 in {0, -1/2}; best effort for other c2 > -1.
double meijer_g2112(double z, double c2);

/// General G^{2,1}_{1,2}( z | a1 ; b1, b2 ) via the same contour,
/// requires a1 - 1 < min(b1, b2) so a straight contour separates the poles.
double meijer_g2112_general(double z, double a1, double b1, double b2);

}  // namespace otwr::specfun
