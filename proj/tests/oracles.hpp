// Independent reference implementations used only to check the production
// code. Deliberately written along different routes than the library:
// long-double power series, integral representations evaluated by quadrature,
// and brute-force constructions.
#pragma once

#include <functional>

namespace oracles {

/// J0 by the ascending power series in long double (good for |x| <= 12).
double j0_series(double x);

/// First positive root of J0 located by bisection on j0_series.
double j0_first_root();

/// I0 by the ascending power series in long double.
double i0_series(double x);

/// e^{-x} I0(x) from the asymptotic expansion (x >= 20).
double i0_scaled_asymptotic(double x);

/// K1 from the integral representation int_0^inf e^{-x cosh t} cosh t dt
/// evaluated with the adaptive quadrature module.
double k1_integral(double x);

/// erfc by series (|x| <= 3) in long double.
double erfc_series(double x);

/// Central finite difference (f(x+h) - f(x-h)) / 2h.
double central_diff(const std::function<double(double)>& f, double x, double h);

}  // namespace oracles
