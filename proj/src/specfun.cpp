#include "otwr/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace otwr::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kEulerGamma = 0.57721566490153286060651209008;

void require_finite(double x, const char* who) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(who) + ": non-finite argument");
}

// Lanczos approximation, g = 7, 9 terms.
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

// log(sin(pi z)) stable for large |Im z|.
std::complex<double> log_sin_pi(std::complex<double> z) {
    const std::complex<double> w = kPi * z;
    if (std::abs(w.imag()) < 1.0) return std::log(std::sin(w));
    if (w.imag() > 0.0) {
        // sin w = (i/2) e^{-iw} (1 - e^{2iw}),  |e^{2iw}| = e^{-2 Im w} << 1
        const std::complex<double> i(0.0, 1.0);
        return std::log(1.0 - std::exp(2.0 * i * w)) - i * w +
               i * (kPi / 2.0) - std::log(2.0);
    }
    return std::conj(log_sin_pi(std::conj(z)));
}

}  // namespace

std::complex<double> lgamma_complex(std::complex<double> z) {
    if (z.real() < 0.5) {
        // reflection: lg(z) = log(pi) - log(sin(pi z)) - lg(1 - z)
        return std::log(kPi) - log_sin_pi(z) - lgamma_complex(1.0 - z);
    }
    const std::complex<double> zm1 = z - 1.0;
    std::complex<double> acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (zm1 + double(i));
    const std::complex<double> t = zm1 + 7.5;
    return 0.5 * std::log(2.0 * kPi) + (zm1 + 0.5) * std::log(t) - t + std::log(acc);
}

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("gamma_fn: requires x > 0");
    if (x < 0.5) return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
    const double zm1 = x - 1.0;
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (zm1 + i);
    const double t = zm1 + 7.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, zm1 + 0.5) * std::exp(-t) * acc;
}

double q_function(double x) {
    require_finite(x, "q_function");
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

double bessel_j0(double x) {
    require_finite(x, "bessel_j0");
    x = std::abs(x);
    // Trapezoidal rule on J0(x) = (1/2pi) int_0^{2pi} cos(x sin t) dt.
    // With N nodes the aliasing error is 2(J_N + J_2N + ...), and
    // |J_N(x)| <= (x/2)^N / N!, negligible for N >= 2 ceil(x) + 34.
    const int n = 2 * (17 + static_cast<int>(std::ceil(x)));
    long double acc = 0.0L;
    for (int k = 0; k < n; ++k) {
        const double theta = 2.0 * kPi * k / n;
        acc += std::cos(x * std::sin(theta));
    }
    return static_cast<double>(acc / n);
}

namespace {

// Asymptotic series sum_k c_k / x^k for I0, c_k = ((2k-1)!!)^2 / (k! 8^k).
double i0_asymptotic_factor(double x) {
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1; k <= 30; ++k) {
        const double q = (2.0 * k - 1.0);
        term *= q * q / (8.0 * k * x);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

}  // namespace

double bessel_i0_scaled(double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("bessel_i0_scaled: requires x >= 0");
    if (x < 20.0) {
        const double w = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k <= 60; ++k) {
            term *= w / (double(k) * k);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return sum * std::exp(-x);
    }
    return i0_asymptotic_factor(x) / std::sqrt(2.0 * kPi * x);
}

double bessel_i0(double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("bessel_i0: requires x >= 0");
    if (x < 20.0) {
        const double w = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k <= 60; ++k) {
            term *= w / (double(k) * k);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return sum;
    }
    return std::exp(x) * bessel_i0_scaled(x);
}

namespace {

// Ascending series, x <= 2:
//   K1(x) = ln(x/2) I1(x) + 1/x - (x/4) sum_k [psi(k+1)+psi(k+2)] w^k / (k!(k+1)!)
// with w = x^2/4 and I1(x) = (x/2) sum_k w^k / (k!(k+1)!).
double k1_series(double x) {
    const double w = 0.25 * x * x;
    double tk = 1.0;                       // w^k / (k! (k+1)!)
    double p1 = -kEulerGamma;              // psi(k+1)
    double p2 = 1.0 - kEulerGamma;         // psi(k+2)
    double i1 = 0.0, s = 0.0;
    for (int k = 0; k <= 40; ++k) {
        i1 += tk;
        s += (p1 + p2) * tk;
        const double kk = k + 1.0;
        const double next = tk * w / (kk * (kk + 1.0));
        p1 += 1.0 / kk;
        p2 += 1.0 / (kk + 1.0);
        if (next * (std::abs(p1) + std::abs(p2)) < 1e-18 * (std::abs(s) + 1.0) && k >= 4) {
            tk = next;
            break;
        }
        tk = next;
    }
    const double bi1 = 0.5 * x * i1;
    return std::log(0.5 * x) * bi1 + 1.0 / x - 0.25 * x * s;
}

// Temme's continued fraction for K_mu, mu = 0, valid for x >= 2.
// Returns e^{x} K1(x).
double k1_cf2_scaled(double x) {
    const double a1 = 0.25;  // 1/4 - mu^2 with mu = 0
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    double q = a1, c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= 600; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (a * d + b);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < 1e-17) break;
    }
    h = a1 * h;
    const double k0e = std::sqrt(kPi / (2.0 * x)) / s;  // e^x K0(x)
    return k0e * (x + 0.5 - h) / x;                     // e^x K1(x)
}

}  // namespace

double bessel_k1_scaled(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("bessel_k1_scaled: requires x > 0");
    if (x <= 2.0) return std::exp(x) * k1_series(x);
    return k1_cf2_scaled(x);
}

double bessel_k1(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("bessel_k1: requires x > 0");
    if (x <= 2.0) return k1_series(x);
    return std::exp(-x) * k1_cf2_scaled(x);
}

namespace {

// Series for g(z) - 1 = z sum_k z^k (ln z - psi(k+1) - psi(k+2)) / (k!(k+1)!),
// converges rapidly for small z.
double xk1m1_series(double z) {
    const double lz = std::log(z);
    double tk = 1.0;                // z^k / (k!(k+1)!)
    double p1 = -kEulerGamma;
    double p2 = 1.0 - kEulerGamma;
    double s = 0.0;
    for (int k = 0; k <= 12; ++k) {
        s += tk * (lz - p1 - p2);
        const double kk = k + 1.0;
        tk *= z / (kk * (kk + 1.0));
        p1 += 1.0 / kk;
        p2 += 1.0 / (kk + 1.0);
    }
    return z * s;
}

}  // namespace

double xk1_scaled(double z) {
    if (!(z >= 0.0)) throw std::invalid_argument("xk1_scaled: requires z >= 0");
    if (z == 0.0) return 1.0;
    if (z < 1e-4) return 1.0 + xk1m1_series(z);
    const double x = 2.0 * std::sqrt(z);
    return x * bessel_k1(x);
}

double xk1_scaled_m1(double z) {
    if (!(z >= 0.0)) throw std::invalid_argument("xk1_scaled_m1: requires z >= 0");
    if (z == 0.0) return 0.0;
    if (z < 0.01) return xk1m1_series(z);
    return xk1_scaled(z) - 1.0;
}

double meijer_g2112_general(double z, double a1, double b1, double b2) {
    if (!(z > 0.0)) throw std::invalid_argument("meijer_g2112: requires z > 0");
    const double bmin = std::min(b1, b2);
    if (!(a1 - 1.0 < bmin))
        throw std::invalid_argument("meijer_g2112: contour would not separate pole sets");

    // 1/(2 pi i) int Gamma(b1-s) Gamma(b2-s) Gamma(1-a1+s) z^s ds on the
    // vertical line Re s = s0. The integrand decays like e^{-3 pi |t| / 2},
    // so [0, 60] captures it to far below double precision; conjugate
    // symmetry folds the line onto t >= 0.
    const double s0 = 0.5 * (a1 - 1.0 + bmin);
    const double lnz = std::log(z);
    auto log_integrand = [&](double t) {
        const std::complex<double> s(s0, t);
        return lgamma_complex(b1 - s) + lgamma_complex(b2 - s) +
               lgamma_complex(1.0 - a1 + s) + s * lnz;
    };
    auto integrand = [&](double t) {
        const std::complex<double> lg = log_integrand(t);
        if (lg.real() < -700.0) return 0.0;
        return std::exp(lg).real();
    };
    QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    // The achievable absolute accuracy is bounded by rounding on the
    // integrand's peak (at t = 0 the integrand is positive and maximal).
    const double peak = std::exp(std::min(700.0, log_integrand(0.0).real()));
    spec.abs_tol = std::max(1e-300, 3e-16 * peak);
    spec.max_subdivisions = 400;
    const double v = integrate_adaptive(integrand, 0.0, 60.0, spec);
    return v / kPi;
}

double meijer_g2112(double z, double c2) {
    if (!(c2 > -1.0)) throw std::invalid_argument("meijer_g2112: requires c2 > -1");
    return meijer_g2112_general(z, 1.0, c2 + 2.0, c2 + 1.0);
}

}  // namespace otwr::specfun
