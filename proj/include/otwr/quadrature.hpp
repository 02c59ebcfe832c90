#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace otwr::specfun {

/// Thrown when an adaptive integration fails to reach the requested
/// tolerances within the subdivision budget. Never silently swallowed.
class NonConvergence : public std::runtime_error {
public:
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

/// How the tail x in [1, inf) of a semi-infinite integral is handled.
///   ExpTail: geometric panels [1,2],[2,4],... integrated adaptively until two
///            consecutive panels contribute below tolerance. Robust for any
///            (sub)exponential decay scale.
///   None:    single rational map x = 1/u of the whole tail onto (0,1] in one
///            adaptive pass.
enum class TailTransform { ExpTail, None };

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 200;
    TailTransform transform = TailTransform::ExpTail;
    // Integrand has an integrable x^{-1/2}-type singularity at 0; the first
    // panel is then integrated under the substitution x = u^2, which removes
    // the singularity exactly.
    bool sqrt_singularity = false;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over the finite
/// interval [a, b]. Worst-error-first bisection.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec = {});

/// Integral of f over [0, inf). See QuadratureSpec for singularity and tail
/// handling. Throws NonConvergence if the requested tolerance cannot be met.
double integrate_semi_infinite(const std::function<double(double)>& f,
                               const QuadratureSpec& spec = {});

}  // namespace otwr::specfun
