#pragma once

// Scalar special functions and 1-D solvers used by the entropy estimators
// and the photon-number optimizer.

#include <functional>
#include <optional>

namespace qkd::numerics {

/// Closed search interval [lo, hi]; construction throws DomainError unless lo < hi.
struct Bracket {
  double lo;
  double hi;

  Bracket(double lo, double hi);
  double width() const noexcept { return hi - lo; }
};

using ScalarFunction = std::function<double(double)>;

/// Inverse error function. Rational initial guess refined with Halley steps
/// on erf (or erfc in the tails), accurate to ~1e-15 relative.
/// Throws DomainError for |x| >= 1 or NaN.
double erf_inv(double x);

/// Root of `f` near `guess`.
///
/// A bracket is grown geometrically (step doubles each round, at most 60
/// rounds) around the guess until a sign change appears, then refined with
/// Brent's method until the bracket is narrower than `tol` (plus a few ulps).
/// When `domain` is given, trial points never leave its open interior: a step
/// that would cross a boundary halves the remaining distance instead.
/// Throws ConvergenceError when no sign change is found.
double find_root(const ScalarFunction& f, double guess, double tol,
                 std::optional<Bracket> domain = std::nullopt);

struct ScalarMinimum {
  double x;
  double f;
};

/// Bounded minimization of a (presumed unimodal) function by golden-section
/// search with parabolic interpolation, followed by a comparison against the
/// two end points so that monotone functions report the boundary exactly.
ScalarMinimum minimize_scalar(const ScalarFunction& f, const Bracket& bracket, double tol);

/// Closed-form approximation to the lower-tail inverse of the regularized
/// incomplete beta function I_x(a, b) = p (normal-quantile based).
/// Throws DomainError when a <= 1/2, b <= 1/2 or p is outside (0, 1).
double inv_beta_approx(double a, double b, double p);

/// How the first term C(n,k) p^k (1-p)^(n-k) of the binomial tail is seeded.
enum class TailSeed {
  Automatic,      // direct product when min(k, n-k) * ln(n) < 200, Stirling otherwise
  DirectProduct,  // C(n,k) as a running product
  Stirling,       // log-factorials from the Stirling series through 1/n^5
};

/// P[X <= k] - confidence for X ~ Binomial(n, p).
///
/// The term at k is seeded and the tail summed downward with the ratio
/// recurrence t_{j} = t_{j+1} (j+1)(1-p) / (p (n-j)), stopping as soon as the
/// partial sum no longer changes in double precision. `k` may be fractional,
/// in which case the summation visits k-1, k-2, ... down to the last
/// non-negative value. Seeds below the double range are carried in log form
/// until the recurrence brings them back into range.
///
/// Throws DomainError unless n >= 1, 0 <= k <= n and 0 < p < 1.
double binom_tail_deficit(double n, double k, double p, double confidence,
                          TailSeed seed = TailSeed::Automatic);

}  // namespace qkd::numerics
