#include "qkd/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qkd/errors.hpp"

namespace qkd::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Terms smaller than e^-700 are carried as logarithms.
constexpr double kLogTinyTerm = -700.0;

bool opposite_signs(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

// Brent's zeroin on a bracket with f(a), f(b) of opposite sign.
double brent_zero(const ScalarFunction& f, double a, double b, double fa, double fb, double tol) {
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < 500; ++iter) {
    if (!opposite_signs(fb, fc) && fb != 0.0) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;

    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p;
      double q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
    fb = f(b);
  }
  throw ConvergenceError("find_root: Brent iteration did not converge");
}

}  // namespace

Bracket::Bracket(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!(lo < hi)) {
    std::ostringstream msg;
    msg << "bracket requires lo < hi, got [" << lo << ", " << hi << "]";
    throw DomainError(msg.str());
  }
}

double erf_inv(double x) {
  if (!(std::abs(x) < 1.0)) {
    std::ostringstream msg;
    msg << "erf_inv argument " << x << " is outside (-1, 1)";
    throw DomainError(msg.str());
  }
  if (x == 0.0) return x;

  // Single-precision rational guess (M. Giles, "Approximating the erfinv function").
  double w = -std::log((1.0 - x) * (1.0 + x));
  double y;
  if (w < 5.0) {
    w -= 2.5;
    double p = 2.81022636e-08;
    p = 3.43273939e-07 + p * w;
    p = -3.5233877e-06 + p * w;
    p = -4.39150654e-06 + p * w;
    p = 0.00021858087 + p * w;
    p = -0.00125372503 + p * w;
    p = -0.00417768164 + p * w;
    p = 0.246640727 + p * w;
    p = 1.50140941 + p * w;
    y = p * x;
  } else {
    w = std::sqrt(w) - 3.0;
    double p = -0.000200214257;
    p = 0.000100950558 + p * w;
    p = 0.00134934322 + p * w;
    p = -0.00367342844 + p * w;
    p = 0.00573950773 + p * w;
    p = -0.0076224613 + p * w;
    p = 0.00943887047 + p * w;
    p = 1.00167406 + p * w;
    p = 2.83297682 + p * w;
    y = p * x;
  }

  // Halley refinement. In the tails the residual is taken against erfc so
  // that it keeps full relative precision; 1 - |x| is exact there.
  const double ax = std::abs(x);
  const double sign = x < 0.0 ? -1.0 : 1.0;
  double ay = std::abs(y);
  for (int i = 0; i < 3; ++i) {
    const double residual = ax > 0.5 ? (1.0 - ax) - std::erfc(ay) : std::erf(ay) - ax;
    const double slope = 2.0 / std::sqrt(std::numbers::pi) * std::exp(-ay * ay);
    const double step = residual / slope;
    ay -= step / (1.0 + ay * step);
  }
  return sign * ay;
}

double find_root(const ScalarFunction& f, double guess, double tol, std::optional<Bracket> domain) {
  if (domain && !(guess > domain->lo && guess < domain->hi)) {
    std::ostringstream msg;
    msg << "find_root: guess " << guess << " is outside the open domain (" << domain->lo << ", "
        << domain->hi << ")";
    throw DomainError(msg.str());
  }
  const double fg = f(guess);
  if (fg == 0.0) return guess;

  double step = guess == 0.0 ? 1.0 / 50.0 : std::abs(guess) / 50.0;
  double a = guess;
  double b = guess;
  for (int round = 0; round < 60; ++round, step *= 2.0) {
    double next_a = guess - step;
    double next_b = guess + step;
    if (domain) {
      if (next_a <= domain->lo) next_a = domain->lo + 0.5 * (a - domain->lo);
      if (next_b >= domain->hi) next_b = domain->hi - 0.5 * (domain->hi - b);
    }
    a = next_a;
    b = next_b;
    const double fa = f(a);
    if (fa == 0.0) return a;
    if (opposite_signs(fa, fg)) return brent_zero(f, a, guess, fa, fg, tol);
    const double fb = f(b);
    if (fb == 0.0) return b;
    if (opposite_signs(fg, fb)) return brent_zero(f, guess, b, fg, fb, tol);
  }
  std::ostringstream msg;
  msg << "find_root: no sign change found around " << guess << " after 60 expansions";
  throw ConvergenceError(msg.str());
}

ScalarMinimum minimize_scalar(const ScalarFunction& f, const Bracket& bracket, double tol) {
  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  const double sqrt_eps = std::sqrt(kEps);

  double a = bracket.lo;
  double b = bracket.hi;
  double v = a + golden * (b - a);
  double w = v;
  double x = v;
  double d = 0.0;
  double e = 0.0;
  double fx = f(x);
  double fv = fx;
  double fw = fx;

  double xm = 0.5 * (a + b);
  double tol1 = sqrt_eps * std::abs(x) + tol / 3.0;
  double tol2 = 2.0 * tol1;

  int iterations = 0;
  while (std::abs(x - xm) > tol2 - 0.5 * (b - a)) {
    if (++iterations > 10000) throw ConvergenceError("minimize_scalar: iteration limit reached");
    bool take_golden = true;
    if (std::abs(e) > tol1) {
      // parabola through (v, fv), (w, fw), (x, fx)
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      r = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * r) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        take_golden = false;
        if ((u - a) < tol2 || (b - u) < tol2) d = xm >= x ? tol1 : -tol1;
      }
    }
    if (take_golden) {
      e = x >= xm ? a - x : b - x;
      d = golden * e;
    }
    const double u = x + (d >= 0.0 ? 1.0 : -1.0) * std::max(std::abs(d), tol1);
    const double fu = f(u);

    if (fu <= fx) {
      if (u >= x) {
        a = x;
      } else {
        b = x;
      }
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x) {
        a = u;
      } else {
        b = u;
      }
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
    xm = 0.5 * (a + b);
    tol1 = sqrt_eps * std::abs(x) + tol / 3.0;
    tol2 = 2.0 * tol1;
  }

  ScalarMinimum best{x, fx};
  for (double edge : {bracket.lo, bracket.hi}) {
    const double fe = f(edge);
    if (fe < best.f) best = {edge, fe};
  }
  return best;
}

double inv_beta_approx(double a, double b, double p) {
  if (!(a > 0.5) || !(b > 0.5)) {
    std::ostringstream msg;
    msg << "inv_beta_approx requires a, b > 1/2, got a = " << a << ", b = " << b;
    throw DomainError(msg.str());
  }
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream msg;
    msg << "inv_beta_approx probability " << p << " is outside (0, 1)";
    throw DomainError(msg.str());
  }
  const double y = std::numbers::sqrt2 * erf_inv(1.0 - 2.0 * p);
  const double l = y * y / 6.0 - 0.5;
  const double a1 = 1.0 / (2.0 * a - 1.0);
  const double b1 = 1.0 / (2.0 * b - 1.0);
  const double h = 2.0 / (a1 + b1);
  const double w = y * std::sqrt(h + l) / h - (b1 - a1) * (l + 5.0 / 6.0 - 2.0 / (3.0 * h));
  return a / (a + b * std::exp(2.0 * w));
}

double binom_tail_deficit(double n, double k, double p, double confidence, TailSeed seed) {
  if (!(n >= 1.0) || !(k >= 0.0 && k <= n)) {
    std::ostringstream msg;
    msg << "binom_tail_deficit requires n >= 1 and 0 <= k <= n, got n = " << n << ", k = " << k;
    throw DomainError(msg.str());
  }
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream msg;
    msg << "binom_tail_deficit probability " << p << " is outside (0, 1)";
    throw DomainError(msg.str());
  }

  // Seed with the smaller of k and n - k; C(n,k) is symmetric.
  double k1 = std::min(k, n - k);
  double k2 = std::max(k, n - k);

  const bool direct = seed == TailSeed::DirectProduct ||
                      (seed == TailSeed::Automatic && k1 * std::log(n) < 200.0);
  double term = 0.0;
  double log_term = 0.0;
  if (direct) {
    double binom = 1.0;
    for (double i = 1.0; i <= k1; i += 1.0) binom = binom * (n - i + 1.0) / i;
    const double pk = std::pow(p, k);
    const double qnk = std::pow(1.0 - p, n - k);
    log_term = std::log(binom) + k * std::log(p) + (n - k) * std::log1p(-p);
    // a subnormal factor keeps only a few significant bits
    const double normal = std::numeric_limits<double>::min();
    term = (pk >= normal && qnk >= normal) ? binom * pk * qnk : std::exp(log_term);
  } else {
    k1 += 1.0;
    k2 += 1.0;
    const double n1 = n + 1.0;
    double l = 1.0 - 0.5 * std::log(2.0 * std::numbers::pi);
    l += (1.0 / n1 - 1.0 / k1 - 1.0 / k2) / 12.0;
    l -= (1.0 / std::pow(n1, 3) - 1.0 / std::pow(k1, 3) - 1.0 / std::pow(k2, 3)) / 360.0;
    l += (1.0 / std::pow(n1, 5) - 1.0 / std::pow(k1, 5) - 1.0 / std::pow(k2, 5)) / 1260.0;
    l += (n1 - 0.5) * std::log(n1) - (k1 - 0.5) * std::log(k1) - (k2 - 0.5) * std::log(k2);
    log_term = l + k * std::log(p) + (n - k) * std::log(1.0 - p);
    term = std::exp(log_term);
  }

  // Below the double range the term lives in log form until it grows back.
  bool deferred = false;
  if (!(term >= std::exp(kLogTinyTerm))) {
    if (log_term > kLogTinyTerm) {
      term = std::exp(log_term);
    } else {
      deferred = true;
      term = 0.0;
    }
  }

  double sum = term - confidence;
  const double log_odds = std::log((1.0 - p) / p);
  const double steps = k >= 1.0 ? std::floor(k) : 0.0;
  for (double i = 0.0; i < steps; i += 1.0) {
    const double j = (k - 1.0) - i;
    const double ratio = (j + 1.0) * (1.0 - p) / (p * (n - j));
    if (deferred) {
      log_term += std::log(j + 1.0) - std::log(n - j) + log_odds;
      if (log_term <= kLogTinyTerm) continue;
      deferred = false;
      term = std::exp(log_term);
    } else {
      term = term * ratio;
    }
    const double next = sum + term;
    // Terms are still rising toward the mode while ratio > 1; keep going.
    if (next == sum && ratio <= 1.0) break;
    sum = next;
  }
  return sum;
}

}  // namespace qkd::numerics
