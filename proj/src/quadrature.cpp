#include "simplexdiff/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace simplexdiff {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double fa,
                   double b, double fb, double m, double fm, double whole,
                   double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, flm);
  const double right = simpson(f, m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

// 15-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGlx[15] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
    -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
    -0.2011940939974345, 0.0,                 0.2011940939974345,
    0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kGlw[15] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719,
    0.1395706779261543, 0.1662692058169939, 0.1861610000155622,
    0.1984314853271116, 0.2025782419255613, 0.1984314853271116,
    0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

double gauss15(const std::function<double(double)>& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < 15; ++i) s += kGlw[i] * f(c + h * kGlx[i]);
  return h * s;
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int n_panels) {
  if (!(b > a)) return 0.0;
  const double h = (b - a) / n_panels;
  const double panel_tol = tol / n_panels;
  double total = 0.0;
  for (int i = 0; i < n_panels; ++i) {
    const double x0 = a + i * h;
    const double x1 = x0 + h;
    const double m = 0.5 * (x0 + x1);
    const double f0 = f(x0), f1 = f(x1), fm = f(m);
    const double whole = simpson(f, x0, f0, x1, f1, fm);
    total +=
        simpson_rec(f, x0, f0, x1, f1, m, fm, whole, panel_tol, 48);
  }
  return total;
}

double integrate_density(const std::function<double(double)>& log_pdf,
                         double lower, double upper, double tol) {
  if (!(upper > lower) || lower < 0.0) {
    throw std::invalid_argument("integrate_density: bad interval");
  }
  auto pdf = [&](double x) {
    const double l = log_pdf(x);
    return std::isfinite(l) ? std::exp(l) : 0.0;
  };
  if (lower > 0.0) {
    return adaptive_simpson(pdf, lower, upper, tol);
  }
  // u = ln(theta): d(theta) = e^u du, integrand theta * pdf(theta) vanishes
  // at the singular end for any integrable power law.
  auto g = [&](double u) {
    const double x = std::exp(u);
    const double l = log_pdf(x);
    return std::isfinite(l) ? std::exp(l + u) : 0.0;
  };
  const double u_hi = std::log(upper);
  return adaptive_simpson(g, u_hi - 120.0, u_hi, tol, 64);
}

std::vector<double> cdf_at_sorted(std::span<const double> sorted,
                                  const std::function<double(double)>& log_pdf,
                                  double lower) {
  std::vector<double> out(sorted.size());
  if (sorted.empty()) return out;
  auto pdf = [&](double x) {
    const double l = log_pdf(x);
    return std::isfinite(l) ? std::exp(l) : 0.0;
  };
  double acc = integrate_density(log_pdf, lower, sorted[0], 1e-10);
  out[0] = acc;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] > sorted[i - 1]) {
      acc += gauss15(pdf, sorted[i - 1], sorted[i]);
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace simplexdiff
