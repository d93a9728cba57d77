#ifndef SIMPLEXDIFF_QUADRATURE_HPP
#define SIMPLEXDIFF_QUADRATURE_HPP

#include <functional>
#include <span>
#include <vector>

namespace simplexdiff {

// Adaptive Simpson on [a, b]. The interval is first split into n_panels
// uniform panels, each refined recursively to the per-panel tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int n_panels = 32);

// Integral of exp(log_pdf) over (lower, upper). lower == 0 is allowed even
// when the density has an integrable power-law singularity at 0: the
// integral is taken in u = ln(theta), truncating far below the upper end.
double integrate_density(const std::function<double(double)>& log_pdf,
                         double lower, double upper, double tol = 1e-9);

// CDF values of the density exp(log_pdf) at each point of an ascending
// sorted sample, by cumulative piecewise quadrature from `lower`.
std::vector<double> cdf_at_sorted(std::span<const double> sorted,
                                  const std::function<double(double)>& log_pdf,
                                  double lower);

}  // namespace simplexdiff

#endif
