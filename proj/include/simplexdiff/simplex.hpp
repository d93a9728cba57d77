#ifndef SIMPLEXDIFF_SIMPLEX_HPP
#define SIMPLEXDIFF_SIMPLEX_HPP

#include <span>
#include <vector>

#include "simplexdiff/cir.hpp"
#include "simplexdiff/rng.hpp"

namespace simplexdiff {

// Dirichlet / multi-coordinate CIR parameters: per-coordinate shapes alpha,
// shared mean-reversion speed b, horizon T.
struct SimplexParams {
  std::vector<double> alpha;
  double b;
  double T;

  SimplexParams(std::vector<double> alpha_, double b_, double T_);
  std::size_t dim() const { return alpha.size(); }
  CirParams coord(std::size_t i) const { return CirParams(alpha[i], b); }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;  // states[k] has dim n
};

// ln Dirichlet(alpha) density at an interior simplex point.
double dirichlet_log_density(const SimplexParams& sp,
                             std::span<const double> x);

// Gamma-normalization Dirichlet draw.
std::vector<double> sample_dirichlet(const SimplexParams& sp, RngStream& rng);

// y / sum(y); throws when the sum is zero.
std::vector<double> project_to_simplex(std::span<const double> y);

// One exact forward step of length t from y0; coordinate i draws from its
// CIR transition on substream i.
std::vector<double> forward_noise(const SimplexParams& sp,
                                  std::span<const double> y0, double t,
                                  RngStream& rng);

// Coordinate-wise simulate_path with independent substreams.
Trajectory simulate_forward_trajectory(const SimplexParams& sp,
                                       std::span<const double> y0,
                                       std::span<const double> grid,
                                       const Scheme& scheme, RngStream& rng);

}  // namespace simplexdiff

#endif
