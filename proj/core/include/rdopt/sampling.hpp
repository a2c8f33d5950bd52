#pragma once

#include <cstdint>
#include <vector>

#include "rdopt/design_space.hpp"
#include "rdopt/rng.hpp"

namespace rdopt {

// Inverse standard normal CDF. Rational approximation polished with one
// Newton step against erfc; absolute error well under 1e-9 on
// (1e-12, 1-1e-12). Antisymmetric by construction: q(1-u) == -q(u).
double normal_quantile(double u);

struct SobolSet {
  int dimension = 1;
  std::int64_t count = 0;
  std::int64_t skip = 0;
};

// Incremental gray-code Sobol generator over direction numbers with 31
// output bits. The all-zero point is dropped: the stream starts 0.5,
// 0.75, 0.25, ... in each dimension's own ordering, and `skip` counts
// points dropped after that.
class SobolGenerator {
 public:
  explicit SobolGenerator(int dimension, std::int64_t skip = 0);

  // Writes the next point into out[0..d-1], coordinates in (0,1).
  void next(double* out);

  static int max_dimension();

 private:
  int d_;
  std::int64_t index_;                      // points consumed so far
  std::vector<std::uint32_t> state_;        // current integer per axis
  std::vector<std::uint32_t> directions_;   // d_ x 31, axis-major
};

// First `count` points after `skip`, row-major (point index varies
// slowest). Layout: out[i*d + j] = coordinate j of point i.
std::vector<double> sobol_unit_points(const SobolSet& set);

// y_i = mean + sigmas * quantile(u_i) applied coordinate-wise in place.
// Coordinates must lie strictly inside (0,1).
void unit_to_normal(std::vector<double>& points, const Vec& mean,
                    const Vec& sigmas);

// n stratified-uniform points over B in internal units: per axis, one
// sample in each of the n equal strata, stratum order randomized.
std::vector<Vec> latin_hypercube(int n, const DesignSpace& space,
                                 SeededStream& stream);

// n i.i.d. draws from N(mean, diag(sigmas^2)) conditioned on B_delta,
// by per-coordinate rejection; periodic axes drawn unconditionally and
// wrapped. mean/sigmas in internal units.
std::vector<Vec> sample_truncated_normal(const Vec& mean, const Vec& sigmas,
                                         int n, const ExtendedBox& box,
                                         const DesignSpace& space,
                                         SeededStream& stream);

}  // namespace rdopt
