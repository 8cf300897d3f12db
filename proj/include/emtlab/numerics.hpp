#pragma once

// Finite-difference stencils and jet extraction, deterministic random
// draws, direction sampling on spheres, and the sampling-based minimizer
// used as an oracle for the exact ball solver.

#include <cstdint>
#include <functional>
#include <vector>

#include "emtlab/linalg.hpp"

namespace emtlab::numerics {

constexpr uint64_t kDefaultSeed = 0x5EED;

// Central-difference stencil of formal order 2 or 4.
struct Stencil {
  int order = 4;
  double h = 1e-3;

  Stencil() = default;
  Stencil(int order_, double h_) : order(order_), h(h_) {
    if (h <= 0) fail(ErrorKind::parameter, "stencil step must be positive");
    if (order != 2 && order != 4) fail(ErrorKind::parameter, "stencil order must be 2 or 4");
  }

  // offsets (in units of h) and weights for d/dx and d^2/dx^2
  std::vector<std::pair<int, double>> first() const {
    if (order == 2) return {{-1, -0.5}, {1, 0.5}};
    return {{-2, 1.0 / 12}, {-1, -8.0 / 12}, {1, 8.0 / 12}, {2, -1.0 / 12}};
  }
  std::vector<std::pair<int, double>> second() const {
    if (order == 2) return {{-1, 1.0}, {0, -2.0}, {1, 1.0}};
    return {{-2, -1.0 / 12}, {-1, 16.0 / 12}, {0, -30.0 / 12}, {1, 16.0 / 12}, {2, -1.0 / 12}};
  }
};

using Field = std::function<RVec(const RVec&)>;

// First partials of a vector-valued field: result(k, a) = d f_k / d x^a.
RMat fd_grad(const Field& f, const RVec& x, const Stencil& st);

// Second partials: result[k](a, b) = d^2 f_k / dx^a dx^b (symmetric).
std::vector<RMat> fd_hess(const Field& f, const RVec& x, const Stencil& st);

struct Jet {
  RVec value;
  RMat grad;               // (k, a)
  std::vector<RMat> hess;  // per component, (a, b); empty at depth 1
};

Jet fd_jet(const Field& f, const RVec& x, const Stencil& st, int depth);

inline double richardson_order(double coarse, double fine) {
  return std::log2(coarse / fine);
}

// Deterministic generator: splitmix64-seeded xorshift-style stream with a
// fixed layout, so draws are identical across platforms and runs.
class Rng {
 public:
  explicit Rng(uint64_t seed = kDefaultSeed) { s_ = seed ? seed : 0x9E3779B97F4A7C15ull; }

  uint64_t next_u64() {
    uint64_t z = (s_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    // Box-Muller; one value per call keeps the stream layout simple.
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  RVec normal_vec(int n) {
    RVec v(n);
    for (auto& x : v) x = normal();
    return v;
  }
  Rng fork() { return Rng(next_u64()); }

 private:
  uint64_t s_;
};

// n approximately-uniform directions on S^{dim-1}.  dim 2 uses an angle
// grid, dim 3 the Fibonacci lattice, higher dims normalized Gaussians.
std::vector<RVec> sphere_directions(int dim, int n, uint64_t seed = kDefaultSeed);

// Minimum of fn over {r*d : d direction, r in linspace(0,1,n_radii)} or
// over the unit sphere only.  Deterministic for a given seed.
struct SampleMin {
  double value;
  RVec argmin;
};
SampleMin sample_min(const std::function<double(const RVec&)>& fn, int dim, int n_dirs,
                     int n_radii, bool sphere_only, uint64_t seed = kDefaultSeed);

// Runs fn(i) for i in [0, n) on up to `threads` workers; any exception is
// rethrown on the caller thread.  Results must be written to preallocated,
// index-owned slots so the output is independent of the schedule.
void parallel_for(int n, const std::function<void(int)>& fn, int threads);

int default_thread_count();

}  // namespace emtlab::numerics
