#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "emtlab/numerics.hpp"
#include "support.hpp"

using namespace emtlab;
using namespace emtlab::numerics;

namespace {

Field scalar_field(std::function<double(const RVec&)> f) {
  return [f](const RVec& x) { return RVec{f(x)}; };
}

}  // namespace

TEST_CASE("first-derivative stencils are exact on low-degree polynomials") {
  for (int order : {2, 4}) {
    Stencil st(order, 0.1);
    auto f = scalar_field([](const RVec& x) { return 3.0 + 2.0 * x[0]; });
    RMat g = fd_grad(f, {0.7, -0.3}, st);
    CHECK(g(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(g(0, 1) == doctest::Approx(0.0).epsilon(1e-14));
  }
  // degree 4 is exact for the 4th-order stencil
  Stencil st4(4, 0.05);
  auto quartic = scalar_field([](const RVec& x) { return std::pow(x[0], 4); });
  RMat g = fd_grad(quartic, {0.5}, st4);
  CHECK(g(0, 0) == doctest::Approx(4 * std::pow(0.5, 3)).epsilon(1e-11));
}

TEST_CASE("mixed second derivatives are exact on bilinear fields") {
  Stencil st(2, 0.1);
  auto f = scalar_field([](const RVec& x) { return x[0] * x[1]; });
  auto hess = fd_hess(f, {0.3, 0.8}, st);
  CHECK(hess[0](0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hess[0](1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hess[0](0, 0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("error ratio of the order-2 stencil under refinement is about 4") {
  auto f = scalar_field([](const RVec& x) { return std::sin(x[0]); });
  double exact = std::cos(0.6);
  auto err = [&](double h) {
    Stencil st(2, h);
    return std::abs(fd_grad(f, {0.6}, st)(0, 0) - exact);
  };
  double ratio = err(1e-2) / err(5e-3);
  CHECK(ratio > 3.6);
  CHECK(ratio < 4.4);
}

TEST_CASE("stencil rejects bad parameters") {
  CHECK_THROWS_AS(Stencil(3, 0.1), Error);
  CHECK_THROWS_AS(Stencil(2, -1.0), Error);
  CHECK_THROWS_AS(Stencil(2, 0.0), Error);
}

TEST_CASE("field evaluation failures carry the stencil location") {
  Stencil st(2, 0.5);
  Field f = [](const RVec& x) -> RVec {
    if (x[0] > 0.9) throw std::runtime_error("domain edge");
    return {x[0]};
  };
  CHECK_THROWS_WITH_AS(fd_grad(f, {0.7}, st), doctest::Contains("stencil"), Error);
}

TEST_CASE("deterministic rng reproduces its stream") {
  Rng a(0x5EED), b(0x5EED);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  Rng c(1), d(2);
  CHECK(c.uniform() != d.uniform());
}

TEST_CASE("sphere directions lie on the unit sphere") {
  for (int dim : {2, 3, 5}) {
    auto dirs = sphere_directions(dim, 200);
    CHECK(static_cast<int>(dirs.size()) == 200);
    for (const auto& d : dirs) CHECK(norm2(d) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("sample_min finds the center minimum of a convex bowl") {
  auto q = [](const RVec& xi) { return dot(xi, xi); };
  auto r = sample_min(q, 3, 500, 11, false);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(norm2(r.argmin) == doctest::Approx(0.0));
}

TEST_CASE("sample_min approaches the boundary minimum of a p<0 fluid form") {
  // q = rho + 2*0 + p*|xi|^2 with p < 0: minimum rho + p on the sphere
  double rho = 1.0, p = -0.7;
  auto q = [&](const RVec& xi) { return rho + p * dot(xi, xi); };
  auto r = sample_min(q, 3, 100000, 50, false);
  CHECK(std::abs(r.value - (rho + p)) < 1e-4);
}

TEST_CASE("parallel_for writes every slot once, independent of thread count") {
  const int n = 1000;
  for (int threads : {1, 2, 7}) {
    std::vector<int> slots(n, 0);
    parallel_for(n, [&](int i) { slots[i] += i + 1; }, threads);
    for (int i = 0; i < n; ++i) CHECK(slots[i] == i + 1);
  }
}

TEST_CASE("parallel_for propagates worker exceptions") {
  CHECK_THROWS(parallel_for(
      8, [](int i) { if (i == 5) throw std::runtime_error("boom"); }, 4));
}
