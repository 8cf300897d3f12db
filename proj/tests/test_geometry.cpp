#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "emtlab/geometry.hpp"
#include "support.hpp"

using namespace emtlab;
using namespace emtlab::geometry;
using emtlab::testsupport::random_spd;

namespace {

double gram_residual(const Frame& fr, const RMat& g) {
  const int m = fr.m;
  RMat eta = eta_matrix(m);
  double res = 0;
  for (int mu = 0; mu < m; ++mu)
    for (int nu = 0; nu < m; ++nu) {
      double v = 0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) v += fr.vectors(mu, a) * g(a, b) * fr.vectors(nu, b);
      res = std::max(res, std::abs(v - eta(mu, nu)));
    }
  return res;
}

}  // namespace

TEST_CASE("minkowski frame is the coordinate basis") {
  AdmData adm;
  adm.m = 4;
  adm.N = 1;
  adm.beta = RVec(3, 0.0);
  adm.gbar = RMat::identity(3);
  Frame fr = build_frame(adm);
  for (int mu = 0; mu < 4; ++mu)
    for (int a = 0; a < 4; ++a)
      CHECK(fr.vectors(mu, a) == doctest::Approx(mu == a ? 1.0 : 0.0).epsilon(1e-15));
}

TEST_CASE("shifted lapse normal matches the ADM formula") {
  AdmData adm;
  adm.m = 4;
  adm.N = 2;
  adm.beta = {1.0, 0.0, 0.0};
  adm.gbar = RMat::identity(3);
  Frame fr = build_frame(adm);
  double alpha = std::sqrt(5.0);
  CHECK(fr.vectors(0, 0) == doctest::Approx(1 / alpha).epsilon(1e-14));
  CHECK(fr.vectors(0, 1) == doctest::Approx(-1 / alpha).epsilon(1e-14));
  // g(e0, e0) = -1
  RMat g = adm.spacetime_metric();
  CHECK(gram_residual(fr, g) < 1e-12);
}

TEST_CASE("frame gram matrix equals eta for random ADM data") {
  testsupport::Rng rng(numerics::kDefaultSeed);
  for (int trial = 0; trial < 200; ++trial) {
    int m = 3 + static_cast<int>(rng.uniform() * 3) % 3;
    AdmData adm;
    adm.m = m;
    adm.gbar = random_spd(rng, m - 1);
    adm.beta.resize(m - 1);
    for (auto& b : adm.beta) b = rng.uniform(-1, 1);
    RVec bflat = adm.gbar * adm.beta;
    adm.N = std::sqrt(1.0 + dot(adm.beta, bflat));  // N^2 = 1 + |beta|^2
    Frame fr = build_frame(adm);
    CHECK(gram_residual(fr, adm.spacetime_metric()) < 1e-12);
    CHECK(fr.vectors(0, 0) > 0);  // future-pointing
  }
}

TEST_CASE("invalid ADM data is rejected") {
  AdmData adm;
  adm.m = 4;
  adm.N = -1;
  adm.beta = RVec(3, 0.0);
  adm.gbar = RMat::identity(3);
  CHECK_THROWS_AS(build_frame(adm), Error);
  adm.N = 1;
  adm.gbar(0, 0) = -2;  // not positive definite
  CHECK_THROWS_AS(build_frame(adm), Error);
}

TEST_CASE("causal direction classification") {
  CHECK(classify_direction({0.5, 0.0, 0.0}).kind == CausalClass::timelike);
  CHECK(classify_direction({1.0, 0.0, 0.0}).kind == CausalClass::null);
  CHECK(classify_direction({1.0 + 5e-10, 0.0, 0.0}).kind == CausalClass::null);
  CHECK(classify_direction({1.5, 0.0, 0.0}).kind == CausalClass::spacelike_invalid);
}

TEST_CASE("classification is invariant under spatial rotations") {
  testsupport::Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    RVec xi = rng.normal_vec(3);
    double target = rng.uniform(0.2, 1.1);
    double nx = norm2(xi);
    for (auto& v : xi) v *= target / nx;
    RMat rot = testsupport::random_rotation(rng, 3);
    RVec rxi = rot * xi;
    CHECK(classify_direction(xi).kind == classify_direction(rxi).kind);
  }
}

TEST_CASE("minkowski curvature vanishes") {
  auto fam = MetricFamily::minkowski(4);
  auto cd = curvature_package(fam, {0.1, 0.2, -0.3, 0.4}, numerics::Stencil(4, 1e-3));
  CHECK(std::abs(cd.scal) < 1e-10);
  CHECK(norm_fro(cd.ricci) < 1e-10);
  CHECK(norm_fro(cd.einstein) < 1e-10);
  CHECK(norm_fro(cd.second_fundamental) < 1e-10);
}

TEST_CASE("de sitter curvature matches the constant-curvature values") {
  double H = 0.5;
  auto fam = MetricFamily::de_sitter(4, H);
  auto cd = curvature_package(fam, {0.2, 0.1, 0.0, -0.1}, numerics::Stencil(4, 1e-3));
  CHECK(cd.scal == doctest::Approx(12 * H * H).epsilon(1e-7));
  // Ric = 3 H^2 g: frame components 3 H^2 eta
  RMat eta = eta_matrix(4);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      CHECK(cd.ricci(mu, nu) == doctest::Approx(3 * H * H * eta(mu, nu)).epsilon(1e-7));
}

TEST_CASE("flrw second fundamental form is (adot/a) gbar in the frame") {
  double H = 0.4;
  auto fam = MetricFamily::de_sitter(4, H);  // adot/a = H
  auto cd = curvature_package(fam, {0.3, 0.0, 0.0, 0.0}, numerics::Stencil(4, 1e-3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(cd.second_fundamental(i, j) == doctest::Approx(i == j ? H : 0.0).epsilon(1e-8));
  CHECK(cd.mean_curvature == doctest::Approx(H).epsilon(1e-8));
}

TEST_CASE("first bianchi identity and ricci symmetry hold to stencil accuracy") {
  auto fam = MetricFamily::flrw(4, [](double t) { return 1.0 + 0.1 * std::sin(t); });
  auto cd = curvature_package(fam, {0.4, 0.1, 0.2, 0.0}, numerics::Stencil(4, 1e-3));
  double bianchi = 0;
  for (int l = 0; l < 4; ++l)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        for (int k = 0; k < 4; ++k)
          bianchi = std::max(bianchi, std::abs(cd.riem(l, mu, nu, k) + cd.riem(l, nu, k, mu) +
                                               cd.riem(l, k, mu, nu)));
  CHECK(bianchi < 1e-8);
  CHECK(norm_fro(cd.ricci - cd.ricci.transpose()) < 1e-8);
}

TEST_CASE("richardson order of the scalar curvature on de sitter is near 2") {
  double H = 0.5;
  auto fam = MetricFamily::de_sitter(4, H);
  RVec x{0.1, 0.0, 0.0, 0.0};
  double exact = 12 * H * H;
  auto err = [&](double h) {
    return std::abs(curvature_package(fam, x, numerics::Stencil(2, h)).scal - exact);
  };
  double order = numerics::richardson_order(err(8e-3), err(4e-3));
  CHECK(order > 1.7);
  CHECK(order < 2.3);
}

TEST_CASE("contracted bianchi residual of the einstein tensor shrinks at stencil order") {
  auto fam = MetricFamily::flrw(4, [](double t) { return 1.0 + 0.15 * std::sin(0.7 * t); });
  RVec x{0.3, 0.0, 0.0, 0.0};
  auto residual = [&](double h) {
    numerics::Stencil fine(4, 1e-3);
    auto field = [&](const RVec& p) {
      auto cd = curvature_package(fam, p, fine);
      RMat g = fam.metric(p);
      RMat ein(4, 4);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) ein(a, b) = cd.ricci_coord(a, b) - 0.5 * cd.scal * g(a, b);
      return ein;
    };
    return norm2(covariant_divergence(field, fam, x, numerics::Stencil(2, h)));
  };
  double r1 = residual(2e-2), r2 = residual(1e-2);
  CHECK(r1 < 1e-3);
  double order = numerics::richardson_order(r1, r2);
  CHECK(order > 1.5);
  CHECK(order < 2.6);
}

TEST_CASE("degenerate metrics are rejected by the curvature package") {
  MetricFamily bad;
  bad.m = 4;
  bad.name = "degenerate";
  bad.metric = [](const RVec&) { return RMat(4, 4); };  // all zero
  bad.adm = [](const RVec&) {
    AdmData a;
    a.m = 4;
    a.N = 1;
    a.beta = RVec(3, 0.0);
    a.gbar = RMat::identity(3);
    return a;
  };
  CHECK_THROWS_AS(curvature_package(bad, {0, 0, 0, 0}, numerics::Stencil(2, 1e-3)), Error);
  auto fam = MetricFamily::minkowski(4);
  CHECK_THROWS_AS(curvature_package(fam, {0, 0, 0, 0}, numerics::Stencil(2, -1.0)), Error);
}

TEST_CASE("region sampling covers the box deterministically") {
  Region r;
  r.center = {0.0, 1.0};
  r.half_widths = {1.0, 2.0};
  r.samples = {3, 2};
  CHECK(r.total_points() == 6);
  RVec first = r.point(0);
  CHECK(first[0] == doctest::Approx(-1.0));
  CHECK(first[1] == doctest::Approx(-1.0));
  RVec last = r.point(5);
  CHECK(last[0] == doctest::Approx(1.0));
  CHECK(last[1] == doctest::Approx(3.0));
}
