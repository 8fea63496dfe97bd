#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/cone_quadrature.hpp"
#include "oracles/random_cones.hpp"
#include "polyscat/conelab.hpp"

using namespace polyscat;

namespace {

double rel_diff(Complex a, Complex b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

CGOVector scaled_test_rho(const Cone& cone) {
  if (cone.dim() == 2) return interior_rho(cone);
  CGOVector probe = choose_rho(cone, 1e-3);
  return choose_rho(cone, 0.4 * probe.z_margin);
}

Cone square_cone() {
  // Base square of half-diagonal 1.4 at height 1; wide enough that the
  // C' piece is insensitive to eps while C1 still blows up.
  std::vector<Vec> gens;
  for (double phi : {M_PI / 4, 3 * M_PI / 4, 5 * M_PI / 4, 7 * M_PI / 4})
    gens.push_back(Vec(1.4 * std::cos(phi), 1.4 * std::sin(phi), 1.0));
  return Cone::from_generators(Vec(0, 0, 0), gens);
}

}  // namespace

TEST_CASE("2D quadrant: product of two 1D Laplace integrals gives 1/2") {
  // rho = (-1+i, -1-i): int_0^inf e^{(-1+i)x}dx * int_0^inf e^{(-1-i)y}dy
  //   = 1/(1-i) * 1/(1+i) = 1/2, and rho.rho = 0.
  CVec rho(Complex(-1, 1), Complex(-1, -1));
  CHECK(std::abs(rho.dot(rho)) < 1e-15);
  Complex t = simplex_cone_transform({Vec(1, 0), Vec(0, 1)}, rho);
  CHECK(rel_diff(t, Complex(0.5, 0)) < 1e-14);

  Cone quadrant = Cone::from_generators(Vec(0, 0), {Vec(1, 0), Vec(0, 1)});
  CHECK(rel_diff(fan_transform(quadrant, rho), Complex(0.5, 0)) < 1e-14);
}

TEST_CASE("3D octant closed form") {
  // Product of 1D integrals: 1/((1 - i sqrt(1.5))(1 + i sqrt(1.5))(1)) = 0.4.
  double b = std::sqrt(1.5);
  CVec rho(Complex(-1, b), Complex(-1, -b), Complex(-1, 0));
  CHECK(std::abs(rho.dot(rho)) < 1e-14);
  Complex t =
      simplex_cone_transform({Vec(1, 0, 0), Vec(0, 1, 0), Vec(0, 0, 1)}, rho);
  CHECK(rel_diff(t, Complex(0.4, 0)) < 1e-14);
}

TEST_CASE("non-convergent frequency is rejected") {
  CVec rho(Complex(1, 1), Complex(-1, -1));  // Re(-rho.e1) < 0
  CHECK_THROWS_AS(simplex_cone_transform({Vec(1, 0), Vec(0, 1)}, rho),
                  NonConvergent);
}

TEST_CASE("homogeneity: transform scales as s^{-n}") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Cone cone = trial % 2 ? oracle::random_cone_2d(rng)
                          : oracle::random_cone_3d(rng);
    CGOVector rho = scaled_test_rho(cone);
    double n = cone.dim();
    Complex base = fan_transform(cone, rho.rho);
    for (double s : {0.5, 2.0, 7.0, 256.0}) {
      Complex scaled = fan_transform(cone, rho.rho * s);
      CHECK(rel_diff(scaled, base * std::pow(s, -n)) < 1e-12);
    }
  }
}

TEST_CASE("fan transform matches adaptive quadrature oracle") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    Cone cone = trial % 2 ? oracle::random_cone_2d(rng)
                          : oracle::random_cone_3d(rng);
    CGOVector rho = interior_rho(cone);
    Complex fan = fan_transform(cone, rho.rho);
    Complex quad = oracle::cone_transform_quadrature(cone, rho.rho, 1e-10);
    CHECK(rel_diff(fan, quad) < 1e-8);
  }
}

TEST_CASE("quadrature oracle also validates the anisotropic frequencies") {
  Cone cone = square_cone();
  for (double eps : {0.2, 0.1}) {
    CGOVector rho = choose_rho(cone, eps);
    Complex fan = fan_transform(cone, rho.rho);
    Complex quad = oracle::cone_transform_quadrature(cone, rho.rho, 1e-10);
    CHECK(rel_diff(fan, quad) < 1e-8);
  }
}

TEST_CASE("fan-root invariance") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    Cone cone = oracle::random_cone_3d(rng);
    CGOVector rho = scaled_test_rho(cone);
    Complex base = fan_transform(cone, rho.rho);
    for (int root = 1; root < static_cast<int>(cone.generators().size()); ++root)
      CHECK(rel_diff(fan_transform(cone.rerooted(root), rho.rho), base) < 1e-12);
  }
}

TEST_CASE("rotation equivariance") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0, 2 * M_PI);
  for (int trial = 0; trial < 8; ++trial) {
    Cone cone = oracle::random_cone_3d(rng);
    CGOVector rho = scaled_test_rho(cone);
    // Random rotation from an axis-angle pair.
    Vec ax = oracle::random_unit(rng, 3);
    double ang = u(rng);
    auto rot = [&](const Vec& v) {
      Vec par = ax * ax.dot(v);
      Vec perp = v - par;
      Vec cr = ax.cross(v);
      return par + perp * std::cos(ang) + cr * std::sin(ang);
    };
    std::vector<Vec> rgens;
    for (const auto& g : cone.generators()) rgens.push_back(rot(g));
    Cone rcone = Cone::from_generators(Vec(0, 0, 0), rgens);
    CVec rrho = CVec::from_parts(rot(rho.rho.real_part()), rot(rho.rho.imag_part()));
    CHECK(rel_diff(fan_transform(rcone, rrho), fan_transform(cone, rho.rho)) <
          1e-12);
  }
}

TEST_CASE("split transform: parts sum to the whole") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    Cone cone = oracle::random_cone_3d(rng);
    if (cone.generators().size() < 4) continue;  // simplex: rest is empty
    CGOVector rho = scaled_test_rho(cone);
    SplitTransform split = split_transform(cone, rho.rho);
    CHECK(rel_diff(split.c1_part + split.rest_part,
                   fan_transform(cone, rho.rho)) < 1e-12);
  }
}

TEST_CASE("choose_rho on the octant reproduces the worked construction") {
  Cone octant = Cone::from_generators(
      Vec(0, 0, 0), {Vec(1, 0, 0), Vec(0, 1, 0), Vec(0, 0, 1)});
  // Root the fan at e1.
  int root = 0;
  for (size_t i = 0; i < octant.generators().size(); ++i)
    if (distance(octant.generators()[i], Vec(1, 0, 0)) < 1e-12)
      root = static_cast<int>(i);
  Cone cone = octant.rerooted(root);

  double eps = 0.25;
  CGOVector rho = choose_rho(cone, eps);
  CHECK(distance(rho.w, Vec(1, 0, 0)) < 1e-12);
  double is = 1.0 / std::sqrt(2.0);
  CHECK(distance(rho.z, Vec(0, is, is)) < 1e-12);
  CHECK(std::abs(std::abs(rho.i_dir[1]) - is) < 1e-12);
  CHECK(std::abs(std::abs(rho.i_dir[2]) - is) < 1e-12);
  CHECK(std::abs(rho.i_dir[0]) < 1e-12);

  // rho.w1 = -eps/|z + eps w| and isotropy rho.rho = 0.
  Complex rw = rho.rho.dot(Vec(1, 0, 0));
  CHECK(std::abs(rw - Complex(-eps / std::sqrt(1 + eps * eps), 0)) < 1e-14);
  CHECK(std::abs(rho.rho.dot(rho.rho)) < 1e-14);
  CHECK(rho.z_margin == doctest::Approx(is));
}

TEST_CASE("shrinking eps increases the transform modulus") {
  Cone octant = Cone::from_generators(
      Vec(0, 0, 0), {Vec(1, 0, 0), Vec(0, 1, 0), Vec(0, 0, 1)});
  for (const Cone& cone : {octant, square_cone()}) {
    double prev = 0;
    for (double eps : {0.2, 0.1, 0.05, 0.025}) {
      double mag = std::abs(fan_transform(cone, choose_rho(cone, eps).rho));
      CHECK(mag > prev);
      prev = mag;
    }
  }
}

TEST_CASE("certify: 2D quadrant has s^2 |T| = 1/2 for all s") {
  Cone quadrant = Cone::from_generators(Vec(0, 0), {Vec(1, 0), Vec(0, 1)});
  CGOVector worked;  // the rho of the closed-form example
  worked.rho = CVec(Complex(-1, 1), Complex(-1, -1));
  auto report = certify_nonvanishing(quadrant, worked, {1, 2, 4, 64, 256});
  for (const auto& row : report.rows)
    CHECK(row.scaled_abs == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(report.min_scaled == doctest::Approx(0.5).epsilon(1e-12));

  // Built-in 2D interior rule: still exactly constant in s (value depends
  // on the rule normalization, the sweep guards implementation error).
  auto builtin = certify_nonvanishing(quadrant, std::vector<double>{},
                                      {1, 2, 4, 64, 256});
  for (const auto& row : builtin.rows)
    CHECK(row.scaled_abs == doctest::Approx(builtin.rows[0].scaled_abs)
                                .epsilon(1e-12));
}

TEST_CASE("certify: square cone splits into growing C1 and stable rest") {
  Cone cone = square_cone();
  auto report =
      certify_nonvanishing(cone, {0.2, 0.1, 0.05, 0.025}, {1.0});
  REQUIRE(report.rows.size() == 4);
  for (size_t i = 0; i + 1 < report.rows.size(); ++i) {
    CHECK(report.rows[i + 1].c1_abs >= 1.8 * report.rows[i].c1_abs);
    CHECK(std::abs(report.rows[i + 1].rest_abs - report.rows[i].rest_abs) <=
          0.1 * report.rows[i].rest_abs);
  }
  CHECK(report.min_scaled > 0);

  // Homogeneity certificate across a wide scale sweep at fixed eps.
  auto sweep = certify_nonvanishing(cone, {0.1}, {1, 4, 16, 64, 256});
  double first = sweep.rows.front().scaled_abs;
  for (const auto& row : sweep.rows)
    CHECK(std::abs(row.scaled_abs - first) < 1e-10 * first);
}

TEST_CASE("interior rho certificate in 2D") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 10; ++trial) {
    Cone cone = oracle::random_cone_2d(rng);
    CGOVector rho = interior_rho(cone);
    CHECK(std::abs(rho.rho.dot(rho.rho)) < 1e-14);
    for (const auto& w : cone.generators())
      CHECK((-rho.rho.dot(w)).real() > 0);
  }
}
