#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "felab/norms.hpp"
#include "felab/solutions.hpp"

using namespace felab;

namespace {

std::shared_ptr<const Mesh> tri_mesh(int n) {
  return std::make_shared<Mesh>(build_structured(n, CellKind::Triangle));
}
std::shared_ptr<const Mesh> quad_mesh(int n) {
  return std::make_shared<Mesh>(build_structured(n, CellKind::Quadrilateral));
}

const PolynomialField kZero{Poly2{}};

}  // namespace

TEST_CASE("interpolants of degree r-1 polynomials have zero error in all specs") {
  Rng rng(3);
  for (Family fam : {Family::P1, Family::CR, Family::Q1ROT, Family::MORLEY}) {
    const CellKind kind = reference_element(fam).cell_kind;
    const auto mesh = kind == CellKind::Triangle ? tri_mesh(3) : quad_mesh(3);
    const FESpace space(mesh, fam, 0);
    Poly2 p;
    for (int ex = 0; ex < space.element().order; ++ex)
      for (int ey = 0; ex + ey < space.element().order; ++ey)
        p += Poly2::monomial(ex, ey, rng.symmetric());
    const PolynomialField u(p);
    const FEFunction v = interpolate(space, u);
    for (int j = 0; j <= std::min(2, space.element().order - 1); ++j)
      for (NormP pe : {NormP::One, NormP::Two, NormP::Infinity}) {
        CHECK(broken_error(space, u, &v, NormSpec::norm(j, pe)) < 1e-10);
        CHECK(broken_error(space, u, &v, NormSpec::semi(j, pe)) < 1e-10);
      }
  }
}

TEST_CASE("L2 norm of sinsin is exactly 1/2") {
  const ManufacturedSolution& u = manufactured("sinsin");
  const FESpace space(tri_mesh(8), Family::P1, 0);
  const FEFunction zero = FEFunction::zero(space);
  CHECK(broken_error(space, u, &zero, NormSpec::norm(0, NormP::Two)) ==
        doctest::Approx(0.5).epsilon(1e-8));
  CHECK(broken_error(space, u, nullptr, NormSpec::norm(0, NormP::Two)) ==
        doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("triangle inequality and absolute homogeneity") {
  const FESpace space(tri_mesh(4), Family::P2, 0);
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> a(space.num_dofs()), b(space.num_dofs()), sum(space.num_dofs());
    for (int i = 0; i < space.num_dofs(); ++i) {
      a[i] = rng.symmetric();
      b[i] = rng.symmetric();
      sum[i] = a[i] + b[i];
    }
    const FEFunction fa{&space, a}, fb{&space, b}, fsum{&space, sum};
    for (NormP p : {NormP::One, NormP::Two, NormP::Infinity}) {
      const NormSpec spec = NormSpec::norm(1, p);
      const double na = broken_error(space, kZero, &fa, spec);
      const double nb = broken_error(space, kZero, &fb, spec);
      const double ns = broken_error(space, kZero, &fsum, spec);
      CHECK(ns <= na + nb + 1e-10);
    }
    std::vector<double> scaled(space.num_dofs());
    const double s = -2.5;
    for (int i = 0; i < space.num_dofs(); ++i) scaled[i] = s * a[i];
    const FEFunction fs{&space, scaled};
    for (NormP p : {NormP::One, NormP::Two, NormP::Infinity}) {
      const NormSpec spec = NormSpec::norm(1, p);
      CHECK(broken_error(space, kZero, &fs, spec) ==
            doctest::Approx(std::abs(s) * broken_error(space, kZero, &fa, spec)).epsilon(1e-10));
    }
  }
}

TEST_CASE("semi-norm never exceeds the full norm") {
  const ManufacturedSolution& u = manufactured("polyplus");
  const FESpace space(tri_mesh(4), Family::P2, 0);
  const FEFunction v = interpolate(space, u);
  for (int j = 0; j <= 2; ++j)
    for (NormP p : {NormP::One, NormP::Two, NormP::Infinity})
      CHECK(broken_error(space, u, &v, NormSpec::semi(j, p)) <=
            broken_error(space, u, &v, NormSpec::norm(j, p)) + 1e-14);
}

TEST_CASE("sup-norm lattice estimate dominates a sparse sample") {
  const ManufacturedSolution& u = manufactured("sinsin");
  const FESpace space(tri_mesh(4), Family::P1, 0);
  const FEFunction v = interpolate(space, u);
  const double reported = broken_error(space, u, &v, NormSpec::semi(0, NormP::Infinity));
  double sparse = 0.0;
  for (int c = 0; c < space.mesh().num_cells(); ++c)
    for (const Vec2 ref : {Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}, Vec2{1.0 / 3, 1.0 / 3}}) {
      const Vec2 x = space.mesh().map_point(c, ref);
      sparse = std::max(sparse, std::abs(u.value(x) - v.eval(c, ref, {0, 0})));
    }
  CHECK(reported >= sparse - 1e-15);
  CHECK(reported > 0.0);
}

TEST_CASE("subdomain monotonicity: smaller regions give smaller errors") {
  const ManufacturedSolution& u = manufactured("sinsin");
  const FESpace space(tri_mesh(8), Family::P1, 0);
  const FEFunction v = interpolate(space, u);
  const Region g1 = Region::box(0.25, 0.25, 0.75, 0.75);
  const Region g2 = Region::box(0.125, 0.125, 0.875, 0.875);
  for (NormP p : {NormP::One, NormP::Two}) {
    const double e1 = broken_error(space, u, &v, NormSpec::norm(1, p, g1));
    const double e2 = broken_error(space, u, &v, NormSpec::norm(1, p, g2));
    const double e3 = broken_error(space, u, &v, NormSpec::norm(1, p));
    CHECK(e1 <= e2 + 1e-14);
    CHECK(e2 <= e3 + 1e-14);
    CHECK(e1 > 0.0);
  }
}

TEST_CASE("cells crossing the region boundary are excluded") {
  const FESpace space(tri_mesh(3), Family::P1, 0);
  // G = [0, 0.5]^2 with grid lines at thirds: every cell touching the strip
  // between 1/3 and 0.5 straddles G, so only cells inside [0,1/3]^2 count.
  const Region g = Region::box(0.0, 0.0, 0.5, 0.5);
  int counted = 0;
  for (int c = 0; c < space.mesh().num_cells(); ++c)
    counted += g.contains_cell(space.mesh(), c) ? 1 : 0;
  CHECK(counted == 2);
}

TEST_CASE("weighted sum with q = p reduces to h^(j-r) times the broken norm") {
  const ManufacturedSolution& u = manufactured("sinsin");
  for (auto kind : {CellKind::Triangle, CellKind::Quadrilateral}) {
    // Uniform h_K: every structured cell has the same diameter.
    const auto mesh = std::make_shared<Mesh>(build_structured(4, kind));
    const Family fam = kind == CellKind::Triangle ? Family::P1 : Family::Q1;
    const FESpace space(mesh, fam, 0);
    const FEFunction v = interpolate(space, u);
    const int r = space.element().order;
    for (int j : {0, 1}) {
      const double w = weighted_error(space, u, v, j, r, NormP::Two, NormP::Two);
      const double h = quality(*mesh).h;
      const double plain = broken_error(space, u, &v, NormSpec::norm(j, NormP::Two));
      CHECK(w == doctest::Approx(std::pow(h, j - r) * plain).epsilon(1e-12));
    }
  }
}

TEST_CASE("weighted sum vanishes when u lies in the space") {
  const FESpace space(tri_mesh(4), Family::CR, 0);
  const PolynomialField u(Poly2::monomial(1, 0) + Poly2::monomial(0, 1, 2.0));
  const FEFunction v = interpolate(space, u);
  CHECK(weighted_error(space, u, v, 1, 2, NormP::Two, NormP::Two) < 1e-10);
  CHECK(weighted_error(space, u, v, 0, 2, NormP::Two, NormP::Infinity) < 1e-10);
}

TEST_CASE("weighted sum rejects p = infinity") {
  const FESpace space(tri_mesh(2), Family::P1, 0);
  const ManufacturedSolution& u = manufactured("sinsin");
  const FEFunction v = interpolate(space, u);
  CHECK_THROWS_AS(weighted_error(space, u, v, 0, 2, NormP::Infinity, NormP::Two),
                  std::invalid_argument);
}

TEST_CASE("sharpness ratio basics") {
  CHECK(sharpness_ratio(0.25, 0.5, 2, 0) == doctest::Approx(1.0));
  // If E quarters when h halves and r - j = 2, the ratio is constant.
  CHECK(sharpness_ratio(0.04, 0.1, 2, 0) == doctest::Approx(sharpness_ratio(0.01, 0.05, 2, 0)));
  CHECK_THROWS_AS(sharpness_ratio(1.0, 0.0, 2, 0), std::invalid_argument);
}
