#include "mincomplex/errors.hpp"
#include "mincomplex/minimal.hpp"

#include <catch_amalgamated.hpp>

#include "support.hpp"

#include <algorithm>

using namespace mincomplex;
using test::corpus;
using test::make_fan;
using test::ray;

namespace {

BuildOptions standard(const Fan& fan, ConeOrder order = ConeOrder::canonical) {
  return {Window::standard(fan.ambient_dim()), order};
}

MinimalComplex minimal(const std::string& name) {
  auto fan = corpus(name);
  return build_minimal(fan, standard(*fan));
}

std::vector<int> repeat(int degree, int count) { return std::vector<int>(static_cast<std::size_t>(count), degree); }

}  // namespace

TEST_CASE("the fan with only the origin") {
  auto fan = make_fan(2, {}, {});
  auto k = build_minimal(fan, standard(*fan));
  CHECK(k.complex.support() == std::vector<int>{0});
  CHECK(k.complex.component(0) == FreeGradedModule(0, {-2}));
}

TEST_CASE("projective line") {
  auto k = minimal("p1");
  const Fan& fan = k.complex.fan();
  for (int r : fan.cones_of_dim(1)) {
    CHECK(k.complex.component(r) == FreeGradedModule(1, {-1}));
    const auto& e = k.complex.map(r, 0).entries;
    REQUIRE(e.size() == 1);
    CHECK(e[0][0] == Polynomial::constant(0, 1));
  }
  CHECK(ih_module(k) == std::vector<int>{-1, 1});
}

TEST_CASE("stalks of simplicial cones are one generator in degree -n") {
  for (const auto& name : {"p2", "p1xp1", "p3", "p2_blowup3", "quadrant_two_step", "square_cone_star"}) {
    auto k = minimal(name);
    const Fan& fan = k.complex.fan();
    auto report = stalk_report(k.complex);
    for (int c = 0; c < fan.size(); ++c) {
      INFO(name << " cone " << c);
      CHECK(report.at(c) == std::vector<int>{-fan.ambient_dim()});
    }
  }
}

TEST_CASE("stalks of non-simplicial cones") {
  {
    auto k = minimal("square_cone");
    CHECK(stalk_report(k.complex).at(k.complex.fan().size() - 1) == std::vector<int>{-3, -1});
  }
  {
    auto k = minimal("cube_cone");
    std::vector<int> expected{-4};
    for (int d : repeat(-2, 4)) expected.push_back(d);
    CHECK(stalk_report(k.complex).at(k.complex.fan().size() - 1) == expected);
  }
  {
    auto k = minimal("cube_complete");
    const Fan& fan = k.complex.fan();
    for (int c : fan.cones_of_dim(3)) CHECK(stalk_report(k.complex).at(c) == std::vector<int>{-3, -1});
    for (int c : fan.cones_of_dim(2)) CHECK(stalk_report(k.complex).at(c) == std::vector<int>{-3});
  }
}

TEST_CASE("intersection cohomology generators") {
  CHECK(ih_module(minimal("p2")) == std::vector<int>{-2, 0, 2});
  CHECK(ih_module(minimal("p1xp1")) == std::vector<int>{-2, 0, 0, 2});
  CHECK(ih_module(minimal("p3")) == std::vector<int>{-3, -1, 1, 3});
  // Compact supports on a single cone: the Thom class in degree n.
  CHECK(ih_module(minimal("quadrant")) == std::vector<int>{2});
}

TEST_CASE("ih needs convex support") {
  auto l = make_fan(2, {ray({1, 0}), ray({0, 1}), ray({-1, 0}), ray({0, -1})}, {{0, 1}, {1, 2}, {2, 3}});
  auto k = build_minimal(l, standard(*l));
  CHECK_THROWS_AS(ih_module(k), InputError);
}

TEST_CASE("window exhaustion names the cone") {
  auto fan = corpus("square_cone");
  try {
    build_minimal(fan, {Window{-3, -1}, ConeOrder::canonical});
    FAIL("expected WindowExhausted");
  } catch (const WindowExhausted& e) {
    CHECK(e.cone() == fan->size() - 1);
    CHECK(e.degree() == -1);
  }
}

TEST_CASE("minimality verification") {
  auto k = minimal("quadrant");
  const auto w = k.window;
  CHECK(verify_minimality(k.complex, w).ok());

  SECTION("K + K fails the base clause") {
    auto doubled = direct_sum(k.complex, k.complex);
    auto cert = verify_minimality(doubled, w);
    CHECK_FALSE(cert.base.ok);
    CHECK_FALSE(cert.ok());
  }
  SECTION("an extra free summand fails the mod-m clause at its cone") {
    FanComplex m = k.complex;
    const int tau = m.fan().size() - 1;
    const FreeGradedModule old = m.component(tau);
    const FreeGradedModule bigger = direct_sum(old, FreeGradedModule(2, {0}));
    m.set_component(tau, bigger);
    for (int f : m.fan().cone(tau).facets) {
      const PolyMatrix was = m.map(tau, f);
      PolyMatrix now = PolyMatrix::zero(bigger, was.target, was.restriction);
      for (std::size_t i = 0; i < was.entries.size(); ++i)
        for (std::size_t j = 0; j < was.entries[i].size(); ++j) now.entries[i][j] = was.entries[i][j];
      m.set_map(tau, f, now);
    }
    auto cert = verify_minimality(m, w);
    CHECK(cert.complex.ok);
    CHECK(cert.locally_free_exact.ok);
    CHECK_FALSE(cert.mod_m.ok);
    REQUIRE_FALSE(cert.mod_m.failures.empty());
    CHECK(cert.mod_m.failures.front().find("cone " + std::to_string(tau)) != std::string::npos);
  }
}

TEST_CASE("shifted minimal complexes") {
  SECTION("based at the origin with no shift is the minimal complex") {
    for (const auto& name : {"p2", "square_cone", "quadrant_blowup"}) {
      auto fan = corpus(name);
      auto a = build_minimal(fan, standard(*fan));
      auto b = build_shifted_minimal(fan, 0, 0, standard(*fan));
      CHECK(serialize_complex(a.complex) == serialize_complex(b.complex));
    }
  }
  SECTION("based at a maximal cone") {
    auto fan = corpus("p2");
    const int top = fan->cones_of_dim(2).front();
    for (int k : {-1, 0, 2}) {
      BuildOptions opts{Window{-4, 6}, ConeOrder::canonical};
      auto m = build_shifted_minimal(fan, top, k, opts);
      CHECK(m.complex.support() == std::vector<int>{top});
      CHECK(m.complex.component(top) == FreeGradedModule(2, {-k}));
      CHECK(m.complex.maps().empty());
      CHECK(verify_minimality(m.complex, m.window, top, k).ok());
    }
  }
  SECTION("based at the exceptional ray of the quadrant blowup") {
    auto fan = corpus("quadrant_blowup");
    const int diag = *fan->find_cone(std::vector<RayVector>{ray({1, 1})});
    auto m = build_shifted_minimal(fan, diag, 0, standard(*fan));
    CHECK(m.complex.component(diag) == FreeGradedModule(1, {-1}));
    for (int top : fan->cones_of_dim(2)) CHECK(m.complex.component(top).rank() == 1);
    CHECK(verify_minimality(m.complex, m.window, diag, 0).ok());
  }
  SECTION("a base degree outside the window is an input error") {
    auto fan = corpus("p2");
    CHECK_THROWS_AS(build_shifted_minimal(fan, 1, -20, standard(*fan)), InputError);
  }
}

TEST_CASE("shifted complexes live on the star") {
  for (const auto& name : {"p2_blowup2", "square_cone", "cube_complete"}) {
    auto fan = corpus(name);
    for (int sigma = 1; sigma < fan->size(); ++sigma) {
      auto m = build_shifted_minimal(fan, sigma, 0, standard(*fan));
      auto star = fan->star(sigma);
      for (int c : m.complex.support()) CHECK(std::find(star.begin(), star.end(), c) != star.end());
      CHECK(m.complex.component(sigma).rank() == 1);
    }
  }
}

TEST_CASE("quotient identity for shifted stalks") {
  for (const auto& name : {"p2", "quadrant_blowup", "square_cone", "cube_complete", "p1xp1"}) {
    auto fan = corpus(name);
    for (int sigma = 1; sigma < fan->size(); ++sigma) {
      INFO(name << " cone " << sigma);
      CHECK(quotient_cross_check(fan, sigma, 0, standard(*fan)).ok);
    }
  }
  auto fan = corpus("p2");
  CHECK(quotient_cross_check(fan, 1, 1, {Window{-4, 6}, ConeOrder::canonical}).ok);
}

TEST_CASE("shifted complexes are acyclic off the lowest degree") {
  for (const auto& name : {"p2", "square_cone", "quadrant_blowup"}) {
    auto fan = corpus(name);
    const int n = fan->ambient_dim();
    for (int sigma = 0; sigma < fan->size(); ++sigma) {
      auto m = build_shifted_minimal(fan, sigma, 0, standard(*fan));
      auto coh = cohomology_degreewise(m.complex, m.window, false);
      for (const auto& [key, v] : coh.dimensions)
        if (key.first != -n) CHECK(v == 0);
    }
  }
}

TEST_CASE("restriction of a minimal complex to a subfan is minimal") {
  for (const auto& name : {"p2_blowup3", "cube_complete"}) {
    auto k = minimal(name);
    const Fan& fan = k.complex.fan();
    const auto report = stalk_report(k.complex);
    for (int top : fan.maximal_cones()) {
      auto ids = fan.cone(top).faces;
      auto [sub, back] = fan.subfan(ids);
      auto local = restrict_to_subfan(k.complex, ids);
      CHECK(verify_minimality(local, k.window).ok());
      auto local_report = stalk_report(local);
      for (const auto& [c, degs] : local_report) CHECK(degs == report.at(back[static_cast<std::size_t>(c)]));
    }
  }
}

TEST_CASE("cone order does not change the result") {
  for (const auto& name : {"p2_blowup3", "cube_complete", "square_cone_star"}) {
    auto fan = corpus(name);
    auto a = build_minimal(fan, standard(*fan, ConeOrder::canonical));
    auto b = build_minimal(fan, standard(*fan, ConeOrder::reversed));
    CHECK(stalk_report(a.complex) == stalk_report(b.complex));
    CHECK(cohomology_degreewise(a.complex, a.window).dimensions ==
          cohomology_degreewise(b.complex, b.window).dimensions);
    CHECK(verify_minimality(b.complex, b.window).ok());
  }
}
