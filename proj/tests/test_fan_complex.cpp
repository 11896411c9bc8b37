#include "mincomplex/errors.hpp"
#include "mincomplex/fan_complex.hpp"
#include "mincomplex/minimal.hpp"

#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace mincomplex;
using test::corpus;
using test::ray;

namespace {

MinimalComplex minimal(const std::string& name) {
  auto fan = corpus(name);
  return build_minimal(fan, {Window::standard(fan->ambient_dim())});
}

// Copy of m without the component at `drop` and the maps touching it.
FanComplex without(const FanComplex& m, int drop) {
  FanComplex out(m.rings());
  for (const auto& [c, mod] : m.components())
    if (c != drop) out.set_component(c, mod);
  for (const auto& [key, pm] : m.maps())
    if (key.first != drop && key.second != drop) out.set_map(key.first, key.second, pm);
  return out;
}

}  // namespace

TEST_CASE("zero complex") {
  FanComplex m(corpus("p2"));
  CHECK(m.is_zero());
  CHECK(check_complex(m).ok);
  CHECK(check_locally_free(m).ok);
  auto coh = cohomology_degreewise(m, Window::standard(2));
  for (const auto& [key, v] : coh.dimensions) CHECK(v == 0);
}

TEST_CASE("hand-built complex on the projective line") {
  auto fan = corpus("p1");
  FanComplex m(fan);
  m.set_component(0, FreeGradedModule(0, {-1}));
  for (int r : fan->cones_of_dim(1)) {
    m.set_component(r, FreeGradedModule(1, {-1}));
    auto f = PolyMatrix::zero(m.component(r), m.component(0), m.rings()->restriction(r, 0));
    f.entries[0][0] = Polynomial::constant(0, 1);
    m.set_map(r, 0, f);
  }
  CHECK(check_complex(m).ok);
  auto coh = cohomology_degreewise(m, {-1, 5});
  CHECK(coh.dimensions.at({-1, -1}) == 1);
  CHECK(coh.dimensions.at({-1, 1}) == 2);
  CHECK(coh.dimensions.at({-1, 3}) == 2);
  CHECK(coh.dimensions.at({0, -1}) == 0);
  REQUIRE(coh.top_generators);
  CHECK(*coh.top_generators == std::vector<int>{-1, 1});
}

TEST_CASE("a flipped facet map breaks d^2 = 0") {
  auto k = minimal("quadrant").complex;
  CHECK(check_complex(k).ok);
  const int top = k.fan().size() - 1;
  const int f = k.fan().cone(top).facets.front();
  k.set_map(top, f, Rational(-1) * k.map(top, f));
  auto cert = check_complex(k);
  CHECK_FALSE(cert.ok);
  REQUIRE_FALSE(cert.failures.empty());
  CHECK(cert.failures.front().find("d^2") != std::string::npos);
}

TEST_CASE("inhomogeneous entries are rejected") {
  auto k = minimal("p1").complex;
  const int r = k.fan().cones_of_dim(1).front();
  auto f = k.map(r, 0);
  // A constant entry out of a generator in degree 1 into degree -1.
  f.source = FreeGradedModule(1, {1});
  k.set_component(r, f.source);
  k.set_map(r, 0, f);
  CHECK_FALSE(check_complex(k).ok);
}

TEST_CASE("restriction to subfans") {
  auto k = minimal("p2").complex;
  std::vector<int> all;
  for (int c = 0; c < k.fan().size(); ++c) all.push_back(c);
  CHECK(serialize_complex(restrict_to_subfan(k, all)) == serialize_complex(k));

  const int top = k.fan().cones_of_dim(2).front();
  auto local = restrict_to_subfan(k, k.fan().cone(top).faces);
  CHECK(local.fan().size() == 4);
  CHECK(verify_minimality(local, Window::standard(2)).ok());

  auto at_o = restrict_to_subfan(k, {0});
  CHECK(at_o.support() == std::vector<int>{0});
  CHECK_THROWS_AS(restrict_to_subfan(k, {top}), InputError);
}

TEST_CASE("restriction commutes with support") {
  auto k = minimal("p2_blowup1").complex;
  const Fan& fan = k.fan();
  for (int top : fan.cones_of_dim(2)) {
    auto ids = fan.cone(top).faces;
    auto [sub, back] = fan.subfan(ids);
    auto r = restrict_to_subfan(k, ids);
    std::vector<int> mapped;
    for (int c : r.support()) mapped.push_back(back[static_cast<std::size_t>(c)]);
    std::vector<int> expected;
    for (int c : k.support())
      if (std::find(ids.begin(), ids.end(), c) != ids.end()) expected.push_back(c);
    std::sort(mapped.begin(), mapped.end());
    CHECK(mapped == expected);
  }
}

TEST_CASE("local exactness") {
  auto k = minimal("quadrant").complex;
  const auto w = Window::standard(2);
  CHECK(check_locally_exact(k, w).ok);
  const int top = k.fan().size() - 1;
  auto missing = without(k, top);
  CHECK(check_complex(missing).ok);
  auto cert = check_locally_exact(missing, w);
  CHECK_FALSE(cert.ok);
  CHECK(direct_sum(k, k).components().size() == k.components().size());
  CHECK(check_locally_exact(direct_sum(k, k), w).ok);
  CHECK(check_complex(direct_sum(k, k)).ok);
}

TEST_CASE("quadrant cohomology") {
  auto k = minimal("quadrant").complex;
  auto coh = cohomology_degreewise(k, Window::standard(2));
  for (const auto& [key, v] : coh.dimensions)
    if (key.first != -2) CHECK(v == 0);
  // Compact supports: H^{-2} is the ideal of functions vanishing on both
  // rays, generated by x*y in degree 2.
  CHECK(coh.dimensions.at({-2, -2}) == 0);
  CHECK(coh.dimensions.at({-2, 0}) == 0);
  CHECK(coh.dimensions.at({-2, 2}) == 1);
  CHECK(coh.dimensions.at({-2, 4}) == 2);
  REQUIRE(coh.top_generators);
  CHECK(*coh.top_generators == std::vector<int>{2});
}

TEST_CASE("euler characteristic per internal degree") {
  for (const auto& name : {"p1", "p2", "quadrant_blowup", "square_cone"}) {
    auto k = minimal(name).complex;
    const int n = k.ambient_dim();
    const auto w = Window::standard(n);
    auto coh = cohomology_degreewise(k, w, false);
    for (int d : w.degrees()) {
      long terms = 0, cohom = 0;
      for (int p = 0; p <= n; ++p) {
        const long sign = p % 2 ? -1 : 1;
        terms += sign * k.term_dimension(p, d);
        cohom += sign * coh.dimensions.at({-p, d});
      }
      CHECK(terms == cohom);
    }
  }
}

TEST_CASE("serialization round trip") {
  for (const auto& name : {"p1", "p2", "square_cone", "quadrant_two_step"}) {
    auto k = minimal(name).complex;
    const std::string text = serialize_complex(k, "minimal");
    auto parsed = parse_complex(text);
    CHECK(parsed.kind == "minimal");
    CHECK(serialize_complex(parsed.complex, "minimal") == text);
    CHECK(check_complex(parsed.complex).ok);
  }
}

TEST_CASE("serialized complexes are validated") {
  auto k = minimal("p1").complex;
  std::string text = serialize_complex(k);
  std::string bad_sign = text;
  bad_sign.replace(bad_sign.find("sign 1"), 6, "sign -1");
  CHECK_THROWS_AS(parse_complex(bad_sign), InputError);
  std::string no_end = text.substr(0, text.rfind("end"));
  CHECK_THROWS_AS(parse_complex(no_end), InputError);
  std::string bad_pair = text;
  bad_pair.replace(bad_pair.find("map 1 0"), 7, "map 2 1");
  CHECK_THROWS_AS(parse_complex(bad_pair), InputError);
  CHECK_NOTHROW(parse_complex(text + "# trailing comment\n"));
}
