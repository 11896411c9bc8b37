// Randomized checks on small complete plane fans and their star subdivisions.

#include "mincomplex/decompose.hpp"
#include "mincomplex/minimal.hpp"
#include "mincomplex/oracles.hpp"
#include "mincomplex/pushforward.hpp"

#include <catch_amalgamated.hpp>

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

using namespace mincomplex;
using test::make_fan;
using test::ray;

namespace {

double angle(const RayVector& r) { return std::atan2(static_cast<double>(r(1)), static_cast<double>(r(0))); }

// Primitive rays sorted by angle whose consecutive gaps are all below pi.
std::vector<RayVector> random_rays(std::mt19937& rng) {
  std::uniform_int_distribution<int> coord(-3, 3);
  std::uniform_int_distribution<int> count(3, 7);
  for (;;) {
    std::vector<RayVector> rays;
    const int want = count(rng);
    for (int tries = 0; tries < 50 && static_cast<int>(rays.size()) < want; ++tries) {
      RayVector v = ray({coord(rng), coord(rng)});
      if (v.isZero()) continue;
      v = primitive(v);
      if (std::find(rays.begin(), rays.end(), v) == rays.end()) rays.push_back(v);
    }
    std::sort(rays.begin(), rays.end(), [](const RayVector& a, const RayVector& b) { return angle(a) < angle(b); });
    bool ok = rays.size() >= 3;
    for (std::size_t i = 0; ok && i < rays.size(); ++i) {
      double gap = angle(rays[(i + 1) % rays.size()]) - angle(rays[i]);
      if (gap <= 0) gap += 2 * std::numbers::pi;
      ok = gap < std::numbers::pi - 1e-9;
    }
    if (ok) return rays;
  }
}

std::string describe(const std::vector<RayVector>& rays) {
  std::string out;
  for (const auto& r : rays) out += "(" + std::to_string(r(0)) + "," + std::to_string(r(1)) + ") ";
  return out;
}

FanPtr cyclic_fan(const std::vector<RayVector>& rays) {
  std::vector<std::vector<int>> cones;
  const int m = static_cast<int>(rays.size());
  for (int i = 0; i < m; ++i) cones.push_back({i, (i + 1) % m});
  return make_fan(2, rays, cones);
}

}  // namespace

TEST_CASE("random complete plane fans") {
  std::mt19937 rng(20240611);
  for (int round = 0; round < 12; ++round) {
    auto rays = random_rays(rng);
    auto fan = cyclic_fan(rays);
    INFO("round " << round << ": " << describe(rays));
    REQUIRE(is_complete(*fan));
    const auto w = Window::standard(2);
    auto k = build_minimal(fan, {w, ConeOrder::canonical});

    CHECK(verify_minimality(k.complex, w).ok());
    for (const auto& [c, degs] : stalk_report(k.complex)) CHECK(degs == std::vector<int>{-2});
    for (const auto& [key, v] : cohomology_degreewise(k.complex, w, false).dimensions)
      if (key.first != -2) CHECK(v == 0);
    CHECK(ih_module(k) == degrees_from_coefficients(h_vector(*fan), 2));

    auto rev = build_minimal(fan, {w, ConeOrder::reversed});
    CHECK(stalk_report(rev.complex) == stalk_report(k.complex));
  }
}

TEST_CASE("random star subdivisions of plane fans") {
  std::mt19937 rng(777);
  for (int round = 0; round < 8; ++round) {
    auto rays = random_rays(rng);
    auto coarse = cyclic_fan(rays);
    const std::size_t i = std::uniform_int_distribution<std::size_t>(0, rays.size() - 1)(rng);
    const RayVector& a = rays[i];
    const RayVector& b = rays[(i + 1) % rays.size()];
    const RayVector mid = primitive(RayVector(a + b));
    auto fine_rays = rays;
    fine_rays.insert(fine_rays.begin() + static_cast<std::ptrdiff_t>(i) + 1, mid);
    auto fine = cyclic_fan(fine_rays);
    INFO("round " << round << ": " << describe(fine_rays));

    auto map = subdivision_map(fine, coarse);
    const auto w = Window::standard(2);
    auto k = build_minimal(fine, {w, ConeOrder::canonical});
    auto p = pushforward(map, k.complex, w);
    auto cert = verify_pushforward(p);
    CHECK(cert.locally_exact.ok);
    CHECK(cert.locally_free.ok);
    CHECK(cert.quasi_isomorphism.ok);
    CHECK(cert.subcomplex.ok);

    // The fiber over the split cone is a projective line.
    const int sigma = test::cone_of(*coarse, {a, b});
    auto rep = decomposition_theorem_report(map, w);
    CHECK(rep.ok());
    CHECK(rep.summands == std::vector<Summand>{{0, 0, 1}, {sigma, 0, 1}});
    CHECK(normalize_summands(*coarse, iterated_peel(p.complex, w).summands) == rep.summands);
  }
}
