#include "mincomplex/minimal.hpp"

#include "mincomplex/errors.hpp"

#include <algorithm>

namespace mincomplex {

std::vector<int> processing_order(const Fan& fan, ConeOrder order) {
  std::vector<int> out;
  for (int d = 0; d <= fan.ambient_dim(); ++d) {
    std::vector<int> level = fan.cones_of_dim(d);
    if (order == ConeOrder::reversed) std::reverse(level.begin(), level.end());
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

void extend_by_cover(FanComplex& m, int tau, const Window& w) {
  const Boundary b = boundary_of(m, tau);
  const GradedSubspaceFamily z = boundary_kernel(m, b, w);
  const FreeCover cover = minimal_free_cover(z, tau);
  if (cover.module.is_zero()) return;
  m.set_component(tau, cover.module);
  const Fan& fan = m.fan();
  for (std::size_t j = 0; j < b.facets.size(); ++j) {
    const int rho = b.facets[j];
    const FreeGradedModule target = m.component(rho);
    if (target.is_zero()) continue;
    std::vector<QVector> images;
    for (const auto& g : cover.generators)
      images.push_back(g.representative.segment(b.ambient.block_offset(j, g.degree), target.dimension(g.degree)));
    PolyMatrix pm = polymatrix_from_images(cover.module, target, m.rings()->restriction(tau, rho), images);
    // The kernel element is the signed total image; store the unsigned map.
    if (fan.incidence_sign(tau, rho) < 0) pm = Rational(-1) * pm;
    m.set_map(tau, rho, std::move(pm));
  }
}

MinimalComplex build_minimal(FanPtr fan, const BuildOptions& options) {
  MinimalComplex out{FanComplex(fan), options.window, 0, 0};
  const int n = fan->ambient_dim();
  out.complex.set_component(0, FreeGradedModule(0, {-n}));
  for (int tau : processing_order(*fan, options.order)) {
    if (tau == 0) continue;
    extend_by_cover(out.complex, tau, options.window);
  }
  return out;
}

MinimalComplex build_shifted_minimal(FanPtr fan, int sigma, int k, const BuildOptions& options) {
  if (sigma < 0 || sigma >= fan->size()) throw InputError("no cone " + std::to_string(sigma) + " in the fan");
  const int n = fan->ambient_dim();
  const int dim = fan->cone(sigma).dim;
  const int base_degree = -(n - dim + k);
  if (!options.window.contains(base_degree))
    throw InputError("window does not contain the base generator degree " + std::to_string(base_degree));
  MinimalComplex out{FanComplex(fan), options.window, sigma, k};
  out.complex.set_component(sigma, FreeGradedModule(dim, {base_degree}));
  const std::vector<int> star = fan->star(sigma);
  for (int tau : processing_order(*fan, options.order)) {
    if (tau == sigma || !std::binary_search(star.begin(), star.end(), tau)) continue;
    extend_by_cover(out.complex, tau, options.window);
  }
  return out;
}

StalkReport stalk_report(const FanComplex& k) {
  StalkReport out;
  for (int c = 0; c < k.fan().size(); ++c) out[c] = k.component(c).generator_degrees;
  return out;
}

Certificate MinimalityCertificate::combined() const {
  Certificate c;
  c.merge(complex, "complex: ");
  c.merge(base, "clause 1: ");
  c.merge(locally_free_exact, "clause 2: ");
  c.merge(mod_m, "clause 3: ");
  return c;
}

MinimalityCertificate verify_minimality(const FanComplex& m, const Window& w, int base, int shift) {
  MinimalityCertificate cert;
  const Fan& fan = m.fan();
  const int n = fan.ambient_dim();
  cert.complex = check_complex(m);

  const int base_dim = fan.cone(base).dim;
  const std::vector<int> expected{-(n - base_dim + shift)};
  if (m.component(base).generator_degrees != expected)
    cert.base.fail("component at cone " + std::to_string(base) + " is not free of rank one in degree " +
                   std::to_string(expected[0]));
  const std::vector<int> star = fan.star(base);
  for (int c : m.support()) {
    if (!std::binary_search(star.begin(), star.end(), c))
      cert.base.fail("nonzero component at cone " + std::to_string(c) + " outside the star of the base");
  }

  cert.locally_free_exact.merge(check_locally_free(m));
  cert.locally_free_exact.merge(check_locally_exact(m, w));

  if (!cert.complex.ok) return cert;
  for (int tau = 0; tau < fan.size(); ++tau) {
    if (tau == base || fan.cone(tau).dim == 0) continue;
    const FreeGradedModule mod = m.component(tau);
    const Boundary b = boundary_of(m, tau);
    const GradedSubspaceFamily z = boundary_kernel(m, b, w);
    for (int d : w.degrees()) {
      std::vector<std::size_t> gens;
      for (std::size_t j = 0; j < mod.generator_degrees.size(); ++j)
        if (mod.generator_degrees[j] == d) gens.push_back(j);
      EchelonBasis<Rational> decomposable(b.ambient.dimension(d));
      if (d - 2 >= w.lo) {
        const QMatrix below = z.piece(d - 2);
        if (below.cols() > 0)
          for (int v = 0; v < b.ambient.acting_vars(); ++v)
            decomposable.insert_columns(multiply(b.ambient.variable_action(v, d - 2), below));
      }
      const Index decomposable_dim = decomposable.dimension();
      if (!gens.empty()) {
        const QMatrix images = component_to_boundary(m, b, tau, d);
        for (std::size_t j : gens) decomposable.insert(images.col(mod.offset(j, d)));
      }
      const Index independent = decomposable.dimension() - decomposable_dim;
      if (independent != static_cast<Index>(gens.size())) {
        cert.mod_m.fail("cone " + std::to_string(tau) + ", degree " + std::to_string(d) +
                        ": generators are not independent modulo the maximal ideal");
        break;
      }
      if (decomposable.dimension() != z.dimension(d)) {
        cert.mod_m.fail("cone " + std::to_string(tau) + ", degree " + std::to_string(d) +
                        ": generators do not span the boundary kernel modulo the maximal ideal");
        break;
      }
    }
  }
  return cert;
}

std::vector<int> ih_module(const MinimalComplex& k) {
  const FanComplex& m = k.complex;
  const int n = m.ambient_dim();
  if (!has_convex_support(m.fan()))
    throw InputError("intersection cohomology needs a complete fan or a fan with convex full-dimensional support");
  CohomologyResult coh = cohomology_degreewise(m, k.window, false);
  for (const auto& [key, dim] : coh.dimensions) {
    if (key.first != -n && dim != 0)
      throw CertificateFailure("cohomology in complex degree " + std::to_string(key.first) + ", internal degree " +
                               std::to_string(key.second) + " is nonzero");
  }
  FreeCover cover = top_cohomology_cover(m, k.window);
  if (!cover.certified_free) throw CertificateFailure("top cohomology is not free on the window");
  return cover.module.generator_degrees;
}

Certificate quotient_cross_check(FanPtr fan, int sigma, int k, const BuildOptions& options) {
  Certificate cert;
  const MinimalComplex shifted = build_shifted_minimal(fan, sigma, k, options);
  QuotientFan q = quotient_fan(*fan, sigma);
  auto qfan = std::make_shared<const Fan>(q.fan);
  const int dim = fan->cone(sigma).dim;
  // K of the quotient shifted by k has its base generator at -(n - dim + k).
  const MinimalComplex quotient = build_shifted_minimal(qfan, 0, k, options);
  for (const auto& [tau, image] : q.correspondence) {
    auto a = shifted.complex.component(tau).generator_degrees;
    auto b = quotient.complex.component(image).generator_degrees;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b)
      cert.fail("cone " + std::to_string(tau) + " (quotient cone " + std::to_string(image) +
                ") has different stalk generators");
    if (fan->cone(tau).dim != qfan->cone(image).dim + dim)
      cert.fail("cone " + std::to_string(tau) + " does not shift complex degree by dim sigma");
  }
  return cert;
}

}  // namespace mincomplex
