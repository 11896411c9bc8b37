#include "mincomplex/fan_complex.hpp"

#include "mincomplex/errors.hpp"

#include <algorithm>
#include <set>

namespace mincomplex {

FreeGradedModule FanComplex::component(int cone) const {
  auto it = components_.find(cone);
  if (it != components_.end()) return it->second;
  return FreeGradedModule(rings_->ring(cone).nvars(), {});
}

void FanComplex::set_component(int cone, FreeGradedModule m) {
  if (m.nvars != rings_->ring(cone).nvars()) throw std::invalid_argument("component over the wrong ring");
  if (m.is_zero()) {
    components_.erase(cone);
    return;
  }
  components_[cone] = std::move(m);
}

PolyMatrix FanComplex::map(int sigma, int tau) const {
  auto it = maps_.find({sigma, tau});
  if (it != maps_.end()) return it->second;
  return PolyMatrix::zero(component(sigma), component(tau), rings_->restriction(sigma, tau));
}

void FanComplex::set_map(int sigma, int tau, PolyMatrix m) {
  if (!fan().is_facet(tau, sigma)) throw std::invalid_argument("maps are only stored for facet pairs");
  if (m.is_zero()) {
    maps_.erase({sigma, tau});
    return;
  }
  maps_[{sigma, tau}] = std::move(m);
}

std::vector<int> FanComplex::support() const {
  std::vector<int> out;
  for (const auto& [c, m] : components_)
    if (!m.is_zero()) out.push_back(c);
  return out;
}

QMatrix FanComplex::differential_block(int sigma, int tau, int d) const {
  auto it = maps_.find({sigma, tau});
  if (it == maps_.end()) return QMatrix::Zero(component(tau).dimension(d), component(sigma).dimension(d));
  QMatrix block = it->second.at_degree(d);
  if (fan().incidence_sign(sigma, tau) < 0) block = -block;
  return block;
}

Index FanComplex::term_dimension(int p, int d) const {
  Index total = 0;
  for (const auto& [c, m] : components_)
    if (fan().cone(c).dim == p) total += m.dimension(d);
  return total;
}

Index FanComplex::term_offset(int sigma, int d) const {
  const int p = fan().cone(sigma).dim;
  Index total = 0;
  for (const auto& [c, m] : components_) {
    if (c >= sigma) break;
    if (fan().cone(c).dim == p) total += m.dimension(d);
  }
  return total;
}

QMatrix FanComplex::total_differential(int p, int d) const {
  QMatrix out = QMatrix::Zero(p >= 1 ? term_dimension(p - 1, d) : 0, term_dimension(p, d));
  if (p < 1) return out;
  for (const auto& [key, pm] : maps_) {
    const auto [sigma, tau] = key;
    if (fan().cone(sigma).dim != p) continue;
    const Index rows = component(tau).dimension(d);
    const Index cols = component(sigma).dimension(d);
    if (rows == 0 || cols == 0) continue;
    out.block(term_offset(tau, d), term_offset(sigma, d), rows, cols) = differential_block(sigma, tau, d);
  }
  return out;
}

void Certificate::merge(const Certificate& other, const std::string& prefix) {
  for (const auto& f : other.failures) fail(prefix + f);
}

// ---------------------------------------------------------------- restriction and sums

FanComplex restrict_to_subfan(const FanComplex& m, const std::vector<int>& cone_ids) {
  const Fan& fan = m.fan();
  std::set<int> ids(cone_ids.begin(), cone_ids.end());
  for (int c : ids) {
    if (c < 0 || c >= fan.size()) throw InputError("cone id " + std::to_string(c) + " is not in the fan");
    for (int f : fan.cone(c).faces)
      if (!ids.count(f)) throw InputError("cone set is not closed under faces (cone " + std::to_string(c) + ")");
  }
  auto [sub, back] = fan.subfan(std::vector<int>(ids.begin(), ids.end()));
  std::map<int, int> forward;
  for (std::size_t i = 0; i < back.size(); ++i) forward[back[i]] = static_cast<int>(i);
  FanComplex out(std::make_shared<const Fan>(std::move(sub)));
  for (const auto& [c, mod] : m.components())
    if (forward.count(c)) out.set_component(forward[c], mod);
  for (const auto& [key, pm] : m.maps()) {
    if (!forward.count(key.first) || !forward.count(key.second)) continue;
    const int s = forward[key.first];
    const int t = forward[key.second];
    PolyMatrix copy = pm;
    copy.restriction = out.rings()->restriction(s, t);
    out.set_map(s, t, std::move(copy));
  }
  return out;
}

FanComplex restrict_to_subfan(const FanComplex& m, const Fan& psi) {
  if (psi.ambient_dim() != m.ambient_dim()) throw InputError("subfan lives in a different space");
  std::vector<int> ids;
  for (const Cone& c : psi.cones()) {
    std::vector<RayVector> rays;
    for (int r : c.rays) rays.push_back(psi.rays()[static_cast<std::size_t>(r)]);
    auto id = m.fan().find_cone(rays);
    if (!id) throw InputError("not a subfan: a cone of the given fan is not a cone of the complex's fan");
    ids.push_back(*id);
  }
  return restrict_to_subfan(m, ids);
}

namespace {

PolyMatrix block_diagonal(const PolyMatrix& a, const PolyMatrix& b) {
  PolyMatrix out = PolyMatrix::zero(direct_sum(a.source, b.source), direct_sum(a.target, b.target), a.restriction);
  const std::size_t ar = a.target.generator_degrees.size();
  const std::size_t ac = a.source.generator_degrees.size();
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j) out.entries[i][j] = a.entries[i][j];
  for (std::size_t i = 0; i < b.entries.size(); ++i)
    for (std::size_t j = 0; j < b.source.generator_degrees.size(); ++j) out.entries[ar + i][ac + j] = b.entries[i][j];
  return out;
}

}  // namespace

FanComplex direct_sum(const FanComplex& a, const FanComplex& b) {
  if (a.rings() != b.rings() && a.fan().to_text() != b.fan().to_text())
    throw std::invalid_argument("direct sum of complexes on different fans");
  FanComplex out(a.rings());
  std::set<int> cones;
  for (const auto& [c, m] : a.components()) cones.insert(c);
  for (const auto& [c, m] : b.components()) cones.insert(c);
  for (int c : cones) out.set_component(c, direct_sum(a.component(c), b.component(c)));
  std::set<std::pair<int, int>> pairs;
  for (const auto& [k, m] : a.maps()) pairs.insert(k);
  for (const auto& [k, m] : b.maps()) pairs.insert(k);
  for (const auto& [s, t] : pairs) {
    PolyMatrix ma = a.map(s, t);
    PolyMatrix mb = b.map(s, t);
    ma.restriction = out.rings()->restriction(s, t);
    out.set_map(s, t, block_diagonal(ma, mb));
  }
  return out;
}

// ---------------------------------------------------------------- checks

Certificate check_complex(const FanComplex& m) {
  Certificate cert;
  const Fan& fan = m.fan();
  for (const auto& [c, mod] : m.components()) {
    if (mod.nvars != m.rings()->ring(c).nvars())
      cert.fail("component at cone " + std::to_string(c) + " is over the wrong ring");
  }
  for (const auto& [key, pm] : m.maps()) {
    const auto [sigma, tau] = key;
    const std::string where = "map " + std::to_string(sigma) + " -> " + std::to_string(tau);
    if (!fan.is_facet(tau, sigma)) {
      cert.fail(where + ": not a facet pair");
      continue;
    }
    if (!(pm.source == m.component(sigma)) || !(pm.target == m.component(tau)))
      cert.fail(where + ": source or target does not match the components");
    if (pm.restriction.substitution() != m.rings()->restriction(sigma, tau).substitution())
      cert.fail(where + ": not compatible with the ring restriction");
    if (auto bad = pm.inhomogeneous_entry())
      cert.fail(where + ": entry (" + std::to_string(bad->first) + ", " + std::to_string(bad->second) +
                ") has the wrong degree");
  }
  if (!cert.ok) return cert;
  for (const Cone& sc : fan.cones()) {
    const int sigma = static_cast<int>(&sc - fan.cones().data());
    if (m.component(sigma).is_zero()) continue;
    for (int xi : fan.ridges(sigma)) {
      std::optional<PolyMatrix> total;
      for (int tau : sc.facets) {
        if (!fan.is_facet(xi, tau) || !m.has_map(sigma, tau) || !m.has_map(tau, xi)) continue;
        const int sign = fan.incidence_sign(sigma, tau) * fan.incidence_sign(tau, xi);
        PolyMatrix term = Rational(sign) * compose(m.map(tau, xi), m.map(sigma, tau));
        total = total ? *total + term : term;
      }
      if (total && !total->is_zero())
        cert.fail("d^2 != 0 from cone " + std::to_string(sigma) + " to cone " + std::to_string(xi));
    }
  }
  return cert;
}

Certificate check_locally_free(const FanComplex& m) {
  Certificate cert;
  for (const auto& [c, mod] : m.components()) {
    if (mod.nvars != m.rings()->ring(c).nvars())
      cert.fail("component at cone " + std::to_string(c) + " is not a module over its cone ring");
  }
  return cert;
}

Boundary boundary_of(const FanComplex& m, int tau) {
  const Fan& fan = m.fan();
  Boundary b;
  b.facets = fan.cone(tau).facets;
  std::sort(b.facets.begin(), b.facets.end());
  b.ridges = fan.ridges(tau);
  std::sort(b.ridges.begin(), b.ridges.end());
  std::vector<ModuleBlock> blocks;
  for (int rho : b.facets) blocks.push_back({m.component(rho), m.rings()->restriction(tau, rho)});
  b.ambient = GradedAmbient(m.rings()->ring(tau).nvars(), std::move(blocks));
  return b;
}

QMatrix boundary_differential(const FanComplex& m, const Boundary& b, int d) {
  std::vector<Index> row_off{0};
  for (int xi : b.ridges) row_off.push_back(row_off.back() + m.component(xi).dimension(d));
  QMatrix out = QMatrix::Zero(row_off.back(), b.ambient.dimension(d));
  for (std::size_t j = 0; j < b.facets.size(); ++j) {
    const int rho = b.facets[j];
    const Index cols = m.component(rho).dimension(d);
    if (cols == 0) continue;
    for (std::size_t i = 0; i < b.ridges.size(); ++i) {
      const int xi = b.ridges[i];
      if (!m.has_map(rho, xi)) continue;
      const Index rows = row_off[i + 1] - row_off[i];
      if (rows == 0) continue;
      out.block(row_off[i], b.ambient.block_offset(j, d), rows, cols) = m.differential_block(rho, xi, d);
    }
  }
  return out;
}

QMatrix component_to_boundary(const FanComplex& m, const Boundary& b, int tau, int d) {
  const Index cols = m.component(tau).dimension(d);
  QMatrix out = QMatrix::Zero(b.ambient.dimension(d), cols);
  if (cols == 0) return out;
  for (std::size_t j = 0; j < b.facets.size(); ++j) {
    const int rho = b.facets[j];
    if (!m.has_map(tau, rho)) continue;
    const Index rows = m.component(rho).dimension(d);
    if (rows == 0) continue;
    out.block(b.ambient.block_offset(j, d), 0, rows, cols) = m.differential_block(tau, rho, d);
  }
  return out;
}

GradedSubspaceFamily boundary_kernel(const FanComplex& m, const Boundary& b, const Window& w) {
  return kernel_family(b.ambient, w, [&](int d) { return boundary_differential(m, b, d); });
}

Certificate check_locally_exact(const FanComplex& m, const Window& w) {
  Certificate cert;
  const Fan& fan = m.fan();
  for (int tau = 0; tau < fan.size(); ++tau) {
    if (fan.cone(tau).dim == 0) continue;
    const Boundary b = boundary_of(m, tau);
    const GradedSubspaceFamily z = boundary_kernel(m, b, w);
    for (int d : w.degrees()) {
      const Index zd = z.dimension(d);
      const Index r = m.component(tau).dimension(d) == 0 ? 0 : rank(component_to_boundary(m, b, tau, d));
      if (r != zd) {
        cert.fail("cone " + std::to_string(tau) + ", degree " + std::to_string(d) + ": image dimension " +
                  std::to_string(r) + " but boundary kernel dimension " + std::to_string(zd));
        break;
      }
    }
  }
  return cert;
}

// ---------------------------------------------------------------- cohomology

CohomologyResult cohomology_degreewise(const FanComplex& m, const Window& w, bool with_generators) {
  CohomologyResult result;
  const int n = m.ambient_dim();
  for (int d : w.degrees()) {
    // ranks[p] = rank of M^{-p} -> M^{-p+1}.
    std::vector<Index> ranks(static_cast<std::size_t>(n + 2), 0);
    for (int p = 1; p <= n; ++p) {
      if (m.term_dimension(p, d) == 0 || m.term_dimension(p - 1, d) == 0) continue;
      ranks[static_cast<std::size_t>(p)] = rank(m.total_differential(p, d));
    }
    for (int p = 0; p <= n; ++p) {
      const Index h = m.term_dimension(p, d) - ranks[static_cast<std::size_t>(p)] - ranks[static_cast<std::size_t>(p + 1)];
      result.dimensions[{-p, d}] = h;
    }
  }
  if (with_generators) {
    try {
      FreeCover cover = top_cohomology_cover(m, w);
      if (cover.certified_free) result.top_generators = cover.module.generator_degrees;
    } catch (const WindowExhausted&) {
    }
  }
  return result;
}

FreeCover top_cohomology_cover(const FanComplex& m, const Window& w) {
  const Fan& fan = m.fan();
  const int n = m.ambient_dim();
  std::vector<ModuleBlock> blocks;
  for (const auto& [c, mod] : m.components()) {
    if (fan.cone(c).dim != n) continue;
    blocks.push_back({mod, m.rings()->from_ambient(c)});
  }
  GradedAmbient ambient(n, std::move(blocks));
  auto z = kernel_family(ambient, w, [&](int d) { return m.total_differential(n, d); });
  return minimal_free_cover(z);
}

}  // namespace mincomplex
