#include "mincomplex/pushforward.hpp"

#include "mincomplex/errors.hpp"
#include "mincomplex/minimal.hpp"

#include <algorithm>

namespace mincomplex {

namespace {

// Source cones of dimension dim(sigma) - 1 that are facets of some preimage cone.
std::vector<int> relevant_facets(const Fan& src, const std::vector<int>& preimages) {
  std::vector<int> out;
  for (int tau : preimages)
    for (int nu : src.cone(tau).facets) out.push_back(nu);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Matrix of d restricted to the sum of the preimage components, landing in
// the sum over `nus` (block order as given), at degree d.
QMatrix restricted_differential(const FanComplex& m, const GradedAmbient& amb, const std::vector<int>& preimages,
                                const std::vector<int>& nus, int d) {
  std::vector<Index> row_off{0};
  for (int nu : nus) row_off.push_back(row_off.back() + m.component(nu).dimension(d));
  QMatrix out = QMatrix::Zero(row_off.back(), amb.dimension(d));
  for (std::size_t j = 0; j < preimages.size(); ++j) {
    const int tau = preimages[j];
    const Index cols = m.component(tau).dimension(d);
    if (cols == 0) continue;
    for (std::size_t i = 0; i < nus.size(); ++i) {
      if (!m.has_map(tau, nus[i])) continue;
      const Index rows = row_off[i + 1] - row_off[i];
      if (rows == 0) continue;
      out.block(row_off[i], amb.block_offset(j, d), rows, cols) = m.differential_block(tau, nus[i], d);
    }
  }
  return out;
}

QMatrix vstack(const std::vector<QMatrix>& parts, Index cols) {
  Index rows = 0;
  for (const auto& p : parts) rows += p.rows();
  QMatrix out(rows, cols);
  Index r = 0;
  for (const auto& p : parts) {
    if (p.rows() == 0) continue;
    out.middleRows(r, p.rows()) = p;
    r += p.rows();
  }
  return out;
}

}  // namespace

PushforwardComplex pushforward(const FanMap& map, const FanComplex& m, const Window& w) {
  if (!map.proper) throw InputError("the fan map is not proper: supports differ");
  if (m.rings()->fan_ptr() != map.source && m.fan().to_text() != map.source->to_text())
    throw InputError("the complex does not live on the source fan of the map");
  PushforwardComplex out{map, m, FanComplex(map.target), w, {}, {}, {}};
  const Fan& src = m.fan();
  const Fan& tgt = *map.target;
  const FanRings& trings = *out.complex.rings();

  for (int sigma : processing_order(tgt, ConeOrder::canonical)) {
    const std::vector<int> pre = preimage_cones(map, sigma);
    out.preimages[sigma] = pre;
    std::vector<ModuleBlock> blocks;
    for (int tau : pre)
      blocks.push_back({m.component(tau), RingRestriction::between(trings.ring(sigma), m.rings()->ring(tau))});
    const GradedAmbient amb(trings.ring(sigma).nvars(), std::move(blocks));
    const std::vector<int> nus = relevant_facets(src, pre);
    const std::vector<int>& facets = tgt.cone(sigma).facets;

    auto constraints = [&](int d) -> QMatrix {
      const QMatrix full = restricted_differential(m, amb, pre, nus, d);
      std::map<int, std::pair<Index, Index>> rows_of;  // nu -> (offset, size) in `full`
      Index off = 0;
      for (int nu : nus) {
        const Index size = m.component(nu).dimension(d);
        rows_of[nu] = {off, size};
        off += size;
      }
      std::vector<QMatrix> parts;
      // Components over source cones interior to sigma must vanish.
      for (int nu : nus) {
        if (map.assignment[static_cast<std::size_t>(nu)] != sigma) continue;
        const auto [o, s] = rows_of[nu];
        if (s > 0) parts.push_back(full.middleRows(o, s));
      }
      // Components over each facet of sigma must lie in the pushforward there.
      for (int facet : facets) {
        const std::vector<int>& fpre = out.preimages.at(facet);
        const GradedSubspaceFamily& fam = out.subspaces.at(facet);
        const Index udim = fam.ambient().dimension(d);
        if (udim == 0) continue;
        const QMatrix ann = annihilator(fam.piece(d));
        if (ann.rows() == 0) continue;
        QMatrix gathered = QMatrix::Zero(udim, full.cols());
        for (std::size_t j = 0; j < fpre.size(); ++j) {
          auto it = rows_of.find(fpre[j]);
          if (it == rows_of.end() || it->second.second == 0) continue;
          gathered.middleRows(fam.ambient().block_offset(j, d), it->second.second) =
              full.middleRows(it->second.first, it->second.second);
        }
        parts.push_back(multiply(ann, gathered));
      }
      return vstack(parts, full.cols());
    };

    GradedSubspaceFamily fam = kernel_family(amb, w, constraints);
    FreeCover cover = minimal_free_cover(fam, sigma);
    if (!cover.certified_free)
      throw CertificateFailure("pushforward component at cone " + std::to_string(sigma) +
                               " is not free on the window");
    out.subspaces.emplace(sigma, fam);
    if (cover.module.is_zero()) continue;
    out.complex.set_component(sigma, cover.module);
    out.inclusions.emplace(sigma, cover.map);

    for (int facet : facets) {
      const FreeGradedModule target = out.complex.component(facet);
      if (target.is_zero()) continue;
      const std::vector<int>& fpre = out.preimages.at(facet);
      const GeneratedMap& finc = out.inclusions.at(facet);
      std::vector<QVector> images;
      for (const auto& g : cover.generators) {
        const int a = g.degree;
        const QMatrix full = restricted_differential(m, amb, pre, fpre, a);
        const QVector image = full * g.representative;
        auto coords = solve(finc.at_degree(a), image);
        if (!coords)
          throw CertificateFailure("differential of a pushforward generator at cone " + std::to_string(sigma) +
                                   " leaves the pushforward at cone " + std::to_string(facet));
        images.push_back(*coords);
      }
      PolyMatrix pm = polymatrix_from_images(cover.module, target, trings.restriction(sigma, facet), images);
      if (tgt.incidence_sign(sigma, facet) < 0) pm = Rational(-1) * pm;
      out.complex.set_map(sigma, facet, std::move(pm));
    }
  }
  return out;
}

QMatrix inclusion_matrix(const PushforwardComplex& p, int dim, int d) {
  QMatrix out = QMatrix::Zero(p.source.term_dimension(dim, d), p.complex.term_dimension(dim, d));
  for (const auto& [sigma, inc] : p.inclusions) {
    if (p.map.target->cone(sigma).dim != dim) continue;
    const QMatrix& block = inc.at_degree(d);
    if (block.cols() == 0) continue;
    const Index col = p.complex.term_offset(sigma, d);
    const std::vector<int>& pre = p.preimages.at(sigma);
    for (std::size_t j = 0; j < pre.size(); ++j) {
      const Index rows = p.source.component(pre[j]).dimension(d);
      if (rows == 0) continue;
      out.block(p.source.term_offset(pre[j], d), col, rows, block.cols()) =
          block.middleRows(inc.ambient().block_offset(j, d), rows);
    }
  }
  return out;
}

PushforwardCertificate verify_pushforward(const PushforwardComplex& p) {
  PushforwardCertificate cert;
  const Window& w = p.window;
  const int n = p.complex.ambient_dim();

  cert.locally_exact = check_locally_exact(p.complex, w);

  cert.locally_free = check_locally_free(p.complex);
  for (const auto& [sigma, fam] : p.subspaces) {
    const FreeGradedModule mod = p.complex.component(sigma);
    for (int d : w.degrees()) {
      const Index expected = fam.dimension(d);
      Index got = 0;
      if (mod.dimension(d) > 0) got = rank(p.inclusions.at(sigma).at_degree(d));
      if (mod.dimension(d) != expected || got != expected) {
        cert.locally_free.fail("cone " + std::to_string(sigma) + ", degree " + std::to_string(d) +
                               ": component is not a free presentation of the fiber product");
        break;
      }
    }
  }

  cert.subcomplex = check_complex(p.complex);
  for (int d : w.degrees()) {
    for (int dim = 1; dim <= n; ++dim) {
      const QMatrix lhs = multiply(inclusion_matrix(p, dim - 1, d), p.complex.total_differential(dim, d));
      const QMatrix rhs = multiply(p.source.total_differential(dim, d), inclusion_matrix(p, dim, d));
      if (lhs != rhs)
        cert.subcomplex.fail("inclusion does not commute with the differential at complex degree " +
                             std::to_string(-dim) + ", internal degree " + std::to_string(d));
    }
  }

  for (int d : w.degrees()) {
    for (int dim = 0; dim <= n; ++dim) {
      const QMatrix dp = p.complex.total_differential(dim, d);
      const QMatrix dm = p.source.total_differential(dim, d);
      const QMatrix dp_in = dim + 1 <= n ? p.complex.total_differential(dim + 1, d) : QMatrix(dp.cols(), 0);
      const QMatrix dm_in = dim + 1 <= n ? p.source.total_differential(dim + 1, d) : QMatrix(dm.cols(), 0);
      const QMatrix zp = kernel(dp);
      const Index hp = zp.cols() - rank(dp_in);
      const Index rank_bm = rank(dm_in);
      const Index hm = kernel(dm).cols() - rank_bm;
      const QMatrix moved = multiply(inclusion_matrix(p, dim, d), zp);
      const Index induced = rank(hstack<Rational>(moved, dm_in)) - rank_bm;
      if (hp != hm || induced != hp)
        cert.quasi_isomorphism.fail("complex degree " + std::to_string(-dim) + ", internal degree " +
                                    std::to_string(d) + ": pushforward cohomology " + std::to_string(hp) +
                                    ", source cohomology " + std::to_string(hm) + ", induced rank " +
                                    std::to_string(induced));
    }
  }
  return cert;
}

}  // namespace mincomplex
