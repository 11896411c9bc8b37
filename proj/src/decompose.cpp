#include "mincomplex/decompose.hpp"

#include "mincomplex/errors.hpp"

#include <algorithm>
#include <tuple>

namespace mincomplex {

std::vector<Summand> normalize_summands(const Fan& fan, std::vector<Summand> s) {
  std::map<std::tuple<int, int, int>, int> merged;
  for (const auto& x : s) merged[{fan.cone(x.cone).dim, x.cone, x.shift}] += x.multiplicity;
  std::vector<Summand> out;
  for (const auto& [key, mult] : merged)
    if (mult != 0) out.push_back({std::get<1>(key), std::get<2>(key), mult});
  return out;
}

const MinimalComplex& ShiftedCache::base(int rho) {
  auto it = built_.find(rho);
  if (it != built_.end()) return it->second;
  const int lo = -fan_->ambient_dim() + fan_->cone(rho).dim;
  BuildOptions opt{Window{lo, lo + width_}, order_};
  return built_.emplace(rho, build_shifted_minimal(fan_, rho, 0, opt)).first->second;
}

std::vector<int> ShiftedCache::stalk(int rho, int k, int sigma) {
  std::vector<int> out = base(rho).complex.component(sigma).generator_degrees;
  for (int& d : out) d -= k;
  return out;
}

namespace {

std::map<int, int> degree_counts(const std::vector<int>& degrees) {
  std::map<int, int> out;
  for (int d : degrees) ++out[d];
  return out;
}

}  // namespace

DecompositionReport decomposition_multiplicities(const FanComplex& m, const Window& w, ConeOrder order) {
  DecompositionReport report;
  report.window = w;
  report.preconditions.merge(check_complex(m), "complex: ");
  report.preconditions.merge(check_locally_free(m), "locally free: ");
  report.preconditions.merge(check_locally_exact(m, w), "locally exact: ");

  const Fan& fan = m.fan();
  const int n = fan.ambient_dim();
  ShiftedCache cache(m.rings()->fan_ptr(), w.hi - w.lo, order);
  std::vector<Summand> assigned;

  for (int sigma : processing_order(fan, order)) {
    std::map<int, int> residual = degree_counts(m.component(sigma).generator_degrees);
    for (const auto& s : assigned) {
      if (!fan.is_face(s.cone, sigma)) continue;
      for (int d : cache.stalk(s.cone, s.shift, sigma)) residual[d] -= s.multiplicity;
    }
    for (const auto& [d, count] : residual) {
      if (count < 0) {
        report.bookkeeping.fail("negative residual " + std::to_string(count) + " at cone " + std::to_string(sigma) +
                                ", degree " + std::to_string(d));
        continue;
      }
      if (count > 0) assigned.push_back({sigma, -n + fan.cone(sigma).dim - d, count});
    }
  }

  // Reassemble every component from the summands.
  for (int sigma = 0; sigma < fan.size(); ++sigma) {
    std::vector<int> predicted;
    for (const auto& s : assigned) {
      if (!fan.is_face(s.cone, sigma)) continue;
      for (int d : cache.stalk(s.cone, s.shift, sigma))
        for (int c = 0; c < s.multiplicity; ++c) predicted.push_back(d);
    }
    std::vector<int> actual = m.component(sigma).generator_degrees;
    std::sort(predicted.begin(), predicted.end());
    std::sort(actual.begin(), actual.end());
    const int nvars = m.rings()->ring(sigma).nvars();
    if (predicted != actual ||
        hilbert_function(FreeGradedModule(nvars, predicted), w) != hilbert_function(FreeGradedModule(nvars, actual), w))
      report.bookkeeping.fail("summands do not reproduce the component at cone " + std::to_string(sigma));
  }

  report.summands = normalize_summands(fan, assigned);
  int o_based = 0;
  bool o_ok = false;
  for (const auto& s : report.summands) {
    if (s.cone != 0) continue;
    ++o_based;
    o_ok = s.shift == 0 && s.multiplicity == 1;
  }
  report.base_summand_unique = o_based == 1 && o_ok;
  return report;
}

// ---------------------------------------------------------------- peeling

namespace {

struct ConeSplit {
  std::vector<int> degrees;
  std::vector<QVector> elements;
  std::size_t k = 0;
};

QVector unit_element(const FreeGradedModule& mod, std::size_t j) {
  const int d = mod.generator_degrees[j];
  QVector e = QVector::Zero(mod.dimension(d));
  e(mod.offset(j, d)) = 1;
  return e;
}

GeneratedMap part_map(const FreeGradedModule& mod, const ConeSplit& s, bool k_part) {
  std::vector<int> degs;
  std::vector<QVector> elems;
  for (std::size_t i = 0; i < s.elements.size(); ++i) {
    if ((i < s.k) != k_part) continue;
    degs.push_back(s.degrees[i]);
    elems.push_back(s.elements[i]);
  }
  return GeneratedMap(GradedAmbient::of(mod), degs, elems);
}

// Block-diagonal span of the chosen part over the facets of a boundary.
QMatrix boundary_part(const FanComplex& m, const Boundary& b, const std::map<int, ConeSplit>& splits,
                      bool k_part, int d) {
  std::vector<QMatrix> blocks;
  Index cols = 0;
  for (int rho : b.facets) {
    auto it = splits.find(rho);
    if (it == splits.end()) {
      blocks.emplace_back(m.component(rho).dimension(d), 0);
      continue;
    }
    blocks.push_back(part_map(m.component(rho), it->second, k_part).at_degree(d));
    cols += blocks.back().cols();
  }
  QMatrix out = QMatrix::Zero(b.ambient.dimension(d), cols);
  Index c = 0;
  for (std::size_t j = 0; j < b.facets.size(); ++j) {
    const QMatrix& blk = blocks[j];
    if (blk.cols() == 0) continue;
    out.block(b.ambient.block_offset(j, d), c, blk.rows(), blk.cols()) = blk;
    c += blk.cols();
  }
  return out;
}

}  // namespace

PeelResult peel_summand(const FanComplex& m, int tau, const Window& w) {
  const Fan& fan = m.fan();
  const int n = fan.ambient_dim();
  const int i = fan.cone(tau).dim;
  if (m.component(tau).is_zero()) throw InputError("cannot peel at cone " + std::to_string(tau) + ": zero component");
  for (int c : m.support())
    if (fan.cone(c).dim < i)
      throw InputError("cannot peel at cone " + std::to_string(tau) + ": cone " + std::to_string(c) +
                       " of smaller dimension has a nonzero component");

  std::map<int, ConeSplit> splits;
  for (int sigma : processing_order(fan, ConeOrder::canonical)) {
    const int dim = fan.cone(sigma).dim;
    const FreeGradedModule mod = m.component(sigma);
    if (dim < i || mod.is_zero()) continue;
    ConeSplit s;
    if (dim == i) {
      for (std::size_t j = 0; j < mod.generator_degrees.size(); ++j) {
        s.degrees.push_back(mod.generator_degrees[j]);
        s.elements.push_back(unit_element(mod, j));
      }
      s.k = sigma == tau ? s.elements.size() : 0;
      splits.emplace(sigma, std::move(s));
      continue;
    }
    const Boundary b = boundary_of(m, sigma);
    const GradedSubspaceFamily z = boundary_kernel(m, b, w);
    const GradedSubspaceFamily zk = intersect(z, [&](int d) { return boundary_part(m, b, splits, true, d); });
    const GradedSubspaceFamily zn = intersect(z, [&](int d) { return boundary_part(m, b, splits, false, d); });
    std::vector<QVector> images;
    for (std::size_t j = 0; j < mod.generator_degrees.size(); ++j) {
      const int a = mod.generator_degrees[j];
      images.push_back(component_to_boundary(m, b, sigma, a).col(mod.offset(j, a)));
    }
    const GeneratedMap d(b.ambient, mod.generator_degrees, images);
    Splitting split = split_surjection(d, zk, zn);
    s.degrees = std::move(split.degrees);
    s.elements = std::move(split.elements);
    s.k = split.k_count;
    splits.emplace(sigma, std::move(s));
  }

  PeelResult result;
  result.summand_complex = FanComplex(m.rings());
  result.complement = FanComplex(m.rings());
  std::map<int, GeneratedMap> bases;
  for (const auto& [sigma, s] : splits) {
    const FreeGradedModule mod = m.component(sigma);
    const int nvars = mod.nvars;
    std::vector<int> kd(s.degrees.begin(), s.degrees.begin() + static_cast<long>(s.k));
    std::vector<int> nd(s.degrees.begin() + static_cast<long>(s.k), s.degrees.end());
    result.summand_complex.set_component(sigma, FreeGradedModule(nvars, kd));
    result.complement.set_component(sigma, FreeGradedModule(nvars, nd));
    FreeGradedModule new_basis(nvars, s.degrees);
    result.change_of_basis.emplace(
        sigma, polymatrix_from_images(new_basis, mod, RingRestriction::identity(nvars), s.elements));
    result.k_rank[sigma] = s.k;
    bases.emplace(sigma, GeneratedMap(GradedAmbient::of(mod), s.degrees, s.elements));
  }

  for (const auto& [key, pm] : m.maps()) {
    const auto [sigma, rho] = key;
    auto ss = splits.find(sigma);
    auto rs = splits.find(rho);
    if (ss == splits.end() || rs == splits.end()) continue;
    const ConeSplit& src = ss->second;
    const ConeSplit& dst = rs->second;
    const GeneratedMap& rho_basis = bases.at(rho);
    std::vector<QVector> k_images, n_images;
    for (std::size_t g = 0; g < src.elements.size(); ++g) {
      const int a = src.degrees[g];
      const QVector image = m.differential_block(sigma, rho, a) * src.elements[g];
      auto coords = solve(rho_basis.at_degree(a), image);
      if (!coords) throw CertificateFailure("new basis at cone " + std::to_string(rho) + " does not span");
      const Index split_at = rho_basis.free_module().offset(dst.k, a);
      const bool in_k = g < src.k;
      const QVector own = in_k ? QVector(coords->head(split_at)) : QVector(coords->tail(coords->size() - split_at));
      const QVector other = in_k ? QVector(coords->tail(coords->size() - split_at)) : QVector(coords->head(split_at));
      if (!other.isZero())
        throw CertificateFailure("differential mixes the summand and the complement between cones " +
                                 std::to_string(sigma) + " and " + std::to_string(rho));
      (in_k ? k_images : n_images).push_back(own);
    }
    const Rational sign(fan.incidence_sign(sigma, rho));
    const RingRestriction& r = m.rings()->restriction(sigma, rho);
    FanComplex* parts[2] = {&result.summand_complex, &result.complement};
    std::vector<QVector>* images[2] = {&k_images, &n_images};
    for (int p = 0; p < 2; ++p) {
      const FreeGradedModule source = parts[p]->component(sigma);
      const FreeGradedModule target = parts[p]->component(rho);
      if (source.is_zero() || target.is_zero()) continue;
      parts[p]->set_map(sigma, rho, sign * polymatrix_from_images(source, target, r, *images[p]));
    }
  }

  std::vector<Summand> summands;
  for (int d : m.component(tau).generator_degrees) summands.push_back({tau, -n + i - d, 1});
  result.summands = normalize_summands(fan, summands);
  return result;
}

bool PeelRun::ok() const {
  for (const auto& c : complement_checks)
    if (!c.ok) return false;
  return true;
}

PeelRun iterated_peel(const FanComplex& m, const Window& w) {
  PeelRun run;
  FanComplex current = m;
  const Fan& fan = m.fan();
  std::vector<Summand> all;
  while (true) {
    const std::vector<int> support = current.support();
    if (support.empty()) break;
    int tau = support.front();
    for (int c : support)
      if (fan.cone(c).dim < fan.cone(tau).dim) tau = c;
    PeelResult step = peel_summand(current, tau, w);
    all.insert(all.end(), step.summands.begin(), step.summands.end());
    Certificate check;
    check.merge(check_complex(step.complement), "complex: ");
    check.merge(check_locally_free(step.complement), "locally free: ");
    check.merge(check_locally_exact(step.complement, w), "locally exact: ");
    run.complement_checks.push_back(check);
    current = std::move(step.complement);
  }
  run.summands = normalize_summands(fan, all);
  return run;
}

DecompositionReport decomposition_theorem_report(const FanMap& map, const Window& w, ConeOrder order) {
  const MinimalComplex k = build_minimal(map.source, BuildOptions{w, order});
  const PushforwardComplex p = pushforward(map, k.complex, w);
  const PushforwardCertificate pc = verify_pushforward(p);
  DecompositionReport report = decomposition_multiplicities(p.complex, w, order);
  report.pushforward.merge(pc.locally_exact, "locally exact: ");
  report.pushforward.merge(pc.locally_free, "locally free: ");
  report.pushforward.merge(pc.quasi_isomorphism, "quasi-isomorphism: ");
  report.pushforward.merge(pc.subcomplex, "subcomplex: ");
  if (!report.base_summand_unique)
    report.theorem.fail("the summands based at o are not exactly one copy of K with shift 0");
  return report;
}

}  // namespace mincomplex
