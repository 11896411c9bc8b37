#pragma once

#include "mincomplex/fan_complex.hpp"

#include <map>
#include <vector>

namespace mincomplex {

/// Order in which cones of equal dimension are processed.
enum class ConeOrder { canonical, reversed };

struct BuildOptions {
  Window window;
  ConeOrder order = ConeOrder::canonical;
};

/// Cones of the fan sorted by dimension, ties broken by `order`.
std::vector<int> processing_order(const Fan& fan, ConeOrder order);

struct MinimalComplex {
  FanComplex complex;
  Window window;
  /// Base cone and shift; o and 0 for the minimal complex itself.
  int base = 0;
  int shift = 0;
};

/// K_fan: R(n) at o, then for each cone the minimal free cover of the
/// kernel of the already built boundary differential.
MinimalComplex build_minimal(FanPtr fan, const BuildOptions& options);

/// K_fan[sigma](k): A_sigma with one generator in degree -(n - dim sigma + k)
/// at sigma, extended over Star(sigma) by the same induction.
MinimalComplex build_shifted_minimal(FanPtr fan, int sigma, int k, const BuildOptions& options);

/// Adds the minimal free cover of the boundary kernel at `tau` to `m`.
void extend_by_cover(FanComplex& m, int tau, const Window& w);

using StalkReport = std::map<int, std::vector<int>>;

/// Generator degrees of every component (empty for zero components).
StalkReport stalk_report(const FanComplex& k);

struct MinimalityCertificate {
  Certificate complex;      // d^2 = 0, homogeneity, ring compatibility
  Certificate base;         // clause (1): R(n) at o, or the shifted base conditions
  Certificate locally_free_exact;  // clause (2)
  Certificate mod_m;        // clause (3): mod-m isomorphism at every other cone

  bool ok() const { return complex.ok && base.ok && locally_free_exact.ok && mod_m.ok; }
  Certificate combined() const;
};

/// Checks the defining clauses of a minimal complex (base = o, shift = 0) or
/// of a shifted minimal complex based at `base` with shift `shift`.
MinimalityCertificate verify_minimality(const FanComplex& m, const Window& w, int base = 0, int shift = 0);

/// Generator degrees of H^{-n}(K) over the ambient ring. Requires convex
/// support; throws CertificateFailure on an acyclicity or freeness violation.
std::vector<int> ih_module(const MinimalComplex& k);

/// Compares the stalks of K[sigma](k) on Star(sigma) with those of the
/// minimal complex of the quotient fan shifted by k.
Certificate quotient_cross_check(FanPtr fan, int sigma, int k, const BuildOptions& options);

}  // namespace mincomplex
