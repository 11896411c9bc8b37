#pragma once

#include "mincomplex/fan_complex.hpp"

#include <map>
#include <vector>

namespace mincomplex {

/// pi_* M for a proper subdivision: a complex on the target fan whose
/// component at sigma is a free submodule of the sum of M over the
/// same-dimensional source cones inside sigma.
struct PushforwardComplex {
  FanMap map;
  FanComplex source;
  FanComplex complex;
  Window window;
  /// Target cone -> source cones of the same dimension inside it (block order).
  std::map<int, std::vector<int>> preimages;
  /// Target cone -> the fiber product, degreewise, inside the sum of the preimage components.
  std::map<int, GradedSubspaceFamily> subspaces;
  /// Target cone -> generator images of the component inside that sum.
  std::map<int, GeneratedMap> inclusions;
};

/// Builds pi_* M cone by cone in increasing dimension. Throws InputError if
/// the map is not proper and CertificateFailure if a component is not free.
PushforwardComplex pushforward(const FanMap& map, const FanComplex& m, const Window& w);

struct PushforwardCertificate {
  Certificate locally_exact;
  Certificate locally_free;
  Certificate quasi_isomorphism;
  Certificate subcomplex;

  bool ok() const { return locally_exact.ok && locally_free.ok && quasi_isomorphism.ok && subcomplex.ok; }
};

/// The inclusion pi_* M -> M at complex degree -p and internal degree d.
QMatrix inclusion_matrix(const PushforwardComplex& p, int dim, int d);

PushforwardCertificate verify_pushforward(const PushforwardComplex& p);

}  // namespace mincomplex
