#pragma once

#include "mincomplex/graded.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mincomplex {

/// A complex of graded modules on a fan: M_sigma sits in complex degree
/// -dim(sigma); for every facet tau of sigma there is a map M_sigma -> M_tau.
/// Maps are stored unsigned; the total differential multiplies each by the
/// incidence sign of the pair. Absent components are zero.
class FanComplex {
 public:
  FanComplex() = default;
  explicit FanComplex(FanRingsPtr rings) : rings_(std::move(rings)) {}
  explicit FanComplex(FanPtr fan) : rings_(std::make_shared<FanRings>(std::move(fan))) {}

  const FanRingsPtr& rings() const { return rings_; }
  const Fan& fan() const { return rings_->fan(); }
  int ambient_dim() const { return fan().ambient_dim(); }

  /// Zero module over the cone's ring when unset.
  FreeGradedModule component(int cone) const;
  void set_component(int cone, FreeGradedModule m);
  const std::map<int, FreeGradedModule>& components() const { return components_; }

  bool has_map(int sigma, int tau) const { return maps_.count({sigma, tau}) > 0; }
  /// Stored map for the facet pair, or the zero map.
  PolyMatrix map(int sigma, int tau) const;
  void set_map(int sigma, int tau, PolyMatrix m);
  const std::map<std::pair<int, int>, PolyMatrix>& maps() const { return maps_; }

  /// Cones with a nonzero component.
  std::vector<int> support() const;
  bool is_zero() const { return support().empty(); }

  /// Signed block of the total differential from M_sigma to M_tau at degree d.
  QMatrix differential_block(int sigma, int tau, int d) const;
  /// Dimension of M^{-p} in internal degree d.
  Index term_dimension(int p, int d) const;
  /// The differential M^{-p} -> M^{-p+1} at degree d; blocks in cone id order.
  QMatrix total_differential(int p, int d) const;
  /// Offset of cone sigma's block inside M^{-dim sigma} at degree d.
  Index term_offset(int sigma, int d) const;

 private:
  FanRingsPtr rings_;
  std::map<int, FreeGradedModule> components_;
  std::map<std::pair<int, int>, PolyMatrix> maps_;
};

struct Certificate {
  bool ok = true;
  std::vector<std::string> failures;

  void fail(std::string why) {
    ok = false;
    failures.push_back(std::move(why));
  }
  void merge(const Certificate& other, const std::string& prefix = "");
};

/// The complex restricted to a face-closed set of cones, re-indexed on the
/// subfan. Throws InputError if the ids are not face-closed.
FanComplex restrict_to_subfan(const FanComplex& m, const std::vector<int>& cone_ids);
/// Same, for a fan whose cones are all cones of m's fan.
FanComplex restrict_to_subfan(const FanComplex& m, const Fan& psi);

/// Pointwise direct sum of two complexes on the same fan.
FanComplex direct_sum(const FanComplex& a, const FanComplex& b);

/// d^2 = 0 through every codimension-two face (symbolically), homogeneity of
/// every entry and compatibility with the ring restrictions.
Certificate check_complex(const FanComplex& m);

/// Every component is a free module over its own cone ring.
Certificate check_locally_free(const FanComplex& m);

/// The boundary of tau: the direct sum of M_rho over facets rho of tau viewed
/// as an A_tau-module, together with its differential to the ridges.
struct Boundary {
  std::vector<int> facets;
  std::vector<int> ridges;
  GradedAmbient ambient;
};

Boundary boundary_of(const FanComplex& m, int tau);
/// (sum over ridges) x (sum over facets) signed differential at degree d.
QMatrix boundary_differential(const FanComplex& m, const Boundary& b, int d);
/// (sum over facets) x M_tau signed map at degree d.
QMatrix component_to_boundary(const FanComplex& m, const Boundary& b, int tau, int d);
GradedSubspaceFamily boundary_kernel(const FanComplex& m, const Boundary& b, const Window& w);

/// M_tau maps onto the boundary kernel in every degree of the window, for
/// every cone of positive dimension.
Certificate check_locally_exact(const FanComplex& m, const Window& w);

/// Keys are (complex degree p, internal degree d).
using CohomologyTable = std::map<std::pair<int, int>, Index>;

struct CohomologyResult {
  CohomologyTable dimensions;
  /// Generator degrees of H^{-n} over the ambient ring when it is certified free.
  std::optional<std::vector<int>> top_generators;
};

CohomologyResult cohomology_degreewise(const FanComplex& m, const Window& w, bool with_generators = true);

/// Free generators of H^{-n} = ker(M^{-n} -> M^{-n+1}) over the ambient ring.
FreeCover top_cohomology_cover(const FanComplex& m, const Window& w);

/// Canonical text form: kind line, the embedded fan, then components and maps.
std::string serialize_complex(const FanComplex& m, const std::string& kind = "general");

struct ParsedComplex {
  FanComplex complex;
  std::string kind;
};

ParsedComplex parse_complex(std::string_view text);
ParsedComplex read_complex_file(const std::string& path);

}  // namespace mincomplex
