#pragma once

#include "mincomplex/linalg.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mincomplex {

/// Primitive integer ray generator.
using RayVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

QVector to_rational(const RayVector& v);

/// Divides by the gcd of the entries. Throws InputError on the zero vector.
RayVector primitive(const RayVector& v);

/// Exact H- and V-description of a cone spanned by a finite set of vectors.
/// Generators need not be extreme; `extreme` lists those that are.
struct ConeGeometry {
  int dim = 0;
  bool pointed = true;
  /// Rows h with h.x = 0 on the span.
  QMatrix equations;
  /// Rows h with h.x >= 0 on the cone, one per facet, vanishing on the facet.
  QMatrix facet_normals;
  /// Generator indices on each facet.
  std::vector<std::vector<int>> facets;
  /// All faces as sorted generator-index sets, including {} and the full set.
  std::vector<std::vector<int>> faces;
  std::vector<int> extreme;

  bool contains(const QVector& x) const;
};

ConeGeometry cone_geometry(int ambient_dim, const std::vector<RayVector>& generators);

struct Cone {
  std::vector<int> rays;  // sorted indices into Fan::rays()
  int dim = 0;
  /// Lexicographically first maximal independent subset of `rays`; fixes both
  /// the ring coordinates and the orientation of the cone.
  std::vector<int> basis;
  QMatrix equations;
  QMatrix facet_normals;
  std::vector<int> faces;   // cone ids, including the cone itself and o
  std::vector<int> facets;  // cone ids of codimension one faces
};

/// An immutable rational polyhedral fan in canonical form: rays sorted
/// lexicographically, cones sorted by (dim, ray list); cone 0 is the origin.
class Fan {
 public:
  /// Validates and face-closes the given cones. Non-primitive rays are
  /// normalized and recorded in `rays_were_normalized()`.
  static Fan from_cones(int ambient_dim, std::vector<RayVector> rays,
                        const std::vector<std::vector<int>>& cones);

  int ambient_dim() const { return ambient_dim_; }
  const std::vector<RayVector>& rays() const { return rays_; }
  const std::vector<Cone>& cones() const { return cones_; }
  const Cone& cone(int id) const { return cones_.at(static_cast<std::size_t>(id)); }
  int size() const { return static_cast<int>(cones_.size()); }
  int dim() const;
  bool rays_were_normalized() const { return normalized_; }

  std::vector<int> cones_of_dim(int d) const;
  std::optional<int> find_cone(std::vector<int> rays) const;
  /// Looks up a cone by the ambient coordinates of its rays.
  std::optional<int> find_cone(const std::vector<RayVector>& rays) const;
  std::optional<int> find_ray(const RayVector& ray) const;

  bool is_face(int tau, int sigma) const;
  bool is_facet(int tau, int sigma) const;
  /// Cones having `sigma` as a face.
  std::vector<int> star(int sigma) const;
  /// Codimension-two faces of `sigma`.
  std::vector<int> ridges(int sigma) const;
  /// Cones with no proper coface.
  std::vector<int> maximal_cones() const;

  /// +1 or -1, the orientation comparison between `sigma` and its facet `tau`.
  int incidence_sign(int sigma, int tau) const;

  bool is_simplicial(int cone) const;
  bool contains_point(int cone, const QVector& x) const;

  /// A new canonical fan consisting of the given face-closed set of cones.
  /// The returned vector maps new cone ids to ids in this fan.
  std::pair<Fan, std::vector<int>> subfan(const std::vector<int>& cone_ids) const;
  /// The fan generated by a single cone (the cone and its faces).
  std::pair<Fan, std::vector<int>> cone_fan(int sigma) const;

  std::string to_text() const;

 private:
  Fan() = default;

  int ambient_dim_ = 0;
  std::vector<RayVector> rays_;
  std::vector<Cone> cones_;
  std::map<std::vector<int>, int> index_;
  std::vector<std::vector<int>> cofacets_;
  std::vector<std::vector<int>> signs_;  // aligned with Cone::facets
  bool normalized_ = false;
};

using FanPtr = std::shared_ptr<const Fan>;

/// Reads the text fan format: `dim n`, `ray i: a1 .. an`, `cone: i1 .. ik`.
/// `#` starts a comment; `map:` lines are ignored here.
Fan parse_fan(std::string_view text);
Fan read_fan_file(const std::string& path);

/// Support equals the whole space; facet pairing plus connectivity.
bool is_complete(const Fan& fan);

/// Pure of full dimension and the support is a convex cone.
bool has_convex_support(const Fan& fan);

struct QuotientFan {
  Fan fan;
  /// Star(sigma) cone id -> cone id in the quotient fan.
  std::map<int, int> correspondence;
  /// Rows: integral linear map N -> N/span(sigma).
  QMatrix projection;
};

/// Image of Star(sigma) in N/span(sigma). Throws InputError when the image
/// cones do not form a fan combinatorially isomorphic to the star.
QuotientFan quotient_fan(const Fan& fan, int sigma);

/// A map of fans where every source cone lies in some target cone.
struct FanMap {
  FanPtr source;
  FanPtr target;
  /// Source cone id -> smallest target cone containing it.
  std::vector<int> assignment;
  bool proper = false;
};

/// Infers the assignment; throws InputError if some source cone is not
/// contained in a target cone. `explicit_assignment` entries are checked
/// against the inferred ones.
FanMap subdivision_map(FanPtr source, FanPtr target,
                       const std::map<int, int>& explicit_assignment = {});

/// Reads `map: a -> b` lines from fan file text.
std::map<int, int> parse_map_block(std::string_view text);

/// Source cones of the same dimension as `sigma` contained in it.
std::vector<int> preimage_cones(const FanMap& map, int sigma);

}  // namespace mincomplex
