#pragma once

// Graded linear algebra over the polynomial rings of cones. Linear forms sit
// in internal degree 2; every computation is done one internal degree at a
// time on a finite window of degrees.

#include "mincomplex/fan.hpp"
#include "mincomplex/linalg.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace mincomplex {

using Exponent = std::vector<int>;

/// Monomials of total degree `degree` in `nvars` variables, lexicographically
/// descending (x0^m first). Empty for negative degree.
const std::vector<Exponent>& monomials(int nvars, int degree);
Index monomial_count(int nvars, int degree);
/// Position of `e` inside monomials(e.size(), |e|).
Index monomial_index(const Exponent& e);

class RingRestriction;

/// Sparse polynomial with rational coefficients.
class Polynomial {
 public:
  explicit Polynomial(int nvars = 0) : nvars_(nvars) {}
  static Polynomial constant(int nvars, const Rational& c);
  static Polynomial variable(int nvars, int i);
  static Polynomial monomial(const Exponent& e, const Rational& c = Rational(1));

  int nvars() const { return nvars_; }
  const std::map<Exponent, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_homogeneous() const;
  /// Twice the total degree; requires a nonzero homogeneous polynomial.
  int internal_degree() const;

  void add_term(const Exponent& e, const Rational& c);
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;
  Polynomial operator-() const { return *this * Rational(-1); }
  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  /// Coefficient vector in monomials(nvars, m); the polynomial must be
  /// homogeneous of total degree m (or zero).
  QVector coefficients(int m) const;
  static Polynomial from_coefficients(int nvars, int m, const QVector& c);

  std::string to_string() const;

 private:
  int nvars_;
  std::map<Exponent, Rational> terms_;
};

/// The graded ring of polynomial functions on span(cone), with coordinates
/// given by an ordered basis of the span (columns of `basis`).
class ConeRing {
 public:
  ConeRing() = default;
  explicit ConeRing(QMatrix basis) : basis_(std::move(basis)) {}
  static ConeRing of_cone(const Fan& fan, int cone);
  /// Standard coordinates on the whole space.
  static ConeRing ambient(int n);

  int nvars() const { return static_cast<int>(basis_.cols()); }
  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  const QMatrix& basis() const { return basis_; }

 private:
  QMatrix basis_;
};

/// Restriction of functions from span(from) to a subspace span(to): source
/// coordinate x_i becomes sum_j substitution(i, j) t_j.
class RingRestriction {
 public:
  RingRestriction() : RingRestriction(QMatrix(0, 0)) {}
  explicit RingRestriction(QMatrix substitution);
  static RingRestriction between(const ConeRing& from, const ConeRing& to);
  static RingRestriction identity(int nvars);

  int source_vars() const { return static_cast<int>(substitution_.rows()); }
  int target_vars() const { return static_cast<int>(substitution_.cols()); }
  const QMatrix& substitution() const { return substitution_; }

  /// Column c: the restriction of monomials(source_vars, m)[c] expanded in
  /// monomials(target_vars, m).
  const QMatrix& degree_matrix(int m) const;
  Polynomial apply(const Polynomial& p) const;

 private:
  struct Cache {
    std::mutex mutex;
    std::map<int, std::unique_ptr<QMatrix>> by_degree;
  };
  QMatrix substitution_;
  std::shared_ptr<Cache> cache_;
};

/// Free graded module over a polynomial ring in `nvars` variables; the
/// degree-d piece has basis (generator j, monomial of degree (d - deg_j)/2)
/// ordered by generator then monomial.
struct FreeGradedModule {
  int nvars = 0;
  std::vector<int> generator_degrees;

  FreeGradedModule() = default;
  FreeGradedModule(int vars, std::vector<int> degrees) : nvars(vars), generator_degrees(std::move(degrees)) {}

  Index rank() const { return static_cast<Index>(generator_degrees.size()); }
  bool is_zero() const { return generator_degrees.empty(); }
  /// Monomial degree for generator j in internal degree d, or -1 if empty.
  int monomial_degree(std::size_t j, int d) const;
  Index dimension(int d) const;
  /// Offset of generator j's block in the degree-d piece.
  Index offset(std::size_t j, int d) const;

  /// Splits a degree-d element into one polynomial per generator.
  std::vector<Polynomial> to_polynomials(int d, const QVector& v) const;
  QVector from_polynomials(int d, const std::vector<Polynomial>& p) const;

  bool operator==(const FreeGradedModule& o) const = default;
};

FreeGradedModule direct_sum(const FreeGradedModule& a, const FreeGradedModule& b);

/// A morphism of free modules compatible with a ring restriction. Entry (i, j)
/// lies in the target ring and has internal degree deg(source j) - deg(target i).
struct PolyMatrix {
  FreeGradedModule source;
  FreeGradedModule target;
  RingRestriction restriction;
  std::vector<std::vector<Polynomial>> entries;  // [target generator][source generator]

  static PolyMatrix zero(FreeGradedModule source, FreeGradedModule target, RingRestriction restriction);

  /// target_d x source_d matrix of the map on degree-d pieces.
  QMatrix at_degree(int d) const;
  bool is_zero() const;
  /// First entry violating homogeneity, if any.
  std::optional<std::pair<int, int>> inhomogeneous_entry() const;
};

/// second o first. `second.restriction` must restrict from first's target ring.
PolyMatrix compose(const PolyMatrix& second, const PolyMatrix& first);
PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix operator*(const Rational& c, const PolyMatrix& a);

/// Builds the matrix whose column j is images[j], an element of the target's
/// degree piece at the degree of source generator j.
PolyMatrix polymatrix_from_images(FreeGradedModule source, FreeGradedModule target, RingRestriction restriction,
                                  const std::vector<QVector>& images);

/// Inclusive range of internal degrees.
struct Window {
  int lo = 0;
  int hi = 0;

  bool contains(int d) const { return d >= lo && d <= hi; }
  std::vector<int> degrees() const;
  int width() const { return hi - lo; }
  /// [-n, degree_max], with degree_max defaulting to -n + 2(n + 2).
  static Window standard(int n, std::optional<int> degree_max = std::nullopt);
  Window shifted(int by) const { return {lo + by, hi + by}; }
};

using HilbertFunction = std::map<int, Index>;

HilbertFunction hilbert_function(const FreeGradedModule& m, const Window& w);

/// One summand of an ambient: a free module over its own ring together with
/// the restriction from the acting ring.
struct ModuleBlock {
  FreeGradedModule module;
  RingRestriction action;
};

/// Direct sum of free modules over possibly different rings, viewed as a
/// module over one acting ring through the restrictions.
class GradedAmbient {
 public:
  GradedAmbient() = default;
  GradedAmbient(int acting_vars, std::vector<ModuleBlock> blocks);
  static GradedAmbient of(const FreeGradedModule& m);

  int acting_vars() const { return acting_vars_; }
  const std::vector<ModuleBlock>& blocks() const { return blocks_; }
  Index dimension(int d) const;
  Index block_offset(std::size_t b, int d) const;
  /// Multiplication by acting variable `var`, degree d -> d + 2.
  const QMatrix& variable_action(int var, int d) const;

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::pair<int, int>, std::unique_ptr<QMatrix>> actions;
  };
  int acting_vars_ = 0;
  std::vector<ModuleBlock> blocks_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// The map from the free module on `degrees` (over the acting ring) into an
/// ambient, sending generator j to images[j].
class GeneratedMap {
 public:
  GeneratedMap() = default;
  GeneratedMap(GradedAmbient ambient, std::vector<int> degrees, std::vector<QVector> images);

  const GradedAmbient& ambient() const { return ambient_; }
  const FreeGradedModule& free_module() const { return free_; }
  const std::vector<QVector>& images() const { return images_; }
  /// ambient_d x free_d.
  const QMatrix& at_degree(int d) const;

 private:
  struct Cache {
    std::mutex mutex;
    std::map<int, std::unique_ptr<QMatrix>> by_degree;
  };
  GradedAmbient ambient_;
  FreeGradedModule free_;
  std::vector<QVector> images_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// A graded subspace of an ambient, stored degreewise on a window.
class GradedSubspaceFamily {
 public:
  GradedSubspaceFamily() = default;
  GradedSubspaceFamily(GradedAmbient ambient, Window window);

  const GradedAmbient& ambient() const { return ambient_; }
  const Window& window() const { return window_; }
  /// Basis columns of the degree-d piece (zero columns outside the window).
  QMatrix piece(int d) const;
  void set_piece(int d, QMatrix basis);
  Index dimension(int d) const;
  /// x * Z_d within Z_{d+2} for every acting variable on the window.
  bool is_multiplication_closed() const;

 private:
  GradedAmbient ambient_;
  Window window_;
  std::map<int, QMatrix> pieces_;
};

HilbertFunction hilbert_function(const GradedSubspaceFamily& z);

/// Kernel family of a degree-preserving map given degreewise.
GradedSubspaceFamily kernel_family(const GradedAmbient& source, const Window& w,
                                   const std::function<QMatrix(int)>& matrix_at);
GradedSubspaceFamily kernel_degreewise(const PolyMatrix& f, const Window& w);

struct Generator {
  int degree = 0;
  QVector representative;
};

/// Representatives of a basis of Z / m Z, chosen greedily against the
/// canonical basis of each piece. Throws WindowExhausted (tagged with
/// `cone_label`) when generators appear in the top two degrees of the window.
std::vector<Generator> minimal_generators(const GradedSubspaceFamily& z, int cone_label = -1);

struct FreeCover {
  FreeGradedModule module;
  GeneratedMap map;
  std::vector<Generator> generators;
  /// Hilbert functions of module, image and Z agree on the window.
  bool certified_free = false;
};

FreeCover minimal_free_cover(const GradedSubspaceFamily& z, int cone_label = -1);

/// Intersection of the family with the span of the given ambient subspaces.
GradedSubspaceFamily intersect(const GradedSubspaceFamily& z, const std::function<QMatrix(int)>& subspace_at);

struct Splitting {
  /// New free basis of L: first `k_count` span L_K, the rest span L_N.
  std::vector<int> degrees;
  std::vector<QVector> elements;  // in L's degree pieces
  std::size_t k_count = 0;
};

/// Given d : L -> Z surjective on the window and Z = Z_K + Z_N degreewise,
/// finds L = L_K + L_N with d(L_K) = Z_K, d(L_N) = Z_N and L_K -> Z_K an
/// isomorphism modulo the maximal ideal.
Splitting split_surjection(const GeneratedMap& d, const GradedSubspaceFamily& z_k,
                           const GradedSubspaceFamily& z_n);

/// Cone rings and restriction maps for every cone of a fan.
class FanRings {
 public:
  explicit FanRings(FanPtr fan);

  const Fan& fan() const { return *fan_; }
  const FanPtr& fan_ptr() const { return fan_; }
  const ConeRing& ring(int cone) const { return rings_.at(static_cast<std::size_t>(cone)); }
  const ConeRing& ambient() const { return ambient_; }
  /// Restriction from the ring of sigma to that of its face tau.
  const RingRestriction& restriction(int sigma, int tau) const;
  const RingRestriction& from_ambient(int cone) const;

 private:
  FanPtr fan_;
  std::vector<ConeRing> rings_;
  ConeRing ambient_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<RingRestriction>> restrictions_;
  mutable std::map<int, std::unique_ptr<RingRestriction>> ambient_restrictions_;
};

using FanRingsPtr = std::shared_ptr<const FanRings>;

}  // namespace mincomplex
