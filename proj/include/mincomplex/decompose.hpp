#pragma once

#include "mincomplex/minimal.hpp"
#include "mincomplex/pushforward.hpp"

#include <map>
#include <vector>

namespace mincomplex {

/// m copies of K[cone](shift).
struct Summand {
  int cone = 0;
  int shift = 0;
  int multiplicity = 0;

  bool operator==(const Summand&) const = default;
};

struct DecompositionReport {
  Window window;
  /// Sorted by (cone dimension, cone id, shift).
  std::vector<Summand> summands;
  /// Input was locally free and locally exact.
  Certificate preconditions;
  /// Generator multisets and Hilbert functions reproduced exactly at every cone.
  Certificate bookkeeping;
  /// Only filled by decomposition_theorem_report: the pushforward
  /// certificates and the uniqueness of the summand based at o.
  Certificate pushforward;
  Certificate theorem;
  /// Exactly one summand based at o, namely (o, 0) with multiplicity 1.
  bool base_summand_unique = false;

  bool ok() const { return preconditions.ok && bookkeeping.ok && pushforward.ok && theorem.ok; }
};

/// Normalizes a list of summands: merges equal (cone, shift), drops zeros, sorts.
std::vector<Summand> normalize_summands(const Fan& fan, std::vector<Summand> s);

/// Cache of K[rho](0) built on a window starting at the base degree.
class ShiftedCache {
 public:
  ShiftedCache(FanPtr fan, int width, ConeOrder order) : fan_(std::move(fan)), width_(width), order_(order) {}
  /// Generator degrees of K[rho](k) at cone sigma.
  std::vector<int> stalk(int rho, int k, int sigma);
  const MinimalComplex& base(int rho);

 private:
  FanPtr fan_;
  int width_;
  ConeOrder order_;
  std::map<int, MinimalComplex> built_;
};

/// Greedy residual bookkeeping over cones in increasing dimension.
DecompositionReport decomposition_multiplicities(const FanComplex& m, const Window& w,
                                                 ConeOrder order = ConeOrder::canonical);

struct PeelResult {
  /// Flattened K[tau] (x) (M_tau mod m): one summand per generator degree.
  std::vector<Summand> summands;
  FanComplex summand_complex;
  FanComplex complement;
  /// Per cone: the new free basis of M_sigma (K part first) as a map into M_sigma.
  std::map<int, PolyMatrix> change_of_basis;
  std::map<int, std::size_t> k_rank;
};

/// Splits off the summand generated by M_tau, where tau has the smallest
/// dimension among cones with a nonzero component.
PeelResult peel_summand(const FanComplex& m, int tau, const Window& w);

struct PeelRun {
  std::vector<Summand> summands;
  /// One entry per peel: validity of the complement.
  std::vector<Certificate> complement_checks;
  bool ok() const;
};

/// Peels at the first cone of minimal dimension until nothing is left.
PeelRun iterated_peel(const FanComplex& m, const Window& w);

/// K on the source, pi_*, the pushforward certificates, and multiplicities.
DecompositionReport decomposition_theorem_report(const FanMap& map, const Window& w,
                                                 ConeOrder order = ConeOrder::canonical);

}  // namespace mincomplex
