#pragma once

// Purely combinatorial invariants, computed without any module theory. They
// predict the outputs of the module engine and are used to check it.

#include "mincomplex/fan.hpp"

#include <cstdint>
#include <vector>

namespace mincomplex {

/// Face poset of a polytope; element 0 is the empty face (dimension -1).
struct FaceLattice {
  std::vector<int> dims;
  /// Proper faces of each element, as element indices.
  std::vector<std::vector<int>> below;
  int top = 0;

  /// The polytope cut out of a pointed cone by a transverse hyperplane: faces
  /// of the cone shifted down by one in dimension.
  static FaceLattice of_cone(const Fan& fan, int cone);
  /// Diamond property on every length-two interval.
  bool is_eulerian_diamond() const;
};

using IntPoly = std::vector<std::int64_t>;  // coefficient of t^i at index i

/// f_{-1}, f_0, ..., f_{n-1}: f_j counts cones of dimension j + 1.
IntPoly f_vector(const Fan& fan);

/// h_0..h_n with sum_i f_{i-1} (t-1)^{n-i} = sum_j h_j t^{n-j}.
/// Throws InputError unless the fan is complete and simplicial.
IntPoly h_vector(const Fan& fan);

/// Toric h of the interval below `element`.
IntPoly toric_h(const FaceLattice& lattice, int element);
/// Toric g of the whole polytope (the top element).
IntPoly g_polynomial(const FaceLattice& lattice);

/// {-n + 2j with multiplicity c_j}, sorted.
std::vector<int> degrees_from_coefficients(const IntPoly& c, int n);

}  // namespace mincomplex
