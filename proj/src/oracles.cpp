#include "mincomplex/oracles.hpp"

#include "mincomplex/errors.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace mincomplex {

namespace {

IntPoly multiply(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  IntPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

void add_into(IntPoly& acc, const IntPoly& p) {
  if (acc.size() < p.size()) acc.resize(p.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) acc[i] += p[i];
}

IntPoly t_minus_one_power(int e) {
  IntPoly out{1};
  for (int i = 0; i < e; ++i) out = multiply(out, IntPoly{-1, 1});
  return out;
}

void trim(IntPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

IntPoly truncate_difference(const IntPoly& h, int dim) {
  if (dim < 0) return {1};
  IntPoly g;
  for (int i = 0; i <= dim / 2; ++i) {
    const std::int64_t hi = i < static_cast<int>(h.size()) ? h[static_cast<std::size_t>(i)] : 0;
    const std::int64_t prev = i > 0 && i - 1 < static_cast<int>(h.size()) ? h[static_cast<std::size_t>(i - 1)] : 0;
    g.push_back(hi - prev);
  }
  trim(g);
  return g;
}

struct Recursion {
  const FaceLattice& lattice;
  std::map<int, IntPoly> h_memo;

  IntPoly h(int element) {
    if (auto it = h_memo.find(element); it != h_memo.end()) return it->second;
    const int dim = lattice.dims[static_cast<std::size_t>(element)];
    IntPoly out;
    if (dim < 0) {
      out = {1};
    } else {
      for (int g : lattice.below[static_cast<std::size_t>(element)]) {
        const int gdim = lattice.dims[static_cast<std::size_t>(g)];
        add_into(out, multiply(truncate_difference(h(g), gdim), t_minus_one_power(dim - 1 - gdim)));
      }
      trim(out);
    }
    h_memo[element] = out;
    return out;
  }
};

}  // namespace

FaceLattice FaceLattice::of_cone(const Fan& fan, int cone) {
  std::vector<int> faces = fan.cone(cone).faces;
  std::sort(faces.begin(), faces.end(), [&](int a, int b) {
    return std::make_pair(fan.cone(a).dim, a) < std::make_pair(fan.cone(b).dim, b);
  });
  std::map<int, int> index;
  for (std::size_t i = 0; i < faces.size(); ++i) index[faces[i]] = static_cast<int>(i);
  FaceLattice lattice;
  for (int f : faces) {
    lattice.dims.push_back(fan.cone(f).dim - 1);
    std::vector<int> below;
    for (int g : fan.cone(f).faces)
      if (g != f) below.push_back(index.at(g));
    std::sort(below.begin(), below.end());
    lattice.below.push_back(std::move(below));
  }
  lattice.top = index.at(cone);
  return lattice;
}

bool FaceLattice::is_eulerian_diamond() const {
  for (std::size_t y = 0; y < dims.size(); ++y) {
    for (int x : below[y]) {
      if (dims[y] - dims[static_cast<std::size_t>(x)] != 2) continue;
      int middle = 0;
      for (int z : below[y]) {
        const auto& bz = below[static_cast<std::size_t>(z)];
        if (dims[static_cast<std::size_t>(z)] == dims[y] - 1 && std::binary_search(bz.begin(), bz.end(), x))
          ++middle;
      }
      if (middle != 2) return false;
    }
  }
  return true;
}

IntPoly f_vector(const Fan& fan) {
  IntPoly f(static_cast<std::size_t>(fan.ambient_dim() + 1), 0);
  for (const Cone& c : fan.cones())
    if (c.dim <= fan.ambient_dim()) ++f[static_cast<std::size_t>(c.dim)];
  return f;
}

IntPoly h_vector(const Fan& fan) {
  if (!is_complete(fan)) throw InputError("h-vector needs a complete fan");
  for (int c = 0; c < fan.size(); ++c)
    if (!fan.is_simplicial(c)) throw InputError("h-vector needs a simplicial fan (cone " + std::to_string(c) + ")");
  const int n = fan.ambient_dim();
  const IntPoly f = f_vector(fan);
  IntPoly sum;
  for (int i = 0; i <= n; ++i) {
    IntPoly term = t_minus_one_power(n - i);
    for (auto& c : term) c *= f[static_cast<std::size_t>(i)];
    add_into(sum, term);
  }
  sum.resize(static_cast<std::size_t>(n + 1), 0);
  // h_j is the coefficient of t^{n-j}.
  IntPoly h(sum.rbegin(), sum.rend());
  return h;
}

IntPoly toric_h(const FaceLattice& lattice, int element) {
  Recursion r{lattice, {}};
  return r.h(element);
}

IntPoly g_polynomial(const FaceLattice& lattice) {
  Recursion r{lattice, {}};
  return truncate_difference(r.h(lattice.top), lattice.dims[static_cast<std::size_t>(lattice.top)]);
}

std::vector<int> degrees_from_coefficients(const IntPoly& c, int n) {
  std::vector<int> out;
  for (std::size_t j = 0; j < c.size(); ++j)
    for (std::int64_t k = 0; k < c[j]; ++k) out.push_back(-n + 2 * static_cast<int>(j));
  return out;
}

}  // namespace mincomplex
