#include "mincomplex/fan.hpp"

#include "mincomplex/errors.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace mincomplex {

namespace {

QMatrix column_matrix(int n, const std::vector<RayVector>& vs) {
  QMatrix m(n, static_cast<Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) m.col(static_cast<Index>(j)) = to_rational(vs[j]);
  return m;
}

QMatrix select_columns(const QMatrix& m, const std::vector<int>& cols) {
  QMatrix out(m.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = m.col(cols[j]);
  return out;
}

QMatrix vstack(const QMatrix& a, const QMatrix& b) {
  QMatrix out(a.rows() + b.rows(), std::max(a.cols(), b.cols()));
  if (a.rows() > 0) out.topRows(a.rows()) = a;
  if (b.rows() > 0) out.bottomRows(b.rows()) = b;
  return out;
}

// Calls f on every k-subset of {0..m-1} in lexicographic order.
void for_each_subset(int m, int k, const std::function<void(const std::vector<int>&)>& f) {
  if (k < 0 || k > m) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Extreme rays of the pointed cone {x : E x = 0, N x >= 0}.
std::vector<QVector> extreme_rays(int n, const QMatrix& eq, const QMatrix& ineq) {
  std::vector<QVector> out;
  const Index free_dim = n - rank(eq);
  if (free_dim <= 0) return out;
  auto feasible = [&](const QVector& v) {
    for (Index i = 0; i < ineq.rows(); ++i)
      if (ineq.row(i).dot(v) < 0) return false;
    return true;
  };
  for_each_subset(static_cast<int>(ineq.rows()), static_cast<int>(free_dim - 1), [&](const std::vector<int>& rows) {
    QMatrix m(eq.rows() + static_cast<Index>(rows.size()), n);
    if (eq.rows() > 0) m.topRows(eq.rows()) = eq;
    for (std::size_t i = 0; i < rows.size(); ++i) m.row(eq.rows() + static_cast<Index>(i)) = ineq.row(rows[i]);
    QMatrix k = kernel(m);
    if (k.cols() != 1) return;
    QVector v = k.col(0);
    if (feasible(v)) {
      out.push_back(v);
    } else if (feasible(-v)) {
      out.push_back(-v);
    }
  });
  return out;
}

bool in_span(const QMatrix& span_cols, const QVector& v) {
  if (span_cols.cols() == 0) return v.isZero();
  return rank(span_cols) == rank(hstack<Rational>(span_cols, QMatrix(v)));
}

std::vector<int> greedy_basis(const QMatrix& gens) {
  EchelonBasis<Rational> eb(gens.rows());
  std::vector<int> basis;
  for (Index j = 0; j < gens.cols(); ++j)
    if (eb.insert(gens.col(j))) basis.push_back(static_cast<int>(j));
  return basis;
}

std::string ray_text(const RayVector& r) {
  std::ostringstream os;
  os << "(";
  for (Index i = 0; i < r.size(); ++i) os << (i ? "," : "") << r(i);
  os << ")";
  return os.str();
}

}  // namespace

QVector to_rational(const RayVector& v) {
  QVector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out(i) = Rational(static_cast<long long>(v(i)));
  return out;
}

RayVector primitive(const RayVector& v) {
  std::int64_t g = 0;
  for (Index i = 0; i < v.size(); ++i) g = std::gcd(g, v(i) < 0 ? -v(i) : v(i));
  if (g == 0) throw InputError("zero ray");
  RayVector out = v;
  for (Index i = 0; i < v.size(); ++i) out(i) = v(i) / g;
  return out;
}

bool ConeGeometry::contains(const QVector& x) const {
  for (Index i = 0; i < equations.rows(); ++i)
    if (!is_zero(Rational(equations.row(i).dot(x)))) return false;
  for (Index i = 0; i < facet_normals.rows(); ++i)
    if (facet_normals.row(i).dot(x) < 0) return false;
  return true;
}

ConeGeometry cone_geometry(int ambient_dim, const std::vector<RayVector>& generators) {
  ConeGeometry g;
  const int m = static_cast<int>(generators.size());
  const QMatrix gens = column_matrix(ambient_dim, generators);
  g.dim = static_cast<int>(rank(gens));
  g.equations = m == 0 ? QMatrix(QMatrix::Identity(ambient_dim, ambient_dim)) : annihilator(gens);
  std::vector<int> all(static_cast<std::size_t>(m));
  std::iota(all.begin(), all.end(), 0);
  if (g.dim == 0) {
    g.facet_normals = QMatrix(0, ambient_dim);
    g.faces = {{}};
    return g;
  }

  std::vector<QVector> normals;
  for_each_subset(m, g.dim - 1, [&](const std::vector<int>& subset) {
    for (const auto& f : g.facets)
      if (subset_of(subset, f)) return;
    QMatrix sys(static_cast<Index>(subset.size()) + g.equations.rows(), ambient_dim);
    for (std::size_t i = 0; i < subset.size(); ++i) sys.row(static_cast<Index>(i)) = gens.col(subset[i]).transpose();
    if (g.equations.rows() > 0) sys.bottomRows(g.equations.rows()) = g.equations;
    QMatrix k = kernel(sys);
    if (k.cols() != 1) return;
    QVector h = k.col(0);
    QVector values = gens.transpose() * h;
    bool has_pos = false, has_neg = false;
    for (Index j = 0; j < m; ++j) {
      if (values(j) > 0) has_pos = true;
      if (values(j) < 0) has_neg = true;
    }
    if (has_pos && has_neg) return;
    if (has_neg) {
      h = -h;
      values = -values;
    }
    std::vector<int> zero_set;
    for (Index j = 0; j < m; ++j)
      if (is_zero(Rational(values(j)))) zero_set.push_back(static_cast<int>(j));
    g.facets.push_back(zero_set);
    normals.push_back(h);
  });

  g.facet_normals = QMatrix(static_cast<Index>(normals.size()), ambient_dim);
  for (std::size_t i = 0; i < normals.size(); ++i) g.facet_normals.row(static_cast<Index>(i)) = normals[i].transpose();
  g.pointed = rank(vstack(g.facet_normals, g.equations)) == ambient_dim;
  if (!g.pointed) return g;

  std::set<std::vector<int>> faces{all};
  std::vector<std::vector<int>> frontier{all};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& f : frontier) {
      for (const auto& facet : g.facets) {
        auto x = intersect(f, facet);
        if (faces.insert(x).second) next.push_back(x);
      }
    }
    frontier = std::move(next);
  }
  g.faces.assign(faces.begin(), faces.end());
  for (const auto& f : g.faces)
    if (f.size() == 1) g.extreme.push_back(f[0]);
  if (g.dim == 1 && m == 1) g.extreme = {0};
  std::sort(g.extreme.begin(), g.extreme.end());
  g.extreme.erase(std::unique(g.extreme.begin(), g.extreme.end()), g.extreme.end());
  return g;
}

Fan Fan::from_cones(int ambient_dim, std::vector<RayVector> rays, const std::vector<std::vector<int>>& cones) {
  if (ambient_dim < 0) throw InputError("negative ambient dimension");
  Fan fan;
  fan.ambient_dim_ = ambient_dim;
  for (auto& r : rays) {
    if (r.size() != ambient_dim) throw InputError("ray " + ray_text(r) + " has wrong length");
    RayVector p = primitive(r);
    if (p != r) fan.normalized_ = true;
    r = p;
  }
  for (std::size_t i = 0; i < rays.size(); ++i)
    for (std::size_t j = i + 1; j < rays.size(); ++j)
      if (rays[i] == rays[j]) throw InputError("duplicate ray " + ray_text(rays[i]));

  std::vector<bool> used(rays.size(), false);
  for (const auto& c : cones) {
    std::set<int> seen;
    for (int r : c) {
      if (r < 0 || static_cast<std::size_t>(r) >= rays.size())
        throw InputError("cone references unknown ray " + std::to_string(r));
      if (!seen.insert(r).second) throw InputError("cone lists ray " + std::to_string(r) + " twice");
      used[static_cast<std::size_t>(r)] = true;
    }
  }
  for (std::size_t i = 0; i < rays.size(); ++i)
    if (!used[i]) throw InputError("ray " + std::to_string(i) + " is not used by any cone");

  // Canonical ray order.
  std::vector<int> perm(rays.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    const auto& x = rays[static_cast<std::size_t>(a)];
    const auto& y = rays[static_cast<std::size_t>(b)];
    return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(), y.data() + y.size());
  });
  std::vector<int> new_index(rays.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    new_index[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
    fan.rays_.push_back(rays[static_cast<std::size_t>(perm[i])]);
  }

  std::set<std::vector<int>> listed;
  for (const auto& c : cones) {
    std::vector<int> key;
    for (int r : c) key.push_back(new_index[static_cast<std::size_t>(r)]);
    std::sort(key.begin(), key.end());
    listed.insert(key);
  }

  auto gens_of = [&](const std::vector<int>& key) {
    std::vector<RayVector> g;
    for (int r : key) g.push_back(fan.rays_[static_cast<std::size_t>(r)]);
    return g;
  };
  auto cone_name = [&](const std::vector<int>& key) {
    std::string s = "{";
    for (std::size_t i = 0; i < key.size(); ++i) s += (i ? " " : "") + ray_text(fan.rays_[static_cast<std::size_t>(key[i])]);
    return s + "}";
  };

  std::map<std::vector<int>, ConeGeometry> geometry;
  std::set<std::vector<int>> all_faces{{}};
  std::map<std::vector<int>, std::set<std::vector<int>>> listed_faces;
  for (const auto& key : listed) {
    ConeGeometry g = cone_geometry(ambient_dim, gens_of(key));
    if (!g.pointed) throw InputError("cone " + cone_name(key) + " is not strictly convex");
    if (g.extreme.size() != key.size())
      throw InputError("cone " + cone_name(key) + " has a generator that is not an extreme ray");
    for (const auto& f : g.faces) {
      std::vector<int> face;
      for (int i : f) face.push_back(key[static_cast<std::size_t>(i)]);
      all_faces.insert(face);
      listed_faces[key].insert(face);
    }
    geometry.emplace(key, std::move(g));
  }

  // Pairwise intersections must be common faces.
  std::vector<std::vector<int>> listed_vec(listed.begin(), listed.end());
  for (std::size_t a = 0; a < listed_vec.size(); ++a) {
    for (std::size_t b = a + 1; b < listed_vec.size(); ++b) {
      const auto& ka = listed_vec[a];
      const auto& kb = listed_vec[b];
      auto common = intersect(ka, kb);
      const std::string pair = cone_name(ka) + " and " + cone_name(kb);
      if (!listed_faces[ka].count(common) || !listed_faces[kb].count(common))
        throw InputError("cones " + pair + " do not meet in a common face");
      const auto& ga = geometry.at(ka);
      const auto& gb = geometry.at(kb);
      QMatrix eq = vstack(ga.equations, gb.equations);
      QMatrix ineq = vstack(ga.facet_normals, gb.facet_normals);
      QMatrix span = column_matrix(ambient_dim, gens_of(common));
      for (const auto& v : extreme_rays(ambient_dim, eq, ineq)) {
        if (!in_span(span, v)) throw InputError("cones " + pair + " overlap");
      }
    }
  }

  std::vector<std::vector<int>> order(all_faces.begin(), all_faces.end());
  std::map<std::vector<int>, int> dims;
  for (const auto& key : order) dims[key] = static_cast<int>(rank(column_matrix(ambient_dim, gens_of(key))));
  std::stable_sort(order.begin(), order.end(), [&](const auto& x, const auto& y) {
    if (dims[x] != dims[y]) return dims[x] < dims[y];
    return x < y;
  });
  for (std::size_t i = 0; i < order.size(); ++i) fan.index_[order[i]] = static_cast<int>(i);

  fan.cones_.resize(order.size());
  fan.cofacets_.assign(order.size(), {});
  for (std::size_t id = 0; id < order.size(); ++id) {
    Cone& c = fan.cones_[id];
    c.rays = order[id];
    c.dim = dims[c.rays];
    ConeGeometry g = cone_geometry(ambient_dim, gens_of(c.rays));
    c.equations = g.equations;
    QMatrix gens = column_matrix(ambient_dim, gens_of(c.rays));
    for (int j : greedy_basis(gens)) c.basis.push_back(c.rays[static_cast<std::size_t>(j)]);
    std::vector<std::pair<int, QVector>> facets;
    for (const auto& f : g.faces) {
      std::vector<int> face;
      for (int i : f) face.push_back(c.rays[static_cast<std::size_t>(i)]);
      auto it = fan.index_.find(face);
      if (it == fan.index_.end()) throw InputError("internal: face missing from closure");
      c.faces.push_back(it->second);
    }
    std::sort(c.faces.begin(), c.faces.end());
    for (std::size_t fi = 0; fi < g.facets.size(); ++fi) {
      std::vector<int> face;
      for (int i : g.facets[fi]) face.push_back(c.rays[static_cast<std::size_t>(i)]);
      facets.emplace_back(fan.index_.at(face), g.facet_normals.row(static_cast<Index>(fi)).transpose());
    }
    std::sort(facets.begin(), facets.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    c.facet_normals = QMatrix(static_cast<Index>(facets.size()), ambient_dim);
    for (std::size_t i = 0; i < facets.size(); ++i) {
      c.facets.push_back(facets[i].first);
      c.facet_normals.row(static_cast<Index>(i)) = facets[i].second.transpose();
    }
    for (int f : c.faces) fan.cofacets_[static_cast<std::size_t>(f)].push_back(static_cast<int>(id));
  }

  fan.signs_.resize(order.size());
  for (std::size_t id = 0; id < order.size(); ++id) {
    const Cone& sigma = fan.cones_[id];
    QMatrix basis(ambient_dim, sigma.dim);
    for (int i = 0; i < sigma.dim; ++i) basis.col(i) = to_rational(fan.rays_[static_cast<std::size_t>(sigma.basis[static_cast<std::size_t>(i)])]);
    for (int t : sigma.facets) {
      const Cone& tau = fan.cones_[static_cast<std::size_t>(t)];
      QMatrix frame(ambient_dim, sigma.dim);
      for (int i = 0; i < tau.dim; ++i) frame.col(i) = to_rational(fan.rays_[static_cast<std::size_t>(tau.basis[static_cast<std::size_t>(i)])]);
      int outside = -1;
      for (int r : sigma.rays)
        if (!std::binary_search(tau.rays.begin(), tau.rays.end(), r)) {
          outside = r;
          break;
        }
      frame.col(sigma.dim - 1) = to_rational(fan.rays_[static_cast<std::size_t>(outside)]);
      auto coords = solve_many(basis, frame);
      const Rational det = determinant(*coords);
      fan.signs_[id].push_back(det > 0 ? 1 : -1);
    }
  }
  return fan;
}

int Fan::dim() const {
  int d = 0;
  for (const auto& c : cones_) d = std::max(d, c.dim);
  return d;
}

std::vector<int> Fan::cones_of_dim(int d) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (cones_[static_cast<std::size_t>(i)].dim == d) out.push_back(i);
  return out;
}

std::optional<int> Fan::find_cone(std::vector<int> rays) const {
  std::sort(rays.begin(), rays.end());
  auto it = index_.find(rays);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Fan::find_ray(const RayVector& ray) const {
  RayVector p = primitive(ray);
  for (std::size_t i = 0; i < rays_.size(); ++i)
    if (rays_[i] == p) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> Fan::find_cone(const std::vector<RayVector>& rays) const {
  std::vector<int> ids;
  for (const auto& r : rays) {
    auto id = find_ray(r);
    if (!id) return std::nullopt;
    ids.push_back(*id);
  }
  return find_cone(std::move(ids));
}

bool Fan::is_face(int tau, int sigma) const {
  const auto& f = cone(sigma).faces;
  return std::binary_search(f.begin(), f.end(), tau);
}

bool Fan::is_facet(int tau, int sigma) const {
  const auto& f = cone(sigma).facets;
  return std::find(f.begin(), f.end(), tau) != f.end();
}

std::vector<int> Fan::star(int sigma) const {
  if (sigma < 0 || sigma >= size()) throw InputError("cone " + std::to_string(sigma) + " is not in the fan");
  return cofacets_[static_cast<std::size_t>(sigma)];
}

std::vector<int> Fan::ridges(int sigma) const {
  std::vector<int> out;
  for (int f : cone(sigma).faces)
    if (cone(f).dim == cone(sigma).dim - 2) out.push_back(f);
  return out;
}

std::vector<int> Fan::maximal_cones() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (cofacets_[static_cast<std::size_t>(i)].size() == 1) out.push_back(i);
  return out;
}

int Fan::incidence_sign(int sigma, int tau) const {
  const auto& f = cone(sigma).facets;
  auto it = std::find(f.begin(), f.end(), tau);
  if (it == f.end()) throw std::invalid_argument("incidence_sign: not a facet");
  return signs_[static_cast<std::size_t>(sigma)][static_cast<std::size_t>(it - f.begin())];
}

bool Fan::is_simplicial(int c) const {
  return static_cast<int>(cone(c).rays.size()) == cone(c).dim;
}

bool Fan::contains_point(int c, const QVector& x) const {
  const Cone& k = cone(c);
  for (Index i = 0; i < k.equations.rows(); ++i)
    if (!is_zero(Rational(k.equations.row(i).dot(x)))) return false;
  for (Index i = 0; i < k.facet_normals.rows(); ++i)
    if (k.facet_normals.row(i).dot(x) < 0) return false;
  return true;
}

std::pair<Fan, std::vector<int>> Fan::subfan(const std::vector<int>& cone_ids) const {
  std::set<int> ids(cone_ids.begin(), cone_ids.end());
  ids.insert(0);
  for (int c : ids) {
    if (c < 0 || c >= size()) throw InputError("subfan references unknown cone " + std::to_string(c));
    for (int f : cone(c).faces)
      if (!ids.count(f)) throw InputError("subfan is not closed under faces");
  }
  std::vector<int> used_rays;
  for (int c : ids)
    for (int r : cone(c).rays) used_rays.push_back(r);
  std::sort(used_rays.begin(), used_rays.end());
  used_rays.erase(std::unique(used_rays.begin(), used_rays.end()), used_rays.end());
  std::vector<RayVector> rays;
  std::map<int, int> remap;
  for (int r : used_rays) {
    remap[r] = static_cast<int>(rays.size());
    rays.push_back(rays_[static_cast<std::size_t>(r)]);
  }
  std::vector<std::vector<int>> cones;
  for (int c : ids) {
    std::vector<int> k;
    for (int r : cone(c).rays) k.push_back(remap[r]);
    cones.push_back(k);
  }
  Fan sub = from_cones(ambient_dim_, rays, cones);
  std::vector<int> back(static_cast<std::size_t>(sub.size()));
  for (int i = 0; i < sub.size(); ++i) {
    std::vector<RayVector> vs;
    for (int r : sub.cone(i).rays) vs.push_back(sub.rays()[static_cast<std::size_t>(r)]);
    back[static_cast<std::size_t>(i)] = *find_cone(vs);
  }
  return {std::move(sub), std::move(back)};
}

std::pair<Fan, std::vector<int>> Fan::cone_fan(int sigma) const {
  return subfan(cone(sigma).faces);
}

std::string Fan::to_text() const {
  std::ostringstream os;
  os << "dim " << ambient_dim_ << "\n";
  for (std::size_t i = 0; i < rays_.size(); ++i) {
    os << "ray " << i << ":";
    for (Index j = 0; j < rays_[i].size(); ++j) os << " " << rays_[i](j);
    os << "\n";
  }
  for (const auto& c : cones_) {
    os << "cone:";
    for (int r : c.rays) os << " " << r;
    os << "\n";
  }
  return os.str();
}

Fan parse_fan(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int n = -1;
  std::map<int, RayVector> rays;
  std::vector<std::vector<int>> cones;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    auto fail = [&](const std::string& msg) {
      throw InputError("line " + std::to_string(line_no) + ": " + msg);
    };
    if (head == "dim") {
      if (n >= 0) fail("duplicate dim line");
      if (!(ls >> n) || n < 0) fail("bad dimension");
    } else if (head == "ray") {
      if (n < 0) fail("ray before dim line");
      std::string idx;
      ls >> idx;
      if (idx.empty() || idx.back() != ':') fail("expected `ray i: coords`");
      int i = 0;
      try {
        i = std::stoi(idx.substr(0, idx.size() - 1));
      } catch (const std::exception&) {
        fail("bad ray index");
      }
      RayVector v(n);
      for (int j = 0; j < n; ++j) {
        long long x;
        if (!(ls >> x)) fail("ray needs " + std::to_string(n) + " integer coordinates");
        v(j) = x;
      }
      std::string extra;
      if (ls >> extra) fail("trailing tokens on ray line");
      if (!rays.emplace(i, v).second) fail("duplicate ray index " + std::to_string(i));
    } else if (head == "cone:") {
      std::vector<int> c;
      std::string tok;
      while (ls >> tok) {
        try {
          std::size_t pos = 0;
          c.push_back(std::stoi(tok, &pos));
          if (pos != tok.size()) fail("bad ray index `" + tok + "`");
        } catch (const std::invalid_argument&) {
          fail("bad ray index `" + tok + "`");
        }
      }
      cones.push_back(std::move(c));
    } else if (head == "map:") {
      continue;
    } else {
      fail("unrecognized line `" + head + "`");
    }
  }
  if (n < 0) throw InputError("missing `dim` line");
  std::vector<RayVector> ray_list;
  for (int i = 0; i < static_cast<int>(rays.size()); ++i) {
    auto it = rays.find(i);
    if (it == rays.end()) throw InputError("ray indices must be 0..m-1; missing " + std::to_string(i));
    ray_list.push_back(it->second);
  }
  return Fan::from_cones(n, std::move(ray_list), cones);
}

Fan read_fan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_fan(ss.str());
}

std::map<int, int> parse_map_block(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::map<int, int> out;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string head, arrow;
    int a, b;
    if (!(ls >> head) || head != "map:") continue;
    if (!(ls >> a >> arrow >> b) || arrow != "->") throw InputError("bad map line: " + line);
    out[a] = b;
  }
  return out;
}

namespace {

bool facet_connected(const Fan& fan, const std::vector<int>& top) {
  if (top.empty()) return true;
  std::set<int> seen{top[0]};
  std::vector<int> stack{top[0]};
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int f : fan.cone(s).facets)
      for (int t : fan.star(f))
        if (fan.cone(t).dim == fan.cone(s).dim && seen.insert(t).second) stack.push_back(t);
  }
  return seen.size() == top.size();
}

bool pure_full(const Fan& fan) {
  for (int m : fan.maximal_cones())
    if (fan.cone(m).dim != fan.ambient_dim()) return false;
  return true;
}

}  // namespace

bool is_complete(const Fan& fan) {
  const int n = fan.ambient_dim();
  if (n == 0) return true;
  if (!pure_full(fan)) return false;
  for (int r : fan.cones_of_dim(n - 1)) {
    int count = 0;
    for (int t : fan.star(r))
      if (fan.cone(t).dim == n) ++count;
    if (count != 2) return false;
  }
  return facet_connected(fan, fan.cones_of_dim(n));
}

bool has_convex_support(const Fan& fan) {
  const int n = fan.ambient_dim();
  if (n == 0) return true;
  if (fan.cones_of_dim(n).empty() || !pure_full(fan)) return false;
  for (int r : fan.cones_of_dim(n - 1)) {
    std::vector<int> tops;
    for (int t : fan.star(r))
      if (fan.cone(t).dim == n) tops.push_back(t);
    if (tops.size() > 2) return false;
    if (tops.size() == 2) continue;
    const Cone& top = fan.cone(tops[0]);
    auto it = std::find(top.facets.begin(), top.facets.end(), r);
    QVector h = top.facet_normals.row(it - top.facets.begin()).transpose();
    for (const auto& ray : fan.rays())
      if (h.dot(to_rational(ray)) < 0) return false;
  }
  return true;
}

QuotientFan quotient_fan(const Fan& fan, int sigma) {
  const Cone& s = fan.cone(sigma);
  const int n = fan.ambient_dim();
  QMatrix proj = s.equations;
  // Integral, primitive rows.
  for (Index i = 0; i < proj.rows(); ++i) {
    Integer l = 1;
    for (Index j = 0; j < proj.cols(); ++j) l = boost::multiprecision::lcm(l, denominator(proj(i, j)));
    proj.row(i) *= Rational(l);
    Integer g = 0;
    for (Index j = 0; j < proj.cols(); ++j) g = boost::multiprecision::gcd(g, numerator(proj(i, j)));
    if (g != 0) proj.row(i) /= Rational(g);
  }
  const int m = static_cast<int>(proj.rows());

  std::vector<RayVector> images;
  auto image_index = [&](const RayVector& v) {
    for (std::size_t i = 0; i < images.size(); ++i)
      if (images[i] == v) return static_cast<int>(i);
    images.push_back(v);
    return static_cast<int>(images.size() - 1);
  };
  std::vector<int> star = fan.star(sigma);
  std::vector<std::vector<int>> image_cones;
  for (int t : star) {
    std::vector<int> gens;
    for (int r : fan.cone(t).rays) {
      if (std::binary_search(s.rays.begin(), s.rays.end(), r)) continue;
      QVector pv = proj * to_rational(fan.rays()[static_cast<std::size_t>(r)]);
      RayVector iv(m);
      for (int j = 0; j < m; ++j) {
        if (denominator(pv(j)) != 1) throw InputError("internal: non-integral projection");
        iv(j) = numerator(pv(j)).convert_to<long long>();
      }
      if (iv.isZero()) throw InputError("quotient: ray projects to zero");
      int id = image_index(primitive(iv));
      if (std::find(gens.begin(), gens.end(), id) == gens.end()) gens.push_back(id);
    }
    std::sort(gens.begin(), gens.end());
    std::vector<RayVector> gv;
    for (int g : gens) gv.push_back(images[static_cast<std::size_t>(g)]);
    ConeGeometry geo = cone_geometry(m, gv);
    if (!geo.pointed) throw InputError("Star does not project to a fan: image cone is not strictly convex");
    std::vector<int> ext;
    for (int e : geo.extreme) ext.push_back(gens[static_cast<std::size_t>(e)]);
    image_cones.push_back(ext);
  }
  std::vector<int> used;
  for (const auto& c : image_cones) used.insert(used.end(), c.begin(), c.end());
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::vector<RayVector> rays;
  std::map<int, int> remap;
  for (int u : used) {
    remap[u] = static_cast<int>(rays.size());
    rays.push_back(images[static_cast<std::size_t>(u)]);
  }
  std::vector<std::vector<int>> cones;
  for (const auto& c : image_cones) {
    std::vector<int> k;
    for (int r : c) k.push_back(remap[r]);
    cones.push_back(k);
  }
  Fan qfan = [&] {
    try {
      return Fan::from_cones(m, rays, cones);
    } catch (const InputError& e) {
      throw InputError(std::string("Star does not project to a fan: ") + e.what());
    }
  }();

  QuotientFan out{std::move(qfan), {}, proj};
  std::set<int> hit;
  for (std::size_t i = 0; i < star.size(); ++i) {
    std::vector<RayVector> vs;
    for (int r : image_cones[i]) vs.push_back(images[static_cast<std::size_t>(r)]);
    auto id = out.fan.find_cone(vs);
    if (!id || out.fan.cone(*id).dim != fan.cone(star[i]).dim - s.dim || !hit.insert(*id).second)
      throw InputError("Star does not project isomorphically onto a fan");
    out.correspondence[star[i]] = *id;
  }
  if (static_cast<int>(hit.size()) != out.fan.size())
    throw InputError("Star does not project isomorphically onto a fan");
  (void)n;
  return out;
}

FanMap subdivision_map(FanPtr source, FanPtr target, const std::map<int, int>& explicit_assignment) {
  if (source->ambient_dim() != target->ambient_dim()) throw InputError("fans live in different spaces");
  FanMap map{source, target, {}, false};
  for (int s = 0; s < source->size(); ++s) {
    std::vector<int> containing;
    for (int t = 0; t < target->size(); ++t) {
      bool inside = true;
      for (int r : source->cone(s).rays)
        if (!target->contains_point(t, to_rational(source->rays()[static_cast<std::size_t>(r)]))) {
          inside = false;
          break;
        }
      if (inside) containing.push_back(t);
    }
    if (containing.empty())
      throw InputError("source cone " + std::to_string(s) + " is not contained in any target cone");
    int best = containing[0];
    for (int t : containing)
      if (target->cone(t).dim < target->cone(best).dim) best = t;
    for (int t : containing)
      if (!target->is_face(best, t))
        throw InputError("source cone " + std::to_string(s) + " meets the interior of two target cones");
    map.assignment.push_back(best);
  }
  for (const auto& [a, b] : explicit_assignment) {
    if (a < 0 || a >= source->size() || b < 0 || b >= target->size())
      throw InputError("map line references unknown cone");
    if (map.assignment[static_cast<std::size_t>(a)] != b)
      throw InputError("explicit assignment " + std::to_string(a) + " -> " + std::to_string(b) +
                       " is not the smallest containing cone");
  }

  map.proper = true;
  for (int t : target->maximal_cones()) {
    const int d = target->cone(t).dim;
    if (d == 0) continue;
    std::vector<int> full = preimage_cones(map, t);
    if (full.empty()) {
      map.proper = false;
      break;
    }
    for (int f : full) {
      for (int facet : source->cone(f).facets) {
        if (map.assignment[static_cast<std::size_t>(facet)] != t) continue;
        int count = 0;
        for (int g : full)
          if (source->is_facet(facet, g)) ++count;
        if (count != 2) map.proper = false;
      }
    }
    if (!map.proper) break;
  }
  return map;
}

std::vector<int> preimage_cones(const FanMap& map, int sigma) {
  std::vector<int> out;
  const int d = map.target->cone(sigma).dim;
  for (int s = 0; s < map.source->size(); ++s)
    if (map.assignment[static_cast<std::size_t>(s)] == sigma && map.source->cone(s).dim == d) out.push_back(s);
  return out;
}

}  // namespace mincomplex
