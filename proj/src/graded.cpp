#include "mincomplex/graded.hpp"

#include "mincomplex/errors.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mincomplex {

namespace {

struct MonomialTable {
  std::vector<Exponent> list;
  std::map<Exponent, Index> index;
  // shifts[var][i]: index of list[i] * x_var in the next degree's table.
  std::vector<std::vector<Index>> shifts;
};

std::mutex table_mutex;
std::map<std::pair<int, int>, std::unique_ptr<MonomialTable>> tables;

void enumerate(int nvars, int remaining, Exponent& current, int var, std::vector<Exponent>& out) {
  if (var == nvars - 1) {
    current[static_cast<std::size_t>(var)] = remaining;
    out.push_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[static_cast<std::size_t>(var)] = e;
    enumerate(nvars, remaining - e, current, var + 1, out);
  }
}

const MonomialTable& table(int nvars, int degree) {
  std::lock_guard<std::mutex> lock(table_mutex);
  auto& slot = tables[{nvars, degree}];
  if (!slot) {
    slot = std::make_unique<MonomialTable>();
    if (degree == 0) {
      slot->list.push_back(Exponent(static_cast<std::size_t>(nvars), 0));
    } else if (degree > 0 && nvars > 0) {
      Exponent current(static_cast<std::size_t>(nvars), 0);
      enumerate(nvars, degree, current, 0, slot->list);
    }
    for (std::size_t i = 0; i < slot->list.size(); ++i) slot->index[slot->list[i]] = static_cast<Index>(i);
  }
  return *slot;
}

const std::vector<Index>& shift_table(int nvars, int degree, int var) {
  const MonomialTable& t = table(nvars, degree);
  const MonomialTable& next = table(nvars, degree + 1);
  std::lock_guard<std::mutex> lock(table_mutex);
  auto& mt = const_cast<MonomialTable&>(t);
  if (mt.shifts.empty()) {
    mt.shifts.resize(static_cast<std::size_t>(nvars));
    for (int v = 0; v < nvars; ++v) {
      auto& s = mt.shifts[static_cast<std::size_t>(v)];
      s.reserve(t.list.size());
      for (const Exponent& e : t.list) {
        Exponent f = e;
        ++f[static_cast<std::size_t>(v)];
        s.push_back(next.index.at(f));
      }
    }
  }
  return mt.shifts[static_cast<std::size_t>(var)];
}

int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

int first_variable(const Exponent& e) {
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] > 0) return static_cast<int>(i);
  return -1;
}

// Sum of v(k) * a.col(k) over the nonzero entries of v.
QVector apply_sparse(const QMatrix& a, const QVector& v) {
  QVector out = QVector::Zero(a.rows());
  for (Index k = 0; k < v.size(); ++k) {
    if (is_zero(v(k))) continue;
    for (Index i = 0; i < a.rows(); ++i) {
      if (!is_zero(a(i, k))) out(i) += a(i, k) * v(k);
    }
  }
  return out;
}

}  // namespace

const std::vector<Exponent>& monomials(int nvars, int degree) { return table(nvars, degree).list; }

Index monomial_count(int nvars, int degree) {
  if (degree < 0) return 0;
  return static_cast<Index>(table(nvars, degree).list.size());
}

Index monomial_index(const Exponent& e) {
  return table(static_cast<int>(e.size()), total_degree(e)).index.at(e);
}

// ---------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(int nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Exponent(static_cast<std::size_t>(nvars), 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int i) {
  Exponent e(static_cast<std::size_t>(nvars), 0);
  e.at(static_cast<std::size_t>(i)) = 1;
  return monomial(e);
}

Polynomial Polynomial::monomial(const Exponent& e, const Rational& c) {
  Polynomial p(static_cast<int>(e.size()));
  p.add_term(e, c);
  return p;
}

bool Polynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  const int d = total_degree(terms_.begin()->first);
  for (const auto& [e, c] : terms_)
    if (total_degree(e) != d) return false;
  return true;
}

int Polynomial::internal_degree() const {
  if (terms_.empty()) throw std::logic_error("degree of the zero polynomial");
  return 2 * total_degree(terms_.begin()->first);
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
  if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("exponent length mismatch");
  if (mincomplex::is_zero(c)) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (mincomplex::is_zero(it->second)) terms_.erase(it);
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw std::invalid_argument("polynomial ring mismatch");
  Polynomial out(nvars_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      Exponent e = e1;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
      out.add_term(e, c1 * c2);
    }
  }
  return out;
}

Polynomial Polynomial::operator*(const Rational& c) const {
  Polynomial out(nvars_);
  if (mincomplex::is_zero(c)) return out;
  for (const auto& [e, v] : terms_) out.terms_.emplace(e, v * c);
  return out;
}

QVector Polynomial::coefficients(int m) const {
  QVector out = QVector::Zero(monomial_count(nvars_, m));
  for (const auto& [e, c] : terms_) {
    if (total_degree(e) != m) throw std::invalid_argument("polynomial is not of the requested degree");
    out(monomial_index(e)) = c;
  }
  return out;
}

Polynomial Polynomial::from_coefficients(int nvars, int m, const QVector& c) {
  Polynomial p(nvars);
  const auto& mons = monomials(nvars, m);
  for (Index i = 0; i < c.size(); ++i) p.add_term(mons[static_cast<std::size_t>(i)], c(i));
  return p;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // Highest monomials first, matching the table order.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational coef = c;
    if (!first) {
      out << (coef.sign() < 0 ? " - " : " + ");
      if (coef.sign() < 0) coef = -coef;
    } else if (coef.sign() < 0) {
      out << "-";
      coef = -coef;
    }
    first = false;
    const bool constant = total_degree(e) == 0;
    if (constant || coef != 1) out << coef.str();
    bool need_star = !constant && coef != 1;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (need_star) out << "*";
      out << "x" << i;
      if (e[i] > 1) out << "^" << e[i];
      need_star = true;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------- rings

ConeRing ConeRing::of_cone(const Fan& fan, int cone) {
  const Cone& c = fan.cone(cone);
  QMatrix basis(fan.ambient_dim(), static_cast<Index>(c.basis.size()));
  for (std::size_t i = 0; i < c.basis.size(); ++i)
    basis.col(static_cast<Index>(i)) = to_rational(fan.rays()[static_cast<std::size_t>(c.basis[i])]);
  return ConeRing(std::move(basis));
}

ConeRing ConeRing::ambient(int n) { return ConeRing(QMatrix::Identity(n, n)); }

RingRestriction::RingRestriction(QMatrix substitution)
    : substitution_(std::move(substitution)), cache_(std::make_shared<Cache>()) {}

RingRestriction RingRestriction::between(const ConeRing& from, const ConeRing& to) {
  if (from.ambient_dim() != to.ambient_dim()) throw std::invalid_argument("rings of different spaces");
  if (to.nvars() == 0) return RingRestriction(QMatrix(from.nvars(), 0));
  auto m = solve_many(from.basis(), to.basis());
  if (!m) throw std::invalid_argument("restriction to a subspace not contained in the source span");
  return RingRestriction(std::move(*m));
}

RingRestriction RingRestriction::identity(int nvars) { return RingRestriction(QMatrix::Identity(nvars, nvars)); }

const QMatrix& RingRestriction::degree_matrix(int m) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->by_degree.find(m);
    if (it != cache_->by_degree.end()) return *it->second;
  }
  const int ks = source_vars();
  const int kt = target_vars();
  auto result = std::make_unique<QMatrix>(QMatrix::Zero(monomial_count(kt, m), monomial_count(ks, m)));
  if (m == 0) {
    (*result)(0, 0) = 1;
  } else if (m > 0 && ks > 0) {
    const QMatrix& prev = degree_matrix(m - 1);
    const auto& source_mons = monomials(ks, m);
    for (std::size_t c = 0; c < source_mons.size(); ++c) {
      Exponent e = source_mons[c];
      const int i = first_variable(e);
      --e[static_cast<std::size_t>(i)];
      const Index pc = monomial_index(e);
      for (Index r = 0; r < prev.rows(); ++r) {
        if (is_zero(prev(r, pc))) continue;
        for (int j = 0; j < kt; ++j) {
          const Rational& s = substitution_(i, j);
          if (is_zero(s)) continue;
          const Index target = shift_table(kt, m - 1, j)[static_cast<std::size_t>(r)];
          (*result)(target, static_cast<Index>(c)) += prev(r, pc) * s;
        }
      }
    }
  }
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto& slot = cache_->by_degree[m];
  if (!slot) slot = std::move(result);
  return *slot;
}

Polynomial RingRestriction::apply(const Polynomial& p) const {
  if (p.nvars() != source_vars()) throw std::invalid_argument("restriction applied to the wrong ring");
  std::map<int, Polynomial> by_degree;
  for (const auto& [e, c] : p.terms()) {
    auto [it, inserted] = by_degree.try_emplace(total_degree(e), Polynomial(p.nvars()));
    it->second.add_term(e, c);
  }
  Polynomial out(target_vars());
  for (const auto& [m, part] : by_degree) {
    QVector image = apply_sparse(degree_matrix(m), part.coefficients(m));
    out = out + Polynomial::from_coefficients(target_vars(), m, image);
  }
  return out;
}

// ---------------------------------------------------------------- free modules

int FreeGradedModule::monomial_degree(std::size_t j, int d) const {
  const int diff = d - generator_degrees.at(j);
  if (diff < 0 || diff % 2 != 0) return -1;
  const int m = diff / 2;
  if (nvars == 0 && m > 0) return -1;
  return m;
}

Index FreeGradedModule::dimension(int d) const {
  Index total = 0;
  for (std::size_t j = 0; j < generator_degrees.size(); ++j) {
    const int m = monomial_degree(j, d);
    if (m >= 0) total += monomial_count(nvars, m);
  }
  return total;
}

Index FreeGradedModule::offset(std::size_t j, int d) const {
  Index total = 0;
  for (std::size_t i = 0; i < j; ++i) {
    const int m = monomial_degree(i, d);
    if (m >= 0) total += monomial_count(nvars, m);
  }
  return total;
}

std::vector<Polynomial> FreeGradedModule::to_polynomials(int d, const QVector& v) const {
  if (v.size() != dimension(d)) throw std::invalid_argument("element has the wrong size");
  std::vector<Polynomial> out;
  Index pos = 0;
  for (std::size_t j = 0; j < generator_degrees.size(); ++j) {
    const int m = monomial_degree(j, d);
    if (m < 0) {
      out.emplace_back(nvars);
      continue;
    }
    const Index count = monomial_count(nvars, m);
    out.push_back(Polynomial::from_coefficients(nvars, m, v.segment(pos, count)));
    pos += count;
  }
  return out;
}

QVector FreeGradedModule::from_polynomials(int d, const std::vector<Polynomial>& p) const {
  QVector out = QVector::Zero(dimension(d));
  for (std::size_t j = 0; j < generator_degrees.size(); ++j) {
    if (p.at(j).is_zero()) continue;
    const int m = monomial_degree(j, d);
    if (m < 0) throw std::invalid_argument("polynomial component in an empty degree");
    out.segment(offset(j, d), monomial_count(nvars, m)) = p[j].coefficients(m);
  }
  return out;
}

FreeGradedModule direct_sum(const FreeGradedModule& a, const FreeGradedModule& b) {
  if (a.nvars != b.nvars && !a.is_zero() && !b.is_zero()) throw std::invalid_argument("direct sum over different rings");
  FreeGradedModule out(a.is_zero() ? b.nvars : a.nvars, a.generator_degrees);
  out.generator_degrees.insert(out.generator_degrees.end(), b.generator_degrees.begin(), b.generator_degrees.end());
  return out;
}

HilbertFunction hilbert_function(const FreeGradedModule& m, const Window& w) {
  HilbertFunction h;
  for (int d : w.degrees()) h[d] = m.dimension(d);
  return h;
}

// ---------------------------------------------------------------- PolyMatrix

PolyMatrix PolyMatrix::zero(FreeGradedModule source, FreeGradedModule target, RingRestriction restriction) {
  PolyMatrix p;
  p.entries.assign(target.generator_degrees.size(),
                   std::vector<Polynomial>(source.generator_degrees.size(), Polynomial(target.nvars)));
  p.source = std::move(source);
  p.target = std::move(target);
  p.restriction = std::move(restriction);
  return p;
}

QMatrix PolyMatrix::at_degree(int d) const {
  QMatrix out = QMatrix::Zero(target.dimension(d), source.dimension(d));
  const int kt = target.nvars;
  for (std::size_t j = 0; j < source.generator_degrees.size(); ++j) {
    const int m = source.monomial_degree(j, d);
    if (m < 0) continue;
    const QMatrix& r = restriction.degree_matrix(m);
    const Index col_offset = source.offset(j, d);
    const auto& restricted_mons = monomials(kt, m);
    for (std::size_t i = 0; i < target.generator_degrees.size(); ++i) {
      const Polynomial& p = entries[i][j];
      if (p.is_zero()) continue;
      const int mt = target.monomial_degree(i, d);
      if (mt < 0) continue;
      const Index row_offset = target.offset(i, d);
      for (Index c = 0; c < r.cols(); ++c) {
        for (Index row = 0; row < r.rows(); ++row) {
          if (mincomplex::is_zero(r(row, c))) continue;
          const Exponent& nu = restricted_mons[static_cast<std::size_t>(row)];
          for (const auto& [e, coef] : p.terms()) {
            Exponent prod = nu;
            for (std::size_t k = 0; k < prod.size(); ++k) prod[k] += e[k];
            if (total_degree(prod) != mt) throw std::invalid_argument("inhomogeneous polynomial matrix entry");
            out(row_offset + monomial_index(prod), col_offset + c) += r(row, c) * coef;
          }
        }
      }
    }
  }
  return out;
}

bool PolyMatrix::is_zero() const {
  for (const auto& row : entries)
    for (const auto& p : row)
      if (!p.is_zero()) return false;
  return true;
}

std::optional<std::pair<int, int>> PolyMatrix::inhomogeneous_entry() const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = 0; j < entries[i].size(); ++j) {
      const Polynomial& p = entries[i][j];
      if (p.is_zero()) continue;
      if (!p.is_homogeneous() || p.nvars() != target.nvars ||
          p.internal_degree() != source.generator_degrees[j] - target.generator_degrees[i])
        return std::make_pair(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return std::nullopt;
}

PolyMatrix compose(const PolyMatrix& second, const PolyMatrix& first) {
  if (!(first.target == second.source)) throw std::invalid_argument("composing incompatible maps");
  QMatrix sub = first.restriction.substitution() * second.restriction.substitution();
  PolyMatrix out = PolyMatrix::zero(first.source, second.target, RingRestriction(sub));
  std::vector<std::vector<Polynomial>> moved(first.entries.size());
  for (std::size_t l = 0; l < first.entries.size(); ++l)
    for (const auto& p : first.entries[l]) moved[l].push_back(second.restriction.apply(p));
  for (std::size_t m = 0; m < second.entries.size(); ++m) {
    for (std::size_t j = 0; j < first.source.generator_degrees.size(); ++j) {
      Polynomial acc(second.target.nvars);
      for (std::size_t l = 0; l < moved.size(); ++l) {
        if (second.entries[m][l].is_zero() || moved[l][j].is_zero()) continue;
        acc = acc + second.entries[m][l] * moved[l][j];
      }
      out.entries[m][j] = acc;
    }
  }
  return out;
}

PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b) {
  if (!(a.source == b.source) || !(a.target == b.target)) throw std::invalid_argument("adding incompatible maps");
  PolyMatrix out = a;
  for (std::size_t i = 0; i < out.entries.size(); ++i)
    for (std::size_t j = 0; j < out.entries[i].size(); ++j) out.entries[i][j] = a.entries[i][j] + b.entries[i][j];
  return out;
}

PolyMatrix operator*(const Rational& c, const PolyMatrix& a) {
  PolyMatrix out = a;
  for (auto& row : out.entries)
    for (auto& p : row) p = p * c;
  return out;
}

PolyMatrix polymatrix_from_images(FreeGradedModule source, FreeGradedModule target, RingRestriction restriction,
                                  const std::vector<QVector>& images) {
  if (images.size() != source.generator_degrees.size()) throw std::invalid_argument("one image per source generator");
  PolyMatrix out = PolyMatrix::zero(std::move(source), std::move(target), std::move(restriction));
  for (std::size_t j = 0; j < images.size(); ++j) {
    auto column = out.target.to_polynomials(out.source.generator_degrees[j], images[j]);
    for (std::size_t i = 0; i < column.size(); ++i) out.entries[i][j] = std::move(column[i]);
  }
  return out;
}

// ---------------------------------------------------------------- windows

std::vector<int> Window::degrees() const {
  std::vector<int> out;
  for (int d = lo; d <= hi; ++d) out.push_back(d);
  return out;
}

Window Window::standard(int n, std::optional<int> degree_max) {
  Window w{-n, degree_max ? *degree_max : -n + 2 * (n + 2)};
  if (w.hi < w.lo) throw InputError("degree bound " + std::to_string(w.hi) + " is below the lowest degree " +
                                    std::to_string(w.lo));
  return w;
}

// ---------------------------------------------------------------- ambients

GradedAmbient::GradedAmbient(int acting_vars, std::vector<ModuleBlock> blocks)
    : acting_vars_(acting_vars), blocks_(std::move(blocks)) {
  for (const auto& b : blocks_) {
    if (b.action.source_vars() != acting_vars_ || b.action.target_vars() != b.module.nvars)
      throw std::invalid_argument("block action does not match the acting ring");
  }
}

GradedAmbient GradedAmbient::of(const FreeGradedModule& m) {
  return GradedAmbient(m.nvars, {ModuleBlock{m, RingRestriction::identity(m.nvars)}});
}

Index GradedAmbient::dimension(int d) const {
  Index total = 0;
  for (const auto& b : blocks_) total += b.module.dimension(d);
  return total;
}

Index GradedAmbient::block_offset(std::size_t b, int d) const {
  Index total = 0;
  for (std::size_t i = 0; i < b; ++i) total += blocks_[i].module.dimension(d);
  return total;
}

const QMatrix& GradedAmbient::variable_action(int var, int d) const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto& slot = cache_->actions[{var, d}];
  if (slot) return *slot;
  auto out = std::make_unique<QMatrix>(QMatrix::Zero(dimension(d + 2), dimension(d)));
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const FreeGradedModule& m = blocks_[b].module;
    const QMatrix& s = blocks_[b].action.substitution();
    const Index src_block = block_offset(b, d);
    const Index dst_block = block_offset(b, d + 2);
    for (std::size_t j = 0; j < m.generator_degrees.size(); ++j) {
      const int md = m.monomial_degree(j, d);
      if (md < 0) continue;
      const Index src = src_block + m.offset(j, d);
      const Index dst = dst_block + m.offset(j, d + 2);
      for (int k = 0; k < m.nvars; ++k) {
        const Rational& coef = s(var, k);
        if (is_zero(coef)) continue;
        const auto& shift = shift_table(m.nvars, md, k);
        for (std::size_t c = 0; c < shift.size(); ++c) (*out)(dst + shift[c], src + static_cast<Index>(c)) += coef;
      }
    }
  }
  slot = std::move(out);
  return *slot;
}

GeneratedMap::GeneratedMap(GradedAmbient ambient, std::vector<int> degrees, std::vector<QVector> images)
    : ambient_(std::move(ambient)), free_(ambient_.acting_vars(), std::move(degrees)), images_(std::move(images)) {
  if (images_.size() != free_.generator_degrees.size()) throw std::invalid_argument("one image per generator");
  for (std::size_t j = 0; j < images_.size(); ++j) {
    if (images_[j].size() != ambient_.dimension(free_.generator_degrees[j]))
      throw std::invalid_argument("generator image has the wrong size");
  }
}

const QMatrix& GeneratedMap::at_degree(int d) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->by_degree.find(d);
    if (it != cache_->by_degree.end()) return *it->second;
  }
  auto out = std::make_unique<QMatrix>(QMatrix::Zero(ambient_.dimension(d), free_.dimension(d)));
  const QMatrix* prev = nullptr;
  for (std::size_t j = 0; j < free_.generator_degrees.size(); ++j) {
    const int m = free_.monomial_degree(j, d);
    if (m < 0) continue;
    const Index col = free_.offset(j, d);
    if (m == 0) {
      out->col(col) = images_[j];
      continue;
    }
    if (!prev) prev = &at_degree(d - 2);
    const Index prev_col = free_.offset(j, d - 2);
    const auto& mons = monomials(free_.nvars, m);
    for (std::size_t c = 0; c < mons.size(); ++c) {
      Exponent e = mons[c];
      const int i = first_variable(e);
      --e[static_cast<std::size_t>(i)];
      const QVector base = prev->col(prev_col + monomial_index(e));
      out->col(col + static_cast<Index>(c)) = apply_sparse(ambient_.variable_action(i, d - 2), base);
    }
  }
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto& slot = cache_->by_degree[d];
  if (!slot) slot = std::move(out);
  return *slot;
}

// ---------------------------------------------------------------- subspace families

GradedSubspaceFamily::GradedSubspaceFamily(GradedAmbient ambient, Window window)
    : ambient_(std::move(ambient)), window_(window) {}

QMatrix GradedSubspaceFamily::piece(int d) const {
  auto it = pieces_.find(d);
  if (it != pieces_.end()) return it->second;
  return QMatrix(ambient_.dimension(d), 0);
}

void GradedSubspaceFamily::set_piece(int d, QMatrix basis) {
  if (basis.rows() != ambient_.dimension(d)) throw std::invalid_argument("piece has the wrong ambient dimension");
  pieces_[d] = std::move(basis);
}

Index GradedSubspaceFamily::dimension(int d) const {
  auto it = pieces_.find(d);
  return it == pieces_.end() ? 0 : it->second.cols();
}

bool GradedSubspaceFamily::is_multiplication_closed() const {
  for (int d = window_.lo; d + 2 <= window_.hi; ++d) {
    const QMatrix z = piece(d);
    if (z.cols() == 0) continue;
    EchelonBasis<Rational> above(ambient_.dimension(d + 2));
    above.insert_columns(piece(d + 2));
    for (int v = 0; v < ambient_.acting_vars(); ++v) {
      const QMatrix moved = multiply(ambient_.variable_action(v, d), z);
      for (Index c = 0; c < moved.cols(); ++c)
        if (!above.contains(moved.col(c))) return false;
    }
  }
  return true;
}

HilbertFunction hilbert_function(const GradedSubspaceFamily& z) {
  HilbertFunction h;
  for (int d : z.window().degrees()) h[d] = z.dimension(d);
  return h;
}

GradedSubspaceFamily kernel_family(const GradedAmbient& source, const Window& w,
                                   const std::function<QMatrix(int)>& matrix_at) {
  GradedSubspaceFamily out(source, w);
  for (int d : w.degrees()) {
    const Index dim = source.dimension(d);
    if (dim == 0) continue;
    QMatrix m = matrix_at(d);
    if (m.cols() != dim) throw std::invalid_argument("degreewise map has the wrong source dimension");
    out.set_piece(d, m.rows() == 0 ? QMatrix(QMatrix::Identity(dim, dim)) : kernel(m));
  }
  return out;
}

GradedSubspaceFamily kernel_degreewise(const PolyMatrix& f, const Window& w) {
  return kernel_family(GradedAmbient::of(f.source), w, [&](int d) { return f.at_degree(d); });
}

std::vector<Generator> minimal_generators(const GradedSubspaceFamily& z, int cone_label) {
  const GradedAmbient& amb = z.ambient();
  const Window& w = z.window();
  std::vector<Generator> out;
  for (int d = w.lo; d <= w.hi; ++d) {
    const QMatrix piece = z.piece(d);
    if (piece.cols() == 0) continue;
    EchelonBasis<Rational> decomposable(amb.dimension(d));
    if (d - 2 >= w.lo) {
      const QMatrix below = z.piece(d - 2);
      if (below.cols() > 0) {
        for (int v = 0; v < amb.acting_vars(); ++v) decomposable.insert_columns(multiply(amb.variable_action(v, d - 2), below));
      }
    }
    for (Index c = 0; c < piece.cols(); ++c) {
      if (!decomposable.insert(piece.col(c))) continue;
      if (d >= w.hi - 1)
        throw WindowExhausted(cone_label, d, "new generators in the top degrees of the window; raise --degree-max");
      out.push_back(Generator{d, piece.col(c)});
    }
  }
  return out;
}

FreeCover minimal_free_cover(const GradedSubspaceFamily& z, int cone_label) {
  FreeCover cover;
  cover.generators = minimal_generators(z, cone_label);
  std::vector<int> degrees;
  std::vector<QVector> images;
  for (const auto& g : cover.generators) {
    degrees.push_back(g.degree);
    images.push_back(g.representative);
  }
  cover.map = GeneratedMap(z.ambient(), degrees, images);
  cover.module = cover.map.free_module();
  cover.certified_free = true;
  for (int d : z.window().degrees()) {
    const Index zd = z.dimension(d);
    if (cover.module.dimension(d) != zd) {
      cover.certified_free = false;
      break;
    }
    if (zd > 0 && rank(cover.map.at_degree(d)) != zd) {
      cover.certified_free = false;
      break;
    }
  }
  return cover;
}

GradedSubspaceFamily intersect(const GradedSubspaceFamily& z, const std::function<QMatrix(int)>& subspace_at) {
  GradedSubspaceFamily out(z.ambient(), z.window());
  for (int d : z.window().degrees()) {
    const QMatrix zd = z.piece(d);
    if (zd.cols() == 0) continue;
    const QMatrix wd = subspace_at(d);
    if (wd.cols() == 0) continue;
    const QMatrix k = kernel(hstack<Rational>(zd, -wd));
    if (k.cols() == 0) continue;
    out.set_piece(d, image_basis(multiply<Rational>(zd, k.topRows(zd.cols()))));
  }
  return out;
}

Splitting split_surjection(const GeneratedMap& d, const GradedSubspaceFamily& z_k, const GradedSubspaceFamily& z_n) {
  const FreeGradedModule& l = d.free_module();
  const GradedAmbient l_ambient = GradedAmbient::of(l);
  const Window& w = z_k.window();

  Splitting out;
  std::vector<int> k_degrees;
  std::vector<QVector> k_elements;
  for (const auto& g : minimal_generators(z_k)) {
    auto lift = solve(d.at_degree(g.degree), g.representative);
    if (!lift) throw CertificateFailure("kernel generator is not in the image of the differential");
    k_degrees.push_back(g.degree);
    k_elements.push_back(*lift);
  }

  // Complete the residues of the K lifts to a basis of L / mL using unit
  // vectors of L's generators, in generator order.
  std::vector<int> n_degrees;
  std::vector<QVector> n_elements;
  for (int deg = w.lo; deg <= w.hi; ++deg) {
    std::vector<std::size_t> gens;
    for (std::size_t j = 0; j < l.generator_degrees.size(); ++j)
      if (l.generator_degrees[j] == deg) gens.push_back(j);
    if (gens.empty()) continue;
    auto residue = [&](const QVector& s) {
      QVector r(static_cast<Index>(gens.size()));
      for (std::size_t t = 0; t < gens.size(); ++t) r(static_cast<Index>(t)) = s(l.offset(gens[t], deg));
      return r;
    };
    EchelonBasis<Rational> residues(static_cast<Index>(gens.size()));
    for (std::size_t i = 0; i < k_elements.size(); ++i) {
      if (k_degrees[i] != deg) continue;
      if (!residues.insert(residue(k_elements[i])))
        throw CertificateFailure("lifted kernel generators are dependent modulo the maximal ideal");
    }
    for (std::size_t t = 0; t < gens.size(); ++t) {
      QVector unit = QVector::Zero(static_cast<Index>(gens.size()));
      unit(static_cast<Index>(t)) = 1;
      if (!residues.insert(unit)) continue;
      QVector e = QVector::Zero(l.dimension(deg));
      e(l.offset(gens[t], deg)) = 1;
      n_degrees.push_back(deg);
      n_elements.push_back(std::move(e));
    }
  }

  // Move each complement generator so that its image lies in Z_N.
  const GeneratedMap k_span(l_ambient, k_degrees, k_elements);
  for (std::size_t i = 0; i < n_elements.size(); ++i) {
    const int deg = n_degrees[i];
    const QMatrix& dd = d.at_degree(deg);
    const QVector image = apply_sparse(dd, n_elements[i]);
    const QMatrix zk = z_k.piece(deg);
    const QMatrix zn = z_n.piece(deg);
    auto coords = solve(hstack<Rational>(zk, zn), image);
    if (!coords) throw CertificateFailure("differential image is not in Z_K + Z_N");
    const QVector image_k = multiply<Rational>(zk, coords->head(zk.cols()));
    if (image_k.isZero()) continue;
    const QMatrix& t = k_span.at_degree(deg);
    auto y = solve(multiply<Rational>(dd, t), image_k);
    if (!y) throw CertificateFailure("K part of a complement image cannot be lifted to L_K");
    n_elements[i] -= apply_sparse(t, *y);
  }

  out.degrees = k_degrees;
  out.elements = k_elements;
  out.k_count = k_elements.size();
  out.degrees.insert(out.degrees.end(), n_degrees.begin(), n_degrees.end());
  out.elements.insert(out.elements.end(), n_elements.begin(), n_elements.end());
  return out;
}

// ---------------------------------------------------------------- FanRings

FanRings::FanRings(FanPtr fan) : fan_(std::move(fan)), ambient_(ConeRing::ambient(fan_->ambient_dim())) {
  for (int c = 0; c < fan_->size(); ++c) rings_.push_back(ConeRing::of_cone(*fan_, c));
}

const RingRestriction& FanRings::restriction(int sigma, int tau) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto& slot = restrictions_[{sigma, tau}];
  if (!slot) {
    if (!fan_->is_face(tau, sigma)) throw std::invalid_argument("restriction to a cone that is not a face");
    slot = std::make_unique<RingRestriction>(RingRestriction::between(ring(sigma), ring(tau)));
  }
  return *slot;
}

const RingRestriction& FanRings::from_ambient(int cone) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto& slot = ambient_restrictions_[cone];
  if (!slot) slot = std::make_unique<RingRestriction>(RingRestriction::between(ambient_, ring(cone)));
  return *slot;
}

}  // namespace mincomplex
