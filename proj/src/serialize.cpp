#include "mincomplex/errors.hpp"
#include "mincomplex/fan_complex.hpp"

#include <fstream>
#include <sstream>

namespace mincomplex {

namespace {

std::string polynomial_text(const Polynomial& p) {
  std::ostringstream os;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    if (!first) os << " ";
    first = false;
    os << it->second.str() << " [";
    for (std::size_t i = 0; i < it->first.size(); ++i) os << (i ? " " : "") << it->first[i];
    os << "]";
  }
  return os.str();
}

Polynomial parse_polynomial(int nvars, std::istream& in, const std::string& where) {
  Polynomial p(nvars);
  std::string coef;
  while (in >> coef) {
    Rational c;
    try {
      c = Rational(coef);
    } catch (const std::exception&) {
      throw InputError(where + ": bad coefficient `" + coef + "`");
    }
    std::string tok;
    if (!(in >> tok) || tok.empty() || tok[0] != '[') throw InputError(where + ": expected `[` after coefficient");
    std::string body = tok.substr(1);
    while (body.empty() || body.back() != ']') {
      std::string more;
      if (!(in >> more)) throw InputError(where + ": unterminated exponent");
      body += " " + more;
    }
    body.pop_back();
    std::istringstream es(body);
    Exponent e;
    int x;
    while (es >> x) e.push_back(x);
    if (static_cast<int>(e.size()) != nvars) throw InputError(where + ": exponent has the wrong length");
    p.add_term(e, c);
  }
  return p;
}

}  // namespace

std::string serialize_complex(const FanComplex& m, const std::string& kind) {
  std::ostringstream os;
  os << "kind " << kind << "\n";
  os << "fan\n" << m.fan().to_text() << "end fan\n";
  for (const auto& [c, mod] : m.components()) {
    os << "component " << c << ":";
    for (int d : mod.generator_degrees) os << " " << d;
    os << "\n";
  }
  for (const auto& [key, pm] : m.maps()) {
    os << "map " << key.first << " " << key.second << " sign " << m.fan().incidence_sign(key.first, key.second)
       << "\n";
    for (std::size_t i = 0; i < pm.entries.size(); ++i) {
      for (std::size_t j = 0; j < pm.entries[i].size(); ++j) {
        if (pm.entries[i][j].is_zero()) continue;
        os << "entry " << i << " " << j << ": " << polynomial_text(pm.entries[i][j]) << "\n";
      }
    }
  }
  os << "end\n";
  return os.str();
}

ParsedComplex parse_complex(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) { throw InputError("complex line " + std::to_string(line_no) + ": " + msg); };

  ParsedComplex out;
  std::getline(in, line);
  ++line_no;
  if (line.rfind("kind ", 0) != 0) fail("expected `kind` line");
  out.kind = line.substr(5);

  std::getline(in, line);
  ++line_no;
  if (line != "fan") fail("expected `fan`");
  std::string fan_text;
  bool closed = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line == "end fan") {
      closed = true;
      break;
    }
    fan_text += line + "\n";
  }
  if (!closed) fail("missing `end fan`");
  auto fan = std::make_shared<const Fan>(parse_fan(fan_text));
  FanComplex complex(fan);

  std::map<int, FreeGradedModule> components;
  struct PendingMap {
    int sigma, tau;
    std::vector<std::tuple<std::size_t, std::size_t, Polynomial>> entries;
  };
  std::vector<PendingMap> maps;
  bool ended = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (ended) fail("content after `end`");
    if (head == "component") {
      std::string id;
      ls >> id;
      if (id.empty() || id.back() != ':') fail("expected `component id:`");
      const int c = std::stoi(id.substr(0, id.size() - 1));
      if (c < 0 || c >= fan->size()) fail("unknown cone " + std::to_string(c));
      std::vector<int> degs;
      int d;
      while (ls >> d) degs.push_back(d);
      components[c] = FreeGradedModule(complex.rings()->ring(c).nvars(), degs);
    } else if (head == "map") {
      PendingMap pm;
      std::string sign_word;
      int sign = 0;
      if (!(ls >> pm.sigma >> pm.tau >> sign_word >> sign) || sign_word != "sign") fail("expected `map s t sign e`");
      if (pm.sigma < 0 || pm.sigma >= fan->size() || pm.tau < 0 || pm.tau >= fan->size() ||
          !fan->is_facet(pm.tau, pm.sigma))
        fail("map between cones that are not a facet pair");
      if (sign != fan->incidence_sign(pm.sigma, pm.tau)) fail("sign disagrees with the fan's incidence sign");
      maps.push_back(std::move(pm));
    } else if (head == "entry") {
      if (maps.empty()) fail("entry before any map");
      std::size_t i = 0, j = 0;
      std::string colon;
      if (!(ls >> i >> j)) fail("expected `entry i j:`");
      ls >> colon;
      if (colon != ":") fail("expected `:` after entry indices");
      const int nvars = complex.rings()->ring(maps.back().tau).nvars();
      maps.back().entries.emplace_back(i, j, parse_polynomial(nvars, ls, "complex line " + std::to_string(line_no)));
    } else if (head == "end") {
      ended = true;
    } else {
      fail("unrecognized line `" + head + "`");
    }
  }
  if (!ended) fail("missing `end`");

  for (auto& [c, mod] : components) complex.set_component(c, mod);
  for (auto& pm : maps) {
    PolyMatrix mat = PolyMatrix::zero(complex.component(pm.sigma), complex.component(pm.tau),
                                      complex.rings()->restriction(pm.sigma, pm.tau));
    for (auto& [i, j, p] : pm.entries) {
      if (i >= mat.entries.size() || j >= mat.source.generator_degrees.size())
        throw InputError("entry index out of range in map " + std::to_string(pm.sigma) + " -> " +
                         std::to_string(pm.tau));
      mat.entries[i][j] = std::move(p);
    }
    complex.set_map(pm.sigma, pm.tau, std::move(mat));
  }
  out.complex = std::move(complex);
  return out;
}

ParsedComplex read_complex_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_complex(ss.str());
}

}  // namespace mincomplex
