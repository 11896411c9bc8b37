// mincx: command-line driver for the fan complex library.

#include "mincomplex/decompose.hpp"
#include "mincomplex/errors.hpp"
#include "mincomplex/fan.hpp"
#include "mincomplex/fan_complex.hpp"
#include "mincomplex/minimal.hpp"
#include "mincomplex/oracles.hpp"
#include "mincomplex/pushforward.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace mc = mincomplex;

namespace {

struct RunConfig {
  std::string fan_path;
  std::string subdivision_path;
  std::string complex_path;
  std::optional<int> degree_max;
  std::string out_path;
  std::string format = "human";
  std::string order = "canonical";
  std::optional<int> cone;
  int shift = 0;
};

std::string join(const std::vector<int>& v, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

std::string braces(const std::vector<int>& v) { return "{" + join(v, ", ") + "}"; }

std::string poly_text(const mc::IntPoly& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

/// Collects the whole report; nothing is written until the run is over.
class Report {
 public:
  explicit Report(bool machine) : machine_(machine) {}

  bool machine() const { return machine_; }
  bool ok() const { return ok_; }

  void line(const std::string& s) {
    if (!machine_) body_ << s << "\n";
  }
  void raw(const std::string& s) { body_ << s; }

  void record(const std::string& object, const std::string& cone, const std::string& degree,
              const std::string& value, const std::string& certificate) {
    if (machine_) body_ << object << "\t" << cone << "\t" << degree << "\t" << value << "\t" << certificate << "\n";
  }

  /// Certificate as a comment line so that serialized complexes stay parseable.
  void certificate(const std::string& name, const mc::Certificate& c, bool as_comment = false) {
    if (!c.ok) ok_ = false;
    const std::string prefix = as_comment ? "# " : "";
    if (machine_) {
      body_ << prefix << "certificate\t-\t-\t" << name << "\t" << (c.ok ? "pass" : "fail") << "\n";
    } else {
      body_ << prefix << "certificate " << name << ": " << (c.ok ? "ok" : "FAILED") << "\n";
    }
    for (const auto& f : c.failures) body_ << "#   " << f << "\n";
  }

  void fail() { ok_ = false; }

  std::string str() const { return body_.str(); }

 private:
  bool machine_;
  bool ok_ = true;
  std::ostringstream body_;
};

mc::FanPtr load_fan(const std::string& path) {
  if (path.empty()) throw mc::InputError("missing --fan");
  return std::make_shared<const mc::Fan>(mc::read_fan_file(path));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mc::InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

mc::ConeOrder parse_order(const std::string& s) {
  if (s == "canonical") return mc::ConeOrder::canonical;
  if (s == "reversed") return mc::ConeOrder::reversed;
  throw mc::InputError("unknown cone order `" + s + "`");
}

mc::Window window_for(const RunConfig& cfg, int n) {
  if (cfg.degree_max && *cfg.degree_max < -n + 2)
    throw mc::InputError("--degree-max must be at least " + std::to_string(-n + 2));
  return mc::Window::standard(n, cfg.degree_max);
}

mc::FanMap load_map(const RunConfig& cfg) {
  if (cfg.subdivision_path.empty()) throw mc::InputError("missing --subdivision");
  auto target = load_fan(cfg.fan_path);
  const std::string text = slurp(cfg.subdivision_path);
  auto source = std::make_shared<const mc::Fan>(mc::parse_fan(text));
  return mc::subdivision_map(source, target, mc::parse_map_block(text));
}

// ------------------------------------------------------------------ commands

void fan_check(const RunConfig& cfg, Report& r) {
  auto fan = load_fan(cfg.fan_path);
  const bool complete = mc::is_complete(*fan);
  bool simplicial = true;
  for (int c = 0; c < fan->size(); ++c) simplicial = simplicial && fan->is_simplicial(c);
  const bool convex = mc::has_convex_support(*fan);
  r.line("fan: dimension " + std::to_string(fan->ambient_dim()) + ", " + std::to_string(fan->rays().size()) +
         " rays, " + std::to_string(fan->size()) + " cones (including o)");
  r.line("valid: yes");
  r.line(std::string("complete: ") + (complete ? "yes" : "no"));
  r.line(std::string("simplicial: ") + (simplicial ? "yes" : "no"));
  r.line(std::string("convex support: ") + (convex ? "yes" : "no"));
  if (fan->rays_were_normalized()) r.line("note: rays were replaced by primitive vectors");
  r.line("");
  r.line("cone  dim  rays");
  for (int c = 0; c < fan->size(); ++c)
    r.line(std::to_string(c) + "     " + std::to_string(fan->cone(c).dim) + "    " + braces(fan->cone(c).rays));
  r.record("fan", "-", "-", "valid", "pass");
  r.record("complete", "-", "-", complete ? "true" : "false", "-");
  r.record("simplicial", "-", "-", simplicial ? "true" : "false", "-");
  r.record("convex_support", "-", "-", convex ? "true" : "false", "-");
  for (int c = 0; c < fan->size(); ++c)
    r.record("cone", std::to_string(c), std::to_string(fan->cone(c).dim), join(fan->cone(c).rays, ","), "-");
}

void minimal_build(const RunConfig& cfg, Report& r) {
  auto fan = load_fan(cfg.fan_path);
  const mc::BuildOptions opts{window_for(cfg, fan->ambient_dim()), parse_order(cfg.order)};
  mc::MinimalComplex k;
  std::string kind = "minimal";
  if (cfg.cone) {
    if (*cfg.cone < 0 || *cfg.cone >= fan->size()) throw mc::InputError("no cone " + std::to_string(*cfg.cone));
    k = mc::build_shifted_minimal(fan, *cfg.cone, cfg.shift, opts);
    kind = "shifted " + std::to_string(*cfg.cone) + " " + std::to_string(cfg.shift);
  } else {
    k = mc::build_minimal(fan, opts);
  }
  r.raw(mc::serialize_complex(k.complex, kind));
  const auto cert = mc::verify_minimality(k.complex, k.window, k.base, k.shift);
  r.certificate("complex", cert.complex, true);
  r.certificate("base", cert.base, true);
  r.certificate("locally_free_exact", cert.locally_free_exact, true);
  r.certificate("mod_m", cert.mod_m, true);
}

void stalks(const RunConfig& cfg, Report& r) {
  auto fan = load_fan(cfg.fan_path);
  const int n = fan->ambient_dim();
  const auto k = mc::build_minimal(fan, {window_for(cfg, n), parse_order(cfg.order)});
  const auto report = mc::stalk_report(k.complex);
  r.line("cone  dim  stalk generators        g oracle        ");
  for (const auto& [c, degs] : report) {
    const auto g = mc::g_polynomial(mc::FaceLattice::of_cone(*fan, c));
    const auto expected = mc::degrees_from_coefficients(g, n);
    const bool match = expected == degs;
    if (!match) r.fail();
    r.line(std::to_string(c) + "     " + std::to_string(fan->cone(c).dim) + "    " + braces(degs) + "    g = " +
           poly_text(g) + "  " + (match ? "MATCH" : "MISMATCH"));
    for (int d : degs) r.record("stalk", std::to_string(c), std::to_string(d), "1", match ? "pass" : "fail");
    if (degs.empty()) r.record("stalk", std::to_string(c), "-", "0", match ? "pass" : "fail");
  }
  const auto cert = mc::verify_minimality(k.complex, k.window);
  r.certificate("minimality", cert.combined());
}

void ih(const RunConfig& cfg, Report& r) {
  auto fan = load_fan(cfg.fan_path);
  const int n = fan->ambient_dim();
  const auto k = mc::build_minimal(fan, {window_for(cfg, n), parse_order(cfg.order)});
  const auto gens = mc::ih_module(k);
  r.line("generators: " + braces(gens));
  bool simplicial = true;
  for (int c = 0; c < fan->size(); ++c) simplicial = simplicial && fan->is_simplicial(c);
  std::string verdict = "-";
  if (simplicial && mc::is_complete(*fan)) {
    const auto h = mc::h_vector(*fan);
    const bool match = mc::degrees_from_coefficients(h, n) == gens;
    if (!match) r.fail();
    verdict = match ? "pass" : "fail";
    r.line("oracle h = " + poly_text(h) + "; " + (match ? "MATCH" : "MISMATCH"));
  } else {
    r.line("oracle: not applicable (fan is not complete simplicial)");
  }
  for (int d : gens) r.record("ih", "-", std::to_string(d), "1", verdict);
}

void pushforward_cmd(const RunConfig& cfg, Report& r) {
  const auto map = load_map(cfg);
  if (!map.proper) throw mc::InputError("the subdivision does not cover the support of the target fan");
  const int n = map.target->ambient_dim();
  const auto w = window_for(cfg, n);
  const auto k = mc::build_minimal(map.source, {w, parse_order(cfg.order)});
  const auto p = mc::pushforward(map, k.complex, w);
  r.raw(mc::serialize_complex(p.complex, "pushforward"));
  const auto cert = mc::verify_pushforward(p);
  r.certificate("locally_exact", cert.locally_exact, true);
  r.certificate("locally_free", cert.locally_free, true);
  r.certificate("quasi_isomorphism", cert.quasi_isomorphism, true);
  r.certificate("subcomplex", cert.subcomplex, true);
}

void decompose(const RunConfig& cfg, Report& r) {
  const auto map = load_map(cfg);
  const auto w = window_for(cfg, map.target->ambient_dim());
  const auto rep = mc::decomposition_theorem_report(map, w, parse_order(cfg.order));
  r.line("cone  dim  shift  multiplicity");
  for (const auto& s : rep.summands) {
    r.line(std::to_string(s.cone) + "     " + std::to_string(map.target->cone(s.cone).dim) + "    " +
           std::to_string(s.shift) + "      " + std::to_string(s.multiplicity));
    r.record("summand", std::to_string(s.cone), std::to_string(s.shift), std::to_string(s.multiplicity), "-");
  }
  r.certificate("preconditions", rep.preconditions);
  r.certificate("bookkeeping", rep.bookkeeping);
  r.certificate("pushforward", rep.pushforward);
  r.certificate("theorem", rep.theorem);
}

void verify(const RunConfig& cfg, Report& r) {
  const std::string path = cfg.complex_path.empty() ? cfg.fan_path : cfg.complex_path;
  if (path.empty()) throw mc::InputError("missing --complex");
  const auto parsed = mc::read_complex_file(path);
  const auto& m = parsed.complex;
  const auto w = window_for(cfg, m.ambient_dim());
  std::istringstream kind(parsed.kind);
  std::string word;
  kind >> word;
  r.line("kind: " + parsed.kind);
  if (word == "minimal" || word == "shifted") {
    int base = 0, shift = 0;
    if (word == "shifted" && !(kind >> base >> shift)) throw mc::InputError("malformed kind line `" + parsed.kind + "`");
    const auto cert = mc::verify_minimality(m, w, base, shift);
    r.certificate("complex", cert.complex);
    r.certificate("base", cert.base);
    r.certificate("locally_free_exact", cert.locally_free_exact);
    r.certificate("mod_m", cert.mod_m);
  } else {
    r.certificate("complex", mc::check_complex(m));
    r.certificate("locally_free", mc::check_locally_free(m));
    r.certificate("locally_exact", mc::check_locally_exact(m, w));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal complexes of graded modules on rational polyhedral fans"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--fan", cfg.fan_path, "Fan file (the coarse fan for pushforward/decompose)");
  app.add_option("--subdivision", cfg.subdivision_path, "Fan file of the refining fan, may contain `map:` lines");
  app.add_option("--complex", cfg.complex_path, "Serialized complex (verify)");
  app.add_option("--degree-max", cfg.degree_max, "Top internal degree of the window (default -n + 2(n+2))");
  app.add_option("--out", cfg.out_path, "Write the report here instead of stdout");
  app.add_option("--format", cfg.format, "human or machine")->check(CLI::IsMember({"human", "machine"}));
  app.add_option("--order", cfg.order, "Within-dimension cone order")->check(CLI::IsMember({"canonical", "reversed"}));

  auto* fan_cmd = app.add_subcommand("fan", "Fan commands");
  fan_cmd->require_subcommand(1);
  auto* fan_check_cmd = fan_cmd->add_subcommand("check", "Validate a fan and report completeness");
  auto* minimal_cmd = app.add_subcommand("minimal", "Minimal complex commands");
  minimal_cmd->require_subcommand(1);
  auto* minimal_build_cmd = minimal_cmd->add_subcommand("build", "Build and serialize the minimal complex");
  minimal_build_cmd->add_option("--cone", cfg.cone, "Build the shifted complex based at this cone");
  minimal_build_cmd->add_option("--shift", cfg.shift, "Shift for --cone");
  auto* stalks_cmd = app.add_subcommand("stalks", "Stalk generator degrees with the g-polynomial comparison");
  auto* ih_cmd = app.add_subcommand("ih", "Intersection cohomology generators with the h-vector comparison");
  auto* push_cmd = app.add_subcommand("pushforward", "Push the minimal complex of --subdivision down to --fan");
  auto* decompose_cmd = app.add_subcommand("decompose", "Decompose the pushforward into shifted minimal complexes");
  auto* verify_cmd = app.add_subcommand("verify", "Run the certificate suite on a serialized complex");
  for (auto* sub : {fan_cmd, minimal_cmd, stalks_cmd, ih_cmd, push_cmd, decompose_cmd, verify_cmd}) sub->fallthrough();
  fan_check_cmd->fallthrough();
  minimal_build_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Report report(cfg.format == "machine");
  int status = 0;
  try {
    if (*fan_check_cmd) fan_check(cfg, report);
    else if (*minimal_build_cmd) minimal_build(cfg, report);
    else if (*stalks_cmd) stalks(cfg, report);
    else if (*ih_cmd) ih(cfg, report);
    else if (*push_cmd) pushforward_cmd(cfg, report);
    else if (*decompose_cmd) decompose(cfg, report);
    else if (*verify_cmd) verify(cfg, report);
    status = report.ok() ? 0 : 1;
  } catch (const mc::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const mc::WindowExhausted& e) {
    std::cerr << "window exhausted: " << e.what() << "\n";
    return 3;
  } catch (const mc::CertificateFailure& e) {
    std::cerr << "certificate failure: " << e.what() << "\n";
    return 1;
  }

  if (cfg.out_path.empty()) {
    std::cout << report.str();
  } else {
    std::ofstream out(cfg.out_path, std::ios::trunc);
    if (!out) {
      std::cerr << "input error: cannot write " << cfg.out_path << "\n";
      return 2;
    }
    out << report.str();
  }
  if (status != 0) std::cerr << "one or more certificates failed\n";
  return status;
}
