#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "export.hpp"
#include "hmd/errors.hpp"
#include "json.hpp"
#include "suites.hpp"

namespace {

using hmd::cplx;
using hmd::cli::SessionConfig;

constexpr int kUsage = 2;

struct Options {
  double b_re = 0.8, b_im = 0.0;
  double tol = 0.0;
  std::uint64_t seed = 1;
  bool json = false;
  std::string out;
};

struct ZFlag {
  double re = 0.0, im = 0.0;
  cplx value() const { return {re, im}; }
};

void add_pair(CLI::App* app, const std::string& name, ZFlag& z, double re_default) {
  z.re = re_default;
  app->add_option("--" + name + "-re", z.re, "Re " + name)->capture_default_str();
  app->add_option("--" + name + "-im", z.im, "Im " + name)->capture_default_str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw hmd::DomainError("cannot write " + path);
  f << text;
}

std::string cstr(cplx z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g %+.17gi", z.real(), z.imag());
  return buf;
}

std::string kind_of(const hmd::Error& e) {
  if (dynamic_cast<const hmd::DegenerateParam*>(&e)) return "DegenerateParam: ";
  if (dynamic_cast<const hmd::NotInvariant*>(&e)) return "NotInvariant: ";
  if (dynamic_cast<const hmd::NonConvergence*>(&e)) return "NonConvergence: ";
  if (dynamic_cast<const hmd::DomainError*>(&e)) return "DomainError: ";
  return "";
}

int cmd_gamma(const SessionConfig& cfg, cplx z, const std::string& out) {
  const hmd::ModularParam p(cfg.b);
  const cplx value = hmd::gamma(z, p);  // PoleError on the pole lattice
  std::vector<std::pair<std::string, cplx>> methods;
  const double re = z.real();
  if (re > 0.0 && re < p.big_q().real()) methods.emplace_back("integral", hmd::gamma_integral(z, p));
  if ((cfg.b * cfg.b).imag() > 0.0 && value != 0.0) methods.emplace_back("product", hmd::gamma_product(z, p));
  if (methods.empty()) methods.emplace_back(value == 0.0 ? "zero-lattice" : "shifted", value);

  std::string text;
  if (cfg.json) {
    nlohmann::ordered_json j;
    j["re"] = methods[0].second.real();
    j["im"] = methods[0].second.imag();
    j["method"] = methods[0].first;
    j["b"] = {cfg.b.real(), cfg.b.imag()};
    j["z"] = {z.real(), z.imag()};
    auto& alt = j["alternatives"] = nlohmann::ordered_json::array();
    for (std::size_t i = 1; i < methods.size(); ++i)
      alt.push_back({{"method", methods[i].first},
                     {"re", methods[i].second.real()},
                     {"im", methods[i].second.imag()}});
    text = j.dump() + "\n";
  } else {
    for (const auto& [name, v] : methods) text += "gamma(" + cstr(z) + ") = " + cstr(v) + "  [" + name + "]\n";
    if (methods.size() == 2)
      text += "relative difference " + hmd::sci(std::abs(methods[1].second / methods[0].second - 1.0)) + "\n";
  }
  emit(text, out);
  return 0;
}

int cmd_check(const SessionConfig& cfg, const std::string& suite, const std::string& out) {
  const auto rep = hmd::cli::run_suite(suite, cfg);
  emit(cfg.json ? report_json(rep, cfg) : report_human(rep, cfg), out);
  if (!rep.pass()) {
    if (const auto* w = rep.worst()) std::cerr << "worst offender: " << w->label << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolic gamma function, modular double operators and R-matrices"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--b-re", o.b_re, "Re b")->capture_default_str();
  app.add_option("--b-im", o.b_im, "Im b")->capture_default_str();
  app.add_option("--tol", o.tol, "replaces the built-in limits of numeric checks");
  app.add_option("--seed", o.seed, "seed for sampled parameters")->capture_default_str();
  app.add_flag("--json", o.json, "machine readable output");
  app.add_option("--out", o.out, "write output to FILE");

  auto* g = app.add_subcommand("gamma", "evaluate gamma(z; b)");
  ZFlag z;
  add_pair(g, "z", z, 0.5);
  bool z_eta = false;
  g->add_flag("--z-eta", z_eta, "use z = -eta = (b + 1/b)/2");

  auto* c = app.add_subcommand("check", "run a verification suite");
  std::string suite;
  c->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(hmd::cli::suite_names()));

  auto* e = app.add_subcommand("export", "print a matrix as JSON");
  std::string kind;
  e->add_option("kind", kind, "matrix kind")
      ->required()
      ->check(CLI::IsMember({"seven-vertex", "r-dense", "l-matrix-sampled"}));
  ZFlag u, lab, zs;
  add_pair(e, "u", u, 0.3);
  add_pair(e, "g", lab, 0.3);
  add_pair(e, "z", zs, 0.2);
  int n = 1, np = 1, mp = 0;
  bool projective = false;
  e->add_option("--n", n, "first-space dimension minus one")->capture_default_str()->check(CLI::Range(0, 6));
  e->add_option("--np", np, "quantum label n'")->capture_default_str()->check(CLI::Range(0, 4));
  e->add_option("--mp", mp, "quantum label m'")->capture_default_str()->check(CLI::Range(0, 4));
  e->add_flag("--projective", projective, "divide by the (0, 0) entry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? 0 : kUsage;
  }

  SessionConfig cfg;
  cfg.b = cplx(o.b_re, o.b_im);
  if (app.count("--tol")) cfg.tol = o.tol;
  cfg.seed = o.seed;
  cfg.json = o.json;
  try {
    cfg.validate();
  } catch (const hmd::Error& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return kUsage;
  }

  try {
    if (g->parsed()) {
      const hmd::ModularParam p(cfg.b);
      return cmd_gamma(cfg, z_eta ? -p.eta() : z.value(), o.out);
    }
    if (c->parsed()) return cmd_check(cfg, suite, o.out);
    const hmd::ModularParam p(cfg.b);
    hmd::cli::ExportedMatrix m;
    if (kind == "seven-vertex")
      m = hmd::cli::export_seven_vertex(u.value(), p);
    else if (kind == "r-dense")
      m = hmd::cli::export_r_dense(u.value(), n, np, mp, projective, p);
    else
      m = hmd::cli::export_l_sampled(u.value(), lab.value(), zs.value(), p);
    emit(hmd::cli::to_json(m), o.out);
    return 0;
  } catch (const hmd::Error& err) {
    std::cerr << "error: " << kind_of(err) << err.what() << '\n';
    return 1;
  }
}
