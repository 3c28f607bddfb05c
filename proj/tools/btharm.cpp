// btharm: JSON command-line front end.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "btharm/acceptance.hpp"
#include "btharm/arithmetic.hpp"
#include "btharm/errors.hpp"
#include "btharm/flag_rep.hpp"
#include "btharm/harmonic.hpp"
#include "btharm/json_io.hpp"

namespace {

using bt::Json;

struct Config {
  int p = 2;
  int e = 1;
  int q = 0;
  int n = 1;
  int prec = 24;
  int radius = 1;
  std::uint64_t seed = 1;
  int k = 1;
  std::vector<int> I;
  int samples = 20;
  int depth = -1;
  std::string hc2 = "pointed";
  std::string hc4 = "full";
  std::string ci = "general";
  std::size_t limit_cells = 2'000'000;
  std::size_t limit_group = 2'000'000;
  std::string file;
  std::string profile = "desk";
  bool emit_basis = false;
};

Json config_json(const Config& c, const bt::Fq& F) {
  return {{"p", F.p()}, {"e", F.e()}, {"q", F.q()}, {"n", c.n}, {"prec", c.prec}, {"radius", c.radius},
          {"seed", c.seed}, {"k", c.k}, {"I", c.I}, {"samples", c.samples}, {"depth", c.depth},
          {"hc2_mode", c.hc2}, {"hc4_mode", c.hc4}, {"ci_mode", c.ci},
          {"limits", {{"max_cells", c.limit_cells}, {"max_group", c.limit_group}}}};
}

const bt::Fq& field_of(const Config& c) {
  if (c.q > 0) {
    if (c.q > 9) throw bt::InvalidArgument("q must be at most 9");
    return bt::Fq::of_order(c.q);
  }
  long long q = 1;
  for (int i = 0; i < c.e; ++i) q *= c.p;
  if (q > 9) throw bt::InvalidArgument("q = p^e must be at most 9");
  return bt::Fq::get(c.p, c.e);
}

bt::Limits limits_of(const Config& c) { return {c.limit_cells, c.limit_group}; }

bt::HarmonicConfig harmonic_of(const Config& c) {
  bt::HarmonicConfig h;
  h.hc2 = c.hc2 == "underlying" ? bt::Hc2Mode::UnderlyingFace : bt::Hc2Mode::PointedCompatible;
  h.hc4 = c.hc4 == "printed" ? bt::Hc4Mode::Printed : bt::Hc4Mode::Full;
  h.limits = limits_of(c);
  return h;
}

bt::CiMode ci_of(const Config& c) { return c.ci == "displayed" ? bt::CiMode::Displayed : bt::CiMode::General; }

void require(bool ok, const std::string& msg) {
  if (!ok) throw bt::InvalidArgument(msg);
}

void check_dims(const Config& c, bool need_k) {
  require(c.n >= 1 && c.n <= 6, "n must be in [1, 6]");
  require(c.radius >= 0, "radius must be nonnegative");
  if (need_k) require(c.k >= 0 && c.k <= c.n, "k must be in [0, n]");
}

// ---------------------------------------------------------------------------

Json cmd_wij(const Config& c, const bt::Fq& F) {
  check_dims(c, false);
  return bt::wij_verify(F, c.n, c.n <= 3);
}

Json cmd_ball(const Config& c, const bt::Fq& F) {
  check_dims(c, false);
  auto vs = bt::ball(F, c.n, c.radius, limits_of(c));
  Json arr = Json::array();
  for (const auto& v : vs) arr.push_back({{"key", bt::key_string(v->key)}, {"a", v->a}});
  return {{"count", vs.size()}, {"vertices", arr}, {"pass", true}};
}

Json cmd_cells(const Config& c, const bt::Fq& F) {
  check_dims(c, true);
  auto cs = bt::cells_in_ball(bt::ball(F, c.n, c.radius, limits_of(c)), c.k, limits_of(c));
  std::map<std::string, std::size_t> by_type;
  Json arr = Json::array();
  for (const auto& x : cs) {
    Json j = bt::cell_json(x);
    ++by_type[j["type"].dump()];
    arr.push_back(std::move(j));
  }
  return {{"count", cs.size()}, {"by_type", by_type}, {"cells", arr}, {"pass", true}};
}

Json cmd_steinberg(const Config& c, const bt::Fq& F) {
  check_dims(c, true);
  const int dim = bt::steinberg_dim(F, c.n, c.k);
  const int other = bt::steinberg_dim_bareiss(F, c.n, c.k);
  return {{"dim", dim}, {"recomputed", other}, {"pass", dim == other}};
}

Json cmd_product_set(const Config& c, const bt::Fq& F) {
  check_dims(c, false);
  for (int i : c.I) require(i >= 1 && i <= c.n, "elements of I must lie in [1, n]");
  const unsigned I = bt::subset_mask(c.I);
  auto ps = bt::product_set(F, c.n, I, ci_of(c), limits_of(c));
  Json factors = Json::array();
  for (unsigned f : ps.factors) {
    Json s = Json::array();
    for (int i = 1; i <= c.n; ++i)
      if (f >> (i - 1) & 1u) s.push_back(i);
    factors.push_back(s);
  }
  Json pts = Json::array();
  for (int x : ps.points) pts.push_back(bt::key_string(ps.space->point(x).key));
  return {{"k", ps.k}, {"factors", factors}, {"flag_space_size", ps.space->size()},
          {"size", ps.points.size()}, {"points", pts}, {"pass", true}};
}

Json cmd_solve(const Config& c, const bt::Fq& F) {
  check_dims(c, true);
  const auto cfg = harmonic_of(c);
  auto sol = bt::solve_harmonic(F, c.n, c.k, c.radius, cfg);
  bool ok = true;
  Json checks = Json::array();
  Json basis = Json::array();
  for (const auto& h : sol.basis) {
    auto rep = bt::check_all(h, cfg);
    ok = ok && rep.pass();
    checks.push_back(bt::hc_report_json(rep));
    if (c.emit_basis) basis.push_back(bt::cochain_json(h));
  }
  Json out{{"cells", sol.cells->size()}, {"unknowns", sol.unknowns}, {"constraints", sol.constraints},
           {"rank", sol.rank},           {"dim", sol.basis.size()},   {"checks", checks}};
  if (c.emit_basis) out["basis"] = basis;
  out["pass"] = ok;
  return out;
}

Json cmd_check_cochain(const Config& c, const bt::Fq&) {
  require(!c.file.empty(), "--file is required");
  std::ifstream in(c.file);
  require(static_cast<bool>(in), "cannot open " + c.file);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& ex) {
    throw bt::InvalidArgument(std::string("cochain file: ") + ex.what());
  }
  auto h = bt::cochain_from_json(j, limits_of(c));
  auto rep = bt::check_all(h, harmonic_of(c));
  Json out = bt::hc_report_json(rep);
  out["cells"] = h.cells->size();
  return out;
}

Json cmd_roundtrip(const Config& c, const bt::Fq& F) {
  check_dims(c, true);
  auto sol = bt::solve_harmonic(F, c.n, c.k, c.radius, harmonic_of(c));
  auto rt = bt::roundtrip_suite(sol, c.samples, c.seed, ci_of(c));
  auto wd = bt::phi_well_defined(sol, c.samples, c.seed + 1);
  return {{"dim", sol.basis.size()},
          {"roundtrip", bt::roundtrip_report_json(rt)},
          {"well_defined", bt::well_defined_json(wd)},
          {"pass", !sol.basis.empty() && rt.checked > 0 && rt.pass() && wd.pass()}};
}

Json cmd_census(const Config& c, const bt::Fq& F) {
  require(c.n == 1, "orbit-census is implemented for n = 1");
  require(c.radius >= 0, "radius must be nonnegative");
  Json per = Json::array();
  bool ok = true;
  for (int r = 0; r <= c.radius; ++r) {
    auto cen = bt::tree_quotient_census(F, r, limits_of(c));
    const bool half_line = static_cast<int>(cen.size()) == r + 1;
    ok = ok && half_line;
    per.push_back({{"r", r}, {"invariants", cen.size()}, {"census", bt::census_json(cen)}, {"half_line", half_line}});
  }
  return {{"radii", per}, {"pass", ok}};
}

Json cmd_cusp(const Config& c, const bt::Fq& F) {
  require(c.radius >= 1, "radius must be at least 1");
  std::mt19937_64 rng(c.seed);
  auto one = bt::constant_orbit_function(F, 1, 1, 1);
  auto ih = bt::gamma_invariant_harmonic(F, c.radius, harmonic_of(c));
  bt::OrbitFunction zero;
  zero.field = &F;
  zero.n = 1;
  zero.k = 1;
  std::vector<bt::OrbitFunction> family = ih.basis;
  family.push_back(zero);
  bool ok = true;
  Json rows = Json::array();
  for (int s = 0; s < c.samples; ++s) {
    bt::MatK g = bt::random_laurent(F, 2, rng);
    const int d = c.depth >= 0 ? c.depth : bt::required_depth(g, 1);
    Json row{{"g", g.to_string()}, {"depth", d}};
    try {
      auto cs = bt::cusp_sum_gl2(one, g, d);
      row["constant"] = bt::cusp_sum_json(cs);
      bool fam_zero = true;
      for (const auto& f : family) fam_zero = fam_zero && bt::cusp_sum_gl2(f, g, d).value == 0;
      row["invariant_harmonic_zero"] = fam_zero;
      ok = ok && cs.value == 1 && fam_zero;
    } catch (const bt::DepthInsufficient& ex) {
      row["error"] = bt::error_json(ex);
      ok = false;
    }
    rows.push_back(std::move(row));
  }
  return {{"invariant_harmonic",
           {{"orbit_classes", ih.orbit_classes}, {"constraints", ih.constraints}, {"dimension", ih.basis.size()},
            {"vacuous", ih.basis.empty()}}},
          {"samples", rows},
          {"pass", ok}};
}

Json cmd_acceptance(const Config& c, const bt::Fq&) {
  require(c.profile == "desk" || c.profile == "quick", "profile must be desk or quick");
  bt::AcceptanceOptions opt;
  opt.seed = c.seed;
  opt.profile = c.profile;
  opt.limits = limits_of(c);
  Json crit = Json::array();
  bool ok = true;
  for (const auto& r : bt::run_acceptance(opt)) {
    std::fprintf(stderr, "criterion %d: %s (%.1fs)\n", r.id, r.pass ? "PASS" : "FAIL", r.seconds);
    ok = ok && r.pass;
    crit.push_back(bt::criterion_json(r));
  }
  return {{"profile", c.profile}, {"criteria", crit}, {"pass", ok}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic cochains on Bruhat-Tits buildings: exact computations with JSON reports"};
  app.require_subcommand(1);
  Config cfg;

  using Handler = Json (*)(const Config&, const bt::Fq&);
  struct Sub {
    const char* name;
    const char* help;
    Handler fn;
  };
  const Sub subs[] = {
      {"wij-verify", "verify the y_i w_i chamber identity and its face formula", cmd_wij},
      {"ball", "vertices within a radius of the standard vertex", cmd_ball},
      {"cells", "pointed k-cells of a ball", cmd_cells},
      {"steinberg-dim", "dimension of the level-1 special representation", cmd_steinberg},
      {"product-set", "points of the product set C_I", cmd_product_set},
      {"solve-harmonic", "windowed harmonic cochains", cmd_solve},
      {"check-cochain", "check the four conditions on a cochain file", cmd_check_cochain},
      {"roundtrip", "round trip through functionals on special representations", cmd_roundtrip},
      {"orbit-census", "orbit invariants of ball(r) under GL_2(F_q[t])", cmd_census},
      {"cusp-check", "unipotent period sums for n = 1", cmd_cusp},
      {"acceptance", "run the acceptance suite", cmd_acceptance},
  };
  std::map<CLI::App*, const Sub*> by_app;
  for (const auto& s : subs) {
    CLI::App* a = app.add_subcommand(s.name, s.help);
    by_app[a] = &s;
    a->add_option("--p", cfg.p, "residue characteristic");
    a->add_option("--e", cfg.e, "residue degree");
    a->add_option("--q", cfg.q, "residue field order (overrides --p/--e)");
    a->add_option("--n", cfg.n, "rank: the group is GL_{n+1}");
    a->add_option("--prec", cfg.prec, "working precision")->check(CLI::Range(8, 4096));
    a->add_option("--radius,--r", cfg.radius, "window radius");
    a->add_option("--seed", cfg.seed, "random seed");
    a->add_option("--k", cfg.k, "cell dimension");
    a->add_option("--I", cfg.I, "subset of {1..n}, comma separated")->delimiter(',');
    a->add_option("--samples", cfg.samples, "random samples")->check(CLI::NonNegativeNumber);
    a->add_option("--depth", cfg.depth, "unipotent depth (default: certified)");
    a->add_option("--hc2-mode", cfg.hc2, "pointed or underlying")->check(CLI::IsMember({"pointed", "underlying"}));
    a->add_option("--hc4-mode", cfg.hc4, "full or printed")->check(CLI::IsMember({"full", "printed"}));
    a->add_option("--ci-mode", cfg.ci, "general or displayed")->check(CLI::IsMember({"general", "displayed"}));
    a->add_option("--limit-cells", cfg.limit_cells, "maximum number of cells");
    a->add_option("--limit-group", cfg.limit_group, "maximum finite group size");
    a->add_option("--file", cfg.file, "cochain JSON file");
    a->add_option("--profile", cfg.profile, "acceptance profile: desk or quick");
    a->add_flag("--emit-basis", cfg.emit_basis, "include basis cochains");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    if (ex.get_exit_code() == 0) return app.exit(ex);
    std::cout << Json{{"error", "UsageError"}, {"message", ex.what()}}.dump(2) << '\n';
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const Sub& s = *by_app.at(chosen);
  Json out{{"command", s.name}};
  int code = 1;
  try {
    const bt::Fq& F = field_of(cfg);
    bt::set_working_precision(cfg.prec);
    out["config"] = config_json(cfg, F);
    const auto t0 = std::chrono::steady_clock::now();
    Json res = s.fn(cfg, F);
    std::fprintf(stderr, "%s: %.2fs\n", s.name,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    for (auto& [key, val] : res.items()) out[key] = val;
    code = res.value("pass", false) ? 0 : 1;
  } catch (const bt::Error& ex) {
    out.update(bt::error_json(ex));
    out["pass"] = false;
  } catch (const std::exception& ex) {
    out.update(bt::error_json(ex));
    out["pass"] = false;
  }
  std::cout << out.dump(2) << '\n';
  return code;
}
