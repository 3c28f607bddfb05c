#include "btharm/harmonic.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "btharm/errors.hpp"

namespace bt {

// ---------------------------------------------------------------------------
// Windows and cell sets

std::shared_ptr<const Window> Window::make(const Fq& F, int n, int r, const Limits& lim) {
  auto w = std::make_shared<Window>();
  w->field = &F;
  w->n = n;
  w->r = r;
  w->vertices = ball(F, n, r, lim);
  for (int i = 0; i < static_cast<int>(w->vertices.size()); ++i) w->vertex_index[w->vertices[i]->key] = i;
  return w;
}

bool Window::contains(const PointedCell& c) const {
  for (const auto& v : cell_vertices(c))
    if (!contains(*v)) return false;
  return true;
}

std::shared_ptr<const CellSet> CellSet::make(WindowPtr w, int k, const Limits& lim) {
  auto cs = std::make_shared<CellSet>();
  cs->window = w;
  cs->k = k;
  cs->cells = cells_in_ball(w->vertices, k, lim);
  for (int i = 0; i < cs->size(); ++i) cs->index[cs->cells[i].key] = i;
  return cs;
}

int CellSet::find(const Key& key) const {
  auto it = index.find(key);
  return it == index.end() ? -1 : it->second;
}

Cochain Cochain::zero(CellSetPtr cs) {
  Cochain h;
  h.values.assign(cs->cells.size(), Rational(0));
  h.cells = std::move(cs);
  return h;
}

const Rational& Cochain::value(const PointedCell& c) const {
  const int i = cells->find(c.key);
  if (i < 0) throw OutOfWindow("cell outside window: " + key_string(c.key));
  return values[i];
}

bool Cochain::is_zero() const {
  return std::all_of(values.begin(), values.end(), [](const Rational& v) { return v == 0; });
}

Cochain operator+(const Cochain& a, const Cochain& b) {
  if (a.cells != b.cells) throw InvalidArgument("cochains on different windows");
  Cochain c = a;
  for (std::size_t i = 0; i < c.values.size(); ++i) c.values[i] += b.values[i];
  return c;
}

Cochain Cochain::scaled(const Rational& s) const {
  Cochain c = *this;
  for (auto& v : c.values) v *= s;
  return c;
}

std::vector<CellType> cell_types(int n, int k) {
  std::vector<CellType> out;
  CellType cur;
  auto rec = [&](auto&& self, int left, int parts) -> void {
    if (parts == 1) {
      cur.push_back(left);
      out.push_back(cur);
      cur.pop_back();
      return;
    }
    for (int d = 1; d <= left - parts + 1; ++d) {
      cur.push_back(d);
      self(self, left - d, parts - 1);
      cur.pop_back();
    }
  };
  if (k >= 0 && k <= n) rec(rec, n + 1, k + 1);
  return out;
}

// ---------------------------------------------------------------------------
// Linear forms behind the four conditions

namespace {

using Term = std::pair<PointedCell, int>;  // cell with coefficient +-1

struct Form {
  std::vector<Term> terms;
};

Form hc1_form(const PointedCell& s) {
  const int sign = (s.k() % 2 == 0) ? 1 : -1;
  return {{{s, 1}, {rotate(s), -sign}}};
}

std::optional<Form> hc2_form(const PointedCell& eta, const CellType& t, Hc2Mode mode) {
  auto star = enum_b_eta_t(eta, t, mode);
  if (star.empty()) return std::nullopt;
  Form f;
  for (auto& c : star) f.terms.emplace_back(std::move(c), 1);
  return f;
}

std::optional<Form> hc3_form(const PointedCell& s, int j) {
  if (pointed_type(s)[j] == 1) return std::nullopt;
  Form f;
  f.terms.emplace_back(s, 1);
  for (auto& c : enum_csj(s, j)) f.terms.emplace_back(std::move(c), -1);
  return f;
}

Form hc4_form(const PointedCell& tau, Hc4Mode mode) {
  Form f;
  auto fs = faces(tau);
  const int top = (mode == Hc4Mode::Full) ? tau.k() : tau.k() - 1;
  for (int j = 0; j <= top; ++j) f.terms.emplace_back(fs[j], (j % 2 == 0) ? 1 : -1);
  return f;
}

CheckResult evaluate(const Cochain& h, const Form& f) {
  CheckResult res;
  Rational sum = 0;
  for (const auto& [c, a] : f.terms) {
    const int i = h.cells->find(c.key);
    if (i < 0) {
      res.status = CheckStatus::Inconclusive;
      res.witness.push_back(c.key);
      continue;
    }
    sum += a * h.values[i];
  }
  if (res.status == CheckStatus::Inconclusive) return res;
  if (sum != 0) {
    res.status = CheckStatus::Fails;
    for (const auto& t : f.terms) res.witness.push_back(t.first.key);
  }
  return res;
}

}  // namespace

CheckResult check_hc1(const Cochain& h, const PointedCell& sigma) { return evaluate(h, hc1_form(sigma)); }

CheckResult check_hc2(const Cochain& h, const PointedCell& eta, const CellType& t, Hc2Mode mode) {
  auto f = hc2_form(eta, t, mode);
  return f ? evaluate(h, *f) : CheckResult{};
}

CheckResult check_hc3(const Cochain& h, const PointedCell& sigma, int j) {
  auto f = hc3_form(sigma, j);
  return f ? evaluate(h, *f) : CheckResult{};
}

CheckResult check_hc4(const Cochain& h, const PointedCell& tau, Hc4Mode mode) {
  return evaluate(h, hc4_form(tau, mode));
}

namespace {

// Sites of each condition, in deterministic order.
struct SiteLists {
  std::vector<PointedCell> hc2_eta;  // paired with every type
  std::vector<CellType> types;
  std::vector<PointedCell> hc4_tau;
};

SiteLists site_lists(const CellSet& cs, const Limits& lim) {
  SiteLists s;
  const int n = cs.window->n;
  const int k = cs.k;
  if (k >= 1) {
    s.hc2_eta = cells_in_ball(cs.window->vertices, k - 1, lim);
    s.types = cell_types(n, k);
  }
  if (k + 1 <= n) s.hc4_tau = cells_in_ball(cs.window->vertices, k + 1, lim);
  return s;
}

std::vector<Form> forms_for(const CellSet& cs, const SiteLists& s, std::size_t site, const HarmonicConfig& cfg,
                            int& which) {
  // Site numbering: HC1 cells, HC2 (eta, t) pairs, HC3 (sigma, j) pairs, HC4 cells.
  const std::size_t n1 = cs.cells.size();
  const std::size_t n2 = s.hc2_eta.size() * s.types.size();
  const std::size_t k1 = static_cast<std::size_t>(cs.k) + 1;
  const std::size_t n3 = cs.k >= 1 ? cs.cells.size() * k1 : 0;
  std::vector<Form> out;
  if (site < n1) {
    which = 1;
    out.push_back(hc1_form(cs.cells[site]));
    return out;
  }
  site -= n1;
  if (site < n2) {
    which = 2;
    auto f = hc2_form(s.hc2_eta[site / s.types.size()], s.types[site % s.types.size()], cfg.hc2);
    if (f) out.push_back(std::move(*f));
    return out;
  }
  site -= n2;
  if (site < n3) {
    which = 3;
    auto f = hc3_form(cs.cells[site / k1], static_cast<int>(site % k1));
    if (f) out.push_back(std::move(*f));
    return out;
  }
  site -= n3;
  which = 4;
  out.push_back(hc4_form(s.hc4_tau[site], cfg.hc4));
  return out;
}

std::size_t site_count(const CellSet& cs, const SiteLists& s) {
  const std::size_t k1 = static_cast<std::size_t>(cs.k) + 1;
  return cs.cells.size() + s.hc2_eta.size() * s.types.size() + (cs.k >= 1 ? cs.cells.size() * k1 : 0) +
         s.hc4_tau.size();
}

}  // namespace

HcReport check_all(const Cochain& h, const HarmonicConfig& cfg) {
  const CellSet& cs = *h.cells;
  SiteLists s = site_lists(cs, cfg.limits);
  const std::size_t total = site_count(cs, s);
  std::vector<int> which_of(total, 0);
  std::vector<CheckResult> res(total);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < static_cast<long long>(total); ++i) {
    int w = 0;
    auto forms = forms_for(cs, s, static_cast<std::size_t>(i), cfg, w);
    which_of[i] = w;
    if (!forms.empty()) res[i] = evaluate(h, forms[0]);
  }
  HcReport rep;
  for (std::size_t i = 0; i < total; ++i) {
    const int w = which_of[i] - 1;
    switch (res[i].status) {
      case CheckStatus::Holds: ++rep.checked[w]; break;
      case CheckStatus::Inconclusive: ++rep.inconclusive[w]; break;
      case CheckStatus::Fails:
        ++rep.checked[w];
        ++rep.failed[w];
        if (rep.failures.size() < 8)
          rep.failures.push_back("HC" + std::to_string(w + 1) + ":" + key_string(res[i].witness.front()));
        break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Solver

namespace {

HarmonicSolution solve_impl(const Fq& F, int n, int k, int r, const HarmonicConfig& cfg, bool parallel) {
  if (k < 0 || k > n) throw InvalidArgument("degree out of range");
  WindowPtr w = Window::make(F, n, r, cfg.limits);
  CellSetPtr cs = CellSet::make(w, k, cfg.limits);
  const int ncell = cs->size();

  // One unknown per rotation class; h(rot^m s) = (-1)^{km} h(s).
  std::vector<int> var(ncell, -1), sign(ncell, 1);
  int nvar = 0;
  const int rot_sign = (k % 2 == 0) ? 1 : -1;
  for (int i = 0; i < ncell; ++i) {
    if (var[i] >= 0) continue;
    PointedCell c = cs->cells[i];
    int sg = 1;
    for (int m = 0; m <= k; ++m) {
      const int j = cs->find(c.key);
      if (j < 0) throw InvalidArgument("rotation left the window");
      if (var[j] < 0) {
        var[j] = nvar;
        sign[j] = sg;
      }
      c = rotate(c);
      sg *= rot_sign;
    }
    ++nvar;
  }

  SiteLists s = site_lists(*cs, cfg.limits);
  const std::size_t first = cs->cells.size();  // HC1 is built into the unknowns
  const std::size_t total = site_count(*cs, s);
  std::vector<SparseVec> rows(total);
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (long long i = static_cast<long long>(first); i < static_cast<long long>(total); ++i) {
    int which = 0;
    auto forms = forms_for(*cs, s, static_cast<std::size_t>(i), cfg, which);
    if (forms.empty()) continue;
    std::map<int, Rational> acc;
    bool inside = true;
    for (const auto& [c, a] : forms[0].terms) {
      const int j = cs->find(c.key);
      if (j < 0) {
        inside = false;
        break;
      }
      acc[var[j]] += a * sign[j];
    }
    if (!inside) continue;
    SparseVec row;
    for (auto& [col, v] : acc)
      if (v != 0) row.emplace_back(col, v);
    rows[i] = std::move(row);
  }

  HarmonicSolution sol;
  sol.cells = cs;
  sol.unknowns = nvar;
  RowReducer red(nvar);
  for (const auto& row : rows)
    if (!row.empty()) {
      ++sol.constraints;
      red.add(row);
    }
  sol.rank = red.rank();
  for (const auto& x : red.nullspace()) {
    Cochain h = Cochain::zero(cs);
    for (int i = 0; i < ncell; ++i) h.values[i] = sign[i] * x[var[i]];
    sol.basis.push_back(std::move(h));
  }
  return sol;
}

}  // namespace

HarmonicSolution solve_harmonic(const Fq& F, int n, int k, int r, const HarmonicConfig& cfg) {
  return solve_impl(F, n, k, r, cfg, true);
}

HarmonicSolution solve_harmonic_serial(const Fq& F, int n, int k, int r, const HarmonicConfig& cfg) {
  return solve_impl(F, n, k, r, cfg, false);
}

// ---------------------------------------------------------------------------
// Functionals and the round trip

Rational phi_of_h(const Cochain& h, const std::vector<std::pair<Rational, MatK>>& comb) {
  const CellSet& cs = *h.cells;
  PointedCell base = standard_cell(*cs.window->field, cs.window->n, j_k(cs.window->n, cs.k));
  Rational sum = 0;
  for (const auto& [a, g] : comb) sum += a * h.value(act(g, base));
  return sum;
}

RoundtripResult roundtrip_check(const Cochain& h, const MatK& g, unsigned I, const ProductSet* ps) {
  const CellSet& cs = *h.cells;
  const Fq& F = *cs.window->field;
  const int n = cs.window->n;
  std::optional<ProductSet> own;
  if (!ps) {
    own = product_set(F, n, I);
    ps = &*own;
  }
  if (ps->k != cs.k) throw InvalidArgument("subset has the wrong corank");
  RoundtripResult res;
  res.lhs = h.value(act(g, standard_cell(F, n, I)));
  PointedCell base = standard_cell(F, n, j_k(n, cs.k));
  for (const auto& l : ps->lifts) res.rhs += h.value(act(g * MatK::from_fq(F, l), base));
  res.pass = (res.lhs == res.rhs);
  return res;
}

std::vector<unsigned> subsets_of_corank(int n, int k) {
  std::vector<unsigned> out;
  for (unsigned I = 0; I < (1u << n); ++I)
    if (n - __builtin_popcount(I) == k) out.push_back(I);
  return out;
}

namespace {

struct RtJob {
  unsigned I;
  int ps_index;
  MatK g;
};

RoundtripReport roundtrip_impl(const HarmonicSolution& sol, int samples, std::uint64_t seed, CiMode mode,
                               bool parallel) {
  const CellSet& cs = *sol.cells;
  const Fq& F = *cs.window->field;
  const int n = cs.window->n;
  const int k = cs.k;
  std::mt19937_64 rng(seed);
  std::vector<ProductSet> sets;
  std::vector<RtJob> jobs;
  for (unsigned I : subsets_of_corank(n, k)) {
    sets.push_back(product_set(F, n, I, mode));
    const int idx = static_cast<int>(sets.size()) - 1;
    PointedCell sI = standard_cell(F, n, I);
    const CellType tI = pointed_type(sI);
    for (const auto& c : cs.cells)
      if (pointed_type(c) == tI) jobs.push_back({I, idx, transporter(sI, c)});
    for (int s = 0; s < samples; ++s) jobs.push_back({I, idx, random_integral(F, n + 1, rng)});
  }
  const std::size_t nb = sol.basis.size();
  std::vector<signed char> status(jobs.size() * nb, 0);  // 1 pass, -1 fail, 2 skipped
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (long long j = 0; j < static_cast<long long>(jobs.size()); ++j) {
    const auto& job = jobs[j];
    for (std::size_t b = 0; b < nb; ++b) {
      try {
        status[j * nb + b] = roundtrip_check(sol.basis[b], job.g, job.I, &sets[job.ps_index]).pass ? 1 : -1;
      } catch (const OutOfWindow&) {
        status[j * nb + b] = 2;
      }
    }
  }
  RoundtripReport rep;
  for (std::size_t j = 0; j < jobs.size(); ++j)
    for (std::size_t b = 0; b < nb; ++b) {
      const signed char st = status[j * nb + b];
      if (st == 2) {
        ++rep.skipped;
        continue;
      }
      ++rep.checked;
      if (st == 1) {
        ++rep.passed;
      } else if (rep.failures.size() < 8) {
        rep.failures.push_back("I=" + std::to_string(jobs[j].I) + " basis=" + std::to_string(b) + " g=" +
                               jobs[j].g.to_string());
      }
    }
  return rep;
}

}  // namespace

RoundtripReport roundtrip_suite(const HarmonicSolution& sol, int samples, std::uint64_t seed, CiMode mode) {
  return roundtrip_impl(sol, samples, seed, mode, true);
}

RoundtripReport roundtrip_suite_serial(const HarmonicSolution& sol, int samples, std::uint64_t seed,
                                       CiMode mode) {
  return roundtrip_impl(sol, samples, seed, mode, false);
}

WellDefinedReport phi_well_defined(const HarmonicSolution& sol, int samples, std::uint64_t seed) {
  const CellSet& cs = *sol.cells;
  const Fq& F = *cs.window->field;
  const int n = cs.window->n;
  const int k = cs.k;
  WellDefinedReport rep;
  if (k == 0) return rep;  // Sp^0 has no relations
  std::mt19937_64 rng(seed);
  auto S = FlagSpace::get(F, n, j_k(n, k), 1);
  auto fibres = degenerate_fibres(F, n, k, 1);
  LevelFunction chi = chi_B(F, n, k);
  for (int s = 0; s < samples; ++s) {
    // Two translated fibre indicators with random coefficients.
    std::vector<std::pair<Rational, MatK>> comb;
    for (int part = 0; part < 2; ++part) {
      const auto& fib = fibres[std::uniform_int_distribution<std::size_t>(0, fibres.size() - 1)(rng)];
      MatK g = random_integral(F, n + 1, rng, 1);
      if (std::uniform_int_distribution<int>(0, 1)(rng)) {
        std::vector<int> e(n + 1);
        for (auto& x : e) x = std::uniform_int_distribution<int>(0, 1)(rng);
        g = g * MatK::diag_pi(F, e);
      }
      const Rational a(std::uniform_int_distribution<int>(1, 5)(rng) * (part == 0 ? 1 : -1));
      for (int x : fib) comb.emplace_back(a, g * S->lift(x).lift());
    }
    LevelFunction total = LevelFunction::zero(S);
    for (const auto& [a, g] : comb) {
      LevelFunction t = act_on_function(g, chi).scaled(a);
      const int m = std::max(total.level(), t.level());
      total = embed_level(total, m) + embed_level(t, m);
    }
    if (!sp_equal(total, LevelFunction::zero(S), k)) continue;  // not certified
    bool vanished = true, skipped = false;
    for (const auto& h : sol.basis) {
      try {
        if (phi_of_h(h, comb) != 0) vanished = false;
      } catch (const OutOfWindow&) {
        skipped = true;
        break;
      }
    }
    if (skipped) {
      ++rep.skipped;
      continue;
    }
    ++rep.relations;
    if (vanished) ++rep.vanished;
  }
  return rep;
}

}  // namespace bt
