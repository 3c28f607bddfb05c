#pragma once
//
// Harmonic cochains on finite windows of the building: the four conditions,
// the windowed nullspace solver and the round trip through functionals on
// special representations.
//

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "btharm/building.hpp"
#include "btharm/flag_rep.hpp"
#include "btharm/linalg.hpp"

namespace bt {

enum class Hc4Mode { Full, Printed };

struct HarmonicConfig {
  Hc2Mode hc2 = Hc2Mode::PointedCompatible;
  Hc4Mode hc4 = Hc4Mode::Full;
  Limits limits{};
};

/// Vertices of ball(r) around the standard vertex; a cell is in the window iff all its vertices are.
struct Window {
  const Fq* field = nullptr;
  int n = 0;
  int r = 0;
  std::vector<VertexPtr> vertices;
  std::unordered_map<Key, int, KeyHash> vertex_index;

  static std::shared_ptr<const Window> make(const Fq& F, int n, int r, const Limits& lim = {});
  bool contains(const Vertex& v) const { return vertex_index.count(v.key) != 0; }
  bool contains(const PointedCell& c) const;
};
using WindowPtr = std::shared_ptr<const Window>;

/// Pointed k-cells of a window with an index by key.
struct CellSet {
  WindowPtr window;
  int k = 0;
  std::vector<PointedCell> cells;  // sorted by key
  std::unordered_map<Key, int, KeyHash> index;

  static std::shared_ptr<const CellSet> make(WindowPtr w, int k, const Limits& lim = {});
  int find(const Key& key) const;
  int size() const { return static_cast<int>(cells.size()); }
};
using CellSetPtr = std::shared_ptr<const CellSet>;

struct Cochain {
  CellSetPtr cells;
  std::vector<Rational> values;  // parallel to cells->cells

  int k() const { return cells->k; }
  static Cochain zero(CellSetPtr cs);
  /// Throws OutOfWindow for cells outside the window.
  const Rational& value(const PointedCell& c) const;
  bool is_zero() const;
  friend Cochain operator+(const Cochain& a, const Cochain& b);
  Cochain scaled(const Rational& c) const;
};

enum class CheckStatus { Holds, Fails, Inconclusive };

struct CheckResult {
  CheckStatus status = CheckStatus::Holds;
  std::vector<Key> witness;  // cells of the condition when it fails or is inconclusive
};

CheckResult check_hc1(const Cochain& h, const PointedCell& sigma);
CheckResult check_hc2(const Cochain& h, const PointedCell& eta, const CellType& t, Hc2Mode mode);
CheckResult check_hc3(const Cochain& h, const PointedCell& sigma, int j);
CheckResult check_hc4(const Cochain& h, const PointedCell& tau, Hc4Mode mode);

struct HcReport {
  std::size_t checked[4] = {0, 0, 0, 0};
  std::size_t failed[4] = {0, 0, 0, 0};
  std::size_t inconclusive[4] = {0, 0, 0, 0};
  std::vector<std::string> failures;  // first few, as "HCi:<key>"

  bool pass() const { return failed[0] + failed[1] + failed[2] + failed[3] == 0; }
};

/// Checks every site of the window for the four conditions.
HcReport check_all(const Cochain& h, const HarmonicConfig& cfg = {});

/// Compositions of n+1 into k+1 positive parts.
std::vector<CellType> cell_types(int n, int k);

struct HarmonicSolution {
  CellSetPtr cells;
  std::vector<Cochain> basis;
  std::size_t unknowns = 0;     // rotation classes
  std::size_t constraints = 0;  // imposed rows
  int rank = 0;
};

/// Basis of the cochains on the window satisfying every condition whose cells lie in the window.
HarmonicSolution solve_harmonic(const Fq& F, int n, int k, int r, const HarmonicConfig& cfg = {});
HarmonicSolution solve_harmonic_serial(const Fq& F, int n, int k, int r, const HarmonicConfig& cfg = {});

/// sum a_j h(g_j . sigma_{J_k}).  Throws OutOfWindow.
Rational phi_of_h(const Cochain& h, const std::vector<std::pair<Rational, MatK>>& comb);

struct RoundtripResult {
  bool pass = false;
  Rational lhs, rhs;
};

/// h(g sigma_I) against sum over the product set of h(g k_x sigma_{J_k}).  Throws OutOfWindow.
RoundtripResult roundtrip_check(const Cochain& h, const MatK& g, unsigned I,
                                const ProductSet* ps = nullptr);

/// Subsets I with |Delta - I| = k.
std::vector<unsigned> subsets_of_corank(int n, int k);

struct RoundtripReport {
  std::size_t checked = 0;
  std::size_t passed = 0;
  std::size_t skipped = 0;  // out of window
  std::vector<std::string> failures;

  bool pass() const { return passed == checked; }
};

/// Round trip over every cell of each type t_I in the window (g a transporter from sigma_I)
/// and over random integral g.
RoundtripReport roundtrip_suite(const HarmonicSolution& sol, int samples, std::uint64_t seed,
                                CiMode mode = CiMode::General);
RoundtripReport roundtrip_suite_serial(const HarmonicSolution& sol, int samples, std::uint64_t seed,
                                       CiMode mode = CiMode::General);

struct WellDefinedReport {
  std::size_t relations = 0;     // sampled combinations certified sp_equal to 0
  std::size_t vanished = 0;      // of which phi_of_h vanished for every basis cochain
  std::size_t skipped = 0;       // out of window
  bool pass() const { return relations == vanished; }
};

/// Sampled translates of fibre indicators, certified as zero in Sp^k, must be killed by phi_h.
WellDefinedReport phi_well_defined(const HarmonicSolution& sol, int samples, std::uint64_t seed);

}  // namespace bt
