#pragma once
//
// The global specialization K = F_q(t), pi = 1/t, Gamma = GL_{n+1}(F_q[t]):
// Birkhoff factorization, orbit invariants of vertices, Gamma-invariant data
// and the unipotent period sum for GL_2.
//

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "btharm/building.hpp"
#include "btharm/harmonic.hpp"
#include "btharm/linalg.hpp"
#include "btharm/matrices.hpp"

namespace bt {

/// Weakly decreasing exponents with last entry 0.
using BundleType = std::vector<int>;

BundleType normalize_type(std::vector<int> exps);
std::string type_string(const BundleType& t);

/// Exact matrix with entries in F_q[t] (exponents of pi all <= 0) and det in F_q^*.
bool is_gamma(const MatK& m);

struct GammaElement {
  MatK m;
  /// Throws InvalidArgument unless is_gamma(m).
  static GammaElement make(MatK m);
};

/// Product of random elementary matrices with polynomial entries of degree <= deg,
/// a permutation and a diagonal of units.
GammaElement random_gamma(const Fq& F, int N, std::mt19937_64& rng, int deg = 2, int steps = 0);

struct BirkhoffResult {
  BundleType type;          // normalized
  std::vector<int> exps;    // exponents of the diagonal, weakly decreasing
  GammaElement gamma;
  MatK kappa;               // in G(O)
};

/// g = gamma * diag(pi^{exps}) * kappa.  NonLaurent for inexact entries, Singular if det g = 0.
BirkhoffResult birkhoff_reduce(const MatK& g);

/// Birkhoff type of the transposed canonical basis; constant on Gamma-orbits.
BundleType vertex_orbit_invariant(const Vertex& v);

/// Orbit invariants of the vertices of a pointed cell in pointed order, separated by -1.
Key cell_orbit_key(const PointedCell& c);

/// Counts of orbit invariants among the vertices of ball(r) (n = 1).
std::map<BundleType, int> tree_quotient_census(const Fq& F, int r, const Limits& lim = {});
std::map<BundleType, int> tree_quotient_census_serial(const Fq& F, int r, const Limits& lim = {});

struct InvarianceReport {
  std::size_t checked = 0;
  std::size_t passed = 0;
  std::size_t skipped = 0;  // image outside the window
  std::vector<std::string> failures;
  bool pass() const { return checked == passed; }
};

/// h(gamma . s) = h(s) for every window cell s and every generator.
InvarianceReport gamma_invariance_check(const Cochain& h, const std::vector<GammaElement>& gens);

/// Orbit invariants of base vertices of the support.
std::set<BundleType> finite_support_mod_gamma(const Cochain& h);

/// A Gamma-invariant function on pointed k-cells, stored on orbit keys.
struct OrbitFunction {
  const Fq* field = nullptr;
  int n = 1;
  int k = 0;
  std::map<Key, Rational> values;
  Rational fallback = 0;  // value on keys not listed

  Rational at(const Key& orbit_key) const;
  Rational at(const PointedCell& c) const;
  /// f(g) = value at g . (sigma_{J_k}, v_0).
  Rational at(const MatK& g) const;
  /// Base types of listed keys with nonzero value.
  std::set<BundleType> support_types() const;
  friend OrbitFunction operator+(const OrbitFunction& a, const OrbitFunction& b);
};

OrbitFunction constant_orbit_function(const Fq& F, int n, int k, const Rational& c);
/// Restriction to a window as an ordinary cochain.
Cochain orbit_pullback(const OrbitFunction& f, CellSetPtr cells);

struct InvariantHarmonic {
  int r = 0;
  std::size_t orbit_classes = 0;
  std::size_t constraints = 0;
  std::vector<OrbitFunction> basis;
};

/// Gamma-invariant harmonic data on pointed edges of the tree whose orbit classes meet ball(r).
InvariantHarmonic gamma_invariant_harmonic(const Fq& F, int r, const HarmonicConfig& cfg = {});

struct CuspSum {
  Rational value;       // at depth
  Rational next_value;  // at depth + 1
  int depth = 0;
  int required_depth = 0;
};

/// 1-skeleton distance from the standard vertex: b_max - b_min over the elementary divisors.
int distance_from_base(const Vertex& v);
/// Smallest depth at which the unipotent sum at g is exact: x in pi^{d+1} O fixes
/// every vertex within distance d + 1 of the standard vertex.
int required_depth(const MatK& g, int k);

/// Normalized sum over u = [[1, x], [0, 1]], x = sum_{i=1}^{depth} c_i pi^i, of f(u g).
Rational unipotent_average(const OrbitFunction& f, const MatK& g, int depth);
/// Throws DepthInsufficient below required_depth or when the sums at depth and depth + 1 differ.
CuspSum cusp_sum_gl2(const OrbitFunction& f, const MatK& g, int depth);

}  // namespace bt
