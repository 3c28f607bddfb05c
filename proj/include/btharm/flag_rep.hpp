#pragma once
//
// Finite congruence models of G/P_J, locally constant functions on them,
// parahoric membership, the product sets behind C_I and the special
// representations Sp^k.
//
// A point of G(O/pi^m)/P_J(O/pi^m) is the tuple of column spaces V_d = g <e_1..e_d>
// for d in Delta - J.  Each V_d is stored by a d x (n+1) row basis whose columns
// at the level-1 pivot positions form the identity.
//

#include <memory>
#include <vector>

#include "btharm/building.hpp"
#include "btharm/linalg.hpp"
#include "btharm/matrices.hpp"

namespace bt {

struct FlagPoint {
  std::vector<ResidueMat> spaces;  // one per d in Delta - J, ascending
  Key key;
};

class FlagSpace {
 public:
  /// Enumerates G(O/pi^m)/P_J(O/pi^m); the base point (standard flag) is index 0.
  static std::shared_ptr<const FlagSpace> get(const Fq& F, int n, unsigned J, int m,
                                              const Limits& lim = {});

  const Fq& field() const { return *f_; }
  int n() const { return n_; }
  unsigned J() const { return J_; }
  int level() const { return m_; }
  const std::vector<int>& dims() const { return dims_; }
  int size() const { return static_cast<int>(points_.size()); }
  const FlagPoint& point(int i) const { return points_[i]; }
  /// k_x in G(O/pi^m) with k_x . base = x.
  const ResidueMat& lift(int i) const { return lifts_[i]; }
  /// Index of a point; -1 if unknown.
  int find(const Key& key) const;
  /// Point g . <standard flag> for g invertible over O/pi^m.
  FlagPoint point_of(const ResidueMat& g) const;
  /// s . x for s invertible over O/pi^m.
  FlagPoint translate(const ResidueMat& s, const FlagPoint& x) const;
  /// Image of a point in the space of level m' <= m.
  FlagPoint project_level(const FlagPoint& x, int m2) const;

 private:
  FlagSpace() = default;
  FlagPoint normalize(std::vector<ResidueMat> spaces) const;

  const Fq* f_ = nullptr;
  int n_ = 0;
  unsigned J_ = 0;
  int m_ = 1;
  std::vector<int> dims_;
  std::vector<FlagPoint> points_;
  std::vector<ResidueMat> lifts_;
  std::unordered_map<Key, int, KeyHash> index_;
};
using FlagSpacePtr = std::shared_ptr<const FlagSpace>;

/// Function on a FlagSpace with exact rational values.
struct LevelFunction {
  FlagSpacePtr space;
  std::vector<Rational> values;

  int level() const { return space->level(); }
  static LevelFunction zero(FlagSpacePtr s);
  friend LevelFunction operator+(const LevelFunction& a, const LevelFunction& b);
  friend LevelFunction operator-(const LevelFunction& a, const LevelFunction& b);
  LevelFunction scaled(const Rational& c) const;
};

/// Pullback along the projection to a higher level.
LevelFunction embed_level(const LevelFunction& f, int m2);

/// Block structure of P_I: entry (r, c) may be nonzero mod pi iff block(r) <= block(c).
bool in_parabolic(const FqMat& x, unsigned I);
/// circ: g in B_I^o.  Otherwise g in B_I = B_I^o K^*.
bool parahoric_member(const MatK& g, unsigned I, bool circ);

/// Generators of P_L(F_q): upper transvections, lower ones for i in L, and the torus.
std::vector<FqMat> parabolic_generators(const Fq& F, int n, unsigned L);

enum class CiMode { General, Displayed };

struct ProductSet {
  unsigned I = 0;
  int k = 0;
  FlagSpacePtr space;          // level 1, J = J_k
  std::vector<int> points;     // indices into space, sorted
  std::vector<FqMat> lifts;    // k_x with k_x . base = x
  std::vector<unsigned> factors;  // parabolic factors, leftmost first
};

/// Intervals [i_m + 1, n - k + m] for m = k..1 (General) or m in {k, 1} (Displayed).
std::vector<unsigned> ci_factors(int n, unsigned I, CiMode mode);
ProductSet product_set(const Fq& F, int n, unsigned I, CiMode mode = CiMode::General,
                       const Limits& lim = {});

LevelFunction chi_B(const Fq& F, int n, int k);
LevelFunction chi_C(const ProductSet& ps);
/// sum_x k_x . chi_B, evaluated through act_on_function.
LevelFunction chi_C_decomposed(const ProductSet& ps);

/// max(0, -minval g) + max(0, -minval g^{-1}).
int action_depth(const MatK& g);
/// (g f)(x) = f(g^{-1} x), tabulated at level m + depth(g).
LevelFunction act_on_function(const MatK& g, const LevelFunction& f);

/// Fibres (as point indices) and their indicators for the projections F_m^{(J_k)} -> F_m^{(J_k + {j})}, j in [n-k+1, n].
std::vector<std::vector<int>> degenerate_fibres(const Fq& F, int n, int k, int m);
std::vector<LevelFunction> degenerate_basis(const Fq& F, int n, int k, int m);
bool sp_equal(const LevelFunction& f1, const LevelFunction& f2, int k);
int steinberg_dim(const Fq& F, int n, int k);
/// Recomputation with the fibre rows in reverse order and Bareiss elimination.
int steinberg_dim_bareiss(const Fq& F, int n, int k);

/// Rank of the span of u . chi_B over all u in GL_{n+1}(F_q).
int chi_b_translate_rank(const Fq& F, int n, int k, const Limits& lim = {});

/// All elements of the subgroup of GL_{n+1}(F_q) generated by gens.
std::vector<FqMat> group_closure(const Fq& F, const std::vector<FqMat>& gens, const Limits& lim = {});

}  // namespace bt
