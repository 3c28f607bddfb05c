#pragma once
//
// Vertices and pointed cells of the building of GL_{n+1} over F_q((pi)).
//
// Lattices are row spans.  A pointed k-cell is stored as its distinguished
// vertex Lambda_0 together with the flag F_1 > ... > F_k in Lambda_0/pi Lambda_0
// (coordinates relative to the rows of the canonical basis of Lambda_0).
//

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "btharm/fqmat.hpp"
#include "btharm/matrices.hpp"

namespace bt {

using Key = std::vector<std::int32_t>;

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept;
};

using CellType = std::vector<int>;

struct Vertex {
  std::vector<int> a;  // diagonal exponents of the canonical basis, min 0
  MatK basis;          // upper triangular, diagonal pi^{a_i}, (i,j) entry reduced mod pi^{a_j}
  Key key;

  int dim() const { return static_cast<int>(a.size()); }
};
using VertexPtr = std::shared_ptr<const Vertex>;

struct CanonicalLattice {
  VertexPtr vertex;
  int scale;  // canonical lattice = pi^scale * input lattice
};

/// Canonical form of the homothety class of the row span of an invertible matrix
/// with exact Laurent polynomial entries.
CanonicalLattice canonicalize(const MatK& basis);
VertexPtr vertex_from_matrix(const MatK& g);
VertexPtr standard_vertex(const Fq& F, int n, int i);

struct PointedCell {
  VertexPtr base;
  std::vector<FqMat> flag;  // strictly decreasing, each in RREF
  Key key;

  int k() const { return static_cast<int>(flag.size()); }
  int dim() const { return base->dim(); }
  const Fq& field() const { return base->basis.field(); }

  static PointedCell make(VertexPtr base, std::vector<FqMat> flag);
  friend bool operator==(const PointedCell& x, const PointedCell& y) { return x.key == y.key; }
};

/// Basis matrix of Lambda_j (0 <= j <= k + 1, with Lambda_{k+1} = pi Lambda_0).
MatK chain_basis(const PointedCell& c, int j);
/// Basis of the preimage in Lambda_0 of a subspace of Lambda_0 / pi Lambda_0.
MatK preimage_basis(const Vertex& v, const FqMat& sub);
/// Pointed cell of the chain Lambda_0 > ... > Lambda_k given by bases.
/// With validate, the chain condition is checked (InvalidArgument otherwise).
PointedCell make_cell(const std::vector<MatK>& chain, bool validate = true);
PointedCell vertex_cell(VertexPtr v);
/// Vertices of the cell in pointed order.
std::vector<VertexPtr> cell_vertices(const PointedCell& c);
bool chain_condition_holds(const PointedCell& c);

/// Row convention: g maps Lambda to Lambda g^{-1}.
PointedCell act(const MatK& g, const PointedCell& c);
CellType pointed_type(const PointedCell& c);
PointedCell rotate(const PointedCell& c);
/// The k+1 faces; face j omits the j-th vertex and face 0 is pointed at v_1.
std::vector<PointedCell> faces(const PointedCell& c);
PointedCell face(const PointedCell& c, int j);

/// Indices of Delta - I for I a subset of Delta = {1..n}, given as a bitmask (bit i-1 for i).
std::vector<int> complement_indices(int n, unsigned I);
unsigned subset_mask(const std::vector<int>& elems);
/// The standard pointed cell (sigma_I, v_0).
PointedCell standard_cell(const Fq& F, int n, unsigned I);
/// J_k = [1, n-k].
unsigned j_k(int n, int k);

struct WijPair {
  MatK y;
  MatK w;
};
WijPair wij_pair(const Fq& F, int n, int i);
/// Permutation matrix of the simple reflection s_j (1-based).
MatK simple_reflection(const Fq& F, int n, int j);

/// HC3 neighbours: all sigma' with Lambda_j >= Lambda'_j > Lambda_{j+1}, one step above Lambda_{j+1}.
std::vector<PointedCell> enum_csj(const PointedCell& c, int j);

enum class Hc2Mode { PointedCompatible, UnderlyingFace };
/// HC2 star: pointed k-cells of type t containing the (k-1)-cell eta.
std::vector<PointedCell> enum_b_eta_t(const PointedCell& eta, const CellType& t,
                                      Hc2Mode mode = Hc2Mode::PointedCompatible);

/// All vertices adjacent to v.
std::vector<VertexPtr> neighbors(const Vertex& v);

struct Limits {
  std::size_t max_cells = 2'000'000;
  std::size_t max_group = 2'000'000;
};

/// Vertices at 1-skeleton distance <= r from the standard vertex, sorted by key.
std::vector<VertexPtr> ball(const Fq& F, int n, int r, const Limits& lim = {});
std::vector<VertexPtr> ball_serial(const Fq& F, int n, int r, const Limits& lim = {});
/// Pointed k-cells whose vertices lie in the given vertex set, sorted by key.
std::vector<PointedCell> cells_in_ball(const std::vector<VertexPtr>& verts, int k, const Limits& lim = {});
std::vector<PointedCell> cells_in_ball_serial(const std::vector<VertexPtr>& verts, int k,
                                              const Limits& lim = {});

/// Basis A of Lambda_0 adapted to the flag: Lambda_j = Lambda^o_{i_j} A with i_j = n+1 - dim F_j.
MatK adapted_basis(const PointedCell& c);
/// Some g with act(g, c1) = c2 for cells of equal pointed type.
MatK transporter(const PointedCell& c1, const PointedCell& c2);

std::string key_string(const Key& k);

}  // namespace bt
