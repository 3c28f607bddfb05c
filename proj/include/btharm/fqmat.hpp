#pragma once
//
// Dense matrices over the residue field and subspace enumeration.
// Subspaces are row spaces, stored in reduced row-echelon form.
//

#include <cstdint>
#include <vector>

#include "btharm/scalars.hpp"

namespace bt {

struct FqMat {
  int rows = 0;
  int cols = 0;
  std::vector<FqElem> a;

  FqMat() = default;
  FqMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

  FqElem& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  FqElem operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  static FqMat identity(int n);
  friend auto operator<=>(const FqMat&, const FqMat&) = default;
};

FqMat fq_mul(const Fq& F, const FqMat& x, const FqMat& y);
FqMat fq_transpose(const FqMat& x);
/// Rows of x followed by rows of y.
FqMat fq_stack(const FqMat& x, const FqMat& y);

/// In-place reduced row echelon form; zero rows are removed.  Returns the pivot columns.
std::vector<int> fq_rref_inplace(const Fq& F, FqMat& m);
FqMat fq_rref(const Fq& F, FqMat m);
int fq_rank(const Fq& F, FqMat m);
/// Throws Singular.
FqMat fq_inverse(const Fq& F, const FqMat& m);
FqElem fq_det(const Fq& F, FqMat m);

/// Row space of sub contained in row space of sup.
bool fq_contains(const Fq& F, const FqMat& sup, const FqMat& sub);

/// Every d-dimensional subspace of F^N, in RREF, in a fixed deterministic order.
std::vector<FqMat> fq_subspaces(const Fq& F, int N, int d);
/// Every W with small ⊆ W ⊆ big and dim W = d (both arguments in RREF).
std::vector<FqMat> fq_intermediate(const Fq& F, const FqMat& big, const FqMat& small, int d);

/// Gaussian binomial coefficient [n choose k]_q.
long long gaussian_binomial(long long q, int n, int k);

}  // namespace bt
