#pragma once

#include "conecg/symmat.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

namespace conecg {

/// Rank-one atom u uᵀ. Structured atoms carry a sparse u with ±1 entries;
/// dense atoms come from eigenvectors and are stored with unit norm. The sign
/// of u is canonical: its first nonzero entry is positive.
class RankOneAtom {
 public:
  struct Entry {
    int index;
    int sign;  // +1 or −1
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  /// Entries may come in any order; indices must be distinct and < n.
  static RankOneAtom structured(int n, std::vector<Entry> entries);
  static RankOneAtom unit(int n, int i) { return structured(n, {{i, 1}}); }
  static RankOneAtom dense(const Eigen::VectorXd& u);

  int dim() const { return n_; }
  bool is_structured() const { return dense_.size() == 0; }
  const std::vector<Entry>& entries() const { return entries_; }
  Eigen::VectorXd vector() const;
  SymMatrixd outer() const { return SymMatrixd::Outer(vector()); }

  friend bool operator==(const RankOneAtom& a, const RankOneAtom& b) {
    return a.n_ == b.n_ && a.entries_ == b.entries_ && a.dense_ == b.dense_;
  }

 private:
  int n_ = 0;
  std::vector<Entry> entries_;  // sorted by index
  Eigen::VectorXd dense_;
};

/// Pair atom V·[[a1,a2],[a2,a3]]·Vᵀ with V an n×2 matrix. Structured atoms
/// use V = (e_j, e_k), j < k; dense atoms have unit-norm, independent columns.
class PairAtom {
 public:
  using Basis = Eigen::Matrix<double, Eigen::Dynamic, 2>;

  static PairAtom structured(int n, int j, int k);
  static PairAtom dense(const Basis& v);

  int dim() const { return n_; }
  bool is_structured() const { return v_.size() == 0; }
  int first() const { return j_; }
  int second() const { return k_; }
  Basis basis() const;

  friend bool operator==(const PairAtom& a, const PairAtom& b) {
    return a.n_ == b.n_ && a.j_ == b.j_ && a.k_ == b.k_ && a.v_ == b.v_;
  }

 private:
  int n_ = 0, j_ = -1, k_ = -1;
  Basis v_;
};

using Atom = std::variant<RankOneAtom, PairAtom>;

int atom_dim(const Atom& a);

/// uᵀBu for rank-one atoms, λ_min(VᵀBV) for pair atoms.
double atom_value(const Atom& a, const SymMatrixd& b);
double atom_value(const RankOneAtom& a, const SymMatrixd& b);
double atom_value(const PairAtom& a, const SymMatrixd& b);

/// Text form. Structured rank-one: "u i1:s1 i2:s2 ..." with 0-based indices
/// and signs ±1. Dense rank-one: "d n" followed by the n entries. Pair atoms:
/// "V n 2" followed by the 2n entries of V, column by column.
/// `n` is the ambient dimension (the "u" form does not carry it).
std::string to_string(const Atom& a);
Atom parse_atom(const std::string& line, int n);

/// Insertion-ordered atom list that rejects duplicates: exact comparison for
/// structured atoms, and for dense atoms a sine-of-angle (rank one) or
/// projector distance (pairs) below `dense_tol`.
class AtomSet {
 public:
  explicit AtomSet(double dense_tol = 1e-9) : tol_(dense_tol) {}

  /// False if the atom duplicates one already stored.
  bool add(const Atom& a);
  bool contains(const Atom& a) const;

  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }
  auto begin() const { return atoms_.begin(); }
  auto end() const { return atoms_.end(); }

 private:
  std::string key(const Atom& a) const;
  bool dense_duplicate(const Atom& a) const;

  double tol_;
  std::vector<Atom> atoms_;
  std::unordered_set<std::string> keys_;
  std::vector<std::size_t> dense_;
};

/// e_i, then e_i ± e_j for i < j: n² atoms, the extreme rays of DD_n.
AtomSet gen_U2(int n);
/// (e_j, e_k) for j < k: C(n,2) pair atoms.
AtomSet gen_V2(int n);

/// Resumable cyclic enumeration of the sign-canonical vectors with one to
/// three ±1 entries. The order is depth-first over sorted supports: e_i, then
/// for each j > i the atoms on {i,j} with signs (+,+),(+,−), then for each
/// k > j the four atoms on {i,j,k} with signs of (j,k) in
/// (+,+),(+,−),(−,+),(−,−), before moving to the next j. Copying a cursor
/// saves it; the copy continues with the identical sequence.
class TripleCursor {
 public:
  struct Triple {
    int size;        // 1, 2 or 3
    int idx[3];      // ascending
    int sign[3];     // sign[0] == +1
  };

  explicit TripleCursor(int n);

  int dim() const { return n_; }
  /// n + 2·C(n,2) + 4·C(n,3).
  std::uint64_t cycle_length() const;
  /// Position within the cycle of the element current() returns.
  std::uint64_t position() const { return pos_; }
  const Triple& current() const { return cur_; }
  /// Moves to the next element, wrapping to the start after the last.
  void advance();

  RankOneAtom atom() const;
  /// "pos i j k s" style snapshot; restore() inverts it.
  std::string save() const;
  static TripleCursor restore(int n, const std::string& state);

  friend bool operator==(const TripleCursor& a, const TripleCursor& b) {
    return a.n_ == b.n_ && a.pos_ == b.pos_;
  }

 private:
  void reset();

  int n_;
  std::uint64_t pos_ = 0;
  Triple cur_{};
};

/// uᵀBu for a triple, computed from the stored entries.
inline double triple_value(const TripleCursor::Triple& t, const SymMatrixd& b) {
  double v = 0;
  for (int a = 0; a < t.size; ++a) {
    v += b(t.idx[a], t.idx[a]);
    for (int c = a + 1; c < t.size; ++c) v += 2.0 * t.sign[a] * t.sign[c] * b(t.idx[a], t.idx[c]);
  }
  return v;
}

}  // namespace conecg
