#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "pseudoalg/linalg.hpp"
#include "pseudoalg/rational.hpp"

namespace pseudoalg {

struct LieViolation {
  enum Kind { Antisymmetry, Jacobi } kind;
  int i, j, l, k;  // l unused for antisymmetry
  Rat residual;

  std::string str() const {
    std::ostringstream os;
    if (kind == Antisymmetry)
      os << "antisymmetry at (" << i + 1 << "," << j + 1 << "," << k + 1
         << "): residual " << rat_str(residual);
    else
      os << "jacobi at (" << i + 1 << "," << j + 1 << "," << l + 1 << ";" << k + 1
         << "): residual " << rat_str(residual);
    return os.str();
  }
};

struct LieValidation {
  std::vector<LieViolation> violations;
  bool ok() const { return violations.empty(); }
  std::string str() const {
    std::string s;
    for (const auto& v : violations) s += v.str() + "\n";
    return s;
  }
};

/// Finite-dimensional Lie algebra over Q given by structure constants
/// [d_i, d_j] = sum_k c(i,j,k) d_k. Immutable after construction.
class LieAlgebra {
 public:
  LieAlgebra(int dim, std::vector<std::string> labels, std::vector<Rat> c)
      : dim_(dim), labels_(std::move(labels)), c_(std::move(c)) {
    if (dim < 0) throw std::invalid_argument("negative dimension");
    if (static_cast<int>(c_.size()) != dim * dim * dim)
      throw std::invalid_argument("structure constant array has wrong shape");
    if (labels_.empty())
      for (int i = 0; i < dim; ++i) labels_.push_back("d" + std::to_string(i + 1));
    if (static_cast<int>(labels_.size()) != dim)
      throw std::invalid_argument("label list has wrong length");
    abelian_ = true;
    for (const auto& x : c_)
      if (!is_zero(x)) {
        abelian_ = false;
        break;
      }
  }

  static LieAlgebra abelian(int dim) {
    return LieAlgebra(dim, {}, std::vector<Rat>(static_cast<size_t>(dim * dim * dim), Rat(0)));
  }

  /// Heisenberg h3: [d1,d2] = d3.
  static LieAlgebra heisenberg() {
    LieAlgebra h = abelian(3);
    h.set(0, 1, 2, Rat(1));
    h.set(1, 0, 2, Rat(-1));
    return h;
  }

  /// Heisenberg in the contact orientation [d1,d2] = -d3, the presentation
  /// for which (r = d1^d2, s = d3) defines K(d, theta).
  static LieAlgebra heisenberg_contact() {
    LieAlgebra h = abelian(3);
    h.set(0, 1, 2, Rat(-1));
    h.set(1, 0, 2, Rat(1));
    return h;
  }

  /// sl2 in the basis (f, h, e): [h,e]=2e, [h,f]=-2f, [e,f]=h.
  /// The order puts the Borel <h,e> in the last two slots.
  static LieAlgebra sl2_fhe() {
    LieAlgebra g = abelian(3);
    g.labels_ = {"f", "h", "e"};
    const int F = 0, H = 1, E = 2;
    g.set(H, E, E, Rat(2));
    g.set(E, H, E, Rat(-2));
    g.set(H, F, F, Rat(-2));
    g.set(F, H, F, Rat(2));
    g.set(E, F, H, Rat(1));
    g.set(F, E, H, Rat(-1));
    return g;
  }

  /// Borel of sl2 in the basis (h, e): [h,e] = 2e.
  static LieAlgebra borel2() {
    LieAlgebra g = abelian(2);
    g.labels_ = {"h", "e"};
    g.set(0, 1, 1, Rat(2));
    g.set(1, 0, 1, Rat(-2));
    return g;
  }

  int dim() const { return dim_; }
  bool is_abelian() const { return abelian_; }
  const std::vector<std::string>& labels() const { return labels_; }

  const Rat& c(int i, int j, int k) const {
    return c_[static_cast<size_t>((i * dim_ + j) * dim_ + k)];
  }

  /// Coordinates of [d_i, d_j].
  RatVec bracket_basis(int i, int j) const {
    RatVec v = zero_vec(dim_);
    for (int k = 0; k < dim_; ++k) v[static_cast<size_t>(k)] = c(i, j, k);
    return v;
  }

  /// [x, y] for coordinate vectors.
  RatVec bracket(const RatVec& x, const RatVec& y) const {
    RatVec out = zero_vec(dim_);
    for (int i = 0; i < dim_; ++i) {
      if (is_zero(x[static_cast<size_t>(i)])) continue;
      for (int j = 0; j < dim_; ++j) {
        if (is_zero(y[static_cast<size_t>(j)])) continue;
        Rat f = x[static_cast<size_t>(i)] * y[static_cast<size_t>(j)];
        for (int k = 0; k < dim_; ++k) out[static_cast<size_t>(k)] += f * c(i, j, k);
      }
    }
    return out;
  }

  /// Matrix of ad d_i in the basis; column j holds [d_i, d_j].
  RatMat ad_matrix(int i) const {
    RatMat m = zero_mat(dim_, dim_);
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) m[static_cast<size_t>(k)][static_cast<size_t>(j)] = c(i, j, k);
    return m;
  }

 private:
  void set(int i, int j, int k, Rat v) {
    if (!is_zero(v)) abelian_ = false;
    c_[static_cast<size_t>((i * dim_ + j) * dim_ + k)] = std::move(v);
  }

  int dim_;
  std::vector<std::string> labels_;
  std::vector<Rat> c_;
  bool abelian_;
};

/// Brute-force antisymmetry + Jacobi over every index tuple; the report
/// lists each violated instance.
inline LieValidation validate_lie(const LieAlgebra& g) {
  LieValidation rep;
  int n = g.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Rat r = g.c(i, j, k) + g.c(j, i, k);
        if (!is_zero(r))
          rep.violations.push_back({LieViolation::Antisymmetry, i, j, 0, k, r});
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k) {
          Rat sum(0);
          for (int m = 0; m < n; ++m)
            sum += g.c(i, j, m) * g.c(m, l, k) + g.c(j, l, m) * g.c(m, i, k) +
                   g.c(l, i, m) * g.c(m, j, k);
          if (!is_zero(sum))
            rep.violations.push_back({LieViolation::Jacobi, i, j, l, k, sum});
        }
  return rep;
}

/// chi is a traceform iff it kills every commutator.
inline bool check_traceform(const LieAlgebra& g, const RatVec& chi) {
  if (static_cast<int>(chi.size()) != g.dim())
    throw std::invalid_argument("traceform has wrong length");
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) {
      Rat s(0);
      for (int k = 0; k < g.dim(); ++k) s += g.c(i, j, k) * chi[static_cast<size_t>(k)];
      if (!is_zero(s)) return false;
    }
  return true;
}

/// Pair d in d' with the convention that the last N basis vectors of the big
/// algebra span the small one. `split` is the number of leading extra
/// directions, so dim(small) = dim(big) - split.
class SubalgebraPair {
 public:
  SubalgebraPair(LieAlgebra big, int split) : big_(std::move(big)), split_(split) {
    if (split < 0 || split > big_.dim())
      throw std::invalid_argument("bad subalgebra split");
    // closure: brackets of small elements stay in the small span
    for (int i = split_; i < big_.dim(); ++i)
      for (int j = split_; j < big_.dim(); ++j)
        for (int k = 0; k < split_; ++k)
          if (!is_zero(big_.c(i, j, k)))
            throw std::invalid_argument("last-indices block is not a subalgebra");
  }

  const LieAlgebra& big() const { return big_; }
  int split() const { return split_; }
  int small_dim() const { return big_.dim() - split_; }

  LieAlgebra small() const {
    int n = small_dim();
    std::vector<Rat> c(static_cast<size_t>(n * n * n), Rat(0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          c[static_cast<size_t>((i * n + j) * n + k)] =
              big_.c(i + split_, j + split_, k + split_);
    std::vector<std::string> labels(big_.labels().begin() + split_, big_.labels().end());
    return LieAlgebra(n, labels, std::move(c));
  }

  /// Lift a small-algebra coordinate vector into big coordinates.
  RatVec embed_vec(const RatVec& v) const {
    RatVec out = zero_vec(big_.dim());
    for (int i = 0; i < small_dim(); ++i) out[static_cast<size_t>(i + split_)] = v[static_cast<size_t>(i)];
    return out;
  }

  bool in_small(const RatVec& v) const {
    for (int i = 0; i < split_; ++i)
      if (!is_zero(v[static_cast<size_t>(i)])) return false;
    return true;
  }

 private:
  LieAlgebra big_;
  int split_;
};

/// (ad_chi t)(x) = [t, x] + chi(x) t for x in the small algebra; columns are
/// indexed by the small basis, values live in the big algebra.
inline RatMat ad_chi(const SubalgebraPair& pair, const RatVec& chi, const RatVec& t) {
  const LieAlgebra& big = pair.big();
  int n = pair.small_dim();
  if (static_cast<int>(chi.size()) != n) throw std::invalid_argument("chi length");
  if (static_cast<int>(t.size()) != big.dim()) throw std::invalid_argument("t length");
  RatMat m = zero_mat(big.dim(), n);
  for (int col = 0; col < n; ++col) {
    RatVec x = zero_vec(big.dim());
    x[static_cast<size_t>(col + pair.split())] = 1;
    RatVec val = big.bracket(t, x);
    vec_axpy(val, chi[static_cast<size_t>(col)], t);
    for (int rowi = 0; rowi < big.dim(); ++rowi) m[static_cast<size_t>(rowi)][static_cast<size_t>(col)] = val[static_cast<size_t>(rowi)];
  }
  return m;
}

}  // namespace pseudoalg
