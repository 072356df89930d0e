#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pseudoalg/lie_algebra.hpp"
#include "pseudoalg/linalg.hpp"

namespace pseudoalg {

/// A gl(d) element as its matrix in the d-basis.
using GlMap = RatMat;

struct CocycleViolation {
  int a, b, c;
  Rat residual;
  std::string str() const {
    std::ostringstream os;
    os << "cocycle fails at (" << a + 1 << "," << b + 1 << "," << c + 1
       << "): residual " << rat_str(residual);
    return os.str();
  }
};

struct CocycleReport {
  std::vector<CocycleViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Nondegenerate omega with r = omega^{-1}, traceform chi = iota_s omega and
/// the raised basis d^i = sum_j r^{ij} d_j. Immutable.
struct SymplecticData {
  LieAlgebra alg;
  RatMat omega;  // omega_{ij} = omega(d_i ^ d_j)
  RatMat r;      // (r^{ij}) = omega^{-1}
  RatVec chi;
  RatVec s;      // chi = iota_s omega
  // raised[i][j]: j-th coordinate of d^i
  RatMat raised;

  int dim() const { return alg.dim(); }

  Rat omega_pair(const RatVec& x, const RatVec& y) const {
    Rat out(0);
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j)
        out += x[static_cast<size_t>(i)] * y[static_cast<size_t>(j)] * omega[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return out;
  }

  /// iota_x omega as a covector.
  RatVec iota_omega(const RatVec& x) const {
    RatVec out = zero_vec(dim());
    for (int j = 0; j < dim(); ++j) {
      Rat v(0);
      for (int i = 0; i < dim(); ++i) v += x[static_cast<size_t>(i)] * omega[static_cast<size_t>(i)][static_cast<size_t>(j)];
      out[static_cast<size_t>(j)] = v;
    }
    return out;
  }
};

/// Direct evaluation of the d omega + chi ^ omega cocycle identity on one
/// basis triple.
inline Rat cocycle_residual(const LieAlgebra& g, const RatMat& omega,
                            const RatVec& chi, int a, int b, int c) {
  auto w = [&](const RatVec& x, int j) {
    Rat out(0);
    for (int i = 0; i < g.dim(); ++i) out += x[static_cast<size_t>(i)] * omega[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return out;
  };
  Rat res = w(g.bracket_basis(a, b), c) + w(g.bracket_basis(b, c), a) +
            w(g.bracket_basis(c, a), b);
  res -= chi[static_cast<size_t>(a)] * omega[static_cast<size_t>(b)][static_cast<size_t>(c)];
  res -= chi[static_cast<size_t>(b)] * omega[static_cast<size_t>(c)][static_cast<size_t>(a)];
  res -= chi[static_cast<size_t>(c)] * omega[static_cast<size_t>(a)][static_cast<size_t>(b)];
  return res;
}

inline CocycleReport check_cocycle(const LieAlgebra& g, const RatMat& omega,
                                   const RatVec& chi) {
  CocycleReport rep;
  int n = g.dim();
  // the expression is alternating, so basis triples a < b < c suffice
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        Rat res = cocycle_residual(g, omega, chi, a, b, c);
        if (!is_zero(res)) rep.violations.push_back({a, b, c, res});
      }
  return rep;
}

struct SymplecticBuild {
  std::optional<SymplecticData> data;
  CocycleReport cocycle;
  bool ok() const { return data.has_value(); }
};

/// Builds the full symplectic package. Throws on a singular or non-skew
/// omega or odd dimension; a cocycle failure is reported, not thrown.
inline SymplecticBuild build_symplectic(const LieAlgebra& g, const RatMat& omega,
                                        const RatVec& chi) {
  int n = g.dim();
  if (n % 2 != 0) throw std::domain_error("symplectic form needs even dimension");
  if (static_cast<int>(omega.size()) != n)
    throw std::invalid_argument("omega has wrong shape");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(omega[static_cast<size_t>(i)].size()) != n)
      throw std::invalid_argument("omega has wrong shape");
    for (int j = 0; j < n; ++j)
      if (!(omega[static_cast<size_t>(i)][static_cast<size_t>(j)] == -omega[static_cast<size_t>(j)][static_cast<size_t>(i)]))
        throw std::invalid_argument("omega is not skew");
  }
  if (static_cast<int>(chi.size()) != n) throw std::invalid_argument("chi length");
  if (!check_traceform(g, chi)) throw std::invalid_argument("chi is not a traceform");

  RatMat r;
  try {
    r = mat_inverse(omega);
  } catch (const std::domain_error&) {
    throw std::domain_error("omega is degenerate");
  }

  SymplecticBuild out;
  out.cocycle = check_cocycle(g, omega, chi);
  if (!out.cocycle.ok()) return out;

  SymplecticData sd{g, omega, r, chi, zero_vec(n), zero_mat(n, n)};
  // s = sum_k chi(d_k) d^k solves iota_s omega = chi
  for (int j = 0; j < n; ++j) {
    Rat v(0);
    for (int k = 0; k < n; ++k) v += chi[static_cast<size_t>(k)] * r[static_cast<size_t>(k)][static_cast<size_t>(j)];
    sd.s[static_cast<size_t>(j)] = v;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sd.raised[static_cast<size_t>(i)][static_cast<size_t>(j)] = r[static_cast<size_t>(i)][static_cast<size_t>(j)];
  out.data = std::move(sd);
  return out;
}

/// phi lies in sp(d, omega) iff phi^T omega + omega phi = 0.
inline bool sp_member(const SymplecticData& sd, const GlMap& phi) {
  return mat_is_zero(mat_add(mat_mul(mat_transpose(phi), sd.omega),
                             mat_mul(sd.omega, phi)));
}

/// Projection onto sp(d, omega) along span{e^{ij} - e^{ji}}: symmetric-part
/// extraction in raised-index coordinates, pi(A) = (A - r A^T omega)/2.
inline GlMap pi_sp(const SymplecticData& sd, const GlMap& a) {
  RatMat t = mat_mul(sd.r, mat_mul(mat_transpose(a), sd.omega));
  return mat_scale(rat(1, 2), mat_sub(a, t));
}

/// Concrete matrix of e^{ij} (e^{ij} d_k = delta^j_k d^i).
inline GlMap e_raised(const SymplecticData& sd, int i, int j) {
  int n = sd.dim();
  GlMap m = zero_mat(n, n);
  for (int row = 0; row < n; ++row) m[static_cast<size_t>(row)][static_cast<size_t>(j)] = sd.r[static_cast<size_t>(i)][static_cast<size_t>(row)];
  return m;
}

/// f^{ij} = -(e^{ij} + e^{ji})/2; these span sp(d, omega).
inline GlMap f_raised(const SymplecticData& sd, int i, int j) {
  return mat_scale(rat(-1, 2), mat_add(e_raised(sd, i, j), e_raised(sd, j, i)));
}

/// Coordinates of A in the e^{ij} system: A = sum a_{ij} e^{ij} with
/// a = omega^T A.
inline RatMat raised_coords(const SymplecticData& sd, const GlMap& a) {
  return mat_mul(mat_transpose(sd.omega), a);
}

/// Expansion of a member of sp(d, omega) over the f^{ij}, i <= j.
/// A = sum_{i<j} (-2 a_{ij}) f^{ij} + sum_i (-a_{ii}) f^{ii}.
inline std::map<std::pair<int, int>, Rat> sp_f_coords(const SymplecticData& sd,
                                                      const GlMap& a) {
  RatMat co = raised_coords(sd, a);
  std::map<std::pair<int, int>, Rat> out;
  int n = sd.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Rat v = (i == j) ? Rat(-co[static_cast<size_t>(i)][static_cast<size_t>(i)])
                       : Rat(-(co[static_cast<size_t>(i)][static_cast<size_t>(j)] +
                               co[static_cast<size_t>(j)][static_cast<size_t>(i)]));
      if (!is_zero(v)) out[{i, j}] = v;
    }
  return out;
}

/// ad_chi delta restricted to d, as a gl(d) matrix (delta in d).
inline GlMap ad_chi_small(const LieAlgebra& g, const RatVec& chi, const RatVec& delta) {
  int n = g.dim();
  GlMap m = zero_mat(n, n);
  for (int col = 0; col < n; ++col) {
    RatVec x = zero_vec(n);
    x[static_cast<size_t>(col)] = 1;
    RatVec val = g.bracket(delta, x);
    vec_axpy(val, chi[static_cast<size_t>(col)], delta);
    for (int row = 0; row < n; ++row) m[static_cast<size_t>(row)][static_cast<size_t>(col)] = val[static_cast<size_t>(row)];
  }
  return m;
}

/// The two equivalent conditions of the delta-lemma:
///   (1) [s, delta] = 0 and ad_chi delta in sp(d, omega);
///   (2) iota_delta omega is a traceform and chi(delta) = 0.
inline std::pair<bool, bool> lemma_equivalent_check(const SymplecticData& sd,
                                                    const RatVec& delta) {
  bool one = vec_is_zero(sd.alg.bracket(sd.s, delta)) &&
             sp_member(sd, ad_chi_small(sd.alg, sd.chi, delta));
  RatVec iota = sd.iota_omega(delta);
  Rat chi_delta(0);
  for (int i = 0; i < sd.dim(); ++i) chi_delta += sd.chi[static_cast<size_t>(i)] * delta[static_cast<size_t>(i)];
  bool two = check_traceform(sd.alg, iota) && is_zero(chi_delta);
  return {one, two};
}

/// d_+ as an honest (N+1)-dimensional Lie algebra: last basis vector is c,
/// [d, d']_+ = [d, d'] + omega(d ^ d') c and [d, c]_+ = chi(d) c.
inline LieAlgebra build_dplus(const SymplecticData& sd) {
  int n = sd.dim();
  int m = n + 1;
  std::vector<Rat> c(static_cast<size_t>(m * m * m), Rat(0));
  auto set = [&](int i, int j, int k, const Rat& v) {
    c[static_cast<size_t>((i * m + j) * m + k)] = v;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) set(i, j, k, sd.alg.c(i, j, k));
      set(i, j, n, sd.omega[static_cast<size_t>(i)][static_cast<size_t>(j)]);
    }
  for (int i = 0; i < n; ++i) {
    set(i, n, n, sd.chi[static_cast<size_t>(i)]);
    set(n, i, n, -sd.chi[static_cast<size_t>(i)]);
  }
  std::vector<std::string> labels = sd.alg.labels();
  labels.push_back("c");
  LieAlgebra dplus(m, labels, std::move(c));
  auto rep = validate_lie(dplus);
  if (!rep.ok())
    throw std::logic_error("d_+ failed Jacobi revalidation:\n" + rep.str());
  return dplus;
}

}  // namespace pseudoalg
