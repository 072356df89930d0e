#pragma once

#include <string>
#include <vector>

#include "pseudoalg/pseudoalgebra.hpp"

namespace pseudoalg {

/// Finite-dimensional representation data for tensor modules. Both summand
/// actions are stored as dim_r x dim_r matrices on the same space.
///
/// pi: the d-action (W/S/K: N matrices; H: N+1 with rho(c) last).
/// u:  the g0 spanning set. W/S: the N^2 elementary matrices e_i^j in
///     row-major order (e_i^j maps d_j to d_i); H: f^{ij} for i <= j in lex
///     order; K: f^{ij} over d_0 (i <= j) followed by the csp center c.
struct RepSpec {
  int dim_r = 0;
  std::vector<RatMat> pi;
  std::vector<RatMat> u;

  static RepSpec zero(PKind kind, int n, int dim_r) {
    RepSpec r;
    r.dim_r = dim_r;
    int npi = (kind == PKind::HType) ? n + 1 : n;
    int nu = 0;
    if (kind == PKind::W || kind == PKind::S) nu = n * n;
    else if (kind == PKind::HType) nu = n * (n + 1) / 2;
    else if (kind == PKind::KType) nu = (n - 1) * n / 2 + 1;
    r.pi.assign(static_cast<size_t>(npi), zero_mat(dim_r, dim_r));
    r.u.assign(static_cast<size_t>(nu), zero_mat(dim_r, dim_r));
    return r;
  }

  const RatMat& u_e(int n, int i, int j) const {  // W/S indexing
    return u[static_cast<size_t>(i * n + j)];
  }
  static int f_index(int n, int i, int j) {  // i <= j over an n-dim space
    return i * n - i * (i - 1) / 2 + (j - i);
  }
  const RatMat& u_f(int n, int i, int j) const {
    if (i > j) std::swap(i, j);
    return u[static_cast<size_t>(f_index(n, i, j))];
  }
  const RatMat& pi_c() const { return pi.back(); }  // H-type only
  const RatMat& u_c() const { return u.back(); }    // K-type only

  /// rho-image of a matrix in the e_i^j span (W/S).
  RatMat apply_gl(int n, const RatMat& a) const {
    RatMat out = zero_mat(dim_r, dim_r);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!is_zero(a[static_cast<size_t>(i)][static_cast<size_t>(j)]))
          out = mat_add(out, mat_scale(a[static_cast<size_t>(i)][static_cast<size_t>(j)], u_e(n, i, j)));
    return out;
  }

  /// rho-image of a member of sp(d, omega), decomposed over the f^{ij}.
  RatMat apply_sp(const SymplecticData& sd, const RatMat& a) const {
    RatMat out = zero_mat(dim_r, dim_r);
    for (const auto& [ij, c] : sp_f_coords(sd, a))
      out = mat_add(out, mat_scale(c, u_f(sd.dim(), ij.first, ij.second)));
    return out;
  }

  /// Twist of the pi-part by a traceform: pi'(d_k) = pi(d_k) + psi_k id.
  /// For H-type, c is fixed (psi pulls back along d_+ -> d).
  RepSpec twisted_by(const RatVec& psi) const {
    RepSpec r = *this;
    for (size_t k = 0; k < psi.size(); ++k)
      if (!is_zero(psi[k]))
        r.pi[k] = mat_add(r.pi[k], mat_scale(psi[k], identity_mat(dim_r)));
    return r;
  }
};

namespace detail {
inline void check_comm(ResidualReport& rep, const RatMat& x, const RatMat& y,
                       const RatMat& expect, const std::string& what) {
  RatMat lhs = mat_sub(mat_mul(x, y), mat_mul(y, x));
  if (!mat_is_zero(mat_sub(lhs, expect))) rep.entries.push_back(what);
}
}  // namespace detail

/// Exact commutation-relation check for the declared Lie algebra plus the
/// direct-sum requirement that the two summand actions commute.
inline ResidualReport validate_rep(const PseudoAlgebra& alg, const RepSpec& rep) {
  ResidualReport out;
  const PseudoAlgebra& prim = alg.primitive();
  const LieAlgebra& g = *prim.base;
  int n = g.dim();
  int dr = rep.dim_r;
  auto zero = zero_mat(dr, dr);

  auto pi_bracket_small = [&](int i, int j) {
    RatMat e = zero;
    for (int k = 0; k < n; ++k)
      if (!is_zero(g.c(i, j, k))) e = mat_add(e, mat_scale(g.c(i, j, k), rep.pi[static_cast<size_t>(k)]));
    return e;
  };

  switch (prim.kind) {
    case PKind::W:
    case PKind::S: {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          detail::check_comm(out, rep.pi[static_cast<size_t>(i)], rep.pi[static_cast<size_t>(j)], pi_bracket_small(i, j),
                             "pi relation (" + std::to_string(i) + "," + std::to_string(j) + ")");
      // gl relations [e_a^b, e_c^d] = delta_{bc} e_a^d - delta_{da} e_c^b
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) {
              RatMat expect = zero;
              if (b == c) expect = mat_add(expect, rep.u_e(n, a, d));
              if (d == a) expect = mat_sub(expect, rep.u_e(n, c, b));
              detail::check_comm(out, rep.u_e(n, a, b), rep.u_e(n, c, d), expect, "gl relation");
            }
      for (int i = 0; i < n; ++i)
        for (size_t uu = 0; uu < rep.u.size(); ++uu)
          detail::check_comm(out, rep.pi[static_cast<size_t>(i)], rep.u[uu], zero, "summands do not commute");
      if (prim.kind == PKind::S) {
        RatMat tr = zero;
        for (int i = 0; i < n; ++i) tr = mat_add(tr, rep.u_e(n, i, i));
        if (!mat_is_zero(tr)) out.entries.push_back("id in gl(d) must act trivially for S");
      }
      break;
    }
    case PKind::HType: {
      const SymplecticData& sd = *prim.symp;
      // d_+ relations: [pi_i, pi_j] = pi([d_i,d_j]) + omega_ij pi(c),
      // [pi_i, pi(c)] = chi_i pi(c)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          RatMat expect = mat_add(pi_bracket_small(i, j),
                                  mat_scale(sd.omega[static_cast<size_t>(i)][static_cast<size_t>(j)], rep.pi_c()));
          detail::check_comm(out, rep.pi[static_cast<size_t>(i)], rep.pi[static_cast<size_t>(j)], expect, "d_+ relation");
        }
      for (int i = 0; i < n; ++i)
        detail::check_comm(out, rep.pi[static_cast<size_t>(i)], rep.pi_c(),
                           mat_scale(sd.chi[static_cast<size_t>(i)], rep.pi_c()), "d_+ center relation");
      // sp relations for the f^{ij}
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = k; l < n; ++l) {
              RatMat concrete = mat_sub(mat_mul(f_raised(sd, i, j), f_raised(sd, k, l)),
                                        mat_mul(f_raised(sd, k, l), f_raised(sd, i, j)));
              detail::check_comm(out, rep.u_f(n, i, j), rep.u_f(n, k, l),
                                 rep.apply_sp(sd, concrete), "sp relation");
            }
      for (size_t p = 0; p < rep.pi.size(); ++p)
        for (size_t uu = 0; uu < rep.u.size(); ++uu)
          detail::check_comm(out, rep.pi[p], rep.u[uu], zero, "summands do not commute");
      break;
    }
    case PKind::KType: {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          detail::check_comm(out, rep.pi[static_cast<size_t>(i)], rep.pi[static_cast<size_t>(j)], pi_bracket_small(i, j),
                             "pi relation");
      // csp = sp(d_0) + center c
      const KTypeData& kd = *prim.kdata;
      SymplecticData sd0{LieAlgebra::abelian(n - 1), mat_inverse(kd.r0), kd.r0,
                         zero_vec(n - 1), zero_vec(n - 1), kd.r0};
      for (int i = 0; i + 1 < n; ++i)
        for (int j = i; j + 1 < n; ++j)
          for (int k = 0; k + 1 < n; ++k)
            for (int l = k; l + 1 < n; ++l) {
              RatMat concrete = mat_sub(mat_mul(f_raised(sd0, i, j), f_raised(sd0, k, l)),
                                        mat_mul(f_raised(sd0, k, l), f_raised(sd0, i, j)));
              detail::check_comm(out, rep.u_f(n - 1, i, j), rep.u_f(n - 1, k, l),
                                 rep.apply_sp(sd0, concrete), "sp relation");
            }
      for (size_t uu = 0; uu + 1 < rep.u.size(); ++uu)
        detail::check_comm(out, rep.u[uu], rep.u_c(), zero, "csp center relation");
      for (size_t p = 0; p < rep.pi.size(); ++p)
        for (size_t uu = 0; uu < rep.u.size(); ++uu)
          detail::check_comm(out, rep.pi[p], rep.u[uu], zero, "summands do not commute");
      break;
    }
    default:
      throw std::invalid_argument("validate_rep: unsupported algebra kind");
  }
  return out;
}

}  // namespace pseudoalg
