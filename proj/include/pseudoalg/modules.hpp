#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pseudoalg/rep.hpp"

namespace pseudoalg {

/// Pseudoalgebra representation on the free carrier H (x) R, stored as the
/// action of each ambient algebra generator on 1 (x) e_r and extended
/// H (x) H-bilinearly.
struct PseudoModule {
  std::shared_ptr<const PseudoAlgebra> alg;
  int dim_r = 0;
  RepSpec rep;
  std::optional<RatVec> twist_t;  // H currents only; big-algebra coordinates
  // action[p][r] = (ambient basis p) * (1 (x) e_r)
  std::vector<std::vector<RawTensor<FreeCarrierMod>>> action;

  FreeCarrierMod carrier_mod() const { return FreeCarrierMod{alg->base.get(), dim_r}; }

  Carrier unit_vector(int r) const {
    return Carrier::unit(alg->base->dim(), dim_r, r);
  }

  /// (x * m) for x an algebra element (ambient coords) and m a carrier
  /// element: H-coefficients multiply the tensor legs on the left.
  RawTensor<FreeCarrierMod> eval_action(const Carrier& x, const Carrier& m) const {
    const LieAlgebra& g = *alg->base;
    RawTensor<FreeCarrierMod> out;
    for (const auto& [kx, vx] : x.terms)
      for (const auto& [km, vm] : m.terms)
        for (int p = 0; p < alg->amb; ++p) {
          if (is_zero(vx[static_cast<size_t>(p)])) continue;
          for (int r = 0; r < dim_r; ++r) {
            if (is_zero(vm[static_cast<size_t>(r)])) continue;
            Rat c = vx[static_cast<size_t>(p)] * vm[static_cast<size_t>(r)];
            for (const auto& t : action[static_cast<size_t>(p)][static_cast<size_t>(r)].terms) {
              HElement f = pbw_mul(g, HElement::monomial(kx, c), t.f);
              HElement gg = pbw_mul(g, HElement::monomial(km), t.g);
              out.add(std::move(f), std::move(gg), t.m);
            }
          }
        }
    return out;
  }

  RawTensor<FreeCarrierMod> gen_action(int p, const Carrier& m) const {
    return eval_action(alg->gens[static_cast<size_t>(p)], m);
  }
};

namespace detail {

/// Assembles the W-type action of 1 (x) d_i on 1 (x) e_r.
inline RawTensor<FreeCarrierMod> w_action_term(const LieAlgebra& g, const RepSpec& rep,
                                               int i, int r) {
  int n = g.dim();
  int dr = rep.dim_r;
  RawTensor<FreeCarrierMod> t;
  RatVec er = zero_vec(dr);
  er[static_cast<size_t>(r)] = 1;
  for (int j = 0; j < n; ++j) {
    RatVec v = mat_apply(rep.u_e(n, i, j), er);
    if (vec_is_zero(v)) continue;
    Carrier m(n, dr);
    m.add_term(MultiIndex(n), v);
    t.add(HElement::gen(n, j), HElement::unit(n), std::move(m));
  }
  // (1 (x) 1) (x) (1 (x) rho(d_i + ad d_i)v - d_i (x) v)
  RatMat ad = rep.apply_gl(n, g.ad_matrix(i));
  RatVec v0 = mat_apply(mat_add(rep.pi[static_cast<size_t>(i)], ad), er);
  Carrier m(n, dr);
  m.add_term(MultiIndex(n), v0);
  m.add_term(MultiIndex::unit(n, i), er, Rat(-1));
  if (!m.is_zero_elem()) t.add(HElement::unit(n), HElement::unit(n), std::move(m));
  return t;
}

/// Assembles the H-type action of e on 1 (x) e_r.
inline RawTensor<FreeCarrierMod> h_action_term(const SymplecticData& sd,
                                               const RepSpec& rep, int r) {
  const LieAlgebra& g = sd.alg;
  int n = g.dim();
  int dr = rep.dim_r;
  RawTensor<FreeCarrierMod> t;
  RatVec er = zero_vec(dr);
  er[static_cast<size_t>(r)] = 1;

  auto bar = [&](const HElement& h) { return overline(h, sd.chi); };

  // sum_{ij} (overline(d_i d_j) (x) 1) (x) (1 (x) rho(f^{ij}) v)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      RatVec v = mat_apply(rep.u_f(n, i, j), er);
      if (vec_is_zero(v)) continue;
      HElement dij = pbw_mul(g, HElement::gen(n, i), HElement::gen(n, j));
      Carrier m(n, dr);
      m.add_term(MultiIndex(n), v);
      t.add(bar(dij), HElement::unit(n), std::move(m));
    }
  // - sum_k (overline(d_k) (x) 1) (x) (1 (x) rho(d^k + adchi^sp(d^k)) v - d^k (x) v)
  for (int k = 0; k < n; ++k) {
    RatMat pik = zero_mat(dr, dr);
    for (int mcol = 0; mcol < n; ++mcol)
      if (!is_zero(sd.r[static_cast<size_t>(k)][static_cast<size_t>(mcol)]))
        pik = mat_add(pik, mat_scale(sd.r[static_cast<size_t>(k)][static_cast<size_t>(mcol)], rep.pi[static_cast<size_t>(mcol)]));
    RatVec raised_k = zero_vec(n);
    for (int mcol = 0; mcol < n; ++mcol) raised_k[static_cast<size_t>(mcol)] = sd.r[static_cast<size_t>(k)][static_cast<size_t>(mcol)];
    GlMap adsp = pi_sp(sd, ad_chi_small(g, sd.chi, raised_k));
    RatVec v0 = mat_apply(mat_add(pik, rep.apply_sp(sd, adsp)), er);
    Carrier m(n, dr);
    m.add_term(MultiIndex(n), v0, Rat(-1));
    for (int mcol = 0; mcol < n; ++mcol)
      m.add_entry(MultiIndex::unit(n, mcol), r, sd.r[static_cast<size_t>(k)][static_cast<size_t>(mcol)]);
    if (!m.is_zero_elem()) t.add(bar(HElement::gen(n, k)), HElement::unit(n), std::move(m));
  }
  // + (1 (x) 1) (x) (1 (x) rho(c) v)
  RatVec vc = mat_apply(rep.pi_c(), er);
  if (!vec_is_zero(vc)) {
    Carrier m(n, dr);
    m.add_term(MultiIndex(n), vc);
    t.add(HElement::unit(n), HElement::unit(n), std::move(m));
  }
  return t;
}

/// Assembles the K-type action of e on 1 (x) e_r (adapted basis).
inline RawTensor<FreeCarrierMod> k_action_term(const PseudoAlgebra& alg,
                                               const RepSpec& rep, int r) {
  const LieAlgebra& g = *alg.base;
  const KTypeData& kd = *alg.kdata;
  int n = g.dim();
  int n0 = n - 1;
  int dr = rep.dim_r;
  RawTensor<FreeCarrierMod> t;
  RatVec er = zero_vec(dr);
  er[static_cast<size_t>(r)] = 1;

  SymplecticData sd0{LieAlgebra::abelian(n0), mat_inverse(kd.r0), kd.r0,
                     zero_vec(n0), zero_vec(n0), kd.r0};

  // sum_{ij in d_0} (d_i d_j (x) 1) (x) (1 (x) rho(f^{ij}) v)
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n0; ++j) {
      RatVec v = mat_apply(rep.u_f(n0, i, j), er);
      if (vec_is_zero(v)) continue;
      HElement dij = pbw_mul(g, HElement::gen(n, i), HElement::gen(n, j));
      Carrier m(n, dr);
      m.add_term(MultiIndex(n), v);
      t.add(std::move(dij), HElement::unit(n), std::move(m));
    }
  // - sum_k (d_k (x) 1) (x) (1 (x) rho(d^k + ad^sp(d^k)) v - d^k (x) v)
  for (int k = 0; k < n0; ++k) {
    RatMat pik = zero_mat(dr, dr);
    RatVec raised_k = zero_vec(n);  // in full d coords, inside d_0
    for (int mcol = 0; mcol < n0; ++mcol) {
      if (!is_zero(kd.r0[static_cast<size_t>(k)][static_cast<size_t>(mcol)])) {
        pik = mat_add(pik, mat_scale(kd.r0[static_cast<size_t>(k)][static_cast<size_t>(mcol)], rep.pi[static_cast<size_t>(mcol)]));
        raised_k[static_cast<size_t>(mcol)] = kd.r0[static_cast<size_t>(k)][static_cast<size_t>(mcol)];
      }
    }
    // ad^sp(d^k) = pi^sp(ad d^k - d_N . iota_{d^k} beta), a gl(d_0) matrix
    RatMat a0 = zero_mat(n0, n0);
    for (int col = 0; col < n0; ++col) {
      RatVec x = zero_vec(n);
      x[static_cast<size_t>(col)] = 1;
      RatVec br = g.bracket(raised_k, x);
      for (int row = 0; row < n0; ++row) a0[static_cast<size_t>(row)][static_cast<size_t>(col)] = br[static_cast<size_t>(row)];
      // the beta term removes exactly the d_N component, no explicit action
    }
    GlMap adsp = pi_sp(sd0, a0);
    RatVec v0 = mat_apply(mat_add(pik, rep.apply_sp(sd0, adsp)), er);
    Carrier m(n, dr);
    m.add_term(MultiIndex(n), v0, Rat(-1));
    for (int mcol = 0; mcol < n0; ++mcol)
      m.add_entry(MultiIndex::unit(n, mcol), r, kd.r0[static_cast<size_t>(k)][static_cast<size_t>(mcol)]);
    if (!m.is_zero_elem()) t.add(HElement::gen(n, k), HElement::unit(n), std::move(m));
  }
  // + 1/2 (d_N (x) 1) (x) (1 (x) rho(c) v)
  RatVec vc = mat_apply(rep.u_c(), er);
  if (!vec_is_zero(vc)) {
    Carrier m(n, dr);
    m.add_term(MultiIndex(n), vc, rat(1, 2));
    t.add(HElement::gen(n, n - 1), HElement::unit(n), std::move(m));
  }
  // + (1 (x) 1) (x) (1 (x) rho(d_N + ad d_N) v - d_N (x) v)
  {
    RatMat adn = g.ad_matrix(n - 1);
    RatMat adn0 = zero_mat(n0, n0);
    bool supported = true;
    for (int col = 0; col < n0; ++col) {
      for (int row = 0; row < n0; ++row) adn0[static_cast<size_t>(row)][static_cast<size_t>(col)] = adn[static_cast<size_t>(row)][static_cast<size_t>(col)];
      if (!is_zero(adn[static_cast<size_t>(n - 1)][static_cast<size_t>(col)])) supported = false;
    }
    for (int row = 0; row < n; ++row)
      if (!is_zero(adn[static_cast<size_t>(row)][static_cast<size_t>(n - 1)])) supported = false;
    // rho(ad d_N): sp part via the projection, scalar part via c
    GlMap sp_part = pi_sp(sd0, adn0);
    Rat trace(0);
    for (int i = 0; i < n0; ++i) trace += adn0[static_cast<size_t>(i)][static_cast<size_t>(i)];
    Rat mu = trace / Rat(n0);
    RatMat remainder = mat_sub(adn0, sp_part);
    for (int i = 0; i < n0; ++i) remainder[static_cast<size_t>(i)][static_cast<size_t>(i)] -= mu;
    if (!supported || !mat_is_zero(remainder))
      throw std::domain_error(
          "K tensor module: ad d_N outside sp(d_0) + scalars is unsupported");
    RatMat rho_ad = mat_add(rep.apply_sp(sd0, sp_part), mat_scale(mu, rep.u_c()));
    RatVec v0 = mat_apply(mat_add(rep.pi[static_cast<size_t>(n - 1)], rho_ad), er);
    Carrier m(n, dr);
    m.add_term(MultiIndex(n), v0);
    m.add_entry(MultiIndex::unit(n, n - 1), r, Rat(-1));
    if (!m.is_zero_elem()) t.add(HElement::unit(n), HElement::unit(n), std::move(m));
  }
  return t;
}

}  // namespace detail

/// Tensor module of a primitive pseudoalgebra: carrier H (x) R with the
/// type-specific action display.
inline PseudoModule tensor_module(std::shared_ptr<const PseudoAlgebra> alg,
                                  RepSpec rep) {
  PseudoModule m;
  m.dim_r = rep.dim_r;
  const LieAlgebra& g = *alg->base;
  int n = g.dim();
  switch (alg->kind) {
    case PKind::W:
    case PKind::S: {
      if (static_cast<int>(rep.pi.size()) != n)
        throw std::invalid_argument("tensor_module: pi needs one matrix per basis vector");
      if (static_cast<int>(rep.u.size()) != n * n)
        throw std::invalid_argument("tensor_module: u needs the N^2 elementary matrices");
      m.action.assign(static_cast<size_t>(alg->amb), {});
      for (int p = 0; p < alg->amb; ++p) {
        m.action[static_cast<size_t>(p)].resize(static_cast<size_t>(rep.dim_r));
        for (int r = 0; r < rep.dim_r; ++r)
          m.action[static_cast<size_t>(p)][static_cast<size_t>(r)] = detail::w_action_term(g, rep, p, r);
      }
      break;
    }
    case PKind::HType: {
      if (static_cast<int>(rep.pi.size()) != n + 1)
        throw std::invalid_argument("tensor_module: H-type pi needs N+1 matrices (last is c)");
      if (static_cast<int>(rep.u.size()) != n * (n + 1) / 2)
        throw std::invalid_argument("tensor_module: H-type u needs the f^{ij}, i <= j");
      m.action.assign(1, {});
      m.action[0].resize(static_cast<size_t>(rep.dim_r));
      for (int r = 0; r < rep.dim_r; ++r)
        m.action[0][static_cast<size_t>(r)] = detail::h_action_term(*alg->symp, rep, r);
      break;
    }
    case PKind::KType: {
      if (!alg->kdata)
        throw std::invalid_argument("tensor_module: K algebra lacks an adapted basis");
      if (static_cast<int>(rep.pi.size()) != n)
        throw std::invalid_argument("tensor_module: K-type pi needs N matrices");
      if (static_cast<int>(rep.u.size()) != (n - 1) * n / 2 + 1)
        throw std::invalid_argument("tensor_module: K-type u needs the f^{ij} plus c");
      m.action.assign(1, {});
      m.action[0].resize(static_cast<size_t>(rep.dim_r));
      for (int r = 0; r < rep.dim_r; ++r)
        m.action[0][static_cast<size_t>(r)] = detail::k_action_term(*alg, rep, r);
      break;
    }
    default:
      throw std::invalid_argument("tensor_module: algebra must be primitive W/S/H/K");
  }
  m.alg = std::move(alg);
  m.rep = std::move(rep);
  return m;
}

/// Current module: same action table read over H' (with (x)_{H'}).
inline PseudoModule current_module(const PseudoModule& inner,
                                   std::shared_ptr<const SubalgebraPair> pair) {
  auto cur_alg = std::make_shared<PseudoAlgebra>(
      current_algebra(inner.alg, pair));
  int extra = pair->split();
  PseudoModule m;
  m.alg = cur_alg;
  m.dim_r = inner.dim_r;
  m.rep = inner.rep;
  m.action.assign(static_cast<size_t>(cur_alg->amb), {});
  for (int p = 0; p < cur_alg->amb; ++p) {
    m.action[static_cast<size_t>(p)].resize(static_cast<size_t>(inner.dim_r));
    for (int r = 0; r < inner.dim_r; ++r)
      for (const auto& t : inner.action[static_cast<size_t>(p)][static_cast<size_t>(r)].terms)
        m.action[static_cast<size_t>(p)][static_cast<size_t>(r)].add(embed_front(t.f, extra),
                                         embed_front(t.g, extra),
                                         t.m.embedded_front(extra));
  }
  return m;
}

/// The twisted H-type module: current H tensor action plus the extra
/// summand (t (x) 1) (x)_{H'} (1 (x) v). Admissibility of t is NOT checked
/// here; verify_action reports it.
inline PseudoModule twisted_module(std::shared_ptr<const PseudoAlgebra> cur_alg,
                                   const RepSpec& rep, const RatVec& t) {
  if (!cur_alg->is_current() || cur_alg->primitive_kind() != PKind::HType)
    throw std::invalid_argument("twisted_module needs a current H-type algebra");
  const SubalgebraPair& pair = *cur_alg->pair;
  if (static_cast<int>(t.size()) != pair.big().dim())
    throw std::invalid_argument("twist vector has wrong length");
  if (!vec_is_zero(t) && pair.in_small(t))
    throw std::domain_error("twist parameter must lie outside d (or be zero)");

  PseudoModule inner_mod = tensor_module(cur_alg->inner, rep);
  PseudoModule m = current_module(inner_mod, cur_alg->pair);
  m.alg = cur_alg;  // share the caller's algebra object
  m.twist_t = t;
  int nbig = pair.big().dim();
  HElement th(nbig);
  for (int i = 0; i < nbig; ++i)
    if (!is_zero(t[static_cast<size_t>(i)])) th.add_term(MultiIndex::unit(nbig, i), t[static_cast<size_t>(i)]);
  if (!th.is_zero_elem())
    for (int r = 0; r < m.dim_r; ++r)
      m.action[0][static_cast<size_t>(r)].add(th, HElement::unit(nbig),
                            Carrier::unit(nbig, m.dim_r, r));
  return m;
}

/// The representation axiom [a*b]*m = a*(b*m) - ((sigma (x) id) (x)_H id) b*(a*m)
/// checked on all generator pairs and R-basis vectors, in triple normal form.
inline ResidualReport verify_action(const PseudoModule& m,
                                    const std::vector<Carrier>& extra_samples = {}) {
  ResidualReport rep;
  auto mod = m.carrier_mod();
  auto act = [&](const Carrier& x, const Carrier& v) { return m.eval_action(x, v); };
  std::vector<Carrier> samples;
  for (int r = 0; r < m.dim_r; ++r) samples.push_back(m.unit_vector(r));
  samples.insert(samples.end(), extra_samples.begin(), extra_samples.end());
  const PseudoAlgebra& a = *m.alg;
  int ng = a.ngens();
  int ns = static_cast<int>(samples.size());
  std::vector<std::string> slots(static_cast<size_t>(ng * ng * ns));
  parallel_for(ng * ng * ns, [&](int task) {
    int i = task / (ng * ns), j = (task / ns) % ng, s = task % ns;
    auto lhs = compose_outer(mod, a.gen_bracket(i, j), samples[static_cast<size_t>(s)], act);
    lhs -= compose_inner(mod, a.gens[static_cast<size_t>(i)],
                         m.eval_action(a.gens[static_cast<size_t>(j)], samples[static_cast<size_t>(s)]), act);
    lhs += compose_inner(mod, a.gens[static_cast<size_t>(j)],
                         m.eval_action(a.gens[static_cast<size_t>(i)], samples[static_cast<size_t>(s)]), act)
               .sigma12();
    auto nf = triple_normalize(mod, lhs);
    if (!nf.empty()) {
      std::ostringstream os;
      os << "action residual at (" << a.gen_labels[static_cast<size_t>(i)] << ","
         << a.gen_labels[static_cast<size_t>(j)] << "; sample " << s << "), " << nf.size()
         << " nonzero coefficients";
      slots[static_cast<size_t>(task)] = os.str();
    }
  });
  for (auto& s : slots)
    if (!s.empty()) rep.entries.push_back(std::move(s));
  return rep;
}

/// Basis of {t in d' : [t,s] = 0, ad_chi t preserves d, ad_chi t in
/// sp(d, omega)}; all three conditions are linear in t.
struct AdmissibleSpace {
  std::vector<RatVec> basis;      // big-algebra coordinate vectors
  std::vector<bool> inside_small; // which basis vectors lie in d
};

inline AdmissibleSpace admissible_t_space(const SubalgebraPair& pair, const RatVec& chi,
                                          const SymplecticData& sd) {
  const LieAlgebra& big = pair.big();
  int nbig = big.dim();
  int n = pair.small_dim();
  RatVec s_big = pair.embed_vec(sd.s);

  Echelon ech(nbig);
  auto add_row = [&](const RatVec& row) {
    Echelon::SparseRow r;
    for (int c = 0; c < nbig; ++c)
      if (!is_zero(row[static_cast<size_t>(c)])) r[c] = row[static_cast<size_t>(c)];
    ech.add_row(std::move(r));
  };

  // condition rows as functions of the coordinates of t
  std::vector<RatMat> adchi_of_basis;  // ad_chi e_u for each big basis vector
  for (int u = 0; u < nbig; ++u) {
    RatVec eu = zero_vec(nbig);
    eu[static_cast<size_t>(u)] = 1;
    adchi_of_basis.push_back(ad_chi(pair, chi, eu));
  }
  // (a) [t, s] = 0: one row per big coordinate
  for (int out = 0; out < nbig; ++out) {
    RatVec row = zero_vec(nbig);
    for (int u = 0; u < nbig; ++u) {
      RatVec eu = zero_vec(nbig);
      eu[static_cast<size_t>(u)] = 1;
      row[static_cast<size_t>(u)] = big.bracket(eu, s_big)[static_cast<size_t>(out)];
    }
    add_row(row);
  }
  // (b) (ad_chi t)(d) subset d: extra components vanish
  for (int col = 0; col < n; ++col)
    for (int out = 0; out < pair.split(); ++out) {
      RatVec row = zero_vec(nbig);
      for (int u = 0; u < nbig; ++u) row[static_cast<size_t>(u)] = adchi_of_basis[static_cast<size_t>(u)][static_cast<size_t>(out)][static_cast<size_t>(col)];
      add_row(row);
    }
  // (c) restriction lies in sp: M^T omega + omega M = 0
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      RatVec row = zero_vec(nbig);
      for (int u = 0; u < nbig; ++u) {
        Rat v(0);
        for (int k = 0; k < n; ++k) {
          // (M^T omega)_{ij} = sum_k M_{ki} omega_{kj}; M rows are small coords
          v += adchi_of_basis[static_cast<size_t>(u)][static_cast<size_t>(k + pair.split())][static_cast<size_t>(i)] * sd.omega[static_cast<size_t>(k)][static_cast<size_t>(j)];
          v += sd.omega[static_cast<size_t>(i)][static_cast<size_t>(k)] * adchi_of_basis[static_cast<size_t>(u)][static_cast<size_t>(k + pair.split())][static_cast<size_t>(j)];
        }
        row[static_cast<size_t>(u)] = v;
      }
      add_row(row);
    }

  AdmissibleSpace out;
  out.basis = ech.nullspace_basis();
  for (const auto& b : out.basis) out.inside_small.push_back(pair.in_small(b));
  return out;
}

inline bool t_is_admissible(const SubalgebraPair& pair, const RatVec& chi,
                            const SymplecticData& sd, const RatVec& t) {
  const LieAlgebra& big = pair.big();
  if (!vec_is_zero(big.bracket(t, pair.embed_vec(sd.s)))) return false;
  RatMat m = ad_chi(pair, chi, t);
  int n = pair.small_dim();
  for (int col = 0; col < n; ++col)
    for (int row = 0; row < pair.split(); ++row)
      if (!is_zero(m[static_cast<size_t>(row)][static_cast<size_t>(col)])) return false;
  RatMat small = zero_mat(n, n);
  for (int col = 0; col < n; ++col)
    for (int row = 0; row < n; ++row) small[static_cast<size_t>(row)][static_cast<size_t>(col)] = m[static_cast<size_t>(row + pair.split())][static_cast<size_t>(col)];
  return sp_member(sd, small);
}

/// Instance check of the twist-isomorphism statement: the t'-twisted module
/// on R equals the t-twisted module on R with Pi_+ shifted by the traceform
/// iota_{t'-t} omega, as raw pseudoaction tensors on 1 (x) v.
inline ResidualReport iso_twist_check(std::shared_ptr<const PseudoAlgebra> cur_alg,
                                      const RepSpec& rep, const RatVec& t,
                                      const RatVec& t_prime) {
  const SubalgebraPair& pair = *cur_alg->pair;
  const SymplecticData& sd = *cur_alg->primitive().symp;
  RatVec delta = t_prime;
  for (size_t i = 0; i < delta.size(); ++i) delta[i] -= t[i];
  if (!pair.in_small(delta))
    throw std::invalid_argument("iso_twist_check: t' - t must lie in d");
  if (!t_is_admissible(pair, sd.chi, sd, t) || !t_is_admissible(pair, sd.chi, sd, t_prime))
    throw std::invalid_argument("iso_twist_check: both twists must be admissible");

  RatVec delta_small = zero_vec(pair.small_dim());
  for (int i = 0; i < pair.small_dim(); ++i) delta_small[static_cast<size_t>(i)] = delta[static_cast<size_t>(i + pair.split())];
  RatVec psi = sd.iota_omega(delta_small);
  RepSpec shifted = rep.twisted_by(psi);

  PseudoModule m1 = twisted_module(cur_alg, rep, t_prime);
  PseudoModule m2 = twisted_module(cur_alg, shifted, t);

  ResidualReport out;
  auto mod = m1.carrier_mod();
  for (int r = 0; r < rep.dim_r; ++r) {
    auto a1 = m1.gen_action(0, m1.unit_vector(r));
    auto a2 = m2.gen_action(0, m2.unit_vector(r));
    if (!tensor_equal(mod, a1, a2))
      out.entries.push_back("twist isomorphism fails on basis vector " + std::to_string(r));
  }
  return out;
}

/// Fourier mode (x_K (x) a) . v = sum <S(x_K), f g_(-1)> g_(2) v_i for
/// a*v = sum (f (x) g) (x) v_i. The element form takes any algebra element
/// in ambient coordinates.
inline Carrier fourier_action_elem(const PseudoModule& m, const MultiIndex& k,
                                   const Carrier& x, const Carrier& v) {
  const LieAlgebra& g = *m.alg->base;
  auto mod = m.carrier_mod();
  Carrier out = mod.zero();
  auto t = m.eval_action(x, v);
  for (const auto& term : t.terms) {
    for (const auto& [lg, cg] : term.g.terms)
      for (const auto& i : all_splittings(lg)) {
        HElement u = pbw_mul(g, term.f, antipode(g, HElement::monomial(i, cg)));
        HElement su = antipode(g, u);
        auto it = su.terms.find(k);
        if (it == su.terms.end()) continue;
        auto acted = mod.apply(HElement::monomial(lg - i, it->second), term.m);
        mod.add_scaled(out, Rat(1), acted);
      }
  }
  return out;
}

inline Carrier fourier_action(const PseudoModule& m, const MultiIndex& k, int gen,
                              const Carrier& v) {
  return fourier_action_elem(m, k, m.alg->gens[static_cast<size_t>(gen)], v);
}

/// sum_K (S(d^(K)) (x) 1) (x)_H fourier_action(K, a, v); equals a*v
/// (finite sum; |K| is bounded by the left legs' filtration degree).
inline RawTensor<FreeCarrierMod> reconstruct_from_fourier(const PseudoModule& m, int gen,
                                                          const Carrier& v) {
  const LieAlgebra& g = *m.alg->base;
  auto mod = m.carrier_mod();
  auto nf = left_normalize(mod, m.gen_action(gen, v));
  int maxd = 0;
  for (const auto& [j, vec] : nf) maxd = std::max(maxd, j.degree());
  RawTensor<FreeCarrierMod> out;
  for (const auto& k : all_multi_indices(g.dim(), maxd)) {
    Carrier f = fourier_action(m, k, gen, v);
    if (f.is_zero_elem()) continue;
    out.add(antipode(g, HElement::monomial(k)), HElement::unit(g.dim()), std::move(f));
  }
  return out;
}

namespace detail {

struct CarrierBasis {
  std::vector<MultiIndex> monos;
  int dim_r;
  int size() const { return static_cast<int>(monos.size()) * dim_r; }
  Carrier element(const PseudoModule& m, int idx) const {
    int mi = idx / dim_r, r = idx % dim_r;
    Carrier c(m.alg->base->dim(), dim_r);
    c.add_entry(monos[static_cast<size_t>(mi)], r, Rat(1));
    return c;
  }
};

/// Assembles the linear system "left-normal coefficients of a*v vanish on
/// `constrained` rows" over degree <= D carrier elements and returns the
/// nullspace as carrier elements.
inline std::vector<Carrier> support_solver(
    const PseudoModule& m, int max_degree,
    const std::function<bool(const MultiIndex&)>& constrained) {
  const LieAlgebra& g = *m.alg->base;
  auto mod = m.carrier_mod();
  CarrierBasis basis{all_multi_indices(g.dim(), max_degree), m.dim_r};
  int ncols = basis.size();

  std::map<std::tuple<int, MultiIndex, MultiIndex, int>, Echelon::SparseRow> rows;
  for (int col = 0; col < ncols; ++col) {
    Carrier v = basis.element(m, col);
    for (int gen = 0; gen < m.alg->ngens(); ++gen) {
      auto nf = left_normalize(mod, m.gen_action(gen, v));
      for (const auto& [j, coeff] : nf) {
        if (!constrained(j)) continue;
        for (const auto& [kk, vec] : coeff.terms)
          for (int r = 0; r < m.dim_r; ++r)
            if (!is_zero(vec[static_cast<size_t>(r)]))
              rows[{gen, j, kk, r}][col] += vec[static_cast<size_t>(r)];
      }
    }
  }
  Echelon ech(ncols);
  for (auto& [key, row] : rows) {
    for (auto it = row.begin(); it != row.end();)
      it = is_zero(it->second) ? row.erase(it) : std::next(it);
    if (!row.empty()) ech.add_row(std::move(row));
  }
  std::vector<Carrier> out;
  for (const auto& sol : ech.nullspace_basis()) {
    Carrier c(g.dim(), m.dim_r);
    for (int idx = 0; idx < ncols; ++idx)
      if (!is_zero(sol[static_cast<size_t>(idx)]))
        c.add_entry(basis.monos[static_cast<size_t>(idx / m.dim_r)], idx % m.dim_r, sol[static_cast<size_t>(idx)]);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace detail

/// Basis of {v of degree <= D : a*v = 0 for all generators a}.
inline std::vector<Carrier> ker_solver(const PseudoModule& m, int max_degree) {
  if (max_degree < 0) return {};
  return detail::support_solver(m, max_degree, [](const MultiIndex&) { return true; });
}

/// Basis of the filtration kernel {v of degree <= D : L_n . v = 0}, where
/// L_n = fil_{n+ell-1} X (x)_H S is spanned by the modes x_K (x) a with
/// |K| >= n + ell. Modes above the leg degree ell + D vanish identically,
/// so the system is finite.
inline std::vector<Carrier> ker_n_solver(const PseudoModule& m, int n, int max_degree) {
  if (max_degree < 0) return {};
  const LieAlgebra& g = *m.alg->base;
  int lo = n + m.alg->ell;
  int hi = m.alg->ell + max_degree;
  detail::CarrierBasis basis{all_multi_indices(g.dim(), max_degree), m.dim_r};
  int ncols = basis.size();
  std::map<std::tuple<int, MultiIndex, MultiIndex, int>, Echelon::SparseRow> rows;
  for (int col = 0; col < ncols; ++col) {
    Carrier v = basis.element(m, col);
    for (int gen = 0; gen < m.alg->ngens(); ++gen)
      for (const auto& k : all_multi_indices(g.dim(), hi)) {
        if (k.degree() < lo) continue;
        Carrier image = fourier_action(m, k, gen, v);
        for (const auto& [kk, vec] : image.terms)
          for (int r = 0; r < m.dim_r; ++r)
            if (!is_zero(vec[static_cast<size_t>(r)]))
              rows[{gen, k, kk, r}][col] += vec[static_cast<size_t>(r)];
      }
  }
  Echelon ech(ncols);
  for (auto& [key, row] : rows) {
    for (auto it = row.begin(); it != row.end();)
      it = is_zero(it->second) ? row.erase(it) : std::next(it);
    if (!row.empty()) ech.add_row(std::move(row));
  }
  std::vector<Carrier> out;
  for (const auto& sol : ech.nullspace_basis()) {
    Carrier c(g.dim(), m.dim_r);
    for (int idx = 0; idx < ncols; ++idx)
      if (!is_zero(sol[static_cast<size_t>(idx)]))
        c.add_entry(basis.monos[static_cast<size_t>(idx / m.dim_r)], idx % m.dim_r,
                    sol[static_cast<size_t>(idx)]);
    out.push_back(std::move(c));
  }
  return out;
}

/// Singular vectors of a module over a current algebra: the left-normalized
/// pseudoaction may only touch multi-indices K supported in the d block with
/// |K| <= ell, plus (H-type only) the first-order extra directions K = eps_i.
inline std::vector<Carrier> singular_vectors(const PseudoModule& m, int max_degree) {
  if (!m.alg->pair)
    throw std::invalid_argument("singular_vectors needs a current algebra (with pair)");
  if (max_degree < 0) return {};
  const SubalgebraPair& pair = *m.alg->pair;
  int split = pair.split();
  int nbig = pair.big().dim();
  int ell = m.alg->ell;
  bool htype = m.alg->primitive_kind() == PKind::HType;
  auto allowed = [split, nbig, ell, htype](const MultiIndex& j) {
    if (j.supported_in(split, nbig) && j.degree() <= ell) return true;
    if (htype && j.degree() == 1 && j.supported_in(0, split)) return true;
    return false;
  };
  return detail::support_solver(m, max_degree,
                                [allowed](const MultiIndex& j) { return !allowed(j); });
}

struct COfVReport {
  std::vector<Carrier> c_space;
  std::vector<Carrier> ker_space;
  bool equal = false;
};

/// C(V) = {v : e*v lands in (1 (x) 1) (x)_H V}; compared against ker V at
/// the same degree bound. C(V) always contains ker V, so equality is a
/// dimension check.
inline COfVReport c_of_v_check(const PseudoModule& m, int max_degree) {
  if (m.alg->primitive_kind() != PKind::HType)
    throw std::invalid_argument("c_of_v_check applies to H-type modules");
  COfVReport rep;
  rep.c_space = detail::support_solver(
      m, max_degree, [](const MultiIndex& j) { return !j.is_zero(); });
  rep.ker_space = ker_solver(m, max_degree);
  rep.equal = rep.c_space.size() == rep.ker_space.size();
  return rep;
}

}  // namespace pseudoalg
