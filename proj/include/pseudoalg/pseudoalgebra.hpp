#pragma once

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pseudoalg/htensor.hpp"
#include "pseudoalg/parallel.hpp"
#include "pseudoalg/symplectic.hpp"

namespace pseudoalg {

enum class PKind { Lie, W, S, HType, KType, Current };

inline std::string kind_name(PKind k) {
  switch (k) {
    case PKind::Lie: return "lie";
    case PKind::W: return "W";
    case PKind::S: return "S";
    case PKind::HType: return "H";
    case PKind::KType: return "K";
    case PKind::Current: return "current";
  }
  return "?";
}

struct ResidualReport {
  std::vector<std::string> entries;
  bool ok() const { return entries.empty(); }
  std::string str() const {
    std::string s;
    for (const auto& e : entries) s += e + "\n";
    return s;
  }
};

/// Rank-one validity data: [r, Delta(s)] = 0 in H(x)H and
/// ([r_12, r_13] + r_12 s_3) + cyclic = 0 in H(x)H(x)H.
struct Rank1Report {
  H2Element residual1;
  H3Element residual2;
  bool ok() const { return residual1.is_zero_elem() && residual2.is_zero_elem(); }
};

/// Extra data carried by K-type algebras with an adapted basis: the first
/// N-1 basis vectors span d_0 = ker theta and d_N spans the contact
/// direction. beta records the d_N-component of brackets inside d_0.
struct KTypeData {
  RatMat r0;    // r restricted to d_0; raising uses its rows
  RatMat beta;  // beta(a,b) = x^N([a,b]) for a,b in d_0
};

/// A finite Lie pseudoalgebra presented by an ambient free H-module (its
/// coordinates index the bracket table) plus a generator set expressed in
/// ambient coordinates. For W, H, K the generators are the ambient basis;
/// for S they are the s_ab inside the ambient W(d).
class PseudoAlgebra {
 public:
  PKind kind = PKind::W;
  std::shared_ptr<const LieAlgebra> base;  // d (or d' for currents)
  int amb = 0;
  std::vector<std::string> gen_labels;
  std::vector<Carrier> gens;
  std::vector<std::vector<RawTensor<FreeCarrierMod>>> table;  // amb x amb
  int ell = 1;

  std::optional<SymplecticData> symp;     // H-type (over the primitive d)
  std::optional<KTypeData> kdata;         // K-type
  std::optional<RatMat> rank1_r;          // H/K: the defining r matrix
  std::optional<RatVec> rank1_s;

  std::shared_ptr<const SubalgebraPair> pair;   // currents only
  std::shared_ptr<const PseudoAlgebra> inner;   // currents only

  FreeCarrierMod carrier_mod() const { return FreeCarrierMod{base.get(), amb}; }
  int ngens() const { return static_cast<int>(gens.size()); }
  bool is_current() const { return kind == PKind::Current; }
  /// Primitive kind (looks through the current construction).
  PKind primitive_kind() const { return inner ? inner->primitive_kind() : kind; }
  const PseudoAlgebra& primitive() const { return inner ? inner->primitive() : *this; }

  /// Bilinear extension of the table: multiply tensor legs on the left by
  /// the H-coefficients of x and y.
  RawTensor<FreeCarrierMod> eval_bracket(const Carrier& x, const Carrier& y) const {
    RawTensor<FreeCarrierMod> out;
    const LieAlgebra& g = *base;
    for (const auto& [kx, vx] : x.terms)
      for (const auto& [ky, vy] : y.terms)
        for (int p = 0; p < amb; ++p) {
          if (is_zero(vx[static_cast<size_t>(p)])) continue;
          for (int q = 0; q < amb; ++q) {
            if (is_zero(vy[static_cast<size_t>(q)])) continue;
            Rat c = vx[static_cast<size_t>(p)] * vy[static_cast<size_t>(q)];
            for (const auto& t : table[static_cast<size_t>(p)][static_cast<size_t>(q)].terms) {
              HElement f = pbw_mul(g, HElement::monomial(kx, c), t.f);
              HElement gg = pbw_mul(g, HElement::monomial(ky), t.g);
              out.add(std::move(f), std::move(gg), t.m);
            }
          }
        }
    return out;
  }

  RawTensor<FreeCarrierMod> gen_bracket(int i, int j) const {
    return eval_bracket(gens[static_cast<size_t>(i)], gens[static_cast<size_t>(j)]);
  }

  /// Solves x = sum_b u^b . gens[b]; nullopt when x is outside the span.
  std::optional<std::vector<HElement>> express_in_generators(const Carrier& x,
                                                             int degree_bound = -1) const {
    auto mod = carrier_mod();
    int bound = degree_bound >= 0 ? degree_bound : std::max(0, x.fil_degree()) + 2;
    return h_span_solve(mod, x, gens, bound);
  }
};

/// [a*b] + (sigma (x)_H id)[b*a] over all generator pairs.
inline ResidualReport verify_skew(const PseudoAlgebra& a) {
  ResidualReport rep;
  auto mod = a.carrier_mod();
  for (int i = 0; i < a.ngens(); ++i)
    for (int j = i; j < a.ngens(); ++j) {
      auto sum = a.gen_bracket(i, j) + a.gen_bracket(j, i).sigma();
      auto nf = left_normalize(mod, sum);
      if (!nf.empty()) {
        std::ostringstream os;
        os << "skew residual at (" << a.gen_labels[static_cast<size_t>(i)] << ","
           << a.gen_labels[static_cast<size_t>(j)] << ")";
        rep.entries.push_back(os.str());
      }
    }
  return rep;
}

/// [a*[b*c]] - [[a*b]*c] - ((sigma (x) id) (x)_H id)[b*[a*c]] over all
/// generator triples, checked in triple normal form. Triples run as
/// independent parallel tasks (everything shared is immutable).
inline ResidualReport verify_jacobi(const PseudoAlgebra& a) {
  ResidualReport rep;
  auto mod = a.carrier_mod();
  auto act = [&](const Carrier& x, const Carrier& m) { return a.eval_bracket(x, m); };
  int n = a.ngens();
  std::vector<std::string> slots(static_cast<size_t>(n * n * n));
  parallel_for(n * n * n, [&](int task) {
    int i = task / (n * n), j = (task / n) % n, k = task % n;
    auto lhs = compose_inner(mod, a.gens[static_cast<size_t>(i)], a.gen_bracket(j, k), act);
    lhs -= compose_outer(mod, a.gen_bracket(i, j), a.gens[static_cast<size_t>(k)], act);
    lhs -= compose_inner(mod, a.gens[static_cast<size_t>(j)], a.gen_bracket(i, k), act).sigma12();
    auto nf = triple_normalize(mod, lhs);
    if (!nf.empty()) {
      std::ostringstream os;
      os << "jacobi residual at (" << a.gen_labels[static_cast<size_t>(i)] << ","
         << a.gen_labels[static_cast<size_t>(j)] << "," << a.gen_labels[static_cast<size_t>(k)]
         << ")";
      slots[static_cast<size_t>(task)] = os.str();
    }
  });
  for (auto& s : slots)
    if (!s.empty()) rep.entries.push_back(std::move(s));
  return rep;
}

/// W(d) = H (x) d with the vector-field pseudobracket.
inline PseudoAlgebra build_w(std::shared_ptr<const LieAlgebra> d) {
  if (d->dim() < 1) throw std::invalid_argument("W(d) needs dim >= 1");
  PseudoAlgebra a;
  a.kind = PKind::W;
  a.base = std::move(d);
  int n = a.base->dim();
  a.amb = n;
  a.ell = 1;
  for (int i = 0; i < n; ++i) {
    a.gen_labels.push_back("1(x)" + a.base->labels()[static_cast<size_t>(i)]);
    a.gens.push_back(Carrier::unit(n, n, i));
  }
  a.table.assign(static_cast<size_t>(n), std::vector<RawTensor<FreeCarrierMod>>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      RawTensor<FreeCarrierMod>& t = a.table[static_cast<size_t>(i)][static_cast<size_t>(j)];
      Carrier lie(n, n);
      lie.terms[MultiIndex(n)] = a.base->bracket_basis(i, j);
      if (vec_is_zero(lie.terms[MultiIndex(n)])) lie.terms.clear();
      if (!lie.is_zero_elem())
        t.add(HElement::unit(n), HElement::unit(n), std::move(lie));
      t.add(HElement::gen(n, j), HElement::unit(n), Carrier::unit(n, n, i));
      t.add(HElement::unit(n), HElement::gen(n, i), Carrier::unit(n, n, j).scaled(Rat(-1)));
    }
  return a;
}

/// S(d, chi) inside W(d): generators s_ab = (a + chi(a)) (x) b
/// - (b + chi(b)) (x) a - 1 (x) [a,b], for basis pairs a < b.
inline PseudoAlgebra build_s(std::shared_ptr<const LieAlgebra> d, const RatVec& chi,
                             bool check_closure = true) {
  if (d->dim() < 2) throw std::invalid_argument("S(d,chi) needs dim >= 2");
  if (!check_traceform(*d, chi)) throw std::invalid_argument("chi is not a traceform");
  PseudoAlgebra a = build_w(d);
  a.kind = PKind::S;
  a.ell = 2;
  int n = a.base->dim();
  a.gens.clear();
  a.gen_labels.clear();
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      Carrier s(n, n);
      s.add_entry(MultiIndex::unit(n, p), q, Rat(1));
      s.add_entry(MultiIndex(n), q, chi[static_cast<size_t>(p)]);
      s.add_entry(MultiIndex::unit(n, q), p, Rat(-1));
      s.add_entry(MultiIndex(n), p, -chi[static_cast<size_t>(q)]);
      RatVec br = a.base->bracket_basis(p, q);
      for (int k = 0; k < n; ++k) s.add_entry(MultiIndex(n), k, -br[static_cast<size_t>(k)]);
      a.gens.push_back(std::move(s));
      a.gen_labels.push_back("s_" + std::to_string(p + 1) + std::to_string(q + 1));
    }
  if (check_closure) {
    auto mod = a.carrier_mod();
    for (int i = 0; i < a.ngens(); ++i)
      for (int j = 0; j < a.ngens(); ++j) {
        auto nf = left_normalize(mod, a.gen_bracket(i, j));
        for (const auto& [k, v] : nf)
          if (!a.express_in_generators(v))
            throw std::logic_error("S(d,chi) bracket escaped the s_ab span at [" +
                                   a.gen_labels[static_cast<size_t>(i)] + "*" +
                                   a.gen_labels[static_cast<size_t>(j)] + "]");
      }
  }
  return a;
}

inline H2Element rank1_r_tensor(int n, const RatMat& r) {
  H2Element t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!is_zero(r[static_cast<size_t>(i)][static_cast<size_t>(j)]))
        t.add_term({MultiIndex::unit(n, i), MultiIndex::unit(n, j)}, r[static_cast<size_t>(i)][static_cast<size_t>(j)]);
  return t;
}

/// The two rank-one validity identities, evaluated exactly.
inline Rank1Report check_rank1_identities(const LieAlgebra& g, const RatMat& r,
                                          const RatVec& s) {
  int n = g.dim();
  Rank1Report rep;
  // identity 1: [r, Delta(s)] = 0 in H (x) H
  H2Element rt = rank1_r_tensor(n, r);
  H2Element ds(n);
  for (int i = 0; i < n; ++i) {
    if (is_zero(s[static_cast<size_t>(i)])) continue;
    ds.add_term({MultiIndex::unit(n, i), MultiIndex(n)}, s[static_cast<size_t>(i)]);
    ds.add_term({MultiIndex(n), MultiIndex::unit(n, i)}, s[static_cast<size_t>(i)]);
  }
  rep.residual1 = htensor_commutator(g, rt, ds);
  // identity 2: ([r_12, r_13] + r_12 s_3) + cyclic in H (x) H (x) H
  H3Element r12(n), r13(n), s3(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Rat& c = r[static_cast<size_t>(i)][static_cast<size_t>(j)];
      if (is_zero(c)) continue;
      r12.add_term({MultiIndex::unit(n, i), MultiIndex::unit(n, j), MultiIndex(n)}, c);
      r13.add_term({MultiIndex::unit(n, i), MultiIndex(n), MultiIndex::unit(n, j)}, c);
    }
  for (int i = 0; i < n; ++i)
    if (!is_zero(s[static_cast<size_t>(i)]))
      s3.add_term({MultiIndex(n), MultiIndex(n), MultiIndex::unit(n, i)}, s[static_cast<size_t>(i)]);
  H3Element e = htensor_commutator(g, r12, r13) + htensor_mul(g, r12, s3);
  rep.residual2 = e + e.permuted({1, 2, 0}) + e.permuted({2, 0, 1});
  return rep;
}

/// Rank-one pseudoalgebra He with [e*e] = (r + s (x) 1 - 1 (x) s) (x)_H e.
/// Classified H when dim is even and r nondegenerate, K when dim is odd and
/// k s + supp(r) spans d.
inline PseudoAlgebra build_rank1(std::shared_ptr<const LieAlgebra> d, const RatMat& r,
                                 const RatVec& s) {
  int n = d->dim();
  if (static_cast<int>(r.size()) != n || static_cast<int>(s.size()) != n)
    throw std::invalid_argument("rank-1 data has wrong shape");
  for (const auto& row : r)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("rank-1 data has wrong shape");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(r[static_cast<size_t>(i)][static_cast<size_t>(j)] == -r[static_cast<size_t>(j)][static_cast<size_t>(i)]))
        throw std::invalid_argument("r must be skew");
  auto idrep = check_rank1_identities(*d, r, s);
  if (!idrep.ok()) {
    std::string what = "rank-1 identities fail:";
    if (!idrep.residual1.is_zero_elem()) what += " [r,Delta(s)] = " + idrep.residual1.str();
    if (!idrep.residual2.is_zero_elem()) what += " cyclic residual = " + idrep.residual2.str();
    throw std::domain_error(what);
  }

  PseudoAlgebra a;
  a.base = std::move(d);
  a.amb = 1;
  a.ell = 2;
  a.gen_labels = {"e"};
  a.gens = {Carrier::unit(n, 1, 0)};
  a.rank1_r = r;
  a.rank1_s = s;
  a.table.assign(1, std::vector<RawTensor<FreeCarrierMod>>(1));
  RawTensor<FreeCarrierMod>& t = a.table[0][0];
  Carrier e = Carrier::unit(n, 1, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!is_zero(r[static_cast<size_t>(i)][static_cast<size_t>(j)]))
        t.add(HElement::gen(n, i).scaled(r[static_cast<size_t>(i)][static_cast<size_t>(j)]), HElement::gen(n, j), e);
  HElement sh(n);
  for (int i = 0; i < n; ++i)
    if (!is_zero(s[static_cast<size_t>(i)])) sh.add_term(MultiIndex::unit(n, i), s[static_cast<size_t>(i)]);
  if (!sh.is_zero_elem()) {
    t.add(sh, HElement::unit(n), e);
    t.add(HElement::unit(n), sh.scaled(Rat(-1)), e);
  }

  // classification
  bool even = n % 2 == 0;
  bool r_invertible = false;
  if (even) {
    try {
      mat_inverse(r);
      r_invertible = true;
    } catch (const std::domain_error&) {
    }
  }
  if (even && r_invertible) {
    a.kind = PKind::HType;
    RatMat omega = mat_inverse(r);
    RatVec chi = zero_vec(n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) chi[static_cast<size_t>(j)] += s[static_cast<size_t>(i)] * omega[static_cast<size_t>(i)][static_cast<size_t>(j)];
    auto sb = build_symplectic(*a.base, omega, chi);
    if (!sb.ok())
      throw std::logic_error("rank-1 identities passed but the omega cocycle failed");
    a.symp = std::move(*sb.data);
    return a;
  }
  // K classification: d spanned by s together with the support of r
  RatMat span = r;  // rows of r span supp(r) up to transpose symmetry
  span.push_back(s);
  if (n % 2 == 1 && mat_rank(span) == n) {
    a.kind = PKind::KType;
    // adapted basis expected downstream: r supported on the first n-1
    // coordinates, s along the last
    bool adapted = true;
    for (int i = 0; i < n; ++i)
      if (!is_zero(r[static_cast<size_t>(i)][static_cast<size_t>(n - 1)]) ||
          !is_zero(r[static_cast<size_t>(n - 1)][static_cast<size_t>(i)]))
        adapted = false;
    for (int i = 0; i + 1 < n; ++i)
      if (!is_zero(s[static_cast<size_t>(i)])) adapted = false;
    if (adapted) {
      KTypeData kd;
      kd.r0.assign(static_cast<size_t>(n - 1), zero_vec(n - 1));
      kd.beta.assign(static_cast<size_t>(n - 1), zero_vec(n - 1));
      for (int i = 0; i + 1 < n; ++i)
        for (int j = 0; j + 1 < n; ++j) {
          kd.r0[static_cast<size_t>(i)][static_cast<size_t>(j)] = r[static_cast<size_t>(i)][static_cast<size_t>(j)];
          kd.beta[static_cast<size_t>(i)][static_cast<size_t>(j)] = a.base->c(i, j, n - 1);
        }
      a.kdata = std::move(kd);
    }
    return a;
  }
  throw std::domain_error(
      "rank-1 bracket is valid but matches neither the H nor the K shape");
}

/// Scalar extension along U(d) -> U(d'): same table with the H-coefficients
/// read inside H' and (x)_H replaced by (x)_{H'}.
inline PseudoAlgebra current_algebra(std::shared_ptr<const PseudoAlgebra> a,
                                     std::shared_ptr<const SubalgebraPair> pair) {
  {
    LieAlgebra small = pair->small();
    if (small.dim() != a->base->dim())
      throw std::invalid_argument("current_algebra: base dimension mismatch");
    for (int i = 0; i < small.dim(); ++i)
      for (int j = 0; j < small.dim(); ++j)
        for (int k = 0; k < small.dim(); ++k)
          if (!(small.c(i, j, k) == a->base->c(i, j, k)))
            throw std::invalid_argument("current_algebra: pair.small differs from the base");
  }
  int extra = pair->split();
  PseudoAlgebra cur;
  cur.kind = PKind::Current;
  cur.base = std::make_shared<LieAlgebra>(pair->big());
  cur.amb = a->amb;
  cur.ell = a->ell;
  cur.gen_labels = a->gen_labels;
  for (const auto& g : a->gens) cur.gens.push_back(g.embedded_front(extra));
  cur.table.assign(static_cast<size_t>(a->amb), std::vector<RawTensor<FreeCarrierMod>>(static_cast<size_t>(a->amb)));
  for (int p = 0; p < a->amb; ++p)
    for (int q = 0; q < a->amb; ++q)
      for (const auto& t : a->table[static_cast<size_t>(p)][static_cast<size_t>(q)].terms)
        cur.table[static_cast<size_t>(p)][static_cast<size_t>(q)].add(embed_front(t.f, extra), embed_front(t.g, extra),
                                       t.m.embedded_front(extra));
  cur.symp = a->symp;
  cur.kdata = a->kdata;
  cur.rank1_r = a->rank1_r;
  cur.rank1_s = a->rank1_s;
  cur.pair = pair;
  cur.inner = std::move(a);
  return cur;
}

}  // namespace pseudoalg
