#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pseudoalg/carrier.hpp"
#include "pseudoalg/henv.hpp"

namespace pseudoalg {

/// Element of (H (x) H) (x)_H M in raw, presentation-dependent form.
template <class Mod>
struct RawTensor {
  struct Term {
    HElement f, g;
    typename Mod::Vec m;
  };
  std::vector<Term> terms;

  void add(HElement f, HElement g, typename Mod::Vec m) {
    if (f.is_zero_elem() || g.is_zero_elem()) return;
    terms.push_back({std::move(f), std::move(g), std::move(m)});
  }
  RawTensor& operator+=(const RawTensor& o) {
    for (const auto& t : o.terms) terms.push_back(t);
    return *this;
  }
  RawTensor operator+(const RawTensor& o) const {
    RawTensor r = *this;
    r += o;
    return r;
  }
  RawTensor scaled(const Rat& s) const {
    RawTensor r;
    for (const auto& t : terms) r.terms.push_back({t.f.scaled(s), t.g, t.m});
    return r;
  }
  /// (sigma (x)_H id): flip of the two H legs.
  RawTensor sigma() const {
    RawTensor r;
    for (const auto& t : terms) r.terms.push_back({t.g, t.f, t.m});
    return r;
  }
};

/// Element of (H (x) H (x) H) (x)_H M in raw form.
template <class Mod>
struct Raw3Tensor {
  struct Term {
    HElement a, b, c;
    typename Mod::Vec m;
  };
  std::vector<Term> terms;

  void add(HElement a, HElement b, HElement c, typename Mod::Vec m) {
    if (a.is_zero_elem() || b.is_zero_elem() || c.is_zero_elem()) return;
    terms.push_back({std::move(a), std::move(b), std::move(c), std::move(m)});
  }
  Raw3Tensor& operator+=(const Raw3Tensor& o) {
    for (const auto& t : o.terms) terms.push_back(t);
    return *this;
  }
  Raw3Tensor& operator-=(const Raw3Tensor& o) {
    for (const auto& t : o.terms) terms.push_back({t.a.scaled(Rat(-1)), t.b, t.c, t.m});
    return *this;
  }
  /// ((sigma (x) id) (x)_H id): swap the first two H legs.
  Raw3Tensor sigma12() const {
    Raw3Tensor r;
    for (const auto& t : terms) r.terms.push_back({t.b, t.a, t.c, t.m});
    return r;
  }
};

template <class Mod>
using LeftNormal = std::map<MultiIndex, typename Mod::Vec>;
template <class Mod>
using RightNormal = std::map<MultiIndex, typename Mod::Vec>;
template <class Mod>
using TripleNormal = std::map<std::pair<MultiIndex, MultiIndex>, typename Mod::Vec>;

namespace detail {
template <class Mod>
void normal_add(const Mod& mod, std::map<MultiIndex, typename Mod::Vec>& out,
                const MultiIndex& k, const Rat& c, const typename Mod::Vec& v) {
  if (is_zero(c)) return;
  auto it = out.find(k);
  if (it == out.end()) {
    auto nv = mod.zero();
    mod.add_scaled(nv, c, v);
    if (!mod.is_zero(nv)) out.emplace(k, std::move(nv));
    return;
  }
  mod.add_scaled(it->second, c, v);
  if (mod.is_zero(it->second)) out.erase(it);
}
}  // namespace detail

/// Unique representative sum (d^(K) (x) 1) (x)_H m_K:
/// (f (x) g) (x)_H m = sum (f S(g_(1)) (x) 1) (x)_H g_(2) m.
template <class Mod>
LeftNormal<Mod> left_normalize(const Mod& mod, const RawTensor<Mod>& x) {
  const LieAlgebra& g = *mod.g;
  LeftNormal<Mod> out;
  for (const auto& t : x.terms) {
    for (const auto& [lg, cg] : t.g.terms) {
      for (const auto& i : all_splittings(lg)) {
        HElement s1 = antipode(g, HElement::monomial(i));
        HElement left = pbw_mul(g, t.f, s1);
        if (left.is_zero_elem()) continue;
        auto acted = mod.apply(HElement::monomial(lg - i, cg), t.m);
        if (mod.is_zero(acted)) continue;
        for (const auto& [k, c] : left.terms) detail::normal_add(mod, out, k, c, acted);
      }
    }
  }
  return out;
}

/// Mirror form: (f (x) g) (x)_H m = sum (1 (x) g S(f_(2))) (x)_H f_(1) m.
template <class Mod>
RightNormal<Mod> right_normalize(const Mod& mod, const RawTensor<Mod>& x) {
  const LieAlgebra& g = *mod.g;
  RightNormal<Mod> out;
  for (const auto& t : x.terms) {
    for (const auto& [lf, cf] : t.f.terms) {
      for (const auto& i : all_splittings(lf)) {
        HElement s2 = antipode(g, HElement::monomial(lf - i));
        HElement right = pbw_mul(g, t.g, s2);
        if (right.is_zero_elem()) continue;
        auto acted = mod.apply(HElement::monomial(i, cf), t.m);
        if (mod.is_zero(acted)) continue;
        for (const auto& [k, c] : right.terms) detail::normal_add(mod, out, k, c, acted);
      }
    }
  }
  return out;
}

/// Unique (H (x) H (x) k) (x)_H M representative:
/// (a (x) b (x) c) (x)_H m = sum (a S(c_(1)) (x) b S(c_(2)) (x) 1) (x)_H c_(3) m.
template <class Mod>
TripleNormal<Mod> triple_normalize(const Mod& mod, const Raw3Tensor<Mod>& x) {
  const LieAlgebra& g = *mod.g;
  TripleNormal<Mod> out;
  for (const auto& t : x.terms) {
    for (const auto& [lc, cc] : t.c.terms) {
      for (const auto& i : all_splittings(lc)) {
        HElement sa = antipode(g, HElement::monomial(i));
        HElement left1 = pbw_mul(g, t.a, sa);
        if (left1.is_zero_elem()) continue;
        MultiIndex rest = lc - i;
        for (const auto& j : all_splittings(rest)) {
          HElement sb = antipode(g, HElement::monomial(j));
          HElement left2 = pbw_mul(g, t.b, sb);
          if (left2.is_zero_elem()) continue;
          auto acted = mod.apply(HElement::monomial(rest - j, cc), t.m);
          if (mod.is_zero(acted)) continue;
          for (const auto& [k1, c1] : left1.terms)
            for (const auto& [k2, c2] : left2.terms) {
              Rat c = c1 * c2;
              if (is_zero(c)) continue;
              auto key = std::make_pair(k1, k2);
              auto it = out.find(key);
              if (it == out.end()) {
                auto nv = mod.zero();
                mod.add_scaled(nv, c, acted);
                if (!mod.is_zero(nv)) out.emplace(key, std::move(nv));
              } else {
                mod.add_scaled(it->second, c, acted);
                if (mod.is_zero(it->second)) out.erase(it);
              }
            }
        }
      }
    }
  }
  return out;
}

template <class Mod>
RawTensor<Mod> embed_left_normal(const Mod&, const LeftNormal<Mod>& n, int nvars) {
  RawTensor<Mod> out;
  for (const auto& [k, v] : n)
    out.add(HElement::monomial(k), HElement::unit(nvars), v);
  return out;
}

template <class Mod>
RawTensor<Mod> embed_right_normal(const Mod&, const RightNormal<Mod>& n, int nvars) {
  RawTensor<Mod> out;
  for (const auto& [k, v] : n)
    out.add(HElement::unit(nvars), HElement::monomial(k), v);
  return out;
}

/// Equality in (H (x) H) (x)_H M by comparison of left normal forms.
template <class Mod>
bool tensor_equal(const Mod& mod, const RawTensor<Mod>& a, const RawTensor<Mod>& b) {
  auto na = left_normalize(mod, a);
  auto nb = left_normalize(mod, b);
  if (na.size() != nb.size()) return false;
  for (const auto& [k, v] : na) {
    auto it = nb.find(k);
    if (it == nb.end()) return false;
    auto diff = it->second;
    mod.add_scaled(diff, Rat(-1), v);
    if (!mod.is_zero(diff)) return false;
  }
  return true;
}

/// Membership of `target` in the H-span of `basis`, solved degree by degree
/// as an exact linear system (unknown H-coefficients of degree <= bound).
/// Returns the coefficients on success.
template <class Mod>
std::optional<std::vector<HElement>> h_span_solve(
    const Mod& mod, const typename Mod::Vec& target,
    const std::vector<typename Mod::Vec>& basis, int degree_bound) {
  const LieAlgebra& g = *mod.g;
  auto monos = all_multi_indices(g.dim(), degree_bound);
  int ncols = static_cast<int>(monos.size() * basis.size());
  // rows indexed by (carrier multi-index, coordinate); MatrixMod vectors use
  // the empty multi-index
  std::map<std::pair<MultiIndex, int>, Echelon::SparseRow> rows;
  auto scatter = [&](const typename Mod::Vec& v, int col, const Rat& scale) {
    if constexpr (std::is_same_v<typename Mod::Vec, Carrier>) {
      for (const auto& [k, vec] : v.terms)
        for (size_t r = 0; r < vec.size(); ++r)
          if (!is_zero(vec[r])) rows[{k, static_cast<int>(r)}][col] += scale * vec[r];
    } else {
      for (size_t r = 0; r < v.size(); ++r)
        if (!is_zero(v[r])) rows[{MultiIndex(0), static_cast<int>(r)}][col] += scale * v[r];
    }
  };
  for (size_t b = 0; b < basis.size(); ++b)
    for (size_t mi = 0; mi < monos.size(); ++mi) {
      auto img = mod.apply(HElement::monomial(monos[mi]), basis[b]);
      scatter(img, static_cast<int>(b * monos.size() + mi), Rat(1));
    }
  scatter(target, ncols, Rat(1));

  // clean stored zeros
  std::vector<Echelon::SparseRow> srows;
  for (auto& [key, row] : rows) {
    for (auto it = row.begin(); it != row.end();)
      it = is_zero(it->second) ? row.erase(it) : std::next(it);
    if (!row.empty()) srows.push_back(std::move(row));
  }
  if (srows.empty())  // zero target against zero images: u = 0 works
    return std::vector<HElement>(basis.size(), HElement(g.dim()));
  // solve sum_cols u_col * col = target
  RatMat amat(srows.size(), zero_vec(ncols));
  RatVec bvec = zero_vec(static_cast<int>(srows.size()));
  for (size_t i = 0; i < srows.size(); ++i)
    for (const auto& [c, v] : srows[i]) {
      if (c == ncols)
        bvec[i] = v;
      else
        amat[i][static_cast<size_t>(c)] = v;
    }
  auto sol = solve_linear(amat, bvec);
  if (!sol) return std::nullopt;
  std::vector<HElement> coeffs;
  for (size_t b = 0; b < basis.size(); ++b) {
    HElement h(g.dim());
    for (size_t mi = 0; mi < monos.size(); ++mi) {
      const Rat& c = (*sol)[b * monos.size() + mi];
      if (!is_zero(c)) h.add_term(monos[mi], c);
    }
    coeffs.push_back(std::move(h));
  }
  return coeffs;
}

template <class Mod>
int fil_degree_of(const Mod&, const typename Mod::Vec& v) {
  if constexpr (std::is_same_v<typename Mod::Vec, Carrier>)
    return std::max(0, v.fil_degree());
  else
    return 0;
}

/// Membership test for a partially straightened presentation: every term must
/// be (d^(K) (x) d^(L)) (x)_H v with K supported on the first `split` indices
/// and L on the rest; the tensor lies in (H (x) H) (x)_H span_H(U) exactly
/// when every coefficient v does.
template <class Mod>
bool rs_split_membership(const Mod& mod, const RawTensor<Mod>& x,
                         const std::vector<typename Mod::Vec>& u_basis, int split,
                         int degree_bound = -1) {
  const LieAlgebra& g = *mod.g;
  std::map<MultiIndex, typename Mod::Vec> coeffs;  // J = K + L -> v_J
  for (const auto& t : x.terms) {
    if (t.f.terms.size() != 1 || t.g.terms.size() != 1)
      throw std::invalid_argument("rs_split_membership: legs must be monomials");
    const auto& [kf, cf] = *t.f.terms.begin();
    const auto& [kg, cg] = *t.g.terms.begin();
    if (!kf.supported_in(0, split))
      throw std::invalid_argument("rs_split_membership: first leg not R-supported");
    if (!kg.supported_in(split, g.dim()))
      throw std::invalid_argument("rs_split_membership: second leg not S-supported");
    detail::normal_add(mod, coeffs, kf + kg, cf * cg, t.m);
  }
  for (const auto& [j, v] : coeffs) {
    int bound = degree_bound >= 0 ? degree_bound : (fil_degree_of(mod, v) + 2);
    if (!h_span_solve(mod, v, u_basis, bound)) return false;
  }
  return true;
}

/// a * ((f (x) g) (x)_H m) = sum (h (x) f l_(1) (x) g l_(2)) (x)_H e
/// where act(a, m) = sum (h (x) l) (x)_H e. Slots: (a, source-of-T, module).
template <class Mod, class ActFn>
Raw3Tensor<Mod> compose_inner(const Mod& mod, const Carrier& x,
                              const RawTensor<Mod>& t, ActFn&& act) {
  const LieAlgebra& g = *mod.g;
  Raw3Tensor<Mod> out;
  for (const auto& term : t.terms) {
    RawTensor<Mod> ax = act(x, term.m);
    for (const auto& s : ax.terms) {
      for (const auto& [ll, cl] : s.g.terms)
        for (const auto& i : all_splittings(ll)) {
          HElement b = pbw_mul(g, term.f, HElement::monomial(i, cl));
          HElement c = pbw_mul(g, term.g, HElement::monomial(ll - i));
          out.add(s.f, std::move(b), std::move(c), s.m);
        }
    }
  }
  return out;
}

/// ((f (x) g) (x)_H w) * m = sum (f h_(1) (x) g h_(2) (x) l) (x)_H e
/// where act(w, m) = sum (h (x) l) (x)_H e.
template <class Mod, class ActFn>
Raw3Tensor<Mod> compose_outer(const Mod& mod, const RawTensor<FreeCarrierMod>& t,
                              const typename Mod::Vec& m, ActFn&& act) {
  const LieAlgebra& g = *mod.g;
  Raw3Tensor<Mod> out;
  for (const auto& term : t.terms) {
    RawTensor<Mod> wm = act(term.m, m);
    for (const auto& s : wm.terms) {
      for (const auto& [lh, ch] : s.f.terms)
        for (const auto& i : all_splittings(lh)) {
          HElement a = pbw_mul(g, term.f, HElement::monomial(i, ch));
          HElement b = pbw_mul(g, term.g, HElement::monomial(lh - i));
          out.add(std::move(a), std::move(b), s.g, s.m);
        }
    }
  }
  return out;
}

}  // namespace pseudoalg
