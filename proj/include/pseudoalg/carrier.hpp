#pragma once

#include <map>
#include <sstream>
#include <vector>

#include "pseudoalg/henv.hpp"
#include "pseudoalg/linalg.hpp"

namespace pseudoalg {

/// Element of the free module H (x) k^m over U(d): a sparse map from PBW
/// multi-indices to coordinate vectors. Serves both as pseudoalgebra element
/// (coordinates over the generator/ambient basis) and as tensor-module
/// carrier (coordinates over R).
struct Carrier {
  int nvars = 0;
  int dim = 0;
  std::map<MultiIndex, RatVec> terms;

  Carrier() = default;
  Carrier(int n, int d) : nvars(n), dim(d) {}

  static Carrier unit(int n, int d, int r) {
    Carrier c(n, d);
    RatVec v = zero_vec(d);
    v[static_cast<size_t>(r)] = 1;
    c.terms[MultiIndex(n)] = std::move(v);
    return c;
  }

  bool is_zero_elem() const { return terms.empty(); }

  void add_term(const MultiIndex& k, const RatVec& v, const Rat& scale = Rat(1)) {
    if (is_zero(scale) || vec_is_zero(v)) return;
    auto it = terms.find(k);
    if (it == terms.end()) {
      RatVec nv = zero_vec(dim);
      vec_axpy(nv, scale, v);
      if (!vec_is_zero(nv)) terms[k] = std::move(nv);
      return;
    }
    vec_axpy(it->second, scale, v);
    if (vec_is_zero(it->second)) terms.erase(it);
  }

  void add_entry(const MultiIndex& k, int r, const Rat& c) {
    if (is_zero(c)) return;
    auto it = terms.find(k);
    if (it == terms.end()) {
      RatVec nv = zero_vec(dim);
      nv[static_cast<size_t>(r)] = c;
      terms[k] = std::move(nv);
      return;
    }
    it->second[static_cast<size_t>(r)] += c;
    if (vec_is_zero(it->second)) terms.erase(it);
  }

  Carrier& operator+=(const Carrier& o) {
    for (const auto& [k, v] : o.terms) add_term(k, v);
    return *this;
  }
  Carrier& operator-=(const Carrier& o) {
    for (const auto& [k, v] : o.terms) add_term(k, v, Rat(-1));
    return *this;
  }
  Carrier operator+(const Carrier& o) const {
    Carrier r = *this;
    r += o;
    return r;
  }
  Carrier operator-(const Carrier& o) const {
    Carrier r = *this;
    r -= o;
    return r;
  }
  Carrier scaled(const Rat& s) const {
    Carrier r(nvars, dim);
    if (is_zero(s)) return r;
    for (const auto& [k, v] : terms) {
      RatVec nv = v;
      for (auto& x : nv) x *= s;
      r.terms[k] = std::move(nv);
    }
    return r;
  }
  bool operator==(const Carrier& o) const { return terms == o.terms; }

  int fil_degree() const {
    int d = -1;
    for (const auto& [k, v] : terms) d = std::max(d, k.degree());
    return d;
  }

  /// The H-coefficient in coordinate slot r.
  HElement component(int r) const {
    HElement h(nvars);
    for (const auto& [k, v] : terms)
      if (!is_zero(v[static_cast<size_t>(r)])) h.terms[k] = v[static_cast<size_t>(r)];
    return h;
  }

  /// View an element over U(small) inside U(big); small basis sits last.
  Carrier embedded_front(int extra) const {
    Carrier out(nvars + extra, dim);
    for (const auto& [k, v] : terms) {
      MultiIndex nk(nvars + extra);
      for (int i = 0; i < nvars; ++i) nk[i + extra] = k[i];
      out.terms[nk] = v;
    }
    return out;
  }

  std::string str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : terms) {
      if (!first) os << " + ";
      first = false;
      os << "d" << k.str() << "(x)(";
      for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << rat_str(v[i]);
      }
      os << ")";
    }
    return os.str();
  }
};

/// Left H-module structure on H (x) k^m: h acts by PBW multiplication on the
/// H leg.
struct FreeCarrierMod {
  const LieAlgebra* g;
  int m;

  using Vec = Carrier;

  Vec zero() const { return Carrier(g->dim(), m); }
  bool is_zero(const Vec& v) const { return v.is_zero_elem(); }
  void add_scaled(Vec& dst, const Rat& a, const Vec& src) const {
    for (const auto& [k, vv] : src.terms) dst.add_term(k, vv, a);
  }
  Vec apply(const HElement& h, const Vec& v) const {
    Carrier out(g->dim(), m);
    for (const auto& [hk, hc] : h.terms)
      for (const auto& [vk, vv] : v.terms) {
        HElement prod = pbw_mul_mono(*g, hk, vk, hc);
        for (const auto& [pk, pc] : prod.terms) out.add_term(pk, vv, pc);
      }
    return out;
  }
};

/// Finite-dimensional left H-module given by commuting-with-relations
/// matrices for the action of the d-basis.
struct MatrixMod {
  const LieAlgebra* g;
  std::vector<RatMat> gen_mats;  // one per basis vector of d

  using Vec = RatVec;

  int dim() const { return gen_mats.empty() ? 0 : static_cast<int>(gen_mats[0].size()); }
  Vec zero() const { return zero_vec(dim()); }
  bool is_zero(const Vec& v) const { return vec_is_zero(v); }
  void add_scaled(Vec& dst, const Rat& a, const Vec& src) const { vec_axpy(dst, a, src); }

  /// d^(K) acts as A_1^{k_1} ... A_n^{k_n} / prod k!, rightmost factor first.
  Vec apply(const HElement& h, const Vec& v) const {
    RatVec out = zero();
    for (const auto& [k, c] : h.terms) {
      RatVec u = v;
      for (int i = k.size() - 1; i >= 0; --i)
        for (int rep = 0; rep < k[i]; ++rep) u = mat_apply(gen_mats[static_cast<size_t>(i)], u);
      Rat norm = c;
      for (int i = 0; i < k.size(); ++i)
        if (k[i] > 1) norm /= Rat(factorial(k[i]));
      vec_axpy(out, norm, u);
    }
    return out;
  }
};

}  // namespace pseudoalg
