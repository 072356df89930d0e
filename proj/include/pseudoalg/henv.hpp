#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pseudoalg/lie_algebra.hpp"
#include "pseudoalg/multi_index.hpp"
#include "pseudoalg/rational.hpp"

namespace pseudoalg {

/// Element of H = U(d) written in the divided-power PBW basis
/// d^(K) = d_1^{k_1} ... d_n^{k_n} / k_1! ... k_n!.
/// Sparse and canonical: no zero coefficients are stored.
struct HElement {
  int nvars = 0;
  std::map<MultiIndex, Rat> terms;

  HElement() = default;
  explicit HElement(int n) : nvars(n) {}

  static HElement unit(int n) {
    HElement h(n);
    h.terms[MultiIndex(n)] = 1;
    return h;
  }
  static HElement gen(int n, int i) { return monomial(MultiIndex::unit(n, i), 1); }
  static HElement monomial(MultiIndex k, Rat coeff = Rat(1)) {
    HElement h(k.size());
    if (!is_zero(coeff)) h.terms[std::move(k)] = std::move(coeff);
    return h;
  }
  static HElement scalar(int n, Rat c) {
    HElement h(n);
    if (!is_zero(c)) h.terms[MultiIndex(n)] = std::move(c);
    return h;
  }

  bool is_zero_elem() const { return terms.empty(); }

  void add_term(const MultiIndex& k, const Rat& c) {
    if (is_zero(c)) return;
    auto [it, inserted] = terms.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (is_zero(it->second)) terms.erase(it);
    }
  }

  HElement& operator+=(const HElement& o) {
    for (const auto& [k, c] : o.terms) add_term(k, c);
    return *this;
  }
  HElement& operator-=(const HElement& o) {
    for (const auto& [k, c] : o.terms) add_term(k, -c);
    return *this;
  }
  HElement operator+(const HElement& o) const {
    HElement r = *this;
    r += o;
    return r;
  }
  HElement operator-(const HElement& o) const {
    HElement r = *this;
    r -= o;
    return r;
  }
  HElement operator-() const {
    HElement r = *this;
    for (auto& [k, c] : r.terms) c = -c;
    return r;
  }
  HElement scaled(const Rat& s) const {
    HElement r(nvars);
    if (is_zero(s)) return r;
    for (const auto& [k, c] : terms) r.terms[k] = c * s;
    return r;
  }

  bool operator==(const HElement& o) const { return nvars == o.nvars && terms == o.terms; }

  /// Max |K| over the support; -1 on the zero element (fil^{-1} H = 0).
  int fil_degree() const {
    int d = -1;
    for (const auto& [k, c] : terms) d = std::max(d, k.degree());
    return d;
  }

  std::string str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms) {
      if (!first) os << " + ";
      first = false;
      if (!(c == Rat(1))) os << rat_str(c) << "*";
      os << "d" << k.str();
    }
    return os.str();
  }
};

namespace detail {

using Word = std::vector<int>;

inline Word word_of(const MultiIndex& k) {
  Word w;
  for (int i = 0; i < k.size(); ++i)
    for (int rep = 0; rep < k[i]; ++rep) w.push_back(i);
  return w;
}

inline MultiIndex exponents_of(const Word& w, int n) {
  MultiIndex k(n);
  for (int i : w) ++k[i];
  return k;
}

/// Rewrites the (factorial-normalized) word d_{w1} d_{w2} ... into sorted
/// words using d_j d_i = d_i d_j - sum_k c_{ij}^k d_k for i < j. Terminates
/// by the (length, inversion count) well-order: each swap removes an
/// inversion and each commutator shortens the word.
inline void straighten_word(const LieAlgebra& g, const Word& w, const Rat& coeff,
                            std::map<Word, Rat>& out) {
  size_t p = 0;
  while (p + 1 < w.size() && w[p] <= w[p + 1]) ++p;
  if (p + 1 >= w.size()) {
    auto [it, inserted] = out.try_emplace(w, coeff);
    if (!inserted) {
      it->second += coeff;
      if (is_zero(it->second)) out.erase(it);
    }
    return;
  }
  int j = w[p], i = w[p + 1];  // j > i: descent
  Word swapped = w;
  std::swap(swapped[p], swapped[p + 1]);
  straighten_word(g, swapped, coeff, out);
  // commutator remainder [d_j, d_i]
  for (int k = 0; k < g.dim(); ++k) {
    const Rat& c = g.c(j, i, k);
    if (is_zero(c)) continue;
    Word shorter;
    shorter.reserve(w.size() - 1);
    shorter.insert(shorter.end(), w.begin(), w.begin() + static_cast<long>(p));
    shorter.push_back(k);
    shorter.insert(shorter.end(), w.begin() + static_cast<long>(p) + 2, w.end());
    straighten_word(g, shorter, coeff * c, out);
  }
}

}  // namespace detail

/// Product of two divided-power monomials.
inline HElement pbw_mul_mono(const LieAlgebra& g, const MultiIndex& k,
                             const MultiIndex& l, const Rat& coeff) {
  int n = g.dim();
  HElement out(n);
  if (is_zero(coeff)) return out;
  // ordered supports multiply by a plain binomial factor
  int maxk = -1, minl = n;
  for (int i = n - 1; i >= 0; --i)
    if (k[i] > 0) {
      maxk = i;
      break;
    }
  for (int i = 0; i < n; ++i)
    if (l[i] > 0) {
      minl = i;
      break;
    }
  if (g.is_abelian() || maxk <= minl) {
    Rat c = coeff;
    if (g.is_abelian()) {
      for (int i = 0; i < n; ++i)
        if (k[i] && l[i]) c *= Rat(binomial(k[i] + l[i], k[i]));
    } else if (maxk >= 0 && maxk == minl) {
      c *= Rat(binomial(k[maxk] + l[maxk], k[maxk]));
    }
    out.add_term(k + l, c);
    return out;
  }
  detail::Word w = detail::word_of(k);
  detail::Word wl = detail::word_of(l);
  w.insert(w.end(), wl.begin(), wl.end());
  std::map<detail::Word, Rat> sorted;
  detail::straighten_word(g, w, Rat(1), sorted);
  Rat norm = coeff;
  for (int i = 0; i < n; ++i) norm /= Rat(factorial(k[i]) * factorial(l[i]));
  for (const auto& [word, c] : sorted) {
    MultiIndex m = detail::exponents_of(word, n);
    Rat fac(1);
    for (int i = 0; i < n; ++i)
      if (m[i] > 1) fac *= Rat(factorial(m[i]));
    out.add_term(m, norm * c * fac);
  }
  return out;
}

/// Exact PBW product in U(d); associative, unital.
inline HElement pbw_mul(const LieAlgebra& g, const HElement& a, const HElement& b) {
  if (a.nvars != g.dim() || b.nvars != g.dim())
    throw std::invalid_argument("pbw_mul: element dimension mismatch");
  HElement out(g.dim());
  for (const auto& [k, ca] : a.terms)
    for (const auto& [l, cb] : b.terms) out += pbw_mul_mono(g, k, l, ca * cb);
  return out;
}

/// Sparse element of H^{\otimes A} with componentwise PBW multiplication.
template <int A>
struct HTensor {
  int nvars = 0;
  std::map<std::array<MultiIndex, A>, Rat> terms;

  explicit HTensor(int n = 0) : nvars(n) {}

  void add_term(const std::array<MultiIndex, A>& key, const Rat& c) {
    if (is_zero(c)) return;
    auto [it, inserted] = terms.try_emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (is_zero(it->second)) terms.erase(it);
    }
  }
  HTensor& operator+=(const HTensor& o) {
    for (const auto& [k, c] : o.terms) add_term(k, c);
    return *this;
  }
  HTensor& operator-=(const HTensor& o) {
    for (const auto& [k, c] : o.terms) add_term(k, -c);
    return *this;
  }
  HTensor operator+(const HTensor& o) const {
    HTensor r = *this;
    r += o;
    return r;
  }
  HTensor operator-(const HTensor& o) const {
    HTensor r = *this;
    r -= o;
    return r;
  }
  bool is_zero_elem() const { return terms.empty(); }
  bool operator==(const HTensor& o) const { return terms == o.terms; }

  HTensor permuted(const std::array<int, A>& dest_of_slot) const {
    HTensor r(nvars);
    for (const auto& [k, c] : terms) {
      std::array<MultiIndex, A> nk;
      for (int s = 0; s < A; ++s) nk[static_cast<size_t>(dest_of_slot[static_cast<size_t>(s)])] = k[static_cast<size_t>(s)];
      r.add_term(nk, c);
    }
    return r;
  }

  std::string str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms) {
      if (!first) os << " + ";
      first = false;
      os << rat_str(c) << "*";
      for (int s = 0; s < A; ++s) {
        if (s) os << "(x)";
        os << "d" << k[static_cast<size_t>(s)].str();
      }
    }
    return os.str();
  }
};

using H2Element = HTensor<2>;
using H3Element = HTensor<3>;

template <int A>
inline HTensor<A> htensor_mul(const LieAlgebra& g, const HTensor<A>& a,
                              const HTensor<A>& b) {
  HTensor<A> out(g.dim());
  for (const auto& [ka, ca] : a.terms)
    for (const auto& [kb, cb] : b.terms) {
      // componentwise product of the slots
      std::vector<std::pair<std::array<MultiIndex, A>, Rat>> partial;
      partial.push_back({{}, ca * cb});
      for (auto& [key0, c0] : partial)
        for (int s = 0; s < A; ++s) key0[static_cast<size_t>(s)] = MultiIndex(g.dim());
      for (int s = 0; s < A; ++s) {
        std::vector<std::pair<std::array<MultiIndex, A>, Rat>> next;
        HElement prod = pbw_mul_mono(g, ka[static_cast<size_t>(s)], kb[static_cast<size_t>(s)], Rat(1));
        for (const auto& [key, c] : partial)
          for (const auto& [m, cm] : prod.terms) {
            auto nk = key;
            nk[static_cast<size_t>(s)] = m;
            next.push_back({nk, c * cm});
          }
        partial = std::move(next);
      }
      for (const auto& [key, c] : partial) out.add_term(key, c);
    }
  return out;
}

template <int A>
inline HTensor<A> htensor_commutator(const LieAlgebra& g, const HTensor<A>& a,
                                     const HTensor<A>& b) {
  return htensor_mul(g, a, b) - htensor_mul(g, b, a);
}

/// Delta(d^(K)) = sum_{I+J=K} d^(I) (x) d^(J), extended linearly.
inline H2Element coproduct(const HElement& h) {
  H2Element out(h.nvars);
  for (const auto& [k, c] : h.terms)
    for (const auto& i : all_splittings(k)) out.add_term({i, k - i}, c);
  return out;
}

/// (Delta (x) id) Delta, written on divided powers as the 3-way splitting.
inline H3Element coproduct2(const HElement& h) {
  H3Element out(h.nvars);
  for (const auto& [k, c] : h.terms)
    for (const auto& i : all_splittings(k)) {
      MultiIndex rest = k - i;
      for (const auto& j : all_splittings(rest)) out.add_term({i, j, rest - j}, c);
    }
  return out;
}

inline Rat counit(const HElement& h) {
  auto it = h.terms.find(MultiIndex(h.nvars));
  return it == h.terms.end() ? Rat(0) : it->second;
}

/// Antipode: anti-automorphism with S(d) = -d. Computed by reversing each
/// PBW word and re-straightening.
inline HElement antipode(const LieAlgebra& g, const HElement& h) {
  HElement out(g.dim());
  for (const auto& [k, c] : h.terms) {
    int deg = k.degree();
    Rat sign = (deg % 2 == 0) ? Rat(1) : Rat(-1);
    if (g.is_abelian()) {
      out.add_term(k, c * sign);
      continue;
    }
    detail::Word w = detail::word_of(k);
    std::reverse(w.begin(), w.end());
    std::map<detail::Word, Rat> sorted;
    detail::straighten_word(g, w, Rat(1), sorted);
    Rat norm = c * sign;
    for (int i = 0; i < g.dim(); ++i) norm /= Rat(factorial(k[i]));
    for (const auto& [word, cw] : sorted) {
      MultiIndex m = detail::exponents_of(word, g.dim());
      Rat fac(1);
      for (int i = 0; i < g.dim(); ++i)
        if (m[i] > 1) fac *= Rat(factorial(m[i]));
      out.add_term(m, norm * cw * fac);
    }
  }
  return out;
}

inline int fil_degree(const HElement& h) { return h.fil_degree(); }

/// The automorphism d -> d - chi(d) of H, extended from generators.
/// On divided powers: overline(d^(K)) = sum_{J<=K} prod (-chi_i)^{k_i-j_i}/(k_i-j_i)! d^(J).
inline HElement overline(const HElement& h, const RatVec& chi) {
  HElement out(h.nvars);
  for (const auto& [k, c] : h.terms)
    for (const auto& j : all_splittings(k)) {
      Rat coeff = c;
      bool dead = false;
      for (int i = 0; i < k.size() && !dead; ++i) {
        int m = k[i] - j[i];
        if (m == 0) continue;
        if (is_zero(chi[static_cast<size_t>(i)])) {
          dead = true;
          break;
        }
        Rat p(1);
        for (int rep = 0; rep < m; ++rep) p *= -chi[static_cast<size_t>(i)];
        coeff *= p / Rat(factorial(m));
      }
      if (!dead) out.add_term(j, coeff);
    }
  return out;
}

/// Regards an element of U(small) as an element of U(big), with the small
/// basis occupying the last indices.
inline HElement embed_front(const HElement& h, int extra) {
  HElement out(h.nvars + extra);
  for (const auto& [k, c] : h.terms) {
    MultiIndex nk(h.nvars + extra);
    for (int i = 0; i < h.nvars; ++i) nk[i + extra] = k[i];
    out.terms[nk] = c;
  }
  return out;
}

/// Parses the debug/CLI element format, e.g. "3/2*d[2,0,1] + d[0,0,0]".
inline HElement helement_parse(const std::string& text, int nvars) {
  HElement out(nvars);
  std::string s;
  for (char ch : text)
    if (!isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s == "0") return out;
  size_t pos = 0;
  bool neg = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) neg = s[pos++] == '-';
  while (pos < s.size()) {
    std::string coeff_str;
    while (pos < s.size() && s[pos] != 'd') coeff_str += s[pos++];
    if (!coeff_str.empty() && coeff_str.back() == '*') coeff_str.pop_back();
    Rat c = coeff_str.empty() ? Rat(1) : rat_parse(coeff_str);
    if (neg) c = -c;
    if (pos >= s.size() || s[pos] != 'd') throw std::invalid_argument("expected d[...]");
    ++pos;
    if (pos >= s.size() || s[pos] != '[') throw std::invalid_argument("expected [");
    ++pos;
    MultiIndex k(nvars);
    int slot = 0;
    std::string num;
    while (pos < s.size() && s[pos] != ']') {
      if (s[pos] == ',') {
        k[slot++] = std::stoi(num);
        num.clear();
      } else {
        num += s[pos];
      }
      ++pos;
    }
    if (pos >= s.size()) throw std::invalid_argument("unterminated [");
    if (!num.empty()) k[slot++] = std::stoi(num);
    if (slot != nvars) throw std::invalid_argument("exponent list length mismatch");
    ++pos;  // skip ]
    out.add_term(k, c);
    if (pos < s.size()) {
      if (s[pos] == '+') neg = false;
      else if (s[pos] == '-') neg = true;
      else throw std::invalid_argument("expected + or -");
      ++pos;
    }
  }
  return out;
}

}  // namespace pseudoalg
