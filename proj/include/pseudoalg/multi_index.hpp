#pragma once

#include <compare>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace pseudoalg {

/// Exponent vector K = (k_1,...,k_n) of a divided-power PBW monomial.
/// Ordered lexicographically (the order std::vector provides), which is the
/// order the maximal-monomial arguments in the solvers rely on.
struct MultiIndex {
  std::vector<int> e;

  MultiIndex() = default;
  explicit MultiIndex(int n) : e(static_cast<size_t>(n), 0) {}
  MultiIndex(std::initializer_list<int> init) : e(init) {}
  explicit MultiIndex(std::vector<int> v) : e(std::move(v)) {}

  static MultiIndex unit(int n, int i) {
    MultiIndex k(n);
    k.e.at(static_cast<size_t>(i)) = 1;
    return k;
  }

  int size() const { return static_cast<int>(e.size()); }
  int operator[](int i) const { return e[static_cast<size_t>(i)]; }
  int& operator[](int i) { return e[static_cast<size_t>(i)]; }

  int degree() const { return std::accumulate(e.begin(), e.end(), 0); }
  bool is_zero() const {
    for (int x : e)
      if (x != 0) return false;
    return true;
  }

  MultiIndex operator+(const MultiIndex& o) const {
    MultiIndex r = *this;
    for (int i = 0; i < size(); ++i) r[i] += o[i];
    return r;
  }
  /// Componentwise difference; caller guarantees o <= *this componentwise.
  MultiIndex operator-(const MultiIndex& o) const {
    MultiIndex r = *this;
    for (int i = 0; i < size(); ++i) {
      r[i] -= o[i];
      if (r[i] < 0) throw std::invalid_argument("negative multi-index entry");
    }
    return r;
  }
  bool leq(const MultiIndex& o) const {
    for (int i = 0; i < size(); ++i)
      if (e[static_cast<size_t>(i)] > o[i]) return false;
    return true;
  }

  /// True when all nonzero exponents sit in [lo, hi).
  bool supported_in(int lo, int hi) const {
    for (int i = 0; i < size(); ++i)
      if (e[static_cast<size_t>(i)] != 0 && (i < lo || i >= hi)) return false;
    return true;
  }

  auto operator<=>(const MultiIndex&) const = default;

  std::string str() const {
    std::string s = "[";
    for (int i = 0; i < size(); ++i) {
      if (i) s += ",";
      s += std::to_string(e[static_cast<size_t>(i)]);
    }
    return s + "]";
  }
};

/// Enumerates every K with size n and |K| <= max_degree, in increasing degree.
inline std::vector<MultiIndex> all_multi_indices(int n, int max_degree) {
  std::vector<MultiIndex> out;
  if (max_degree < 0) return out;
  std::function<void(MultiIndex&, int, int)> rec = [&](MultiIndex& cur, int pos,
                                                       int left) {
    if (pos == n) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[pos] = k;
      rec(cur, pos + 1, left - k);
      cur[pos] = 0;
    }
  };
  for (int d = 0; d <= max_degree; ++d) {
    MultiIndex cur(n);
    std::function<void(MultiIndex&, int, int)> exact = [&](MultiIndex& c, int pos,
                                                           int left) {
      if (pos == n - 1) {
        c[pos] = left;
        out.push_back(c);
        c[pos] = 0;
        return;
      }
      for (int k = 0; k <= left; ++k) {
        c[pos] = k;
        exact(c, pos + 1, left - k);
        c[pos] = 0;
      }
    };
    if (n == 0) {
      if (d == 0) out.push_back(MultiIndex(0));
    } else {
      exact(cur, 0, d);
    }
  }
  return out;
}

/// All splittings K = I + J, reported as I (J = K - I).
inline std::vector<MultiIndex> all_splittings(const MultiIndex& k) {
  std::vector<MultiIndex> out;
  MultiIndex cur(k.size());
  std::function<void(int)> rec = [&](int pos) {
    if (pos == k.size()) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= k[pos]; ++v) {
      cur[pos] = v;
      rec(pos + 1);
      cur[pos] = 0;
    }
  };
  rec(0);
  return out;
}

}  // namespace pseudoalg
