#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace pseudoalg {

/// Exact rational scalar. All arithmetic in the library is over Rat;
/// there is no floating point anywhere.
using Rat = mpq_class;
using Int = mpz_class;

using RatVec = std::vector<Rat>;
using RatMat = std::vector<std::vector<Rat>>;

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_zero(const Rat& q) { return sgn(q) == 0; }

/// Parses "p", "-p" or "p/q". Used by every JSON surface.
inline Rat rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      Int num(s);
      return Rat(num);
    }
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (sgn(den) == 0) throw std::invalid_argument("zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("bad rational literal '" + s + "'");
  }
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline Int factorial(int n) {
  Int f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

inline Int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Int b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return b;
}

inline RatVec zero_vec(int n) { return RatVec(static_cast<size_t>(n), Rat(0)); }

inline bool vec_is_zero(const RatVec& v) {
  for (const auto& x : v)
    if (!is_zero(x)) return false;
  return true;
}

inline void vec_axpy(RatVec& dst, const Rat& a, const RatVec& src) {
  if (dst.size() != src.size()) throw std::invalid_argument("vector size mismatch");
  for (size_t i = 0; i < dst.size(); ++i) dst[i] += a * src[i];
}

}  // namespace pseudoalg
