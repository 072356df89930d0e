#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

using namespace pseudoalg;
using namespace pseudoalg::testutil;

namespace {

// sum S(h_(1)) h_(2) (or h_(1) S(h_(2))), which must equal eps(h) 1
HElement antipode_contraction(const LieAlgebra& g, const HElement& h, bool s_first) {
  HElement out(g.dim());
  for (const auto& [k, c] : h.terms)
    for (const auto& i : all_splittings(k)) {
      HElement a = HElement::monomial(i, c);
      HElement b = HElement::monomial(k - i);
      out += s_first ? pbw_mul(g, antipode(g, a), b) : pbw_mul(g, a, antipode(g, b));
    }
  return out;
}

// sum S(h_(1)) h_(2) (x) h_(3) (or h_(1) S(h_(2)) (x) h_(3)): must be 1 (x) h
H2Element cou2_contraction(const LieAlgebra& g, const HElement& h, bool s_first) {
  H2Element out(g.dim());
  for (const auto& [k, c] : h.terms)
    for (const auto& i : all_splittings(k)) {
      MultiIndex rest = k - i;
      for (const auto& j : all_splittings(rest)) {
        HElement a = HElement::monomial(i, c);
        HElement b = HElement::monomial(j);
        HElement prod = s_first ? pbw_mul(g, antipode(g, a), b)
                                : pbw_mul(g, a, antipode(g, b));
        for (const auto& [pk, pc] : prod.terms) out.add_term({pk, rest - j}, pc);
      }
    }
  return out;
}

H2Element one_tensor(const LieAlgebra& g, const HElement& h) {
  H2Element out(g.dim());
  for (const auto& [k, c] : h.terms) out.add_term({MultiIndex(g.dim()), k}, c);
  return out;
}

void hopf_suite(const LieAlgebra& g, unsigned seed, int samples) {
  Rng rng(seed);
  for (int t = 0; t < samples; ++t) {
    HElement h = rng.helement(g.dim(), 4);
    HElement f = rng.helement(g.dim(), 4);
    // antipode axiom
    CHECK(antipode_contraction(g, h, true) == HElement::scalar(g.dim(), counit(h)));
    CHECK(antipode_contraction(g, h, false) == HElement::scalar(g.dim(), counit(h)));
    // counit axiom: eps(h_(1)) h_(2) = h
    {
      HElement lhs(g.dim());
      for (const auto& [k, c] : h.terms)
        for (const auto& i : all_splittings(k))
          if (i.is_zero()) lhs += HElement::monomial(k - i, c);
      CHECK(lhs == h);
    }
    // cou2
    CHECK(cou2_contraction(g, h, true) == one_tensor(g, h));
    CHECK(cou2_contraction(g, h, false) == one_tensor(g, h));
    // Delta multiplicative
    CHECK(coproduct(pbw_mul(g, f, h)) == htensor_mul(g, coproduct(f), coproduct(h)));
    // cocommutativity
    CHECK(coproduct(h) == coproduct(h).permuted({1, 0}));
  }
}

}  // namespace

TEST_CASE("pbw_mul basics") {
  auto ab = LieAlgebra::abelian(2);
  SUBCASE("divided-power binomial in the abelian case") {
    auto p = pbw_mul(ab, HElement::monomial(MultiIndex{2, 0}),
                     HElement::monomial(MultiIndex{1, 0}));
    CHECK(p == HElement::monomial(MultiIndex{3, 0}, Rat(3)));
  }
  SUBCASE("unit") {
    Rng rng(3);
    HElement h = rng.helement(2, 4);
    CHECK(pbw_mul(ab, HElement::unit(2), h) == h);
    CHECK(pbw_mul(ab, h, HElement::unit(2)) == h);
  }
  SUBCASE("single straightening step in the Heisenberg algebra") {
    auto hb = LieAlgebra::heisenberg();
    auto p = pbw_mul(hb, HElement::monomial(MultiIndex{0, 1, 0}),
                     HElement::monomial(MultiIndex{1, 0, 0}));
    HElement expect = HElement::monomial(MultiIndex{1, 1, 0});
    expect += HElement::monomial(MultiIndex{0, 0, 1}, Rat(-1));
    CHECK(p == expect);
  }
  SUBCASE("dimension mismatch is a shape error") {
    CHECK_THROWS_AS(pbw_mul(ab, HElement::unit(3), HElement::unit(2)),
                    std::invalid_argument);
  }
}

TEST_CASE("pbw_mul associativity on random triples") {
  for (auto gp : {abelian_ptr(2), heisenberg_ptr(), sl2_ptr()}) {
    const auto& g = *gp;
    Rng rng(41);
    for (int t = 0; t < 12; ++t) {
      HElement a = rng.helement(g.dim(), 3, 3);
      HElement b = rng.helement(g.dim(), 3, 3);
      HElement c = rng.helement(g.dim(), 3, 3);
      CHECK(pbw_mul(g, pbw_mul(g, a, b), c) == pbw_mul(g, a, pbw_mul(g, b, c)));
      CHECK(pbw_mul(g, a, b).fil_degree() <= a.fil_degree() + b.fil_degree());
    }
  }
}

TEST_CASE("coproduct") {
  auto g = LieAlgebra::heisenberg();
  SUBCASE("primitive generators") {
    auto d = coproduct(HElement::gen(3, 0));
    H2Element expect(3);
    expect.add_term({MultiIndex::unit(3, 0), MultiIndex(3)}, 1);
    expect.add_term({MultiIndex(3), MultiIndex::unit(3, 0)}, 1);
    CHECK(d == expect);
  }
  SUBCASE("group-like unit") {
    auto d = coproduct(HElement::unit(3));
    H2Element expect(3);
    expect.add_term({MultiIndex(3), MultiIndex(3)}, 1);
    CHECK(d == expect);
  }
  SUBCASE("divided square over one generator") {
    auto d = coproduct(HElement::monomial(MultiIndex{2}));
    H2Element expect(1);
    expect.add_term({MultiIndex{2}, MultiIndex{0}}, 1);
    expect.add_term({MultiIndex{1}, MultiIndex{1}}, 1);
    expect.add_term({MultiIndex{0}, MultiIndex{2}}, 1);
    CHECK(d == expect);
  }
}

TEST_CASE("antipode") {
  SUBCASE("generators") {
    auto g = LieAlgebra::heisenberg();
    CHECK(antipode(g, HElement::gen(3, 1)) == HElement::gen(3, 1).scaled(Rat(-1)));
  }
  SUBCASE("abelian sign rule") {
    auto g = LieAlgebra::abelian(3);
    MultiIndex k{2, 1, 0};
    CHECK(antipode(g, HElement::monomial(k)) == HElement::monomial(k, Rat(-1)));
    MultiIndex k2{2, 2, 0};
    CHECK(antipode(g, HElement::monomial(k2)) == HElement::monomial(k2));
  }
  SUBCASE("Heisenberg word reversal") {
    auto g = LieAlgebra::heisenberg();
    auto s = antipode(g, HElement::monomial(MultiIndex{1, 1, 0}));
    HElement expect = HElement::monomial(MultiIndex{1, 1, 0});
    expect += HElement::monomial(MultiIndex{0, 0, 1}, Rat(-1));
    CHECK(s == expect);
  }
  SUBCASE("involution on random elements") {
    for (auto gp : {heisenberg_ptr(), sl2_ptr()}) {
      Rng rng(7);
      for (int t = 0; t < 10; ++t) {
        HElement h = rng.helement(gp->dim(), 4);
        CHECK(antipode(*gp, antipode(*gp, h)) == h);
      }
    }
  }
}

TEST_CASE("counit and filtration degree") {
  CHECK(counit(HElement::unit(2)) == Rat(1));
  CHECK(counit(HElement::gen(2, 0)) == Rat(0));
  HElement h = HElement::scalar(2, Rat(3));
  h += HElement::monomial(MultiIndex{1, 0}, Rat(2));
  CHECK(counit(h) == Rat(3));
  CHECK(HElement::unit(2).fil_degree() == 0);
  CHECK(HElement::gen(2, 1).fil_degree() == 1);
  CHECK(HElement::monomial(MultiIndex{2, 1, 0}).fil_degree() == 3);
  CHECK(HElement(2).fil_degree() == -1);
}

TEST_CASE("Hopf axiom suite over the three desk algebras") {
  hopf_suite(LieAlgebra::abelian(2), 101, 8);
  hopf_suite(LieAlgebra::heisenberg(), 102, 8);
  hopf_suite(LieAlgebra::sl2_fhe(), 103, 8);
}

TEST_CASE("coassociativity via the iterated coproduct") {
  auto g = LieAlgebra::sl2_fhe();
  Rng rng(55);
  for (int t = 0; t < 8; ++t) {
    HElement h = rng.helement(3, 4);
    // (Delta (x) id) Delta == (id (x) Delta) Delta, both equal the 3-way split
    H3Element lhs(3), rhs(3);
    for (const auto& [kk, c] : coproduct(h).terms) {
      for (const auto& i : all_splittings(kk[0]))
        lhs.add_term({i, kk[0] - i, kk[1]}, c);
      for (const auto& i : all_splittings(kk[1]))
        rhs.add_term({kk[0], i, kk[1] - i}, c);
    }
    CHECK(lhs == rhs);
    CHECK(lhs == coproduct2(h));
  }
}

TEST_CASE("overline automorphism") {
  auto g = LieAlgebra::borel2();
  RatVec chi = {Rat(2), Rat(0)};
  SUBCASE("generator shift") {
    auto b = overline(HElement::gen(2, 0), chi);
    HElement expect = HElement::gen(2, 0);
    expect += HElement::scalar(2, Rat(-2));
    CHECK(b == expect);
  }
  SUBCASE("multiplicative on random elements") {
    Rng rng(77);
    for (int t = 0; t < 10; ++t) {
      HElement a = rng.helement(2, 3);
      HElement b = rng.helement(2, 3);
      CHECK(overline(pbw_mul(g, a, b), chi) ==
            pbw_mul(g, overline(a, chi), overline(b, chi)));
    }
  }
}

TEST_CASE("textual element format round trip") {
  HElement h = helement_parse("3/2*d[2,0,1] + d[0,0,0]", 3);
  CHECK(h.terms.size() == 2);
  CHECK(h.terms.at(MultiIndex{2, 0, 1}) == rat(3, 2));
  CHECK(h.terms.at(MultiIndex{0, 0, 0}) == Rat(1));
  CHECK(helement_parse(h.str(), 3) == h);
  HElement neg = helement_parse("-d[1,0,0] + 2*d[0,1,0]", 3);
  CHECK(neg.terms.at(MultiIndex{1, 0, 0}) == Rat(-1));
  // the zero element prints as "0" and parses back
  CHECK(helement_parse(HElement(3).str(), 3) == HElement(3));
}
