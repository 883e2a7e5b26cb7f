// Copyright 2026 The cssim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "cssim/error.hpp"
#include "cssim/pauli.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cssim;

namespace {

const char* kLetters[] = {"I", "X", "Y", "Z"};

std::vector<std::string> all_strings(std::size_t n) {
  std::vector<std::string> out{""};
  for (std::size_t q = 0; q < n; ++q) {
    std::vector<std::string> next;
    for (const auto& s : out) {
      for (const char* l : kLetters) next.push_back(s + l);
    }
    out = next;
  }
  return out;
}

double max_abs(const oracle::Matrix& m) { return m.cwiseAbs().maxCoeff(); }

PauliSum random_sum(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PauliSum s(n);
  for (std::size_t i = 0; i < m; ++i) s.add(encode_pauli(oracle::random_letters(n, rng), u(rng)));
  return s.simplify();
}

}  // namespace

TEST(PauliEncoding, RoundTripsLetters) {
  for (const auto& s : all_strings(3)) {
    const PauliTerm t = encode_pauli(s);
    const auto d = decode_pauli(t);
    EXPECT_EQ(d.text, s);
    EXPECT_EQ(d.phase, Complex(1.0));
  }
}

TEST(PauliEncoding, YIsXAndZBits) {
  const PauliTerm t = encode_pauli("Y");
  EXPECT_TRUE(t.x(0));
  EXPECT_TRUE(t.z(0));
  EXPECT_EQ(t.op(0), Pauli::Y);
}

TEST(PauliEncoding, RejectsUnknownLetterWithPosition) {
  try {
    encode_pauli("XQZ");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("position 1"), std::string::npos);
  }
}

TEST(PauliEncoding, WideRegistersSpanSeveralWords) {
  std::string s(130, 'I');
  s[0] = 'X';
  s[64] = 'Y';
  s[129] = 'Z';
  const PauliTerm t = encode_pauli(s);
  EXPECT_EQ(t.x_words().size(), 3u);
  EXPECT_EQ(t.str(), s);
  EXPECT_EQ(t.weight(), 3u);
  EXPECT_EQ(t.support(), (std::vector<std::size_t>{0, 64, 129}));
}

TEST(PauliAlgebra, SingleQubitProducts) {
  const PauliTerm xy = multiply(encode_pauli("X"), encode_pauli("Y"));
  EXPECT_EQ(xy.str(), "Z");
  EXPECT_EQ(xy.scalar(), Complex(0, 1));
  const PauliTerm yx = multiply(encode_pauli("Y"), encode_pauli("X"));
  EXPECT_EQ(yx.scalar(), Complex(0, -1));
  const PauliTerm zz = multiply(encode_pauli("Z"), encode_pauli("Z"));
  EXPECT_TRUE(zz.is_identity());
  EXPECT_EQ(zz.scalar(), Complex(1.0));
}

TEST(PauliAlgebra, ProductMatchesDenseExhaustivelyOnTwoQubits) {
  const auto strings = all_strings(2);
  for (const auto& a : strings) {
    for (const auto& b : strings) {
      const PauliTerm p = multiply(encode_pauli(a), encode_pauli(b));
      const oracle::Matrix expected = oracle::pauli(a) * oracle::pauli(b);
      EXPECT_LT(max_abs(to_matrix(p) - expected), 1e-14) << a << " * " << b;
    }
  }
}

TEST(PauliAlgebra, SymplecticCommutationMatchesDenseCommutatorExhaustively) {
  const auto strings = all_strings(2);
  for (const auto& a : strings) {
    for (const auto& b : strings) {
      const oracle::Matrix ma = oracle::pauli(a);
      const oracle::Matrix mb = oracle::pauli(b);
      const bool dense_commute = max_abs(ma * mb - mb * ma) < 1e-12;
      EXPECT_EQ(commutes(encode_pauli(a), encode_pauli(b)), dense_commute) << a << ", " << b;
    }
  }
}

TEST(PauliAlgebra, QubitwiseCommutation) {
  EXPECT_TRUE(qubitwise_commutes(encode_pauli("XIZ"), encode_pauli("XZI")));
  EXPECT_FALSE(qubitwise_commutes(encode_pauli("XX"), encode_pauli("YY")));
  EXPECT_TRUE(commutes(encode_pauli("XX"), encode_pauli("YY")));
}

TEST(PauliAlgebra, CommutationMatrixIsSymmetric) {
  std::mt19937_64 rng(7);
  const PauliSum s = random_sum(4, 12, rng);
  const BinaryMatrix c = commutation_matrix(s, s);
  const BinaryMatrix adj = compatibility_adjacency(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(c(i, i), 0);
    for (std::size_t j = 0; j < s.size(); ++j) {
      EXPECT_EQ(c(i, j), c(j, i));
      EXPECT_EQ(adj(i, j), 1 - c(i, j));
      EXPECT_EQ(c(i, j), symplectic_product(s.term(i), s.term(j)));
    }
  }
}

TEST(PauliSumTest, SimplifyMergesAndDrops) {
  PauliSum s(2);
  s.add(encode_pauli("XZ", 0.5));
  s.add(encode_pauli("ZZ", 1.0));
  s.add(encode_pauli("XZ", 0.25));
  s.add(encode_pauli("ZZ", -1.0));
  const PauliSum r = s.simplify();
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r.term(0).str(), "XZ");
  EXPECT_EQ(r.coefficient(0), Complex(0.75));
}

TEST(PauliSumTest, SimplifyOrdersByXThenZ) {
  const PauliSum s = PauliSum::from_strings({{"ZI", 1.0}, {"XI", 1.0}, {"IX", 1.0}, {"II", 1.0}}).simplify();
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s.term(0).str(), "II");
  EXPECT_EQ(s.term(1).str(), "ZI");
  EXPECT_EQ(s.term(2).str(), "IX");
  EXPECT_EQ(s.term(3).str(), "XI");
}

TEST(PauliSumTest, ProductMatchesDense) {
  std::mt19937_64 rng(11);
  const PauliSum a = random_sum(3, 6, rng);
  const PauliSum b = random_sum(3, 6, rng);
  EXPECT_LT(max_abs(to_matrix(a * b) - to_matrix(a) * to_matrix(b)), 1e-12);
  EXPECT_LT(max_abs(to_matrix(a + b) - to_matrix(a) - to_matrix(b)), 1e-12);
  EXPECT_LT(max_abs(to_matrix(a - b) - to_matrix(a) + to_matrix(b)), 1e-12);
}

TEST(PauliSumTest, HermiticityFollowsRealCoefficients) {
  EXPECT_TRUE(PauliSum::from_strings({{"XY", 2.0}}).is_hermitian());
  EXPECT_FALSE(PauliSum::from_strings({{"XY", Complex(0, 1)}}).is_hermitian());
  // i XY times a commuting string stays anti-Hermitian; times an
  // anticommuting one it becomes Hermitian.
  const PauliSum ixy = PauliSum::from_strings({{"XY", Complex(0, 1)}});
  EXPECT_FALSE((ixy * PauliSum::from_strings({{"ZZ", 1.0}})).is_hermitian());
  EXPECT_TRUE((ixy * PauliSum::from_strings({{"ZI", 1.0}})).is_hermitian());
}

TEST(PauliSumTest, DenseExportMatchesKroneckerOracle) {
  const PauliSum h = fixture::h_cs();
  std::vector<std::pair<std::string, oracle::Complex>> terms;
  for (std::size_t m = 0; m < h.size(); ++m) terms.emplace_back(h.term(m).str(), h.coefficient(m));
  EXPECT_LT(max_abs(to_matrix(h) - oracle::sum(terms)), 1e-12);
}

TEST(PauliSumTest, DenseExportRefusesLargeRegisters) {
  EXPECT_THROW(to_matrix(uniform_string(15, Pauli::Z)), CapacityError);
}

TEST(PauliSumTest, ApplyAndExpectationMatchDense) {
  std::mt19937_64 rng(3);
  const PauliSum h = random_sum(4, 10, rng);
  const oracle::Vector psi = oracle::random_state(4, rng);
  const oracle::Vector expected = to_matrix(h) * psi;
  EXPECT_LT((cssim::apply(h, psi) - expected).norm(), 1e-12);
  EXPECT_NEAR(std::abs(expectation(h, psi) - psi.dot(expected)), 0.0, 1e-12);
}

TEST(PauliSumTest, BasisActionSignConvention) {
  // Z on qubit 0 flips the sign of basis states whose leftmost bit is 1.
  const PauliTerm z0 = encode_pauli("ZI");
  const StateVector out = cssim::apply(z0, oracle::basis("10"));
  EXPECT_NEAR(out[2].real(), -1.0, 1e-15);
  const PauliTerm x1 = encode_pauli("IX");
  const StateVector flipped = cssim::apply(x1, oracle::basis("10"));
  EXPECT_NEAR(flipped[3].real(), 1.0, 1e-15);
}

TEST(PauliText, RoundTripIsBitExact) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  PauliSum s(6);
  for (int i = 0; i < 40; ++i) s.add(encode_pauli(oracle::random_letters(6, rng), Complex(u(rng), u(rng))));
  s = s.simplify();
  const PauliSum back = from_text(to_text(s));
  ASSERT_EQ(back.size(), s.size());
  for (std::size_t m = 0; m < s.size(); ++m) {
    EXPECT_EQ(back.coefficient(m), s.coefficient(m));
    EXPECT_TRUE(back.term(m).same_string(s.term(m)));
  }
  EXPECT_EQ(to_text(back), to_text(s));
}

TEST(PauliText, ZeroOperatorKeepsItsRegister) {
  const PauliSum zero(12);
  const PauliSum back = from_text(to_text(zero));
  EXPECT_EQ(back.n_qubits(), 12u);
  EXPECT_TRUE(back.empty());
}

TEST(PauliText, ReportsLineNumbers) {
  try {
    from_text("1 0 XX\n# comment\n2 0 XQ\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(from_text("1 0 XX\n1 0 XXX\n"), ParseError);
  EXPECT_THROW(from_text("one 0 XX\n"), ParseError);
  EXPECT_THROW(from_text(""), ParseError);
}

TEST(CliffordConjugation, QuarterTurnMatchesDenseUnitary) {
  const auto strings = all_strings(2);
  for (const auto& g : strings) {
    if (g == "II") continue;
    for (int sign : {+1, -1}) {
      const auto rot = CliffordRotation::quarter_turn(encode_pauli(g), sign);
      const oracle::Matrix mg = oracle::pauli(g);
      const oracle::Matrix u = oracle::expm(Complex(0, rot.angle) * mg);
      for (const auto& q : strings) {
        const PauliTerm image = clifford_conjugate(encode_pauli(q), rot);
        const oracle::Matrix expected = u * oracle::pauli(q) * u.adjoint();
        EXPECT_LT(max_abs(to_matrix(image) - expected), 1e-12) << g << " on " << q;
      }
    }
  }
}

TEST(CliffordConjugation, ContinuousAngleProducesSum) {
  const PauliSum q = PauliSum::from_strings({{"ZI", 1.0}});
  const std::vector<CliffordRotation> rots = {{encode_pauli("XI"), 0.3}};
  const PauliSum r = clifford_conjugate(q, rots);
  EXPECT_EQ(r.size(), 2u);
  const oracle::Matrix u = oracle::expm(Complex(0, 0.3) * oracle::pauli("XI"));
  EXPECT_LT(max_abs(to_matrix(r) - u * oracle::pauli("ZI") * u.adjoint()), 1e-12);
  EXPECT_THROW(clifford_conjugate(encode_pauli("ZI"), rots[0]), InvalidArgument);
}

TEST(CliffordConjugation, RejectsNonHermitianGenerator) {
  PauliTerm g = encode_pauli("X");
  g.set_phase_exponent(1);
  EXPECT_THROW(clifford_conjugate(encode_pauli("Z"), CliffordRotation::quarter_turn(g)), InvalidArgument);
}

TEST(CliffordConjugation, PreservesSpectrum) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const PauliSum h = random_sum(4, 16, rng);
    std::vector<CliffordRotation> rots;
    for (int k = 0; k < 4; ++k) {
      std::string g;
      do {
        g = oracle::random_letters(4, rng);
      } while (g == "IIII");
      rots.push_back(CliffordRotation::quarter_turn(encode_pauli(g), (rng() & 1) ? 1 : -1));
    }
    const auto before = oracle::eigenvalues(to_matrix(h));
    const auto after = oracle::eigenvalues(to_matrix(clifford_conjugate(h, rots)));
    for (std::size_t i = 0; i < before.size(); ++i) EXPECT_NEAR(before[i], after[i], 1e-9);
  }
}

TEST(QwcGrouping, FiveQubitFixtureNeedsTwoGroups) {
  const auto groups = qwc_partition(fixture::h_cs());
  ASSERT_EQ(groups.size(), 2u);
  std::size_t total = 0;
  for (const auto& g : groups) {
    total += g.terms.size();
    for (std::size_t i = 0; i < g.terms.size(); ++i) {
      for (std::size_t j = 0; j < g.terms.size(); ++j) {
        EXPECT_TRUE(qubitwise_commutes(g.terms.term(i), g.terms.term(j)));
      }
    }
  }
  EXPECT_EQ(total, fixture::h_cs().size());
  EXPECT_EQ(groups[0].basis, (std::vector<Pauli>(5, Pauli::Z)));
  EXPECT_EQ(groups[1].basis, (std::vector<Pauli>{Pauli::Z, Pauli::X, Pauli::X, Pauli::X, Pauli::X}));
}
