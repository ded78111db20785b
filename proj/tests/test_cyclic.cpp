#include <gtest/gtest.h>

#include <random>

#include "ncg/cyclic.hpp"
#include "ncg/selftest.hpp"

using namespace ncg;

namespace {

const auto sample6 = [](std::mt19937_64& r) { return scaled_random_matrix(6, r); };

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

Matrix random_diagonal(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealVector d(n);
  for (int i = 0; i < n; ++i) d(i) = u(rng);
  return d.cast<Complex>().asDiagonal();
}

}  // namespace

TEST(GradedTest, MergeSign) {
  EXPECT_EQ(merge_sign(0b01, 0b10), 1);
  EXPECT_EQ(merge_sign(0b10, 0b01), -1);
  EXPECT_EQ(merge_sign(0b01, 0b01), 0);
  EXPECT_EQ(merge_sign(0b100, 0b011), 1);
  EXPECT_EQ(merge_sign(0b010, 0b101), -1);
}

TEST(GradedTest, GeneratorsAnticommute) {
  const Matrix one = Matrix::Identity(2, 2);
  GradedElement e1(2, 2), e2(2, 2);
  e1.add(0b01, one);
  e2.add(0b10, one);
  EXPECT_LE(max_norm((e1 * e2).coefficient(0b11) + (e2 * e1).coefficient(0b11)), 0.0);
  EXPECT_LE(max_norm((e1 * e1).coefficient(0b01)), 0.0);
  EXPECT_EQ((e1 * e2).degree(), 2);
}

TEST(CochainTest, ArityChecked) {
  EXPECT_EQ(code_of([] { trace_cochain()({Matrix::Identity(2, 2), Matrix::Identity(2, 2)}); }),
            ErrorCode::DegreeMismatch);
}

TEST(HochschildTest, TraceIsCocycle) {
  std::mt19937_64 rng(1);
  EXPECT_LE(max_abs_on_samples(hochschild_boundary(trace_cochain()), 50, sample6, rng), 1e-13);
}

TEST(HochschildTest, TwistedTraceIsNot) {
  std::mt19937_64 rng(2);
  const Matrix k = scaled_random_matrix(6, rng);
  const CyclicCochain<Matrix> phi(0, [k](std::span<const Matrix> a) { return (k * a[0]).trace(); });
  const auto b = hochschild_boundary(phi);
  const Matrix a0 = sample6(rng), a1 = sample6(rng);
  EXPECT_GT(std::abs(b({a0, a1})), 1e-3);
  EXPECT_LE(std::abs(b({a0, a1}) - (k * (a0 * a1 - a1 * a0)).trace()), 1e-12);
}

TEST(HochschildTest, BoundarySquaredVanishes) {
  std::mt19937_64 rng(3);
  for (int degree = 0; degree <= 2; ++degree) {
    const auto phi = random_cochain(degree, 6, rng);
    EXPECT_LE(max_abs_on_samples(hochschild_boundary(hochschild_boundary(phi)), 20, sample6, rng), 1e-10);
  }
}

TEST(InnerCycleTest, DegreeZeroIsTrace) {
  std::mt19937_64 rng(4);
  const auto eta = build_inner_cycle({}, 6).character();
  const Matrix a = sample6(rng);
  EXPECT_EQ(eta.degree(), 0);
  EXPECT_LE(std::abs(eta({a}) - a.trace()), 1e-14);
}

TEST(InnerCycleTest, ZeroGeneratorGivesZero) {
  std::mt19937_64 rng(5);
  const auto eta = build_inner_cycle({Matrix::Zero(6, 6)}, 6).character();
  EXPECT_EQ(eta({sample6(rng), sample6(rng)}), Complex(0.0));
}

TEST(InnerCycleTest, DegreeTwoMatchesBruteForce) {
  std::mt19937_64 rng(6);
  const Matrix x1 = random_diagonal(6, rng), x2 = random_diagonal(6, rng);
  const auto eta = build_inner_cycle({x1, x2}, 6).character();
  const auto nab = [](const Matrix& x, const Matrix& a) -> Matrix { return kI * (x * a - a * x); };
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a0 = sample6(rng), a1 = sample6(rng), a2 = sample6(rng);
    const Complex brute = (a0 * nab(x1, a1) * nab(x2, a2)).trace() - (a0 * nab(x2, a1) * nab(x1, a2)).trace();
    EXPECT_LE(std::abs(eta({a0, a1, a2}) - brute), 1e-12);
  }
}

TEST(InnerCycleTest, GradedRouteMatchesPermutationSum) {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 3; ++n) {
    const InnerCycle cycle = build_inner_cycle(random_commuting_generators(5, n, rng), 5);
    std::vector<Matrix> args;
    for (int i = 0; i <= n; ++i) args.push_back(scaled_random_matrix(5, rng));
    EXPECT_LE(std::abs(cycle.character()(args) - cycle.character_by_permutations()(args)), 1e-12);
  }
}

TEST(InnerCycleTest, CharactersAreCyclicCocycles) {
  const auto r = cocycle_residuals(100, 8);
  EXPECT_LE(r.boundary, 1e-10);
  EXPECT_LE(r.cyclicity, 1e-10);
}

TEST(InnerCycleTest, WeightedTraceCharacterIsCyclicCocycle) {
  // The weight is scalar on two 3-dim blocks, so its trace is tracial on the block algebra.
  std::mt19937_64 rng(9);
  const Matrix frame = random_unitary(6, rng);
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  RealVector rho(6), d1(6), d2(6);
  for (int i = 0; i < 6; ++i) {
    rho(i) = i < 3 ? 0.7 : 1.6;
    d1(i) = v(rng);
    d2(i) = v(rng);
  }
  const auto conj = [&](const Matrix& m) -> Matrix { return frame * m * frame.adjoint(); };
  const auto herm = [&](const RealVector& d) -> Matrix {
    const Matrix m = conj(d.cast<Complex>().asDiagonal());
    return 0.5 * (m + m.adjoint());
  };
  const auto block_sample = [&](std::mt19937_64& r) -> Matrix {
    Matrix m = Matrix::Zero(6, 6);
    m.topLeftCorner(3, 3) = scaled_random_matrix(3, r);
    m.bottomRightCorner(3, 3) = scaled_random_matrix(3, r);
    return conj(m);
  };
  const InnerCycle cycle = build_inner_cycle({herm(d1), herm(d2)}, 6, herm(rho));
  const auto eta = cycle.character();
  EXPECT_LE(max_abs_on_samples(hochschild_boundary(eta), 30, block_sample, rng), 1e-10);
  EXPECT_TRUE(cyclicity_check(eta, 30, block_sample, rng));
  EXPECT_GT(max_abs_on_samples(hochschild_boundary(eta), 30, sample6, rng), 1e-3);
}

TEST(InnerCycleTest, ConstructionErrors) {
  std::mt19937_64 rng(10);
  const Matrix a = random_hermitian(4, rng), b = random_hermitian(4, rng);
  EXPECT_EQ(code_of([&] { build_inner_cycle({a, b}, 4); }), ErrorCode::NonCommutingGenerators);
  EXPECT_EQ(code_of([&] { build_inner_cycle({random_matrix(4, 4, rng)}, 4); }), ErrorCode::NonHermitianInput);
  EXPECT_EQ(code_of([&] { build_inner_cycle({a}, 4, Matrix(-Matrix::Identity(4, 4))); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { build_inner_cycle({a}, 4, Matrix(b * b + Matrix::Identity(4, 4))); }),
            ErrorCode::NonCommutingGenerators);
}

TEST(CyclicityTest, Cases) {
  std::mt19937_64 rng(11);
  EXPECT_TRUE(cyclicity_check(trace_cochain(), 20, sample6, rng));
  for (int n = 1; n <= 2; ++n)
    EXPECT_TRUE(cyclicity_check(build_inner_cycle(random_commuting_generators(6, n, rng), 6).character(), 20, sample6, rng));
  const CyclicCochain<Matrix> product(1, [](std::span<const Matrix> a) { return a[0].trace() * a[1].trace(); });
  EXPECT_FALSE(cyclicity_check(product, 20, sample6, rng));
}

TEST(ExtendCycleTest, FromTraceMatchesDirect) {
  std::mt19937_64 rng(12);
  const auto xi = random_commuting_generators(6, 1, rng);
  const auto direct = build_inner_cycle(xi, 6).character();
  const auto extended = extend_cycle(build_inner_cycle({}, 6), xi).character();
  const Matrix a0 = sample6(rng), a1 = sample6(rng);
  EXPECT_LE(std::abs(direct({a0, a1}) - extended({a0, a1})), 1e-12);
}

TEST(ExtendCycleTest, DegreeOneByDegreeOne) {
  std::mt19937_64 rng(13);
  const auto xi = random_commuting_generators(6, 2, rng);
  const auto direct = build_inner_cycle(xi, 6).character();
  const auto extended = extend_cycle(build_inner_cycle({xi[0]}, 6), {xi[1]}).character();
  EXPECT_EQ(extended.degree(), 2);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<Matrix> a{sample6(rng), sample6(rng), sample6(rng)};
    EXPECT_LE(std::abs(direct(a) - extended(a)), 1e-10);
  }
  EXPECT_LE(max_abs_on_samples(hochschild_boundary(extended), 20, sample6, rng), 1e-10);
}

TEST(ExtendCycleTest, ZeroGeneratorKillsCharacter) {
  std::mt19937_64 rng(14);
  const auto base = build_inner_cycle(random_commuting_generators(6, 1, rng), 6);
  const auto eta = extend_cycle(base, {Matrix::Zero(6, 6)}).character();
  EXPECT_EQ(std::abs(eta({sample6(rng), sample6(rng), sample6(rng)})), 0.0);
}

TEST(ExtendCycleTest, RejectsNonCommutingExtra) {
  std::mt19937_64 rng(15);
  const auto base = build_inner_cycle(random_commuting_generators(4, 1, rng), 4);
  EXPECT_EQ(code_of([&] { extend_cycle(base, {random_hermitian(4, rng)}); }), ErrorCode::NonCommutingGenerators);
}

TEST(CrossedProductTest, GridAndAdjoint) {
  std::mt19937_64 rng(16);
  const auto gens = random_commuting_generators(3, 1, rng);
  const CrossedProduct alg(gens[0], 16, 0.5);
  EXPECT_EQ(alg.coordinate(alg.origin()), 0);
  EXPECT_EQ(alg.index_of(-8), 0);
  EXPECT_EQ(alg.index_of(8), 0);
  CrossedElement f = alg.zero();
  for (auto& v : f.values) v = scaled_random_matrix(3, rng);
  const CrossedElement back = alg.adjoint(alg.adjoint(f));
  for (int k = 1; k < 16; ++k) EXPECT_LE(max_norm(back.values[static_cast<std::size_t>(k)] - f.values[static_cast<std::size_t>(k)]), 1e-12);
  EXPECT_THROW(CrossedProduct(gens[0], 15, 0.5), Error);
  EXPECT_THROW(CrossedProduct(random_matrix(3, 3, rng), 16, 0.5), Error);
}

TEST(CrossedProductTest, ProductIsAssociative) {
  std::mt19937_64 rng(17);
  const CrossedProduct alg(random_commuting_generators(3, 1, rng)[0], 16, 0.25);
  // Elements supported near the origin so wrap-around never enters.
  const auto make = [&] {
    CrossedElement e = alg.zero();
    for (int c = -2; c <= 2; ++c) e.values[static_cast<std::size_t>(alg.index_of(c))] = scaled_random_matrix(3, rng);
    return e;
  };
  const auto a = make(), b = make(), c = make();
  const auto left = alg.multiply(alg.multiply(a, b), c);
  const auto right = alg.multiply(a, alg.multiply(b, c));
  for (int k = 0; k < 16; ++k)
    EXPECT_LE(max_norm(left.values[static_cast<std::size_t>(k)] - right.values[static_cast<std::size_t>(k)]), 1e-12);
  EXPECT_LE(max_norm(alg.product_at_origin(a.values, b.values) - alg.multiply(a, b).values[static_cast<std::size_t>(alg.origin())]), 1e-14);
}

TEST(SharpAlphaTest, OriginSupportedElementsGiveZero) {
  const CrossedProduct alg(Matrix::Zero(2, 2), 8, 0.5);
  const auto eta = sharp_alpha_discrete(build_inner_cycle({}, 2), alg);
  std::mt19937_64 rng(18);
  const auto at_origin = [&] {
    CrossedElement e = alg.zero();
    e.values[static_cast<std::size_t>(alg.origin())] = scaled_random_matrix(2, rng);
    return e;
  };
  EXPECT_EQ(eta({at_origin(), at_origin()}), Complex(0.0));
}

TEST(SharpAlphaTest, CyclicWithShiftedSign) {
  std::mt19937_64 rng(19);
  const auto gens = random_commuting_generators(3, 2, rng);
  const CrossedProduct alg(gens[1], 32, 0.5);
  const auto sample = [&](std::mt19937_64& r) {
    CrossedElement e = alg.zero();
    for (int k = 0; k < alg.size(); ++k) {
      const double x = alg.position(k);
      e.values[static_cast<std::size_t>(k)] = std::exp(-x * x / 2.0) * scaled_random_matrix(3, r);
    }
    return e;
  };
  for (int n = 0; n <= 1; ++n) {
    const std::vector<Matrix> base_gens(gens.begin(), gens.begin() + n);
    const auto eta = sharp_alpha_discrete(build_inner_cycle(base_gens, 3), alg);
    EXPECT_EQ(eta.degree(), n + 1);
    EXPECT_LE(cyclicity_residual(eta, 5, sample, rng), 1e-10);
  }
}

TEST(SharpAlphaTest, NearlyClosed) {
  std::mt19937_64 rng(20);
  const auto gens = random_commuting_generators(3, 2, rng);
  const CrossedProduct alg(gens[1], 64, 0.25);
  const auto eta = sharp_alpha_discrete(build_inner_cycle({gens[0]}, 3), alg);
  std::vector<CrossedElement> f;
  for (int i = 0; i < 4; ++i) {
    const Matrix a = scaled_random_matrix(3, rng), b = scaled_random_matrix(3, rng);
    CrossedElement e = alg.zero();
    for (int k = 0; k < alg.size(); ++k) {
      const double x = alg.position(k);
      e.values[static_cast<std::size_t>(k)] = std::exp(-x * x / 2.0) * (a + x * b);
    }
    f.push_back(e);
  }
  EXPECT_LE(std::abs(crossed_boundary(eta, alg)(f)), 1e-8);
}

TEST(SharpAlphaTest, RejectsNonInvariantCycle) {
  std::mt19937_64 rng(21);
  const CrossedProduct alg(random_hermitian(3, rng), 8, 0.5);
  EXPECT_EQ(code_of([&] { sharp_alpha_discrete(build_inner_cycle({random_hermitian(3, rng)}, 3), alg); }),
            ErrorCode::NotInvariant);
}

TEST(StokesTest, ConstantFamily) {
  std::mt19937_64 rng(22);
  const auto base = build_inner_cycle(random_commuting_generators(4, 1, rng), 4);
  const auto grid = uniform_grid(0.0, 1.0, 9);
  const Matrix a = scaled_random_matrix(4, rng), b = scaled_random_matrix(4, rng);
  const std::vector<std::vector<Matrix>> fam{std::vector<Matrix>(9, a), std::vector<Matrix>(9, b)};
  const auto r = stokes_chain_check(base, grid, fam);
  EXPECT_LE(r.residual, 1e-12);
  EXPECT_LE(std::abs(r.lhs), 1e-12);
}

TEST(StokesTest, LinearCommutingDiagonals) {
  std::mt19937_64 rng(23);
  const auto base = build_inner_cycle({random_diagonal(4, rng)}, 4);
  const auto grid = uniform_grid(0.0, 1.0, 7);
  const Matrix a0 = random_diagonal(4, rng), a1 = random_diagonal(4, rng);
  const Matrix b0 = random_diagonal(4, rng), b1 = random_diagonal(4, rng);
  std::vector<std::vector<Matrix>> fam(2);
  for (double h : grid) {
    fam[0].push_back(a0 + h * a1);
    fam[1].push_back(b0 + h * b1);
  }
  EXPECT_LE(stokes_chain_check(base, grid, fam).residual, 1e-10);
}

TEST(StokesTest, SecondOrderConvergence) {
  const auto r = stokes_residuals(16, 32, 24);
  EXPECT_GT(r[0], 0.0);
  EXPECT_GE(r[0] / r[1], 3.0);
  EXPECT_LE(r[0] / r[1], 5.0);
}

TEST(StokesTest, Errors) {
  std::mt19937_64 rng(25);
  const auto base = build_inner_cycle(random_commuting_generators(4, 1, rng), 4);
  const auto grid = uniform_grid(0.0, 1.0, 2);
  const Matrix a = scaled_random_matrix(4, rng);
  EXPECT_EQ(code_of([&] { stokes_chain_check(base, grid, {std::vector<Matrix>(2, a), std::vector<Matrix>(2, a)}); }),
            ErrorCode::GridTooCoarse);
  const auto g5 = uniform_grid(0.0, 1.0, 5);
  EXPECT_EQ(code_of([&] { stokes_chain_check(base, g5, {std::vector<Matrix>(5, a)}); }), ErrorCode::DegreeMismatch);
}

TEST(AppendixIdentityTest, Cases) {
  std::mt19937_64 rng(26);
  const Matrix d = random_matrix(8, 8, rng), m = random_matrix(8, 8, rng);
  EXPECT_LE(appendix_identity_check(Matrix::Identity(8, 8), d, m), 1e-12);
  EXPECT_EQ(appendix_identity_check(Matrix::Zero(8, 8), d, m), 0.0);
  EXPECT_LE(appendix_residual(100, 27), 1e-12);
  EXPECT_EQ(code_of([&] { appendix_identity_check(0.5 * Matrix::Identity(8, 8), d, m); }), ErrorCode::NotAProjector);
}
