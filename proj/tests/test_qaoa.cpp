#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fqaoa/qaoa.hpp"
#include "oracles.hpp"

using namespace fqaoa;
using std::numbers::pi;

namespace {

double max_amp_error(const StateVector& s, const oracle::cvec& ref) {
  double err = 0.0;
  for (std::size_t z = 0; z < s.size(); ++z)
    err = std::max(err, std::abs(s[z] - ref(static_cast<Eigen::Index>(z))));
  return err;
}

// Four-site model; only used to trip the width check against a 1-qubit state.
IsingModel four_free_spins(double h) { return make_model(LatticeKind::Square, 2, 0.0, 0.0, h); }

}  // namespace

TEST(Iota, Examples) {
  EXPECT_NEAR(iota(make_model(LatticeKind::Square, 3, 1.0, 0.0, 4.0)), 16.0 / 7.0, 1e-15);
  EXPECT_NEAR(iota(make_model(LatticeKind::ShastrySutherland, 3, 1.0, 3.84, 0.48)), 24.0 / 23.0, 1e-15);
  for (auto kind : {LatticeKind::Square, LatticeKind::ShastrySutherland, LatticeKind::Triangular})
    EXPECT_NEAR(iota(make_model(kind, 3, 1.0, 1.0, 1.0)), 1.0, 1e-15);
}

TEST(Iota, NonPositiveScaleIsADomainError) {
  EXPECT_THROW(iota(make_model(LatticeKind::Square, 3, 0.0, 0.0, 0.0)), DomainError);
  EXPECT_THROW(iota(make_model(LatticeKind::Square, 3, 1.0, 0.0, -2.0)), DomainError);
}

TEST(InitialState, Uniform) {
  const auto one = initial_state(1);
  EXPECT_NEAR(one[0].real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(one[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
  const auto nine = initial_state(9);
  for (std::size_t z = 0; z < nine.size(); ++z) EXPECT_NEAR(nine[z].real(), 1.0 / std::sqrt(512.0), 1e-15);
  EXPECT_NEAR(nine.norm_squared(), 1.0, 1e-14);
  EXPECT_THROW(initial_state(0), DomainError);
  EXPECT_THROW(initial_state(25), DomainError);
}

TEST(Phase, IdentityAtZeroAndDiagonal) {
  const auto model = make_model(LatticeKind::Triangular, 3, 1.0, 2.0, 1.3);
  StateVector s = initial_state(9);
  apply_mixer(s, 0.3);
  const auto before = s;
  apply_phase(s, model, 0.0);
  for (std::size_t z = 0; z < s.size(); ++z) EXPECT_EQ(s[z], before[z]);
  apply_phase(s, model, 0.77);
  for (std::size_t z = 0; z < s.size(); ++z) EXPECT_NEAR(std::norm(s[z]), std::norm(before[z]), 1e-15);
}

TEST(Phase, SingleSpinInField) {
  // Energies of one spin in field h = 1: +1 for z=0, -1 for z=1.
  const std::vector<double> energies{1.0, -1.0};
  StateVector s = initial_state(1);
  const double gamma = 0.4;
  apply_phase(s, energies, gamma);
  const double a = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(s[0] - a * std::polar(1.0, -gamma)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s[1] - a * std::polar(1.0, gamma)), 0.0, 1e-15);
  EXPECT_THROW(apply_phase(s, four_free_spins(1.0), gamma), ContractViolation);
}

TEST(Mixer, Examples) {
  StateVector s = StateVector::basis(1, 0);
  apply_mixer(s, 0.0);
  EXPECT_EQ(s[0], amplitude(1.0, 0.0));
  apply_mixer(s, pi / 4);
  EXPECT_NEAR(std::abs(s[0] - amplitude(std::cos(pi / 4), 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s[1] - amplitude(0.0, -std::sin(pi / 4))), 0.0, 1e-15);

  // exp(-i pi X) = -I per qubit.
  StateVector t = initial_state(4);
  for (std::size_t z = 0; z < 16; ++z) t[z] *= std::polar(1.0, 0.1 * z);
  const auto before = t;
  apply_mixer(t, pi);
  for (std::size_t z = 0; z < 16; ++z) EXPECT_NEAR(std::norm(t[z]), std::norm(before[z]), 1e-15);
}

TEST(Evolve, ZeroAnglesGiveUniformState) {
  const auto model = make_model(LatticeKind::ShastrySutherland, 3, 1.0, 2.0, 2.48);
  const auto s = evolve(model, {{0.0}, {0.0}});
  for (std::size_t z = 0; z < s.size(); ++z) EXPECT_NEAR(s.probability(z), 1.0 / 512.0, 1e-16);
}

TEST(Evolve, BetaPeriodPi) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> angle(-pi, pi);
  for (int trial = 0; trial < 10; ++trial) {
    const auto model = make_model(LatticeKind::Triangular, 3, 1.0, 1.0 + trial * 0.3, 0.2 * trial);
    const double g = angle(rng);
    const double b = angle(rng);
    const auto p0 = evolve(model, {{g}, {b}}).probabilities();
    const auto p1 = evolve(model, {{g}, {b + pi}}).probabilities();
    for (std::size_t z = 0; z < p0.size(); ++z) EXPECT_NEAR(p0[z], p1[z], 1e-10);
  }
}

TEST(Evolve, ZeroGammaKeepsUniformProbabilities) {
  const auto model = make_model(LatticeKind::Square, 3, 1.0, 0.0, 3.0);
  for (double b : {-1.3, -0.2, 0.5, 1.1}) {
    const auto s = evolve(model, {{0.0}, {b}});
    for (std::size_t z = 0; z < s.size(); ++z) EXPECT_NEAR(s.probability(z), 1.0 / 512.0, 1e-15);
  }
}

TEST(Evolve, SpinFlipCovarianceAtZeroField) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> angle(-1.5, 1.5);
  for (auto kind : {LatticeKind::Square, LatticeKind::ShastrySutherland, LatticeKind::Triangular}) {
    const auto model = make_model(kind, 3, 1.0, 2.2, 0.0);
    QaoaAngles angles{{angle(rng), angle(rng)}, {angle(rng), angle(rng)}};
    const auto p = evolve(model, angles).probabilities();
    for (std::uint64_t z = 0; z < 512; ++z) EXPECT_NEAR(p[z], p[511u ^ z], 1e-13);
  }
}

TEST(Evolve, NormPreservedAfterEveryStep) {
  const auto model = make_model(LatticeKind::Triangular, 3, 1.0, 3.7, 1.4);
  const auto energies = energy_table(model);
  StateVector s = initial_state(9);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (int step = 0; step < 20; ++step) {
    apply_phase(s, energies, angle(rng));
    EXPECT_LT(std::abs(s.norm_squared() - 1.0), 1e-10);
    apply_mixer(s, angle(rng));
    EXPECT_LT(std::abs(s.norm_squared() - 1.0), 1e-10);
  }
}

TEST(Evolve, MatchesDenseOracleOnSmallLattices) {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> coef(-2.0, 5.0);
  std::uniform_real_distribution<double> angle(-pi, pi);
  std::uniform_int_distribution<int> kind_pick(0, 2);
  std::uniform_int_distribution<int> layers(1, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto kind = static_cast<LatticeKind>(kind_pick(rng));
    const auto model = make_model(kind, 2, coef(rng), coef(rng), coef(rng));
    QaoaAngles angles;
    for (int l = layers(rng); l > 0; --l) {
      angles.gammas.push_back(angle(rng));
      angles.betas.push_back(angle(rng));
    }
    const auto s = evolve(model, angles);
    const auto ref = oracle::dense_qaoa(model.cell, model.j1, model.j2, model.h, angles.gammas, angles.betas);
    EXPECT_LT(max_amp_error(s, ref), 1e-8) << "trial " << trial;
  }
}

TEST(Evolve, RowEMatchesDenseOracle) {
  const auto model = make_model(LatticeKind::ShastrySutherland, 3, 1.0, 2.0, 2.48);
  const QaoaAngles angles{{-0.050 * pi}, {0.143 * pi}};
  const auto s = evolve(model, angles);
  const auto ref = oracle::dense_qaoa(model.cell, 1.0, 2.0, 2.48, angles.gammas, angles.betas);
  const auto ground = enumerate_ground_states(model);
  double p_ref = 0.0;
  double e_ref = 0.0;
  for (auto z : ground.states) p_ref += std::norm(ref(static_cast<Eigen::Index>(z)));
  p_ref /= static_cast<double>(ground.degeneracy());
  for (Eigen::Index z = 0; z < ref.size(); ++z)
    e_ref += std::norm(ref(z)) * oracle::brute_energy(model.cell, 1.0, 2.0, 2.48, static_cast<std::uint64_t>(z));
  EXPECT_NEAR(p_ground(s, ground), p_ref, 1e-8);
  EXPECT_NEAR(expectation_energy(s, model), e_ref, 1e-8);
}

TEST(Observables, UniformStateBaselines) {
  const auto model = make_model(LatticeKind::ShastrySutherland, 3, 1.0, 2.0, 2.48);
  const auto s = initial_state(9);
  EXPECT_NEAR(expectation_energy(s, model), 0.0, 1e-12);
  const auto ground = enumerate_ground_states(model);
  ASSERT_EQ(ground.degeneracy(), 4u);
  EXPECT_NEAR(p_ground(s, ground), 1.0 / 512.0, 1e-16);
}

TEST(Observables, BasisStates) {
  const auto model = make_model(LatticeKind::Square, 3, 1.0, 0.0, 5.0);
  const auto ground = enumerate_ground_states(model);
  ASSERT_EQ(ground.degeneracy(), 1u);
  const auto g = StateVector::basis(9, ground.states[0]);
  EXPECT_EQ(p_ground(g, ground), 1.0);
  for (std::uint64_t z : {0u, 17u, 300u}) EXPECT_EQ(expectation_energy(StateVector::basis(9, z), model), energy(model, z));
  EXPECT_EQ(sem_energy(g, model, 1000), 0.0);
  EXPECT_THROW(p_ground(g, GroundStateSet{0.0, 9, {}}), ContractViolation);
}

TEST(Observables, SemEnergyOfUniformState) {
  // Each Z_i Z_j term averages to zero and distinct terms are uncorrelated,
  // so <H^2> over the uniform state is the number of bonds: 12.
  const auto model = make_model(LatticeKind::Square, 3, 1.0, 0.0, 0.0);
  const auto s = initial_state(9);
  double second = 0.0;
  for (std::uint64_t z = 0; z < 512; ++z) {
    const double e = oracle::brute_energy(model.cell, 1.0, 0.0, 0.0, z);
    second += e * e / 512.0;
  }
  EXPECT_NEAR(second, 12.0, 1e-12);
  EXPECT_NEAR(sem_energy(s, model, 1), std::sqrt(12.0), 1e-12);
  EXPECT_NEAR(sem_energy(s, model, 4), 0.5 * sem_energy(s, model, 1), 1e-14);
}

TEST(Observables, SemProbability) {
  EXPECT_EQ(sem_probability(0.0, 10), 0.0);
  EXPECT_EQ(sem_probability(1.0, 10), 0.0);
  EXPECT_NEAR(sem_probability(0.5, 100), 0.05, 1e-15);
  EXPECT_NEAR(sem_probability(0.1, 1000), 0.0094868329805051, 1e-15);
  EXPECT_THROW(sem_probability(1.5, 10), ContractViolation);
  EXPECT_THROW(sem_probability(0.5, 0), ContractViolation);
}

TEST(GridSpec, DefaultsAndAxes) {
  const GridSpec spec;
  EXPECT_EQ(spec.evaluations(), 60'300u);
  EXPECT_EQ(spec.beta(0), -pi / 2);
  EXPECT_EQ(spec.beta(200), pi / 2);
  EXPECT_EQ(spec.beta(100), 0.0);
  const double w = spec.gamma_halfwidth(2.0);
  EXPECT_NEAR(w, 0.55 * pi / 2.0, 1e-15);
  EXPECT_NEAR(spec.gamma(0, w), -w, 1e-15);
  EXPECT_NEAR(spec.gamma(299, w), w, 1e-15);
  for (std::size_t k = 0; k < 300; ++k) EXPECT_EQ(spec.gamma(k, w), -spec.gamma(299 - k, w));
}

TEST(GridSearch, SmallGridMatchesDirectEvaluation) {
  const auto model = make_model(LatticeKind::Triangular, 3, 1.0, 1.2, 2.1);
  GridSpec spec;
  spec.n_beta = 21;
  spec.n_gamma = 30;
  const auto r = grid_search(model, spec, Objective::Energy, {1, true});
  EXPECT_EQ(r.evaluations, 630u);
  const auto ground = enumerate_ground_states(model);
  for (std::size_t k = 0; k < spec.n_gamma; k += 7) {
    for (std::size_t j = 0; j < spec.n_beta; j += 5) {
      const auto s = evolve(model, {{spec.gamma(k, r.gamma_halfwidth)}, {spec.beta(j)}});
      EXPECT_NEAR(r.energy_surface[k * spec.n_beta + j], expectation_energy(s, model), 1e-12);
      EXPECT_NEAR(r.p_ground_surface[k * spec.n_beta + j], p_ground(s, ground), 1e-14);
    }
  }
  for (double e : r.energy_surface) EXPECT_GE(e, r.best_energy.energy);
  for (double p : r.p_ground_surface) EXPECT_LE(p, r.best_prob.p_ground);
  EXPECT_GE(r.best_prob.p_ground, r.best_energy.p_ground);
}

TEST(GridSearch, ThreadCountDoesNotChangeResult) {
  const auto model = make_model(LatticeKind::ShastrySutherland, 3, 1.0, 3.84, 1.68);
  GridSpec spec;
  spec.n_beta = 41;
  spec.n_gamma = 60;
  const auto a = grid_search(model, spec, Objective::Energy, {1, false});
  const auto b = grid_search(model, spec, Objective::Energy, {3, false});
  EXPECT_EQ(a.best_energy.gamma, b.best_energy.gamma);
  EXPECT_EQ(a.best_energy.beta, b.best_energy.beta);
  EXPECT_EQ(a.best_prob.gamma, b.best_prob.gamma);
  EXPECT_EQ(a.best_prob.beta, b.best_prob.beta);
}

TEST(GridSearch, MirrorTieResolvesToNegativeGamma) {
  // (gamma, beta) -> (-gamma, -beta) conjugates the state, so every value
  // appears twice; the tie-break picks the earlier, negative-gamma copy.
  const auto model = make_model(LatticeKind::ShastrySutherland, 3, 1.0, 0.24, 5.52);
  const auto r = grid_search(model);
  EXPECT_LT(r.best_energy.gamma, 0.0);
  EXPECT_GT(r.best_energy.beta, 0.0);
  // Reference row G: gamma = -0.041 pi, beta = 0.244 pi, within grid resolution.
  const double d_gamma = 2.0 * r.gamma_halfwidth / 299.0;
  const double d_beta = pi / 200.0;
  EXPECT_NEAR(r.best_energy.gamma, -0.041 * pi, 1.5 * d_gamma + 0.0005 * pi);
  EXPECT_NEAR(r.best_energy.beta, 0.244 * pi, 1.5 * d_beta + 0.0005 * pi);
}

TEST(GridSearch, SquarePlateauProbability) {
  const auto r = grid_search(make_model(LatticeKind::Square, 3, 1.0, 0.0, 3.2));
  EXPECT_NEAR(r.best_energy.p_ground, 0.06, 0.02);
}

TEST(GridSearch, StrongFieldApproachesOne) {
  const auto r = grid_search(make_model(LatticeKind::Square, 3, 1.0, 0.0, 100.0));
  EXPECT_GT(r.best_energy.p_ground, 0.9);
}

// At J2=3.7, h=1.4 the ground-probability maximum lies in the basin of the
// global energy minimum: steepest descent on the energy surface from the
// probability peak ends there, 6 gamma cells and 3 beta cells away.
TEST(GridSearch, ProbabilityPeakInEnergyBasin) {
  const auto model = make_model(LatticeKind::ShastrySutherland, 3, 1.0, 3.7, 1.4);
  const auto r = grid_search(model, GridSpec{}, Objective::GroundProb, {1, true});
  const long nb = static_cast<long>(r.spec.n_beta);
  const long ng = static_cast<long>(r.spec.n_gamma);
  const auto at = [&](long k, long j) { return r.energy_surface[static_cast<std::size_t>(k * nb + j)]; };
  const auto peak = static_cast<long>(std::max_element(r.p_ground_surface.begin(), r.p_ground_surface.end()) -
                                      r.p_ground_surface.begin());
  long k = peak / nb;
  long j = peak % nb;
  const long pk = k;
  const long pj = j;
  for (bool moved = true; moved;) {
    moved = false;
    long bk = k;
    long bj = j;
    for (long dk = -1; dk <= 1; ++dk)
      for (long dj = -1; dj <= 1; ++dj) {
        const long nk = k + dk;
        const long nj = j + dj;
        if (nk >= 0 && nk < ng && nj >= 0 && nj < nb && at(nk, nj) < at(bk, bj)) {
          bk = nk;
          bj = nj;
        }
      }
    moved = bk != k || bj != j;
    k = bk;
    j = bj;
  }
  EXPECT_NEAR(at(k, j), r.best_energy.energy, 1e-12);
  EXPECT_LE(std::max(std::abs(k - pk), std::abs(j - pj)), 6);
}

TEST(Sample, BasisStateAndDeterminism) {
  const auto basis = StateVector::basis(9, 77);
  const auto c = sample(basis, 500, 1);
  EXPECT_EQ(c.counts.size(), 1u);
  EXPECT_EQ(c.count(77), 500u);

  const auto model = make_model(LatticeKind::ShastrySutherland, 3, 1.0, 2.0, 2.48);
  const auto s = evolve(model, {{-0.05 * pi}, {0.143 * pi}});
  const auto a = sample(s, 1000, 42);
  const auto b = sample(s, 1000, 42);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.total(), 1000u);
  EXPECT_NE(a.counts, sample(s, 1000, 43).counts);
  EXPECT_THROW(sample(s, 0, 1), ContractViolation);
}

TEST(Sample, UniformCountsWithinFiveSigma) {
  const auto s = initial_state(9);
  const std::uint64_t n = 512'000;
  const auto c = sample(s, n, 2718);
  const double p = 1.0 / 512.0;
  const double sigma = std::sqrt(n * p * (1.0 - p));
  ASSERT_EQ(c.total(), n);
  for (std::uint64_t z = 0; z < 512; ++z) EXPECT_LE(std::abs(static_cast<double>(c.count(z)) - 1000.0), 5.0 * sigma);
}
