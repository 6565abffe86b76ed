#include <random>

#include <gtest/gtest.h>

#include "fqaoa/io.hpp"
#include "fqaoa/ising.hpp"
#include "oracles.hpp"

using namespace fqaoa;

namespace {

// Five up (z=0) on the even sites, four down on the odd ones.
SpinConfig checkerboard3() { return SpinConfig::parse("010101010"); }

SpinConfig uniform_config(int width, int bit) {
  return SpinConfig(std::vector<std::uint8_t>(static_cast<std::size_t>(width), static_cast<std::uint8_t>(bit)));
}

}  // namespace

TEST(SpinConfig, SpinMapAndBitstrings) {
  const auto c = SpinConfig::from_index(0b000000110, 9);
  EXPECT_EQ(c.str(), "011000000");
  EXPECT_EQ(c.spin(0), 1);
  EXPECT_EQ(c.spin(1), -1);
  EXPECT_EQ(c.index(), 6u);
  EXPECT_EQ(SpinConfig::parse(c.str()), c);
  EXPECT_EQ(c.complement().index(), 511u - 6u);
  EXPECT_THROW(SpinConfig::parse("01x"), std::invalid_argument);
}

TEST(Energy, WorkedExamples) {
  const auto sq = make_model(LatticeKind::Square, 3, 1.0, 0.0, 0.0);
  EXPECT_EQ(energy(sq, uniform_config(9, 0)), 12.0);
  EXPECT_EQ(energy(sq, checkerboard3()), -12.0);
  const auto field = make_model(LatticeKind::Square, 3, 1.0, 0.0, 2.0);
  EXPECT_EQ(energy(field, uniform_config(9, 1)), -6.0);
}

TEST(Energy, WidthMismatchIsAContractViolation) {
  const auto sq = make_model(LatticeKind::Square, 3, 1.0, 0.0, 0.0);
  EXPECT_THROW(energy(sq, SpinConfig::parse("0101")), ContractViolation);
}

TEST(Energy, IndexAndConfigPathsAgreeWithOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-3.0, 6.0);
  for (auto kind : {LatticeKind::Square, LatticeKind::ShastrySutherland, LatticeKind::Triangular}) {
    const auto model = make_model(kind, 3, 1.0, coef(rng), coef(rng));
    const auto table = energy_table(model);
    for (std::uint64_t z = 0; z < 512; ++z) {
      const double e = energy(model, SpinConfig::from_index(z, 9));
      EXPECT_EQ(e, energy(model, z));
      EXPECT_EQ(e, table[z]);
      EXPECT_NEAR(e, oracle::brute_energy(model.cell, model.j1, model.j2, model.h, z), 1e-12);
    }
  }
}

TEST(Energy, SpinFlipSymmetryAtZeroField) {
  for (auto kind : {LatticeKind::Square, LatticeKind::ShastrySutherland, LatticeKind::Triangular}) {
    const auto model = make_model(kind, 3, 1.0, 1.7, 0.0);
    for (std::uint64_t z = 0; z < 512; ++z) EXPECT_EQ(energy(model, z), energy(model, 511u ^ z));
  }
}

TEST(Energy, FieldShiftIsLinearInMagnetization) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coef(0.0, 6.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double j2 = coef(rng);
    const double h = coef(rng);
    const auto with_field = make_model(LatticeKind::Triangular, 3, 1.0, j2, h);
    const auto without = make_model(LatticeKind::Triangular, 3, 1.0, j2, 0.0);
    for (std::uint64_t z = 0; z < 512; z += 7) {
      const auto c = SpinConfig::from_index(z, 9);
      EXPECT_NEAR(energy(with_field, c) - energy(without, c), h * 9.0 * magnetization(c).to_double(), 1e-12);
    }
  }
}

TEST(Magnetization, ExactRationals) {
  EXPECT_EQ(magnetization(uniform_config(9, 0)), Fraction(1));
  EXPECT_EQ(magnetization(checkerboard3()), Fraction(1, 9));
  EXPECT_EQ(magnetization(uniform_config(9, 1)), Fraction(-1));
}

TEST(Magnetization, FieldAligned) {
  EXPECT_EQ(field_aligned_magnetization(uniform_config(9, 1), 5.0), Fraction(1));
  EXPECT_EQ(field_aligned_magnetization(uniform_config(9, 1), -5.0), Fraction(-1));
  const auto c = SpinConfig::parse("011001000");
  EXPECT_EQ(field_aligned_magnetization(c, 0.0), magnetization(c));

  const auto g = enumerate_ground_states(make_model(LatticeKind::Square, 3, 1.0, 0.0, 1.0));
  ASSERT_EQ(g.degeneracy(), 1u);
  EXPECT_EQ(field_aligned_magnetization(g.configs()[0], 1.0), Fraction(1, 9));
}

TEST(GroundStates, ReferenceFixtures) {
  {
    const auto g = enumerate_ground_states(make_model(LatticeKind::Square, 3, 1.0, 0.0, 5.52));
    EXPECT_EQ(g.degeneracy(), 1u);
    EXPECT_EQ(g.configs()[0].str(), "111111111");
    EXPECT_EQ(mean_field_aligned_magnetization(g, 5.52), Fraction(1));
  }
  {
    const auto g = enumerate_ground_states(make_model(LatticeKind::ShastrySutherland, 3, 1.0, 2.0, 2.48));
    EXPECT_EQ(g.degeneracy(), 4u);
    EXPECT_EQ(mean_field_aligned_magnetization(g, 2.48), Fraction(5, 9));
  }
  {
    const auto g = enumerate_ground_states(make_model(LatticeKind::Square, 3, 1.0, 0.0, 3.2));
    ASSERT_EQ(g.degeneracy(), 1u);
    EXPECT_EQ(mean_field_aligned_magnetization(g, 3.2), Fraction(7, 9));
    // Only the centre spin points against the field.
    EXPECT_EQ(g.configs()[0].str(), "111101111");
  }
}

TEST(GroundStates, SizeGuard) {
  EXPECT_THROW(enumerate_ground_states(make_model(LatticeKind::Square, 5, 1.0, 0.0, 0.0)), DomainError);
}

TEST(GroundStates, AgreesWithReverseScanOracle) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coef(0.0, 6.0);
  for (auto kind : {LatticeKind::Square, LatticeKind::ShastrySutherland, LatticeKind::Triangular}) {
    for (int trial = 0; trial < 20; ++trial) {
      const double j2 = coef(rng);
      const double h = coef(rng);
      const auto model = make_model(kind, 3, 1.0, j2, h);
      const auto g = enumerate_ground_states(model);
      const auto ref = oracle::brute_ground(model.cell, 1.0, j2, h);
      EXPECT_NEAR(g.energy, ref.energy, 1e-12);
      EXPECT_EQ(g.states, ref.states) << "j2=" << j2 << " h=" << h;
    }
  }
}

TEST(GroundStates, ZeroFieldPairsAndZeroMagnetization) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(0.0, 6.0);
  for (auto kind : {LatticeKind::Square, LatticeKind::ShastrySutherland, LatticeKind::Triangular}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto g = enumerate_ground_states(make_model(kind, 3, 1.0, coef(rng), 0.0));
      for (auto z : g.states) EXPECT_TRUE(g.contains(511u ^ z));
      EXPECT_EQ(mean_field_aligned_magnetization(g, 0.0), Fraction(0));
    }
  }
}

TEST(RegionLabel, Spreadsheet) {
  EXPECT_EQ(region_label(0), "A");
  EXPECT_EQ(region_label(25), "Z");
  EXPECT_EQ(region_label(26), "AA");
  EXPECT_EQ(region_label(27), "AB");
}

TEST(PhaseDiagram, SquareFieldSweepHasThreePlateaus) {
  // Avoid the exact boundaries at h = 0, 8/3 and 4.
  std::vector<double> h_axis;
  for (int k = 1; k <= 60; ++k) {
    const double h = 0.1 * k - 0.05;
    h_axis.push_back(h);
  }
  const auto d = phase_diagram(LatticeKind::Square, 3, h_axis, {0.0});
  EXPECT_EQ(d.num_regions, 3u);
  for (const auto& c : d.cells) {
    const Fraction expected = c.h < 8.0 / 3.0 ? Fraction(1, 9) : c.h < 4.0 ? Fraction(7, 9) : Fraction(1);
    EXPECT_EQ(c.mean_m, expected) << "h=" << c.h;
    EXPECT_EQ(c.degeneracy, 1u);
  }
  EXPECT_EQ(d.cells.front().region_id, "A");
  EXPECT_EQ(d.cells.back().region_id, "C");
}

TEST(PhaseDiagram, ReferencePointsHaveDistinctRegions) {
  const double points[7][2] = {{0.24, 1.44}, {3.84, 0.48}, {3.84, 1.68}, {1.68, 1.92},
                               {2.0, 2.48},  {1.68, 3.6},  {0.24, 5.52}};
  const std::size_t degeneracy[7] = {1, 4, 4, 2, 4, 1, 1};
  // One diagram containing all seven points: seven distinct ground sets.
  std::vector<double> h_axis;
  std::vector<double> j2_axis;
  for (auto& p : points) {
    h_axis.push_back(p[1]);
    j2_axis.push_back(p[0]);
  }
  const auto full = phase_diagram(LatticeKind::ShastrySutherland, 3, h_axis, j2_axis);
  std::set<std::string> diagonal;
  for (std::size_t k = 0; k < 7; ++k) {
    diagonal.insert(full.at(k, k).region_id);
    EXPECT_EQ(full.at(k, k).degeneracy, degeneracy[k]);
  }
  EXPECT_EQ(diagonal.size(), 7u);
}

TEST(PhaseDiagram, ZeroFieldRowHasZeroMagnetization) {
  for (auto kind : {LatticeKind::Square, LatticeKind::ShastrySutherland, LatticeKind::Triangular}) {
    const auto d = phase_diagram(kind, 3, {0.0}, {0.0, 0.5, 1.0, 2.5, 4.0});
    for (const auto& c : d.cells) EXPECT_EQ(c.mean_m, Fraction(0));
  }
}

TEST(PhaseDiagram, RegionsPartitionByGroundSet) {
  const auto axis = parse_axis("0:6:0.4");
  const auto d = phase_diagram(LatticeKind::Triangular, 3, axis, axis);
  const auto cell = build_unit_cell(LatticeKind::Triangular, 3);
  std::map<std::string, std::vector<std::uint64_t>> by_region;
  for (const auto& c : d.cells) {
    const auto g = enumerate_ground_states(IsingModel{cell, 1.0, c.j2, c.h});
    auto [it, inserted] = by_region.try_emplace(c.region_id, g.states);
    EXPECT_EQ(it->second, g.states) << "region " << c.region_id << " mixes ground sets";
    EXPECT_GE(c.mean_m, Fraction(-1));
    EXPECT_LE(c.mean_m, Fraction(1));
  }
  std::set<std::vector<std::uint64_t>> distinct;
  for (const auto& [id, states] : by_region) EXPECT_TRUE(distinct.insert(states).second);
  EXPECT_EQ(by_region.size(), d.num_regions);
}

TEST(PhaseDiagram, ThreadCountDoesNotChangeOutput) {
  const auto axis = parse_axis("0:6:0.5");
  const auto a = phase_diagram(LatticeKind::ShastrySutherland, 3, axis, axis, 1.0, 1);
  const auto b = phase_diagram(LatticeKind::ShastrySutherland, 3, axis, axis, 1.0, 4);
  EXPECT_EQ(phase_diagram_csv(a), phase_diagram_csv(b));
}
