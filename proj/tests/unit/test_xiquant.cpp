#include <gtest/gtest.h>

#include <numbers>

#include "generators.hpp"
#include "oracles.hpp"
#include "slag/xiquant.hpp"

using namespace slag;

namespace {

constexpr double pi = std::numbers::pi;

double xi_lower_oracle(std::vector<double> a, int k) {
  std::sort(a.begin(), a.end());
  return a.front() * oracle::sigma_enum_excl(a, k - 1, 0) / oracle::sigma_enum(a, k);
}

double xi_upper_oracle(std::vector<double> a, int k) {
  std::sort(a.begin(), a.end());
  return a.back() * oracle::sigma_enum_excl(a, k - 1, a.size() - 1) / oracle::sigma_enum(a, k);
}

}  // namespace

TEST(EigenVector, SortsAndValidates) {
  const EigenVector a{3.0, 1.0, 2.0};
  EXPECT_EQ(a[0], 1.0);
  EXPECT_EQ(a[2], 3.0);
  EXPECT_THROW((EigenVector{1.0, 2.0}), DomainError);
  EXPECT_THROW((EigenVector{1.0, 0.0, 2.0}), DomainError);
  EXPECT_THROW((EigenVector{1.0, -1.0, 2.0}), DomainError);
}

TEST(Xi, Examples) {
  const std::vector<double> flat(4, 2.5);
  const std::vector<double> x{0.3, -1.0, 2.0, 0.7};
  for (int k = 1; k <= 4; ++k) EXPECT_NEAR(Xi_eval(flat, x, k), k / 4.0, 1e-15);
  const std::vector<double> a{0.5, 1.5, 4.0};
  const std::vector<double> en{0, 0, 1};
  const std::vector<double> e1{1, 0, 0};
  for (int k = 1; k <= 3; ++k) {
    EXPECT_NEAR(Xi_eval(a, en, k), xi_upper_oracle(a, k), 1e-14);
    EXPECT_NEAR(Xi_eval(a, e1, k), xi_lower_oracle(a, k), 1e-14);
  }
  EXPECT_EQ(Xi_eval(a, std::vector<double>{1, 1, 1}, 0), 0.0);
  EXPECT_THROW(Xi_eval(a, std::vector<double>{0, 0, 0}, 1), DomainError);
}

TEST(XiBounds, Examples) {
  const EigenVector a{1.0, 2.0, 3.0};
  const XiBounds b1 = xi_bounds(a, 1);
  EXPECT_NEAR(b1.lower, 1.0 / 6, 1e-15);
  EXPECT_NEAR(b1.upper, 0.5, 1e-15);
  EXPECT_EQ(xi_bounds(a, 3).lower, 1.0);
  EXPECT_EQ(xi_bounds(a, 3).upper, 1.0);
  EXPECT_EQ(xi_bounds(a, 0).lower, 0.0);
  EXPECT_EQ(xi_bounds(a, 0).upper, 0.0);
  EXPECT_THROW(xi_bounds(a, 4), DomainError);
}

TEST(XiBounds, SampledDirectionsStayInside) {
  gen::Rng rng(301);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial % 5;
    const auto raw = gen::real_vector(rng, n, 0.05, 8);
    const EigenVector a(raw);
    const std::vector<double> sorted(a.values().begin(), a.values().end());
    for (int k = 1; k <= n; ++k) {
      const XiBounds b = xi_bounds(a, k);
      EXPECT_NEAR(b.lower, xi_lower_oracle(raw, k), 1e-13);
      EXPECT_NEAR(b.upper, xi_upper_oracle(raw, k), 1e-13);
      for (int d = 0; d < 200; ++d) {
        const auto x = gen::real_vector(rng, n, -1, 1);
        const double xi = Xi_eval(sorted, x, k);
        EXPECT_GE(xi, b.lower - 1e-12);
        EXPECT_LE(xi, b.upper + 1e-12);
      }
    }
  }
}

TEST(XiBounds, ChainsAndPinch) {
  gen::Rng rng(302);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 5;
    const EigenVector a(gen::real_vector(rng, n, 0.1, 6));
    for (int k = 1; k <= n; ++k) {
      const XiBounds b = xi_bounds(a, k);
      const XiBounds prev = xi_bounds(a, k - 1);
      EXPECT_GE(b.lower, prev.lower - 1e-15);
      EXPECT_GE(b.upper, prev.upper - 1e-15);
      if (k < n) {
        EXPECT_LT(b.lower, static_cast<double>(k) / n);
        EXPECT_GT(b.upper, static_cast<double>(k) / n);
      }
    }
    EXPECT_LT(xi_bounds(a, n - 1).upper, 1.0);
  }
  for (int n = 3; n <= 7; ++n) {
    const EigenVector flat(std::vector<double>(static_cast<std::size_t>(n), 1.7));
    std::vector<double> bumped(static_cast<std::size_t>(n), 1.7);
    bumped[0] *= 1.0 + 1e-6;
    const EigenVector near(bumped);
    for (int k = 1; k < n; ++k) {
      EXPECT_NEAR(xi_bounds(flat, k).lower, static_cast<double>(k) / n, 1e-15);
      EXPECT_NEAR(xi_bounds(flat, k).upper, static_cast<double>(k) / n, 1e-15);
      EXPECT_LT(xi_bounds(near, k).lower, static_cast<double>(k) / n);
      EXPECT_GT(xi_bounds(near, k).upper, static_cast<double>(k) / n);
    }
  }
}

TEST(XiSelect, Examples) {
  const EigenVector a{0.4, 0.9, 2.0};
  const XiProfile prof = xi_select(PhaseSpec(3, pi / 2), a);
  EXPECT_EQ(prof.selected[0], prof.lower[0]);
  EXPECT_EQ(prof.selected[1], prof.lower[1]);
  EXPECT_EQ(prof.selected[2], prof.upper[2]);
  EXPECT_EQ(prof.selected[3], prof.lower[3]);
  for (int n = 3; n <= 6; ++n) {
    const PhaseSpec spec(n, (n - 1) * pi / 2);
    const XiProfile iso = xi_select(spec, isotropic_point(spec));
    for (int k = 0; k <= n; ++k) EXPECT_NEAR(iso.selected[static_cast<std::size_t>(k)], static_cast<double>(k) / n, 1e-14);
  }
}

TEST(XiSelect, SelectedDominatesAverage) {
  gen::Rng rng(303);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 4;
    const PhaseSpec spec(n, gen::supercritical_theta(rng, n));
    const EigenVector a(gen::level_set_point(rng, n, spec.theta()));
    const XiProfile prof = xi_select(spec, a);
    const auto c = coeffs_c(spec);
    for (int k = 0; k <= n; ++k) {
      const auto i = static_cast<std::size_t>(k);
      EXPECT_GE(prof.selected[i] * c[i], static_cast<double>(k) / n * c[i] - 1e-14);
    }
  }
}

TEST(MValue, Examples) {
  for (int n = 3; n <= 6; ++n)
    for (double theta : {(n - 2) * pi / 2, (n - 1) * pi / 2}) {
      const PhaseSpec spec(n, theta);
      EXPECT_NEAR(m_value(spec, isotropic_point(spec)), n, 1e-10);
    }
  const PhaseSpec s5(5, 5 * pi / 3);
  EXPECT_NEAR(m_value(s5, epsilon_family(pi / 12)), (16 + 4 * std::sqrt(3.0)) / 13, 1e-9);
  EXPECT_NEAR(m_value(s5, epsilon_family(pi / 12)), 1.7637079407904237, 1e-9);
  EXPECT_NEAR(m_value(s5, epsilon_family(0.0)), 5.0, 1e-10);
  EXPECT_THROW(m_value(s5, EigenVector{1, 1, 1, 1, 1}), DomainError);
  EXPECT_THROW(m_value(PhaseSpec(3, -1.0), EigenVector{1, 1, 1}), DomainError);
}

TEST(MValue, EpsilonFamilyMatchesClosedForm) {
  const PhaseSpec s5(5, 5 * pi / 3);
  for (int i = 0; i <= 96; ++i) {
    const double eps = (pi / 12) * i / 96;
    EXPECT_NEAR(m_value(s5, epsilon_family(eps)), oracle::m_eps_closed(eps), 1e-9) << eps;
  }
}

TEST(MValue, RangeOnLevelSet) {
  gen::Rng rng(304);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 3 + trial % 4;
    const double theta = trial % 5 == 0 ? (n - 2) * pi / 2 : gen::supercritical_theta(rng, n);
    const PhaseSpec spec(n, theta);
    const EigenVector a(gen::level_set_point(rng, n, theta));
    const double m = m_value(spec, a);
    EXPECT_GT(m, 0.0);
    EXPECT_LE(m, n * (1 + 1e-12));
    EXPECT_LT(m, n - 1e-9) << "non-isotropic sample attained m = n";
  }
}

TEST(MValue, PhasePiLowDimensions) {
  gen::Rng rng(305);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 2;
    const PhaseSpec spec(n, pi);
    const EigenVector a(gen::level_set_point(rng, n, pi));
    const double m = m_value(spec, a);
    const double expected = (1.0 - 3.0) / (xi_bounds(a, 1).lower - xi_bounds(a, 3).upper);
    EXPECT_NEAR(m, expected, 1e-10 * expected);
    EXPECT_GT(m, 2.0);
  }
}

TEST(Admissibility, Examples) {
  const PhaseSpec s5(5, 5 * pi / 3);
  const auto iso = isotropic_point(s5);
  const auto adm = admissibility(iso.values(), s5);
  EXPECT_EQ(adm.klass, AdmissibilityClass::in_A);
  EXPECT_NEAR(*adm.m, 5.0, 1e-10);

  const auto edge = epsilon_family(pi / 12);
  const auto low = admissibility(edge.values(), s5);
  EXPECT_EQ(low.klass, AdmissibilityClass::in_A0_only);
  EXPECT_NEAR(*low.m, 1.7637079407904237, 1e-9);

  const std::vector<double> mixed{1.0, -2.0, 3.0, 4.0, 5.0};
  EXPECT_EQ(admissibility(mixed, s5).klass, AdmissibilityClass::not_in_A0);
  EXPECT_FALSE(admissibility(mixed, s5).m.has_value());

  const std::vector<double> off{1, 1, 1, 1, 1};
  EXPECT_EQ(admissibility(off, s5).klass, AdmissibilityClass::not_in_A0);
}

TEST(Admissibility, NegativeConeReflects) {
  const PhaseSpec pos(3, pi);
  const auto a = complete_to_phase(std::vector<double>{1, 2}, pos);
  std::vector<double> neg;
  for (double v : a.values()) neg.push_back(-v);
  const auto adm = admissibility(neg, PhaseSpec(3, -pi));
  EXPECT_TRUE(adm.reflected);
  EXPECT_EQ(adm.klass, AdmissibilityClass::in_A);
  EXPECT_NEAR(*adm.m, m_value(pos, a), 1e-14);
  EXPECT_EQ(admissibility(neg, pos).klass, AdmissibilityClass::not_in_A0);
}

TEST(CompleteToPhase, Examples) {
  const auto a = complete_to_phase(std::vector<double>{1, 1}, PhaseSpec(3, 3 * pi / 4));
  for (double v : a.values()) EXPECT_NEAR(v, 1.0, 1e-15);
  const auto b = complete_to_phase(std::vector<double>{1, 2}, PhaseSpec(3, pi));
  EXPECT_NEAR(b[2], 3.0, 1e-14);
  EXPECT_THROW(complete_to_phase(std::vector<double>{1, 1}, PhaseSpec(3, pi / 2)), DomainError);
  EXPECT_THROW(complete_to_phase(std::vector<double>{1}, PhaseSpec(3, pi)), DomainError);
}

TEST(EpsilonFamily, Examples) {
  const auto a0 = epsilon_family(0.0);
  for (double v : a0.values()) EXPECT_NEAR(v, std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(phase_H(epsilon_family(0.1).values()), 5 * pi / 3, 1e-12);
  EXPECT_NEAR(epsilon_family(pi / 12)[0], 1 / std::sqrt(3.0), 1e-15);
  EXPECT_THROW(epsilon_family(0.3), DomainError);
  EXPECT_THROW(epsilon_family(-0.01), DomainError);
}

TEST(RandomLevelSetPoint, LandsOnLevelSet) {
  std::mt19937_64 rng(306);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 4;
    const PhaseSpec spec = trial % 2 ? PhaseSpec::critical(n) : PhaseSpec(n, (n - 0.5) * pi / 2);
    const EigenVector a = random_level_set_point(spec, rng);
    EXPECT_TRUE(on_level_set(spec, a.values()));
  }
  EXPECT_THROW(random_level_set_point(PhaseSpec(4, 0.5), rng), DomainError);
}
