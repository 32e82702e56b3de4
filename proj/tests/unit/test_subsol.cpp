#include <gtest/gtest.h>

#include <numbers>

#include "generators.hpp"
#include "oracles.hpp"
#include "slag/subsol.hpp"

using namespace slag;

namespace {

constexpr double pi = std::numbers::pi;

SubsolutionSpec closed_spec(double beta, double gamma = 1.0, double alpha = 0.0) {
  SubsolutionSpec s;
  s.alpha = alpha;
  s.beta = beta;
  s.gamma = gamma;
  s.A = Eigen::MatrixXd::Identity(3, 3) / std::sqrt(3.0);
  s.theta = pi / 2;
  return s;
}

// Random admissible diagonal spec with entries in shuffled coordinate order.
SubsolutionSpec random_spec(gen::Rng& rng) {
  for (;;) {
    const int n = static_cast<int>(rng.integer(3, 6));
    const double theta = gen::supercritical_theta(rng, n);
    std::vector<double> a = gen::level_set_point(rng, n, theta, 0.08);
    if (m_value(PhaseSpec(n, theta), EigenVector(a)) <= 2.2) continue;
    std::shuffle(a.begin(), a.end(), rng.engine());
    SubsolutionSpec s;
    s.beta = rng.uniform(1.0, 6.0);
    s.gamma = rng.uniform(1.0, 2.5);
    s.alpha = rng.uniform(-1.0, 1.0);
    s.A = Eigen::Map<Eigen::VectorXd>(a.data(), n).asDiagonal();
    s.theta = theta;
    return s;
  }
}

Eigen::VectorXd point_at(gen::Rng& rng, const Eigen::MatrixXd& A, double r) {
  Eigen::VectorXd x(A.rows());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.uniform(-1, 1);
  return x * (r / std::sqrt(x.dot(A * x)));
}

Eigen::MatrixXd random_orthogonal(gen::Rng& rng, int n) {
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = rng.uniform(-1, 1);
  return Eigen::HouseholderQR<Eigen::MatrixXd>(M).householderQ();
}

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& M) {
  auto v = oracle::eigenvalues(M);
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(REllipse, Examples) {
  EXPECT_DOUBLE_EQ(r_ellipse(Eigen::Matrix2d::Identity(), Eigen::Vector2d(3, 4)), 5.0);
  Eigen::Matrix2d A;
  A << 4, 0, 0, 1;
  EXPECT_DOUBLE_EQ(r_ellipse(A, Eigen::Vector2d(1, 0)), 2.0);
  EXPECT_EQ(r_ellipse(A, Eigen::Vector2d(0, 0)), 0.0);
  Eigen::Matrix2d bad;
  bad << 1, 0, 0, -1;
  EXPECT_THROW(r_ellipse(bad, Eigen::Vector2d(1, 1)), DomainError);
  bad << 1, 0.5, 0, 1;
  EXPECT_THROW(r_ellipse(bad, Eigen::Vector2d(1, 1)), DomainError);
}

TEST(REllipse, Homogeneous) {
  gen::Rng rng(501);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 4;
    const Eigen::MatrixXd Q = random_orthogonal(rng, n);
    Eigen::VectorXd lam(n);
    for (int i = 0; i < n; ++i) lam(i) = rng.uniform(0.2, 5);
    const Eigen::MatrixXd A = Q.transpose() * lam.asDiagonal() * Q;
    const Eigen::VectorXd x = Eigen::VectorXd::Random(n);
    const double t = rng.uniform(-4, 4);
    EXPECT_NEAR(r_ellipse(A, t * x), std::abs(t) * r_ellipse(A, x), 1e-12 * (1 + std::abs(t)));
  }
}

TEST(Subsolution, Validation) {
  SubsolutionSpec s = closed_spec(2.0);
  s.gamma = 0;
  EXPECT_THROW(Subsolution{s}, DomainError);
  s = closed_spec(0.5);
  EXPECT_THROW(Subsolution{s}, DomainError);
  s = closed_spec(2.0);
  s.A(0, 1) = s.A(1, 0) = 0.1;
  EXPECT_THROW(Subsolution{s}, DomainError);
  s = closed_spec(2.0);
  s.theta = 1.0;
  EXPECT_THROW(Subsolution{s}, DomainError);
  SubsolutionSpec eps;
  eps.beta = 2;
  const EigenVector a = epsilon_family(pi / 12);
  eps.A = Eigen::Map<const Eigen::VectorXd>(a.values().data(), 5).asDiagonal();
  eps.theta = 5 * pi / 3;
  EXPECT_THROW(Subsolution{eps}, DomainError);
}

TEST(Phi, BoundaryAndFlatCase) {
  const Subsolution sub(closed_spec(3.0, 1.5, 0.7));
  EXPECT_NEAR(sub.phi(1.5), 0.7, 1e-15);
  const Subsolution flat(closed_spec(1.0, 2.0, -1.0));
  for (double r : {2.0, 3.0, 17.0, 400.0}) {
    EXPECT_NEAR(flat.phi(r), -1.0 + (r * r - 4.0) / 2, 1e-12 * r * r);
    EXPECT_EQ(flat.psi(r), 1.0);
  }
  EXPECT_NEAR(phi_eval(closed_spec(1.0), 5.0), 12.0, 1e-12);
  EXPECT_THROW(sub.phi(1.0), DomainError);
}

TEST(Phi, ClosedFormQuadrature) {
  const Subsolution sub(closed_spec(2.0));
  // phi(r) - r^2/2 + 1/2 = int_1^r tau (psi - 1).
  for (double r : {2.0, 10.0, 100.0}) {
    const double want = oracle::mu_closed(2.0, 1.0) - oracle::mu_closed(2.0, r);
    EXPECT_NEAR(sub.phi_offset(r) + 0.5, want, 1e-8 * want) << r;
  }
  EXPECT_NEAR(sub.asymptotic_offset(), 1.331739572167052 - 0.5, 1e-6);
}

TEST(Phi, ApproachesQuadraticWithOffset) {
  gen::Rng rng(502);
  for (int trial = 0; trial < 10; ++trial) {
    const Subsolution sub(random_spec(rng));
    const double c = sub.asymptotic_offset();
    const double g = sub.spec().gamma;
    double prev = sub.phi_offset(g);
    for (double r : {2.0, 10.0, 100.0, 1e3}) {
      const double off = sub.phi_offset(r * g);
      EXPECT_GE(off, prev - 1e-12);
      EXPECT_LE(off, c + 1e-9);
      prev = off;
    }
    // The remaining gap shrinks by 10^(m-2) per decade.
    const double ratio = (c - sub.phi_offset(1e2 * g)) / (c - sub.phi_offset(1e3 * g));
    EXPECT_NEAR(std::log10(ratio), sub.m() - 2, 0.05 * (sub.m() - 2));
  }
}

TEST(Phi, DominatedByQuadraticPlusOffset) {
  gen::Rng rng(503);
  for (int trial = 0; trial < 10; ++trial) {
    const Subsolution sub(random_spec(rng));
    const Eigen::MatrixXd& A = sub.spec().A;
    for (int i = 0; i < 40; ++i) {
      const double r = sub.spec().gamma * std::pow(10.0, rng.uniform(0.0, 3.0));
      const Eigen::VectorXd x = point_at(rng, A, r);
      EXPECT_LE(sub.Phi(x), 0.5 * x.dot(A * x) + sub.asymptotic_offset() + 1e-9 * r * r);
    }
  }
}

TEST(Phi, OffsetGapDecaysAtPredictedRate) {
  gen::Rng rng(504);
  for (int trial = 0; trial < 8; ++trial) {
    const Subsolution sub(random_spec(rng));
    const double c = sub.asymptotic_offset();
    const double g = sub.spec().gamma;
    std::vector<double> lx;
    std::vector<double> ly;
    for (double r : {1e2, 1e3, 1e4}) {
      lx.push_back(std::log(r * g));
      ly.push_back(std::log(c - sub.phi_offset(r * g)));
    }
    const double slope = oracle::fit_line(lx, ly).first;
    EXPECT_NEAR(slope, 2 - sub.m(), 0.05 * std::abs(2 - sub.m()));
  }
}

TEST(Hessian, FlatCaseIsDiagonal) {
  gen::Rng rng(505);
  for (int trial = 0; trial < 5; ++trial) {
    SubsolutionSpec s = random_spec(rng);
    s.beta = 1.0;
    const Subsolution sub(s);
    const Eigen::VectorXd x = point_at(rng, s.A, 4.0 * s.gamma);
    EXPECT_LT((sub.hessian(x) - s.A).norm(), 1e-15);
    EXPECT_LT((hessian_Phi(s, x) - s.A).norm(), 1e-15);
    const std::vector<double> a(sub.diag().begin(), sub.diag().end());
    for (int k = 0; k <= sub.n(); ++k)
      EXPECT_NEAR(sub.sigma_hessian(x, k), oracle::sigma_enum(a, k), 1e-13 * std::max(1.0, oracle::sigma_enum(a, k)));
  }
}

TEST(Hessian, SymmetricAndTendsToA) {
  gen::Rng rng(506);
  for (int trial = 0; trial < 10; ++trial) {
    const Subsolution sub(random_spec(rng));
    const Eigen::MatrixXd& A = sub.spec().A;
    double prev = std::numeric_limits<double>::infinity();
    for (double r : {1.5, 10.0, 100.0, 1e3}) {
      const Eigen::MatrixXd H = sub.hessian(point_at(rng, A, r * sub.spec().gamma));
      EXPECT_LE((H - H.transpose()).norm(), 1e-15 * H.norm());
      const double dist = (H - A).norm();
      EXPECT_LT(dist, prev);
      prev = dist;
    }
    EXPECT_LT(prev, 1e-3);
  }
}

TEST(Hessian, InsideEllipsoidRejected) {
  const Subsolution sub(closed_spec(2.0, 2.0));
  const Eigen::Vector3d x(0.1, 0.1, 0.1);
  EXPECT_THROW(sub.hessian(x), DomainError);
  EXPECT_THROW(sub.sigma_hessian(x, 2), DomainError);
}

TEST(Hessian, MatchesFiniteDifferences) {
  gen::Rng rng(507);
  for (int trial = 0; trial < 5; ++trial) {
    const Subsolution sub(random_spec(rng));
    const Eigen::VectorXd x = point_at(rng, sub.spec().A, 3 * sub.spec().gamma);
    const int n = sub.n();
    const double h = 1e-4;
    const Eigen::MatrixXd H = sub.hessian(x);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Eigen::VectorXd ei = Eigen::VectorXd::Unit(n, i) * h;
        const Eigen::VectorXd ej = Eigen::VectorXd::Unit(n, j) * h;
        const double fd = (sub.Phi(x + ei + ej) - sub.Phi(x + ei - ej) - sub.Phi(x - ei + ej) + sub.Phi(x - ei - ej)) /
                          (4 * h * h);
        EXPECT_NEAR(H(i, j), fd, 1e-5 * (1 + std::abs(H(i, j))));
      }
  }
}

TEST(SigmaHessian, MatchesDenseSpectrum) {
  gen::Rng rng(508);
  for (int trial = 0; trial < 20; ++trial) {
    const SubsolutionSpec s = random_spec(rng);
    const Subsolution sub(s);
    for (int i = 0; i < 10; ++i) {
      const double r = s.gamma * std::pow(10.0, rng.uniform(0.01, 2.0));
      const Eigen::VectorXd x = point_at(rng, s.A, r);
      const Eigen::MatrixXd H = sub.hessian(x);
      auto mag = oracle::eigenvalues(H);
      for (double& v : mag) v = std::abs(v);
      for (int k = 1; k <= sub.n(); ++k) {
        const double scale = std::max(1.0, oracle::sigma_enum(mag, k));
        const double want = oracle::sigma_of_matrix(H, k);
        EXPECT_NEAR(sub.sigma_hessian(x, k), want, 1e-10 * scale);
        EXPECT_NEAR(sigma_hessian(s, x, k), want, 1e-10 * scale);
        EXPECT_NEAR(sub.sigma_hessian_xi_form(x, k), sub.sigma_hessian(x, k), 1e-11 * scale);
      }
    }
  }
}

TEST(SigmaHessian, EigenvalueExcessDecaysLikeRToMinusM) {
  gen::Rng rng(509);
  for (int trial = 0; trial < 6; ++trial) {
    const Subsolution sub(random_spec(rng));
    const Eigen::VectorXd dir = point_at(rng, sub.spec().A, 1.0);
    std::vector<double> lx;
    std::vector<double> ly;
    for (double r : {1e2, 3e2, 1e3, 3e3}) {
      const Eigen::MatrixXd H = sub.hessian(dir * r);
      const auto lam = sorted_eigenvalues(H);
      const auto a = sorted_eigenvalues(sub.spec().A);
      double gap = 0;
      for (std::size_t i = 0; i < lam.size(); ++i) gap = std::max(gap, std::abs(lam[i] - a[i]));
      lx.push_back(std::log(r));
      ly.push_back(std::log(gap));
    }
    EXPECT_NEAR(-oracle::fit_line(lx, ly).first, sub.m(), 0.10 * sub.m());
  }
}

TEST(Verify, FlatCasePassesAtEquality) {
  SubsolutionSpec s = closed_spec(1.0);
  VerificationGrid grid;
  grid.shells = 20;
  grid.directions = 20;
  const VerificationReport rep = verify_subsolution(s, grid);
  EXPECT_TRUE(rep.success);
  EXPECT_EQ(rep.points, 20u * (20 + 6));
  EXPECT_NEAR(rep.min_H_minus_theta, 0.0, 1e-12);
}

TEST(Verify, IsotropicAndRandomPass) {
  gen::Rng rng(510);
  SubsolutionSpec iso;
  iso.beta = 3;
  iso.theta = 3 * pi / 2;
  iso.A = Eigen::MatrixXd::Identity(4, 4) * std::tan(3 * pi / 8);
  VerificationGrid grid;
  grid.shells = 30;
  grid.directions = 40;
  EXPECT_TRUE(verify_subsolution(iso, grid).success);
  for (int trial = 0; trial < 5; ++trial) {
    const VerificationReport rep = verify_subsolution(random_spec(rng), grid);
    EXPECT_TRUE(rep.success);
    EXPECT_GE(rep.min_H_minus_theta, -1e-9);
    EXPECT_GE(rep.min_Z, -1e-9);
  }
}

TEST(Verify, Deterministic) {
  const SubsolutionSpec s = closed_spec(2.0);
  VerificationGrid grid;
  grid.shells = 15;
  grid.directions = 10;
  grid.threads = 1;
  const VerificationReport one = verify_subsolution(s, grid);
  grid.threads = 3;
  const VerificationReport three = verify_subsolution(s, grid);
  EXPECT_EQ(one.min_H_minus_theta, three.min_H_minus_theta);
  EXPECT_EQ(one.min_Z, three.min_Z);
}

TEST(DirectionSet, UnitVectors) {
  const auto dirs = direction_set(4, 30);
  ASSERT_EQ(dirs.size(), 38u);
  for (const auto& d : dirs) EXPECT_NEAR(d.norm(), 1.0, 1e-15);
  EXPECT_EQ(dirs[0], Eigen::Vector4d(1, 0, 0, 0));
}

TEST(Normalize, DiagonalAscendingIsIdentity) {
  const Eigen::MatrixXd A = Eigen::Vector3d(0.5, 1.0, 2.0).asDiagonal();
  const NormalizedProblem p = normalize_problem(A, Eigen::Vector3d(1, 2, 3));
  EXPECT_EQ(p.Q, Eigen::MatrixXd::Identity(3, 3));
  EXPECT_EQ(p.lambda, Eigen::Vector3d(0.5, 1.0, 2.0));
  EXPECT_EQ(p.boundary_shift(Eigen::Vector3d(1, 1, 1)), 6.0);
  Eigen::MatrixXd bad = A;
  bad(0, 2) = 0.3;
  EXPECT_THROW(normalize_problem(bad, Eigen::Vector3d::Zero()), DomainError);
}

TEST(Normalize, DiagonalUnsortedIsPermutation) {
  const Eigen::MatrixXd A = Eigen::Vector3d(2.0, 0.5, 1.0).asDiagonal();
  const NormalizedProblem p = normalize_problem(A, Eigen::Vector3d::Zero());
  EXPECT_EQ(p.lambda, Eigen::Vector3d(0.5, 1.0, 2.0));
  EXPECT_EQ(p.Q.transpose() * p.Lambda() * p.Q, A);
}

TEST(Normalize, ReconstructsRandomMatrices) {
  gen::Rng rng(511);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 5;
    const Eigen::MatrixXd Q0 = random_orthogonal(rng, n);
    Eigen::VectorXd lam(n);
    for (int i = 0; i < n; ++i) lam(i) = rng.uniform(0.1, 10);
    const Eigen::MatrixXd A = Q0.transpose() * lam.asDiagonal() * Q0;
    const NormalizedProblem p = normalize_problem(A, Eigen::VectorXd::Zero(n));
    EXPECT_LT((p.Q.transpose() * p.Lambda() * p.Q - A).norm(), 1e-12 * A.norm());
    EXPECT_LT((p.Q * p.Q.transpose() - Eigen::MatrixXd::Identity(n, n)).norm(), 1e-12);
    std::sort(lam.data(), lam.data() + n);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(p.lambda(i), lam(i), 1e-12 * lam(n - 1));
    const Eigen::VectorXd x = Eigen::VectorXd::Random(n);
    EXPECT_NEAR((p.from_normalized(p.to_normalized(x)) - x).norm(), 0.0, 1e-14);
  }
}

TEST(Normalize, HessianSpectrumIsRotationInvariant) {
  gen::Rng rng(512);
  for (int trial = 0; trial < 8; ++trial) {
    SubsolutionSpec s = random_spec(rng);
    const int n = static_cast<int>(s.A.rows());
    const Eigen::MatrixXd Q0 = random_orthogonal(rng, n);
    const Eigen::MatrixXd A = Q0.transpose() * s.A * Q0;
    const NormalizedProblem p = normalize_problem(A, Eigen::VectorXd::Zero(n));
    s.A = p.Lambda();
    const Subsolution sub(s);
    for (int i = 0; i < 5; ++i) {
      const Eigen::VectorXd x = point_at(rng, A, s.gamma * rng.uniform(1.1, 20));
      const double r = r_ellipse(A, x);
      const Eigen::VectorXd Ax = A * x;
      // Hessian of phi(r_A) for a general A.
      const Eigen::MatrixXd H = sub.psi(r) * A + (sub.psi_prime(r) / r) * Ax * Ax.transpose();
      const auto want = sorted_eigenvalues(H);
      const auto got = sorted_eigenvalues(sub.hessian(p.to_normalized(x)));
      for (int j = 0; j < n; ++j) EXPECT_NEAR(got[static_cast<std::size_t>(j)], want[static_cast<std::size_t>(j)], 1e-10 * (1 + std::abs(want[static_cast<std::size_t>(j)])));
      EXPECT_NEAR(sub.Phi(p.to_normalized(x)), sub.phi(r), 1e-10 * (1 + std::abs(sub.phi(r))));
    }
  }
}
