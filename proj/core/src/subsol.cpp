#include "slag/subsol.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace slag {

namespace {

double frobenius(const Eigen::MatrixXd& A) { return A.norm(); }

void require_symmetric(const Eigen::MatrixXd& A, const char* what) {
  if (A.rows() != A.cols() || A.rows() == 0) throw DomainError(std::string(what) + ": matrix must be square");
  if (!A.allFinite()) throw DomainError(std::string(what) + ": matrix has non-finite entries");
  if ((A - A.transpose()).norm() > 1e-12 * frobenius(A)) throw DomainError(std::string(what) + ": matrix not symmetric");
}

std::vector<double> diagonal_entries(const SubsolutionSpec& spec) {
  require_symmetric(spec.A, "subsolution");
  const Eigen::MatrixXd off = spec.A - Eigen::MatrixXd(spec.A.diagonal().asDiagonal());
  if (off.norm() > 1e-14 * frobenius(spec.A))
    throw DomainError("subsolution: A must be diagonal (normalize the problem first)");
  if (!std::isfinite(spec.alpha)) throw DomainError("subsolution: alpha must be finite");
  validate_beta(spec.beta);
  if (!(spec.gamma >= 1.0) || !std::isfinite(spec.gamma)) throw DomainError("subsolution: gamma must be at least 1");
  std::vector<double> diag(static_cast<std::size_t>(spec.A.rows()));
  for (Eigen::Index i = 0; i < spec.A.rows(); ++i) diag[static_cast<std::size_t>(i)] = spec.A(i, i);
  return diag;
}

PhaseSpec phase_for(const SubsolutionSpec& spec) { return PhaseSpec(static_cast<int>(spec.A.rows()), spec.theta); }

}  // namespace

double r_ellipse(const Eigen::MatrixXd& A, const Eigen::VectorXd& x) {
  require_symmetric(A, "r_ellipse");
  if (x.size() != A.rows()) throw DomainError("r_ellipse: dimension mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) throw DomainError("r_ellipse: A is not positive definite");
  return std::sqrt(std::max(0.0, x.dot(A * x)));
}

Subsolution::Subsolution(const SubsolutionSpec& spec)
    : spec_(spec),
      diag_(diagonal_entries(spec)),
      phase_(phase_for(spec)),
      field_(phase_, EigenVector(diag_)),
      implicit_(field_) {
  if (!(field_.m() > 2.0)) throw DomainError("subsolution: requires m > 2");
}

double Subsolution::r_of(const Eigen::VectorXd& x) const {
  if (x.size() != n()) throw DomainError("subsolution: dimension mismatch");
  double acc = 0.0;
  for (int i = 0; i < n(); ++i) acc += diag_[static_cast<std::size_t>(i)] * x[i] * x[i];
  return std::sqrt(acc);
}

void Subsolution::require_outside(double r) const {
  if (!(r > spec_.gamma)) throw DomainError("subsolution: point lies in the closed ellipsoid E_gamma");
}

double Subsolution::excess(double r) const {
  // psi(., beta) starts at r = 1; on [1, gamma] it is only used through phi.
  return implicit_.excess(spec_.beta, r);
}

double Subsolution::psi_prime(double r) const {
  const double u = excess(r);
  if (u == 0.0) return 0.0;
  return u * field_.excess_rate(u) / r;
}

double Subsolution::phi_offset(double r) const {
  if (!(r >= spec_.gamma)) throw DomainError("phi: r must be at least gamma");
  return spec_.alpha - 0.5 * spec_.gamma * spec_.gamma + implicit_.excess_moment(spec_.beta, spec_.gamma, r);
}

double Subsolution::phi(double r) const { return phi_offset(r) + 0.5 * r * r; }

double Subsolution::asymptotic_offset() const {
  return mu_integral(implicit_, spec_.beta, spec_.gamma) + spec_.alpha - 0.5 * spec_.gamma * spec_.gamma;
}

double Subsolution::Phi(const Eigen::VectorXd& x) const { return phi(r_of(x)); }

Eigen::MatrixXd Subsolution::hessian(const Eigen::VectorXd& x) const {
  const double r = r_of(x);
  require_outside(r);
  const double u = excess(r);
  const double psi = 1.0 + u;
  const double s = (u == 0.0 ? 0.0 : u * field_.excess_rate(u)) / (r * r);
  Eigen::VectorXd q(n());
  for (int i = 0; i < n(); ++i) q[i] = diag_[static_cast<std::size_t>(i)] * x[i];
  Eigen::MatrixXd hess = s * q * q.transpose();
  for (int i = 0; i < n(); ++i) hess(i, i) += psi * diag_[static_cast<std::size_t>(i)];
  return hess;
}

double Subsolution::sigma_hessian(const Eigen::VectorXd& x, int k) const {
  if (k < 0 || k > n()) throw DomainError("sigma_hessian: k outside [0, n]");
  const double r = r_of(x);
  require_outside(r);
  const double u = excess(r);
  const double psi = 1.0 + u;
  const double s = (u == 0.0 ? 0.0 : u * field_.excess_rate(u)) / (r * r);
  std::vector<double> p(diag_.size());
  std::vector<double> q(diag_.size());
  for (std::size_t i = 0; i < diag_.size(); ++i) {
    p[i] = psi * diag_[i];
    q[i] = diag_[i] * x[static_cast<Eigen::Index>(i)];
  }
  return sigma_rank_one(std::span<const double>(p), std::span<const double>(q), s, k);
}

double Subsolution::sigma_hessian_xi_form(const Eigen::VectorXd& x, int k) const {
  if (k < 0 || k > n()) throw DomainError("sigma_hessian: k outside [0, n]");
  const double r = r_of(x);
  require_outside(r);
  const double psi = this->psi(r);
  const double sk = elem_sym(std::span<const double>(diag_), k);
  if (k == 0) return 1.0;
  const std::vector<double> xv(x.data(), x.data() + x.size());
  const double xi = Xi_eval(diag_, xv, k);
  return sk * std::pow(psi, k) + xi * sk * r * std::pow(psi, k - 1) * psi_prime(r);
}

double phi_eval(const SubsolutionSpec& spec, double r) { return Subsolution(spec).phi(r); }

Eigen::MatrixXd hessian_Phi(const SubsolutionSpec& spec, const Eigen::VectorXd& x) {
  return Subsolution(spec).hessian(x);
}

double sigma_hessian(const SubsolutionSpec& spec, const Eigen::VectorXd& x, int k) {
  return Subsolution(spec).sigma_hessian(x, k);
}

std::vector<Eigen::VectorXd> direction_set(int n, int count) {
  if (n < 1 || count < 0) throw DomainError("direction_set: bad arguments");
  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(static_cast<std::size_t>(2 * n + count));
  for (int i = 0; i < n; ++i)
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
      d[i] = sign;
      dirs.push_back(d);
    }

  std::vector<int> primes;
  for (int c = 2; static_cast<int>(primes.size()) < n; ++c)
    if (std::none_of(primes.begin(), primes.end(), [c](int p) { return c % p == 0; })) primes.push_back(c);
  const boost::math::normal_distribution<double> normal;
  for (int idx = 1; static_cast<int>(dirs.size()) < 2 * n + count; ++idx) {
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) {
      // Radical inverse of idx in base primes[i].
      double f = 1.0;
      double h = 0.0;
      for (int v = idx; v > 0; v /= primes[static_cast<std::size_t>(i)]) {
        f /= primes[static_cast<std::size_t>(i)];
        h += f * (v % primes[static_cast<std::size_t>(i)]);
      }
      d[i] = boost::math::quantile(normal, h);
    }
    const double len = d.norm();
    if (!(len > 1e-12)) continue;
    dirs.push_back(d / len);
  }
  return dirs;
}

VerificationReport verify_subsolution(const Subsolution& sub, const VerificationGrid& grid) {
  const SubsolutionSpec& spec = sub.spec();
  if (grid.shells < 1) throw DomainError("verify: need at least one shell");
  if (!(grid.r_max > spec.gamma)) throw DomainError("verify: grid touches the ellipsoid E_gamma");
  if (!(grid.tolerance >= 0.0)) throw DomainError("verify: tolerance must be non-negative");

  const int n = sub.n();
  const std::vector<Eigen::VectorXd> dirs = direction_set(n, grid.directions);
  const std::vector<double> c = coeffs_c(sub.phase());
  std::vector<double> inv_sqrt(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < inv_sqrt.size(); ++i) inv_sqrt[i] = 1.0 / std::sqrt(sub.diag()[i]);

  struct ShellResult {
    double min_h = std::numeric_limits<double>::infinity();
    double min_z = std::numeric_limits<double>::infinity();
    Eigen::VectorXd worst_h;
    Eigen::VectorXd worst_z;
  };
  std::vector<ShellResult> results(static_cast<std::size_t>(grid.shells));

  const double ratio = grid.r_max / spec.gamma;
  auto run_shell = [&](int shell) {
    const double r = shell + 1 == grid.shells
                         ? grid.r_max
                         : spec.gamma * std::pow(ratio, static_cast<double>(shell + 1) / grid.shells);
    const double u = sub.excess(r);
    const double psi = 1.0 + u;
    const double s = (u == 0.0 ? 0.0 : u * sub.field().excess_rate(u)) / (r * r);

    std::vector<double> p(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = psi * sub.diag()[i];
    const std::vector<double> sig = elem_sym_all(std::span<const double>(p));
    const std::vector<std::vector<double>> excl = elem_sym_excl_table(std::span<const double>(p));
    double z_base = 0.0;
    for (std::size_t k = 0; k < sig.size(); ++k) z_base += c[k] * sig[k];

    ShellResult res;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(n);
    std::vector<double> eig(static_cast<std::size_t>(n));
    for (const Eigen::VectorXd& d : dirs) {
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x[i] = r * d[i] * inv_sqrt[static_cast<std::size_t>(i)];
      Eigen::VectorXd q(n);
      for (int i = 0; i < n; ++i) q[i] = sub.diag()[static_cast<std::size_t>(i)] * x[i];

      Eigen::MatrixXd hess = s * q * q.transpose();
      for (int i = 0; i < n; ++i) hess(i, i) += p[static_cast<std::size_t>(i)];
      solver.compute(hess, Eigen::EigenvaluesOnly);
      for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = solver.eigenvalues()[i];
      const double h = phase_H(eig) - spec.theta;

      double z = z_base;
      for (std::size_t k = 1; k < sig.size(); ++k) {
        double upd = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) upd += excl[i][k - 1] * q[static_cast<Eigen::Index>(i)] * q[static_cast<Eigen::Index>(i)];
        z += c[k] * s * upd;
      }

      if (h < res.min_h) {
        res.min_h = h;
        res.worst_h = x;
      }
      if (z < res.min_z) {
        res.min_z = z;
        res.worst_z = x;
      }
    }
    results[static_cast<std::size_t>(shell)] = std::move(res);
  };

  unsigned workers = grid.threads != 0 ? grid.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(grid.shells));
  if (workers <= 1) {
    for (int shell = 0; shell < grid.shells; ++shell) run_shell(shell);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int shell; (shell = next.fetch_add(1)) < grid.shells;) {
          try {
            run_shell(shell);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
            return;
          }
        }
      });
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  VerificationReport report;
  report.tolerance = grid.tolerance;
  report.points = static_cast<std::size_t>(grid.shells) * dirs.size();
  report.min_H_minus_theta = std::numeric_limits<double>::infinity();
  report.min_Z = std::numeric_limits<double>::infinity();
  for (const ShellResult& res : results) {
    if (res.min_h < report.min_H_minus_theta) {
      report.min_H_minus_theta = res.min_h;
      report.worst_H_point = res.worst_h;
    }
    if (res.min_z < report.min_Z) {
      report.min_Z = res.min_z;
      report.worst_Z_point = res.worst_z;
    }
  }
  report.success = report.min_H_minus_theta >= -grid.tolerance && report.min_Z >= -grid.tolerance;
  return report;
}

VerificationReport verify_subsolution(const SubsolutionSpec& spec, const VerificationGrid& grid) {
  return verify_subsolution(Subsolution(spec), grid);
}

NormalizedProblem normalize_problem(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  require_symmetric(A, "normalize_problem");
  if (b.size() != A.rows()) throw DomainError("normalize_problem: b has the wrong length");
  const Eigen::Index n = A.rows();
  NormalizedProblem out;
  out.b = b;

  const Eigen::MatrixXd off = A - Eigen::MatrixXd(A.diagonal().asDiagonal());
  if (off.norm() == 0.0) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return A(i, i) < A(j, j); });
    out.lambda.resize(n);
    out.Q = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index src = order[static_cast<std::size_t>(i)];
      out.lambda[i] = A(src, src);
      out.Q(i, src) = 1.0;
    }
    return out;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
  if (solver.info() != Eigen::Success) throw NumericalError("normalize_problem: eigendecomposition failed");
  out.lambda = solver.eigenvalues();
  Eigen::MatrixXd V = solver.eigenvectors();
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index pivot = 0;
    V.col(j).cwiseAbs().maxCoeff(&pivot);
    if (V(pivot, j) < 0.0) V.col(j) = -V.col(j);
  }
  out.Q = V.transpose();
  return out;
}

}  // namespace slag
