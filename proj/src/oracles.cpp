#include "banditlan/oracles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "banditlan/bandit_engine.hpp"
#include "banditlan/lan_diagnostics.hpp"
#include "banditlan/policies.hpp"

namespace banditlan::oracles {

double fd_score(const ArmModel& arm, const ThetaVector& theta, double z, Eigen::Index j,
                double step) {
  const double up = log_density(arm, theta.with_component(j, theta[j] + step), z);
  const double down = log_density(arm, theta.with_component(j, theta[j] - step), z);
  return (up - down) / (2.0 * step);
}

double expectation(const ArmModel& arm, const ThetaVector& theta,
                   const std::function<double(double)>& g) {
  using boost::math::quadrature::gauss_kronrod;
  const double centre = mean(arm, theta);
  const double half_width = 60.0 * std::sqrt(arm.variance());
  auto integrand = [&](double z) { return g(z) * std::exp(log_density(arm, theta, z)); };
  // Split at the mean so the peak sits on a panel edge.
  const double left = gauss_kronrod<double, 61>::integrate(integrand, centre - half_width, centre, 20, 1e-13);
  const double right = gauss_kronrod<double, 61>::integrate(integrand, centre, centre + half_width, 20, 1e-13);
  return left + right;
}

Eigen::MatrixXd quadrature_fisher(const ArmModel& arm, const ThetaVector& theta) {
  const Eigen::Index p = theta.size();
  Eigen::MatrixXd out(p, p);
  for (Eigen::Index a = 0; a < p; ++a) {
    for (Eigen::Index b = a; b < p; ++b) {
      out(a, b) = expectation(arm, theta, [&](double z) {
        return fd_score(arm, theta, z, a, 1e-5) * fd_score(arm, theta, z, b, 1e-5);
      });
      out(b, a) = out(a, b);
    }
  }
  return out;
}

namespace {

std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(12);
  ss << x;
  return ss.str();
}

Check fisher_check() {
  const auto arms = location_model(ArmFamily::logistic_unit_var, 2);
  const ThetaVector theta{0.3, -0.2};
  double worst = 0.0;
  for (const auto& arm : arms) {
    worst = std::max(worst, (quadrature_fisher(arm, theta) - fisher(arm, theta)).cwiseAbs().maxCoeff());
  }
  const double quad = quadrature_fisher(arms[0], theta)(0, 0);
  const bool ok = worst < 1e-3 && std::abs(quad - std::numbers::pi * std::numbers::pi / 9.0) < 1e-3;
  return {"logistic Fisher vs quadrature", ok,
          "quadrature J[1,1] = " + fmt(quad) + ", max |diff| = " + fmt(worst)};
}

Check gaussian_fisher_check() {
  bool ok = true;
  for (double sigma2 : {0.25, 1.0, 4.0}) {
    const auto arm = ArmModel::gaussian(sigma2, 1);
    const ThetaVector theta{0.5, -1.0};
    const auto j = fisher(arm, theta);
    ok = ok && j(1, 1) == 1.0 / sigma2 && j(0, 0) == 0.0 && j(0, 1) == 0.0 && j(1, 0) == 0.0;
  }
  return {"gaussian Fisher equals 1/sigma^2", ok, ""};
}

Check score_grid_check() {
  double worst = 0.0;
  for (ArmFamily family : {ArmFamily::gaussian, ArmFamily::logistic_unit_var}) {
    for (const ThetaVector& theta : {ThetaVector{0.0, 0.0}, ThetaVector{1.5, -0.7}, ThetaVector{-3.0, 2.0}}) {
      for (const auto& arm : location_model(family, 2, 2.0)) {
        const double sd = std::sqrt(arm.variance());
        for (int i = 0; i <= 20; ++i) {
          const double z = mean(arm, theta) - 4.0 * sd + 0.4 * sd * i;
          const auto s = score(arm, theta, z);
          for (Eigen::Index j = 0; j < theta.size(); ++j) {
            worst = std::max(worst, std::abs(s[j] - fd_score(arm, theta, z, j)));
          }
        }
      }
    }
  }
  return {"score vs finite differences (21-point grid)", worst < 1e-5, "max |diff| = " + fmt(worst)};
}

Check decomposition_check() {
  double worst = 0.0;
  const std::vector<PolicySpec> policies = {ThompsonGaussian{}, Ucb1{}, Rct{{0.4, 0.6}},
                                            clipped(ThompsonGaussian{}, 0.1)};
  for (int i = 0; i < 20; ++i) {
    const auto family = i % 2 == 0 ? ArmFamily::logistic_unit_var : ArmFamily::gaussian;
    const ExperimentConfig cfg{ThetaVector{0.4, -0.1}, location_model(family, 2),
                               policies[static_cast<std::size_t>(i) % policies.size()], 500,
                               static_cast<std::uint64_t>(1000 + i)};
    const auto traj = run_trajectory(cfg);
    const auto regime = i % 3 == 0 ? RateRegime::linear : RateRegime::logarithmic;
    const auto rates = rate_matrix(cfg.theta, cfg.arms, cfg.horizon, regime);
    const Eigen::VectorXd h{{1.0 + 0.1 * i, -0.5}};
    const double exact = exact_log_lr(traj, cfg.theta, localize(cfg.theta, h, rates), cfg.arms);
    double sum = 0.0;
    for (int k = 0; k < 2; ++k) {
      const Eigen::VectorXd u = rates.arm_rate(k) * h.cwiseQuotient(rates.diag());
      sum += per_arm_lambda(traj, cfg.theta, cfg.arms, k, u, rates);
    }
    worst = std::max(worst, std::abs(exact - sum) / std::max(std::abs(exact), 1.0));
  }
  return {"log-likelihood ratio decomposition", worst < 1e-10, "max relative error = " + fmt(worst)};
}

}  // namespace

std::vector<Check> run_selftest() {
  return {fisher_check(), gaussian_fisher_check(), score_grid_check(), decomposition_check()};
}

}  // namespace banditlan::oracles
