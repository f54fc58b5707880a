#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "banditlan/arm_models.hpp"

// Reference computations that only touch log_density: finite differences and
// adaptive Gauss-Kronrod quadrature. They cross-check the closed-form scores
// and Fisher matrices and never call them.
namespace banditlan::oracles {

/// Centered finite difference of log_density in theta[j].
double fd_score(const ArmModel& arm, const ThetaVector& theta, double z, Eigen::Index j,
                double step = 1e-6);

/// E_theta[g(Z)] for the arm's law, integrating g(z) f(z | theta) over the
/// arm mean +- 60 standard deviations.
double expectation(const ArmModel& arm, const ThetaVector& theta,
                   const std::function<double(double)>& g);

/// E[s s'] with s the finite-difference score.
Eigen::MatrixXd quadrature_fisher(const ArmModel& arm, const ThetaVector& theta);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Oracle suite behind the `selftest` subcommand.
std::vector<Check> run_selftest();

}  // namespace banditlan::oracles
