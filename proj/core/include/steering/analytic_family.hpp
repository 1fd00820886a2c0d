#pragma once

#include <optional>
#include <string>
#include <vector>

#include "steering/quantum.hpp"
#include "steering/steering_core.hpp"

namespace steering {

/// Parameters of the analytic counterexample: x selects the steering
/// inequality (0 <= x <= 1/2), (m1, m2) the PPT state. The state family needs
/// m1^2 + m2^2 <= 1 (normalization of the psi_3 vectors) and
/// m1^2 + m2^2 + m1*m2 <= 1 (non-negative spectral weights).
struct FamilyParams {
  double x = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
};

/// Throws std::domain_error naming the violated inequality.
void check_family_params(const FamilyParams& p);

/// One-parameter functional family: Z13 = |q+><q+|, Z23 = |q-><q-|,
/// Z32 = Z33 = |s><s|, Z31 = (1-x)|t><t| + x|2><2| with
///   a = sqrt(2(1+x)/3), b = sqrt((1-2x)/4), c = sqrt(2(1-2x)/3)/sqrt(1-x),
///   |q+-> = [a, sqrt(1-a^2-b^2), -+b], |s> = [a, -sqrt(1-a^2), 0],
///   |t> = [c, -sqrt(1-c^2), 0].
/// Satisfies Z13+Z23+Z31 = diag(2, 1/2, 1/2) for every x in [0, 1/2].
SteeringFunctional functional_family(double x);

/// Two-parameter PPT-invariant state family
///   rho = l1 |psi1><psi1| + l2 |psi2><psi2| + l3 (|psi3><psi3| +
///         |psi3~><psi3~|)
/// with m3 = sqrt((1-m1^2-m2^2)/2) and the spectral weights fixed by the
/// PPT-invariance constraints.
DensityOperator state_family(double m1, double m2);

/// C at (x, m1, m2) under the fixed MUB measurements.
double violation(const FamilyParams& p);

struct CounterexampleReport {
  FamilyParams params;
  double epsilon = 0.0;
  // named margins, all after the epsilon-mixing
  std::vector<FunctionalCondition> functional_margins;  // nine positivity conditions
  double state_min_eig = 0.0;
  double ppt_min_eig = 0.0;
  double c_value = 0.0;
  bool verdict = false;  // bound entangled and steerable
};

/// Mixes Z~ = (1-eps) Z + eps 1 and rho~ = (1-eps) rho + eps 1/9, then reports
/// every PSD margin together with the violation; verdict requires C < 0 with
/// all margins >= -1e-9.
CounterexampleReport verify_counterexample(const FamilyParams& p, double epsilon);

struct ScanRow {
  double x = 0.0, m1 = 0.0, m2 = 0.0;
  double c = 0.0;
  bool valid = false;
};

struct ScanTable {
  std::vector<ScanRow> rows;                 // grid order: x-major, then m1, then m2
  std::optional<ScanRow> minimum;            // over valid rows
};

ScanTable scan(const std::vector<double>& x_grid, const std::vector<double>& m1_grid,
               const std::vector<double>& m2_grid, unsigned threads = 1);

}  // namespace steering
