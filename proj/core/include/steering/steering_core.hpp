#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "steering/quantum.hpp"
#include "steering/sdp.hpp"

namespace steering {

/// mu* above this value declares an assemblage steerable; one order above the
/// solver gap tolerance.
inline constexpr double kSteeringDecisionTol = 1e-7;

/// A linear steering functional for the m=2 settings, n=3 outcomes scenario:
/// five free 3x3 operators; the remaining four are the fixed combinations
///   Z11 = Z13+Z31-Z33,  Z21 = Z23+Z31-Z33,
///   Z12 = Z13+Z32-Z33,  Z22 = Z23+Z32-Z33.
/// A valid functional has all nine PSD and each free operator of unit trace;
/// use validate_functional to check.
struct SteeringFunctional {
  HermitianOperator z13, z23, z31, z32, z33;
  std::optional<double> family_x;  // set when built from the analytic family

  HermitianOperator z11() const { return z13 + z31 - z33; }
  HermitianOperator z21() const { return z23 + z31 - z33; }
  HermitianOperator z12() const { return z13 + z32 - z33; }
  HermitianOperator z22() const { return z23 + z32 - z33; }
};

struct FunctionalCondition {
  std::string name;
  double min_eigenvalue = 0.0;
};

struct FunctionalReport {
  bool pass = true;
  std::vector<FunctionalCondition> conditions;  // nine positivity margins
  std::vector<FunctionalCondition> traces;      // five |tr - 1| deviations
  double tolerance = 0.0;
};

/// Entanglement witness lifted from a steering functional and a fixed
/// measurement choice for Alice (Eq. W = sum_a A_{a|x} (x) Z_...).
struct Witness {
  HermitianOperator w;  // dimA*dimB
  SteeringFunctional functional;
  std::vector<MeasurementBasis> bases;
};

/// Bookkeeping for the dual-to-functional normalization: the returned
/// functional is scale * (G_{i|1} + shift_a[i] * 1) paired with
/// scale * (G_{j|2} + shift_b[j] * 1), which keeps the membership optimum
/// mu* and the functional value inter-convertible.
struct NormalizationMap {
  std::array<double, 3> shift_a{};
  std::array<double, 3> shift_b{};
  double scale = 1.0;
};

class MembershipResult {
 public:
  double mu_star = 0.0;
  bool steerable = false;
  std::vector<HermitianOperator> omegas;  // primal omega_{i1..im}, strategy-major order
  std::optional<SteeringFunctional> functional;  // present when steerable and m=2,n=3,d=3
  SdpSolution sdp;
  Assemblage assemblage;                       // the input ensemble
  std::vector<HermitianOperator> dual_ops;     // G_{a|x}, indexed (x-1)*n + (a-1)

  explicit MembershipResult(Assemblage e) : assemblage(std::move(e)) {}
};

/// Local-hidden-state membership: solves
///   minimize mu   s.t.  rho_{a|x} = sum_{vec i} delta_{i_x,a} omega_{vec i},
///                       omega_{vec i} + mu*1 >= 0,
/// so mu* <= tol iff a PSD omega-decomposition exists within tolerance.
/// Solver non-convergence is propagated in the result's sdp.status with the
/// best iterate; a malformed assemblage throws.
MembershipResult lhs_membership(const Assemblage& e, const SolverSettings& settings = {});

/// Maps the membership dual multipliers to a steering functional, shifts and
/// rescales until every free operator has unit trace and all nine positivity
/// conditions hold to 1e-8. Requires a steerable m=2, n=3, d=3 result.
SteeringFunctional extract_inequality(const MembershipResult& r);

struct ExtractionDetail {
  SteeringFunctional functional;
  NormalizationMap map;
  double predicted_value = 0.0;  // scale * (-mu* + shift corrections)
};

ExtractionDetail extract_inequality_detailed(const MembershipResult& r);

/// C(E) of Eq. (8): linear in the ensemble, non-negative whenever E admits a
/// local hidden state model and the functional is valid.
double evaluate(const SteeringFunctional& z, const Assemblage& e);

FunctionalReport validate_functional(const SteeringFunctional& z, double tol);

Witness build_witness(const SteeringFunctional& z, const MeasurementBasis& b1,
                      const MeasurementBasis& b2);

struct PptMinResult {
  double value = 0.0;
  DensityOperator state;
  SdpSolution sdp;
  double state_min_eig = 0.0;
  double ppt_min_eig = 0.0;
};

/// minimize tr(W rho) over rho >= 0, rho^{T_A} >= 0, tr rho = 1.
PptMinResult min_over_ppt(const Witness& w, std::size_t dimA, std::size_t dimB,
                          const SolverSettings& settings = {});

struct BestFunctionalResult {
  SteeringFunctional functional;
  double value = 0.0;
  SdpSolution sdp;
};

/// The best steering inequality for an ensemble under the paper's
/// normalization: minimizes C(E) over all valid functionals with unit-trace
/// free operators. The optimum is negative iff some normalized functional
/// witnesses steering of E.
BestFunctionalResult best_functional(const Assemblage& e, const SolverSettings& settings = {});

/// Builds the non-steerable ensemble of a local model: rho_{a|1} = sum_j
/// omega_{aj}, rho_{a|2} = sum_i omega_{ia}, normalized to unit total trace.
/// `omegas` holds nine PSD 3x3 operators, (i,j) at index (i-1)*3 + (j-1).
Assemblage assemblage_from_local_model(const std::vector<HermitianOperator>& omegas);

/// Minimum of tr(W sigma (x) tau) over `samples` Haar-random pure product
/// states; the statistical stand-in for nonnegativity on separable states.
double product_state_margin(const Witness& w, std::size_t dimA, std::size_t dimB,
                            std::size_t samples, std::uint64_t seed);

}  // namespace steering
