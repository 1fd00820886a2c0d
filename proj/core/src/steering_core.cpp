#include "steering/steering_core.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace steering {

namespace {

// Hermitian basis of the d x d operator space: diagonal units, then
// symmetric and antisymmetric off-diagonal combinations. d*d elements.
std::vector<HermitianOperator> hermitian_basis(std::size_t d) {
  std::vector<HermitianOperator> basis;
  basis.reserve(d * d);
  for (std::size_t r = 0; r < d; ++r) {
    ComplexMatrix m(d, d);
    m(r, r) = 1.0;
    basis.push_back(herm_unchecked(std::move(m)));
  }
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = r + 1; c < d; ++c) {
      ComplexMatrix s(d, d);
      s(r, c) = 1.0;
      s(c, r) = 1.0;
      basis.push_back(herm_unchecked(std::move(s)));
      ComplexMatrix a(d, d);
      a(r, c) = Complex(0.0, 1.0);
      a(c, r) = Complex(0.0, -1.0);
      basis.push_back(herm_unchecked(std::move(a)));
    }
  }
  return basis;
}

HermitianOperator combine(const std::vector<HermitianOperator>& basis,
                          const std::vector<double>& coeffs) {
  HermitianOperator out = HermitianOperator::zero(basis.front().dim());
  for (std::size_t t = 0; t < basis.size(); ++t)
    if (coeffs[t] != 0.0) out += coeffs[t] * basis[t];
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

MembershipResult lhs_membership(const Assemblage& e, const SolverSettings& settings) {
  const auto report = validate_assemblage(e, 1e-7);
  if (!report.pass) {
    std::string what = "lhs_membership: malformed assemblage:";
    for (const auto& issue : report.issues) what += " [" + issue.what + "]";
    throw std::invalid_argument(what);
  }
  const std::size_t m = e.settings();
  const std::size_t n = e.outcomes();
  const std::size_t d = e.dim();
  double blocks_d = std::pow(static_cast<double>(n), static_cast<double>(m));
  if (blocks_d > 128.0)
    throw std::invalid_argument("lhs_membership: n^m exceeds the supported block count");
  const std::size_t nblocks = static_cast<std::size_t>(blocks_d);

  // strategy index vec i -> block, setting-1-major
  std::vector<std::size_t> stride(m);
  stride[m - 1] = 1;
  for (std::size_t k = m - 1; k-- > 0;) stride[k] = stride[k + 1] * n;

  SdpProblem prob;
  prob.blocks.reserve(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b)
    prob.blocks.push_back({"omega" + std::to_string(b), d});
  prob.scalar_vars = {"mu"};
  prob.objective.scalar_coeffs = {1.0};

  const auto basis = hermitian_basis(d);
  const double shift = std::pow(static_cast<double>(n), static_cast<double>(m - 1));

  // kept constraint groups: all outcomes for setting 1, first n-1 outcomes for
  // the rest (the last group per extra setting is implied by non-signalling)
  struct Group {
    std::size_t a, x, first_row;
  };
  std::vector<Group> groups;
  for (std::size_t x = 1; x <= m; ++x) {
    const std::size_t amax = (x == 1) ? n : n - 1;
    for (std::size_t a = 1; a <= amax; ++a) {
      groups.push_back({a, x, prob.constraints.size()});
      for (const auto& et : basis) {
        SdpConstraint con;
        for (std::size_t b = 0; b < nblocks; ++b) {
          const std::size_t digit = (b / stride[x - 1]) % n + 1;
          if (digit == a) con.coeffs.push_back({b, et});
        }
        con.scalar_coeffs = {-shift * et.trace()};
        con.rhs = real_inner(et, e.member(a, x));
        prob.constraints.push_back(std::move(con));
      }
    }
  }

  SdpSolution sol = solve(prob, settings);

  MembershipResult res(e);
  res.sdp = std::move(sol);
  res.mu_star = res.sdp.primal_value;
  res.steerable = res.mu_star > kSteeringDecisionTol;
  const double mu = res.sdp.scalar_values.empty() ? 0.0 : res.sdp.scalar_values[0];
  res.omegas.reserve(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b)
    res.omegas.push_back(res.sdp.primal_blocks[b] - mu * HermitianOperator::identity(d));

  res.dual_ops.assign(m * n, HermitianOperator::zero(d));
  for (const auto& g : groups) {
    std::vector<double> coeffs(basis.size());
    for (std::size_t t = 0; t < basis.size(); ++t)
      coeffs[t] = -res.sdp.dual_multipliers[g.first_row + t];
    res.dual_ops[(g.x - 1) * n + (g.a - 1)] = combine(basis, coeffs);
  }

  if (res.steerable && m == 2 && n == 3 && d == 3 && res.sdp.status == SolveStatus::optimal) {
    res.functional = extract_inequality_detailed(res).functional;
  }
  return res;
}

ExtractionDetail extract_inequality_detailed(const MembershipResult& r) {
  const auto& e = r.assemblage;
  if (e.settings() != 2 || e.outcomes() != 3 || e.dim() != 3)
    throw std::invalid_argument("extract_inequality: defined for m=2, n=3, d=3 only");
  if (r.mu_star <= kSteeringDecisionTol)
    throw std::invalid_argument("extract_inequality: assemblage is not steerable");
  if (r.sdp.status != SolveStatus::optimal)
    throw std::runtime_error("extract_inequality: membership SDP did not reach optimality");

  const HermitianOperator eye = HermitianOperator::identity(3);
  std::array<HermitianOperator, 3> A{r.dual_ops[0], r.dual_ops[1], r.dual_ops[2]};
  std::array<HermitianOperator, 3> B{r.dual_ops[3], r.dual_ops[4], r.dual_ops[5]};
  std::array<double, 3> pa{0.0, 0.0, 0.0}, qb{0.0, 0.0, 0.0};
  double scale = 1.0;

  auto z_of = [&](std::size_t i, std::size_t j) { return A[i] + B[j]; };
  auto min_margin = [&]() {
    double mm = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) mm = std::min(mm, min_eigenvalue(z_of(i, j)));
    return mm;
  };

  for (int pass = 0; pass < 4; ++pass) {
    // uniform PSD repair on all nine, absorbed into the A side
    const double gamma = std::max(0.0, -min_margin());
    if (gamma > 0.0) {
      for (std::size_t i = 0; i < 3; ++i) {
        A[i] += gamma * eye;
        pa[i] += gamma / scale;
      }
    }
    // equalize traces within each side, then rescale to unit trace
    double abar = 0.0, bbar = 0.0;
    for (std::size_t i = 0; i < 3; ++i) abar += A[i].trace() / 3.0;
    for (std::size_t j = 0; j < 3; ++j) bbar += B[j].trace() / 3.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double c = (abar - A[i].trace()) / 3.0;
      A[i] += c * eye;
      pa[i] += c / scale;
    }
    for (std::size_t j = 0; j < 3; ++j) {
      const double c = (bbar - B[j].trace()) / 3.0;
      B[j] += c * eye;
      qb[j] += c / scale;
    }
    const double total = abar + bbar;
    if (total <= 1e-12)
      throw std::runtime_error("extract_inequality: degenerate dual certificate (trace <= 0)");
    const double s = 1.0 / total;
    for (auto& op : A) op *= s;
    for (auto& op : B) op *= s;
    scale *= s;
    if (min_margin() >= -1e-8) break;
  }
  if (min_margin() < -1e-8)
    throw std::runtime_error(
        "extract_inequality: dual certificate fails positivity beyond repair tolerance (margin " +
        std::to_string(min_margin()) + ")");

  ExtractionDetail out;
  out.functional =
      SteeringFunctional{z_of(0, 2), z_of(1, 2), z_of(2, 0), z_of(2, 1), z_of(2, 2), std::nullopt};
  out.map.shift_a = pa;
  out.map.shift_b = qb;
  out.map.scale = scale;
  double corr = 0.0;
  for (std::size_t i = 0; i < 3; ++i) corr += pa[i] * e.probability(i + 1, 1);
  for (std::size_t j = 0; j < 3; ++j) corr += qb[j] * e.probability(j + 1, 2);
  out.predicted_value = scale * (r.sdp.dual_value * -1.0 + corr);

  const double val = evaluate(out.functional, e);
  if (!(val < 0.0))
    throw std::runtime_error("extract_inequality: normalized functional lost the violation (C = " +
                             std::to_string(val) + ")");
  return out;
}

SteeringFunctional extract_inequality(const MembershipResult& r) {
  return extract_inequality_detailed(r).functional;
}

double evaluate(const SteeringFunctional& z, const Assemblage& e) {
  if (e.settings() != 2 || e.outcomes() != 3 || e.dim() != 3)
    throw std::invalid_argument("evaluate: functional is defined for m=2, n=3, d=3");
  if (z.z13.dim() != 3) throw std::invalid_argument("evaluate: functional dimension mismatch");
  const HermitianOperator rho = e.marginal(1);
  const HermitianOperator rest =
      rho - e.member(1, 1) - e.member(2, 1) - e.member(1, 2) - e.member(2, 2);
  return real_inner(z.z13, e.member(1, 1)) + real_inner(z.z23, e.member(2, 1)) +
         real_inner(z.z31, e.member(1, 2)) + real_inner(z.z32, e.member(2, 2)) +
         real_inner(z.z33, rest);
}

FunctionalReport validate_functional(const SteeringFunctional& z, double tol) {
  FunctionalReport rep;
  rep.tolerance = tol;
  const std::pair<std::string, HermitianOperator> conds[] = {
      {"Z13", z.z13}, {"Z23", z.z23}, {"Z31", z.z31},   {"Z32", z.z32},   {"Z33", z.z33},
      {"Z11", z.z11()}, {"Z21", z.z21()}, {"Z12", z.z12()}, {"Z22", z.z22()}};
  for (const auto& [name, op] : conds) {
    const double me = min_eigenvalue(op);
    rep.conditions.push_back({name, me});
    if (me < -tol) rep.pass = false;
  }
  const std::pair<std::string, const HermitianOperator*> frees[] = {
      {"Z13", &z.z13}, {"Z23", &z.z23}, {"Z31", &z.z31}, {"Z32", &z.z32}, {"Z33", &z.z33}};
  for (const auto& [name, op] : frees) {
    const double dev = std::abs(op->trace() - 1.0);
    rep.traces.push_back({"tr(" + name + ")", dev});
    if (dev > 1e-9) rep.pass = false;
  }
  return rep;
}

Witness build_witness(const SteeringFunctional& z, const MeasurementBasis& b1,
                      const MeasurementBasis& b2) {
  if (b1.dim() != 3 || b2.dim() != 3 || b1.outcomes() != 3 || b2.outcomes() != 3)
    throw std::invalid_argument("build_witness: bases must be qutrit bases with 3 outcomes");
  if (z.z13.dim() != 3) throw std::invalid_argument("build_witness: functional dimension mismatch");
  const HermitianOperator a11 = b1.projector(1);
  const HermitianOperator a21 = b1.projector(2);
  const HermitianOperator a12 = b2.projector(1);
  const HermitianOperator a22 = b2.projector(2);
  const HermitianOperator rest = HermitianOperator::identity(3) - a11 - a21 - a12 - a22;
  HermitianOperator w = kron(a11, z.z13);
  w += kron(a21, z.z23);
  w += kron(a12, z.z31);
  w += kron(a22, z.z32);
  w += kron(rest, z.z33);
  return Witness{std::move(w), z, {b1, b2}};
}

PptMinResult min_over_ppt(const Witness& w, std::size_t dimA, std::size_t dimB,
                          const SolverSettings& settings) {
  const std::size_t d = dimA * dimB;
  if (w.w.dim() != d) throw std::invalid_argument("min_over_ppt: witness dimension mismatch");

  SdpProblem prob;
  prob.blocks.push_back({"rho", d});
  prob.blocks.push_back({"rho_TA", d});
  prob.objective.coeffs.push_back({0, w.w});

  {
    SdpConstraint trace_one;
    trace_one.coeffs.push_back({0, HermitianOperator::identity(d)});
    trace_one.rhs = 1.0;
    prob.constraints.push_back(std::move(trace_one));
  }
  for (const auto& et : hermitian_basis(d)) {
    SdpConstraint con;
    con.coeffs.push_back({0, -1.0 * partial_transpose(et, dimA, dimB)});
    con.coeffs.push_back({1, et});
    con.rhs = 0.0;
    prob.constraints.push_back(std::move(con));
  }

  SdpSolution sol = solve(prob, settings);
  if (sol.status != SolveStatus::optimal)
    throw std::runtime_error(std::string("min_over_ppt: SDP solve failed with status ") +
                             to_string(sol.status));

  PptMinResult res{.value = sol.primal_value,
                   .state = DensityOperator(sol.primal_blocks[0], dimA, dimB, 1e-7),
                   .sdp = {},
                   .state_min_eig = sol.primal_min_eigs[0],
                   .ppt_min_eig = min_eigenvalue(partial_transpose(sol.primal_blocks[0], dimA, dimB))};
  res.sdp = std::move(sol);
  return res;
}

BestFunctionalResult best_functional(const Assemblage& e, const SolverSettings& settings) {
  if (e.settings() != 2 || e.outcomes() != 3 || e.dim() != 3)
    throw std::invalid_argument("best_functional: defined for m=2, n=3, d=3 only");

  SdpProblem prob;
  const char* ids[] = {"Z13", "Z23", "Z31", "Z32", "Z33", "Z11", "Z21", "Z12", "Z22"};
  for (const char* id : ids) prob.blocks.push_back({id, 3});

  const HermitianOperator rho = e.marginal(1);
  prob.objective.coeffs.push_back({0, e.member(1, 1)});
  prob.objective.coeffs.push_back({1, e.member(2, 1)});
  prob.objective.coeffs.push_back({2, e.member(1, 2)});
  prob.objective.coeffs.push_back({3, e.member(2, 2)});
  prob.objective.coeffs.push_back(
      {4, rho - e.member(1, 1) - e.member(2, 1) - e.member(1, 2) - e.member(2, 2)});

  const auto basis = hermitian_basis(3);
  // derived blocks: Zij = Zi3 + Z3j - Z33; (free13, free3j, derived index)
  const std::array<std::array<std::size_t, 3>, 4> ties = {{{0, 2, 5},    // Z11
                                                           {1, 2, 6},    // Z21
                                                           {0, 3, 7},    // Z12
                                                           {1, 3, 8}}};  // Z22
  for (const auto& [f1, f2, dv] : ties) {
    for (const auto& et : basis) {
      SdpConstraint con;
      con.coeffs.push_back({dv, et});
      con.coeffs.push_back({f1, -1.0 * et});
      con.coeffs.push_back({f2, -1.0 * et});
      con.coeffs.push_back({4, et});
      con.rhs = 0.0;
      prob.constraints.push_back(std::move(con));
    }
  }
  for (std::size_t b = 0; b < 5; ++b) {
    SdpConstraint con;
    con.coeffs.push_back({b, HermitianOperator::identity(3)});
    con.rhs = 1.0;
    prob.constraints.push_back(std::move(con));
  }

  SdpSolution sol = solve(prob, settings);
  if (sol.status != SolveStatus::optimal)
    throw std::runtime_error(std::string("best_functional: SDP solve failed with status ") +
                             to_string(sol.status));

  BestFunctionalResult res;
  res.functional = SteeringFunctional{sol.primal_blocks[0], sol.primal_blocks[1],
                                      sol.primal_blocks[2], sol.primal_blocks[3],
                                      sol.primal_blocks[4], std::nullopt};
  res.value = sol.primal_value;
  res.sdp = std::move(sol);
  return res;
}

Assemblage assemblage_from_local_model(const std::vector<HermitianOperator>& omegas) {
  if (omegas.size() != 9) throw std::invalid_argument("assemblage_from_local_model: need 9 omegas");
  for (const auto& o : omegas)
    if (o.dim() != 3) throw std::invalid_argument("assemblage_from_local_model: dim must be 3");
  double total = 0.0;
  for (const auto& o : omegas) total += o.trace();
  if (total <= 1e-12)
    throw std::invalid_argument("assemblage_from_local_model: total trace must be positive");
  const double inv = 1.0 / total;

  std::vector<HermitianOperator> members;
  for (std::size_t a = 1; a <= 3; ++a) {  // rho_{a|1} = sum_j omega_{aj}
    HermitianOperator s = HermitianOperator::zero(3);
    for (std::size_t j = 1; j <= 3; ++j) s += omegas[(a - 1) * 3 + (j - 1)];
    members.push_back(inv * s);
  }
  for (std::size_t a = 1; a <= 3; ++a) {  // rho_{a|2} = sum_i omega_{ia}
    HermitianOperator s = HermitianOperator::zero(3);
    for (std::size_t i = 1; i <= 3; ++i) s += omegas[(i - 1) * 3 + (a - 1)];
    members.push_back(inv * s);
  }
  return Assemblage(2, 3, 3, std::move(members));
}

double product_state_margin(const Witness& w, std::size_t dimA, std::size_t dimB,
                            std::size_t samples, std::uint64_t seed) {
  if (w.w.dim() != dimA * dimB) throw std::invalid_argument("product_state_margin: dim mismatch");
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples; ++k) {
    const auto sa = random_pure_state(dimA, splitmix64(seed + 2 * k));
    const auto tb = random_pure_state(dimB, splitmix64(seed + 2 * k + 1));
    lo = std::min(lo, real_inner(w.w, kron(sa.op(), tb.op())));
  }
  return lo;
}

}  // namespace steering
