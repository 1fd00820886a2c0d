#include "steering/analytic_family.hpp"

#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>

namespace steering {

void check_family_params(const FamilyParams& p) {
  if (!(p.x >= 0.0 && p.x <= 0.5))
    throw std::domain_error("x outside [0, 0.5]");
  if (!(p.m1 >= 0.0) || !(p.m2 >= 0.0))
    throw std::domain_error("m1, m2 must be non-negative");
  if (p.m1 * p.m1 + p.m2 * p.m2 > 1.0)
    throw std::domain_error("m1^2 + m2^2 > 1 (psi_3 normalization fails)");
  if (p.m1 * p.m1 + p.m2 * p.m2 + p.m1 * p.m2 > 1.0)
    throw std::domain_error("m1^2 + m2^2 + m1*m2 > 1 (negative spectral weight)");
}

SteeringFunctional functional_family(double x) {
  if (!(x >= 0.0 && x <= 0.5)) throw std::domain_error("x outside [0, 0.5]");
  const double a = std::sqrt(2.0 * (1.0 + x) / 3.0);
  const double b = std::sqrt(std::max(0.0, (1.0 - 2.0 * x) / 4.0));
  const double c = std::sqrt(std::max(0.0, 2.0 * (1.0 - 2.0 * x) / 3.0)) / std::sqrt(1.0 - x);
  const double w = std::sqrt(std::max(0.0, 1.0 - a * a - b * b));

  const std::vector<Complex> qp = {a, w, -b};
  const std::vector<Complex> qm = {a, w, b};
  const std::vector<Complex> s = {a, -std::sqrt(std::max(0.0, 1.0 - a * a)), 0.0};
  const std::vector<Complex> t = {c, -std::sqrt(std::max(0.0, 1.0 - c * c)), 0.0};
  const std::vector<Complex> e2 = {0.0, 0.0, 1.0};

  SteeringFunctional z;
  z.z13 = HermitianOperator::outer(qp);
  z.z23 = HermitianOperator::outer(qm);
  z.z31 = HermitianOperator::outer(t, 1.0 - x) + HermitianOperator::outer(e2, x);
  z.z32 = HermitianOperator::outer(s);
  z.z33 = z.z32;
  z.family_x = x;
  return z;
}

namespace {

// product-basis ket |ij> over qutrits, A-major index 3i + j
std::vector<Complex> ket2(int i, int j, Complex amp) {
  std::vector<Complex> v(9, Complex(0.0, 0.0));
  v[static_cast<std::size_t>(3 * i + j)] = amp;
  return v;
}

std::vector<Complex> add(std::vector<Complex> a, const std::vector<Complex>& b) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
  return a;
}

}  // namespace

DensityOperator state_family(double m1, double m2) {
  check_family_params({0.0, m1, m2});
  const double m3 = std::sqrt(std::max(0.0, (1.0 - m1 * m1 - m2 * m2) / 2.0));
  const double denom = 4.0 - 2.0 * m1 * m1 + m1 * m2 - 2.0 * m2 * m2;
  const double l3 = 1.0 / denom;
  const double l1 = 1.0 - (2.0 + 3.0 * m1 * m2) / denom;
  const double l2 = 1.0 - l1 - 2.0 * l3;

  const double r2 = std::sqrt(0.5);
  const double r3 = std::sqrt(1.0 / 3.0);
  const auto psi1 = add(ket2(1, 2, r2), ket2(2, 1, r2));
  const auto psi2 = add(add(ket2(0, 0, r3), ket2(1, 1, r3)), ket2(2, 2, -r3));
  const auto psi3 = add(add(ket2(0, 1, m1), ket2(1, 0, m2)), add(ket2(1, 1, m3), ket2(2, 2, m3)));
  const auto psi3t = add(add(ket2(0, 2, m1), ket2(2, 0, -m2)), add(ket2(2, 1, m3), ket2(1, 2, -m3)));

  HermitianOperator rho = HermitianOperator::outer(psi1, l1);
  rho += HermitianOperator::outer(psi2, l2);
  rho += HermitianOperator::outer(psi3, l3);
  rho += HermitianOperator::outer(psi3t, l3);
  return DensityOperator(std::move(rho), 3, 3, 1e-9);
}

double violation(const FamilyParams& p) {
  check_family_params(p);
  const auto [b1, b2] = mub_bases();
  return evaluate(functional_family(p.x), assemblage_from_state(state_family(p.m1, p.m2), {b1, b2}));
}

CounterexampleReport verify_counterexample(const FamilyParams& p, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::domain_error("epsilon outside [0, 1]");
  check_family_params(p);

  const HermitianOperator eye3 = HermitianOperator::identity(3);
  SteeringFunctional z = functional_family(p.x);
  auto mix = [&](const HermitianOperator& op) {
    return (1.0 - epsilon) * op + epsilon * eye3;
  };
  z.z13 = mix(z.z13);
  z.z23 = mix(z.z23);
  z.z31 = mix(z.z31);
  z.z32 = mix(z.z32);
  z.z33 = mix(z.z33);

  const DensityOperator pure = state_family(p.m1, p.m2);
  HermitianOperator mixed = (1.0 - epsilon) * pure.op();
  mixed += (epsilon / 9.0) * HermitianOperator::identity(9);
  const DensityOperator rho(mixed, 3, 3, 1e-9);

  CounterexampleReport rep;
  rep.params = p;
  rep.epsilon = epsilon;
  const std::pair<std::string, HermitianOperator> conds[] = {
      {"Z13", z.z13}, {"Z23", z.z23}, {"Z31", z.z31},   {"Z32", z.z32},   {"Z33", z.z33},
      {"Z11", z.z11()}, {"Z21", z.z21()}, {"Z12", z.z12()}, {"Z22", z.z22()}};
  double worst = 0.0;
  for (const auto& [name, op] : conds) {
    const double me = min_eigenvalue(op);
    rep.functional_margins.push_back({name, me});
    worst = std::min(worst, me);
  }
  rep.state_min_eig = min_eigenvalue(rho.op());
  rep.ppt_min_eig = min_eigenvalue(partial_transpose(rho.op(), 3, 3));
  worst = std::min({worst, rep.state_min_eig, rep.ppt_min_eig});

  const auto [b1, b2] = mub_bases();
  rep.c_value = evaluate(z, assemblage_from_state(rho, {b1, b2}));
  rep.verdict = rep.c_value < 0.0 && worst >= -1e-9;
  return rep;
}

ScanTable scan(const std::vector<double>& x_grid, const std::vector<double>& m1_grid,
               const std::vector<double>& m2_grid, unsigned threads) {
  ScanTable table;
  table.rows.resize(x_grid.size() * m1_grid.size() * m2_grid.size());

  auto point = [&](std::size_t flat) {
    const std::size_t nm2 = m2_grid.size();
    const std::size_t nm1 = m1_grid.size();
    ScanRow row;
    row.x = x_grid[flat / (nm1 * nm2)];
    row.m1 = m1_grid[(flat / nm2) % nm1];
    row.m2 = m2_grid[flat % nm2];
    const FamilyParams p{row.x, row.m1, row.m2};
    try {
      check_family_params(p);
      row.c = violation(p);
      row.valid = true;
    } catch (const std::domain_error&) {
      row.c = std::numeric_limits<double>::quiet_NaN();
      row.valid = false;
    }
    return row;
  };

  const std::size_t total = table.rows.size();
  const unsigned nthreads = std::max(1u, std::min<unsigned>(threads, std::thread::hardware_concurrency()));
  if (nthreads <= 1 || total < 64) {
    for (std::size_t i = 0; i < total; ++i) table.rows[i] = point(i);
  } else {
    std::vector<std::future<void>> futs;
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < nthreads; ++t) {
      futs.push_back(std::async(std::launch::async, [&]() {
        for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1))
          table.rows[i] = point(i);
      }));
    }
    for (auto& f : futs) f.get();
  }

  for (const auto& row : table.rows) {
    if (!row.valid) continue;
    if (!table.minimum || row.c < table.minimum->c) table.minimum = row;
  }
  return table;
}

}  // namespace steering
