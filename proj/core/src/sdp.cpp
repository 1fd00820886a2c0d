#include "steering/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "steering/linalg.hpp"

namespace steering {

using detail::cholesky;
using detail::congruence;
using detail::inner;
using detail::matmul;
using detail::matmul_tn;
using detail::one_sided_svd;
using detail::RealEig;
using detail::solve_lower_inplace;
using detail::solve_lower_transposed_inplace;
using detail::sym_eig;
using detail::symmetrize;

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::max_iterations: return "max-iterations";
  }
  return "unknown";
}

RealMatrix embed_hermitian(const HermitianOperator& h) {
  const std::size_t d = h.dim();
  RealMatrix m(2 * d, 2 * d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const Complex v = h(r, c);
      m(r, c) = v.real();
      m(d + r, d + c) = v.real();
      m(r, d + c) = -v.imag();
      m(d + r, c) = v.imag();
    }
  }
  return m;
}

namespace {

// Embedded coefficient carrying the 1/2 factor, so real inner products match
// the Hermitian trace inner products one-to-one.
RealMatrix embed_half(const HermitianOperator& h) {
  RealMatrix m = embed_hermitian(h);
  m *= 0.5;
  return m;
}

// Average with the symplectic conjugation J M J^T; fixed points are exactly
// the embeddings of Hermitian matrices.
void structure_project(RealMatrix& m, std::size_t d) {
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const double re = 0.5 * (m(r, c) + m(d + r, d + c));
      const double im = 0.5 * (m(d + r, c) - m(r, d + c));
      m(r, c) = re;
      m(d + r, d + c) = re;
      m(d + r, c) = im;
      m(r, d + c) = -im;
    }
  }
}

HermitianOperator from_embedding(const RealMatrix& m, std::size_t d) {
  ComplexMatrix h(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    h(r, r) = Complex(0.5 * (m(r, r) + m(d + r, d + r)), 0.0);
    for (std::size_t c = r + 1; c < d; ++c) {
      const double re = 0.25 * (m(r, c) + m(c, r) + m(d + r, d + c) + m(d + c, d + r));
      const double im = 0.25 * (m(d + r, c) + m(c, d + r) - m(r, d + c) - m(d + c, r));
      h(r, c) = Complex(re, im);
      h(c, r) = Complex(re, -im);
    }
  }
  return herm_unchecked(std::move(h));
}

struct Row {
  std::vector<std::pair<std::size_t, RealMatrix>> coeffs;  // (block, embedded/2 matrix)
  std::vector<double> b;                                   // free-scalar coefficients
  double rhs = 0.0;
  double scale = 1.0;       // original row = scale * this row
  std::size_t orig = 0;     // index into the input constraint list
};

struct Flat {
  std::vector<double> v;  // concatenated block entries + scalar coefficients
  double rhs = 0.0;
};

double vdot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double vnorm(const std::vector<double>& a) { return std::sqrt(vdot(a, a)); }

struct Scaled {
  std::vector<std::size_t> dims;      // embedded block dims
  std::vector<RealMatrix> cost;       // embedded/2, scaled by 1/s_obj
  std::vector<double> cf;             // scaled by 1/s_obj
  std::vector<Row> rows;              // kept rows, unit norm, rhs scaled by 1/s_rhs
  std::vector<std::size_t> dropped;   // original indices of dropped rows
  double s_obj = 1.0;
  double s_rhs = 1.0;
  double orig_rhs_norm = 0.0;         // max |rhs| of the input
  double orig_cost_norm = 0.0;
};

Scaled prepare(const SdpProblem& p) {
  const std::size_t nb = p.blocks.size();
  const std::size_t nf = p.scalar_vars.size();
  if (nb == 0) throw std::invalid_argument("sdp: problem has no blocks");
  for (const auto& b : p.blocks)
    if (b.dim == 0) throw std::invalid_argument("sdp: zero-dimensional block '" + b.id + "'");

  auto check_coeffs = [&](const std::vector<BlockCoeff>& cs, const char* where) {
    for (const auto& c : cs) {
      if (c.block >= nb) throw std::invalid_argument(std::string("sdp: block index out of range in ") + where);
      if (c.op.dim() != p.blocks[c.block].dim)
        throw std::invalid_argument(std::string("sdp: coefficient dimension mismatch in ") + where);
    }
  };
  check_coeffs(p.objective.coeffs, "objective");
  if (!p.objective.scalar_coeffs.empty() && p.objective.scalar_coeffs.size() != nf)
    throw std::invalid_argument("sdp: objective scalar coefficient count mismatch");
  for (const auto& con : p.constraints) {
    check_coeffs(con.coeffs, "constraint");
    if (!con.scalar_coeffs.empty() && con.scalar_coeffs.size() != nf)
      throw std::invalid_argument("sdp: constraint scalar coefficient count mismatch");
    if (!std::isfinite(con.rhs)) throw std::invalid_argument("sdp: non-finite constraint rhs");
  }

  Scaled s;
  s.dims.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) s.dims[b] = 2 * p.blocks[b].dim;

  // objective
  s.cost.assign(nb, RealMatrix());
  for (std::size_t b = 0; b < nb; ++b) s.cost[b] = RealMatrix(s.dims[b], s.dims[b]);
  for (const auto& c : p.objective.coeffs) {
    RealMatrix e = embed_half(c.op);
    s.cost[c.block] += e;
    s.orig_cost_norm = std::max(s.orig_cost_norm, c.op.matrix().max_abs());
  }
  s.cf.assign(nf, 0.0);
  for (std::size_t j = 0; j < p.objective.scalar_coeffs.size(); ++j) {
    s.cf[j] = p.objective.scalar_coeffs[j];
    s.orig_cost_norm = std::max(s.orig_cost_norm, std::abs(s.cf[j]));
  }
  s.s_obj = std::max(1.0, s.orig_cost_norm);
  for (auto& c : s.cost) c *= 1.0 / s.s_obj;
  for (auto& v : s.cf) v /= s.s_obj;

  // rows: normalize, then filter dependent rows with modified Gram-Schmidt
  // on flattened row vectors (consistent dependent rows are dropped,
  // inconsistent ones are an error).
  std::size_t flat_len = nf;
  std::vector<std::size_t> flat_off(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    flat_off[b] = flat_len - nf;
    flat_len += s.dims[b] * s.dims[b];
  }

  std::vector<Flat> basis;   // orthonormal
  std::vector<Row> rows;
  std::vector<std::size_t> dropped;

  for (std::size_t k = 0; k < p.constraints.size(); ++k) {
    const auto& con = p.constraints[k];
    Row row;
    row.orig = k;
    row.b.assign(nf, 0.0);
    for (std::size_t j = 0; j < con.scalar_coeffs.size(); ++j) row.b[j] = con.scalar_coeffs[j];
    for (const auto& c : con.coeffs) {
      RealMatrix e = embed_half(c.op);
      bool merged = false;
      for (auto& [blk, m] : row.coeffs) {
        if (blk == c.block) {
          m += e;
          merged = true;
          break;
        }
      }
      if (!merged) row.coeffs.emplace_back(c.block, std::move(e));
    }

    double norm2 = vdot(row.b, row.b);
    for (const auto& [blk, m] : row.coeffs) norm2 += inner(m, m);
    const double norm = std::sqrt(norm2);
    s.orig_rhs_norm = std::max(s.orig_rhs_norm, std::abs(con.rhs));
    if (norm <= 1e-14) {
      if (std::abs(con.rhs) > 1e-10)
        throw std::invalid_argument("sdp: constraint " + std::to_string(k) +
                                    " has zero coefficients but nonzero rhs");
      dropped.push_back(k);
      continue;
    }
    row.scale = norm;
    for (auto& [blk, m] : row.coeffs) m *= 1.0 / norm;
    for (auto& v : row.b) v /= norm;
    row.rhs = con.rhs / norm;

    Flat f;
    f.v.assign(flat_len, 0.0);
    for (std::size_t j = 0; j < nf; ++j) f.v[flat_len - nf + j] = row.b[j];
    for (const auto& [blk, m] : row.coeffs) {
      const auto& d = m.data();
      std::copy(d.begin(), d.end(), f.v.begin() + static_cast<std::ptrdiff_t>(flat_off[blk]));
    }
    f.rhs = row.rhs;

    double implied_rhs = 0.0;
    for (const auto& e : basis) {
      const double c = vdot(e.v, f.v);
      for (std::size_t i = 0; i < flat_len; ++i) f.v[i] -= c * e.v[i];
      implied_rhs += c * e.rhs;
    }
    const double res = vnorm(f.v);
    if (res <= 1e-10) {
      if (std::abs(row.rhs - implied_rhs) > 1e-8 * std::max(1.0, std::abs(row.rhs)))
        throw std::invalid_argument("sdp: constraint " + std::to_string(k) +
                                    " is linearly dependent with inconsistent rhs");
      dropped.push_back(k);
      continue;
    }
    for (auto& x : f.v) x /= res;
    f.rhs = (row.rhs - implied_rhs) / res;
    basis.push_back(std::move(f));
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw std::invalid_argument("sdp: no independent constraints remain");

  double rmax = 1.0;
  for (const auto& r : rows) rmax = std::max(rmax, std::abs(r.rhs));
  s.s_rhs = rmax;
  for (auto& r : rows) r.rhs /= s.s_rhs;

  s.rows = std::move(rows);
  s.dropped = std::move(dropped);
  return s;
}

struct BlockScaling {
  RealMatrix r;                    // NT factor, W = R R^T
  std::vector<double> lam;         // scaled-point spectrum (NT singular values)
  std::vector<RealMatrix> atil;    // scaled constraint matrices, indexed like touching rows
};

// Largest step alpha with X + alpha*dX staying PSD, given X = L L^T.
double step_to_boundary(const RealMatrix& l, const RealMatrix& dx) {
  RealMatrix a = dx;
  solve_lower_inplace(l, a);
  RealMatrix at(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) at(c, r) = a(r, c);
  solve_lower_inplace(l, at);
  symmetrize(at);
  const double nu = detail::sym_min_eig(at);
  if (nu >= -1e-14) return std::numeric_limits<double>::infinity();
  return -1.0 / nu;
}

}  // namespace

std::vector<HermitianOperator> dual_slacks(const SdpProblem& p, const std::vector<double>& lambda) {
  std::vector<HermitianOperator> slack;
  slack.reserve(p.blocks.size());
  for (const auto& b : p.blocks) slack.push_back(HermitianOperator::zero(b.dim));
  for (const auto& c : p.objective.coeffs) slack[c.block] += c.op;
  for (std::size_t k = 0; k < p.constraints.size(); ++k) {
    const double lk = lambda.at(k);
    if (lk == 0.0) continue;
    for (const auto& c : p.constraints[k].coeffs) slack[c.block] -= lk * c.op;
  }
  return slack;
}

SdpSolution solve(const SdpProblem& p, const SolverSettings& settings) {
  Scaled sc = prepare(p);
  const std::size_t nb = sc.dims.size();
  const std::size_t nf = sc.cf.size();
  const std::size_t nk = sc.rows.size();

  // rows touching each block
  std::vector<std::vector<std::pair<std::size_t, const RealMatrix*>>> block_rows(nb);
  for (std::size_t k = 0; k < nk; ++k)
    for (const auto& [blk, m] : sc.rows[k].coeffs) block_rows[blk].emplace_back(k, &m);

  double ntot = 0.0;
  for (std::size_t b = 0; b < nb; ++b) ntot += static_cast<double>(sc.dims[b]);

  const double init = std::max(10.0, std::sqrt(static_cast<double>(
                                  *std::max_element(sc.dims.begin(), sc.dims.end()))));
  std::vector<RealMatrix> X(nb), S(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    X[b] = RealMatrix::identity(sc.dims[b]);
    X[b] *= init;
    S[b] = RealMatrix::identity(sc.dims[b]);
    S[b] *= init;
  }
  std::vector<double> y(nf, 0.0), lam(nk, 0.0);

  const double unit = sc.s_obj * sc.s_rhs;  // value scale back to original units
  const double bnorm = std::max(1.0, sc.orig_rhs_norm);
  const double cnorm = std::max(1.0, sc.orig_cost_norm);

  SolveStatus status = SolveStatus::max_iterations;
  int iters = 0;
  int stalled = 0;

  std::vector<RealMatrix> rd(nb);
  std::vector<double> rp(nk), rf(nf);
  double pval = 0.0, dval = 0.0;

  auto compute_residuals = [&]() {
    pval = vdot(sc.cf, y);
    for (std::size_t b = 0; b < nb; ++b) pval += inner(sc.cost[b], X[b]);
    dval = 0.0;
    for (std::size_t k = 0; k < nk; ++k) dval += sc.rows[k].rhs * lam[k];
    for (std::size_t k = 0; k < nk; ++k) {
      double ax = vdot(sc.rows[k].b, y);
      for (const auto& [blk, m] : sc.rows[k].coeffs) ax += inner(m, X[blk]);
      rp[k] = sc.rows[k].rhs - ax;
    }
    for (std::size_t b = 0; b < nb; ++b) {
      rd[b] = sc.cost[b];
      rd[b] -= S[b];
    }
    for (std::size_t k = 0; k < nk; ++k) {
      if (lam[k] == 0.0) continue;
      for (const auto& [blk, m] : sc.rows[k].coeffs) {
        RealMatrix t = *m;
        t *= lam[k];
        rd[blk] -= t;
      }
    }
    for (std::size_t j = 0; j < nf; ++j) rf[j] = sc.cf[j];
    for (std::size_t k = 0; k < nk; ++k)
      for (std::size_t j = 0; j < nf; ++j) rf[j] -= lam[k] * sc.rows[k].b[j];
  };

  for (iters = 0; iters < settings.max_iterations; ++iters) {
    compute_residuals();

    double mu = 0.0;
    for (std::size_t b = 0; b < nb; ++b) mu += inner(X[b], S[b]);
    if (!(mu > -1e-12)) break;  // cone membership lost; bail out honestly
    mu /= ntot;

    double pres = 0.0;
    for (std::size_t k = 0; k < nk; ++k)
      pres = std::max(pres, std::abs(rp[k]) * sc.rows[k].scale * sc.s_rhs);
    double dres = 0.0;
    for (std::size_t b = 0; b < nb; ++b) dres = std::max(dres, rd[b].max_abs() * sc.s_obj);
    for (std::size_t j = 0; j < nf; ++j) dres = std::max(dres, std::abs(rf[j]) * sc.s_obj);

    const double pval_o = pval * unit;
    const double dval_o = dval * unit;
    const double gap_o = std::abs(pval_o - dval_o);

    if (settings.verbose) {
      std::fprintf(stderr, "iter %3d  mu %.3e  pres %.3e  dres %.3e  p %.10e  d %.10e\n", iters,
                   mu, pres, dres, pval_o, dval_o);
    }

    if (pres <= settings.feas_tolerance * bnorm && dres <= settings.feas_tolerance * cnorm &&
        gap_o <= settings.gap_tolerance) {
      status = SolveStatus::optimal;
      break;
    }
    if (dval_o > 1e9 * bnorm && dres <= 1e-6 * cnorm) {
      status = SolveStatus::infeasible;
      break;
    }
    if (pval_o < -1e9 * cnorm && pres <= 1e-6 * bnorm) {
      status = SolveStatus::unbounded;
      break;
    }
    if (stalled >= 4 || !std::isfinite(mu)) break;

    // Cholesky of both cone variables; NT scaling point per block.
    std::vector<BlockScaling> w(nb);
    std::vector<RealMatrix> lx(nb), ls(nb);
    bool factor_ok = true;
    for (std::size_t b = 0; b < nb && factor_ok; ++b) {
      factor_ok = cholesky(X[b], lx[b], 1e-18) && cholesky(S[b], ls[b], 1e-18);
    }
    if (!factor_ok) break;

    for (std::size_t b = 0; b < nb; ++b) {
      const auto svd = one_sided_svd(matmul_tn(ls[b], lx[b]));
      // R = Lx * V * Sigma^{-1/2}; then R^{-1} X R^{-T} = R^T S R = Sigma.
      RealMatrix r = matmul(lx[b], svd.v);
      w[b].lam.resize(sc.dims[b]);
      for (std::size_t j = 0; j < sc.dims[b]; ++j) {
        const double f = 1.0 / std::sqrt(svd.sigma[j]);
        w[b].lam[j] = svd.sigma[j];
        for (std::size_t i = 0; i < sc.dims[b]; ++i) r(i, j) *= f;
      }
      w[b].r = std::move(r);
      w[b].atil.resize(block_rows[b].size());
      for (std::size_t t = 0; t < block_rows[b].size(); ++t)
        w[b].atil[t] = congruence(*block_rows[b][t].second, w[b].r);
    }

    // Schur complement M_kl = sum_b <Atil_kb, Atil_lb>, assembled per block.
    RealMatrix M(nk, nk);
    for (std::size_t b = 0; b < nb; ++b) {
      const auto& rows_b = block_rows[b];
      for (std::size_t t1 = 0; t1 < rows_b.size(); ++t1)
        for (std::size_t t2 = t1; t2 < rows_b.size(); ++t2) {
          const double v = inner(w[b].atil[t1], w[b].atil[t2]);
          M(rows_b[t1].first, rows_b[t2].first) += v;
          if (t1 != t2) M(rows_b[t2].first, rows_b[t1].first) += v;
        }
    }
    RealMatrix lm;
    {
      bool ok = cholesky(M, lm, 1e-16);
      double jitter = 1e-14;
      while (!ok && jitter <= 1e-6) {
        RealMatrix mj = M;
        double dmax = 0.0;
        for (std::size_t i = 0; i < nk; ++i) dmax = std::max(dmax, mj(i, i));
        for (std::size_t i = 0; i < nk; ++i) mj(i, i) += jitter * std::max(dmax, 1.0);
        ok = cholesky(mj, lm, 1e-16);
        jitter *= 100.0;
      }
      if (!ok) break;
    }

    RealMatrix bt(nk, nf);  // L^{-1} B
    RealMatrix ln;          // Cholesky of B^T M^{-1} B
    if (nf > 0) {
      for (std::size_t k = 0; k < nk; ++k)
        for (std::size_t j = 0; j < nf; ++j) bt(k, j) = sc.rows[k].b[j];
      solve_lower_inplace(lm, bt);
      RealMatrix nmat = matmul_tn(bt, bt);
      if (!cholesky(nmat, ln, 1e-16))
        throw std::invalid_argument("sdp: free-variable columns are linearly dependent");
    }

    // Solves [M B; B^T 0] [dlam; dy] = [rhs1; rhs2].
    auto kkt_solve = [&](const std::vector<double>& rhs1, const std::vector<double>& rhs2,
                         std::vector<double>& dlam, std::vector<double>& dy) {
      std::vector<double> u = rhs1;
      solve_lower_inplace(lm, u);
      dy.assign(nf, 0.0);
      if (nf > 0) {
        for (std::size_t j = 0; j < nf; ++j) {
          double s = -rhs2[j];
          for (std::size_t k = 0; k < nk; ++k) s += bt(k, j) * u[k];
          dy[j] = s;
        }
        solve_lower_inplace(ln, dy);
        solve_lower_transposed_inplace(ln, dy);
        for (std::size_t k = 0; k < nk; ++k) {
          double s = 0.0;
          for (std::size_t j = 0; j < nf; ++j) s += bt(k, j) * dy[j];
          u[k] -= s;
        }
      }
      solve_lower_transposed_inplace(lm, u);
      dlam = std::move(u);
    };

    std::vector<RealMatrix> rdt(nb);  // R^T R_d R per block
    for (std::size_t b = 0; b < nb; ++b) rdt[b] = congruence(rd[b], w[b].r);

    // direction for a given centrality target H (in scaled space)
    auto directions = [&](const std::vector<RealMatrix>& h, std::vector<double>& dlam,
                          std::vector<double>& dy, std::vector<RealMatrix>& dx,
                          std::vector<RealMatrix>& dxt, std::vector<RealMatrix>& dst,
                          std::vector<RealMatrix>& ds) {
      std::vector<RealMatrix> p0(nb);
      for (std::size_t b = 0; b < nb; ++b) {
        const auto& lamv = w[b].lam;
        RealMatrix g(sc.dims[b], sc.dims[b]);
        for (std::size_t i = 0; i < sc.dims[b]; ++i)
          for (std::size_t j = 0; j < sc.dims[b]; ++j)
            g(i, j) = 2.0 * h[b](i, j) / (lamv[i] + lamv[j]);
        g -= rdt[b];
        p0[b] = std::move(g);
      }
      std::vector<double> rhs1 = rp;
      for (std::size_t b = 0; b < nb; ++b) {
        const auto& rows_b = block_rows[b];
        for (std::size_t t = 0; t < rows_b.size(); ++t)
          rhs1[rows_b[t].first] -= inner(w[b].atil[t], p0[b]);
      }
      kkt_solve(rhs1, rf, dlam, dy);

      dxt.assign(nb, RealMatrix());
      dst.assign(nb, RealMatrix());
      dx.assign(nb, RealMatrix());
      ds.assign(nb, RealMatrix());
      for (std::size_t b = 0; b < nb; ++b) {
        RealMatrix xt = p0[b];
        RealMatrix st = rdt[b];
        for (std::size_t t = 0; t < block_rows[b].size(); ++t) {
          const double dl = dlam[block_rows[b][t].first];
          if (dl == 0.0) continue;
          RealMatrix a = w[b].atil[t];
          a *= dl;
          xt += a;
          st -= a;
        }
        symmetrize(xt);
        symmetrize(st);
        dxt[b] = xt;
        dst[b] = st;
        // dX = R dXt R^T; congruence computes R^T A R, so pass the transpose.
        RealMatrix rt(w[b].r.cols(), w[b].r.rows());
        for (std::size_t i = 0; i < w[b].r.rows(); ++i)
          for (std::size_t j = 0; j < w[b].r.cols(); ++j) rt(j, i) = w[b].r(i, j);
        RealMatrix dxb = congruence(xt, rt);
        symmetrize(dxb);
        structure_project(dxb, sc.dims[b] / 2);
        dx[b] = std::move(dxb);

        RealMatrix dsb = rd[b];
        for (std::size_t t = 0; t < block_rows[b].size(); ++t) {
          const double dl = dlam[block_rows[b][t].first];
          if (dl == 0.0) continue;
          RealMatrix a = *block_rows[b][t].second;
          a *= dl;
          dsb -= a;
        }
        symmetrize(dsb);
        structure_project(dsb, sc.dims[b] / 2);
        ds[b] = std::move(dsb);
      }
    };

    // predictor (affine scaling): H = -V^2
    std::vector<RealMatrix> h(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      h[b] = RealMatrix(sc.dims[b], sc.dims[b]);
      for (std::size_t i = 0; i < sc.dims[b]; ++i) h[b](i, i) = -w[b].lam[i] * w[b].lam[i];
    }
    std::vector<double> dlam, dy;
    std::vector<RealMatrix> dx, dxt, dst, ds;
    directions(h, dlam, dy, dx, dxt, dst, ds);

    double ap = 1.0, ad = 1.0;
    for (std::size_t b = 0; b < nb; ++b) {
      ap = std::min(ap, step_to_boundary(lx[b], dx[b]));
      ad = std::min(ad, step_to_boundary(ls[b], ds[b]));
    }

    double mu_aff = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      RealMatrix xa = X[b];
      RealMatrix sa = S[b];
      RealMatrix t = dx[b];
      t *= ap;
      xa += t;
      t = ds[b];
      t *= ad;
      sa += t;
      mu_aff += inner(xa, sa);
    }
    mu_aff /= ntot;
    double sigma = std::pow(std::max(0.0, std::min(1.0, mu_aff / mu)), 3.0);

    // corrector: H = sigma*mu*I - V^2 - sym(dXt_aff dSt_aff)
    for (std::size_t b = 0; b < nb; ++b) {
      RealMatrix cross = matmul(dxt[b], dst[b]);
      for (std::size_t i = 0; i < sc.dims[b]; ++i)
        for (std::size_t j = 0; j < sc.dims[b]; ++j) {
          const double sym = 0.5 * (cross(i, j) + cross(j, i));
          double v = -sym;
          if (i == j) v += sigma * mu - w[b].lam[i] * w[b].lam[i];
          h[b](i, j) = v;
        }
    }
    directions(h, dlam, dy, dx, dxt, dst, ds);

    ap = 1.0;
    ad = 1.0;
    for (std::size_t b = 0; b < nb; ++b) {
      ap = std::min(ap, step_to_boundary(lx[b], dx[b]));
      ad = std::min(ad, step_to_boundary(ls[b], ds[b]));
    }
    constexpr double kGamma = 0.98;
    ap = std::min(1.0, kGamma * ap);
    ad = std::min(1.0, kGamma * ad);
    if (ap < 1e-8 && ad < 1e-8) {
      ++stalled;
    } else {
      stalled = 0;
    }

    for (std::size_t b = 0; b < nb; ++b) {
      RealMatrix t = dx[b];
      t *= ap;
      X[b] += t;
      t = ds[b];
      t *= ad;
      S[b] += t;
      symmetrize(X[b]);
      symmetrize(S[b]);
      structure_project(X[b], sc.dims[b] / 2);
      structure_project(S[b], sc.dims[b] / 2);
    }
    for (std::size_t j = 0; j < nf; ++j) y[j] += ap * dy[j];
    for (std::size_t k = 0; k < nk; ++k) lam[k] += ad * dlam[k];
  }

  // Map the iterate back to the Hermitian formulation and recompute every
  // reported quantity from the returned data in original units.
  SdpSolution sol;
  sol.iterations = iters;
  sol.primal_blocks.reserve(nb);
  for (std::size_t b = 0; b < nb; ++b)
    sol.primal_blocks.push_back(from_embedding(X[b], p.blocks[b].dim));
  for (auto& blk : sol.primal_blocks) blk *= sc.s_rhs;
  sol.scalar_values.assign(nf, 0.0);
  for (std::size_t j = 0; j < nf; ++j) sol.scalar_values[j] = y[j] * sc.s_rhs;

  sol.dual_multipliers.assign(p.constraints.size(), 0.0);
  for (std::size_t k = 0; k < nk; ++k)
    sol.dual_multipliers[sc.rows[k].orig] = lam[k] * sc.s_obj / sc.rows[k].scale;

  double pv = 0.0;
  for (const auto& c : p.objective.coeffs) pv += real_inner(c.op, sol.primal_blocks[c.block]);
  for (std::size_t j = 0; j < p.objective.scalar_coeffs.size(); ++j)
    pv += p.objective.scalar_coeffs[j] * sol.scalar_values[j];
  double dv = 0.0;
  for (std::size_t k = 0; k < p.constraints.size(); ++k)
    dv += p.constraints[k].rhs * sol.dual_multipliers[k];
  sol.primal_value = pv;
  sol.dual_value = dv;
  sol.gap = std::abs(pv - dv);

  double pres = 0.0;
  for (std::size_t k = 0; k < p.constraints.size(); ++k) {
    const auto& con = p.constraints[k];
    double ax = 0.0;
    for (const auto& c : con.coeffs) ax += real_inner(c.op, sol.primal_blocks[c.block]);
    for (std::size_t j = 0; j < con.scalar_coeffs.size(); ++j)
      ax += con.scalar_coeffs[j] * sol.scalar_values[j];
    pres = std::max(pres, std::abs(con.rhs - ax));
  }
  sol.primal_residual = pres;

  const auto slacks = dual_slacks(p, sol.dual_multipliers);
  sol.primal_min_eigs.reserve(nb);
  sol.dual_slack_min_eigs.reserve(nb);
  double dres = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    sol.primal_min_eigs.push_back(min_eigenvalue(sol.primal_blocks[b]));
    const double se = min_eigenvalue(slacks[b]);
    sol.dual_slack_min_eigs.push_back(se);
    dres = std::max(dres, std::max(0.0, -se));
  }
  {
    std::vector<double> rfree(p.scalar_vars.size(), 0.0);
    for (std::size_t j = 0; j < p.objective.scalar_coeffs.size(); ++j)
      rfree[j] = p.objective.scalar_coeffs[j];
    for (std::size_t k = 0; k < p.constraints.size(); ++k) {
      const auto& con = p.constraints[k];
      for (std::size_t j = 0; j < con.scalar_coeffs.size(); ++j)
        rfree[j] -= sol.dual_multipliers[k] * con.scalar_coeffs[j];
    }
    for (double v : rfree) dres = std::max(dres, std::abs(v));
  }
  sol.dual_residual = dres;

  if (status == SolveStatus::optimal) {
    const bool ok = pres <= settings.feas_tolerance * bnorm &&
                    dres <= settings.feas_tolerance * cnorm &&
                    sol.gap <= settings.gap_tolerance;
    sol.status = ok ? SolveStatus::optimal : SolveStatus::max_iterations;
  } else {
    sol.status = status;
  }
  return sol;
}

}  // namespace steering
