#include "steering/seesaw.hpp"

#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>

namespace steering {

namespace {

constexpr double kNoViolationTol = 1e-7;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SearchResult run_one(const DensityOperator& start, const SearchConfig& config, int restart) {
  const auto [b1, b2] = mub_bases();
  SearchResult res;
  DensityOperator state = start;
  double prev_c = std::numeric_limits<double>::infinity();

  for (int round = 1; round <= config.max_rounds; ++round) {
    const Assemblage e = assemblage_from_state(state, {b1, b2});
    const MembershipResult mem = lhs_membership(e, config.solver);
    if (mem.sdp.status != SolveStatus::optimal)
      throw std::runtime_error(std::string("seesaw: membership SDP failed with status ") +
                               to_string(mem.sdp.status));
    if (!mem.steerable) {
      // incumbent saturated (or the seed was never steerable under the MUBs)
      break;
    }

    // The dual-extracted certificate is feasible for the best-functional SDP,
    // so the refined optimum can only improve on it; keeping the refined
    // functional makes the inequality phase an exact minimization over the
    // unit-trace class.
    const SteeringFunctional extracted = extract_inequality(mem);
    BestFunctionalResult best = best_functional(e, config.solver);
    const double extracted_c = evaluate(extracted, e);
    if (extracted_c < best.value) {
      best.functional = extracted;
      best.value = extracted_c;
    }
    res.trace.push_back({restart, round, "inequality", best.value});

    const Witness w = build_witness(best.functional, b1, b2);
    const PptMinResult ppt = min_over_ppt(w, 3, 3, config.solver);
    res.trace.push_back({restart, round, "state", ppt.value});
    state = ppt.state;

    if (ppt.value < res.best_c) {
      res.best_c = ppt.value;
      res.best_state = state;
      res.best_functional = best.functional;
    }
    if (ppt.value > -kNoViolationTol) break;  // no PPT state violates this inequality
    if (std::abs(ppt.value - prev_c) < config.stall_tolerance) break;
    prev_c = ppt.value;
  }

  res.status = (res.best_c < -kNoViolationTol) ? SearchStatus::violation_found
                                               : SearchStatus::no_violation_found;
  if (res.status == SearchStatus::no_violation_found) {
    res.best_c = std::numeric_limits<double>::infinity();
    res.best_state.reset();
    res.best_functional.reset();
  }
  res.restarts_used = 1;
  return res;
}

}  // namespace

SearchResult amplify(const DensityOperator& state, const SearchConfig& config) {
  if (state.dim() != 9 || !state.bipartite() || state.dim_a() != 3)
    throw std::invalid_argument("amplify: state must live on a 3 x 3 system");
  if (config.max_rounds < 1 || !(config.stall_tolerance > 0.0))
    throw std::invalid_argument("amplify: invalid search config");
  return run_one(state, config, 0);
}

SearchResult seesaw(const SearchConfig& config) {
  if (config.max_rounds < 1 || config.restart_budget < 1 || !(config.stall_tolerance > 0.0))
    throw std::invalid_argument("seesaw: invalid search config");

  const int budget = config.restart_budget;
  std::vector<SearchResult> runs(budget);

  auto work = [&](int r) {
    const DensityOperator seed_state = random_pure_state(9, splitmix64(config.seed + static_cast<std::uint64_t>(r)));
    const DensityOperator start(seed_state.op(), 3, 3, 1e-9);
    runs[r] = run_one(start, config, r);
  };

  const unsigned nthreads =
      std::max(1u, std::min<unsigned>(config.threads, std::thread::hardware_concurrency()));
  if (nthreads <= 1 || budget == 1) {
    for (int r = 0; r < budget; ++r) work(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::future<void>> futs;
    for (unsigned t = 0; t < std::min(nthreads, static_cast<unsigned>(budget)); ++t) {
      futs.push_back(std::async(std::launch::async, [&]() {
        for (int r = next.fetch_add(1); r < budget; r = next.fetch_add(1)) work(r);
      }));
    }
    for (auto& f : futs) f.get();
  }

  SearchResult merged;
  merged.restarts_used = budget;
  for (int r = 0; r < budget; ++r) {
    for (const auto& t : runs[r].trace) merged.trace.push_back(t);
    if (runs[r].status == SearchStatus::violation_found && runs[r].best_c < merged.best_c) {
      merged.best_c = runs[r].best_c;
      merged.best_state = runs[r].best_state;
      merged.best_functional = runs[r].best_functional;
      merged.status = SearchStatus::violation_found;
    }
  }
  if (merged.status == SearchStatus::no_violation_found)
    merged.best_c = std::numeric_limits<double>::infinity();
  return merged;
}

}  // namespace steering
