#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "steering/quantum.hpp"
#include "steering/steering_core.hpp"

namespace steering {

struct SearchConfig {
  std::uint64_t seed = 1;
  int max_rounds = 50;
  double stall_tolerance = 1e-6;
  int restart_budget = 100;
  SolverSettings solver;
  unsigned threads = 1;  // restarts may run concurrently; merge is deterministic
};

enum class SearchStatus { violation_found, no_violation_found };

struct TraceEntry {
  int restart = 0;
  int round = 0;
  std::string phase;  // "inequality" or "state"
  double c = 0.0;
};

struct SearchResult {
  SearchStatus status = SearchStatus::no_violation_found;
  double best_c = std::numeric_limits<double>::infinity();  // +inf sentinel when no violation
  std::optional<DensityOperator> best_state;
  std::optional<SteeringFunctional> best_functional;
  std::vector<TraceEntry> trace;
  int restarts_used = 0;
};

/// Alternates between the best steering inequality for the incumbent state's
/// ensemble and the best PPT state for the resulting witness, measurements
/// fixed to the two MUBs, until |delta C| < stall_tolerance or the round cap.
/// The input state need not be PPT; the first state phase projects into the
/// PPT set. Returns no_violation_found when the state is not steerable under
/// the MUBs (never throws for that).
SearchResult amplify(const DensityOperator& state, const SearchConfig& config);

/// Runs `restart_budget` independent amplify runs from Haar-random pure seed
/// states (restart r uses a seed derived from config.seed and r) and keeps the
/// strongest violation, deterministic tie-break on restart order.
SearchResult seesaw(const SearchConfig& config);

}  // namespace steering
