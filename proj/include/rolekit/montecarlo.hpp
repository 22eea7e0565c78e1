#pragma once

#include "rolekit/graph.hpp"
#include "rolekit/patterns.hpp"
#include "rolekit/rng.hpp"

#include <cstdint>

namespace rolekit {

/// Uniform draw among the 2^ell patterns of length ell.
WalkPattern random_pattern(int ell, CounterRng& rng);

/// One random-walk move from `current`: along a weighted out-arc on Direct
/// (row of P), along a weighted in-arc on Reverse (row of Q).
int mc_step(const RowStochasticPair& pq, int current, Step letter, CounterRng& rng);

/// Endpoint of a full random pattern walk from `start`.
int mc_walk(const RowStochasticPair& pq, int start, const WalkPattern& psi, CounterRng& rng);

struct MeetingEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    long long meets = 0;
    long long trials = 0;
};

/// Monte-Carlo estimate of the probability that two walkers starting at i
/// and j, sharing a per-trial uniformly random length-ell pattern but
/// stepping independently, end on the same node. Trials use counter-based
/// substreams keyed by (seed, trial), so results are independent of
/// execution order and of the worker count.
MeetingEstimate meeting_probability(const Digraph& g, int i, int j, int ell,
                                    long long trials, std::uint64_t seed);

} // namespace rolekit
