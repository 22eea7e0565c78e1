#include "rolekit/montecarlo.hpp"

#include "rolekit/errors.hpp"
#include "rolekit/parallel.hpp"

#include <atomic>
#include <cmath>
#include <string>
#include <vector>

namespace rolekit {

WalkPattern random_pattern(int ell, CounterRng& rng) {
    if (ell < 1) throw InputError("pattern length must be >= 1");
    std::vector<Step> steps(ell);
    for (int i = 0; i < ell; ++i) steps[i] = rng.next_bool() ? Step::Direct : Step::Reverse;
    return WalkPattern(std::move(steps));
}

int mc_step(const RowStochasticPair& pq, int current, Step letter, CounterRng& rng) {
    const SpMat& T = letter == Step::Direct ? pq.P : pq.Q;
    if (current < 0 || current >= T.rows()) throw InputError("walker node out of range");
    double u = rng.next_unit();
    double acc = 0.0;
    int last = -1;
    for (SpMat::InnerIterator it(T, current); it; ++it) {
        acc += it.value();
        last = static_cast<int>(it.col());
        if (u < acc) return last;
    }
    if (last < 0)
        throw InputError("node " + std::to_string(current) +
                         " has no move for the requested direction");
    return last; // row sums to 1 within rounding; u landed in the tail gap
}

int mc_walk(const RowStochasticPair& pq, int start, const WalkPattern& psi, CounterRng& rng) {
    int at = start;
    for (std::size_t k = 0; k < psi.length(); ++k) at = mc_step(pq, at, psi.step(k), rng);
    return at;
}

MeetingEstimate meeting_probability(const Digraph& g, int i, int j, int ell, long long trials,
                                    std::uint64_t seed) {
    if (trials < 1) throw InputError("trial count must be >= 1");
    if (ell < 1) throw InputError("pattern length must be >= 1");
    if (i < 0 || i >= g.node_count() || j < 0 || j >= g.node_count())
        throw InputError("walker start node out of range");
    RowStochasticPair pq = transition_pair(g);

    std::atomic<long long> meets{0};
    parallel_for(0, trials, [&](long long lo, long long hi) {
        long long local = 0;
        for (long long t = lo; t < hi; ++t) {
            // Substreams per trial: pattern, walker A, walker B.
            auto tu = static_cast<std::uint64_t>(t);
            CounterRng pattern_rng(seed, tu * 4 + 1);
            CounterRng walk_a(seed, tu * 4 + 2);
            CounterRng walk_b(seed, tu * 4 + 3);
            WalkPattern psi = random_pattern(ell, pattern_rng);
            int end_a = mc_walk(pq, i, psi, walk_a);
            int end_b = mc_walk(pq, j, psi, walk_b);
            if (end_a == end_b) ++local;
        }
        meets.fetch_add(local, std::memory_order_relaxed);
    });

    MeetingEstimate out;
    out.meets = meets.load();
    out.trials = trials;
    out.estimate = static_cast<double>(out.meets) / static_cast<double>(trials);
    out.stderr_ = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(trials));
    return out;
}

} // namespace rolekit
