#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "advbound/input.hpp"
#include "advbound/rational.hpp"

namespace advbound {

// 1 iff some value occurs at least k times.
bool eval_kdist(const Input& x, int k);

// 1 iff some edge has both endpoints set to 1.
bool eval_graph_collision(const SimpleGraph& g, const Input& x);

// Exactly one value occurs >= k times and it occurs exactly k times.
bool has_unique_ktuple(const Input& x, int k);

// Positions of the witness k-tuple: the lexicographically first k-subset of
// equal positions (unique one under the promise). Empty if f(x) = 0.
std::vector<int> marked_positions(const Input& x, int k);

// Lexicographically first marked edge {a, b} with x_a = x_b = 1, if any.
std::optional<std::pair<int, int>> marked_edge(const SimpleGraph& g, const Input& x);

// Smallest assignment satisfied by x that forces the function to 1.
// m defaults to n for k-distinctness; graph collision ignores it.
int certificate_complexity_1(const ProblemSpec& spec, const Input& x, int m = 0);

// The loaded set itself exhibits a 1-certificate: k equal values inside it,
// or a marked edge with both endpoints inside it.
bool loaded_set_certifies(const ProblemSpec& spec, std::uint64_t loaded, const Input& x);

int independence_number(const SimpleGraph& g);

// Instance sizes ceil((2k/(2k+1))^i * n); index 0 always present, later
// indices while the exact value stays >= k.
std::vector<int> reduction_schedule(int n, int k);

struct SampleCounts {
    // nullopt: exhaustive enumeration (requires m^n <= 10^6).
    std::optional<std::pair<int, int>> counts;

    static SampleCounts exhaustive() { return {}; }
    static SampleCounts sample(int pos, int neg) { return {std::pair<int, int>{pos, neg}}; }
};

// Builds a positive/negative input sample for the function, filtered by the
// requested promise. Deterministic under the seed; outputs sorted, no dupes.
PromiseDomain sample_promise_domain(const ProblemSpec& spec, int n, int m,
                                    const SampleCounts& counts, std::uint64_t seed,
                                    PromiseMode mode = PromiseMode::None,
                                    double pair_cap_c = 0.0);

}  // namespace advbound
