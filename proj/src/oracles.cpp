#include "advbound/oracles.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace advbound {

namespace {

std::array<int, 256> histogram(const Input& x) {
    std::array<int, 256> h{};
    for (Value v : x) ++h[v];
    return h;
}

int equal_pair_count(const Input& x) {
    auto h = histogram(x);
    int pairs = 0;
    for (int c : h) pairs += c * (c - 1) / 2;
    return pairs;
}

int ones_count(const Input& x) {
    int c = 0;
    for (Value v : x) c += (v == 1);
    return c;
}

}  // namespace

bool eval_kdist(const Input& x, int k) {
    if (k < 2) throw std::invalid_argument("eval_kdist: k must be >= 2");
    auto h = histogram(x);
    for (int c : h)
        if (c >= k) return true;
    return false;
}

bool eval_graph_collision(const SimpleGraph& g, const Input& x) {
    if (static_cast<int>(x.size()) != g.n)
        throw std::invalid_argument("eval_graph_collision: input length != vertex count");
    for (auto [u, v] : g.edges)
        if (x[u] == 1 && x[v] == 1) return true;
    return false;
}

bool has_unique_ktuple(const Input& x, int k) {
    auto h = histogram(x);
    int witnesses = 0;
    bool exact = false;
    for (int c : h) {
        if (c >= k) {
            ++witnesses;
            exact = (c == k);
        }
    }
    return witnesses == 1 && exact;
}

std::vector<int> marked_positions(const Input& x, int k) {
    auto h = histogram(x);
    std::vector<int> best;
    for (int v = 0; v < 256; ++v) {
        if (h[v] < k) continue;
        std::vector<int> pos;
        for (int i = 0; i < static_cast<int>(x.size()) && static_cast<int>(pos.size()) < k; ++i)
            if (x[i] == v) pos.push_back(i);
        if (best.empty() || pos < best) best = std::move(pos);
    }
    return best;
}

std::optional<std::pair<int, int>> marked_edge(const SimpleGraph& g, const Input& x) {
    std::optional<std::pair<int, int>> best;
    for (auto [u, v] : g.edges) {
        if (x[u] != 1 || x[v] != 1) continue;
        std::pair<int, int> p{u, v};
        if (!best || p < *best) best = p;
    }
    return best;
}

namespace {

// alpha = x restricted to mask forces f=1 iff some value already reached k,
// or the free positions cannot all be absorbed below the k threshold.
bool kdist_assignment_forces(const Input& x, std::uint64_t mask, int k, int m) {
    int n = static_cast<int>(x.size());
    std::array<int, 256> h{};
    int revealed = 0;
    for (int i = 0; i < n; ++i) {
        if (mask >> i & 1) {
            ++h[x[i]];
            ++revealed;
        }
    }
    long long capacity = 0;
    for (int v = 1; v <= m; ++v) {
        if (h[v] >= k) return true;
        capacity += k - 1 - h[v];
    }
    return capacity < n - revealed;
}

bool gc_assignment_forces(const SimpleGraph& g, const Input& x, std::uint64_t mask) {
    for (auto [u, v] : g.edges) {
        bool both = (mask >> u & 1) && (mask >> v & 1);
        if (both && x[u] == 1 && x[v] == 1) return true;
    }
    return false;
}

}  // namespace

int certificate_complexity_1(const ProblemSpec& spec, const Input& x, int m) {
    int n = static_cast<int>(x.size());
    if (n > 12) throw std::invalid_argument("certificate_complexity_1: n > 12 unsupported");
    if (spec.kind == ProblemSpec::Kind::GraphCollision)
        return eval_graph_collision(spec.graph, x) ? 2 : -1;
    if (m <= 0) m = n;
    for (int s = 0; s <= n; ++s) {
        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
            if (std::popcount(mask) != s) continue;
            if (kdist_assignment_forces(x, mask, spec.k, m)) return s;
        }
    }
    return -1;
}

bool loaded_set_certifies(const ProblemSpec& spec, std::uint64_t loaded, const Input& x) {
    if (spec.kind == ProblemSpec::Kind::GraphCollision) {
        for (auto [u, v] : spec.graph.edges)
            if ((loaded >> u & 1) && (loaded >> v & 1) && x[u] == 1 && x[v] == 1) return true;
        return false;
    }
    std::array<int, 256> h{};
    int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i)
        if ((loaded >> i & 1) && ++h[x[i]] >= spec.k) return true;
    return false;
}

int independence_number(const SimpleGraph& g) {
    g.validate();
    if (g.n > 64) throw std::invalid_argument("independence_number: n > 64 unsupported");
    auto adj = g.adjacency();
    int best = 0;
    std::function<void(std::uint64_t, int)> rec = [&](std::uint64_t rem, int cur) {
        if (cur + std::popcount(rem) <= best) return;
        if (rem == 0) {
            best = std::max(best, cur);
            return;
        }
        int v = -1, dmax = -1;
        for (std::uint64_t r = rem; r != 0; r &= r - 1) {
            int u = std::countr_zero(r);
            int d = std::popcount(adj[u] & rem);
            if (d > dmax) {
                dmax = d;
                v = u;
            }
        }
        if (dmax <= 1) {
            int edges = 0;
            for (std::uint64_t r = rem; r != 0; r &= r - 1)
                edges += std::popcount(adj[std::countr_zero(r)] & rem);
            best = std::max(best, cur + std::popcount(rem) - edges / 2);
            return;
        }
        rec(rem & ~(adj[v] | (1ull << v)), cur + 1);
        rec(rem & ~(1ull << v), cur);
    };
    rec(g.n == 64 ? ~0ull : (1ull << g.n) - 1, 0);
    return best;
}

std::vector<int> reduction_schedule(int n, int k) {
    if (n < 1) throw std::invalid_argument("reduction_schedule: n must be >= 1");
    if (k < 2) throw std::invalid_argument("reduction_schedule: k must be >= 2");
    namespace mp = boost::multiprecision;
    mp::cpp_int num = n, den = 1;
    std::vector<int> out{n};
    for (;;) {
        num *= 2 * k;
        den *= 2 * k + 1;
        mp::cpp_int c = (num + den - 1) / den;
        if (c < k) break;
        out.push_back(static_cast<int>(c));
    }
    return out;
}

namespace {

bool passes_promise(const Input& x, bool positive, const ProblemSpec& spec, int n,
                    PromiseMode mode, double pair_cap_c) {
    switch (mode) {
        case PromiseMode::None:
            return true;
        case PromiseMode::UniqueKTuple:
            return !positive || has_unique_ktuple(x, spec.k);
        case PromiseMode::PairCap:
            return equal_pair_count(x) <= pair_cap_c * n;
        case PromiseMode::MaxOnes:
            return ones_count(x) <= 2 * spec.alpha_cap;
    }
    return true;
}

}  // namespace

PromiseDomain sample_promise_domain(const ProblemSpec& spec, int n, int m,
                                    const SampleCounts& counts, std::uint64_t seed,
                                    PromiseMode mode, double pair_cap_c) {
    if (n < 1 || n > 64) throw std::invalid_argument("sample_promise_domain: n out of range");
    if (m < 1 || m > 255) throw std::invalid_argument("sample_promise_domain: m out of range");
    if (spec.kind == ProblemSpec::Kind::GraphCollision) {
        if (m != 2) throw std::invalid_argument("graph collision requires m = 2");
        if (n != spec.graph.n) throw std::invalid_argument("n must match the graph");
    }

    auto classify = [&](const Input& x) {
        return spec.kind == ProblemSpec::Kind::KDistinctness ? eval_kdist(x, spec.k)
                                                             : eval_graph_collision(spec.graph, x);
    };
    Value lo = spec.kind == ProblemSpec::Kind::GraphCollision ? 0 : 1;
    Value hi = spec.kind == ProblemSpec::Kind::GraphCollision ? 1 : static_cast<Value>(m);

    PromiseDomain dom;
    dom.n = n;
    dom.m = m;
    dom.promise.mode = mode;
    dom.promise.k = spec.k;
    dom.promise.pair_cap_c = pair_cap_c;
    dom.promise.max_ones = spec.kind == ProblemSpec::Kind::GraphCollision ? 2 * spec.alpha_cap : 0;

    if (!counts.counts) {
        double total = std::pow(static_cast<double>(hi - lo + 1), n);
        if (total > 1e6)
            throw std::invalid_argument("exhaustive enumeration requires m^n <= 10^6");
        Input x(n, lo);
        for (;;) {
            bool positive = classify(x);
            if (passes_promise(x, positive, spec, n, mode, pair_cap_c))
                (positive ? dom.positives : dom.negatives).push_back(x);
            int i = n - 1;
            while (i >= 0 && x[i] == hi) x[i--] = lo;
            if (i < 0) break;
            ++x[i];
        }
        return dom;
    }

    auto [want_pos, want_neg] = *counts.counts;
    if (want_pos < 0 || want_neg < 0)
        throw std::invalid_argument("sample counts must be non-negative");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(lo, hi);
    std::set<Input> pos, neg;
    long long attempts = 0;
    const long long kMaxAttempts = 5'000'000;
    while (static_cast<int>(pos.size()) < want_pos || static_cast<int>(neg.size()) < want_neg) {
        if (++attempts > kMaxAttempts)
            throw std::runtime_error("sample_promise_domain: counts not achievable (rejection limit)");
        Input x(n);
        for (int i = 0; i < n; ++i) x[i] = static_cast<Value>(dist(rng));
        bool positive = classify(x);
        if (!passes_promise(x, positive, spec, n, mode, pair_cap_c)) continue;
        auto& bucket = positive ? pos : neg;
        int want = positive ? want_pos : want_neg;
        if (static_cast<int>(bucket.size()) < want) bucket.insert(x);
    }
    dom.positives.assign(pos.begin(), pos.end());
    dom.negatives.assign(neg.begin(), neg.end());
    return dom;
}

}  // namespace advbound
