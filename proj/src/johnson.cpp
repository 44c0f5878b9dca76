#include "advbound/johnson.hpp"

#include <bit>
#include <stdexcept>

#include "advbound/oracles.hpp"

namespace advbound {

namespace {

// All s-subsets of [0, n) as sorted index lists, lexicographic.
void for_each_subset(int n, int s, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> idx(s);
    for (int i = 0; i < s; ++i) idx[i] = i;
    if (s == 0) {
        fn(idx);
        return;
    }
    for (;;) {
        fn(idx);
        int i = s - 1;
        while (i >= 0 && idx[i] == n - s + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int t = i + 1; t < s; ++t) idx[t] = idx[t - 1] + 1;
    }
}

std::uint64_t mask_of(const std::vector<int>& elems) {
    std::uint64_t m = 0;
    for (int e : elems) m |= 1ull << e;
    return m;
}

}  // namespace

JohnsonBuild build_johnson_kdist(const PromiseDomain& dom, int k, int r) {
    int n = dom.n;
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    if (r < 1 || r > n - k) throw std::invalid_argument("r must be in [1, n-k]");

    std::vector<std::string> names{"I"};
    for (int i = 1; i <= k; ++i) names.push_back("II." + std::to_string(i));

    JohnsonBuild b;
    b.domain = dom;
    b.graph = LearningGraph::empty(n, names);
    b.q = Rat(1, binomial(n - k, r));

    for_each_subset(n, r, [&](const std::vector<int>& R) {
        b.graph.add_transition(0, b.graph.root, R);
    });
    for (int i = 1; i <= k; ++i) {
        for_each_subset(n, r + i - 1, [&](const std::vector<int>& S) {
            std::uint64_t sm = mask_of(S);
            int origin = b.graph.key_vertex(sm);
            for (int j = 0; j < n; ++j)
                if (!(sm >> j & 1)) b.graph.add_transition(i, origin, {j});
        });
    }

    b.flow.p.assign(dom.positives.size(), std::vector<Rat>(b.graph.transitions.size(), Rat(0)));
    for (std::size_t xi = 0; xi < dom.positives.size(); ++xi) {
        const Input& x = dom.positives[xi];
        auto marked = marked_positions(x, k);
        if (static_cast<int>(marked.size()) != k)
            throw std::invalid_argument("positive input lacks a k-tuple of equal values");
        std::uint64_t mmask = mask_of(marked);
        for (std::size_t t = 0; t < b.graph.transitions.size(); ++t) {
            const auto& tr = b.graph.transitions[t];
            if (tr.stage == 0) {
                if ((mask_of(tr.elements) & mmask) == 0) b.flow.p[xi][t] = b.q;
            } else {
                int i = tr.stage;
                std::uint64_t sm = b.graph.vertices[tr.origin].loaded;
                std::uint64_t prefix = 0;
                for (int a = 0; a < i - 1; ++a) prefix |= 1ull << marked[a];
                if (tr.elements[0] == marked[i - 1] && (sm & mmask) == prefix)
                    b.flow.p[xi][t] = b.q;
            }
        }
    }

    for (int s = 0; s <= k; ++s) {
        b.stats.push_back(stage_stats(b.graph, b.flow, b.domain, s));
        b.graph.set_stage_weight(s, symmetric_stage_weight(b.stats.back()));
    }
    return b;
}

std::unique_ptr<Certificate> johnson_certificate(const JohnsonBuild& b) {
    return compile_to_certificate(b.graph, b.flow, b.domain, b.q);
}

}  // namespace advbound
