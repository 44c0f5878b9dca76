#include "advbound/gcollision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "advbound/oracles.hpp"

namespace advbound {

namespace {

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

}  // namespace

GraphCollisionCertificate::GraphCollisionCertificate(SimpleGraph g, int alpha_cap, int r,
                                                     PromiseDomain dom)
    : g_(std::move(g)), cap_(alpha_cap), r_(r), dom_(std::move(dom)) {
    g_.validate();
    int n = g_.n;
    if (dom_.n != n) throw std::invalid_argument("domain size must match the graph");
    if (cap_ < 1 || cap_ > n) throw std::invalid_argument("alpha cap out of range");
    if (r_ < 1 || r_ > n - 2) throw std::invalid_argument("r must be in [1, n-2]");
    if (binomial(n, r_) > 200000) throw std::invalid_argument("instance too large");

    q_ = Rat(1, binomial(n - 2, r_));
    w0_ = WeightSq(Rat(cap_, n));
    w1_ = WeightSq(Rat(n, cap_));
    wII1_ = WeightSq(Rat(1, n));
    wII2_ = WeightSq(Rat(r_, checked_mul(n, n)));

    for_each_subset(n, r_, [&](const std::vector<int>& S) { rsubsets_.push_back(S); });

    for (const auto& x : dom_.positives) {
        auto e = marked_edge(g_, x);
        if (!e) throw std::invalid_argument("positive input without a marked edge");
        marked_.emplace(x, *e);
    }
}

std::pair<int, int> GraphCollisionCertificate::marked_of(const Input& x) const {
    auto it = marked_.find(x);
    if (it == marked_.end()) throw std::invalid_argument("input is not a domain positive");
    return it->second;
}

std::vector<int> GraphCollisionCertificate::consistent_subsets(std::pair<int, int> ab) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < rsubsets_.size(); ++i) {
        const auto& S = rsubsets_[i];
        if (!std::binary_search(S.begin(), S.end(), ab.first) &&
            !std::binary_search(S.begin(), S.end(), ab.second))
            out.push_back(static_cast<int>(i));
    }
    return out;
}

int GraphCollisionCertificate::randomness_count(const Input& x) const {
    return static_cast<int>(consistent_subsets(marked_of(x)).size());
}

Rat GraphCollisionCertificate::per_randomness_total(const Input& x, const Input& y,
                                                    int ridx) const {
    auto ab = marked_of(x);
    const auto& S = rsubsets_[consistent_subsets(ab).at(ridx)];
    for (int j : S)
        if (x[j] != y[j]) return q_;  // first value split inside R
    if (x[ab.first] != y[ab.first]) return q_;   // II.1 arc, agreement on R
    if (x[ab.second] != y[ab.second]) return q_;  // II.2 arc, agreement on R + {a}
    return Rat(0);  // y would carry the marked edge itself
}

Rat GraphCollisionCertificate::entry_cross(int j, const Input& x, const Input& y) const {
    auto ab = marked_of(x);
    Rat total(0);
    auto agree_on = [&](const std::vector<int>& pos, int below) {
        for (int t : pos) {
            if (t >= below) break;
            if (x[t] != y[t]) return false;
        }
        return true;
    };
    for (int si : consistent_subsets(ab)) {
        const auto& S = rsubsets_[si];
        // stage I block at the arc of S loading j
        if (std::binary_search(S.begin(), S.end(), j)) {
            if (agree_on(S, j) && !(x[j] == 0 && y[j] == 0)) total += q_;
            continue;
        }
        bool agree_all = agree_on(S, g_.n);
        if (!agree_all) continue;
        if (j == ab.first) total += q_;  // II.1 arc A^S_a
        if (j == ab.second && x[ab.first] == y[ab.first]) total += q_;  // II.2 arc A^{S+a}_b
    }
    return total;
}

void GraphCollisionCertificate::add_diagonal(const Input& z, bool positive,
                                             std::vector<double>& per_stage) const {
    double q = to_double(q_);
    if (positive) {
        auto ab = marked_of(z);
        for (int si : consistent_subsets(ab)) {
            const auto& S = rsubsets_[si];
            for (int j : S) per_stage[0] += z[j] == 1 ? q / w0_.value() : q / w1_.value();
            per_stage[1] += q / wII1_.value();
            per_stage[2] += q / wII2_.value();
        }
        return;
    }
    for (const auto& S : rsubsets_) {
        for (int j : S) {
            per_stage[0] += q * w0_.value();
            if (z[j] == 1) per_stage[0] += q * w1_.value();
        }
        for (int j = 0; j < g_.n; ++j)
            if (!std::binary_search(S.begin(), S.end(), j)) per_stage[1] += q * wII1_.value();
    }
    // II.2 blocks live on (r+1)-subsets
    long long arcs2 = checked_mul(binomial(g_.n, r_ + 1), g_.n - r_ - 1);
    per_stage[2] += arcs2 * q * wII2_.value();
}

double GraphCollisionCertificate::stage1_negative_diagonal(int ones) const {
    double q = to_double(q_);
    return r_ * q * binomial(g_.n, r_) * w0_.value() +
           ones * q * binomial(g_.n - 1, r_ - 1) * w1_.value();
}

void GraphCollisionCertificate::for_each_generator(int j, const std::vector<Input>& sample,
                                                   const GeneratorSink& sink) const {
    auto is_positive = [&](const Input& z) { return marked_.count(z) != 0; };

    // stage I arcs: every r-subset S containing j, loading j after S's smaller
    // elements. Biased block: psi couples taken matched positives with all
    // negatives at w0; phi couples taken unmatched positives with matched
    // negatives at w1.
    for (const auto& S : rsubsets_) {
        if (!std::binary_search(S.begin(), S.end(), j)) continue;
        std::vector<int> prefix;
        for (int t : S) {
            if (t == j) break;
            prefix.push_back(t);
        }
        std::map<Input, std::pair<GeneratorTerm, GeneratorTerm>> groups;  // psi, phi
        for (std::size_t idx = 0; idx < sample.size(); ++idx) {
            const Input& z = sample[idx];
            Input key;
            for (int t : prefix) key.push_back(z[t]);
            auto& [psi, phi] = groups[key];
            if (is_positive(z)) {
                auto ab = marked_.at(z);
                bool consistent = !std::binary_search(S.begin(), S.end(), ab.first) &&
                                  !std::binary_search(S.begin(), S.end(), ab.second);
                if (!consistent) continue;
                if (z[j] == 1)
                    psi.entries.emplace_back(int(idx), 1.0 / std::sqrt(w0_.value()));
                else
                    phi.entries.emplace_back(int(idx), 1.0 / std::sqrt(w1_.value()));
            } else {
                psi.entries.emplace_back(int(idx), std::sqrt(w0_.value()));
                if (z[j] == 1) phi.entries.emplace_back(int(idx), std::sqrt(w1_.value()));
            }
        }
        for (auto& [key, pair] : groups) {
            auto& [psi, phi] = pair;
            psi.coeff = q_;
            phi.coeff = q_;
            if (!psi.entries.empty()) sink(psi);
            if (!phi.entries.empty()) sink(phi);
        }
    }

    // stage II arcs A^S_j, plain blocks
    auto plain_stage = [&](int size, const WeightSq& w,
                           const std::function<bool(const Input&, const std::vector<int>&)>& taken) {
        for_each_subset(g_.n, size, [&](const std::vector<int>& S) {
            if (std::binary_search(S.begin(), S.end(), j)) return;
            std::map<Input, GeneratorTerm> groups;
            for (std::size_t idx = 0; idx < sample.size(); ++idx) {
                const Input& z = sample[idx];
                Input key;
                for (int t : S) key.push_back(z[t]);
                double val;
                if (is_positive(z)) {
                    if (!taken(z, S)) continue;
                    val = 1.0 / std::sqrt(w.value());
                } else {
                    val = std::sqrt(w.value());
                }
                auto& term = groups[key];
                term.entries.emplace_back(int(idx), val);
            }
            for (auto& [key, term] : groups) {
                term.coeff = q_;
                sink(term);
            }
        });
    };
    plain_stage(r_, wII1_, [&](const Input& z, const std::vector<int>& S) {
        auto ab = marked_.at(z);
        return j == ab.first && !std::binary_search(S.begin(), S.end(), ab.second);
    });
    plain_stage(r_ + 1, wII2_, [&](const Input& z, const std::vector<int>& S) {
        auto ab = marked_.at(z);
        return j == ab.second && std::binary_search(S.begin(), S.end(), ab.first);
    });
}

std::vector<std::string> GraphCollisionCertificate::weight_names() const {
    return {"I.w0", "I.w1", "II.1.w", "II.2.w"};
}

void GraphCollisionCertificate::scale_weights(const std::vector<Rat>& f) {
    if (f.size() != 4) throw std::invalid_argument("expected one factor per weight");
    w0_ = WeightSq(w0_.sq * f[0] * f[0]);
    w1_ = WeightSq(w1_.sq * f[1] * f[1]);
    wII1_ = WeightSq(wII1_.sq * f[2] * f[2]);
    wII2_ = WeightSq(wII2_.sq * f[3] * f[3]);
}

std::unique_ptr<Certificate> build_graph_collision(SimpleGraph g, int alpha_cap, int r,
                                                   PromiseDomain dom) {
    return std::make_unique<GraphCollisionCertificate>(std::move(g), alpha_cap, r,
                                                       std::move(dom));
}

}  // namespace advbound
