#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "advbound/cert.hpp"
#include "advbound/input.hpp"

namespace advbound {

// Certificate for graph collision under the bounded-independence promise.
// Stage I loads an r-subset of vertices through biased blocks whose light
// weight w0 = sqrt(cap/n) covers all negatives and whose heavy weight
// w1 = sqrt(n/cap) covers only vertices loaded with a 1. Stages II.1 / II.2
// load the two endpoints of the marked edge through plain blocks.
class GraphCollisionCertificate final : public Certificate {
public:
    GraphCollisionCertificate(SimpleGraph g, int alpha_cap, int r, PromiseDomain dom);

    const PromiseDomain& domain() const override { return dom_; }
    Rat unit() const override { return q_; }
    const std::vector<std::string>& stage_names() const override { return names_; }

    Rat entry_cross(int j, const Input& x, const Input& y) const override;
    void add_diagonal(const Input& z, bool positive,
                      std::vector<double>& per_stage) const override;
    int randomness_count(const Input& x) const override;
    Rat per_randomness_total(const Input& x, const Input& y, int ridx) const override;
    void for_each_generator(int j, const std::vector<Input>& sample,
                            const GeneratorSink& sink) const override;

    void scale_unit(const Rat& factor) override { q_ *= factor; }
    std::vector<std::string> weight_names() const override;
    void scale_weights(const std::vector<Rat>& factor_per_weight) override;

    int r() const { return r_; }
    // r q C(n,r) w0 + ones(y) q C(n-1,r-1) w1: what stage I must charge a
    // negative with the given number of ones.
    double stage1_negative_diagonal(int ones) const;

private:
    SimpleGraph g_;
    int cap_ = 0;
    int r_ = 0;
    PromiseDomain dom_;
    Rat q_{0};
    WeightSq w0_, w1_, wII1_, wII2_;
    std::vector<std::string> names_{"I", "II.1", "II.2"};
    std::vector<std::vector<int>> rsubsets_;      // ascending element lists
    std::map<Input, std::pair<int, int>> marked_;  // positive -> marked edge

    std::pair<int, int> marked_of(const Input& x) const;
    std::vector<int> consistent_subsets(std::pair<int, int> ab) const;  // indices
};

std::unique_ptr<Certificate> build_graph_collision(SimpleGraph g, int alpha_cap, int r,
                                                   PromiseDomain dom);

}  // namespace advbound
