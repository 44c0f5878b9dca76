#pragma once

#include <memory>
#include <vector>

#include "advbound/lgraph.hpp"

namespace advbound {

// Load r non-marked positions, then the k marked ones in order. The stage
// weights balance negative against positive complexity, giving total cost
// r + sum_i sqrt(T_i) up to the stage count.
struct JohnsonBuild {
    LearningGraph graph;
    Flow flow;
    PromiseDomain domain;
    Rat q{0};                      // 1 / C(n-k, r)
    std::vector<StageStats> stats;  // stage I, II.1, ..., II.k
};

// dom must label every positive with at least one k-tuple of equal values;
// the flow routes along the lexicographically first one. 1 <= r <= n-k.
JohnsonBuild build_johnson_kdist(const PromiseDomain& dom, int k, int r);

std::unique_ptr<Certificate> johnson_certificate(const JohnsonBuild& b);

}  // namespace advbound
