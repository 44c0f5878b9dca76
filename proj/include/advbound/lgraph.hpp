#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "advbound/cert.hpp"
#include "advbound/input.hpp"
#include "advbound/rational.hpp"

namespace advbound {

// Vertices are subsets of positions. A transition loading several elements
// expands into a path of single-element arcs through interior vertices that
// carry the transition id as a tag, so paths of distinct transitions never
// share interior vertices.
struct LGVertex {
    std::uint64_t loaded = 0;
    int tag = -1;  // -1: key vertex shared between transitions
};

struct LGArc {
    int origin = -1;
    int head = -1;
    int j = -1;  // position loaded by this arc
    int stage = -1;
    int transition = -1;
    WeightSq w;
};

struct LGTransition {
    int stage = -1;
    int origin = -1;              // key vertex
    std::vector<int> elements;    // loaded in this order
    std::vector<int> arcs;
};

class LearningGraph {
public:
    int n = 0;
    std::vector<std::string> stage_names;
    std::vector<LGVertex> vertices;
    std::vector<LGArc> arcs;
    std::vector<LGTransition> transitions;
    int root = -1;

    static LearningGraph empty(int n, std::vector<std::string> stage_names);

    int key_vertex(std::uint64_t loaded);  // creates on demand
    int add_transition(int stage, int origin_vertex, const std::vector<int>& elements);
    void set_transition_weight(int transition, const WeightSq& w);
    void set_stage_weight(int stage, const WeightSq& w);

    void validate() const;

    nlohmann::json to_json() const;
    static LearningGraph from_json(const nlohmann::json&);

private:
    std::map<std::uint64_t, int> key_index_;
};

// One unit of flow per positive input, stored per transition: every arc of a
// transition carries the same value.
struct Flow {
    std::vector<std::vector<Rat>> p;  // [positive index][transition]

    nlohmann::json to_json() const;
    static Flow from_json(const nlohmann::json&);
};

struct FlowReport {
    bool ok = false;
    long long checked = 0;
    std::vector<std::string> violations;  // capped; empty iff ok
};

// accepting(loaded, x): the loaded set contains a 1-certificate for x.
using AcceptingPredicate = std::function<bool(std::uint64_t, const Input&)>;

// Unit flow out of the root, conservation elsewhere, absorption only at
// accepting vertices, for every positive input of the domain.
FlowReport verify_flow(const LearningGraph& g, const Flow& flow, const PromiseDomain& dom,
                       const AcceptingPredicate& accepting);

double negative_complexity(const LearningGraph& g);
double positive_complexity(const LearningGraph& g, const Flow& flow, int pos_index);
double total_complexity(const LearningGraph& g, const Flow& flow, const PromiseDomain& dom);

struct StageStats {
    long long transitions = 0;  // on the stage
    long long used = 0;         // by any fixed positive input
    Rat q{0};                   // the unique nonzero flow value on the stage
    Rat speciality() const { return Rat(transitions, used); }
};

// Requires the flow to be symmetric on the stage: every positive uses the
// same number of transitions, all carrying the same nonzero value.
StageStats stage_stats(const LearningGraph& g, const Flow& flow, const PromiseDomain& dom,
                       int stage);

// w = q / sqrt(T): balances the stage's positive and negative complexity.
WeightSq symmetric_stage_weight(const StageStats& s);

// Explicit dual-program solution from the weighted graph and flow. The unit
// is the common flow value q of a symmetric flow.
std::unique_ptr<Certificate> compile_to_certificate(LearningGraph g, Flow flow,
                                                    PromiseDomain dom, Rat unit);

}  // namespace advbound
