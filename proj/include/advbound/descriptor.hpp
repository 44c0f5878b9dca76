#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "advbound/cert.hpp"
#include "advbound/input.hpp"

namespace advbound {

enum class Construction { Johnson, GraphCollision, KDistFirst, KDistFinal };

std::string construction_name(Construction c);
Construction construction_from_name(const std::string& name);

// Everything needed to rebuild a certificate bit for bit: the problem
// parameters plus the domain sampling recipe. Serialized as schema advbound/1,
// so a verification run can be reproduced from the descriptor alone.
struct Descriptor {
    Construction construction = Construction::Johnson;
    int n = 0;
    int m = 0;  // alphabet size; graph collision fixes it to 2
    int k = 2;  // equal-value tuple order (johnson and both kdist forms)
    std::vector<int> r;  // subset sizes: one entry, or k-1 for kdist
    int alpha_cap = 0;   // graph collision
    SimpleGraph graph;   // graph collision
    std::uint64_t seed = 0;
    bool exhaustive = true;
    int sample_pos = 0;
    int sample_neg = 0;
    PromiseMode promise = PromiseMode::None;
    double pair_cap_c = 0;

    nlohmann::json to_json() const;
    static Descriptor from_json(const nlohmann::json& j);
    std::string to_string() const;  // two-space indented JSON
    static Descriptor from_string(const std::string& text);

    ProblemSpec problem() const;
    // Deterministic under (seed, counts): repeated calls give equal domains.
    PromiseDomain build_domain() const;
    std::unique_ptr<Certificate> build() const;
};

bool operator==(const Descriptor& a, const Descriptor& b);

Descriptor johnson_descriptor(int n, int m, int k, int r);
Descriptor graph_collision_descriptor(SimpleGraph g, int alpha_cap, int r);
Descriptor kdist_descriptor(bool final_form, int k, int n, int m, std::vector<int> r);

}  // namespace advbound
