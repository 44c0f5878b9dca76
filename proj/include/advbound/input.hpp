#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace advbound {

// One input word. k-distinctness uses symbols 1..m, graph collision uses 0/1.
using Value = std::uint8_t;
using Input = std::vector<Value>;

std::string input_to_string(const Input& x);

struct SimpleGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // 0-based, u < v, deduplicated

    void add_edge(int u, int v);
    void validate() const;
    std::vector<std::uint64_t> adjacency() const;  // bitmask rows, n <= 64

    // "u v" per line, 1-based vertex ids, blank lines ignored.
    static SimpleGraph from_edge_list(const std::string& text);
    std::string to_edge_list() const;
    nlohmann::json to_json() const;
    static SimpleGraph from_json(const nlohmann::json&);
};

enum class PromiseMode { None, UniqueKTuple, PairCap, MaxOnes };

struct PromiseSpec {
    PromiseMode mode = PromiseMode::None;
    int k = 0;              // UniqueKTuple / PairCap
    double pair_cap_c = 0;  // PairCap: at most c*n coincident pairs
    int max_ones = 0;       // MaxOnes

    nlohmann::json to_json() const;
    static PromiseSpec from_json(const nlohmann::json&);
};

struct ProblemSpec {
    enum class Kind { KDistinctness, GraphCollision };
    Kind kind = Kind::KDistinctness;
    int k = 2;          // KDistinctness
    SimpleGraph graph;  // GraphCollision
    int alpha_cap = 0;  // GraphCollision: promised bound on the number of ones / 2

    static ProblemSpec kdist(int k);
    static ProblemSpec graph_collision(SimpleGraph g, int alpha_cap);
};

struct PromiseDomain {
    int n = 0;
    int m = 0;
    PromiseSpec promise;
    std::vector<Input> positives;  // lexicographically sorted, no duplicates
    std::vector<Input> negatives;

    nlohmann::json to_json() const;
    static PromiseDomain from_json(const nlohmann::json&);
};

}  // namespace advbound
