#include "advbound/input.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace advbound {

std::string input_to_string(const Input& x) {
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(int(x[i]));
    }
    return s;
}

void SimpleGraph::add_edge(int u, int v) {
    if (u == v) throw std::invalid_argument("self loop");
    if (u > v) std::swap(u, v);
    edges.emplace_back(u, v);
}

void SimpleGraph::validate() const {
    if (n < 0 || n > 64) throw std::invalid_argument("graph order must be in [0, 64]");
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n || u >= v)
            throw std::invalid_argument("edge endpoints out of range");
    }
}

std::vector<std::uint64_t> SimpleGraph::adjacency() const {
    validate();
    std::vector<std::uint64_t> adj(n, 0);
    for (auto [u, v] : edges) {
        adj[u] |= 1ull << v;
        adj[v] |= 1ull << u;
    }
    return adj;
}

SimpleGraph SimpleGraph::from_edge_list(const std::string& text) {
    SimpleGraph g;
    std::istringstream in(text);
    std::string line;
    int maxv = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        long long u, v;
        if (!(ls >> u)) continue;  // blank line
        if (!(ls >> v)) throw std::invalid_argument("edge line needs two vertex ids: " + line);
        if (u < 1 || v < 1) throw std::invalid_argument("vertex ids are 1-based");
        g.add_edge(int(u - 1), int(v - 1));
        maxv = std::max<long long>(maxv, std::max(u, v));
    }
    g.n = maxv;
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    g.validate();
    return g;
}

std::string SimpleGraph::to_edge_list() const {
    std::string s;
    for (auto [u, v] : edges) s += std::to_string(u + 1) + " " + std::to_string(v + 1) + "\n";
    return s;
}

nlohmann::json SimpleGraph::to_json() const {
    nlohmann::json e = nlohmann::json::array();
    for (auto [u, v] : edges) e.push_back({u + 1, v + 1});
    return {{"n", n}, {"edges", e}};
}

SimpleGraph SimpleGraph::from_json(const nlohmann::json& j) {
    SimpleGraph g;
    g.n = j.at("n").get<int>();
    for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    g.validate();
    return g;
}

nlohmann::json PromiseSpec::to_json() const {
    switch (mode) {
        case PromiseMode::None:
            return {{"mode", "none"}};
        case PromiseMode::UniqueKTuple:
            return {{"mode", "unique-ktuple"}, {"k", k}};
        case PromiseMode::PairCap:
            return {{"mode", "pair-cap"}, {"k", k}, {"c", pair_cap_c}};
        case PromiseMode::MaxOnes:
            return {{"mode", "max-ones"}, {"maxOnes", max_ones}};
    }
    throw std::logic_error("unreachable");
}

PromiseSpec PromiseSpec::from_json(const nlohmann::json& j) {
    PromiseSpec p;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "none") {
        p.mode = PromiseMode::None;
    } else if (mode == "unique-ktuple") {
        p.mode = PromiseMode::UniqueKTuple;
        p.k = j.at("k").get<int>();
    } else if (mode == "pair-cap") {
        p.mode = PromiseMode::PairCap;
        p.k = j.at("k").get<int>();
        p.pair_cap_c = j.at("c").get<double>();
    } else if (mode == "max-ones") {
        p.mode = PromiseMode::MaxOnes;
        p.max_ones = j.at("maxOnes").get<int>();
    } else {
        throw std::invalid_argument("unknown promise mode: " + mode);
    }
    return p;
}

ProblemSpec ProblemSpec::kdist(int k) {
    if (k < 2) throw std::invalid_argument("k-distinctness needs k >= 2");
    ProblemSpec s;
    s.kind = Kind::KDistinctness;
    s.k = k;
    return s;
}

ProblemSpec ProblemSpec::graph_collision(SimpleGraph g, int alpha_cap) {
    g.validate();
    if (alpha_cap < 0) throw std::invalid_argument("alphaCap must be nonnegative");
    ProblemSpec s;
    s.kind = Kind::GraphCollision;
    s.graph = std::move(g);
    s.alpha_cap = alpha_cap;
    return s;
}

namespace {
nlohmann::json inputs_to_json(const std::vector<Input>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const Input& x : v) {
        nlohmann::json row = nlohmann::json::array();
        for (Value c : x) row.push_back(int(c));
        a.push_back(std::move(row));
    }
    return a;
}

std::vector<Input> inputs_from_json(const nlohmann::json& a, int n) {
    std::vector<Input> v;
    for (const auto& row : a) {
        Input x;
        for (const auto& c : row) x.push_back(Value(c.get<int>()));
        if (int(x.size()) != n) throw std::invalid_argument("input length mismatch");
        v.push_back(std::move(x));
    }
    return v;
}
}  // namespace

nlohmann::json PromiseDomain::to_json() const {
    return {{"n", n},
            {"m", m},
            {"promise", promise.to_json()},
            {"positives", inputs_to_json(positives)},
            {"negatives", inputs_to_json(negatives)}};
}

PromiseDomain PromiseDomain::from_json(const nlohmann::json& j) {
    PromiseDomain d;
    d.n = j.at("n").get<int>();
    d.m = j.at("m").get<int>();
    d.promise = PromiseSpec::from_json(j.at("promise"));
    d.positives = inputs_from_json(j.at("positives"), d.n);
    d.negatives = inputs_from_json(j.at("negatives"), d.n);
    return d;
}

}  // namespace advbound
