#include "advbound/descriptor.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "advbound/gcollision.hpp"
#include "advbound/johnson.hpp"
#include "advbound/kdist.hpp"
#include "advbound/oracles.hpp"

namespace advbound {

namespace {

constexpr const char* kSchema = "advbound/1";

PromiseSpec promise_of(const Descriptor& d) {
    PromiseSpec p;
    p.mode = d.promise;
    p.k = d.k;
    p.pair_cap_c = d.pair_cap_c;
    p.max_ones = d.construction == Construction::GraphCollision ? 2 * d.alpha_cap : 0;
    return p;
}

}  // namespace

std::string construction_name(Construction c) {
    switch (c) {
        case Construction::Johnson: return "johnson";
        case Construction::GraphCollision: return "graph-collision";
        case Construction::KDistFirst: return "kdist-first";
        case Construction::KDistFinal: return "kdist-final";
    }
    throw std::logic_error("unreachable");
}

Construction construction_from_name(const std::string& name) {
    if (name == "johnson") return Construction::Johnson;
    if (name == "graph-collision") return Construction::GraphCollision;
    if (name == "kdist-first") return Construction::KDistFirst;
    if (name == "kdist-final") return Construction::KDistFinal;
    throw std::invalid_argument("unknown construction: " + name);
}

nlohmann::json Descriptor::to_json() const {
    nlohmann::json domain{{"mode", exhaustive ? "exhaustive" : "sample"},
                          {"promise", promise_of(*this).to_json()}};
    if (!exhaustive) {
        domain["positives"] = sample_pos;
        domain["negatives"] = sample_neg;
    }
    nlohmann::json j{{"schema", kSchema},
                     {"construction", construction_name(construction)},
                     {"n", n},
                     {"m", m},
                     {"r", r},
                     {"seed", seed},
                     {"domain", domain}};
    if (construction == Construction::GraphCollision) {
        j["alphaCap"] = alpha_cap;
        SimpleGraph canon = graph;  // canonical edge order, like from_json
        std::sort(canon.edges.begin(), canon.edges.end());
        canon.edges.erase(std::unique(canon.edges.begin(), canon.edges.end()),
                          canon.edges.end());
        j["graph"] = canon.to_json();
    } else {
        j["k"] = k;
    }
    return j;
}

Descriptor Descriptor::from_json(const nlohmann::json& j) {
    if (j.at("schema").get<std::string>() != kSchema)
        throw std::invalid_argument("unsupported schema: " +
                                    j.at("schema").get<std::string>());
    Descriptor d;
    d.construction = construction_from_name(j.at("construction").get<std::string>());
    d.n = j.at("n").get<int>();
    d.m = j.at("m").get<int>();
    d.r = j.at("r").get<std::vector<int>>();
    d.seed = j.at("seed").get<std::uint64_t>();

    if (d.construction == Construction::GraphCollision) {
        d.alpha_cap = j.at("alphaCap").get<int>();
        d.graph = SimpleGraph::from_json(j.at("graph"));
        if (d.m != 2) throw std::invalid_argument("graph collision requires m = 2");
        if (d.n != d.graph.n) throw std::invalid_argument("n must match the graph");
    } else {
        d.k = j.at("k").get<int>();
        const std::size_t want = d.construction == Construction::Johnson
                                     ? 1
                                     : static_cast<std::size_t>(d.k - 1);
        if (d.r.size() != want)
            throw std::invalid_argument("wrong number of subset sizes for " +
                                        construction_name(d.construction));
    }
    if (d.construction == Construction::GraphCollision && d.r.size() != 1)
        throw std::invalid_argument("graph collision takes a single subset size");

    const nlohmann::json& domain = j.at("domain");
    const std::string mode = domain.at("mode").get<std::string>();
    if (mode == "exhaustive") {
        d.exhaustive = true;
    } else if (mode == "sample") {
        d.exhaustive = false;
        d.sample_pos = domain.at("positives").get<int>();
        d.sample_neg = domain.at("negatives").get<int>();
    } else {
        throw std::invalid_argument("unknown domain mode: " + mode);
    }
    PromiseSpec p = PromiseSpec::from_json(domain.at("promise"));
    d.promise = p.mode;
    d.pair_cap_c = p.pair_cap_c;
    return d;
}

std::string Descriptor::to_string() const { return to_json().dump(2) + "\n"; }

Descriptor Descriptor::from_string(const std::string& text) {
    return from_json(nlohmann::json::parse(text));
}

ProblemSpec Descriptor::problem() const {
    if (construction == Construction::GraphCollision)
        return ProblemSpec::graph_collision(graph, alpha_cap);
    return ProblemSpec::kdist(k);
}

PromiseDomain Descriptor::build_domain() const {
    const SampleCounts counts =
        exhaustive ? SampleCounts::exhaustive() : SampleCounts::sample(sample_pos, sample_neg);
    return sample_promise_domain(problem(), n, m, counts, seed, promise, pair_cap_c);
}

std::unique_ptr<Certificate> Descriptor::build() const {
    switch (construction) {
        case Construction::Johnson:
            return johnson_certificate(build_johnson_kdist(build_domain(), k, r[0]));
        case Construction::GraphCollision:
            return build_graph_collision(graph, alpha_cap, r[0], build_domain());
        case Construction::KDistFirst:
            return build_kdist_first(k, r, build_domain());
        case Construction::KDistFinal:
            return build_kdist_final(k, r, build_domain());
    }
    throw std::logic_error("unreachable");
}

bool operator==(const Descriptor& a, const Descriptor& b) {
    return a.to_json() == b.to_json();
}

Descriptor johnson_descriptor(int n, int m, int k, int r) {
    Descriptor d;
    d.construction = Construction::Johnson;
    d.n = n;
    d.m = m;
    d.k = k;
    d.r = {r};
    d.promise = PromiseMode::UniqueKTuple;
    return d;
}

Descriptor graph_collision_descriptor(SimpleGraph g, int alpha_cap, int r) {
    Descriptor d;
    d.construction = Construction::GraphCollision;
    d.n = g.n;
    d.m = 2;
    d.alpha_cap = alpha_cap;
    d.graph = std::move(g);
    d.r = {r};
    d.promise = PromiseMode::MaxOnes;
    return d;
}

Descriptor kdist_descriptor(bool final_form, int k, int n, int m, std::vector<int> r) {
    Descriptor d;
    d.construction = final_form ? Construction::KDistFinal : Construction::KDistFirst;
    d.n = n;
    d.m = m;
    d.k = k;
    d.r = std::move(r);
    d.promise = PromiseMode::UniqueKTuple;
    return d;
}

}  // namespace advbound
