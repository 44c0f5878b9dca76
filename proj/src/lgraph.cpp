#include "advbound/lgraph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace advbound {

LearningGraph LearningGraph::empty(int n, std::vector<std::string> stage_names) {
    if (n < 1 || n > 64) throw std::invalid_argument("learning graph order must be in [1, 64]");
    LearningGraph g;
    g.n = n;
    g.stage_names = std::move(stage_names);
    g.root = g.key_vertex(0);
    return g;
}

int LearningGraph::key_vertex(std::uint64_t loaded) {
    auto it = key_index_.find(loaded);
    if (it != key_index_.end()) return it->second;
    int id = static_cast<int>(vertices.size());
    vertices.push_back({loaded, -1});
    key_index_.emplace(loaded, id);
    return id;
}

int LearningGraph::add_transition(int stage, int origin_vertex, const std::vector<int>& elements) {
    if (stage < 0 || stage >= static_cast<int>(stage_names.size()))
        throw std::invalid_argument("stage out of range");
    if (elements.empty()) throw std::invalid_argument("transition loads nothing");
    int tid = static_cast<int>(transitions.size());
    LGTransition tr;
    tr.stage = stage;
    tr.origin = origin_vertex;
    tr.elements = elements;
    std::uint64_t loaded = vertices[origin_vertex].loaded;
    int cur = origin_vertex;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        int j = elements[i];
        if (j < 0 || j >= n) throw std::invalid_argument("loaded position out of range");
        if (loaded >> j & 1) throw std::invalid_argument("transition reloads a position");
        loaded |= 1ull << j;
        int nxt;
        if (i + 1 == elements.size()) {
            nxt = key_vertex(loaded);
        } else {
            nxt = static_cast<int>(vertices.size());
            vertices.push_back({loaded, tid});
        }
        arcs.push_back({cur, nxt, j, stage, tid, WeightSq{}});
        tr.arcs.push_back(static_cast<int>(arcs.size()) - 1);
        cur = nxt;
    }
    transitions.push_back(std::move(tr));
    return tid;
}

void LearningGraph::set_transition_weight(int transition, const WeightSq& w) {
    for (int a : transitions.at(transition).arcs) arcs[a].w = w;
}

void LearningGraph::set_stage_weight(int stage, const WeightSq& w) {
    for (auto& a : arcs)
        if (a.stage == stage) a.w = w;
}

void LearningGraph::validate() const {
    if (root < 0 || vertices.at(root).loaded != 0) throw std::logic_error("missing root");
    for (const auto& a : arcs) {
        const auto& o = vertices.at(a.origin);
        const auto& h = vertices.at(a.head);
        if (o.loaded >> a.j & 1) throw std::logic_error("arc reloads a position");
        if (h.loaded != (o.loaded | (1ull << a.j))) throw std::logic_error("arc head mismatch");
        if (a.w.zero()) throw std::logic_error("arc weights must be positive");
    }
}

nlohmann::json LearningGraph::to_json() const {
    nlohmann::json ts = nlohmann::json::array();
    for (const auto& t : transitions) {
        nlohmann::json origin = nlohmann::json::array();
        std::uint64_t mask = vertices[t.origin].loaded;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) origin.push_back(i + 1);
        nlohmann::json elems = nlohmann::json::array();
        for (int e : t.elements) elems.push_back(e + 1);
        ts.push_back({{"stage", t.stage},
                      {"origin", origin},
                      {"elements", elems},
                      {"weight", arcs[t.arcs.front()].w.to_json()}});
    }
    return {{"n", n}, {"stages", stage_names}, {"transitions", ts}};
}

LearningGraph LearningGraph::from_json(const nlohmann::json& j) {
    auto g = empty(j.at("n").get<int>(), j.at("stages").get<std::vector<std::string>>());
    for (const auto& t : j.at("transitions")) {
        std::uint64_t mask = 0;
        for (int p : t.at("origin")) mask |= 1ull << (p - 1);
        std::vector<int> elems;
        for (int e : t.at("elements")) elems.push_back(e - 1);
        int tid = g.add_transition(t.at("stage").get<int>(), g.key_vertex(mask), elems);
        g.set_transition_weight(tid, WeightSq::from_json(t.at("weight")));
    }
    return g;
}

nlohmann::json Flow::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : p) {
        nlohmann::json sparse = nlohmann::json::array();
        for (std::size_t t = 0; t < row.size(); ++t)
            if (row[t] != 0) sparse.push_back({t, rat_to_json(row[t])});
        rows.push_back({{"transitions", row.size()}, {"nonzero", sparse}});
    }
    return rows;
}

Flow Flow::from_json(const nlohmann::json& j) {
    Flow f;
    for (const auto& row : j) {
        std::vector<Rat> r(row.at("transitions").get<std::size_t>(), Rat(0));
        for (const auto& entry : row.at("nonzero")) r.at(entry.at(0)) = rat_from_json(entry.at(1));
        f.p.push_back(std::move(r));
    }
    return f;
}

FlowReport verify_flow(const LearningGraph& g, const Flow& flow, const PromiseDomain& dom,
                       const AcceptingPredicate& accepting) {
    FlowReport rep;
    auto complain = [&](const std::string& s) {
        if (rep.violations.size() < 32) rep.violations.push_back(s);
    };
    if (flow.p.size() != dom.positives.size()) {
        complain("flow rows != positive count");
        return rep;
    }
    std::vector<Rat> excess(g.vertices.size());
    for (std::size_t xi = 0; xi < dom.positives.size(); ++xi) {
        const Input& x = dom.positives[xi];
        const auto& row = flow.p[xi];
        if (row.size() != g.transitions.size()) {
            complain("flow row has wrong transition count");
            continue;
        }
        std::fill(excess.begin(), excess.end(), Rat(0));
        for (const auto& a : g.arcs) {
            const Rat& v = row[a.transition];
            if (v == 0) continue;
            excess[a.head] += v;
            excess[a.origin] -= v;
        }
        Rat absorbed(0);
        for (std::size_t vi = 0; vi < g.vertices.size(); ++vi) {
            Rat absorb = excess[vi] + (static_cast<int>(vi) == g.root ? Rat(1) : Rat(0));
            if (absorb == 0) continue;
            if (!accepting(g.vertices[vi].loaded, x)) {
                complain("input " + input_to_string(x) + ": flow absorbed at non-accepting vertex");
            } else if (absorb < 0) {
                complain("input " + input_to_string(x) + ": negative absorption at a sink");
            } else {
                absorbed += absorb;
            }
        }
        if (absorbed != 1 && rep.violations.empty())
            complain("input " + input_to_string(x) + ": total absorbed flow is " +
                     rat_to_string(absorbed));
        ++rep.checked;
    }
    rep.ok = rep.violations.empty();
    return rep;
}

double negative_complexity(const LearningGraph& g) {
    double c = 0;
    for (const auto& a : g.arcs) {
        if (a.w.zero()) throw std::invalid_argument("zero-weight arc");
        c += a.w.value();
    }
    return c;
}

double positive_complexity(const LearningGraph& g, const Flow& flow, int pos_index) {
    const auto& row = flow.p.at(pos_index);
    double c = 0;
    for (const auto& a : g.arcs) {
        const Rat& p = row[a.transition];
        if (p == 0) continue;
        if (a.w.zero()) throw std::invalid_argument("flow crosses a zero-weight arc");
        double pd = to_double(p);
        c += pd * pd / a.w.value();
    }
    return c;
}

double total_complexity(const LearningGraph& g, const Flow& flow, const PromiseDomain& dom) {
    double c = negative_complexity(g);
    for (std::size_t i = 0; i < dom.positives.size(); ++i)
        c = std::max(c, positive_complexity(g, flow, static_cast<int>(i)));
    return c;
}

StageStats stage_stats(const LearningGraph& g, const Flow& flow, const PromiseDomain& dom,
                       int stage) {
    std::vector<int> of_stage;
    for (std::size_t t = 0; t < g.transitions.size(); ++t)
        if (g.transitions[t].stage == stage) of_stage.push_back(static_cast<int>(t));
    if (of_stage.empty()) throw std::invalid_argument("stage has no transitions");
    if (flow.p.empty()) throw std::invalid_argument("flow has no positive inputs");

    StageStats s;
    s.transitions = static_cast<long long>(of_stage.size());
    bool first = true;
    for (const auto& row : flow.p) {
        long long used = 0;
        for (int t : of_stage) {
            const Rat& v = row[t];
            if (v == 0) continue;
            ++used;
            if (s.q == 0)
                s.q = v;
            else if (s.q != v)
                throw std::runtime_error("flow is not symmetric on the stage");
        }
        if (first) {
            s.used = used;
            first = false;
        } else if (s.used != used) {
            throw std::runtime_error("speciality depends on the input");
        }
    }
    if (s.used == 0) throw std::runtime_error("stage carries no flow");
    return s;
}

WeightSq symmetric_stage_weight(const StageStats& s) {
    return WeightSq(s.q * s.q * Rat(s.used, s.transitions));
}

namespace {

bool agree_on(std::uint64_t mask, const Input& x, const Input& y) {
    for (std::uint64_t m = mask; m != 0; m &= m - 1) {
        int t = std::countr_zero(m);
        if (x[t] != y[t]) return false;
    }
    return true;
}

class CompiledCertificate final : public Certificate {
public:
    CompiledCertificate(LearningGraph g, Flow flow, PromiseDomain dom, Rat unit)
        : g_(std::move(g)), flow_(std::move(flow)), dom_(std::move(dom)), unit_(unit) {
        g_.validate();
        if (flow_.p.size() != dom_.positives.size())
            throw std::invalid_argument("flow rows != positive count");
        for (std::size_t i = 0; i < dom_.positives.size(); ++i)
            pos_index_.emplace(dom_.positives[i], static_cast<int>(i));
        arcs_by_j_.assign(g_.n, {});
        for (std::size_t a = 0; a < g_.arcs.size(); ++a)
            arcs_by_j_[g_.arcs[a].j].push_back(static_cast<int>(a));
        neg_diag_by_stage_.assign(g_.stage_names.size(), 0.0);
        for (const auto& a : g_.arcs) neg_diag_by_stage_[a.stage] += a.w.value();
    }

    const PromiseDomain& domain() const override { return dom_; }
    Rat unit() const override { return unit_; }
    const std::vector<std::string>& stage_names() const override { return g_.stage_names; }

    Rat entry_cross(int j, const Input& x, const Input& y) const override {
        const auto& row = flow_.p[pos_index_.at(x)];
        Rat total(0);
        for (int ai : arcs_by_j_[j]) {
            const auto& a = g_.arcs[ai];
            const Rat& p = row[a.transition];
            if (p == 0) continue;
            if (agree_on(g_.vertices[a.origin].loaded, x, y)) total += p;
        }
        return total;
    }

    void add_diagonal(const Input& z, bool positive,
                      std::vector<double>& per_stage) const override {
        if (!positive) {
            for (std::size_t s = 0; s < neg_diag_by_stage_.size(); ++s)
                per_stage[s] += neg_diag_by_stage_[s];
            return;
        }
        const auto& row = flow_.p[pos_index_.at(z)];
        for (const auto& a : g_.arcs) {
            const Rat& p = row[a.transition];
            if (p == 0) continue;
            double pd = to_double(p);
            per_stage[a.stage] += pd * pd / a.w.value();
        }
    }

    void for_each_generator(int j, const std::vector<Input>& sample,
                            const GeneratorSink& sink) const override {
        for (int ai : arcs_by_j_[j]) {
            const auto& a = g_.arcs[ai];
            std::uint64_t mask = g_.vertices[a.origin].loaded;
            double w = a.w.value();
            std::map<Input, GeneratorTerm> groups;
            for (std::size_t idx = 0; idx < sample.size(); ++idx) {
                const Input& z = sample[idx];
                Input key;
                for (std::uint64_t m = mask; m != 0; m &= m - 1) key.push_back(z[std::countr_zero(m)]);
                auto it = pos_index_.find(z);
                double val;
                if (it != pos_index_.end()) {
                    const Rat& p = flow_.p[it->second][a.transition];
                    if (p == 0) continue;
                    val = to_double(p) / std::sqrt(w);
                } else {
                    val = std::sqrt(w);
                }
                groups[key].entries.emplace_back(static_cast<int>(idx), val);
            }
            for (auto& [key, term] : groups) sink(term);
        }
    }

    void scale_unit(const Rat& factor) override {
        unit_ *= factor;
        for (auto& row : flow_.p)
            for (auto& v : row) v *= factor;
    }

    std::vector<std::string> weight_names() const override { return g_.stage_names; }

    void scale_weights(const std::vector<Rat>& factor_per_weight) override {
        for (auto& a : g_.arcs) {
            const Rat& f = factor_per_weight.at(a.stage);
            a.w = WeightSq(a.w.sq * f * f);
        }
        neg_diag_by_stage_.assign(g_.stage_names.size(), 0.0);
        for (const auto& a : g_.arcs) neg_diag_by_stage_[a.stage] += a.w.value();
    }

private:
    LearningGraph g_;
    Flow flow_;
    PromiseDomain dom_;
    Rat unit_;
    std::map<Input, int> pos_index_;
    std::vector<std::vector<int>> arcs_by_j_;
    std::vector<double> neg_diag_by_stage_;
};

}  // namespace

std::unique_ptr<Certificate> compile_to_certificate(LearningGraph g, Flow flow, PromiseDomain dom,
                                                    Rat unit) {
    return std::make_unique<CompiledCertificate>(std::move(g), std::move(flow), std::move(dom),
                                                 unit);
}

}  // namespace advbound
