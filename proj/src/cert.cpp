#include "advbound/cert.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

namespace advbound {

Rat Certificate::per_randomness_total(const Input&, const Input&, int) const {
    throw std::logic_error("certificate has no randomness decomposition");
}

Rat Certificate::feasibility_residual(const Input& x, const Input& y) const {
    int r = randomness_count(x);
    if (r > 0) {
        Rat total{0};
        for (int i = 0; i < r; ++i) total += per_randomness_total(x, y, i);
        return total;
    }
    Rat total{0};
    int n = static_cast<int>(x.size());
    for (int j = 0; j < n; ++j)
        if (x[j] != y[j]) total += entry_cross(j, x, y);
    return total;
}

nlohmann::json PsdReport::to_json() const {
    return {{"j", j},
            {"dim", dim},
            {"generators", generators},
            {"minEigenvalue", min_eigenvalue},
            {"tolerance", tolerance},
            {"structural", structural},
            {"pass", pass}};
}

PsdReport psd_spotcheck(const Certificate& cert, int j, const std::vector<Input>& sample,
                        double tol_scale) {
    PsdReport rep;
    rep.j = j;
    rep.dim = static_cast<int>(sample.size());
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(rep.dim, rep.dim);
    Eigen::VectorXd v(rep.dim);
    cert.for_each_generator(j, sample, [&](const GeneratorTerm& t) {
        ++rep.generators;
        if (t.coeff <= 0) rep.structural = false;
        v.setZero();
        for (auto [idx, val] : t.entries) v[idx] = val;
        X.selfadjointView<Eigen::Lower>().rankUpdate(v, to_double(t.coeff));
    });
    double max_diag = 0;
    for (int i = 0; i < rep.dim; ++i) max_diag = std::max(max_diag, X(i, i));
    rep.tolerance = tol_scale * std::max(1.0, max_diag);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X);
    rep.min_eigenvalue = rep.dim == 0 ? 0.0 : es.eigenvalues().minCoeff();
    rep.pass = rep.structural && rep.min_eigenvalue >= -rep.tolerance;
    return rep;
}

std::vector<Input> psd_sample(const PromiseDomain& dom, int cap, std::uint64_t seed) {
    std::vector<Input> all;
    all.reserve(dom.positives.size() + dom.negatives.size());
    all.insert(all.end(), dom.positives.begin(), dom.positives.end());
    all.insert(all.end(), dom.negatives.begin(), dom.negatives.end());
    if (static_cast<int>(all.size()) <= cap) return all;
    std::mt19937_64 rng(seed);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(cap);
    std::sort(all.begin(), all.end());
    return all;
}

double generator_diagonal_deviation(const Certificate& cert, const std::vector<Input>& sample) {
    const PromiseDomain& dom = cert.domain();
    std::size_t count = sample.size();
    std::vector<double> assembled(count, 0.0);
    for (int j = 0; j < dom.n; ++j)
        cert.for_each_generator(j, sample, [&](const GeneratorTerm& t) {
            double c = to_double(t.coeff);
            for (auto [idx, val] : t.entries) assembled[idx] += c * val * val;
        });
    std::set<Input> positives(dom.positives.begin(), dom.positives.end());
    double worst = 0;
    std::vector<double> per_stage;
    for (std::size_t i = 0; i < count; ++i) {
        per_stage.assign(cert.stage_names().size(), 0.0);
        cert.add_diagonal(sample[i], positives.count(sample[i]) != 0, per_stage);
        double direct = 0;
        for (double v : per_stage) direct += v;
        worst = std::max(worst, std::abs(assembled[i] - direct) / std::max(1.0, std::abs(direct)));
    }
    return worst;
}

double generator_cross_deviation(const Certificate& cert, const std::vector<Input>& sample) {
    const PromiseDomain& dom = cert.domain();
    std::set<Input> positives(dom.positives.begin(), dom.positives.end());
    std::vector<int> pos, neg;
    for (std::size_t i = 0; i < sample.size(); ++i)
        (positives.count(sample[i]) ? pos : neg).push_back(static_cast<int>(i));
    double worst = 0;
    for (int j = 0; j < dom.n; ++j) {
        Eigen::MatrixXd X = Eigen::MatrixXd::Zero(sample.size(), sample.size());
        cert.for_each_generator(j, sample, [&](const GeneratorTerm& t) {
            double c = to_double(t.coeff);
            for (auto [ix, vx] : t.entries)
                for (auto [iy, vy] : t.entries) X(ix, iy) += c * vx * vy;
        });
        for (int ix : pos)
            for (int iy : neg) {
                double exact = to_double(cert.entry_cross(j, sample[ix], sample[iy]));
                worst = std::max(worst,
                                 std::abs(X(ix, iy) - exact) / std::max(1.0, std::abs(exact)));
            }
    }
    return worst;
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json res = nlohmann::json::object();
    for (const auto& [key, count] : residuals) res[key] = count;
    nlohmann::json per_stage = nlohmann::json::object();
    for (std::size_t i = 0; i < stage_names.size() && i < objective_per_stage.size(); ++i)
        per_stage[stage_names[i]] = objective_per_stage[i];
    nlohmann::json bad = nlohmann::json::array();
    for (const auto& [x, y] : bad_pairs)
        bad.push_back({{"x", input_to_string(x)}, {"y", input_to_string(y)}});
    return {{"pairs", pairs},
            {"feasible", feasible},
            {"maxAbsDeviation", rat_to_json(max_abs_deviation)},
            {"residuals", res},
            {"objective", objective},
            {"objectivePerStage", per_stage},
            {"badPairs", bad}};
}

namespace {

void accumulate_objective(const Certificate& cert, VerificationReport& rep) {
    const auto& dom = cert.domain();
    rep.stage_names = cert.stage_names();
    std::size_t stages = rep.stage_names.size();
    rep.objective_per_stage.assign(stages, 0.0);
    rep.objective = 0;
    std::vector<double> per_stage(stages);
    auto feed = [&](const Input& z, bool positive) {
        std::fill(per_stage.begin(), per_stage.end(), 0.0);
        cert.add_diagonal(z, positive, per_stage);
        double total = 0;
        for (std::size_t s = 0; s < stages; ++s) {
            total += per_stage[s];
            rep.objective_per_stage[s] = std::max(rep.objective_per_stage[s], per_stage[s]);
        }
        rep.objective = std::max(rep.objective, total);
    };
    for (const auto& x : dom.positives) feed(x, true);
    for (const auto& y : dom.negatives) feed(y, false);
}

}  // namespace

VerificationReport verify_all_pairs(const Certificate& cert, const PairMode& mode) {
    const auto& dom = cert.domain();
    VerificationReport rep;
    auto check_pair = [&](const Input& x, const Input& y) {
        Rat r = cert.feasibility_residual(x, y);
        ++rep.pairs;
        ++rep.residuals[rat_to_string(r)];
        Rat dev = r - 1;
        if (dev < 0) dev = -dev;
        if (dev > rep.max_abs_deviation) rep.max_abs_deviation = dev;
        if (dev != 0 && rep.bad_pairs.size() < 8) rep.bad_pairs.emplace_back(x, y);
    };

    long long total = static_cast<long long>(dom.positives.size()) *
                      static_cast<long long>(dom.negatives.size());
    if (mode.kind == PairMode::Kind::All || mode.count >= total) {
        for (const auto& x : dom.positives)
            for (const auto& y : dom.negatives) check_pair(x, y);
    } else {
        std::mt19937_64 rng(mode.seed);
        std::uniform_int_distribution<long long> dist(0, total - 1);
        std::set<long long> chosen;
        while (static_cast<long long>(chosen.size()) < mode.count) chosen.insert(dist(rng));
        long long negs = static_cast<long long>(dom.negatives.size());
        for (long long id : chosen) check_pair(dom.positives[id / negs], dom.negatives[id % negs]);
    }
    rep.feasible = rep.max_abs_deviation == 0;  // vacuously true on empty pair sets
    accumulate_objective(cert, rep);
    return rep;
}

double objective(const Certificate& cert) {
    VerificationReport rep;
    accumulate_objective(cert, rep);
    return rep.objective;
}

std::vector<double> objective_per_stage(const Certificate& cert) {
    VerificationReport rep;
    accumulate_objective(cert, rep);
    return rep.objective_per_stage;
}

}  // namespace advbound
