#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "advbound/input.hpp"
#include "advbound/rational.hpp"

namespace advbound {

// One rank-one generator of a certificate matrix X_j, restricted to a sample
// of inputs: the contribution coeff * psi psi^T with psi supported on the
// listed sample indices. coeff is strictly positive, so every X_j is a
// nonnegative combination of rank-one terms and PSD by construction; the
// numeric eigenvalue check guards the assembly itself.
struct GeneratorTerm {
    Rat coeff{1};
    std::vector<std::pair<int, double>> entries;
};
using GeneratorSink = std::function<void(const GeneratorTerm&)>;

// A feasible solution of the dual adversary program in factored form.
// Matrix entries are never materialized globally: cross entries and diagonals
// are exact rational sums over the blocks that load a given variable.
class Certificate {
public:
    virtual ~Certificate() = default;

    virtual const PromiseDomain& domain() const = 0;

    // The common transition probability q: every cross entry is an integer
    // multiple of it, and every feasible cross pair sums to exactly 1.
    virtual Rat unit() const = 0;

    virtual const std::vector<std::string>& stage_names() const = 0;

    // Sum over blocks loading variable j of X_j[x, y], f(x)=1, f(y)=0. Exact.
    virtual Rat entry_cross(int j, const Input& x, const Input& y) const = 0;

    // Accumulates sum over j of X_j[z, z] into the per-stage table.
    virtual void add_diagonal(const Input& z, bool positive,
                              std::vector<double>& per_stage) const = 0;

    // Randomness decomposition, when the construction has one: the residual
    // splits as a sum over the choices of randomness consistent with x.
    virtual int randomness_count(const Input& x) const { return 0; }
    virtual Rat per_randomness_total(const Input& x, const Input& y, int ridx) const;

    // Emits every rank-one generator of X_j with support on the sample.
    virtual void for_each_generator(int j, const std::vector<Input>& sample,
                                    const GeneratorSink& sink) const = 0;

    // sum_{j: x_j != y_j} X_j[x, y]; feasibility demands exactly 1.
    virtual Rat feasibility_residual(const Input& x, const Input& y) const;

    // Test hooks. Scaling q must scale every residual linearly; scaling any
    // of the named weights must leave every residual untouched.
    virtual void scale_unit(const Rat& factor) = 0;
    virtual std::vector<std::string> weight_names() const = 0;
    virtual void scale_weights(const std::vector<Rat>& factor_per_weight) = 0;
};

struct PsdReport {
    int j = 0;
    int dim = 0;
    long long generators = 0;
    double min_eigenvalue = 0;
    double tolerance = 0;
    bool structural = true;  // no generator had nonpositive coefficient
    bool pass = false;

    nlohmann::json to_json() const;
};

// Assembles X_j restricted to the sample from its generators and checks the
// smallest eigenvalue against -tol_scale * max(1, largest diagonal entry).
PsdReport psd_spotcheck(const Certificate& cert, int j, const std::vector<Input>& sample,
                        double tol_scale = 1e-9);

// Up to cap inputs from the domain, all of them when they fit, otherwise a
// seed-deterministic sample (positives and negatives mixed).
std::vector<Input> psd_sample(const PromiseDomain& dom, int cap, std::uint64_t seed);

// Glue checks between the factored and the summed views of the matrices:
// the diagonal (resp. cross entry) assembled from rank-one generators must
// match add_diagonal (resp. entry_cross). Returns the largest relative
// deviation over the sample.
double generator_diagonal_deviation(const Certificate& cert, const std::vector<Input>& sample);
double generator_cross_deviation(const Certificate& cert, const std::vector<Input>& sample);

struct PairMode {
    enum class Kind { All, Sample };
    Kind kind = Kind::All;
    long long count = 0;
    std::uint64_t seed = 0;

    static PairMode all() { return {}; }
    static PairMode sample(long long n, std::uint64_t s) {
        return {Kind::Sample, n, s};
    }
};

struct VerificationReport {
    long long pairs = 0;
    bool feasible = false;
    Rat max_abs_deviation{0};
    std::map<std::string, long long> residuals;  // exact residual -> pair count
    std::vector<std::pair<Input, Input>> bad_pairs;  // first few non-1 exhibits
    double objective = 0;
    std::vector<std::string> stage_names;
    std::vector<double> objective_per_stage;  // per-stage max over inputs
    std::vector<PsdReport> psd;

    nlohmann::json to_json() const;
};

// Checks the residual of every (sampled) cross pair exactly and evaluates the
// objective max_z sum_j X_j[z, z] over the whole domain.
VerificationReport verify_all_pairs(const Certificate& cert, const PairMode& mode);

double objective(const Certificate& cert);
std::vector<double> objective_per_stage(const Certificate& cert);

}  // namespace advbound
