#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "advbound/rational.hpp"

namespace advbound {

// Exponent bookkeeping for the k-distinctness construction. The profile
// rho_1..rho_(k-1) balances the stage costs: rho_1 = 1 - 2^(k-2)/(2^k - 1)
// and rho_(i+1) = (1 + rho_i)/2. All exponents are exact rationals.
struct KDistPlan {
    int k = 0;
    Rat exponent{0};                  // query exponent: rho_1
    Rat johnson_exponent{0};          // k/(k+1), the unstructured baseline
    std::vector<Rat> rho;             // subset-size exponents, levels 1..k-1
    std::vector<std::string> stage;   // I.1..I.(k-1), II.1..II.k
    std::vector<Rat> stage_exponent;  // cost exponent of each stage

    nlohmann::json to_json() const;
};

KDistPlan kdist_plan(int k);

// Numeric stage costs at concrete sizes: I.s = r_s sqrt(r_1..r_(s-1)/n^(s-1)),
// II.s = sqrt(n^s/(r_1..r_(s-1))).
struct StageCosts {
    std::vector<std::string> stage;
    std::vector<double> cost;
    int binding = 0;  // index of the largest cost
    double total = 0;

    nlohmann::json to_json() const;
};

StageCosts stage_costs(int k, double n, const std::vector<double>& r);

// ceil(n^rho_i) for the balanced profile.
std::vector<long long> sizes_from_profile(int k, double n);

// Subset-size and weight plan for graph collision at independence cap alpha.
struct GcPlan {
    long long r = 0;           // clamp(ceil(n alpha^(-1/3)), 1, n-2)
    double predicted = 0;      // sqrt(n) alpha^(1/6) + sqrt(n)
    double w0 = 0, w1 = 0;     // stage I weights sqrt(alpha/n), sqrt(n/alpha)
    double wII1 = 0, wII2 = 0;

    nlohmann::json to_json() const;
};

GcPlan gc_plan(long long n, long long alpha_cap);

// One row per k: exact exponent against the baseline.
struct ExponentRow {
    int k = 0;
    Rat exponent{0};
    Rat johnson{0};
};

std::vector<ExponentRow> exponent_table(int k_max);
std::string exponent_table_csv(const std::vector<ExponentRow>& rows);

}  // namespace advbound
