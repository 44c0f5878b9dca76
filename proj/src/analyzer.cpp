#include "advbound/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace advbound {

namespace {

long long pow2_ll(int e) {
    if (e < 0 || e > 62) throw std::overflow_error("power of two outside 64-bit range");
    return 1LL << e;
}

// ceil that forgives pow overshooting an exact integer by a few ulps.
long long guarded_ceil(double v) {
    double guarded = v - 4 * v * std::numeric_limits<double>::epsilon();
    return static_cast<long long>(std::ceil(guarded));
}

}  // namespace

KDistPlan kdist_plan(int k) {
    if (k < 2) throw std::invalid_argument("kdist_plan requires k >= 2");
    if (k > 30) throw std::invalid_argument("kdist_plan exponents overflow beyond k = 30");

    KDistPlan plan;
    plan.k = k;
    // 1 - 2^(k-2)/(2^k - 1), already over a common denominator.
    plan.exponent = Rat(3 * pow2_ll(k - 2) - 1, pow2_ll(k) - 1);
    plan.johnson_exponent = Rat(k, k + 1);

    plan.rho.push_back(plan.exponent);
    for (int i = 2; i <= k - 1; ++i)
        plan.rho.push_back((Rat(1) + plan.rho.back()) / Rat(2));

    // Loading stage I.s costs rho_s + (rho_1 + .. + rho_(s-1) - (s-1))/2;
    // uncovering stage II.s costs (s - rho_1 - .. - rho_(s-1))/2. The profile
    // makes every I.s and the last II.k equal the query exponent.
    Rat prefix{0};
    for (int s = 1; s <= k - 1; ++s) {
        plan.stage.push_back("I." + std::to_string(s));
        plan.stage_exponent.push_back(plan.rho[s - 1] + (prefix - Rat(s - 1)) / Rat(2));
        prefix += plan.rho[s - 1];
    }
    prefix = Rat(0);
    for (int s = 1; s <= k; ++s) {
        plan.stage.push_back("II." + std::to_string(s));
        plan.stage_exponent.push_back((Rat(s) - prefix) / Rat(2));
        if (s <= k - 1) prefix += plan.rho[s - 1];
    }
    return plan;
}

nlohmann::json KDistPlan::to_json() const {
    nlohmann::json stages = nlohmann::json::array();
    for (std::size_t i = 0; i < stage.size(); ++i)
        stages.push_back({{"stage", stage[i]},
                          {"exponent", rat_to_json(stage_exponent[i])},
                          {"value", to_double(stage_exponent[i])}});
    nlohmann::json rhos = nlohmann::json::array();
    for (const Rat& r : rho) rhos.push_back(rat_to_json(r));
    return {{"k", k},
            {"exponent", rat_to_json(exponent)},
            {"exponentValue", to_double(exponent)},
            {"johnsonExponent", rat_to_json(johnson_exponent)},
            {"rho", rhos},
            {"stages", stages}};
}

StageCosts stage_costs(int k, double n, const std::vector<double>& r) {
    if (k < 2) throw std::invalid_argument("stage_costs requires k >= 2");
    if (static_cast<int>(r.size()) != k - 1)
        throw std::invalid_argument("stage_costs needs one subset size per level");
    if (!(n > 0)) throw std::invalid_argument("stage_costs requires n > 0");
    for (double ri : r)
        if (!(ri >= 1)) throw std::invalid_argument("subset sizes must be at least 1");

    StageCosts out;
    double prefix = 1;  // r_1 .. r_(s-1)
    double npow = 1;    // n^(s-1)
    for (int s = 1; s <= k - 1; ++s) {
        out.stage.push_back("I." + std::to_string(s));
        out.cost.push_back(r[s - 1] * std::sqrt(prefix / npow));
        prefix *= r[s - 1];
        npow *= n;
    }
    prefix = 1;
    npow = n;
    for (int s = 1; s <= k; ++s) {
        out.stage.push_back("II." + std::to_string(s));
        out.cost.push_back(std::sqrt(npow / prefix));
        if (s <= k - 1) prefix *= r[s - 1];
        npow *= n;
    }
    out.binding = static_cast<int>(
        std::max_element(out.cost.begin(), out.cost.end()) - out.cost.begin());
    for (double c : out.cost) out.total += c;
    return out;
}

nlohmann::json StageCosts::to_json() const {
    nlohmann::json stages = nlohmann::json::array();
    for (std::size_t i = 0; i < stage.size(); ++i)
        stages.push_back({{"stage", stage[i]}, {"cost", cost[i]}});
    return {{"stages", stages},
            {"binding", stage[binding]},
            {"bindingCost", cost[binding]},
            {"total", total}};
}

std::vector<long long> sizes_from_profile(int k, double n) {
    KDistPlan plan = kdist_plan(k);
    std::vector<long long> out;
    for (const Rat& rho : plan.rho)
        out.push_back(guarded_ceil(std::pow(n, to_double(rho))));
    return out;
}

GcPlan gc_plan(long long n, long long alpha_cap) {
    if (n < 3) throw std::invalid_argument("gc_plan requires at least 3 vertices");
    if (alpha_cap < 1 || alpha_cap > n)
        throw std::invalid_argument("independence cap must lie in [1, n]");

    GcPlan plan;
    double nd = static_cast<double>(n), a = static_cast<double>(alpha_cap);
    plan.r = std::clamp(guarded_ceil(nd * std::pow(a, -1.0 / 3.0)), 1LL, n - 2);
    plan.predicted = std::sqrt(nd) * std::pow(a, 1.0 / 6.0) + std::sqrt(nd);
    plan.w0 = std::sqrt(a / nd);
    plan.w1 = std::sqrt(nd / a);
    plan.wII1 = std::sqrt(1.0 / nd);
    plan.wII2 = std::sqrt(static_cast<double>(plan.r)) / nd;
    return plan;
}

nlohmann::json GcPlan::to_json() const {
    return {{"r", r},
            {"predicted", predicted},
            {"w0", w0},
            {"w1", w1},
            {"wII1", wII1},
            {"wII2", wII2}};
}

std::vector<ExponentRow> exponent_table(int k_max) {
    if (k_max < 2) throw std::invalid_argument("exponent_table requires k_max >= 2");
    std::vector<ExponentRow> rows;
    for (int k = 2; k <= k_max; ++k) {
        KDistPlan plan = kdist_plan(k);
        rows.push_back({k, plan.exponent, plan.johnson_exponent});
    }
    return rows;
}

std::string exponent_table_csv(const std::vector<ExponentRow>& rows) {
    std::ostringstream os;
    os << "k,exponent,exponent_value,johnson,johnson_value\n";
    os.precision(15);
    for (const ExponentRow& row : rows)
        os << row.k << ',' << rat_to_string(row.exponent) << ',' << to_double(row.exponent)
           << ',' << rat_to_string(row.johnson) << ',' << to_double(row.johnson) << '\n';
    return os.str();
}

}  // namespace advbound
