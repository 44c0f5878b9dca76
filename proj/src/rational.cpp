#include "advbound/rational.hpp"

#include <algorithm>
#include <cmath>

namespace advbound {

long long binomial(int n, int k) {
    if (n < 0 || k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (int i = 1; i <= k; ++i) {
        // r * (n-k+i) is divisible by i once the first i factors are in
        r = checked_mul(r, n - k + i) / i;
    }
    return r;
}

long long multinomial(int n, const std::vector<int>& parts) {
    long long r = 1;
    int rem = n;
    for (int p : parts) {
        if (p < 0 || p > rem) throw std::invalid_argument("multinomial parts exceed n");
        r = checked_mul(r, binomial(rem, p));
        rem -= p;
    }
    return r;
}

double WeightSq::value() const { return std::sqrt(to_double(sq)); }

namespace {
long long isqrt_exact(long long v) {  // -1 when v is not a perfect square
    if (v < 0) return -1;
    long long r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(v))));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r * r == v ? r : -1;
}
}  // namespace

nlohmann::json WeightSq::to_json() const {
    long long p = sq.numerator(), q = sq.denominator();
    long long sp = isqrt_exact(p), sq_ = isqrt_exact(q);
    if (sp >= 0 && sq_ >= 0)
        return {{"num", sp}, {"den", sq_}, {"sqrtFactor", 1}};
    // sqrt(p/q) = sqrt(p*q) / q
    return {{"num", 1}, {"den", q}, {"sqrtFactor", checked_mul(p, q)}};
}

WeightSq WeightSq::from_json(const nlohmann::json& j) {
    long long num = j.at("num").get<long long>();
    long long den = j.at("den").get<long long>();
    long long sf = j.at("sqrtFactor").get<long long>();
    Rat base(num, den);
    return WeightSq(base * base * Rat(sf));
}

}  // namespace advbound
