#include "advbound/kdist.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "advbound/oracles.hpp"

namespace advbound {

namespace {

long long pow_ll(long long base, int exp) {
    long long out = 1;
    for (int i = 0; i < exp; ++i) out = checked_mul(out, base);
    return out;
}

std::uint64_t position_mask(const std::vector<int>& positions) {
    std::uint64_t m = 0;
    for (int p : positions) m |= 1ull << p;
    return m;
}

}  // namespace

KDistCertificate::KDistCertificate(int k, std::vector<int> r, bool fault_tolerant,
                                   PromiseDomain dom)
    : k_(k), ft_(fault_tolerant), r_(std::move(r)), dom_(std::move(dom)) {
    if (k_ < 2) throw std::invalid_argument("k-distinctness needs k >= 2");
    if (k_ > 6) throw std::invalid_argument("label table grows too fast beyond k = 6");
    if (static_cast<int>(r_.size()) != k_ - 1)
        throw std::invalid_argument("need one subset size per level 1..k-1");
    for (int s : r_)
        if (s < 1) throw std::invalid_argument("subset sizes must be positive");
    if (dom_.m > 63) throw std::invalid_argument("value alphabet too large");
    if (dom_.n > 63) throw std::invalid_argument("input length too large");
    const int n = dom_.n;

    labels_.resize(k_ - 1);
    if (!ft_) {
        for (int lv = 1; lv <= k_ - 1; ++lv) {
            Label lab;
            if (lv > 1) lab.sources = {0};
            labels_[lv - 1].push_back(std::move(lab));
        }
    } else {
        for (int lv = 1; lv <= k_ - 1; ++lv) {
            std::vector<std::vector<int>> prefixes{{}};
            for (int j = 1; j <= lv - 1; ++j) {
                std::vector<std::vector<int>> next;
                for (const auto& p : prefixes)
                    for (int d = 1; d <= k_ - j; ++d) {
                        auto q = p;
                        q.push_back(d);
                        next.push_back(std::move(q));
                    }
                prefixes = std::move(next);
            }
            for (const auto& p : prefixes)
                for (std::uint32_t D = 1; D < (1u << (k_ - lv)); ++D) {
                    Label lab;
                    lab.d = p;
                    lab.Dmask = D;
                    labels_[lv - 1].push_back(std::move(lab));
                }
        }
        for (int lv = 2; lv <= k_ - 1; ++lv)
            for (auto& lab : labels_[lv - 1]) {
                int dl = lab.d.back();
                std::vector<int> pre(lab.d.begin(), lab.d.end() - 1);
                for (int s = 0; s < static_cast<int>(labels_[lv - 2].size()); ++s) {
                    const Label& cand = labels_[lv - 2][s];
                    if (cand.d == pre && (cand.Dmask >> (dl - 1) & 1)) lab.sources.push_back(s);
                }
            }
    }

    slot_of_level_.resize(k_ - 1);
    for (int lv = 1; lv <= k_ - 1; ++lv)
        for (int li = 0; li < static_cast<int>(labels_[lv - 1].size()); ++li) {
            slot_of_level_[lv - 1].push_back(static_cast<int>(slots_.size()));
            slots_.push_back({lv, li, r_[lv - 1]});
        }

    for (int lv = 1; lv <= k_ - 1; ++lv) names_.push_back("I." + std::to_string(lv));
    for (int s = 1; s <= k_; ++s) names_.push_back("II." + std::to_string(s));

    patterns_.resize(k_);
    for (int s = 1; s <= k_; ++s) {
        std::vector<Pattern> ps{{}};
        for (int i = 1; i <= s - 1; ++i) {
            std::vector<Pattern> next;
            for (const auto& p : ps) {
                if (!ft_) {
                    auto q = p;
                    q.push_back(0);
                    next.push_back(std::move(q));
                } else {
                    for (std::uint32_t D = 1; D < (1u << (k_ - i)); ++D) {
                        auto q = p;
                        q.push_back(D);
                        next.push_back(std::move(q));
                    }
                }
            }
            ps = std::move(next);
        }
        patterns_[s - 1] = std::move(ps);
    }

    {
        long long rem = n, count = 1, loaded = 0;
        for (const Slot& sl : slots_) {
            count = checked_mul(count, binomial(rem, sl.size));
            rem -= sl.size;
            loaded += sl.size;
        }
        if (count <= 0) throw std::invalid_argument("n too small for the subset sizes");
        if (count > 2'000'000) throw std::invalid_argument("randomness space too large");
        if (loaded > n - k_)
            throw std::invalid_argument("subsets leave no room for the marked positions");
        long long cons = 1;
        rem = n - k_;
        for (const Slot& sl : slots_) {
            cons = checked_mul(cons, binomial(rem, sl.size));
            rem -= sl.size;
        }
        if (cons <= 0) throw std::invalid_argument("no consistent randomness");
        q_ = Rat(1, cons);
    }

    {
        RVec cur(slots_.size());
        std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t si,
                                                                  std::uint64_t used) {
            if (si == slots_.size()) {
                all_R_.push_back(cur);
                return;
            }
            std::vector<int> free;
            for (int p = 0; p < n; ++p)
                if (!(used >> p & 1)) free.push_back(p);
            int sz = slots_[si].size;
            std::vector<int> idx(sz);
            std::function<void(int, int)> choose = [&](int from, int got) {
                if (got == sz) {
                    cur[si].clear();
                    std::uint64_t add = 0;
                    for (int t = 0; t < sz; ++t) {
                        cur[si].push_back(free[idx[t]]);
                        add |= 1ull << free[idx[t]];
                    }
                    rec(si + 1, used | add);
                    return;
                }
                for (int c = from; c < static_cast<int>(free.size()); ++c) {
                    idx[got] = c;
                    choose(c + 1, got + 1);
                }
            };
            choose(0, 0);
        };
        rec(0, 0);
        all_R_mask_.reserve(all_R_.size());
        for (const RVec& R : all_R_) {
            std::uint64_t m = 0;
            for (const auto& slot : R) m |= position_mask(slot);
            all_R_mask_.push_back(m);
        }
    }

    for (const Input& x : dom_.positives) {
        if (!has_unique_ktuple(x, k_))
            throw std::invalid_argument("positive input without a unique k-tuple");
        auto m = marked_positions(x, k_);
        if (static_cast<int>(m.size()) != k_)
            throw std::invalid_argument("marked positions do not form a k-tuple");
        marked_.emplace(x, std::move(m));
    }

    wI0_.assign(k_ - 1, WeightSq(Rat(1)));
    wI1_.assign(k_ - 1, WeightSq(Rat(1)));
    long long rprod = 1;
    for (int lv = 2; lv <= k_ - 1; ++lv) {
        rprod = checked_mul(rprod, r_[lv - 2]);
        Rat w0sq(pow_ll(n, lv - 1), rprod);
        wI0_[lv - 1] = WeightSq(w0sq);
        wI1_[lv - 1] = WeightSq(Rat(1) / w0sq);
    }
    rprod = 1;
    for (int s = 1; s <= k_; ++s) {
        if (s >= 2) rprod = checked_mul(rprod, r_[s - 2]);
        wII_.push_back(WeightSq(Rat(rprod, pow_ll(n, s))));
    }
}

const std::vector<int>& KDistCertificate::marked_of(const Input& x) const {
    auto it = marked_.find(x);
    if (it == marked_.end()) throw std::logic_error("input is not a listed positive");
    return it->second;
}

int KDistCertificate::label_index(int level, const std::vector<int>& d,
                                  std::uint32_t Dmask) const {
    const auto& labs = labels_[level - 1];
    for (int i = 0; i < static_cast<int>(labs.size()); ++i)
        if (labs[i].d == d && labs[i].Dmask == Dmask) return i;
    throw std::logic_error("no such label");
}

int KDistCertificate::slot_index(int level, int label) const {
    return slot_of_level_[level - 1][label];
}

int KDistCertificate::insertion_slot(const Pattern& p, int i) const {
    if (!ft_) return slot_of_level_[i][0];
    std::vector<int> d;
    d.reserve(i);
    for (int j = 0; j < i; ++j) d.push_back(std::countr_zero(p[j]) + 1);
    return slot_index(i + 1, label_index(i + 1, d, p[i]));
}

int KDistCertificate::sign_of(int s, const Pattern& p) const {
    if (!ft_) return 1;
    int parity = s;
    for (std::uint32_t D : p) parity += std::popcount(D);
    return parity % 2 == 1 ? 1 : -1;
}

template <typename Visit>
void KDistCertificate::assignment_walk(const Input& z, const RVec& vertex,
                                       const Visit& visit) const {
    std::vector<std::vector<std::uint64_t>> masks(k_ - 1);
    for (int lv = 1; lv <= k_ - 1; ++lv) masks[lv - 1].assign(labels_[lv - 1].size(), 0);
    std::vector<std::pair<int, int>> elems;
    for (int lv = 1; lv <= k_ - 1; ++lv) {
        elems.clear();
        for (int si : slot_of_level_[lv - 1])
            for (int p : vertex[si]) elems.emplace_back(p, si);
        std::sort(elems.begin(), elems.end());
        for (auto [pos, si] : elems) {
            int li = slots_[si].label;
            bool unc = true;
            if (lv > 1) {
                unc = false;
                for (int src : labels_[lv - 1][li].sources)
                    if (masks[lv - 2][src] >> z[pos] & 1) {
                        unc = true;
                        break;
                    }
            }
            if (unc) masks[lv - 1][li] |= 1ull << z[pos];
            if (!visit(lv, li, pos, unc)) return;
        }
    }
}

bool KDistCertificate::vertices_agree(const Input& x, const Input& y, const RVec& vertex) const {
    std::vector<std::vector<std::uint64_t>> mx(k_ - 1), my(k_ - 1);
    for (int lv = 1; lv <= k_ - 1; ++lv) {
        mx[lv - 1].assign(labels_[lv - 1].size(), 0);
        my[lv - 1].assign(labels_[lv - 1].size(), 0);
    }
    std::vector<std::pair<int, int>> elems;
    for (int lv = 1; lv <= k_ - 1; ++lv) {
        elems.clear();
        for (int si : slot_of_level_[lv - 1])
            for (int p : vertex[si]) elems.emplace_back(p, si);
        std::sort(elems.begin(), elems.end());
        for (auto [pos, si] : elems) {
            int li = slots_[si].label;
            bool ux = true, uy = true;
            if (lv > 1) {
                ux = uy = false;
                for (int src : labels_[lv - 1][li].sources) {
                    std::uint64_t sx = mx[lv - 2][src], sy = my[lv - 2][src];
                    ux = ux || (sx >> x[pos] & 1);
                    uy = uy || (sy >> y[pos] & 1);
                }
            }
            Value ax = ux ? x[pos] : 0, ay = uy ? y[pos] : 0;
            if (ax != ay) return false;
            if (ax) {
                mx[lv - 1][li] |= 1ull << x[pos];
                my[lv - 1][li] |= 1ull << y[pos];
            }
        }
    }
    return true;
}

KDistCertificate::RVec KDistCertificate::inserted_vertex(const RVec& R,
                                                         const std::vector<int>& marked,
                                                         const Pattern& p, int upto_s) const {
    RVec v = R;
    for (int i = 0; i + 1 < upto_s; ++i) {
        auto& slot = v[insertion_slot(p, i)];
        slot.insert(std::lower_bound(slot.begin(), slot.end(), marked[i]), marked[i]);
    }
    return v;
}

Rat KDistCertificate::walk_total(const Input& x, const Input& y, const RVec& R,
                                 const std::vector<int>& marked) const {
    // Stage I: while the canonical assignments agree the uncover masks of x
    // and y coincide, so the first disagreement has x_t != y_t and its arc
    // contributes exactly q; both-covered elements sit in the zero cell.
    {
        std::vector<std::vector<std::uint64_t>> masks(k_ - 1);
        for (int lv = 1; lv <= k_ - 1; ++lv) masks[lv - 1].assign(labels_[lv - 1].size(), 0);
        std::vector<std::pair<int, int>> elems;
        for (int lv = 1; lv <= k_ - 1; ++lv) {
            elems.clear();
            for (int si : slot_of_level_[lv - 1])
                for (int p : R[si]) elems.emplace_back(p, si);
            std::sort(elems.begin(), elems.end());
            for (auto [pos, si] : elems) {
                int li = slots_[si].label;
                bool ux = true, uy = true;
                if (lv > 1) {
                    ux = uy = false;
                    for (int src : labels_[lv - 1][li].sources) {
                        std::uint64_t m = masks[lv - 2][src];
                        ux = ux || (m >> x[pos] & 1);
                        uy = uy || (m >> y[pos] & 1);
                    }
                }
                Value ax = ux ? x[pos] : 0, ay = uy ? y[pos] : 0;
                if (ax != ay) return q_;
                if (ax) masks[lv - 1][li] |= 1ull << ax;
            }
        }
    }
    Rat total(0);
    for (int s = 1; s <= k_; ++s) {
        if (x[marked[s - 1]] == y[marked[s - 1]]) continue;
        for (const Pattern& p : patterns_[s - 1]) {
            RVec v = inserted_vertex(R, marked, p, s);
            if (vertices_agree(x, y, v)) total += Rat(sign_of(s, p)) * q_;
        }
    }
    return total;
}

std::vector<int> KDistCertificate::consistent_indices(const Input& x) const {
    std::uint64_t mmask = position_mask(marked_of(x));
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(all_R_.size()); ++i)
        if ((all_R_mask_[i] & mmask) == 0) out.push_back(i);
    return out;
}

int KDistCertificate::randomness_count(const Input& x) const {
    return static_cast<int>(consistent_indices(x).size());
}

Rat KDistCertificate::per_randomness_total(const Input& x, const Input& y, int ridx) const {
    auto cons = consistent_indices(x);
    return walk_total(x, y, all_R_[cons.at(ridx)], marked_of(x));
}

Rat KDistCertificate::per_randomness_value(const Input& x, const Input& y,
                                           int all_r_index) const {
    return walk_total(x, y, all_R_.at(all_r_index), marked_of(x));
}

std::vector<std::pair<int, int>> KDistCertificate::canonical_assignment(
    const Input& z, const RVec& vertex) const {
    std::vector<std::pair<int, int>> out;
    assignment_walk(z, vertex, [&](int, int, int pos, bool unc) {
        out.emplace_back(pos, unc ? static_cast<int>(z[pos]) : 0);
        return true;
    });
    return out;
}

Rat KDistCertificate::feasibility_residual(const Input& x, const Input& y) const {
    const auto& marked = marked_of(x);
    std::uint64_t mmask = position_mask(marked);
    Rat total(0);
    for (int i = 0; i < static_cast<int>(all_R_.size()); ++i)
        if ((all_R_mask_[i] & mmask) == 0) total += walk_total(x, y, all_R_[i], marked);
    return total;
}

Rat KDistCertificate::entry_cross(int j, const Input& x, const Input& y) const {
    const auto& marked = marked_of(x);
    std::uint64_t mmask = position_mask(marked);
    Rat total(0);

    // Stage I blocks: arcs of consistent randomness loading j. The cross cell
    // is q unless both sides are covered, and requires the canonical prefix
    // assignments to agree.
    for (int idx = 0; idx < static_cast<int>(all_R_.size()); ++idx) {
        if (all_R_mask_[idx] & mmask) continue;
        if (!(all_R_mask_[idx] >> j & 1)) continue;
        const RVec& R = all_R_[idx];
        bool dead = false, counted = false;
        std::vector<std::vector<std::uint64_t>> masks(k_ - 1);
        for (int lv = 1; lv <= k_ - 1 && !dead && !counted; ++lv) {
            masks[lv - 1].assign(labels_[lv - 1].size(), 0);
            std::vector<std::pair<int, int>> elems;
            for (int si : slot_of_level_[lv - 1])
                for (int p : R[si]) elems.emplace_back(p, si);
            std::sort(elems.begin(), elems.end());
            for (auto [pos, si] : elems) {
                int li = slots_[si].label;
                bool ux = true, uy = true;
                if (lv > 1) {
                    ux = uy = false;
                    for (int src : labels_[lv - 1][li].sources) {
                        std::uint64_t m = masks[lv - 2][src];
                        ux = ux || (m >> x[pos] & 1);
                        uy = uy || (m >> y[pos] & 1);
                    }
                }
                if (pos == j) {
                    if (ux || uy) total += q_;
                    counted = true;
                    break;
                }
                Value ax = ux ? x[pos] : 0, ay = uy ? y[pos] : 0;
                if (ax != ay) {
                    dead = true;
                    break;
                }
                if (ax) masks[lv - 1][li] |= 1ull << ax;
            }
        }
    }

    // Stage II blocks: j must be a marked position of x.
    auto it = std::find(marked.begin(), marked.end(), j);
    if (it != marked.end()) {
        int s = static_cast<int>(it - marked.begin()) + 1;
        for (int idx = 0; idx < static_cast<int>(all_R_.size()); ++idx) {
            if (all_R_mask_[idx] & mmask) continue;
            for (const Pattern& p : patterns_[s - 1]) {
                RVec v = inserted_vertex(all_R_[idx], marked, p, s);
                if (vertices_agree(x, y, v)) total += Rat(sign_of(s, p)) * q_;
            }
        }
    }
    return total;
}

void KDistCertificate::add_diagonal(const Input& z, bool positive,
                                    std::vector<double>& per_stage) const {
    double q = to_double(q_);
    if (positive) {
        const auto& marked = marked_of(z);
        std::uint64_t mmask = position_mask(marked);
        long long cons = 0;
        for (int idx = 0; idx < static_cast<int>(all_R_.size()); ++idx) {
            if (all_R_mask_[idx] & mmask) continue;
            ++cons;
            assignment_walk(z, all_R_[idx], [&](int lv, int, int, bool unc) {
                per_stage[lv - 1] += q / (unc ? wI1_[lv - 1] : wI0_[lv - 1]).value();
                return true;
            });
        }
        for (int s = 1; s <= k_; ++s)
            per_stage[k_ - 1 + s - 1] += static_cast<double>(cons) *
                                         static_cast<double>(patterns_[s - 1].size()) * q /
                                         wII_[s - 1].value();
    } else {
        for (const RVec& R : all_R_)
            assignment_walk(z, R, [&](int lv, int, int, bool unc) {
                double w = wI1_[lv - 1].value();
                if (lv > 1 && unc) w += wI0_[lv - 1].value();
                per_stage[lv - 1] += q * w;
                return true;
            });
        for (int s = 1; s <= k_; ++s)
            per_stage[k_ - 1 + s - 1] +=
                static_cast<double>(stage2_block_count(s)) * q * wII_[s - 1].value();
    }
}

long long KDistCertificate::stage2_block_count(int s) const {
    long long total = 0;
    for (const Pattern& p : patterns_[s - 1]) {
        std::vector<int> sz;
        sz.reserve(slots_.size());
        int loaded = 0;
        for (const Slot& sl : slots_) {
            sz.push_back(sl.size);
            loaded += sl.size;
        }
        for (int i = 0; i + 1 < s; ++i) {
            ++sz[insertion_slot(p, i)];
            ++loaded;
        }
        long long count = 1, rem = dom_.n;
        for (int v : sz) {
            count = checked_mul(count, binomial(rem, v));
            rem -= v;
        }
        total += checked_mul(count, static_cast<long long>(dom_.n - loaded));
    }
    return total;
}

void KDistCertificate::for_each_generator(int j, const std::vector<Input>& sample,
                                          const GeneratorSink& sink) const {
    // Assignment key of z on a vertex: values in loading order with 0 for
    // covered elements, prefixed by the element order itself being fixed.
    auto key_prefix = [&](const Input& z, const RVec& vertex, int stop_pos,
                          bool* unc_at_stop) -> std::vector<int> {
        std::vector<int> key;
        bool done = false;
        assignment_walk(z, vertex, [&](int, int, int pos, bool unc) {
            if (pos == stop_pos) {
                if (unc_at_stop) *unc_at_stop = unc;
                done = true;
                return false;
            }
            key.push_back(unc ? static_cast<int>(z[pos]) : 0);
            return true;
        });
        if (!done && stop_pos >= 0) key.clear();
        return key;
    };

    // Stage I blocks: every randomness choice whose subsets contain j.
    for (int idx = 0; idx < static_cast<int>(all_R_.size()); ++idx) {
        if (!(all_R_mask_[idx] >> j & 1)) continue;
        const RVec& R = all_R_[idx];
        int level = 0;
        for (std::size_t si = 0; si < slots_.size(); ++si)
            if (std::binary_search(R[si].begin(), R[si].end(), j)) level = slots_[si].level;
        std::map<std::vector<int>, std::pair<GeneratorTerm, GeneratorTerm>> groups;
        for (std::size_t zi = 0; zi < sample.size(); ++zi) {
            const Input& z = sample[zi];
            auto mit = marked_.find(z);
            bool pos_taken = false;
            if (mit != marked_.end())
                pos_taken = (all_R_mask_[idx] & position_mask(mit->second)) == 0;
            if (mit != marked_.end() && !pos_taken) continue;
            bool unc = false;
            auto key = key_prefix(z, R, j, &unc);
            auto& [psi, phi] = groups[key];
            if (level == 1) {
                double w = wI1_[0].value();
                psi.entries.emplace_back(static_cast<int>(zi),
                                         mit != marked_.end() ? 1.0 / std::sqrt(w)
                                                              : std::sqrt(w));
            } else {
                double w0 = wI0_[level - 1].value(), w1 = wI1_[level - 1].value();
                if (mit != marked_.end()) {
                    if (unc)
                        psi.entries.emplace_back(static_cast<int>(zi), 1.0 / std::sqrt(w1));
                    else
                        phi.entries.emplace_back(static_cast<int>(zi), 1.0 / std::sqrt(w0));
                } else {
                    psi.entries.emplace_back(static_cast<int>(zi), std::sqrt(w1));
                    if (unc) phi.entries.emplace_back(static_cast<int>(zi), std::sqrt(w0));
                }
            }
        }
        for (auto& [key, pair] : groups) {
            auto& [psi, phi] = pair;
            psi.coeff = q_;
            phi.coeff = q_;
            if (!psi.entries.empty()) sink(psi);
            if (!phi.entries.empty()) sink(phi);
        }
    }

    // Stage II blocks: arcs loading j from every component vertex avoiding j.
    for (int s = 1; s <= k_; ++s) {
        double w = wII_[s - 1].value();
        for (const Pattern& p : patterns_[s - 1]) {
            int sign = sign_of(s, p);
            std::vector<int> sz;
            for (const Slot& sl : slots_) sz.push_back(sl.size);
            for (int i = 0; i + 1 < s; ++i) ++sz[insertion_slot(p, i)];

            RVec cur(slots_.size());
            std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t si,
                                                                      std::uint64_t used) {
                if (si == slots_.size()) {
                    std::map<std::vector<int>, GeneratorTerm> groups;
                    for (std::size_t zi = 0; zi < sample.size(); ++zi) {
                        const Input& z = sample[zi];
                        auto mit = marked_.find(z);
                        double val;
                        if (mit != marked_.end()) {
                            const auto& marked = mit->second;
                            if (marked[s - 1] != j) continue;
                            std::uint64_t stripped = used, mk = position_mask(marked);
                            bool taken = true;
                            for (int i = 0; i + 1 < s && taken; ++i) {
                                const auto& slot = cur[insertion_slot(p, i)];
                                if (!std::binary_search(slot.begin(), slot.end(), marked[i]))
                                    taken = false;
                                stripped &= ~(1ull << marked[i]);
                            }
                            if (!taken || (stripped & mk)) continue;
                            val = 1.0 / std::sqrt(w);
                        } else {
                            val = sign * std::sqrt(w);
                        }
                        auto key = key_prefix(z, cur, -1, nullptr);
                        groups[key].entries.emplace_back(static_cast<int>(zi), val);
                    }
                    for (auto& [key, term] : groups) {
                        term.coeff = q_;
                        sink(term);
                    }
                    return;
                }
                std::vector<int> free;
                for (int t = 0; t < dom_.n; ++t)
                    if (t != j && !(used >> t & 1)) free.push_back(t);
                int need = sz[si];
                std::vector<int> idx(need);
                std::function<void(int, int)> choose = [&](int from, int got) {
                    if (got == need) {
                        cur[si].clear();
                        std::uint64_t add = 0;
                        for (int t = 0; t < need; ++t) {
                            cur[si].push_back(free[idx[t]]);
                            add |= 1ull << free[idx[t]];
                        }
                        rec(si + 1, used | add);
                        return;
                    }
                    for (int c = from; c < static_cast<int>(free.size()); ++c) {
                        idx[got] = c;
                        choose(c + 1, got + 1);
                    }
                };
                choose(0, 0);
            };
            rec(0, 0);
        }
    }
}

std::vector<std::string> KDistCertificate::weight_names() const {
    std::vector<std::string> out{"I.1.w"};
    for (int lv = 2; lv <= k_ - 1; ++lv) {
        out.push_back("I." + std::to_string(lv) + ".w0");
        out.push_back("I." + std::to_string(lv) + ".w1");
    }
    for (int s = 1; s <= k_; ++s) out.push_back("II." + std::to_string(s) + ".w");
    return out;
}

void KDistCertificate::scale_weights(const std::vector<Rat>& factor_per_weight) {
    if (factor_per_weight.size() != weight_names().size())
        throw std::invalid_argument("one factor per named weight");
    std::size_t i = 0;
    auto scaled = [&](const WeightSq& w) {
        Rat f = factor_per_weight[i++];
        return WeightSq(w.sq * f * f);
    };
    wI1_[0] = scaled(wI1_[0]);
    for (int lv = 2; lv <= k_ - 1; ++lv) {
        wI0_[lv - 1] = scaled(wI0_[lv - 1]);
        wI1_[lv - 1] = scaled(wI1_[lv - 1]);
    }
    for (int s = 1; s <= k_; ++s) wII_[s - 1] = scaled(wII_[s - 1]);
}

KDistCertificate::Infeasibility KDistCertificate::find_infeasible_pair() const {
    Infeasibility out;
    for (const Input& x : dom_.positives) {
        const auto& marked = marked_of(x);
        auto cons = consistent_indices(x);
        for (const Input& y : dom_.negatives) {
            Rat total(0);
            for (int idx : cons) total += walk_total(x, y, all_R_[idx], marked);
            if (total == Rat(1)) continue;
            out.found = true;
            out.x = x;
            out.y = y;
            out.residual = total;
            for (int idx : cons) {
                if (walk_total(x, y, all_R_[idx], marked) != Rat(0)) continue;
                out.witness = all_R_[idx];
                out.witness_agrees = vertices_agree(x, y, all_R_[idx]);
                out.witness_first_marked_equal = x[marked[0]] == y[marked[0]];
                for (const auto& slot : out.witness)
                    for (int b : slot)
                        if (y[b] == x[marked[0]]) out.uncover_faults.push_back(b);
                break;
            }
            return out;
        }
    }
    return out;
}

Rat KDistCertificate::block_contribution(const Input& x, const Input& y, int all_r_index,
                                         const std::vector<std::uint32_t>& Dmasks) const {
    const auto& marked = marked_of(x);
    int s = 0;
    for (int i = 0; i < k_; ++i)
        if (x[marked[i]] != y[marked[i]]) {
            s = i + 1;
            break;
        }
    if (s == 0) throw std::invalid_argument("pair agrees on every marked position");
    int l = static_cast<int>(Dmasks.size());
    if (l >= s) throw std::invalid_argument("need fewer fixed insertions than the split stage");
    std::vector<Pattern> completions{{}};
    for (int i = l + 1; i <= s - 1; ++i) {
        std::vector<Pattern> next;
        for (const auto& c : completions) {
            if (!ft_) {
                auto q = c;
                q.push_back(0);
                next.push_back(std::move(q));
            } else {
                for (std::uint32_t D = 1; D < (1u << (k_ - i)); ++D) {
                    auto q = c;
                    q.push_back(D);
                    next.push_back(std::move(q));
                }
            }
        }
        completions = std::move(next);
    }
    Rat total(0);
    for (const auto& c : completions) {
        Pattern full(Dmasks.begin(), Dmasks.end());
        full.insert(full.end(), c.begin(), c.end());
        RVec v = inserted_vertex(all_R_.at(all_r_index), marked, full, s);
        if (vertices_agree(x, y, v)) total += Rat(sign_of(s, full)) * q_;
    }
    return total;
}

Rat KDistCertificate::lemma_closed_form(const Input& x, const Input& y, int all_r_index,
                                        const std::vector<std::uint32_t>& Dmasks) const {
    const auto& marked = marked_of(x);
    int s = 0;
    for (int i = 0; i < k_; ++i)
        if (x[marked[i]] != y[marked[i]]) {
            s = i + 1;
            break;
        }
    if (s == 0) throw std::invalid_argument("pair agrees on every marked position");
    int l = static_cast<int>(Dmasks.size());
    if (l >= s) throw std::invalid_argument("need fewer fixed insertions than the split stage");
    Pattern partial(Dmasks.begin(), Dmasks.end());
    RVec v = inserted_vertex(all_R_.at(all_r_index), marked, partial, l + 1);
    if (!vertices_agree(x, y, v)) return Rat(0);
    int parity = l;
    for (std::uint32_t D : Dmasks) parity += std::popcount(D);
    return parity % 2 == 0 ? q_ : -q_;
}

std::unique_ptr<Certificate> build_kdist_first(int k, std::vector<int> r, PromiseDomain dom) {
    return std::make_unique<KDistCertificate>(k, std::move(r), false, std::move(dom));
}

std::unique_ptr<Certificate> build_kdist_final(int k, std::vector<int> r, PromiseDomain dom) {
    return std::make_unique<KDistCertificate>(k, std::move(r), true, std::move(dom));
}

}  // namespace advbound
