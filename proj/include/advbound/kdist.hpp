#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "advbound/cert.hpp"
#include "advbound/input.hpp"

namespace advbound {

// Certificate for k-distinctness under the unique-k-tuple promise.
//
// The randomness is a tuple of disjoint position subsets, one per slot. In
// the plain variant each level 1..k-1 has a single slot of size r_i; in the
// fault-tolerant variant a level-i slot exists for every label (d_1..d_{i-1},
// D) with d_j in [k-j] and nonempty D subset of [k-i], and the uncover test
// for a level-i element unions the values of all level-(i-1) labels whose D
// contains d_{i-1}.
//
// Stage I loads the randomness level by level (positions ascending within a
// level); stage II.s loads marked position a_s from vertices obtained by
// inserting a_1..a_{s-1}. The plain variant inserts a_i into its only level-i
// slot; the fault-tolerant variant sums over one insertion pattern per choice
// of nonempty D_1..D_{s-1}, inserting a_i into label (min D_1..min D_{i-1},
// D_i), with block sign (-1)^(s + |D_1| + ... + |D_(s-1)| + 1).
class KDistCertificate final : public Certificate {
public:
    KDistCertificate(int k, std::vector<int> r, bool fault_tolerant, PromiseDomain dom);

    const PromiseDomain& domain() const override { return dom_; }
    Rat unit() const override { return q_; }
    const std::vector<std::string>& stage_names() const override { return names_; }

    Rat entry_cross(int j, const Input& x, const Input& y) const override;
    void add_diagonal(const Input& z, bool positive,
                      std::vector<double>& per_stage) const override;
    int randomness_count(const Input& x) const override;
    Rat per_randomness_total(const Input& x, const Input& y, int ridx) const override;
    Rat feasibility_residual(const Input& x, const Input& y) const override;
    void for_each_generator(int j, const std::vector<Input>& sample,
                            const GeneratorSink& sink) const override;

    void scale_unit(const Rat& factor) override { q_ *= factor; }
    std::vector<std::string> weight_names() const override;
    void scale_weights(const std::vector<Rat>& factor_per_weight) override;

    // One randomness choice: element list per slot, ascending, disjoint.
    using RVec = std::vector<std::vector<int>>;

    const std::vector<RVec>& all_randomness() const { return all_R_; }
    std::vector<int> consistent_indices(const Input& x) const;  // into all_randomness
    Rat per_randomness_value(const Input& x, const Input& y, int all_r_index) const;

    // Canonical assignment of z on a vertex, in loading order: (position,
    // value) with value 0 for covered elements.
    std::vector<std::pair<int, int>> canonical_assignment(const Input& z,
                                                          const RVec& vertex) const;

    struct Infeasibility {
        bool found = false;
        Input x, y;
        Rat residual{0};
        RVec witness;                          // first randomness with zero total
        bool witness_agrees = false;           // x, y agree on the witness
        bool witness_first_marked_equal = false;  // y_{a_1} = x_{a_1}
        std::vector<int> uncover_faults;       // positions b with y_b = x_{a_1}
    };
    // Scans cross pairs in (x, y)-lexicographic order for a residual != 1.
    Infeasibility find_infeasible_pair() const;

    // Sum of the signed entries over all insertion completions of the vertex
    // R[D_1 <- a_1, ..., D_l <- a_l] at the first marked disagreement, and
    // the inclusion-exclusion closed form it must equal.
    Rat block_contribution(const Input& x, const Input& y, int all_r_index,
                           const std::vector<std::uint32_t>& Dmasks) const;
    Rat lemma_closed_form(const Input& x, const Input& y, int all_r_index,
                          const std::vector<std::uint32_t>& Dmasks) const;

    int k() const { return k_; }
    bool fault_tolerant() const { return ft_; }
    long long stage2_block_count(int s) const;  // arcs of stage II.s

private:
    struct Label {
        std::vector<int> d;        // d_1..d_(i-1)
        std::uint32_t Dmask = 0;   // nonempty for the fault-tolerant table
        std::vector<int> sources;  // label indices at the previous level
    };
    struct Slot {
        int level = 0;  // 1-based
        int label = 0;
        int size = 0;
    };
    using Pattern = std::vector<std::uint32_t>;  // D_1..D_(s-1)

    int k_ = 0;
    bool ft_ = false;
    std::vector<int> r_;
    PromiseDomain dom_;
    Rat q_{0};
    std::vector<std::string> names_;  // I.1..I.(k-1), II.1..II.k
    std::vector<std::vector<Label>> labels_;      // [level-1]
    std::vector<Slot> slots_;                     // level-major
    std::vector<std::vector<int>> slot_of_level_;  // [level-1] -> slot ids
    std::vector<std::vector<Pattern>> patterns_;  // [s-1] -> insertion patterns
    std::vector<RVec> all_R_;
    std::vector<std::uint64_t> all_R_mask_;  // union of the subsets, per entry
    std::map<Input, std::vector<int>> marked_;  // positive -> a_1 < ... < a_k
    std::vector<WeightSq> wI0_, wI1_;           // [level-1]; level 1 uses wI1 only
    std::vector<WeightSq> wII_;                 // [s-1]

    const std::vector<int>& marked_of(const Input& x) const;
    int label_index(int level, const std::vector<int>& d, std::uint32_t Dmask) const;
    int slot_index(int level, int label) const;
    int insertion_slot(const Pattern& p, int i) const;  // level i+1 slot for a_(i+1)
    int sign_of(int s, const Pattern& p) const;

    // Canonical assignment walk over a vertex given as elements per slot.
    // visit(level, label, pos, uncovered, value_or_star) is called in loading
    // order; returning false stops the walk.
    template <typename Visit>
    void assignment_walk(const Input& z, const RVec& vertex, const Visit& visit) const;

    bool vertices_agree(const Input& x, const Input& y, const RVec& vertex) const;
    RVec inserted_vertex(const RVec& R, const std::vector<int>& marked, const Pattern& p,
                         int upto_s) const;
    Rat walk_total(const Input& x, const Input& y, const RVec& R,
                   const std::vector<int>& marked) const;
};

std::unique_ptr<Certificate> build_kdist_first(int k, std::vector<int> r, PromiseDomain dom);
std::unique_ptr<Certificate> build_kdist_final(int k, std::vector<int> r, PromiseDomain dom);

}  // namespace advbound
