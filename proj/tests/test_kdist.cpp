#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "advbound/cert.hpp"
#include "advbound/kdist.hpp"
#include "advbound/oracles.hpp"

using namespace advbound;

namespace {

PromiseDomain kdist_domain(int k, int n, int m) {
    return sample_promise_domain(ProblemSpec::kdist(k), n, m, SampleCounts::exhaustive(), 0,
                                 PromiseMode::UniqueKTuple);
}

std::unique_ptr<KDistCertificate> desk3(bool fault_tolerant) {
    return std::make_unique<KDistCertificate>(3, std::vector<int>{1, 1}, fault_tolerant,
                                              kdist_domain(3, 8, 4));
}

}  // namespace

TEST_CASE("fault-tolerant instance: frozen shape") {
    auto cert = desk3(true);
    const auto& dom = cert->domain();
    CHECK(dom.positives.size() == 20160);
    CHECK(dom.negatives.size() == 2520);
    CHECK(cert->unit() == Rat(1, 120));
    CHECK(cert->all_randomness().size() == 6720);
    CHECK(cert->all_randomness().front().size() == 5);  // 3 + 2 labeled slots
    CHECK(cert->randomness_count(dom.positives[0]) == 120);

    CHECK(cert->stage_names() ==
          std::vector<std::string>{"I.1", "I.2", "II.1", "II.2", "II.3"});
    CHECK(cert->weight_names() == std::vector<std::string>{"I.1.w", "I.2.w0", "I.2.w1",
                                                           "II.1.w", "II.2.w", "II.3.w"});

    CHECK(cert->stage2_block_count(1) == 20160);
    CHECK(cert->stage2_block_count(2) == 60480);
    CHECK(cert->stage2_block_count(3) == 30240);
}

TEST_CASE("plain instance: frozen shape") {
    auto cert = desk3(false);
    CHECK(cert->unit() == Rat(1, 20));
    CHECK(cert->all_randomness().size() == 56);
    CHECK(cert->all_randomness().front().size() == 2);
    CHECK(cert->randomness_count(cert->domain().positives[0]) == 20);
    CHECK(cert->stage2_block_count(1) == 336);
    CHECK(cert->stage2_block_count(2) == 840);
    CHECK(cert->stage2_block_count(3) == 1680);
}

TEST_CASE("fault-tolerant residuals are exactly 1, split as q per randomness") {
    auto cert = desk3(true);
    const auto& dom = cert->domain();
    std::mt19937_64 rng(17);
    for (int t = 0; t < 100; ++t) {
        const Input& x = dom.positives[rng() % dom.positives.size()];
        const Input& y = dom.negatives[rng() % dom.negatives.size()];
        CHECK(cert->feasibility_residual(x, y) == Rat(1));
    }
    for (int t = 0; t < 10; ++t) {
        const Input& x = dom.positives[rng() % dom.positives.size()];
        const Input& y = dom.negatives[rng() % dom.negatives.size()];
        auto cons = cert->consistent_indices(x);
        REQUIRE(cons.size() == 120);
        for (int idx : cons) CHECK(cert->per_randomness_value(x, y, idx) == cert->unit());
    }
    for (int t = 0; t < 5; ++t) {
        const Input& x = dom.positives[rng() % dom.positives.size()];
        const Input& y = dom.negatives[rng() % dom.negatives.size()];
        Rat total(0);
        for (int j = 0; j < dom.n; ++j)
            if (x[j] != y[j]) total += cert->entry_cross(j, x, y);
        CHECK(total == Rat(1));
    }
}

TEST_CASE("plain construction fails on the first scanned fault pair, fixed variant holds") {
    auto plain = desk3(false);
    auto fixed = desk3(true);

    auto bad = plain->find_infeasible_pair();
    REQUIRE(bad.found);
    CHECK(bad.x == Input{1, 1, 1, 2, 2, 3, 3, 4});
    CHECK(bad.y == Input{1, 2, 2, 1, 3, 3, 4, 4});
    CHECK(bad.residual == Rat(9, 10));

    // Fault mechanism: x and y agree on the witness randomness, share the
    // first marked value, and y repeats that value inside a deeper subset,
    // so every insertion uncovers it for y only and kills the whole branch.
    CHECK(bad.witness == KDistCertificate::RVec{{5}, {3}});
    CHECK(bad.witness_agrees);
    CHECK(bad.witness_first_marked_equal);
    CHECK(bad.uncover_faults == std::vector<int>{3});
    CHECK(plain->per_randomness_value(bad.x, bad.y, 0) != Rat(0));

    CHECK(fixed->feasibility_residual(bad.x, bad.y) == Rat(1));
}

TEST_CASE("k = 2: plain and fault-tolerant coincide and verify exhaustively") {
    auto dom = kdist_domain(2, 5, 5);
    CHECK(dom.positives.size() == 1200);
    CHECK(dom.negatives.size() == 120);
    for (bool ft : {false, true}) {
        KDistCertificate cert(2, {2}, ft, dom);
        CHECK(cert.unit() == Rat(1, 3));
        auto report = verify_all_pairs(cert, PairMode::all());
        CHECK(report.pairs == 144000);
        CHECK(report.feasible);
        CHECK(report.max_abs_deviation == Rat(0));
    }
    KDistCertificate plain(2, {2}, false, dom);
    CHECK_FALSE(plain.find_infeasible_pair().found);
}

TEST_CASE("k = 2 exhaustive domain under a 3-letter alphabet is empty but clean") {
    auto dom = kdist_domain(2, 5, 3);
    CHECK(dom.positives.empty());
    CHECK(dom.negatives.empty());
    KDistCertificate cert(2, {2}, true, dom);
    auto report = verify_all_pairs(cert, PairMode::all());
    CHECK(report.pairs == 0);
    CHECK(report.feasible);
}

TEST_CASE("insertion cascade uncovers through deeper levels") {
    auto dom = sample_promise_domain(ProblemSpec::kdist(4), 11, 5, SampleCounts::sample(40, 40),
                                     3, PromiseMode::UniqueKTuple);
    KDistCertificate cert(4, {1, 1, 1}, false, dom);
    Input y{1, 2, 3, 4, 2, 1, 1, 3, 4, 5, 5};
    KDistCertificate::RVec base{{4}, {5}, {6}};
    auto before = cert.canonical_assignment(y, base);
    CHECK(before == std::vector<std::pair<int, int>>{{4, 2}, {5, 0}, {6, 0}});

    // Inserting position 0 (value 1) uncovers position 5 at level 2, whose
    // value then uncovers position 6 at level 3.
    KDistCertificate::RVec inserted{{0, 4}, {5}, {6}};
    auto after = cert.canonical_assignment(y, inserted);
    CHECK(after == std::vector<std::pair<int, int>>{{0, 1}, {4, 2}, {5, 1}, {6, 1}});
}

TEST_CASE("insertion block sums match the inclusion-exclusion closed form") {
    auto cert = desk3(true);
    const auto& dom = cert->domain();
    std::mt19937_64 rng(29);
    int agreeing = 0;
    for (int t = 0; t < 50; ++t) {
        const Input& x = dom.positives[rng() % dom.positives.size()];
        const Input& y = dom.negatives[rng() % dom.negatives.size()];
        auto cons = cert->consistent_indices(x);
        int ridx = cons[rng() % cons.size()];
        auto marked = marked_positions(x, 3);
        int s = 0;
        for (int i = 0; i < 3; ++i)
            if (x[marked[i]] != y[marked[i]]) {
                s = i + 1;
                break;
            }
        REQUIRE(s >= 1);
        int l = static_cast<int>(rng() % s);
        std::vector<std::uint32_t> Dmasks;
        for (int i = 1; i <= l; ++i)
            Dmasks.push_back(1 + static_cast<std::uint32_t>(rng() % ((1u << (3 - i)) - 1)));
        Rat block = cert->block_contribution(x, y, ridx, Dmasks);
        Rat closed = cert->lemma_closed_form(x, y, ridx, Dmasks);
        CHECK(block == closed);
        if (closed != Rat(0)) ++agreeing;
    }

    // Deliberate agreeing configurations: y matches x on every non-marked
    // position, so x and y agree on each consistent randomness and on every
    // partial insertion, making the closed form a signed q.
    const Input x{1, 1, 1, 2, 2, 3, 3, 4};
    for (const Input& y : {Input{4, 1, 1, 2, 2, 3, 3, 4}, Input{1, 4, 1, 2, 2, 3, 3, 4}}) {
        int s = x[0] != y[0] ? 1 : 2;
        std::vector<std::vector<std::uint32_t>> queries{{}};
        if (s == 2) queries.insert(queries.end(), {{1u}, {2u}, {3u}});
        for (int ridx : cert->consistent_indices(x))
            for (const auto& Dmasks : queries) {
                Rat block = cert->block_contribution(x, y, ridx, Dmasks);
                Rat closed = cert->lemma_closed_form(x, y, ridx, Dmasks);
                CHECK(block == closed);
                int parity = static_cast<int>(Dmasks.size());
                for (auto D : Dmasks) parity += std::popcount(D);
                CHECK(closed == (parity % 2 == 0 ? cert->unit() : -cert->unit()));
                ++agreeing;
            }
    }
    CHECK(agreeing > 0);

    // The l = 0 case is the per-randomness identity restricted to the first
    // disagreeing stage: q when x and y agree on the randomness, else 0.
    int hits = 0;
    for (int t = 0; t < 30; ++t) {
        const Input& y = dom.negatives[t];
        for (int ridx : cert->consistent_indices(x)) {
            Rat block = cert->block_contribution(x, y, ridx, {});
            Rat closed = cert->lemma_closed_form(x, y, ridx, {});
            CHECK(block == closed);
            if (closed == cert->unit()) ++hits;
        }
    }
    CHECK(hits > 0);
}

TEST_CASE("generators agree with the summed diagonal and cross entries") {
    for (bool ft : {true, false}) {
        auto cert = desk3(ft);
        auto sample = psd_sample(cert->domain(), 20, 37);
        CHECK(generator_diagonal_deviation(*cert, sample) < 1e-9);
        CHECK(generator_cross_deviation(*cert, sample) < 1e-9);
    }
}

TEST_CASE("psd spot check on the assembled matrices") {
    auto cert = desk3(true);
    auto sample = psd_sample(cert->domain(), 60, 31);
    for (int j : {0, 4}) {
        auto rep = psd_spotcheck(*cert, j, sample);
        CHECK(rep.structural);
        CHECK(rep.pass);
    }
}

TEST_CASE("diagonal closed forms at the desk instance") {
    auto cert = desk3(true);
    const Input x{1, 1, 1, 2, 2, 3, 3, 4};
    const Input y{1, 2, 2, 1, 3, 3, 4, 4};
    double q = 1.0 / 120.0, w0 = std::sqrt(8.0), w1 = 1.0 / std::sqrt(8.0);

    std::vector<double> pos(5, 0.0);
    cert->add_diagonal(x, true, pos);
    CHECK(pos[0] == doctest::Approx(3.0).epsilon(1e-12));
    // A level-2 element is matched when its x-value appears in one of its two
    // source subsets. Over the 120 arrangements of positions 3..7 (x-values
    // 2,2,3,3,4) each of the 240 level-2 element slots matches with
    // probability 2/5, giving 96 matched entries.
    CHECK(pos[1] == doctest::Approx((96 * w0 + 144 * w1) * q).epsilon(1e-12));
    CHECK(pos[2] == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
    CHECK(pos[3] == doctest::Approx(24.0).epsilon(1e-12));
    CHECK(pos[4] == doctest::Approx(3 * std::sqrt(512.0)).epsilon(1e-12));

    std::vector<double> neg(5, 0.0);
    cert->add_diagonal(y, false, neg);
    CHECK(neg[0] == doctest::Approx(3 * 6720 * q).epsilon(1e-12));
    double level2 = 0;
    for (const auto& R : cert->all_randomness()) {
        auto assignment = cert->canonical_assignment(y, R);
        for (std::size_t i = 3; i < assignment.size(); ++i)
            level2 += q * (w1 + (assignment[i].second != 0 ? w0 : 0.0));
    }
    CHECK(neg[1] == doctest::Approx(level2).epsilon(1e-12));
    CHECK(neg[2] == doctest::Approx(20160 * q * std::sqrt(1.0 / 8)).epsilon(1e-12));
    CHECK(neg[3] == doctest::Approx(63.0).epsilon(1e-12));
    CHECK(neg[4] == doctest::Approx(30240 * q / std::sqrt(512.0)).epsilon(1e-12));
}

TEST_CASE("residuals survive weight perturbation and scale with the unit") {
    auto cert = desk3(true);
    const Input x{1, 1, 1, 2, 2, 3, 3, 4};
    const Input y{1, 2, 2, 1, 3, 3, 4, 4};
    CHECK(cert->feasibility_residual(x, y) == Rat(1));

    std::vector<double> before(5, 0.0);
    cert->add_diagonal(x, true, before);
    cert->scale_weights({Rat(3, 2), Rat(2), Rat(1, 2), Rat(5, 7), Rat(9, 4), Rat(1, 3)});
    CHECK(cert->feasibility_residual(x, y) == Rat(1));
    std::vector<double> after(5, 0.0);
    cert->add_diagonal(x, true, after);
    CHECK(after[2] != doctest::Approx(before[2]).epsilon(1e-12));

    cert->scale_unit(Rat(2));
    CHECK(cert->unit() == Rat(1, 60));
    CHECK(cert->feasibility_residual(x, y) == Rat(2));
}

TEST_CASE("builder rejects malformed instances") {
    auto dom = kdist_domain(2, 5, 5);
    CHECK_THROWS(KDistCertificate(1, {}, false, dom));
    CHECK_THROWS(KDistCertificate(2, {1, 1}, false, dom));
    CHECK_THROWS(KDistCertificate(2, {0}, false, dom));
    CHECK_THROWS(KDistCertificate(2, {4}, false, dom));  // no room for marked positions
    CHECK_THROWS(KDistCertificate(7, {1, 1, 1, 1, 1, 1}, true, dom));

    // positives without a unique k-tuple are rejected
    auto loose = sample_promise_domain(ProblemSpec::kdist(3), 8, 4, SampleCounts::exhaustive(),
                                       0, PromiseMode::None);
    CHECK_THROWS(KDistCertificate(3, {1, 1}, false, loose));
}
