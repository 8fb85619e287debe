#include "netcp/error.hpp"
#include "netcp/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace netcp;

namespace {

std::vector<Edge> edges_of(const GraphSnapshot& g) { return {g.edges().begin(), g.edges().end()}; }

constexpr GroupSizes kEqual{15, 15};

struct BlockTally {
    double in_a = 0;
    double in_b = 0;
    double out = 0;
};

BlockTally tally(const GraphSnapshot& g, std::size_t a) {
    BlockTally t;
    for (const auto& e : g.edges()) {
        const bool ua = e.u < a;
        const bool va = e.v < a;
        if (ua && va) {
            t.in_a += 1;
        } else if (!ua && !va) {
            t.in_b += 1;
        } else {
            t.out += 1;
        }
    }
    return t;
}

/// |observed - expected| within 3 binomial standard deviations.
void expect_binomial(double hits, double trials, double p) {
    const double sd = std::sqrt(trials * p * (1 - p));
    EXPECT_LE(std::abs(hits - trials * p), 3.0 * sd + 1e-9) << "p = " << p << ", trials = " << trials;
}

} // namespace

TEST(SolveMergeSplit, UniformAtHalf) {
    const auto probs = solve_merge_split(0.5, 0.2, kEqual);
    EXPECT_NEAR(probs.p_in_a, 0.2, 1e-12);
    EXPECT_NEAR(probs.p_in_b, 0.2, 1e-12);
    EXPECT_NEAR(probs.p_out, 0.2, 1e-12);
}

TEST(SolveMergeSplit, LinearConstraintExample) {
    const double s = 0.2 / ((210.0 / 435.0) * 0.8 + (225.0 / 435.0) * 0.2);
    const auto probs = solve_merge_split(0.2, 0.2, kEqual);
    EXPECT_NEAR(s, 0.4084, 1e-4);
    EXPECT_NEAR(probs.p_in_a, 0.8 * s, 1e-12);
    EXPECT_NEAR(probs.p_in_b, 0.8 * s, 1e-12);
    EXPECT_NEAR(probs.p_out, 0.2 * s, 1e-12);
    EXPECT_NEAR(probs.p_in_a, 0.3268, 1e-4);
    EXPECT_NEAR(probs.p_out, 0.0817, 1e-4);
}

TEST(SolveMergeSplit, ZeroMuLimit) {
    const auto probs = solve_merge_split(1e-9, 0.2, kEqual);
    EXPECT_NEAR(probs.p_out, 0.0, 1e-8);
    EXPECT_NEAR(probs.p_in_a, 0.2 * 435.0 / 210.0, 1e-7);
}

TEST(SolveMergeSplit, InfeasibleIsAnError) {
    EXPECT_THROW(solve_merge_split(0.01, 0.6, kEqual), InvalidArgument);
    EXPECT_THROW(solve_merge_split(0.3, 0.0, kEqual), InvalidArgument);
}

TEST(SolveFormFragment, FragmentedEndpoint) {
    const auto probs = solve_form_fragment(1.0, 0.2, kEqual, 0.2);
    EXPECT_EQ(probs.p_in_b, 0.0);
    EXPECT_NEAR(probs.p_in_a, 0.2, 1e-12);
    EXPECT_NEAR(probs.p_out, (0.2 * 435.0 - 0.2 * 105.0) / 225.0, 1e-12);
    EXPECT_NEAR(probs.p_out, 0.2933, 1e-4);
}

TEST(SolveFormFragment, UniformWhenDensityMatchesFixedBlock) {
    const auto probs = solve_form_fragment(0.5, 0.2, kEqual, 0.2);
    EXPECT_NEAR(probs.p_in_a, 0.2, 1e-12);
    EXPECT_NEAR(probs.p_in_b, 0.2, 1e-12);
    EXPECT_NEAR(probs.p_out, 0.2, 1e-12);
}

TEST(SolveFormFragment, ExpectedDensityIsHeld) {
    for (double mu : {0.1, 0.3, 0.55, 0.8, 1.0}) {
        const auto probs = solve_form_fragment(mu, 0.2, kEqual, 0.2);
        EXPECT_NEAR((105.0 * probs.p_in_a + 105.0 * probs.p_in_b + 225.0 * probs.p_out) / 435.0, 0.2, 1e-12);
        EXPECT_NEAR(probs.p_out / (probs.p_in_b + probs.p_out), mu, 1e-12);
    }
    EXPECT_THROW(solve_form_fragment(0.5, 0.2, kEqual, 1.5), InvalidArgument);
}

TEST(ChangeSpec, ValidationAndEndpoints) {
    EXPECT_NO_THROW(ChangeSpec{}.validate());
    for (auto kind : {ChangeKind::merge, ChangeKind::split, ChangeKind::form, ChangeKind::fragment}) {
        EXPECT_NO_THROW(ChangeSpec::for_delta(kind, 0.3).validate());
        EXPECT_EQ(parse_change_kind(to_string(kind)), kind);
    }
    ChangeSpec bad;
    bad.mu_before = 0.4;
    EXPECT_THROW(bad.validate(), InvalidArgument);
    bad = ChangeSpec{};
    bad.t_c = 12;
    EXPECT_THROW(bad.validate(), InvalidArgument);
    bad = ChangeSpec{};
    bad.groups = {10, 10};
    EXPECT_THROW(bad.validate(), InvalidArgument);
    bad = ChangeSpec::for_delta(ChangeKind::merge, 0.3);
    bad.mu_after = 0.6;
    EXPECT_THROW(bad.validate(), InvalidArgument);
    EXPECT_THROW(parse_change_kind("shatter"), InvalidArgument);
}

TEST(GenerateSequence, SplitMatchesBlockProbabilities) {
    ChangeSpec spec;
    spec.seed = 31;
    const double w_in = 105.0;
    const double w_out = 225.0;
    BlockTally before;
    BlockTally after;
    double before_snaps = 0;
    double after_snaps = 0;
    for (int rep = 0; rep < 40; ++rep) {
        spec.seed = 31 + static_cast<std::uint64_t>(rep);
        const auto synthetic = generate_sequence(spec);
        ASSERT_EQ(synthetic.sequence.size(), 12u);
        EXPECT_EQ(synthetic.t_c, 8);
        for (const auto& g : synthetic.sequence.snapshots()) {
            const auto t = tally(g, 15);
            auto& acc = g.time() < 8 ? before : after;
            (g.time() < 8 ? before_snaps : after_snaps) += 1;
            acc.in_a += t.in_a;
            acc.in_b += t.in_b;
            acc.out += t.out;
        }
    }
    const auto pb = block_probs(spec, 0.5);
    const auto pa = block_probs(spec, 0.05);
    expect_binomial(before.in_a, before_snaps * w_in, pb.p_in_a);
    expect_binomial(before.in_b, before_snaps * w_in, pb.p_in_b);
    expect_binomial(before.out, before_snaps * w_out, pb.p_out);
    expect_binomial(after.in_a, after_snaps * w_in, pa.p_in_a);
    expect_binomial(after.in_b, after_snaps * w_in, pa.p_in_b);
    expect_binomial(after.out, after_snaps * w_out, pa.p_out);
}

TEST(GenerateSequence, DensityConstantAcrossKinds) {
    for (auto kind : {ChangeKind::merge, ChangeKind::split, ChangeKind::form, ChangeKind::fragment}) {
        auto spec = ChangeSpec::for_delta(kind, 0.4);
        double edges = 0;
        double pairs = 0;
        for (int rep = 0; rep < 30; ++rep) {
            spec.seed = 500 + static_cast<std::uint64_t>(rep);
            for (const auto& g : generate_sequence(spec).sequence.snapshots()) {
                edges += static_cast<double>(g.edge_count());
                pairs += 435.0;
            }
        }
        expect_binomial(edges, pairs, 0.2);
    }
}

TEST(GenerateSequence, MonteCarloDensityAtSolvedProbabilities) {
    Rng rng(33);
    const auto probs = solve_merge_split(0.2, 0.2, kEqual);
    BlockTally total;
    for (int rep = 0; rep < 200; ++rep) {
        const auto t = tally(sample_block_graph(probs, kEqual, 0, rng), 15);
        total.in_a += t.in_a;
        total.in_b += t.in_b;
        total.out += t.out;
    }
    expect_binomial(total.in_a + total.in_b, 200 * 210.0, probs.p_in_a);
    expect_binomial(total.out, 200 * 225.0, probs.p_out);
}

TEST(GenerateSequence, DeterministicPerSeed) {
    ChangeSpec spec = ChangeSpec::for_delta(ChangeKind::form, 0.4);
    spec.seed = 8;
    const auto a = generate_sequence(spec);
    const auto b = generate_sequence(spec);
    ASSERT_EQ(a.sequence.size(), b.sequence.size());
    for (std::size_t t = 0; t < a.sequence.size(); ++t) {
        EXPECT_EQ(edges_of(a.sequence[t]), edges_of(b.sequence[t]));
    }
    spec.seed = 9;
    const auto c = generate_sequence(spec);
    bool differs = false;
    for (std::size_t t = 0; t < a.sequence.size(); ++t) {
        differs = differs || edges_of(a.sequence[t]) != edges_of(c.sequence[t]);
    }
    EXPECT_TRUE(differs);
}

TEST(GenerateSequence, NoChangeControl) {
    ChangeSpec spec;
    spec.mu_after = 0.5;
    const auto synthetic = generate_sequence(spec);
    EXPECT_EQ(synthetic.before.p_in_a, synthetic.after.p_in_a);
    EXPECT_EQ(synthetic.before.p_out, synthetic.after.p_out);
}

TEST(GenerateSequence, MergeIsTimeReversedSplit) {
    const auto merge = ChangeSpec::for_delta(ChangeKind::merge, 0.35);
    const auto split = ChangeSpec::for_delta(ChangeKind::split, 0.35);
    const auto m = generate_sequence(merge);
    const auto s = generate_sequence(split);
    EXPECT_EQ(m.before.p_in_a, s.after.p_in_a);
    EXPECT_EQ(m.before.p_out, s.after.p_out);
    EXPECT_EQ(m.after.p_out, s.before.p_out);
}
