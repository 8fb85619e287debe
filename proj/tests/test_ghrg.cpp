#include "generators.hpp"
#include "oracles.hpp"

#include "netcp/error.hpp"
#include "netcp/ghrg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace netcp;

namespace {

using Id = Dendrogram::NodeId;

/// Root over two children holding leaves {0,1} and {2,3,4}.
Dendrogram two_three() { return Dendrogram(5, {{0, 1}, {2, 3, 4}, {5, 6}}); }

std::size_t root_ordinal(const Dendrogram& t) { return t.ordinal(t.root()); }

} // namespace

TEST(CountPairs, RootOverTwoAndThree) {
    const auto t = two_three();
    const auto c = count_pairs(t, GraphSnapshot(0, 5, {}));
    EXPECT_EQ(c.pairs[root_ordinal(t)], 6);
}

TEST(CountPairs, RootOverOneOneTwo) {
    const Dendrogram t(4, {{2, 3}, {0, 1, 4}});
    const auto c = count_pairs(t, GraphSnapshot(0, 4, {}));
    EXPECT_EQ(c.pairs[root_ordinal(t)], 5);
}

TEST(CountPairs, StarOverThree) {
    const auto t = Dendrogram::star(3);
    const auto c = count_pairs(t, GraphSnapshot(0, 3, {{0, 1}}));
    EXPECT_EQ(c.edges, (std::vector<std::int64_t>{1}));
    EXPECT_EQ(c.pairs, (std::vector<std::int64_t>{3}));
}

TEST(CountPairs, MatchesBruteForceAndConserves) {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + uniform_index(rng, 20);
        const auto tree = testgen::random_dendrogram(n, rng);
        const auto g = oracle::random_graph(n, uniform01(rng), rng);
        const auto c = count_pairs(tree, g);
        const auto expected = oracle::naive_counts(tree, g);
        EXPECT_EQ(c.edges, expected.edges);
        EXPECT_EQ(c.pairs, expected.pairs);
        EXPECT_EQ(std::accumulate(c.pairs.begin(), c.pairs.end(), std::int64_t{0}),
                  static_cast<std::int64_t>(n * (n - 1) / 2));
        EXPECT_EQ(std::accumulate(c.edges.begin(), c.edges.end(), std::int64_t{0}),
                  static_cast<std::int64_t>(g.edge_count()));
    }
}

TEST(CountPairs, RejectsVertexMismatch) {
    EXPECT_THROW(count_pairs(Dendrogram::star(3), GraphSnapshot(0, 4, {})), InvalidArgument);
}

TEST(LogLikelihood, SmallStars) {
    const std::vector<double> half{0.5};
    EXPECT_NEAR(log_likelihood(Dendrogram::star(2), half, GraphSnapshot(0, 2, {{0, 1}})), std::log(0.5), 1e-12);
    EXPECT_NEAR(log_likelihood(Dendrogram::star(2), half, GraphSnapshot(0, 2, {})), std::log(0.5), 1e-12);
    const std::vector<double> p{0.2};
    EXPECT_NEAR(log_likelihood(Dendrogram::star(3), p, GraphSnapshot(0, 3, {{0, 1}})), std::log(0.2 * 0.8 * 0.8),
                1e-12);
}

TEST(LogLikelihood, ImpossibleDataIsMinusInfinity) {
    const std::vector<double> zero{0.0};
    EXPECT_EQ(log_likelihood(Dendrogram::star(3), zero, GraphSnapshot(0, 3, {{0, 1}})),
              -std::numeric_limits<double>::infinity());
    EXPECT_EQ(log_likelihood(Dendrogram::star(3), zero, GraphSnapshot(0, 3, {})), 0.0);
}

TEST(LogLikelihood, MissingProbabilityIsAnError) {
    const std::vector<double> none;
    EXPECT_THROW(log_likelihood(two_three(), none, GraphSnapshot(0, 5, {})), InvalidArgument);
}

TEST(LogLikelihood, StarIsErdosRenyi) {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + uniform_index(rng, 25);
        const double p = 0.05 + 0.9 * uniform01(rng);
        const auto g = oracle::random_graph(n, p, rng);
        const double m = static_cast<double>(n * (n - 1) / 2);
        const double e = static_cast<double>(g.edge_count());
        const std::vector<double> probs{p};
        EXPECT_NEAR(log_likelihood(Dendrogram::star(n), probs, g), e * std::log(p) + (m - e) * std::log1p(-p), 1e-9);
    }
}

TEST(LogMarginal, ClosedFormExamples) {
    EXPECT_NEAR(log_marginal(count_pairs(Dendrogram::star(2), GraphSnapshot(0, 2, {{0, 1}})), BetaParams{}),
                std::log(0.5), 1e-12);
    const double v = log_marginal(count_pairs(Dendrogram::star(3), GraphSnapshot(0, 3, {{0, 1}})), BetaParams{});
    EXPECT_NEAR(v, std::log(1.0 / 12.0), 1e-12);
    EXPECT_NEAR(v, -2.4849, 1e-4);
}

TEST(LogMarginal, EmptyNodeContributesZero) {
    EXPECT_EQ(log_beta_binomial(0, 0, BetaParams{2.0, 3.0}), 0.0);
    EXPECT_THROW(log_beta_binomial(-1, 3, BetaParams{}), InvalidArgument);
    EXPECT_THROW(log_beta_binomial(4, 3, BetaParams{}), InvalidArgument);
}

TEST(LogMarginal, MatchesQuadrature) {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + uniform_index(rng, 7);
        const auto tree = testgen::random_dendrogram(n, rng);
        const auto g = oracle::random_graph(n, uniform01(rng), rng);
        const BetaParams prior = trial % 2 == 0 ? BetaParams{} : BetaParams{0.5 + 3 * uniform01(rng), 0.5 + 3 * uniform01(rng)};
        const auto naive = oracle::naive_counts(tree, g);
        double expected = 0.0;
        for (std::size_t k = 0; k < naive.edges.size(); ++k) {
            expected += oracle::log_beta_integral(naive.edges[k], naive.pairs[k], prior.alpha, prior.beta);
        }
        EXPECT_NEAR(log_marginal(tree, count_pairs(tree, g), prior), expected, 1e-6) << "trial " << trial;
    }
}

TEST(LogMarginal, InvariantUnderChildOrderAndRelabeling) {
    // Same tree with children listed in another order.
    const Dendrogram a(5, {{0, 1}, {2, 3, 4}, {5, 6}});
    const Dendrogram b(5, {{4, 2, 3}, {1, 0}, {5, 6}});
    const GraphSnapshot g(0, 5, {{0, 1}, {1, 2}, {3, 4}, {2, 4}});
    EXPECT_NEAR(log_marginal(a, count_pairs(a, g), BetaParams{}), log_marginal(b, count_pairs(b, g), BetaParams{}),
                1e-12);
    // Relabel v -> 4 - v in both tree and graph.
    const Dendrogram c(5, {{4, 3}, {2, 1, 0}, {5, 6}});
    const GraphSnapshot h(0, 5, {{4, 3}, {3, 2}, {1, 0}, {2, 0}});
    EXPECT_NEAR(log_marginal(a, count_pairs(a, g), BetaParams{}), log_marginal(c, count_pairs(c, h), BetaParams{}),
                1e-12);
    const std::vector<double> probs{0.3, 0.6, 0.1};
    EXPECT_NEAR(log_likelihood(a, probs, g), log_likelihood(c, probs, h), 1e-12);
}

TEST(PosteriorUpdate, ArithmeticExample) {
    const std::vector<PairCounts> window{{{2}, {6}}, {{0}, {6}}, {{1}, {6}}};
    const auto post = posterior_update(BetaParams{}, window);
    ASSERT_EQ(post.size(), 1u);
    EXPECT_EQ(post[0], (BetaParams{4.0, 16.0}));
    EXPECT_DOUBLE_EQ(posterior_mean(post[0]), 0.2);
}

TEST(PosteriorUpdate, EmptyWindowKeepsPrior) {
    const auto post = posterior_update(BetaParams{2.0, 5.0}, std::span<const PairCounts>{}, 3);
    ASSERT_EQ(post.size(), 3u);
    for (const auto& p : post) {
        EXPECT_EQ(p, (BetaParams{2.0, 5.0}));
    }
}

TEST(PosteriorUpdate, ConservesPseudoCounts) {
    Rng rng(2);
    const auto tree = testgen::random_dendrogram(12, rng);
    std::vector<PairCounts> window;
    for (int t = 0; t < 5; ++t) {
        window.push_back(count_pairs(tree, oracle::random_graph(12, 0.3, rng)));
    }
    const BetaParams prior{0.7, 1.3};
    const auto post = posterior_update(prior, window);
    for (std::size_t k = 0; k < post.size(); ++k) {
        EXPECT_NEAR(post[k].alpha + post[k].beta, prior.alpha + prior.beta + 5.0 * static_cast<double>(tree.possible_pairs(k)), 1e-9);
    }
}

TEST(PosteriorUpdate, MismatchedTreesAreAnError) {
    const std::vector<PairCounts> window{{{1}, {6}}, {{1, 0}, {3, 3}}};
    EXPECT_THROW(posterior_update(BetaParams{}, window), InvalidArgument);
}

TEST(PosteriorUpdate, OneMoreEdgeMovesOneNode) {
    const auto tree = two_three();
    const GraphSnapshot g(0, 5, {{0, 2}});
    const GraphSnapshot h(0, 5, {{0, 2}, {3, 4}});
    const std::vector<PairCounts> before{count_pairs(tree, g)};
    const std::vector<PairCounts> after{count_pairs(tree, h)};
    const auto p = posterior_update(BetaParams{}, before);
    const auto q = posterior_update(BetaParams{}, after);
    int changed = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (!(p[k] == q[k])) {
            ++changed;
            EXPECT_DOUBLE_EQ(q[k].alpha, p[k].alpha + 1.0);
            EXPECT_DOUBLE_EQ(q[k].beta, p[k].beta - 1.0);
        }
    }
    EXPECT_EQ(changed, 1);
}

TEST(PosteriorMean, Examples) {
    EXPECT_DOUBLE_EQ(posterior_mean({1.0, 1.0}), 0.5);
    EXPECT_DOUBLE_EQ(posterior_mean({4.0, 16.0}), 0.2);
    EXPECT_NEAR(posterior_mean({1.0 + 3000.0, 1.0 + 7000.0}), 0.3, 1e-4);
}

TEST(GhrgModel, RequiresOneParamPerNode) {
    EXPECT_THROW(GhrgModel(two_three(), {BetaParams{}}), InvalidArgument);
    EXPECT_THROW(GhrgModel(Dendrogram::star(3), {BetaParams{0.0, 1.0}}), InvalidArgument);
}

TEST(SampleGraph, DegenerateProbabilities) {
    Rng rng(1);
    const auto star = Dendrogram::star(7);
    const std::vector<double> one{1.0};
    const std::vector<double> zero{0.0};
    EXPECT_EQ(sample_graph(star, one, rng).edge_count(), 21u);
    EXPECT_EQ(sample_graph(star, zero, rng).edge_count(), 0u);
}

TEST(SampleGraph, MeanEdgeCountMatchesBinomial) {
    const GhrgModel model(Dendrogram::star(30), {BetaParams{2.0, 8.0}});
    Rng rng(99);
    const int samples = 10000;
    double total = 0.0;
    for (int i = 0; i < samples; ++i) {
        total += static_cast<double>(sample_graph(model, rng).edge_count());
    }
    const double mean = total / samples;
    const double sigma = std::sqrt(435.0 * 0.2 * 0.8 / samples);
    EXPECT_NEAR(mean, 87.0, 3.0 * sigma);
}

TEST(SampleGraph, PlugInUsesPosteriorMeanPerNode) {
    const auto tree = two_three();
    const std::vector<double> probs{1.0, 0.0, 0.0};
    Rng rng(4);
    const auto g = sample_graph(tree, probs, rng);
    const auto c = count_pairs(tree, g);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(c.edges[k], probs[k] == 1.0 ? c.pairs[k] : 0);
    }
}

TEST(SampleCounts, AgreesWithSampledGraph) {
    Rng gen(21);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + uniform_index(gen, 15);
        const auto tree = testgen::random_dendrogram(n, gen);
        std::vector<double> probs(tree.internal_count());
        for (auto& p : probs) {
            p = uniform01(gen);
        }
        Rng a(trial);
        Rng b(trial);
        EXPECT_EQ(count_pairs(tree, sample_graph(tree, probs, a)), sample_counts(tree, probs, b));
        EXPECT_EQ(a(), b());
    }
}
