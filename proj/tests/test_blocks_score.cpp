#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gld/blocks_score.hpp"

using namespace gld;

namespace {

double sd(const std::vector<double>& v) {
    double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (v.size() - 1));
}

}  // namespace

TEST(Partition, Examples) {
    auto p = partition(10, 3);
    ASSERT_EQ(p.blocks.size(), 3u);
    EXPECT_EQ(p.blocks[2].begin, 6u);
    EXPECT_EQ(p.blocks[2].end, 9u);
    EXPECT_EQ(partition(10, 10).blocks.size(), 1u);
    EXPECT_TRUE(partition(10, 11).blocks.empty());
    EXPECT_THROW(partition(10, 0), std::invalid_argument);
}

TEST(BlockScore, IdenticalColumnsHitClip) {
    auto d = fixture::correlated_pair(50, fixture::constant(0.0), 1);
    d.cols[1] = d.cols[0];
    auto s = block_score(d, MultiIndex::make(0, 1), {0, 50});
    EXPECT_FALSE(s.degenerate);
    EXPECT_NEAR(s.z, std::atanh(1.0 - 1e-12), 1e-9);
    EXPECT_NEAR(clipped_fisher_z(1.0), 14.16, 0.01);
    EXPECT_NEAR(clipped_fisher_z(0.5), 0.5493061443, 1e-9);
}

TEST(BlockScore, ConstantIsDegenerate) {
    auto d = Dataset::with_vars(2, 1000);
    auto s = score_series(d, MultiIndex::make(0, 1), 100);
    EXPECT_EQ(s.theta(), 10u);
    for (std::size_t i = 0; i < s.theta(); ++i) {
        EXPECT_TRUE(s.degenerate[i]);
        EXPECT_EQ(s.scores[i], 0.0);
    }
}

TEST(BlockScore, CollinearConditioningDropped) {
    auto d = fixture::correlated_pair(200, fixture::constant(0.4), 2, 1);
    d.cols.push_back(d.cols[2]);  // duplicate Z column
    auto a = block_score(d, MultiIndex::make(0, 1, {2}), {0, 200});
    auto b = block_score(d, MultiIndex::make(0, 1, {2, 3}), {0, 200});
    EXPECT_NEAR(a.z, b.z, 1e-9);
}

TEST(BlockScore, NullMeanAndSd) {
    auto d = fixture::correlated_pair(200000, fixture::constant(0.0), 3);
    auto s = score_series(d, MultiIndex::make(0, 1), 50);
    EXPECT_NEAR(s.mean(), 0.0, 0.02);
    EXPECT_NEAR(sd(s.scores) / s.sigma_B, 1.0, 0.05);
    EXPECT_NEAR(s.sigma_B, 1.0 / std::sqrt(47.0), 1e-15);
}

TEST(BlockScore, NullSdMatchesSigmaGrid) {
    for (std::size_t B : {15, 30, 60})
        for (int dz : {0, 2, 5}) {
            auto d = fixture::correlated_pair(B * 4000, fixture::constant(0.0), 100 + B + dz, dz);
            std::vector<int> z;
            for (int k = 0; k < dz; ++k) z.push_back(2 + k);
            auto s = score_series(d, MultiIndex::make(0, 1, z), B);
            EXPECT_NEAR(sd(s.scores) / s.sigma_B, 1.0, 0.05) << B << " " << dz;
        }
}

TEST(BlockScore, ChainMediatorRemoved) {
    // X -> M -> Y, test X _|_ Y | M
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    const std::size_t n = 20000;
    auto d = Dataset::with_vars(3, n);
    for (std::size_t t = 0; t < n; ++t) {
        d.cols[0][t] = nd(rng);
        d.cols[1][t] = 0.8 * d.cols[0][t] + nd(rng);
        d.cols[2][t] = 0.8 * d.cols[1][t] + nd(rng);
    }
    auto s = score_series(d, MultiIndex::make(0, 2, {1}), 40);
    EXPECT_LT(std::abs(s.mean()), 3.0 * s.sigma_B / std::sqrt(static_cast<double>(s.theta())));
    auto m = score_series(d, MultiIndex::make(0, 2), 40);
    EXPECT_GT(m.mean(), 0.3);
}

TEST(BlockScore, SignAndScaleInvariance) {
    auto d = fixture::correlated_pair(3000, fixture::constant(0.3), 5, 2);
    auto q = MultiIndex::make(0, 1, {2, 3});
    auto base = score_series(d, q, 30);
    auto neg = d;
    for (auto& v : neg.cols[1]) v = -v;
    auto sn = score_series(neg, q, 30);
    auto scaled = d;
    for (auto& v : scaled.cols[0]) v *= 7.5;
    for (auto& v : scaled.cols[3]) v *= 0.01;
    auto ss = score_series(scaled, q, 30);
    for (std::size_t i = 0; i < base.theta(); ++i) {
        EXPECT_NEAR(sn.scores[i], -base.scores[i], 1e-10);
        EXPECT_NEAR(ss.scores[i], base.scores[i], 1e-10);
    }
}

TEST(BlockScore, TwoRegimesBimodal) {
    auto d = fixture::correlated_pair(20000, fixture::two_regimes(0.6, 0.0, 1000), 6);
    auto s = score_series(d, MultiIndex::make(0, 1), 100);
    // blocks never straddle a regime boundary (1000 is a multiple of 100)
    double on = 0, off = 0;
    int n_on = 0, n_off = 0;
    for (std::size_t i = 0; i < s.theta(); ++i)
        if ((i * 100 / 1000) % 2 == 0) on += s.scores[i], ++n_on;
        else off += s.scores[i], ++n_off;
    EXPECT_NEAR(on / n_on, std::atanh(0.6), 0.05);
    EXPECT_NEAR(off / n_off, 0.0, 0.05);
    // histogram gap between the modes
    int mid = 0;
    for (double z : s.scores) mid += (z > 0.3 && z < 0.4);
    EXPECT_LT(mid, static_cast<int>(s.theta()) / 10);
}

TEST(FullDataZ, IndependentCalibration) {
    int inside = 0;
    for (int t = 0; t < 200; ++t) {
        auto d = fixture::correlated_pair(10000, fixture::constant(0.0), 1000 + t);
        auto f = full_data_z(d, MultiIndex::make(0, 1));
        inside += std::abs(f.z) < 3.0 * f.sigma;
    }
    EXPECT_GE(inside, 198);
}

TEST(FullDataZ, Errors) {
    auto d = fixture::correlated_pair(6, fixture::constant(0.0), 1, 3);
    EXPECT_THROW(full_data_z(d, MultiIndex::make(0, 1, {2, 3, 4})), std::invalid_argument);
    EXPECT_THROW(score_series(d, MultiIndex::make(0, 1), 10), std::invalid_argument);
    EXPECT_THROW(block_score(d, MultiIndex::make(0, 9), {0, 6}), std::out_of_range);
}
