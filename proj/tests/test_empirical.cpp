#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <crimesim/empirical.hpp>

using namespace crimesim;

TEST(Mismatch, HandExample) {
    const auto m = mismatch({{"a", 10, 5, 1}, {"b", 10, 5, 1}, {"c", 20, 5, 1}});
    ASSERT_EQ(m.size(), 3u);
    EXPECT_NEAR(m[0], 0.0, 1e-15);
    EXPECT_NEAR(m[1], 0.0, 1e-15);
    EXPECT_NEAR(m[2], 0.6690, 1e-4);
    EXPECT_NEAR(m[2], std::log(20.5 / 10.5), 1e-15);
}

TEST(Mismatch, IdenticalBeatsAreZero) {
    const std::vector<BeatRecord> r(5, BeatRecord{"x", 3.2, 1.1, 2.0});
    for (double v : mismatch(r)) EXPECT_EQ(v, 0.0);
}

TEST(Mismatch, OverStaffedBeatIsNegative) {
    const auto m = mismatch({{"a", 10, 5, 1}, {"b", 10, 50, 1}, {"c", 10, 5, 1}});
    EXPECT_LT(m[1], 0.0);
}

TEST(Mismatch, TranslationInvariance) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 40);
    std::vector<BeatRecord> r, s;
    const double a = 0.5, b = 0.5, k1 = 3.0, k2 = 2.0;
    for (int i = 0; i < 40; ++i) {
        const double c = u(rng), o = u(rng) / 4;
        r.push_back({std::to_string(i), c, o, 1});
        s.push_back({std::to_string(i), k1 * (c + a) - a, k2 * (o + b) - b, 1});
    }
    const auto m = mismatch(r, a, b), n = mismatch(s, a, b);
    for (std::size_t i = 0; i < m.size(); ++i) EXPECT_NEAR(m[i], n[i], 1e-12);
}

TEST(Mismatch, MedianHasBothSigns) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0, 100);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<BeatRecord> r(1 + trial % 17);
        for (auto& x : r) x = {"b", u(rng), u(rng) / 10, 1};
        const auto m = mismatch(r);
        EXPECT_LE(*std::min_element(m.begin(), m.end()), 0.0);
        EXPECT_GE(*std::max_element(m.begin(), m.end()), 0.0);
        EXPECT_EQ(std::count(m.begin(), m.end(), 0.0) >= 1, true);
    }
}

TEST(Mismatch, LowerMedianForEvenCounts) {
    EXPECT_EQ(lower_median({4, 1, 3, 2}), 2);
    EXPECT_EQ(lower_median({7}), 7);
    EXPECT_THROW(lower_median({}), std::invalid_argument);
}

TEST(Mismatch, Rejections) {
    const std::vector<BeatRecord> r{{"a", 1, 1, 1}};
    EXPECT_THROW(mismatch(r, 0.0, 0.5), std::invalid_argument);
    EXPECT_THROW(mismatch(r, 0.5, -1.0), std::invalid_argument);
    EXPECT_THROW(mismatch({}), std::invalid_argument);
    EXPECT_THROW(mismatch({{"a", -1, 1, 1}}), std::invalid_argument);
    EXPECT_THROW(mismatch({{"a", 1, 1, 0}}), std::invalid_argument);
}
