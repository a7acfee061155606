#include "topnet/scaling.hpp"

#include <gtest/gtest.h>

using namespace topnet;

namespace {

// Composite Simpson on a uniform grid, fine enough to resolve the s = 1/2 peak.
template <class F>
double simpson(const F& f, int n) {
    const double h = 1.0 / n;
    double s = f(0.0) + f(1.0);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(k * h);
    return s * h / 3.0;
}

}  // namespace

TEST(Bound, EpsilonL) {
    EXPECT_DOUBLE_EQ(epsilon_L(10, 3.3), 3.3 / 6.7);
    EXPECT_THROW(epsilon_L(3, 3.3), SpecError);
    EXPECT_THROW(epsilon_L(10, 0.0), SpecError);
}

TEST(Bound, IntegralsMatchSimpson) {
    for (const auto& pulse : {Pulse::sine_squared(), Pulse::smoothed(4)}) {
        for (int L : {10, 100}) {
            const auto rep = adiabatic_bound(pulse, L, 3.3);
            const double eps = epsilon_L(L, 3.3);
            auto f1 = [&](double s) {
                const double d = eps + 1.0 - pulse.value(s);
                return std::abs(pulse.d2(s)) / (d * d);
            };
            auto f2 = [&](double s) {
                const double d = eps + 1.0 - pulse.value(s);
                return pulse.d1(s) * pulse.d1(s) / (d * d * d);
            };
            EXPECT_NEAR(rep.J1 / simpson(f1, 400000), 1.0, 1e-6) << pulse.id() << " L=" << L;
            EXPECT_NEAR(rep.J2 / simpson(f2, 400000), 1.0, 1e-6) << pulse.id() << " L=" << L;
            EXPECT_DOUBLE_EQ(rep.C_L, rep.J1 + rep.J2);
        }
    }
}

TEST(Bound, ClosedFormSineSquaredJ2) {
    // P = sin^2: with u = tan(pi s), J2 = 4 pi int u^2 / (eps u^2 + eps + 1)^3 du
    // = pi^2 / (2 (eps (1 + eps))^{3/2}).
    const auto rep = adiabatic_bound(Pulse::sine_squared(), 1, 0.2);
    const double eps = 0.25;
    ASSERT_DOUBLE_EQ(rep.epsilon_L, eps);
    EXPECT_NEAR(rep.J2 / (kPi * kPi * 0.5 / std::pow(eps * (1.0 + eps), 1.5)), 1.0, 1e-9);
}

TEST(Bound, AsymptoticExponents) {
    auto slope = [](const Pulse& p) {
        const auto rows = bound_scaling(p, {100000, 1000000}, 3.3);
        return *rows.front().fit_exponent;
    };
    EXPECT_NEAR(slope(Pulse::sine_squared()), 1.5, 0.01);
    EXPECT_NEAR(slope(Pulse::smoothed(4)), 1.25, 0.01);
}

TEST(Bound, LocalSlopeDecreasesTowardAsymptote) {
    const auto rows = bound_scaling(Pulse::sine_squared(), {10, 30, 100, 300, 1000}, 3.3);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const double s = std::log(rows[k].C_L / rows[k - 1].C_L) / std::log(double(rows[k].L) / rows[k - 1].L);
        EXPECT_LT(s, prev);
        EXPECT_GT(s, 1.5);
        prev = s;
    }
}

TEST(Bound, LoglogSlopeOfPowerLaw) {
    std::vector<double> x{1, 2, 4, 8}, y;
    for (double v : x) y.push_back(3.0 * std::pow(v, 1.7));
    EXPECT_NEAR(loglog_slope(x, y), 1.7, 1e-12);
    EXPECT_THROW(loglog_slope({1.0}, {1.0}), SpecError);
}

TEST(Bound, TauAndCalibration) {
    const auto rep = adiabatic_bound(Pulse::sine_squared(), 20, 3.3, 1.0, 1.0, 500.0);
    ASSERT_TRUE(rep.loss_bound.has_value());
    EXPECT_DOUBLE_EQ(*rep.loss_bound, std::pow(rep.C_L / 500.0, 2));
    const double c = calibrate_constants(Pulse::sine_squared(), 3.3, {{20, 500.0, 1e-4}});
    EXPECT_NEAR(c, 500.0 * 1e-2 / rep.C_L, 1e-12);
    EXPECT_THROW(adiabatic_bound(Pulse::sine_squared(), 20, 3.3, 1.0, 1.0, -1.0), SpecError);
}

TEST(Scaling, TrendClassifier) {
    EXPECT_EQ(classify_trend({1, 2, 3}), Trend::increasing);
    EXPECT_EQ(classify_trend({3, 2, 1}), Trend::decreasing);
    EXPECT_EQ(classify_trend({1.0, 1.5, 1.2}), Trend::flat);
    EXPECT_EQ(classify_trend({1, 3, 2}), Trend::mixed);
}

TEST(Scaling, RowsWithoutSimulation) {
    ScalingOptions o;
    o.simulate = false;
    const auto rows = scaling_study(0.5, 1.0, {5, 8}, Pulse::sine_squared(), o);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_DOUBLE_EQ(rows[1].tau, std::pow(8.0, 1.5));
    EXPECT_DOUBLE_EQ(rows[1].bound, rows[1].C_L / rows[1].tau);
    EXPECT_FALSE(rows[0].simulated_loss.has_value());
    EXPECT_THROW(scaling_study(0.5, 1.0, {8, 5}, Pulse::sine_squared(), o), SpecError);
}
