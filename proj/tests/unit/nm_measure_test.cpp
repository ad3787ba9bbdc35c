#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wqed/dynamics.hpp"
#include "wqed/errors.hpp"
#include "wqed/nm_measure.hpp"

namespace {

using wqed::ExtremumKind;
using wqed::PacketParams;
using wqed::SystemParams;

const SystemParams kSys{1.0, 100.0};

std::vector<double> maxima(const std::vector<wqed::ExtremumEvent>& events) {
    std::vector<double> out;
    for (const auto& e : events) {
        if (e.kind == ExtremumKind::maximum) out.push_back(e.t);
    }
    return out;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g;
    for (int k = 0; k < n; ++k) g.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1)));
    return g;
}

TEST(PopulationExtrema, MatchedCaseHasSingleMaximumAtTwo) {
    const auto events = wqed::population_extrema(kSys, PacketParams{1.0, 0.0, 0.0}, 10.0);
    ASSERT_EQ(events.size(), 1u);
    EXPECT_EQ(events[0].kind, ExtremumKind::maximum);
    EXPECT_NEAR(events[0].t, 2.0, 1e-9);
    EXPECT_NEAR(events[0].population, 2.0 * std::exp(-2.0), 1e-15);
}

TEST(PopulationExtrema, DetunedPacketMaximaSpacing) {
    const auto peaks = maxima(wqed::population_extrema(kSys, PacketParams{0.1, 10.0, 0.0}, 8.0));
    ASSERT_GE(peaks.size(), 5u);
    const double expected = 2.0 * wqed::kPi / 10.0;
    for (std::size_t i = 1; i < peaks.size(); ++i) {
        EXPECT_NEAR(peaks[i] - peaks[i - 1], expected, 0.1 * expected) << i;
    }
}

TEST(PopulationExtrema, ResonantPacketDoesNotOscillate) {
    const auto events = wqed::population_extrema(kSys, PacketParams{0.1, 0.0, 0.0}, 50.0);
    ASSERT_EQ(events.size(), 1u);
    EXPECT_EQ(events[0].kind, ExtremumKind::maximum);
}

TEST(PopulationExtrema, OrderedAndAlternating) {
    for (double dl : {2.0, 5.0, 10.0, -7.0}) {
        const auto events = wqed::population_extrema(kSys, PacketParams{0.3, dl, 0.0}, 20.0);
        ASSERT_FALSE(events.empty());
        EXPECT_EQ(events.front().kind, ExtremumKind::maximum);
        for (std::size_t i = 1; i < events.size(); ++i) {
            EXPECT_GT(events[i].t, events[i - 1].t);
            EXPECT_NE(events[i].kind, events[i - 1].kind);
        }
        for (const auto& e : events) {
            // root located to 1e-10 in t
            EXPECT_LE(std::abs(wqed::population_rate(e.t, kSys, PacketParams{0.3, dl, 0.0})), 1e-10);
        }
    }
}

TEST(PopulationExtrema, RejectsNonPositiveHorizon) {
    EXPECT_THROW(wqed::population_extrema(kSys, PacketParams{}, 0.0), wqed::ParameterError);
    EXPECT_THROW(wqed::population_extrema(kSys, PacketParams{}, -1.0), wqed::ParameterError);
}

TEST(NmIntegral, MatchedCaseAnalytic) {
    // -Gamma = 2/t - 1 on (0, 2).
    const auto report = wqed::nm_integral(kSys, PacketParams{1.0, 0.0, 0.0}, 0.01, 2.0);
    const double expected = 2.0 * std::log(200.0) - 1.99;
    EXPECT_NEAR(expected, 8.6067, 1e-4);
    EXPECT_NEAR(report.total_n, expected, 1e-6);
    EXPECT_NEAR(report.quadrature_total, expected, 1e-6);
    ASSERT_EQ(report.intervals.size(), 1u);
    EXPECT_DOUBLE_EQ(report.intervals[0].first, 0.01);
    EXPECT_NEAR(report.intervals[0].second, 2.0, 1e-9);
    EXPECT_DOUBLE_EQ(report.n_excl_initial_rise, 0.0);
}

TEST(NmIntegral, ReportInvariants) {
    for (double dl : {0.0, 2.0, 10.0}) {
        for (double delta : {0.1, 1.3, 4.0}) {
            const auto r = wqed::nm_integral(kSys, PacketParams{delta, dl, 0.0}, 0.01);
            double sum = 0.0;
            for (double c : r.contributions) {
                EXPECT_GE(c, 0.0);
                sum += c;
            }
            EXPECT_DOUBLE_EQ(r.total_n, sum);
            EXPECT_LE(std::abs(r.total_n - r.quadrature_total), 1e-6 * std::max(1.0, r.total_n))
                << delta << " " << dl;
            EXPECT_EQ(r.intervals.size(), r.contributions.size());
            EXPECT_GE(r.n_excl_initial_rise, 0.0);
        }
    }
}

TEST(NmIntegral, IntervalEndpointsAreExtrema) {
    const PacketParams pkt{0.1, 10.0, 0.0};
    const double t_max = 12.0;
    const auto report = wqed::nm_integral(kSys, pkt, 0.01, t_max);
    const auto events = wqed::population_extrema(kSys, pkt, t_max);
    auto near_event = [&](double t, ExtremumKind kind) {
        return std::any_of(events.begin(), events.end(), [&](const auto& e) {
            return e.kind == kind && std::abs(e.t - t) <= 1e-9;
        });
    };
    ASSERT_GT(report.intervals.size(), 3u);
    for (std::size_t i = 0; i < report.intervals.size(); ++i) {
        const auto [a, b] = report.intervals[i];
        if (i > 0) EXPECT_TRUE(near_event(a, ExtremumKind::minimum)) << a;
        if (b < t_max) EXPECT_TRUE(near_event(b, ExtremumKind::maximum)) << b;
        // Gamma is negative strictly inside every interval.
        EXPECT_LT(wqed::decay_rate(0.5 * (a + b), kSys, pkt), 0.0);
    }
}

TEST(NmIntegral, RejectsCutoffAfterFirstMaximum) {
    EXPECT_THROW(wqed::nm_integral(kSys, PacketParams{1.0, 0.0, 0.0}, 2.5, 5.0),
                 wqed::ParameterError);
    EXPECT_THROW(wqed::nm_integral(kSys, PacketParams{1.0, 0.0, 0.0}, 0.0, 5.0),
                 wqed::ParameterError);
    EXPECT_THROW(wqed::nm_integral(kSys, PacketParams{1.0, 0.0, 0.0}, 1.0, 0.5),
                 wqed::ParameterError);
}

TEST(NmIntegral, NoCouplingIsRejected) {
    EXPECT_THROW(wqed::nm_integral(SystemParams{0.0, 100.0}, PacketParams{}, 0.01, 5.0),
                 wqed::ParameterError);
}

TEST(NmIntegral, DivergesWhenPopulationTouchesZero) {
    // delta = gamma with a detuning makes psi vanish at t = 2 pi k / detuning.
    EXPECT_THROW(wqed::nm_integral(kSys, PacketParams{1.0, 10.0, 0.0}, 0.01, 3.0),
                 wqed::SingularPointError);
}

TEST(NmIntegral, DetuningOrdering) {
    const double n0 = wqed::nm_integral(kSys, PacketParams{0.1, 0.0, 0.0}, 0.01).total_n;
    const double n2 = wqed::nm_integral(kSys, PacketParams{0.1, 2.0, 0.0}, 0.01).total_n;
    const double n10 = wqed::nm_integral(kSys, PacketParams{0.1, 10.0, 0.0}, 0.01).total_n;
    EXPECT_GT(n10, n0);
    EXPECT_LT(n2, n0); // intermediate-detuning dip
    const double n20 = wqed::nm_integral(kSys, PacketParams{0.1, 20.0, 0.0}, 0.01).total_n;
    EXPECT_GT(n20, n10);
}

TEST(NmIntegral, InvariantUnderGroundAmplitude) {
    const double base = wqed::nm_integral(kSys, PacketParams{0.5, 5.0, 0.0}, 0.01, 30.0).total_n;
    for (double c0 : {0.5, 0.9}) {
        const double n = wqed::nm_integral(kSys, PacketParams{0.5, 5.0, c0}, 0.01, 30.0).total_n;
        EXPECT_NEAR(n, base, 1e-10 * base);
    }
}

TEST(NmIntegral, MonotoneInWindow) {
    const PacketParams pkt{0.2, 6.0, 0.0};
    double prev = 0.0;
    for (double t_max : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
        const double n = wqed::nm_integral(kSys, pkt, 0.01, t_max).total_n;
        EXPECT_GE(n, prev) << t_max;
        prev = n;
    }
    prev = 1e300;
    for (double t0 : {1e-3, 3e-3, 1e-2, 3e-2, 0.1}) {
        const double n = wqed::nm_integral(kSys, pkt, t0, 16.0).total_n;
        EXPECT_LE(n, prev) << t0;
        prev = n;
    }
}

TEST(DefaultTMax, RateStaysPositiveAfterwards) {
    for (const PacketParams& pkt :
         {PacketParams{0.1, 0.0, 0.0}, PacketParams{0.1, 10.0, 0.0}, PacketParams{10.0, 2.0, 0.0}}) {
        const double t_max = wqed::default_t_max(kSys, pkt);
        EXPECT_GE(t_max, 10.0 * std::max(1.0 / pkt.delta, 1.0 / kSys.gamma_1d));
        EXPECT_LT(wqed::drive_envelope(t_max, pkt), 1e-8 * (1.0 + 1e-9));
        for (double t = t_max; t < t_max + 5.0; t += 0.01) {
            EXPECT_GT(wqed::decay_rate(t, kSys, pkt), 0.0);
        }
    }
}

TEST(Sweep, LinewidthPeakNearModeMatching) {
    const auto grid = log_grid(0.1, 10.0, 12); // excludes delta = 1 exactly
    const auto rows = wqed::sweep(kSys, PacketParams{0.1, 10.0, 0.0}, wqed::SweepAxis::linewidth,
                                  grid, 0.01);
    ASSERT_EQ(rows.size(), grid.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ASSERT_TRUE(rows[i].report) << rows[i].error;
        EXPECT_EQ(rows[i].parameter, grid[i]);
        if (rows[i].report->total_n > rows[best].report->total_n) best = i;
    }
    const double step = std::log(grid[1] / grid[0]);
    EXPECT_LE(std::abs(std::log(grid[best])), step + 1e-12);
}

TEST(Sweep, ResonantLinewidthSweepDecreases) {
    const auto grid = log_grid(0.1, 10.0, 9);
    const auto rows = wqed::sweep(kSys, PacketParams{0.1, 0.0, 0.0}, wqed::SweepAxis::linewidth,
                                  grid, 0.01);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ASSERT_TRUE(rows[i].report);
        EXPECT_LT(rows[i].report->total_n, rows[i - 1].report->total_n);
    }
}

TEST(Sweep, SmallDetuningPlateau) {
    const std::vector<double> grid{0.0, 0.0025, 0.005, 0.0075, 0.01};
    const auto rows = wqed::sweep(kSys, PacketParams{0.1, 0.0, 0.0}, wqed::SweepAxis::detuning,
                                  grid, 0.01);
    const double n0 = rows[0].report->total_n;
    for (const auto& row : rows) EXPECT_NEAR(row.report->total_n, n0, 0.01 * n0);
}

TEST(Sweep, InvalidPointsBecomeErrorRows) {
    const std::vector<double> grid{-1.0, 0.0, 0.5, 2.0};
    const auto rows = wqed::sweep(kSys, PacketParams{0.1, 3.0, 0.0}, wqed::SweepAxis::linewidth,
                                  grid, 0.01);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_FALSE(rows[0].report);
    EXPECT_FALSE(rows[1].report);
    EXPECT_FALSE(rows[0].error.empty());
    EXPECT_TRUE(rows[2].report);
    EXPECT_TRUE(rows[3].report);
}

TEST(Sweep, GridMustBeNonEmptyAndIncreasing) {
    EXPECT_THROW(wqed::sweep(kSys, PacketParams{}, wqed::SweepAxis::detuning, {}, 0.01),
                 wqed::ParameterError);
    const std::vector<double> bad{1.0, 1.0};
    EXPECT_THROW(wqed::sweep(kSys, PacketParams{}, wqed::SweepAxis::detuning, bad, 0.01),
                 wqed::ParameterError);
}

TEST(Sweep, ParallelMatchesSerialBitwise) {
    const std::vector<double> grid{0.0, 1.0, 3.0, 6.0, 9.0};
    wqed::SweepOptions serial;
    serial.t_max = 40.0;
    wqed::SweepOptions parallel = serial;
    parallel.threads = 4;
    const auto a = wqed::sweep(kSys, PacketParams{0.3, 0.0, 0.0}, wqed::SweepAxis::detuning, grid,
                               0.01, serial);
    const auto b = wqed::sweep(kSys, PacketParams{0.3, 0.0, 0.0}, wqed::SweepAxis::detuning, grid,
                               0.01, parallel);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ASSERT_TRUE(a[i].report && b[i].report);
        EXPECT_EQ(a[i].report->total_n, b[i].report->total_n);
        EXPECT_EQ(a[i].report->quadrature_total, b[i].report->quadrature_total);
        EXPECT_EQ(a[i].report->intervals, b[i].report->intervals);
    }
}

} // namespace
