#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "wqed/dynamics.hpp"
#include "wqed/errors.hpp"
#include "wqed/field.hpp"

namespace {

using wqed::cplx;
using wqed::PacketParams;
using wqed::SystemParams;

const SystemParams kSys{1.0, 100.0};

// Frequency-space transmission: Lorentzian spectrum times the single-frequency
// transmission coefficient delta^2 / (delta^2 + gamma^2/4). delta = (D/2) tan(theta).
double transmission_oracle(double linewidth, double gamma) {
    const int n = 200000;
    const double a = -0.5 * wqed::kPi;
    const double h = wqed::kPi / n;
    double sum = 0.0;
    for (int k = 1; k < n; ++k) {
        const double th = a + k * h;
        const double d = 0.5 * linewidth * std::tan(th);
        const double f = d * d / (d * d + 0.25 * gamma * gamma);
        sum += ((k % 2 != 0) ? 4.0 : 2.0) * f;
    }
    // endpoints: f -> 1, weight of the Lorentzian in theta is 1/pi
    sum += 2.0;
    return sum * h / 3.0 / wqed::kPi;
}

TEST(Field, CausalityAheadOfFront) {
    const PacketParams pkt{0.5, 1.0, 0.0};
    for (double t : {0.0, 1.0, 5.0}) {
        EXPECT_EQ(wqed::field_a(t + 0.1, t, kSys, pkt), cplx{});
        EXPECT_EQ(wqed::field_b(-t - 0.1, t, kSys, pkt), cplx{});
        EXPECT_EQ(wqed::field_b(0.7, t, kSys, pkt), cplx{});
    }
}

TEST(Field, EmitterPointRejected) {
    EXPECT_THROW(wqed::field_a(0.0, 1.0, kSys, PacketParams{}), wqed::ParameterError);
    EXPECT_THROW(wqed::field_b(0.0, 1.0, kSys, PacketParams{}), wqed::ParameterError);
    EXPECT_THROW(wqed::field_a(1.0, -1.0, kSys, PacketParams{}), wqed::ParameterError);
}

TEST(Field, IncomingPacketShape) {
    const PacketParams pkt{0.2, 0.0, 0.6};
    const cplx v = wqed::incoming_field_a(-3.0, 2.0, kSys, pkt);
    EXPECT_NEAR(std::norm(v), 0.2 * (1.0 - 0.36) * std::exp(-0.2 * 5.0), 1e-15);
    EXPECT_NEAR(std::arg(v / std::abs(v)), std::arg(std::exp(cplx(0.0, -100.0 * 5.0))), 1e-9);
    // Left of the emitter channel a is the bare input.
    EXPECT_EQ(wqed::field_a(-3.0, 2.0, kSys, pkt), v);
}

TEST(Field, NarrowResonantPacketIsReflected) {
    const PacketParams pkt{0.001, 0.0, 0.0};
    const double r = 5.0;
    const double t = 60.0;
    const cplx incoming = wqed::incoming_field_a(r, t, kSys, pkt);
    const cplx total = wqed::field_a(r, t, kSys, pkt);
    const cplx emitted = total - incoming;
    EXPECT_LT(std::norm(total), 1e-3 * std::norm(incoming));
    // forward emission is out of phase with the drive
    EXPECT_NEAR(std::abs(std::arg(emitted / incoming)), wqed::kPi, 0.05);
    // backward channel carries the reflected packet
    EXPECT_NEAR(std::norm(wqed::field_b(-r, t, kSys, pkt)), std::norm(incoming), 0.05 * std::norm(incoming));
}

TEST(Field, WeakCouplingPropagatesFreely) {
    const SystemParams weak{1e-8, 100.0};
    const PacketParams pkt{0.3, 2.0, 0.0};
    for (double r : {0.5, 2.0, 4.0}) {
        const cplx free = wqed::incoming_field_a(r, 5.0, weak, pkt);
        EXPECT_LT(std::abs(wqed::field_a(r, 5.0, weak, pkt) - free), 1e-4 * std::abs(free));
        EXPECT_LT(std::norm(wqed::field_b(-r, 5.0, weak, pkt)), 1e-8 * std::norm(free));
    }
}

TEST(Field, BackwardChannelMatchedCase) {
    const PacketParams pkt{1.0, 0.0, 0.0};
    EXPECT_NEAR(std::norm(wqed::field_b(-1.0, 3.0, kSys, pkt)), std::exp(-2.0), 1e-14);
    EXPECT_EQ(wqed::field_b(-4.0, 3.0, kSys, pkt), cplx{});
}

TEST(Field, BackwardIntensityIsHalfRateTimesPopulation) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ud(0.05, 5.0), ug(0.2, 3.0), dd(-10.0, 10.0), rr(0.1, 4.0);
    for (int i = 0; i < 50; ++i) {
        const SystemParams sys{ug(rng), 100.0};
        const PacketParams pkt{ud(rng), dd(rng), 0.0};
        const double r = rr(rng);
        const double t = r + ud(rng);
        const double ib = std::norm(wqed::field_b(-r, t, sys, pkt));
        EXPECT_NEAR(ib / (0.5 * sys.gamma_1d), wqed::population(t - r, sys, pkt), 1e-13);
    }
}

TEST(ChannelProbabilities, InitialState) {
    const PacketParams pkt{0.5, 3.0, 0.4};
    const auto p = wqed::channel_probabilities(0.0, kSys, pkt, wqed::min_window_halfwidth(0.0, pkt),
                                               wqed::max_grid_step(kSys, pkt));
    EXPECT_NEAR(p.p_a, 1.0 - 0.16, 1e-6);
    EXPECT_EQ(p.p_b, 0.0);
    EXPECT_EQ(p.p_e, 0.0);
    EXPECT_NEAR(p.norm, 1.0, 1e-6);
}

TEST(ChannelProbabilities, NormConserved) {
    for (const PacketParams& pkt : {PacketParams{0.1, 0.0, 0.0}, PacketParams{1.0, 0.0, 0.0},
                                    PacketParams{0.5, 10.0, 0.3}, PacketParams{4.0, -2.0, 0.0}}) {
        for (double t : {0.0, 1.0, 4.0, 8.0}) {
            const auto p = wqed::channel_probabilities(t, kSys, pkt, wqed::min_window_halfwidth(t, pkt),
                                                       wqed::max_grid_step(kSys, pkt));
            EXPECT_NEAR(p.norm, 1.0, 1e-6) << pkt.delta << " " << pkt.detuning << " t=" << t;
            EXPECT_GE(p.p_a, 0.0);
            EXPECT_GE(p.p_b, 0.0);
        }
    }
}

TEST(ChannelProbabilities, WindowAndStepChecked) {
    const PacketParams pkt{0.5, 0.0, 0.0};
    EXPECT_THROW(wqed::channel_probabilities(2.0, kSys, pkt, 10.0, 0.01), wqed::WindowError);
    EXPECT_THROW(wqed::channel_probabilities(2.0, kSys, pkt, 100.0, 0.2), wqed::ParameterError);
    EXPECT_THROW(wqed::channel_probabilities(2.0, kSys, pkt, 100.0, 0.0), wqed::ParameterError);
    EXPECT_THROW(wqed::channel_probabilities(-1.0, kSys, pkt, 100.0, 0.01), wqed::ParameterError);
}

TEST(ChannelProbabilities, SimpsonConvergesUnderStepHalving) {
    const PacketParams pkt{0.7, 3.0, 0.0};
    const double t = 3.0;
    const double L = wqed::min_window_halfwidth(t, pkt);
    const double h0 = wqed::max_grid_step(kSys, pkt);
    const auto p1 = wqed::channel_probabilities(t, kSys, pkt, L, h0);
    const auto p2 = wqed::channel_probabilities(t, kSys, pkt, L, h0 / 2);
    const auto p4 = wqed::channel_probabilities(t, kSys, pkt, L, h0 / 4);
    const double e1 = std::abs(p1.p_b - p2.p_b);
    const double e2 = std::abs(p2.p_b - p4.p_b);
    EXPECT_LT(e1, 1e-8);
    EXPECT_GT(e1 / e2, 8.0);
}

TEST(Transmission, MatchesFrequencySpaceOracle) {
    for (double linewidth : {0.01, 1.0, 3.0}) {
        const double expected = linewidth / (linewidth + kSys.gamma_1d);
        EXPECT_NEAR(transmission_oracle(linewidth, kSys.gamma_1d), expected, 1e-8);
        const PacketParams pkt{linewidth, 0.0, 0.0};
        // long enough for the packet and the emitter to empty out
        const double t = 14.0 / std::min(linewidth, kSys.gamma_1d) + 20.0;
        const double got = wqed::transmitted_probability(t, kSys, pkt, wqed::max_grid_step(kSys, pkt));
        EXPECT_NEAR(got, expected, 1e-5) << linewidth;
    }
}

TEST(DetectorRatio, MatchedCaseValues) {
    const PacketParams pkt{1.0, 0.0, 0.0};
    // Gamma(tau) = 1 - 2/tau
    auto r1 = wqed::detector_ratio_gamma(2.0, 1.0, kSys, pkt);
    EXPECT_NEAR(r1.gamma, -1.0, 1e-12);
    EXPECT_NEAR(r1.lamb_shift, 200.0, 1e-9);
    auto r2 = wqed::detector_ratio_gamma(3.0, -1.0, kSys, pkt);
    EXPECT_NEAR(r2.gamma, 0.0, 1e-12);
}

TEST(DetectorRatio, AgreesWithEmitterRatesAndIsDistanceIndependent) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ud(0.05, 5.0), dd(-10.0, 10.0), rr(0.2, 6.0), tt(0.1, 12.0);
    for (int i = 0; i < 60; ++i) {
        const PacketParams pkt{ud(rng), dd(rng), 0.0};
        const double tau = tt(rng);
        if (std::abs(wqed::psi_s(tau, kSys, pkt)) < 1e-6) continue;
        const double g_ref = wqed::decay_rate(tau, kSys, pkt);
        const double s_ref = wqed::lamb_shift(tau, kSys, pkt);
        for (double d : {rr(rng), rr(rng)}) {
            const auto rec = wqed::detector_ratio_gamma(tau + d, d, kSys, pkt);
            EXPECT_NEAR(rec.gamma, g_ref, 1e-10 * std::max(1.0, std::abs(g_ref)));
            EXPECT_NEAR(rec.lamb_shift, s_ref, 1e-8 * std::max(1.0, std::abs(s_ref)));
        }
    }
}

TEST(DetectorRatio, RejectsEarlyTimesAndZeros) {
    const PacketParams pkt{1.0, 10.0, 0.0};
    EXPECT_THROW(wqed::detector_ratio_gamma(1.0, 1.0, kSys, pkt), wqed::ParameterError);
    EXPECT_THROW(wqed::detector_ratio_gamma(1.0, 0.0, kSys, pkt), wqed::ParameterError);
    EXPECT_THROW(wqed::detector_ratio_gamma(1.0 + 2.0 * wqed::kPi / 10.0, 1.0, kSys, pkt),
                 wqed::SingularPointError);
}

TEST(DetectorTrace, OptionalRatesBeforeArrival) {
    const PacketParams pkt{1.0, 0.0, 0.0};
    const std::vector<double> times{0.5, 1.0, 2.0, 3.0};
    const auto tr = wqed::detector_trace(-1.0, times, kSys, pkt);
    EXPECT_EQ(tr.r_d, 1.0);
    ASSERT_EQ(tr.gamma_recovered.size(), 4u);
    EXPECT_FALSE(tr.gamma_recovered[0]);
    EXPECT_FALSE(tr.gamma_recovered[1]);
    ASSERT_TRUE(tr.gamma_recovered[2]);
    EXPECT_NEAR(*tr.gamma_recovered[2], -1.0, 1e-12);
    EXPECT_NEAR(tr.intensity_b[3], std::exp(-2.0), 1e-14);
}

TEST(FieldSnapshot, GridAvoidsEmitterAndMatchesProbabilities) {
    const PacketParams pkt{0.5, 2.0, 0.0};
    const double t = 4.0;
    const double L = wqed::min_window_halfwidth(t, pkt);
    const double h = wqed::max_grid_step(kSys, pkt);
    const auto snap = wqed::field_snapshot(t, kSys, pkt, L, h);
    const auto p = wqed::channel_probabilities(t, kSys, pkt, L, h);
    ASSERT_EQ(snap.grid.size() % 2, 0u);
    ASSERT_EQ(snap.grid.size(), snap.phi_a.size());
    ASSERT_EQ(snap.grid.size(), snap.phi_b.size());
    EXPECT_NEAR(snap.grid.front(), -snap.grid.back(), 1e-12);
    EXPECT_GE(snap.grid.front(), -L);
    const double step = snap.grid[1] - snap.grid[0];
    EXPECT_LE(step, h * (1 + 1e-12));
    for (double r : snap.grid) EXPECT_GT(std::abs(r), 0.25 * step);
    EXPECT_EQ(snap.p_a, p.p_a);
    EXPECT_EQ(snap.norm, p.norm);
    // midpoint sum over the snapshot reproduces the Simpson probability
    double pa = 0.0;
    for (const cplx& v : snap.phi_a) pa += std::norm(v) * step;
    EXPECT_NEAR(pa, p.p_a, 1e-3);
}

} // namespace
