#include "wqed/nm_measure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wqed/dynamics.hpp"
#include "wqed/errors.hpp"

namespace wqed {

namespace {

constexpr double kZeroMinimumRatio = 1e-16;

bool increasing(double t, const SystemParams& sys, const PacketParams& pkt) {
    return population_rate(t, sys, pkt) > 0.0;
}

double bisect_root(double lo, double hi, bool lo_increasing, const SystemParams& sys,
                   const PacketParams& pkt) {
    while (hi - lo > kRootTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (increasing(mid, sys, pkt) == lo_increasing) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double negative_rate_part(double t, const SystemParams& sys, const PacketParams& pkt) {
    return std::max(0.0, -decay_rate(t, sys, pkt));
}

// Drive amplitude below which the packet no longer influences the emitter.
constexpr double kDriveFloor = 1e-8;

} // namespace

double extrema_scan_step(const SystemParams& sys, const PacketParams& pkt) {
    return std::min({0.01 / sys.gamma_1d, 0.1 / pkt.delta,
                     0.1 / std::max(std::abs(pkt.detuning), sys.gamma_1d)});
}

std::vector<ExtremumEvent> population_extrema(const SystemParams& sys, const PacketParams& pkt,
                                              double t_max) {
    validate(sys, pkt);
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ParameterError("t_max must be > 0");

    const double step = extrema_scan_step(sys, pkt);
    const auto n = static_cast<long>(std::ceil(t_max / step));
    std::vector<ExtremumEvent> events;

    // psi ~ -K t near the origin, so the population always starts rising.
    double prev_t = std::min(1e-3 * step, 0.5 * t_max);
    bool prev_up = increasing(prev_t, sys, pkt);
    for (long k = 1; k <= n; ++k) {
        const double t = std::min(t_max, static_cast<double>(k) * step);
        const bool up = increasing(t, sys, pkt);
        if (up != prev_up) {
            const double root = bisect_root(prev_t, t, prev_up, sys, pkt);
            events.push_back({root, population(root, sys, pkt),
                              prev_up ? ExtremumKind::maximum : ExtremumKind::minimum});
        }
        prev_t = t;
        prev_up = up;
    }
    return events;
}

double default_t_max(const SystemParams& sys, const PacketParams& pkt) {
    validate(sys, pkt);
    const double window = 5.0 / sys.gamma_1d;
    double t = std::max(10.0 * std::max(1.0 / pkt.delta, 1.0 / sys.gamma_1d),
                        2.0 * std::log(1.0 / kDriveFloor) / pkt.delta);
    const double step = extrema_scan_step(sys, pkt);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        bool quiet = true;
        for (double s = t; s <= t + window; s += step) {
            if (increasing(s, sys, pkt)) {
                quiet = false;
                break;
            }
        }
        if (quiet) return t;
        t += window;
    }
    throw NumericalError("population keeps increasing; no truncation time found");
}

double nm_quadrature(const SystemParams& sys, const PacketParams& pkt, double a, double b) {
    using boost::math::quadrature::gauss_kronrod;
    auto f = [&](double t) { return negative_rate_part(t, sys, pkt); };
    const double panel = 4.0 * extrema_scan_step(sys, pkt);
    const auto panels = static_cast<long>(std::ceil((b - a) / panel));
    const double width = (b - a) / static_cast<double>(panels);
    double total = 0.0;
    for (long k = 0; k < panels; ++k) {
        const double lo = a + static_cast<double>(k) * width;
        const double hi = (k + 1 == panels) ? b : lo + width;
        total += gauss_kronrod<double, 15>::integrate(f, lo, hi, 15, 1e-10);
    }
    return total;
}

NMReport nm_integral(const SystemParams& sys, const PacketParams& pkt, double t0_cutoff,
                     double t_max) {
    validate(sys, pkt);
    if (!(t0_cutoff > 0.0) || !(t_max > t0_cutoff) || !std::isfinite(t_max)) {
        throw ParameterError("nm_integral requires 0 < t0_cutoff < t_max");
    }
    const std::vector<ExtremumEvent> extrema = population_extrema(sys, pkt, t_max);
    if (!extrema.empty() && t0_cutoff >= extrema.front().t) {
        throw ParameterError("cutoff t0 = " + std::to_string(t0_cutoff) +
                             " is not before the first population maximum at t = " +
                             std::to_string(extrema.front().t));
    }

    NMReport report;
    report.t0_cutoff = t0_cutoff;
    report.t_max = t_max;

    // Increasing stretches run from t0 (or a minimum) to the next maximum (or t_max).
    double start = t0_cutoff;
    bool rising = true;
    auto close_interval = [&](double end) {
        if (end - start <= 2.0 * kRootTolerance) return; // tangency, zero measure
        report.intervals.emplace_back(start, end);
    };
    for (const ExtremumEvent& e : extrema) {
        if (e.kind == ExtremumKind::maximum && rising) {
            close_interval(e.t);
            rising = false;
        } else if (e.kind == ExtremumKind::minimum && !rising) {
            start = e.t;
            rising = true;
        }
    }
    if (rising) close_interval(t_max);

    for (const auto& [a, b] : report.intervals) {
        const double pa = population(a, sys, pkt);
        const double pb = population(b, sys, pkt);
        // a true zero of psi is only resolved to the root tolerance, leaving P ~ 1e-23
        if (pa < kSingularAmplitude * kSingularAmplitude || pa < kZeroMinimumRatio * pb) {
            throw SingularPointError("population vanishes at a minimum; N diverges", a);
        }
        report.contributions.push_back(std::max(0.0, std::log(pb / pa)));
    }
    for (double c : report.contributions) report.total_n += c;
    report.n_excl_initial_rise =
        report.contributions.empty() ? 0.0 : report.total_n - report.contributions.front();
    report.quadrature_total = nm_quadrature(sys, pkt, t0_cutoff, t_max);
    return report;
}

NMReport nm_integral(const SystemParams& sys, const PacketParams& pkt, double t0_cutoff) {
    return nm_integral(sys, pkt, t0_cutoff, default_t_max(sys, pkt));
}

std::vector<SweepRow> sweep(const SystemParams& sys, const PacketParams& pkt_template,
                            SweepAxis axis, std::span<const double> grid, double t0_cutoff,
                            const SweepOptions& options) {
    if (grid.empty()) throw ParameterError("sweep grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw ParameterError("sweep grid must be strictly increasing");
    }

    std::vector<SweepRow> rows(grid.size());
    auto run_row = [&](std::size_t i) {
        SweepRow& row = rows[i];
        row.parameter = grid[i];
        PacketParams pkt = pkt_template;
        if (axis == SweepAxis::detuning) {
            pkt.detuning = grid[i];
        } else {
            pkt.delta = grid[i];
        }
        try {
            const double t_max = options.t_max ? *options.t_max : default_t_max(sys, pkt);
            row.report = nm_integral(sys, pkt, t0_cutoff, t_max);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, grid.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) run_row(i);
        return rows;
    }
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < grid.size(); i = next++) run_row(i);
            });
        }
    } // joins
    return rows;
}

} // namespace wqed
