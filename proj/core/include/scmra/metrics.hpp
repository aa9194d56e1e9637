#pragma once

#include <cstdint>
#include <vector>

#include "scmra/event_log.hpp"
#include "scmra/sim_config.hpp"

namespace scmra {

/// Ground-truth outcome of one packet inside the counting window.
struct PacketOutcome {
    std::int64_t ue = 0;
    std::int64_t arrival_symbol = 0;
    std::int64_t end_symbol = 0;
    bool detected = false;
    std::int64_t setup_symbols = -1;  // first detection - arrival
    int tasks = 0;                    // Communication Tasks attributed to this UE
    bool fully_decoded = false;       // some task decoded every bit after its detection
    std::int64_t bits_compared = 0;   // best task
    std::int64_t bit_errors = 0;      // best task
    std::int64_t bits_missed = 0;     // payload bits before the best task's first decision
};

/// Outcomes of packets that arrived after warm-up and ended before the horizon.
std::vector<PacketOutcome> evaluate_episode(const EventLog& log);

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

/// Wilson score interval for `successes` out of `trials` (95% by default).
Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = 1.959963984540054);

struct PerEstimate {
    double offered_traffic = 0.0;
    double per = 0.0;  // 1 - P(detection)
    Interval ci;
    std::int64_t n_packets = 0;
    std::int64_t n_errors = 0;
    std::int64_t n_fully_decoded = 0;
    std::int64_t bits_compared = 0;
    std::int64_t bit_errors = 0;
    std::int64_t episodes = 0;
    std::int64_t false_alarms = 0;  // detections attributed to no UE
    std::vector<std::int64_t> setup_symbols;  // detected packets, in episode order

    double fully_decoded_rate() const {
        return n_packets ? static_cast<double>(n_fully_decoded) / static_cast<double>(n_packets) : 0.0;
    }
    double ber() const { return bits_compared ? static_cast<double>(bit_errors) / bits_compared : 0.0; }
};

/// Episodes with seeds (cfg seed, episode 0, 1, ...) until `stop_errors` missed
/// packets or `cfg.max_packets` counted packets. Episodes may run on `workers`
/// threads; the result does not depend on the worker count. If `first_log` is
/// given it receives the event log of episode 0.
PerEstimate monte_carlo_per(const SimConfig& cfg, std::uint64_t seed, int stop_errors, int workers = 1,
                            EventLog* first_log = nullptr);

/// Fraction of `values` that are <= `x`.
double empirical_cdf(const std::vector<std::int64_t>& values, double x);
double median(std::vector<std::int64_t> values);

}  // namespace scmra
