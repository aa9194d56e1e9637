#include "scmra/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <thread>

#include "scmra/error.hpp"
#include "scmra/traffic.hpp"

namespace scmra {

namespace {

constexpr std::int64_t kMaxEpisodes = 100000;

struct Packet {
    std::int64_t arrival = 0;
    std::int64_t end = 0;
    Bits bits;
    PacketOutcome outcome;
    std::int64_t best_correct = -1;
};

struct EpisodeSummary {
    std::vector<PacketOutcome> outcomes;
    std::int64_t false_alarms = 0;
    EventLog log;  // kept for episode 0 only
};

EpisodeSummary summarize(EventLog log, bool keep) {
    EpisodeSummary s;
    s.outcomes = evaluate_episode(log);
    for (const auto& e : log.events)
        if (e.kind == EventKind::detection && e.ue < 0 && e.symbol >= log.warmup) ++s.false_alarms;
    if (keep) s.log = std::move(log);
    return s;
}

}  // namespace

std::vector<PacketOutcome> evaluate_episode(const EventLog& log) {
    std::map<std::int64_t, Packet> packets;
    for (const auto& e : log.events) {
        switch (e.kind) {
            case EventKind::arrival: {
                Packet p;
                p.arrival = e.symbol;
                p.end = e.start_symbol;
                p.bits = e.bits;
                p.outcome.ue = e.ue;
                p.outcome.arrival_symbol = e.symbol;
                p.outcome.end_symbol = e.start_symbol;
                packets[e.ue] = std::move(p);
                break;
            }
            case EventKind::detection: {
                const auto it = packets.find(e.ue);
                if (it == packets.end()) break;
                auto& o = it->second.outcome;
                if (!o.detected) {
                    o.detected = true;
                    o.setup_symbols = e.symbol - o.arrival_symbol;
                }
                ++o.tasks;
                break;
            }
            case EventKind::task_bits: {
                const auto it = packets.find(e.ue);
                if (it == packets.end()) break;
                auto& p = it->second;
                const std::int64_t payload_start = p.end - static_cast<std::int64_t>(p.bits.size()) + 1;
                std::int64_t compared = 0;
                std::int64_t errors = 0;
                std::int64_t first_payload = -1;
                for (std::size_t i = 0; i < e.bits.size(); ++i) {
                    const std::int64_t sym = e.start_symbol + static_cast<std::int64_t>(i);
                    if (sym < payload_start || sym > p.end) continue;
                    if (first_payload < 0) first_payload = sym;
                    ++compared;
                    if (e.bits[i] != p.bits[static_cast<std::size_t>(sym - payload_start)]) ++errors;
                }
                if (compared == 0) break;
                // Decoded through the last payload symbol with no error.
                const std::int64_t expected = p.end - std::max(e.start_symbol, payload_start) + 1;
                if (errors == 0 && compared == expected) p.outcome.fully_decoded = true;
                const std::int64_t correct = compared - errors;
                if (correct > p.best_correct) {
                    p.best_correct = correct;
                    p.outcome.bits_compared = compared;
                    p.outcome.bit_errors = errors;
                    p.outcome.bits_missed = first_payload - payload_start;
                }
                break;
            }
            default:
                break;
        }
    }

    std::vector<PacketOutcome> out;
    for (auto& [ue, p] : packets) {
        if (p.arrival < log.warmup || p.end >= log.horizon) continue;
        if (p.best_correct < 0) p.outcome.bits_missed = static_cast<std::int64_t>(p.bits.size());
        out.push_back(p.outcome);
    }
    return out;
}

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
    if (trials <= 0) return {0.0, 1.0};
    if (successes < 0 || successes > trials) throw Error("wilson_interval: successes outside [0, trials]");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    // The boundary cases are exact; rounding would otherwise leave 1e-18 slivers.
    const double low = successes == 0 ? 0.0 : std::max(0.0, centre - half);
    const double high = successes == trials ? 1.0 : std::min(1.0, centre + half);
    return {low, high};
}

PerEstimate monte_carlo_per(const SimConfig& cfg, std::uint64_t seed, int stop_errors, int workers,
                            EventLog* first_log) {
    validate(cfg);
    if (stop_errors < 1) throw Error("monte_carlo_per: stop_errors must be >= 1");
    workers = std::max(1, workers);

    PerEstimate est;
    est.offered_traffic = cfg.offered_traffic;
    std::int64_t detected = 0;
    std::int64_t episode = 0;
    bool done = false;
    while (!done && episode < kMaxEpisodes) {
        // A batch of episodes runs concurrently; they are folded in episode order
        // so the stopping point is the same for any worker count.
        std::vector<EpisodeSummary> batch(static_cast<std::size_t>(workers));
        if (workers == 1) {
            batch[0] = summarize(run_episode(cfg, seed, static_cast<std::uint64_t>(episode)), episode == 0);
        } else {
            std::vector<std::thread> threads;
            std::vector<std::exception_ptr> errors(batch.size());
            for (std::size_t w = 0; w < batch.size(); ++w) {
                threads.emplace_back([&, w] {
                    try {
                        const auto id = static_cast<std::uint64_t>(episode) + w;
                        batch[w] = summarize(run_episode(cfg, seed, id), id == 0);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
            for (auto& t : threads) t.join();
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
        }
        for (auto& s : batch) {
            if (episode == 0 && first_log) *first_log = std::move(s.log);
            ++episode;
            ++est.episodes;
            est.false_alarms += s.false_alarms;
            for (const auto& o : s.outcomes) {
                ++est.n_packets;
                if (o.detected) {
                    ++detected;
                    est.setup_symbols.push_back(o.setup_symbols);
                }
                if (o.fully_decoded) ++est.n_fully_decoded;
                est.bits_compared += o.bits_compared;
                est.bit_errors += o.bit_errors;
            }
            est.n_errors = est.n_packets - detected;
            if (est.n_errors >= stop_errors || est.n_packets >= cfg.max_packets) {
                done = true;
                break;
            }
        }
    }
    est.per = est.n_packets ? static_cast<double>(est.n_errors) / static_cast<double>(est.n_packets) : 0.0;
    est.ci = wilson_interval(est.n_errors, est.n_packets);
    return est;
}

double empirical_cdf(const std::vector<std::int64_t>& values, double x) {
    if (values.empty()) return 0.0;
    const auto n = std::count_if(values.begin(), values.end(), [x](std::int64_t v) { return v <= x; });
    return static_cast<double>(n) / static_cast<double>(values.size());
}

double median(std::vector<std::int64_t> values) {
    if (values.empty()) throw Error("median: empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2) return static_cast<double>(values[n / 2]);
    return 0.5 * static_cast<double>(values[n / 2 - 1] + values[n / 2]);
}

}  // namespace scmra
