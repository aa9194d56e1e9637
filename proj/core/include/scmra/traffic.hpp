#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "scmra/channel.hpp"
#include "scmra/event_log.hpp"
#include "scmra/protocol.hpp"
#include "scmra/random.hpp"
#include "scmra/scm.hpp"
#include "scmra/sim_config.hpp"

namespace scmra {

/// One UE transmission. The channel is drawn at arrival and fixed for the packet.
struct PacketDescriptor {
    std::int64_t ue_id = 0;
    std::int64_t arrival_symbol = 0;
    Point3 position = Point3::Zero();
    Bits bits;
    PhaseSequence phases;
    FactoredChannel channel;

    std::int64_t length() const { return static_cast<std::int64_t>(phases.size()); }
    std::int64_t end_symbol() const { return arrival_symbol + length() - 1; }
};

/// Arrival symbols of a Poisson process with mean inter-arrival T_p / G,
/// each arrival time rounded up to a symbol boundary.
std::vector<std::int64_t> generate_arrivals(double offered_traffic, double packet_duration_s, double symbol_time_s,
                                            std::int64_t horizon_symbols, RandomStream& rng);

/// (x, y, height) with x, y uniform over the square of side `area_size` centred on the z axis.
Point3 place_ue(RandomStream& rng, double area_size = 10.0, double height = 10.0);

/// Random payload, phases and channel for a UE at a random position.
PacketDescriptor make_packet(const SimConfig& cfg, std::int64_t ue_id, std::int64_t arrival_symbol,
                             RandomStream& placement_rng, RandomStream& payload_rng);

/// Independent random streams of one episode.
struct RandomStreams {
    RandomStream arrival;
    RandomStream channel;
    RandomStream noise;
    RandomStream protocol;

    RandomStreams(std::uint64_t seed, std::uint64_t episode);
};

/// Symbol-time simulation of one BS and the UEs currently transmitting.
class World {
public:
    World(const SimConfig& cfg, std::uint64_t seed, std::uint64_t episode = 0,
          TraceLevel trace = TraceLevel::summary);

    /// Queues a packet; arrival must not precede the current symbol.
    void schedule(PacketDescriptor packet);

    /// Advances one symbol: compose x[k-1], reflect at every active SCM,
    /// aggregate y[k], run all BS tasks, retire finished packets.
    void step();
    void run(std::int64_t symbols);

    /// Terminates remaining tasks and closes the log.
    EventLog finish();

    std::int64_t symbol() const { return symbol_; }
    const BaseStation& base_station() const { return bs_; }
    const std::vector<PacketDescriptor>& active_packets() const { return active_; }
    const EventLog& log() const { return log_; }
    /// Last received vector y[k] (for instrumentation).
    const ComplexVector& last_received() const { return last_y_; }
    const ComplexVector& last_transmitted() const { return last_x_; }
    const ReceiveResult& last_result() const { return last_result_; }
    std::optional<std::int64_t> ue_of_task(TaskId task) const;

private:
    std::int64_t associate(const ComplexVector& b) const;
    void log_task_end(const CommTaskState& task, EventKind kind);

    SimConfig cfg_;
    TraceLevel trace_;
    NoiseModel noise_;
    ScmParameters scm_;
    RandomStreams streams_;
    BaseStation bs_;
    std::int64_t symbol_ = 0;
    std::deque<PacketDescriptor> pending_;
    std::vector<PacketDescriptor> active_;
    std::map<TaskId, std::int64_t> task_ue_;
    EventLog log_;
    ComplexVector last_x_;
    ComplexVector last_y_;
    ReceiveResult last_result_;
};

/// Generates arrivals, UEs and channels for `warmup + episode_symbols` symbols and runs them.
EventLog run_episode(const SimConfig& cfg, std::uint64_t seed, std::uint64_t episode = 0,
                     TraceLevel trace = TraceLevel::summary);

/// Runs `horizon` symbols exactly (no warm-up added).
EventLog run_episode_for(const SimConfig& cfg, std::int64_t horizon, std::uint64_t seed, std::uint64_t episode = 0,
                         TraceLevel trace = TraceLevel::summary);

}  // namespace scmra
