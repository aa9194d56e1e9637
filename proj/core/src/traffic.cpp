#include "scmra/traffic.hpp"

#include <cmath>

#include "scmra/error.hpp"
#include "scmra/units.hpp"

namespace scmra {

namespace {

constexpr std::uint64_t kStreamsPerEpisode = 4;
// Relative Frobenius error of the factored LOS channel. At 1e-7 the model error
// sits ~140 dB below the signal, far under the receiver noise, and the rank
// stays at 16 for the reference geometry.
constexpr double kChannelTolerance = 1e-7;

}  // namespace

std::vector<std::int64_t> generate_arrivals(double offered_traffic, double packet_duration_s, double symbol_time_s,
                                            std::int64_t horizon_symbols, RandomStream& rng) {
    if (!(offered_traffic > 0.0)) throw Error("generate_arrivals: offered traffic must be > 0");
    if (!(packet_duration_s > 0.0) || !(symbol_time_s > 0.0)) throw Error("generate_arrivals: durations must be > 0");
    const double mean_interarrival = packet_duration_s / offered_traffic;
    std::vector<std::int64_t> out;
    double t = 0.0;
    for (;;) {
        t += rng.exponential(mean_interarrival);
        const auto k = static_cast<std::int64_t>(std::ceil(t / symbol_time_s));
        if (k >= horizon_symbols) break;
        out.push_back(k);
    }
    return out;
}

Point3 place_ue(RandomStream& rng, double area_size, double height) {
    const double half = 0.5 * area_size;
    const double x = rng.uniform(-half, half);
    const double y = rng.uniform(-half, half);
    return {x, y, height};
}

PacketDescriptor make_packet(const SimConfig& cfg, std::int64_t ue_id, std::int64_t arrival_symbol,
                             RandomStream& placement_rng, RandomStream& payload_rng) {
    PacketDescriptor p;
    p.ue_id = ue_id;
    p.arrival_symbol = arrival_symbol;
    p.position = place_ue(placement_rng, cfg.area_size_m, cfg.ue_height_m);
    p.bits.resize(static_cast<std::size_t>(cfg.payload_bits()));
    for (auto& b : p.bits) b = static_cast<std::uint8_t>(payload_rng.next_u64() >> 63);
    p.phases = bits_to_phases(p.bits, cfg.guard_symbols);

    const auto bs = cfg.bs_geometry();
    const auto ue = cfg.scm_geometry(p.position);
    switch (cfg.channel) {
        case ChannelType::los: {
            const double gbs = db_to_linear(cfg.bs_element_gain_db);
            const double gscm = db_to_linear(cfg.scm_cell_gain_db);
            p.channel = factorize(los_channel(bs, ue, cfg.wavelength(), gbs, gscm), kChannelTolerance);
            break;
        }
        case ChannelType::clustered_nlos:
            p.channel = nlos_multipath_factored(bs, ue, cfg.wavelength(), cfg.nlos_params(), placement_rng);
            break;
    }
    return p;
}

RandomStreams::RandomStreams(std::uint64_t seed, std::uint64_t episode)
    : arrival(seed, kStreamsPerEpisode * episode + 0),
      channel(seed, kStreamsPerEpisode * episode + 1),
      noise(seed, kStreamsPerEpisode * episode + 2),
      protocol(seed, kStreamsPerEpisode * episode + 3) {}

// --- World ---------------------------------------------------------------------

World::World(const SimConfig& cfg, std::uint64_t seed, std::uint64_t episode, TraceLevel trace)
    : cfg_(cfg),
      trace_(trace),
      noise_(cfg.noise()),
      streams_(seed, episode),
      bs_(static_cast<Eigen::Index>(cfg.bs_rows) * cfg.bs_cols, cfg.thresholds(), cfg.noise().sigma_sq,
          streams_.protocol) {
    validate(cfg_);
    scm_.g = cfg_.g_amplitude();
    scm_.sigma_eta_sq = cfg_.noise_enabled ? noise_.sigma_eta_sq : 0.0;
}

void World::schedule(PacketDescriptor packet) {
    if (packet.arrival_symbol < symbol_) throw Error("World::schedule: arrival precedes current symbol");
    if (packet.channel.bs_elements() != bs_.dimension()) throw Error("World::schedule: channel has wrong BS dimension");
    if (packet.length() < 1) throw Error("World::schedule: empty packet");
    auto it = pending_.begin();
    while (it != pending_.end() && it->arrival_symbol <= packet.arrival_symbol) ++it;
    pending_.insert(it, std::move(packet));
}

std::optional<std::int64_t> World::ue_of_task(TaskId task) const {
    const auto it = task_ue_.find(task);
    if (it == task_ue_.end()) return std::nullopt;
    return it->second;
}

std::int64_t World::associate(const ComplexVector& b) const {
    // UE u contributes g e^{-j phi} <H_u b, H_u x> to the task's decision
    // variable, x being the task part of the transmit vector. Cross terms
    // matter: a task spawned by leakage from another task's beam still hears
    // that UE through them.
    const auto& thr = bs_.thresholds();
    ComplexVector x = ComplexVector::Zero(bs_.dimension());
    for (const auto& task : bs_.tasks()) x += std::sqrt(thr.p_tx) * task.b;

    std::int64_t best = -1;
    double best_amp = 0.0;
    for (const auto& p : active_) {
        const double amp = scm_.g * std::abs(p.channel.apply(b).dot(p.channel.apply(x)));
        if (amp > best_amp) {
            best_amp = amp;
            best = p.ue_id;
        }
    }
    if (best >= 0 && best_amp * best_amp / bs_.sigma_sq() >= thr.gamma_drop) return best;
    return -1;
}

void World::log_task_end(const CommTaskState& task, EventKind kind) {
    const auto ue = ue_of_task(task.id).value_or(-1);
    Event end;
    end.kind = kind;
    end.symbol = symbol_;
    end.ue = ue;
    end.task = task.id;
    end.gamma = task.gamma;
    log_.events.push_back(end);

    Event bits;
    bits.kind = EventKind::task_bits;
    bits.symbol = symbol_;
    bits.ue = ue;
    bits.task = task.id;
    bits.start_symbol = task.first_bit_symbol;
    bits.bits = task.decoded_bits;
    log_.events.push_back(std::move(bits));
}

void World::step() {
    while (!pending_.empty() && pending_.front().arrival_symbol == symbol_) {
        Event e;
        e.kind = EventKind::arrival;
        e.symbol = symbol_;
        e.ue = pending_.front().ue_id;
        e.start_symbol = pending_.front().end_symbol();
        e.bits = pending_.front().bits;
        log_.events.push_back(std::move(e));
        active_.push_back(std::move(pending_.front()));
        pending_.pop_front();
    }

    last_x_ = bs_.transmit();

    const Eigen::Index n = bs_.dimension();
    ComplexVector y = cfg_.noise_enabled ? streams_.noise.complex_normal_vector(n, noise_.sigma_w_sq)
                                         : ComplexVector::Zero(n);
    for (const auto& p : active_) {
        const ComplexVector z = p.channel.apply(last_x_);
        const double phase = p.phases.phases[static_cast<std::size_t>(symbol_ - p.arrival_symbol)];
        ScmParameters params = scm_;
        params.cells = p.channel.cells();
        y += p.channel.apply_transpose(scm_reflect(z, phase, params, streams_.noise));
    }
    last_y_ = y;

    last_result_ = bs_.receive(y, symbol_);
    const auto& res = last_result_;

    if (trace_ == TraceLevel::full) {
        Event s;
        s.kind = EventKind::scout_snr;
        s.symbol = symbol_;
        s.gamma = res.scout_gamma;
        log_.events.push_back(s);
    }
    if (res.detected) {
        const auto& b = bs_.database().vector_for(*res.detected);
        const auto ue = associate(b);
        task_ue_[*res.detected] = ue;
        Event d;
        d.kind = EventKind::detection;
        d.symbol = symbol_;
        d.ue = ue;
        d.task = *res.detected;
        d.gamma = res.scout_gamma;
        log_.events.push_back(d);
    }
    if (res.saturated) {
        Event s;
        s.kind = EventKind::saturation;
        s.symbol = symbol_;
        s.gamma = res.scout_gamma;
        log_.events.push_back(s);
    }
    if (trace_ == TraceLevel::full) {
        for (const auto& sample : res.samples) {
            Event c;
            c.kind = EventKind::comm_snr;
            c.symbol = symbol_;
            c.task = sample.task;
            c.ue = ue_of_task(sample.task).value_or(-1);
            c.gamma = sample.gamma;
            log_.events.push_back(c);
        }
    }
    for (const auto& task : res.retired) log_task_end(task, EventKind::drop);

    std::erase_if(active_, [this](const PacketDescriptor& p) { return p.end_symbol() <= symbol_; });
    ++symbol_;
}

void World::run(std::int64_t symbols) {
    for (std::int64_t i = 0; i < symbols; ++i) step();
}

EventLog World::finish() {
    for (const auto& task : bs_.terminate_all()) log_task_end(task, EventKind::task_end);
    log_.horizon = symbol_;
    EventLog out = std::move(log_);
    log_ = EventLog{};
    return out;
}

EventLog run_episode_for(const SimConfig& cfg, std::int64_t horizon, std::uint64_t seed, std::uint64_t episode,
                         TraceLevel trace) {
    validate(cfg);
    if (horizon <= 0) return EventLog{};
    RandomStreams streams(seed, episode);
    const auto arrivals =
        generate_arrivals(cfg.offered_traffic, cfg.packet_duration_s(), cfg.symbol_time_s, horizon, streams.arrival);

    World world(cfg, seed, episode, trace);
    std::size_t next = 0;
    std::int64_t ue_id = 0;
    for (std::int64_t k = 0; k < horizon; ++k) {
        // Channels are drawn lazily so only live packets hold channel factors.
        while (next < arrivals.size() && arrivals[next] == k) {
            world.schedule(make_packet(cfg, ue_id++, k, streams.channel, streams.arrival));
            ++next;
        }
        world.step();
    }
    return world.finish();
}

EventLog run_episode(const SimConfig& cfg, std::uint64_t seed, std::uint64_t episode, TraceLevel trace) {
    const std::int64_t horizon = cfg.warmup_symbols + cfg.episode_symbols;
    EventLog log = run_episode_for(cfg, horizon, seed, episode, trace);
    log.warmup = cfg.warmup_symbols;
    return log;
}

}  // namespace scmra
