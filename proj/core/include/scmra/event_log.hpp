#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "scmra/scm.hpp"

namespace scmra {

enum class EventKind {
    arrival,     // packet starts; carries payload and end symbol
    detection,   // Scouting Task spawned a Communication Task
    drop,        // task ended by the drop rule
    task_end,    // task ended at the episode boundary
    task_bits,   // decoded bit stream of a finished task
    comm_snr,    // per-symbol task SNR (full trace only)
    scout_snr,   // per-symbol scouting SNR (full trace only)
    saturation,  // detection skipped, database full
};

std::string to_string(EventKind k);

struct Event {
    EventKind kind = EventKind::arrival;
    std::int64_t symbol = 0;
    std::int64_t ue = -1;    // ground-truth UE (simulator side); -1 if none
    std::int64_t task = -1;
    double gamma = 0.0;      // linear
    std::int64_t start_symbol = -1;  // arrival: end symbol; task_bits: symbol of first bit
    Bits bits;
};

enum class TraceLevel { summary, full };

struct EventLog {
    std::int64_t horizon = 0;
    std::int64_t warmup = 0;
    std::vector<Event> events;

    bool empty() const { return events.empty(); }
};

/// One JSON object per line, in event order.
void write_ndjson(std::ostream& os, const EventLog& log);
std::string to_ndjson(const EventLog& log);

}  // namespace scmra
