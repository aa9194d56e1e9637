#include "scmra/event_log.hpp"

#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "scmra/error.hpp"

namespace scmra {

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::arrival: return "arrival";
        case EventKind::detection: return "detection";
        case EventKind::drop: return "drop";
        case EventKind::task_end: return "task_end";
        case EventKind::task_bits: return "task_bits";
        case EventKind::comm_snr: return "comm_snr";
        case EventKind::scout_snr: return "scout_snr";
        case EventKind::saturation: return "saturation";
    }
    throw Error("to_string: unknown event kind");
}

namespace {

std::string bit_string(const Bits& bits) {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) s[i] = '1';
    return s;
}

}  // namespace

void write_ndjson(std::ostream& os, const EventLog& log) {
    for (const auto& e : log.events) {
        nlohmann::ordered_json j;
        j["kind"] = to_string(e.kind);
        j["symbol"] = e.symbol;
        if (e.ue >= 0) j["ue"] = e.ue;
        if (e.task >= 0) j["task"] = e.task;
        switch (e.kind) {
            case EventKind::arrival:
                j["end_symbol"] = e.start_symbol;
                j["bits"] = bit_string(e.bits);
                break;
            case EventKind::task_bits:
                j["first_bit_symbol"] = e.start_symbol;
                j["bits"] = bit_string(e.bits);
                break;
            default:
                j["gamma"] = e.gamma;
                break;
        }
        os << j.dump() << '\n';
    }
}

std::string to_ndjson(const EventLog& log) {
    std::ostringstream os;
    write_ndjson(os, log);
    return os.str();
}

}  // namespace scmra
