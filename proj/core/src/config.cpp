#include "scmra/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <type_traits>

#include "scmra/error.hpp"
#include "scmra/units.hpp"

namespace scmra {

// --- SimConfig derived quantities ------------------------------------------------

std::string to_string(ChannelType t) {
    switch (t) {
        case ChannelType::los: return "los";
        case ChannelType::clustered_nlos: return "clustered-nlos";
    }
    throw Error("to_string: unknown channel type");
}

ChannelType channel_type_from_string(const std::string& s) {
    if (s == "los") return ChannelType::los;
    if (s == "clustered-nlos") return ChannelType::clustered_nlos;
    throw Error("channel: expected \"los\" or \"clustered-nlos\", got \"" + s + "\"");
}

double SimConfig::wavelength() const { return wavelength_for(carrier_frequency_hz); }
double SimConfig::element_spacing() const { return element_spacing_m > 0.0 ? element_spacing_m : 0.5 * wavelength(); }
// 20 dB means g = 100 (power convention); g multiplies the field, so it enters SNR as g^2.
double SimConfig::g_amplitude() const { return db_to_linear(scm_gain_db); }
double SimConfig::p_tx_w() const { return dbm_to_watts(tx_power_dbm); }
double SimConfig::p_scout_w() const { return dbm_to_watts(tx_power_dbm + scout_boost_db); }

PlanarArrayGeometry SimConfig::bs_geometry() const { return {bs_rows, bs_cols, element_spacing(), Point3::Zero()}; }

PlanarArrayGeometry SimConfig::scm_geometry(const Point3& center) const {
    return {scm_rows, scm_cols, element_spacing(), center};
}

NoiseModel SimConfig::noise() const { return make_noise_model(scm_noise_figure_db, bs_noise_figure_db, bandwidth_hz); }

ProtocolThresholds SimConfig::thresholds() const {
    return ProtocolThresholds::from_db(gamma_dec_db, gamma_drop_db, gamma_delta_db, tx_power_dbm, scout_boost_db);
}

ClusteredNlosParams SimConfig::nlos_params() const {
    ClusteredNlosParams p;
    p.cluster_count = cluster_count;
    p.delay_spread = delay_spread_s;
    p.pathloss_exponent = pathloss_exponent;
    p.element_gain_bs = db_to_linear(bs_element_gain_db);
    p.element_gain_scm = db_to_linear(scm_cell_gain_db);
    return p;
}

namespace {

void require(bool ok, const std::string& key, const std::string& constraint) {
    if (!ok) throw Error("config key '" + key + "': " + constraint);
}

}  // namespace

void validate(const SimConfig& c) {
    require(c.carrier_frequency_hz > 0.0, "carrier_frequency_hz", "must be > 0");
    require(c.bandwidth_hz > 0.0, "bandwidth_hz", "must be > 0");
    require(c.symbol_time_s > 0.0, "symbol_time_s", "must be > 0");
    require(std::isfinite(c.tx_power_dbm), "tx_power_dbm", "must be finite");
    require(c.scout_boost_db >= 0.0, "scout_boost_db", "must be >= 0");
    require(std::isfinite(c.scm_gain_db), "scm_gain_db", "must be finite");
    require(c.bs_rows >= 1 && c.bs_cols >= 1, "bs_rows/bs_cols", "must be >= 1");
    require(c.bs_rows * c.bs_cols >= 2, "bs_rows/bs_cols", "BS needs at least 2 elements");
    require(c.scm_rows >= 1 && c.scm_cols >= 1, "scm_rows/scm_cols", "must be >= 1");
    require(c.element_spacing_m >= 0.0, "element_spacing_m", "must be >= 0 (0 selects half a wavelength)");
    require(c.pathloss_exponent >= 2.0, "pathloss_exponent", "must be >= 2");
    require(c.cluster_count >= 1, "cluster_count", "must be >= 1");
    require(c.delay_spread_s > 0.0, "delay_spread_s", "must be > 0");
    require(c.gamma_dec_db > c.gamma_drop_db, "gamma_dec_db", "must exceed gamma_drop_db");
    require(c.gamma_delta_db > 0.0, "gamma_delta_db", "must be > 0");
    require(c.packet_symbols >= 2, "packet_symbols", "must be >= 2");
    require(c.guard_symbols >= 0 && c.guard_symbols < c.packet_symbols, "guard_symbols",
            "must be in [0, packet_symbols)");
    require(c.offered_traffic > 0.0, "offered_traffic", "must be > 0");
    for (double g : c.offered_traffic_sweep) require(g > 0.0, "offered_traffic_sweep", "entries must be > 0");
    require(c.area_size_m >= 0.0, "area_size_m", "must be >= 0");
    require(c.ue_height_m > 0.0, "ue_height_m", "must be > 0");
    require(c.episode_symbols >= 1, "episode_symbols", "must be >= 1");
    require(c.warmup_symbols >= 0, "warmup_symbols", "must be >= 0");
    require(c.stop_errors >= 1, "stop_errors", "must be >= 1");
    require(c.max_packets >= 1, "max_packets", "must be >= 1");
    require(!c.analysis_snr_max_db.empty(), "analysis_snr_max_db", "must not be empty");
    require(!c.analysis_rank3_snr_max_db.empty(), "analysis_rank3_snr_max_db", "must not be empty");
    require(c.analysis_bs_elements >= static_cast<int>(c.analysis_rank3_snr_max_db.size()), "analysis_bs_elements",
            "must be >= rank");
    require(c.analysis_horizon >= 1, "analysis_horizon", "must be >= 1");
    require(c.link_distance_m > 0.0, "link_distance_m", "must be > 0");
    require(!c.sweep_values.empty(), "sweep_values", "must not be empty");
    require(c.sweep_parameter != "sweep_parameter" && c.sweep_parameter != "sweep_values", "sweep_parameter",
            "cannot sweep the sweep definition");
}

SimConfig reduced_profile(const SimConfig& cfg, int bs_side, int scm_side) {
    if (bs_side < 2 || scm_side < 1) throw Error("reduced_profile: array sides too small");
    SimConfig out = cfg;
    const double n_full = static_cast<double>(cfg.bs_rows) * cfg.bs_cols;
    const double m_full = static_cast<double>(cfg.scm_rows) * cfg.scm_cols;
    const double n = static_cast<double>(bs_side) * bs_side;
    const double m = static_cast<double>(scm_side) * scm_side;
    out.bs_rows = out.bs_cols = bs_side;
    out.scm_rows = out.scm_cols = scm_side;
    // Bootstrap SNR scales as P M^2 N.
    out.tx_power_dbm += linear_to_db((m_full * m_full * n_full) / (m * m * n));
    return out;
}

// --- schema ----------------------------------------------------------------------

namespace {

using Json = nlohmann::json;

struct Field {
    std::function<void(SimConfig&, const Json&)> set;
    std::function<Json(const SimConfig&)> get;
};

template <typename T>
T as(const Json& v, const std::string& key) {
    try {
        if constexpr (std::is_same_v<T, double>) {
            require(v.is_number(), key, "expected a number");
        } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
            require(v.is_number_integer() || (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()),
                    key, "expected an integer");
            return static_cast<T>(v.get<double>());
        } else if constexpr (std::is_same_v<T, bool>) {
            require(v.is_boolean(), key, "expected true or false");
        } else if constexpr (std::is_same_v<T, std::string>) {
            require(v.is_string(), key, "expected a string");
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            require(v.is_array(), key, "expected an array of numbers");
            for (const auto& e : v) require(e.is_number(), key, "expected an array of numbers");
        }
        return v.get<T>();
    } catch (const Json::exception& e) {
        throw Error("config key '" + key + "': " + e.what());
    }
}

template <typename T>
Field field(T SimConfig::*member, const std::string& key) {
    return {[member, key](SimConfig& c, const Json& v) { c.*member = as<T>(v, key); },
            [member](const SimConfig& c) { return Json(c.*member); }};
}

const std::vector<std::pair<std::string, Field>>& schema() {
    static const std::vector<std::pair<std::string, Field>> s = [] {
        std::vector<std::pair<std::string, Field>> v;
#define SCMRA_FIELD(name) v.emplace_back(#name, field(&SimConfig::name, #name))
        SCMRA_FIELD(carrier_frequency_hz);
        SCMRA_FIELD(bs_element_gain_db);
        SCMRA_FIELD(scm_cell_gain_db);
        SCMRA_FIELD(scm_gain_db);
        SCMRA_FIELD(bandwidth_hz);
        SCMRA_FIELD(symbol_time_s);
        SCMRA_FIELD(tx_power_dbm);
        SCMRA_FIELD(scout_boost_db);
        SCMRA_FIELD(scm_noise_figure_db);
        SCMRA_FIELD(bs_noise_figure_db);
        SCMRA_FIELD(bs_rows);
        SCMRA_FIELD(bs_cols);
        SCMRA_FIELD(scm_rows);
        SCMRA_FIELD(scm_cols);
        SCMRA_FIELD(element_spacing_m);
        v.emplace_back("channel",
                       Field{[](SimConfig& c, const Json& j) {
                                 c.channel = channel_type_from_string(as<std::string>(j, "channel"));
                             },
                             [](const SimConfig& c) { return Json(to_string(c.channel)); }});
        SCMRA_FIELD(pathloss_exponent);
        SCMRA_FIELD(cluster_count);
        SCMRA_FIELD(delay_spread_s);
        SCMRA_FIELD(gamma_dec_db);
        SCMRA_FIELD(gamma_drop_db);
        SCMRA_FIELD(gamma_delta_db);
        SCMRA_FIELD(packet_symbols);
        SCMRA_FIELD(guard_symbols);
        SCMRA_FIELD(offered_traffic);
        SCMRA_FIELD(offered_traffic_sweep);
        SCMRA_FIELD(area_size_m);
        SCMRA_FIELD(ue_height_m);
        SCMRA_FIELD(episode_symbols);
        SCMRA_FIELD(warmup_symbols);
        SCMRA_FIELD(stop_errors);
        SCMRA_FIELD(max_packets);
        SCMRA_FIELD(noise_enabled);
        SCMRA_FIELD(analysis_snr_max_db);
        SCMRA_FIELD(analysis_rank3_snr_max_db);
        SCMRA_FIELD(analysis_bs_elements);
        SCMRA_FIELD(analysis_horizon);
        SCMRA_FIELD(link_distance_m);
        SCMRA_FIELD(sweep_parameter);
        SCMRA_FIELD(sweep_values);
#undef SCMRA_FIELD
        return v;
    }();
    return s;
}

const Field& find_field(const std::string& key) {
    for (const auto& [name, f] : schema())
        if (name == key) return f;
    throw Error("config key '" + key + "': unknown key");
}

}  // namespace

Override parse_override(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw Error("override '" + text + "': expected key=value");
    return {text.substr(0, eq), text.substr(eq + 1)};
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, f] : schema()) k.push_back(name);
        return k;
    }();
    return keys;
}

void set_config_value(SimConfig& cfg, const std::string& key, const nlohmann::json& value) {
    find_field(key).set(cfg, value);
}

nlohmann::ordered_json config_to_json(const SimConfig& cfg) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [name, f] : schema()) j[name] = f.get(cfg);
    return j;
}

SimConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error("config: top level must be an object");
    SimConfig cfg;
    for (const auto& [key, value] : j.items()) set_config_value(cfg, key, value);
    return cfg;
}

SimConfig load_config(const std::string& path, const std::vector<Override>& overrides) {
    std::ifstream in(path);
    if (!in) throw Error("config: cannot open '" + path + "'");
    Json j;
    try {
        j = Json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const Json::parse_error& e) {
        throw Error("config: '" + path + "' is not valid JSON: " + e.what());
    }
    SimConfig cfg = config_from_json(j);
    for (const auto& [key, text] : overrides) {
        Json value;
        try {
            value = Json::parse(text);
        } catch (const Json::parse_error&) {
            value = text;
        }
        set_config_value(cfg, key, value);
    }
    validate(cfg);
    return cfg;
}

}  // namespace scmra
