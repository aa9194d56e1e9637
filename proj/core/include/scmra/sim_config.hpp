#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scmra/channel.hpp"
#include "scmra/linalg.hpp"
#include "scmra/protocol.hpp"
#include "scmra/scm.hpp"

namespace scmra {

enum class ChannelType { los, clustered_nlos };

std::string to_string(ChannelType t);
ChannelType channel_type_from_string(const std::string& s);

/// Every simulation and analysis parameter. Defaults are the reference system
/// parameters (100 GHz carrier, 30x30 BS, 20x20 SCM, ...). Units are in the names.
struct SimConfig {
    // Radio
    double carrier_frequency_hz = 100e9;
    double bs_element_gain_db = 0.0;
    double scm_cell_gain_db = 0.0;
    double scm_gain_db = 20.0;  // SCM gain g = 10^(dB/10), applied to the reflected field
    double bandwidth_hz = 10e6;
    double symbol_time_s = 100e-9;
    double tx_power_dbm = -5.0;
    double scout_boost_db = 10.0;
    double scm_noise_figure_db = 3.0;
    double bs_noise_figure_db = 3.0;

    // Arrays; spacing <= 0 selects half a wavelength.
    int bs_rows = 30;
    int bs_cols = 30;
    int scm_rows = 20;
    int scm_cols = 20;
    double element_spacing_m = 0.0;

    // Channel
    ChannelType channel = ChannelType::los;
    double pathloss_exponent = 2.0;
    int cluster_count = 5;
    double delay_spread_s = 9e-9;

    // Protocol
    double gamma_dec_db = 30.0;
    double gamma_drop_db = 5.0;
    double gamma_delta_db = 5.0;

    // Packets and traffic
    int packet_symbols = 144;
    int guard_symbols = 16;
    double offered_traffic = 2.0;
    std::vector<double> offered_traffic_sweep{0.5, 1.0, 2.0, 3.0, 4.0};
    double area_size_m = 10.0;
    double ue_height_m = 10.0;

    // Episodes and Monte Carlo
    std::int64_t episode_symbols = 20000;
    std::int64_t warmup_symbols = 1000;
    int stop_errors = 100;
    std::int64_t max_packets = 50000;
    bool noise_enabled = true;

    // analyze command
    std::vector<double> analysis_snr_max_db{35.0, 25.0};
    std::vector<double> analysis_rank3_snr_max_db{35.0, 30.0, 25.0};
    int analysis_bs_elements = 900;
    int analysis_horizon = 20;

    // linkbudget command
    double link_distance_m = 10.0;

    // sweep command
    std::string sweep_parameter = "scout_boost_db";
    std::vector<double> sweep_values{0.0, 5.0, 10.0, 15.0};

    // Derived quantities
    double wavelength() const;
    double element_spacing() const;
    double g_amplitude() const;
    double p_tx_w() const;
    double p_scout_w() const;
    double packet_duration_s() const { return packet_symbols * symbol_time_s; }
    int payload_bits() const { return packet_symbols - guard_symbols; }
    PlanarArrayGeometry bs_geometry() const;
    PlanarArrayGeometry scm_geometry(const Point3& center) const;
    NoiseModel noise() const;
    ProtocolThresholds thresholds() const;
    ClusteredNlosParams nlos_params() const;
};

/// Throws scmra::Error naming the offending key and constraint.
void validate(const SimConfig& cfg);

/// Reduced-array profile: 16x16 BS, 10x10 SCM with the transmit power raised so
/// the bootstrap SNR (proportional to P M^2 N) is unchanged.
SimConfig reduced_profile(const SimConfig& cfg, int bs_side = 16, int scm_side = 10);

}  // namespace scmra
