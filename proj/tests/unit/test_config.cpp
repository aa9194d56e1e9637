#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <functional>

#include "scmra/config.hpp"
#include "scmra/error.hpp"
#include "scmra/units.hpp"

using namespace scmra;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& text) {
    const auto dir = fs::temp_directory_path() / "scmra_config_test";
    fs::create_directories(dir);
    const auto p = dir / name;
    std::ofstream(p) << text;
    return p;
}

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Config, EmptyFileGivesReferenceDefaults) {
    const auto cfg = load_config(write_temp("empty.json", "{}").string());
    EXPECT_EQ(cfg.carrier_frequency_hz, 100e9);
    EXPECT_EQ(cfg.bandwidth_hz, 10e6);
    EXPECT_EQ(cfg.symbol_time_s, 100e-9);
    EXPECT_EQ(cfg.packet_symbols, 144);
    EXPECT_EQ(cfg.guard_symbols, 16);
    EXPECT_EQ(cfg.bs_rows * cfg.bs_cols, 900);
    EXPECT_EQ(cfg.scm_rows * cfg.scm_cols, 400);
    EXPECT_EQ(cfg.tx_power_dbm, -5.0);
    EXPECT_EQ(cfg.scout_boost_db, 10.0);
    EXPECT_EQ(cfg.scm_gain_db, 20.0);
    EXPECT_EQ(cfg.gamma_dec_db, 30.0);
    EXPECT_EQ(cfg.gamma_drop_db, 5.0);
    EXPECT_EQ(cfg.gamma_delta_db, 5.0);
    EXPECT_EQ(cfg.pathloss_exponent, 2.0);
    EXPECT_EQ(cfg.channel, ChannelType::los);
    EXPECT_NEAR(cfg.element_spacing(), 1.5e-3, 2e-6);  // half of c / 100 GHz
    EXPECT_DOUBLE_EQ(cfg.element_spacing(), 299792458.0 / 100e9 / 2.0);
    EXPECT_NEAR(cfg.noise().sigma_sq, 7.99e-14, 0.01e-14);
    EXPECT_DOUBLE_EQ(cfg.packet_duration_s(), 14.4e-6);
}

TEST(Config, OverridesSwitchToNlos) {
    const auto cfg = load_config(write_temp("empty2.json", "{}").string(),
                                 {parse_override("pathloss_exponent=2.5"), parse_override("channel=clustered-nlos")});
    EXPECT_EQ(cfg.pathloss_exponent, 2.5);
    EXPECT_EQ(cfg.channel, ChannelType::clustered_nlos);
    EXPECT_EQ(cfg.nlos_params().pathloss_exponent, 2.5);
}

TEST(Config, FileValuesAndCommentsAndOverrideOrder) {
    const auto path = write_temp("values.json", R"({
        // reduced arrays
        "bs_rows": 16, "bs_cols": 16,
        "offered_traffic_sweep": [0.5, 4],
        "noise_enabled": false
    })");
    const auto cfg = load_config(path.string(), {{"bs_rows", "8"}, {"bs_rows", "10"}});
    EXPECT_EQ(cfg.bs_rows, 10);
    EXPECT_EQ(cfg.bs_cols, 16);
    EXPECT_EQ(cfg.offered_traffic_sweep, (std::vector<double>{0.5, 4.0}));
    EXPECT_FALSE(cfg.noise_enabled);
}

TEST(Config, RejectsNegativeBandwidthByName) {
    const auto msg = error_of([] { load_config(write_temp("e3.json", "{}").string(), {{"bandwidth_hz", "-1"}}); });
    EXPECT_NE(msg.find("bandwidth_hz"), std::string::npos) << msg;
    EXPECT_NE(msg.find("> 0"), std::string::npos) << msg;
}

TEST(Config, RejectsUnknownKey) {
    const auto msg = error_of([] { load_config(write_temp("bad.json", R"({"foo": 1})").string()); });
    EXPECT_EQ(msg, "config key 'foo': unknown key");
}

TEST(Config, RejectsWrongType) {
    const auto msg = error_of([] { load_config(write_temp("e4.json", R"({"bs_rows": "many"})").string()); });
    EXPECT_NE(msg.find("config key 'bs_rows'"), std::string::npos) << msg;
    const auto msg2 = error_of([] { load_config(write_temp("e5.json", "{}").string(), {{"channel", "cdl"}}); });
    EXPECT_NE(msg2.find("channel"), std::string::npos) << msg2;
}

TEST(Config, RejectsInvariantViolations) {
    const auto p = write_temp("e6.json", "{}").string();
    EXPECT_NE(error_of([&] { load_config(p, {{"gamma_dec_db", "3"}}); }).find("gamma_dec_db"), std::string::npos);
    EXPECT_NE(error_of([&] { load_config(p, {{"guard_symbols", "144"}}); }).find("guard_symbols"), std::string::npos);
    EXPECT_NE(error_of([&] { load_config(p, {{"pathloss_exponent", "1.5"}}); }).find("pathloss_exponent"),
              std::string::npos);
}

TEST(Config, RejectsUnreadableOrMalformedFile) {
    EXPECT_THROW(load_config("/nonexistent/scmra.json"), Error);
    EXPECT_THROW(load_config(write_temp("broken.json", "{ bs_rows: ").string()), Error);
    EXPECT_THROW(load_config(write_temp("array.json", "[1, 2]").string()), Error);
}

TEST(Config, ParseOverride) {
    EXPECT_EQ(parse_override("a=b=c"), (Override{"a", "b=c"}));
    EXPECT_THROW(parse_override("novalue"), Error);
    EXPECT_THROW(parse_override("=3"), Error);
}

TEST(Config, JsonRoundTrip) {
    SimConfig c;
    c.bs_rows = 12;
    c.channel = ChannelType::clustered_nlos;
    c.sweep_values = {1.0, 2.5};
    const auto j = config_to_json(c);
    EXPECT_EQ(j.size(), config_keys().size());
    const auto back = config_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(config_to_json(back).dump(), j.dump());
    // schema order is stable
    std::size_t i = 0;
    for (const auto& [key, value] : j.items()) EXPECT_EQ(key, config_keys()[i++]);
}

TEST(Config, ReducedProfileKeepsBootstrap) {
    const SimConfig full;
    const auto red = reduced_profile(full);
    EXPECT_EQ(red.bs_rows * red.bs_cols, 256);
    EXPECT_EQ(red.scm_rows * red.scm_cols, 100);
    // P M^2 N unchanged
    const double lhs = dbm_to_watts(full.tx_power_dbm) * 400.0 * 400.0 * 900.0;
    const double rhs = dbm_to_watts(red.tx_power_dbm) * 100.0 * 100.0 * 256.0;
    EXPECT_NEAR(rhs / lhs, 1.0, 1e-12);
}
