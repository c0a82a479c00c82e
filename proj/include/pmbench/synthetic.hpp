#pragma once

// Synthetic CNC fleet generator mirroring the documented mechanics of the
// public predictive-maintenance dataset: sensor marginals (air/process
// temperature, torque, inversely coupled rotational speed), sequential
// tool-wear accumulation by machine quality, and the five failure modes
// (wear-band TWF, heat-dissipation HDF, power-window PWF, per-type
// overstrain OSF, and parameter-independent RNF). Useful for demos and
// hermetic testing when the real CSV is not on hand; the generated file
// parses through the same schema as the public one.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pmbench/causal/features.hpp"
#include "pmbench/data.hpp"
#include "pmbench/rng.hpp"

namespace pmbench {

struct SyntheticConfig {
    int rows = 10000;
    std::uint64_t seed = 7;

    // machine quality mix
    double p_low = 0.60;
    double p_medium = 0.30;

    // sensor marginals
    double air_mean = 300.0;
    double air_sd = 2.0;
    double process_offset = 10.0;
    double process_sd = 0.92;
    double torque_mean = 40.0;
    double torque_sd = 9.4;
    double torque_min = 3.8;
    double rpm_at_nominal = 1539.0;
    double rpm_torque_slope = -15.7;  // rpm per newton-meter around nominal torque
    double rpm_noise_sd = 86.0;
    double rpm_min = 1100.0;

    // tool wear lifecycle: wear accumulates per process by quality until a
    // wear-failure point drawn from the band; surviving tools run to
    // max_tool_life before silent replacement
    double twf_band_low = 200.0;
    double twf_band_high = 240.0;
    double twf_fail_prob = 0.46;
    double max_tool_life = 253.0;
    double wear_low_increment = 2.0;
    double wear_medium_increment = 3.0;
    double wear_high_increment = 5.0;

    // mechanism thresholds
    double hdf_temp_diff_max = 8.6;    // kelvin
    double hdf_rpm_max = 1380.0;       // rpm
    double pwf_power_min = 3500.0;     // watts
    double pwf_power_max = 9000.0;     // watts
    double osf_threshold_low = 11000.0;
    double osf_threshold_medium = 12000.0;
    double osf_threshold_high = 13000.0;

    double rnf_prob = 0.001;
};

inline std::vector<MachineRecord> generate_synthetic_fleet(const SyntheticConfig& cfg = {}) {
    Rng rng(cfg.seed);
    std::vector<MachineRecord> records;
    records.reserve(cfg.rows);

    double wear = 0.0;
    double wear_fail_point = rng.uniform(cfg.twf_band_low, cfg.twf_band_high);
    bool tool_will_fail = rng.uniform01() < cfg.twf_fail_prob;

    for (int i = 0; i < cfg.rows; ++i) {
        MachineRecord r;
        r.udi = i + 1;

        const double u = rng.uniform01();
        r.machine_type = u < cfg.p_low ? MachineType::L
                         : u < cfg.p_low + cfg.p_medium ? MachineType::M
                                                        : MachineType::H;
        r.product_id = std::string(1, machine_type_char(r.machine_type)) +
                       std::to_string(10000 + i);

        // sensors are quantized like the public CSV: temperatures and
        // torque to one decimal, rotational speed to whole rpm
        r.air_temp = std::round(10.0 * rng.normal(cfg.air_mean, cfg.air_sd)) / 10.0;
        r.process_temp =
            std::round(10.0 * (r.air_temp + cfg.process_offset + rng.normal(0.0, cfg.process_sd))) /
            10.0;
        r.torque =
            std::round(10.0 * std::max(cfg.torque_min, rng.normal(cfg.torque_mean, cfg.torque_sd))) /
            10.0;
        r.rot_speed = std::round(std::max(
            cfg.rpm_min, cfg.rpm_at_nominal + cfg.rpm_torque_slope * (r.torque - cfg.torque_mean) +
                             rng.normal(0.0, cfg.rpm_noise_sd)));

        const double increment = r.machine_type == MachineType::L ? cfg.wear_low_increment
                                 : r.machine_type == MachineType::M ? cfg.wear_medium_increment
                                                                    : cfg.wear_high_increment;
        r.tool_wear = wear;
        wear += increment;

        bool tool_expired = false;
        if (tool_will_fail && r.tool_wear >= wear_fail_point) {
            r.twf = true;
            tool_expired = true;
        } else if (r.tool_wear >= cfg.max_tool_life) {
            tool_expired = true;  // silent scheduled replacement
        }

        const CausalFeatures f = derive_causal_features(r);
        r.hdf = f.temp_diff < cfg.hdf_temp_diff_max && r.rot_speed < cfg.hdf_rpm_max;
        r.pwf = f.power < cfg.pwf_power_min || f.power > cfg.pwf_power_max;
        const double osf_threshold = r.machine_type == MachineType::L ? cfg.osf_threshold_low
                                     : r.machine_type == MachineType::M
                                         ? cfg.osf_threshold_medium
                                         : cfg.osf_threshold_high;
        r.osf = f.overstrain > osf_threshold;
        r.rnf = rng.uniform01() < cfg.rnf_prob;
        r.machine_failure = r.twf || r.hdf || r.pwf || r.osf || r.rnf;

        if (tool_expired || (r.osf && rng.uniform01() < 0.5)) {
            wear = 0.0;
            wear_fail_point = rng.uniform(cfg.twf_band_low, cfg.twf_band_high);
            tool_will_fail = rng.uniform01() < cfg.twf_fail_prob;
        }

        records.push_back(std::move(r));
    }
    return records;
}

inline std::string generate_synthetic_csv(const SyntheticConfig& cfg = {}) {
    return serialize_dataset(generate_synthetic_fleet(cfg));
}

}  // namespace pmbench
