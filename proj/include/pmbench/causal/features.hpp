#pragma once

// The three physical stress variables behind the failure mechanisms:
// thermal (temperature differential), electrical/mechanical (power), and
// cumulative mechanical (overstrain).

#include <numbers>

#include "pmbench/data.hpp"

namespace pmbench {

struct CausalFeatures {
    double temp_diff = 0.0;   // kelvin, process minus air
    double power = 0.0;       // watts, torque times angular velocity
    double overstrain = 0.0;  // minute-newton-meters, wear times torque
};

inline CausalFeatures derive_causal_features(const MachineRecord& r) {
    CausalFeatures f;
    f.temp_diff = r.process_temp - r.air_temp;
    f.power = r.torque * r.rot_speed * (2.0 * std::numbers::pi / 60.0);
    f.overstrain = r.tool_wear * r.torque;
    return f;
}

}  // namespace pmbench
