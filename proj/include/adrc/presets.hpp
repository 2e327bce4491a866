#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adrc/design.hpp"
#include "adrc/loopan.hpp"
#include "adrc/sim.hpp"

namespace adrc {

/// Named configuration reproducing one of the reference analyses.
struct Preset {
    std::string id;
    std::string description;
    std::string plant;                 // P1, P2 or P3
    DesignParams design;
    ReferenceSpec reference;
    DisturbanceSpec disturbance;
    NoiseSpec noise;
    double t_end = 10.0;
    double dt = 1e-3;
    std::optional<double> rms_from;
    std::optional<double> rms_to;
    std::vector<std::string> schemes;  // "eADRC" or an oADRC case id
    std::optional<SweepParam> sweep_param;
    std::vector<double> sweep_values;
};

const std::vector<Preset>& all_presets();
/// Throws std::invalid_argument for an unknown id.
const Preset& find_preset(std::string_view id);

/// P1, P2 or P3; throws std::invalid_argument otherwise.
PlantModel plant_by_id(std::string_view id);

/// start:stop:count (inclusive, linear) or a comma-separated list.
std::vector<double> parse_values(std::string_view spec);

/// Scenario for one scheme label ("eADRC", "A", "A1", ..., "B") of a preset.
Scenario make_scenario(const Preset& p, const PlantModel& plant, const AdrcDesign& d,
                       std::string_view scheme);

}  // namespace adrc
