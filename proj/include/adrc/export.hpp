#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "adrc/design.hpp"
#include "adrc/loopan.hpp"
#include "adrc/ratpoly.hpp"
#include "adrc/sim.hpp"
#include "adrc/tfsynth.hpp"

namespace adrc {

/// %.17g
std::string format_double(double v);

/// omega_rad_s,mag_db,phase_deg with LF line endings.
std::string bode_csv(std::span<const BodePoint> points);

/// t,r,y,u,e with LF line endings.
std::string trace_csv(const SimTrace& tr);

/// Ascending coefficients.
nlohmann::json to_json(const Polynomial& p);
/// {num: [...], den: [...], delay: seconds}
nlohmann::json to_json(const RationalTf& g);
nlohmann::json to_json(const Margins& m);
nlohmann::json to_json(const SimMetrics& m);
nlohmann::json to_json(const AdrcDesign& d);
nlohmann::json to_json(const RealizabilityReport& r);

RationalTf rational_tf_from_json(const nlohmann::json& j);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace adrc
