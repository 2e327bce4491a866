#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adrc/design.hpp"
#include "adrc/ratpoly.hpp"
#include "adrc/tfsynth.hpp"

namespace adrc {

/// Maps a frequency in rad/s to the complex response there.
using FrequencyResponse = std::function<std::complex<double>(double)>;

FrequencyResponse response_of(RationalTf g);

struct PlantModel {
    RationalTf tf;
    std::string label;
};

/// Throws std::invalid_argument for improper plants.
void validate(const PlantModel& p);

/// 1/(s+1) e^{-0.2 s}
PlantModel plant_p1();
/// 1/(s^2+2s+1)
PlantModel plant_p2();
/// 1/(s^3+s^2+s+1)
PlantModel plant_p3();

/// Closed-loop responses. All of them are built on the same open loop
/// G_OL = G_FB G_P, so output- and error-based schemes share G_OL, G_YD
/// and G_UN by construction.
struct LoopSet {
    FrequencyResponse g_ol;
    FrequencyResponse g_yd;          // G_P / (1 + G_OL)
    FrequencyResponse g_un;          // -G_FB / (1 + G_OL)
    FrequencyResponse g_er_o_case_a; // 1 - G_PF(A) G_OL / (1 + G_OL)
    FrequencyResponse g_er_o_case_b;
    FrequencyResponse g_er_o;        // for the variant of the TfSet
    FrequencyResponse g_er_e;        // 1 - G_OL / (1 + G_OL)
};

LoopSet build_loopset(const TfSet& t, const AdrcDesign& d, const PlantModel& p);

/// 1 - G_R Gbar_PF G_OL / (1 + G_OL) for an arbitrary reference variant.
FrequencyResponse tracking_error_response(const TfSet& t, const GainVariant& v,
                                          const AdrcDesign& d, const PlantModel& p);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> logspace(double lo, double hi, std::size_t n);

struct BodePoint {
    double omega;
    double mag_db;
    double phase_deg;   // unwrapped
};

/// Generic evaluator; phase is unwrapped sample to sample.
std::vector<BodePoint> bode(const FrequencyResponse& g, std::span<const double> grid);
/// Rational part unwrapped, dead time added analytically as -w*delay.
std::vector<BodePoint> bode(const RationalTf& g, std::span<const double> grid);

struct Margins {
    std::optional<double> gain_margin_db;
    std::optional<double> phase_margin_deg;
    std::optional<double> gain_crossover;    // rad/s, |G_OL| = 1
    std::optional<double> phase_crossover;   // rad/s, phase = -180 deg (mod 360)

    friend bool operator==(const Margins&, const Margins&) = default;
};

inline constexpr std::size_t kMarginGridPoints = 2000;

/// Gain/phase margins within [w_min, w_max]. The lowest-frequency gain
/// crossover is used; the phase crossover nearest to it is reported.
Margins margins(const FrequencyResponse& g_ol, double w_min = 1e-3, double w_max = 1e3,
                std::size_t grid_points = kMarginGridPoints);

}  // namespace adrc
