#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adrc/design.hpp"
#include "adrc/loopan.hpp"

namespace adrc {

/// Reference signal with exact time derivatives.
///
/// filtered_step: unit-DC step through 1/(tau s + 1)^2, applied at t = 0.
/// sinusoid: amplitude * sin(omega t).
struct ReferenceSpec {
    enum class Kind { filtered_step, sinusoid };

    Kind kind = Kind::filtered_step;
    double amplitude = 1.0;
    double tau = 0.1;
    double omega = 1.0;

    static ReferenceSpec filtered_step(double tau, double amplitude = 1.0);
    static ReferenceSpec sinusoid(double amplitude, double omega);

    /// out[k] = r^(k)(t) for k = 0..out.size()-1
    void evaluate(double t, std::span<double> out) const;
};

void validate(const ReferenceSpec& r);

enum class Scheme { oadrc, eadrc };

struct ControllerSpec {
    AdrcDesign design;
    Scheme scheme = Scheme::eadrc;
    GainVariant variant;   // used by oadrc only

    /// "eADRC", "oADRC-A", "oADRC-A1", ..., "oADRC-B"
    [[nodiscard]] std::string label() const;
};

ControllerSpec eadrc_controller(const AdrcDesign& d);
ControllerSpec oadrc_controller(const AdrcDesign& d, std::string_view case_id);

struct DisturbanceSpec {
    double amplitude = 0.5;        // input-additive step
    std::optional<double> t_on;    // disabled when empty
};

struct NoiseSpec {
    double std_dev = 0.01;         // Gaussian, on the measured output
    std::optional<double> t_on;    // disabled when empty
    std::uint64_t seed = 1;
};

struct Scenario {
    PlantModel plant;
    ControllerSpec controller;
    ReferenceSpec reference;
    DisturbanceSpec disturbance;
    NoiseSpec noise;
    double t_end = 10.0;
    double dt = 1e-3;
    /// RMS error window; defaults to the second half of the undisturbed window.
    std::optional<double> rms_from;
    std::optional<double> rms_to;

    /// End of the undisturbed window used for overshoot and settling time.
    [[nodiscard]] double quiet_end() const;
};

/// Throws std::invalid_argument naming the violated bound.
void validate(const Scenario& sc);

struct SimMetrics {
    std::optional<double> overshoot_pct;        // step references only
    std::optional<double> settling_time_2pct;   // step references only
    double iae = 0.0;
    double control_energy = 0.0;                // integral of u^2
    double rms_error_window = 0.0;
};

enum class SimStatus { ok, diverged };

struct SimTrace {
    std::string label;
    std::vector<double> t, r, y, u, e;
    std::vector<Eigen::VectorXd> xhat;
    SimMetrics metrics;
    SimStatus status = SimStatus::ok;
    std::optional<double> diverged_at;
    std::uint64_t seed = 0;
};

inline constexpr double kDivergenceBound = 1e6;

/// Output-based control law (1/b0)(k1 r + kr . r_d - (k^T,1) xhat).
/// r_and_derivs holds r, r', ..., r^(n).
double oadrc_control(const AdrcDesign& d, const GainVariant& v, std::span<const double> r_and_derivs,
                     const Eigen::VectorXd& xhat);

/// Error-based control law (1/b0)(k^T,1) xhat_e.
double eadrc_control(const AdrcDesign& d, const Eigen::VectorXd& xhat_e);

struct ControllerStep {
    Eigen::VectorXd state;
    double u = 0.0;
};

/// One controller update: u from the current estimate, then the ESO
/// xhat' = A xhat + b u + l (y - c^T xhat) advanced by RK4 with u and y held.
ControllerStep step_oadrc(const Eigen::VectorXd& state, const AdrcDesign& d, const GainVariant& v,
                          std::span<const double> r_and_derivs, double y_measured, double dt);

/// Error-domain counterpart; the ESO input term carries -b u.
ControllerStep step_eadrc(const Eigen::VectorXd& state, const AdrcDesign& d, double e_measured,
                          double dt);

/// Fixed-step RK4 simulation of plant and controller as one ODE.
///
/// Disturbance and measurement noise are sampled at step starts and held.
/// A plant dead time delays the plant input through a ring buffer of held
/// samples. Divergence (|y| > 1e6) ends the run with status diverged.
SimTrace simulate(const Scenario& sc);

SimMetrics compute_metrics(const SimTrace& tr, const Scenario& sc);

enum class SweepParam { k_eso, omega_cl };

struct SweepItem {
    double value = 0.0;
    std::optional<SimTrace> trace;
    std::string error;   // set when the scenario could not be built or run
};

/// One simulation per value, in input order; failures are recorded per item.
std::vector<SweepItem> sweep(const Scenario& tmpl, SweepParam param, std::span<const double> values);

}  // namespace adrc
