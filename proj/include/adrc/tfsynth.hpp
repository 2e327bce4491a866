#pragma once

#include <string>
#include <vector>

#include "adrc/design.hpp"
#include "adrc/ratpoly.hpp"

namespace adrc {

/// Transfer functions of output-based ADRC for one reference-derivative variant.
///
///   u = G_FB (G_PF r - y),            G_PF = G_R * Gbar_PF
///   u = G_FB (G_R Gtilde_PF r - y) + G_R G_FF r      (realizable form)
struct TfSet {
    RationalTf g_fb;       // feedback, strictly proper, integrating
    RationalTf g_pf_bar;   // derivative-free pre-filter core, improper
    Polynomial g_r;        // k1 + kr . (s, ..., s^n)
    RationalTf g_pf;       // g_r * g_pf_bar
    RationalTf g_ff;       // high-pass feedforward, proper
    RationalTf g_pf_mod;   // modified pre-filter, proper
    GainVariant variant;
};

/// det(sI - A_CL) plus the polynomial contractions every synthesis uses.
struct ClosedLoopPolys {
    Polynomial det;
    Polynomial kadj_l;   // (k^T,1) adj(sI - A_CL) l
    Polynomial kadj_b;   // (1/b0) (k^T,1) adj(sI - A_CL) b
};

ClosedLoopPolys closed_loop_polys(const AdrcDesign& d);

/// (1/b0) (k^T,1) adj(sI-A_CL) l / det(sI-A_CL)
RationalTf synth_g_fb(const AdrcDesign& d);
/// (det - (1/b0)(k^T,1) adj b) / ((k^T,1) adj l)
RationalTf synth_g_pf_bar(const AdrcDesign& d);
Polynomial synth_g_r(const GainVariant& variant, const AdrcDesign& d);
/// s^(n+1) / (b0 det) with the common factor s cancelled.
RationalTf synth_g_ff(const AdrcDesign& d);
/// (det - s^(n+1) - (1/b0)(k^T,1) adj b) / ((k^T,1) adj l)
RationalTf synth_g_pf_mod(const AdrcDesign& d);

/// Error-to-control transfer function of error-based ADRC.
///
/// Assembled from the error-domain observer and control law directly and
/// reduced with det(sI - F + g h^T) - det(sI - F) = h^T adj(sI - F) g, so it
/// shares no contraction code with synth_g_fb.
RationalTf synth_eadrc_tf(const AdrcDesign& d);

/// Same as synth_eadrc_tf but with the observer gains replaced by l_override.
/// Used as a negative control for the equivalence check.
RationalTf synth_eadrc_tf(const AdrcDesign& d, const std::vector<double>& l_override);

TfSet synth_tfset(const AdrcDesign& d, const GainVariant& variant);

/// Tolerance for the constant term of det(sI - A_CL) before cancelling s.
inline constexpr double kIntegratorTol = 1e-9;

struct TfClass {
    std::string name;
    int num_degree = 0;
    int den_degree = 0;
    Properness properness = Properness::proper;
};

struct RealizabilityReport {
    std::vector<TfClass> entries;   // g_fb, g_pf_bar, g_ff, g_pf_mod
    bool g_fb_has_integrator = false;
    bool g_ff_zero_dc = false;
    int derivative_inputs = 0;      // derivatives fed through G_R
    std::vector<std::string> modules;  // modules of the realizable structure in use

    [[nodiscard]] const TfClass& at(const std::string& name) const;
    [[nodiscard]] std::string to_text() const;
};

RealizabilityReport realizability_report(const TfSet& t);

struct EquivalenceResult {
    double max_coeff_deviation = 0.0;   // over num and den, relative
    double max_grid_deviation = 0.0;    // |eADRC - G_FB| / |G_FB|
    double worst_omega = 0.0;           // where the grid deviation peaks
    bool passed = false;
};

/// Compares eADRC against G_FB coefficientwise and on a log grid.
EquivalenceResult check_equivalence(const RationalTf& g_fb, const RationalTf& eadrc,
                                    const std::vector<double>& grid, double tol = 1e-9);

/// One row of the printed-table comparison.
struct TableCheck {
    std::string table;       // "n=1" or "n=2"
    std::string quantity;    // e.g. "G_FB numerator"
    Polynomial printed;      // closed form as printed
    Polynomial derived;      // from the resolvent
    double deviation = 0.0;
    bool matches = false;
    bool known_misprint = false;
};

/// Checks the printed n = 1 and n = 2 closed forms against the synthesized
/// transfer functions for the given tuning.
std::vector<TableCheck> verify_tables(double omega_cl, double k_eso, double b0, double tol = 1e-9);

}  // namespace adrc
