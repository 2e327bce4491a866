#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace adrc {

/// Tuning inputs for bandwidth-parameterized linear ADRC.
struct DesignParams {
    int n = 1;               // plant order
    double b0 = 1.0;         // input gain estimate
    double omega_cl = 1.0;   // closed-loop bandwidth [rad/s]
    double k_eso = 5.0;      // observer-to-controller bandwidth ratio
};

inline constexpr int kMaxOrder = 5;

/// Throws std::invalid_argument naming the violated bound.
void validate(const DesignParams& p);

/// Non-fatal tuning remarks (e.g. an observer barely faster than the loop).
std::vector<std::string> design_warnings(const DesignParams& p);

/// Matrices of the extended plant model used by the ESO.
struct EsoModel {
    Eigen::MatrixXd a;   // (n+1)x(n+1) shifted identity
    Eigen::VectorXd b;   // b0 in row n-1 (0-based)
    Eigen::VectorXd c;   // first unit vector
};

EsoModel eso_model(int n, double b0);

struct AdrcDesign {
    DesignParams params;
    std::vector<double> k;   // k_1..k_n
    std::vector<double> l;   // l_1..l_{n+1}
    Eigen::MatrixXd a_cl;

    [[nodiscard]] int order() const { return params.n; }
    /// (k_1, ..., k_n, 1)
    [[nodiscard]] std::vector<double> k_ext() const;
};

/// k_i = n! / ((n-i+1)! (i-1)!) * w^(n-i+1); all controller poles at -omega_cl.
std::vector<double> controller_gains(const DesignParams& p);

/// l_i = (n+1)! / ((n-i+1)! i!) * (k_eso w)^i; all observer poles at -k_eso*omega_cl.
std::vector<double> observer_gains(const DesignParams& p);

/// A_CL = A - l c^T - (1/b0) b (k^T, 1). Requires strictly positive gains.
Eigen::MatrixXd build_acl(const DesignParams& p, std::span<const double> k, std::span<const double> l);

AdrcDesign make_design(const DesignParams& p);

/// Numerical rank via singular values, threshold rel_tol * sigma_max.
int numeric_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-9);

/// Reference-derivative feedforward variant of the output-based control law.
///
/// case_id is "A" (no derivatives), "A1".."A{n-1}" (first m derivatives) or
/// "B" (all n derivatives). kr multiplies (r', r'', ..., r^(n)).
struct GainVariant {
    std::string case_id;
    std::vector<double> kr;

    /// Number of reference derivatives the variant consumes.
    [[nodiscard]] int derivatives_used() const;
};

/// Throws std::invalid_argument for a case that does not exist for order n.
GainVariant make_variant(const AdrcDesign& d, std::string_view case_id);

/// All variants valid for the design's order, from A to B.
std::vector<GainVariant> all_variants(const AdrcDesign& d);

}  // namespace adrc
