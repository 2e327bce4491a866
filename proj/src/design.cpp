#include "adrc/design.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>

namespace adrc {

namespace {

double factorial(int m) {
    std::uint64_t acc = 1;
    for (int i = 2; i <= m; ++i) {
        acc *= static_cast<std::uint64_t>(i);
    }
    return static_cast<double>(acc);
}

std::string fmt_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

void validate(const DesignParams& p) {
    if (p.n < 1) {
        throw std::invalid_argument("n must be >= 1 (got " + std::to_string(p.n) + ")");
    }
    if (p.n > kMaxOrder) {
        throw std::invalid_argument("n must be <= " + std::to_string(kMaxOrder) + " (got " +
                                    std::to_string(p.n) + ")");
    }
    if (!std::isfinite(p.b0) || p.b0 == 0.0) {
        throw std::invalid_argument("b0 must be finite and nonzero (got " + fmt_value(p.b0) + ")");
    }
    if (!std::isfinite(p.omega_cl) || p.omega_cl <= 0.0) {
        throw std::invalid_argument("omega_cl must be > 0 (got " + fmt_value(p.omega_cl) + ")");
    }
    if (!std::isfinite(p.k_eso) || p.k_eso <= 1.0) {
        throw std::invalid_argument("k_eso must be > 1 (got " + fmt_value(p.k_eso) + ")");
    }
}

std::vector<std::string> design_warnings(const DesignParams& p) {
    std::vector<std::string> out;
    if (p.k_eso < 2.0) {
        out.push_back("k_eso < 2: observer is less than twice as fast as the control loop");
    }
    return out;
}

EsoModel eso_model(int n, double b0) {
    const Eigen::Index dim = n + 1;
    EsoModel m{Eigen::MatrixXd::Zero(dim, dim), Eigen::VectorXd::Zero(dim),
               Eigen::VectorXd::Zero(dim)};
    for (Eigen::Index i = 0; i < n; ++i) {
        m.a(i, i + 1) = 1.0;
    }
    m.b(n - 1) = b0;
    m.c(0) = 1.0;
    return m;
}

std::vector<double> AdrcDesign::k_ext() const {
    std::vector<double> v = k;
    v.push_back(1.0);
    return v;
}

std::vector<double> controller_gains(const DesignParams& p) {
    validate(p);
    const int n = p.n;
    std::vector<double> k(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        k[static_cast<std::size_t>(i - 1)] = factorial(n) / (factorial(n - i + 1) * factorial(i - 1)) *
                                             std::pow(p.omega_cl, n - i + 1);
    }
    return k;
}

std::vector<double> observer_gains(const DesignParams& p) {
    validate(p);
    const int n = p.n;
    const double w = p.k_eso * p.omega_cl;
    std::vector<double> l(static_cast<std::size_t>(n + 1));
    for (int i = 1; i <= n + 1; ++i) {
        l[static_cast<std::size_t>(i - 1)] =
            factorial(n + 1) / (factorial(n - i + 1) * factorial(i)) * std::pow(w, i);
    }
    return l;
}

Eigen::MatrixXd build_acl(const DesignParams& p, std::span<const double> k, std::span<const double> l) {
    validate(p);
    const int n = p.n;
    if (k.size() != static_cast<std::size_t>(n) || l.size() != static_cast<std::size_t>(n + 1)) {
        throw std::invalid_argument("build_acl: expected " + std::to_string(n) + " controller and " +
                                    std::to_string(n + 1) + " observer gains");
    }
    for (double g : k) {
        if (!(g > 0.0)) {
            throw std::invalid_argument("build_acl: controller gains must be > 0");
        }
    }
    for (double g : l) {
        if (!(g > 0.0)) {
            throw std::invalid_argument("build_acl: observer gains must be > 0");
        }
    }
    const EsoModel eso = eso_model(n, p.b0);
    Eigen::VectorXd lv = Eigen::Map<const Eigen::VectorXd>(l.data(), n + 1);
    Eigen::RowVectorXd kext(n + 1);
    for (int i = 0; i < n; ++i) {
        kext(i) = k[static_cast<std::size_t>(i)];
    }
    kext(n) = 1.0;
    return eso.a - lv * eso.c.transpose() - (eso.b / p.b0) * kext;
}

AdrcDesign make_design(const DesignParams& p) {
    validate(p);
    AdrcDesign d;
    d.params = p;
    d.k = controller_gains(p);
    d.l = observer_gains(p);
    d.a_cl = build_acl(p, d.k, d.l);
    return d;
}

int numeric_rank(const Eigen::MatrixXd& m, double rel_tol) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) {
        return 0;
    }
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > rel_tol * sv(0)) {
            ++rank;
        }
    }
    return rank;
}

int GainVariant::derivatives_used() const {
    int m = 0;
    for (std::size_t i = 0; i < kr.size(); ++i) {
        if (kr[i] != 0.0) {
            m = static_cast<int>(i) + 1;
        }
    }
    return m;
}

GainVariant make_variant(const AdrcDesign& d, std::string_view case_id) {
    const int n = d.order();
    int used = -1;
    if (case_id == "A") {
        used = 0;
    } else if (case_id == "B") {
        used = n;
    } else if (case_id.size() >= 2 && case_id.front() == 'A') {
        int m = 0;
        for (char ch : case_id.substr(1)) {
            if (ch < '0' || ch > '9') {
                m = -1;
                break;
            }
            m = m * 10 + (ch - '0');
        }
        if (m >= 1 && m <= n - 1) {
            used = m;
        }
    }
    if (used < 0) {
        throw std::invalid_argument("case '" + std::string(case_id) + "' is not valid for n = " +
                                    std::to_string(n) + " (valid: A, A1..A" + std::to_string(n - 1) +
                                    ", B; intermediate cases need n >= 2)");
    }
    // full feedforward is (k_2, ..., k_n, 1)
    std::vector<double> full(d.k.begin() + 1, d.k.end());
    full.push_back(1.0);
    GainVariant v{std::string(case_id), std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    for (int i = 0; i < used; ++i) {
        v.kr[static_cast<std::size_t>(i)] = full[static_cast<std::size_t>(i)];
    }
    return v;
}

std::vector<GainVariant> all_variants(const AdrcDesign& d) {
    std::vector<GainVariant> out;
    out.push_back(make_variant(d, "A"));
    for (int m = 1; m < d.order(); ++m) {
        out.push_back(make_variant(d, "A" + std::to_string(m)));
    }
    out.push_back(make_variant(d, "B"));
    return out;
}

}  // namespace adrc
