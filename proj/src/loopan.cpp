#include "adrc/loopan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace adrc {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Shift `raw` by a multiple of 360 so that it lands within 180 of `reference`.
double unwrap_near(double raw, double reference) {
    return raw + 360.0 * std::round((reference - raw) / 360.0);
}

// Bisection in log-frequency on f, which must change sign over [lo, hi].
template <typename F>
double bisect_log(F&& f, double lo, double hi, double f_lo) {
    double a = std::log(lo);
    double b = std::log(hi);
    double fa = f_lo;
    for (int iter = 0; iter < 200; ++iter) {
        const double m = 0.5 * (a + b);
        const double fm = f(std::exp(m));
        if (std::abs(fm) < 1e-10 || b - a < 1e-15) {
            return std::exp(m);
        }
        if ((fa < 0.0) == (fm < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return std::exp(0.5 * (a + b));
}

}  // namespace

FrequencyResponse response_of(RationalTf g) {
    return [g = std::move(g)](double w) { return g(w); };
}

void validate(const PlantModel& p) {
    if (p.tf.properness() == Properness::improper) {
        throw std::invalid_argument("plant must be proper (num degree " +
                                    std::to_string(p.tf.num().degree()) + " > den degree " +
                                    std::to_string(p.tf.den().degree()) + ")");
    }
    if (p.tf.num().is_zero()) {
        throw std::invalid_argument("plant numerator must be nonzero");
    }
}

PlantModel plant_p1() {
    return {RationalTf(Polynomial{1.0}, Polynomial{1.0, 1.0}, 0.2), "P1"};
}

PlantModel plant_p2() {
    return {RationalTf(Polynomial{1.0}, Polynomial{1.0, 2.0, 1.0}), "P2"};
}

PlantModel plant_p3() {
    return {RationalTf(Polynomial{1.0}, Polynomial{1.0, 1.0, 1.0, 1.0}), "P3"};
}

FrequencyResponse tracking_error_response(const TfSet& t, const GainVariant& v,
                                          const AdrcDesign& d, const PlantModel& p) {
    const RationalTf g_pf = t.g_pf_bar * synth_g_r(v, d);
    return [fb = t.g_fb, gp = p.tf, g_pf](double w) {
        const auto ol = fb(w) * gp(w);
        // 1 - G_PF T  ==  (1 + (1 - G_PF) G_OL) / (1 + G_OL)
        return (1.0 + (1.0 - g_pf(w)) * ol) / (1.0 + ol);
    };
}

LoopSet build_loopset(const TfSet& t, const AdrcDesign& d, const PlantModel& p) {
    validate(p);
    LoopSet s;
    const RationalTf fb = t.g_fb;
    const RationalTf gp = p.tf;
    s.g_ol = [fb, gp](double w) { return fb(w) * gp(w); };
    s.g_yd = [fb, gp](double w) {
        const auto g = gp(w);
        return g / (1.0 + fb(w) * g);
    };
    s.g_un = [fb, gp](double w) {
        const auto c = fb(w);
        return -c / (1.0 + c * gp(w));
    };
    s.g_er_e = [fb, gp](double w) { return 1.0 / (1.0 + fb(w) * gp(w)); };
    s.g_er_o_case_a = tracking_error_response(t, make_variant(d, "A"), d, p);
    s.g_er_o_case_b = tracking_error_response(t, make_variant(d, "B"), d, p);
    s.g_er_o = tracking_error_response(t, t.variant, d, p);
    return s;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) {
        throw std::invalid_argument("logspace: need 0 < lo < hi and at least 2 points");
    }
    std::vector<double> out(n);
    const double a = std::log10(lo);
    const double step = (std::log10(hi) - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::pow(10.0, a + step * static_cast<double>(i));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

namespace {

void check_grid(std::span<const double> grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw std::invalid_argument("frequency grid must be positive and strictly increasing");
        }
    }
}

}  // namespace

std::vector<BodePoint> bode(const FrequencyResponse& g, std::span<const double> grid) {
    check_grid(grid);
    std::vector<BodePoint> out;
    out.reserve(grid.size());
    for (double w : grid) {
        const auto v = g(w);
        double ph = std::arg(v) * kRadToDeg;
        if (!out.empty()) {
            ph = unwrap_near(ph, out.back().phase_deg);
        }
        out.push_back({w, 20.0 * std::log10(std::abs(v)), ph});
    }
    return out;
}

std::vector<BodePoint> bode(const RationalTf& g, std::span<const double> grid) {
    check_grid(grid);
    std::vector<BodePoint> out;
    out.reserve(grid.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = grid[i];
        const auto v = g.rational_at({0.0, w});
        double ph = std::arg(v) * kRadToDeg;
        if (i > 0) {
            ph = unwrap_near(ph, prev);
        }
        prev = ph;
        out.push_back({w, 20.0 * std::log10(std::abs(v)), ph - w * g.delay() * kRadToDeg});
    }
    return out;
}

Margins margins(const FrequencyResponse& g_ol, double w_min, double w_max, std::size_t grid_points) {
    if (!(w_min > 0.0) || !(w_max > w_min)) {
        throw std::invalid_argument("margins: band must satisfy 0 < w_min < w_max");
    }
    const std::vector<double> grid = logspace(w_min, w_max, grid_points);
    const std::vector<BodePoint> pts = bode(g_ol, grid);

    Margins m;
    const auto log_mag = [&](double w) { return std::log(std::abs(g_ol(w))); };

    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i].mag_db;
        const double b = pts[i + 1].mag_db;
        if (a != 0.0 && (a < 0.0) == (b < 0.0)) {
            continue;
        }
        const double wc = a == 0.0 ? pts[i].omega
                                   : bisect_log(log_mag, pts[i].omega, pts[i + 1].omega,
                                                a * std::log(10.0) / 20.0);
        m.gain_crossover = wc;
        m.phase_margin_deg = 180.0 + unwrap_near(std::arg(g_ol(wc)) * kRadToDeg, pts[i].phase_deg);
        break;
    }

    // phase crossovers at -180 + 360 k
    std::vector<double> crossings;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double pa = pts[i].phase_deg;
        const double pb = pts[i + 1].phase_deg;
        const double ka = std::floor((pa + 180.0) / 360.0);
        const double kb = std::floor((pb + 180.0) / 360.0);
        if (ka == kb) {
            continue;
        }
        const double level = -180.0 + 360.0 * std::max(ka, kb);
        const double ref = pa;
        const auto f = [&](double w) {
            return unwrap_near(std::arg(g_ol(w)) * kRadToDeg, ref) - level;
        };
        const double fa = pa - level;
        if (fa == 0.0) {
            crossings.push_back(pts[i].omega);
        } else {
            crossings.push_back(bisect_log(f, pts[i].omega, pts[i + 1].omega, fa));
        }
    }
    if (!crossings.empty()) {
        double chosen = crossings.front();
        if (m.gain_crossover) {
            const double lc = std::log(*m.gain_crossover);
            for (double w : crossings) {
                if (std::abs(std::log(w) - lc) < std::abs(std::log(chosen) - lc)) {
                    chosen = w;
                }
            }
        }
        m.phase_crossover = chosen;
        m.gain_margin_db = -20.0 * std::log10(std::abs(g_ol(chosen)));
    }
    return m;
}

}  // namespace adrc
