#include "adrc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace adrc {

ReferenceSpec ReferenceSpec::filtered_step(double tau, double amplitude) {
    return {Kind::filtered_step, amplitude, tau, 1.0};
}

ReferenceSpec ReferenceSpec::sinusoid(double amplitude, double omega) {
    return {Kind::sinusoid, amplitude, 0.1, omega};
}

void ReferenceSpec::evaluate(double t, std::span<double> out) const {
    if (kind == Kind::sinusoid) {
        for (std::size_t k = 0; k < out.size(); ++k) {
            const double phase = omega * t + 0.5 * std::numbers::pi * static_cast<double>(k);
            out[k] = amplitude * std::pow(omega, static_cast<double>(k)) * std::sin(phase);
        }
        return;
    }
    if (t < 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    // r = A (1 - e^{-at}(1 + a t)),  a = 1/tau
    // r^(k) = A a^2 (-a)^(k-2) e^{-at} (k - 1 - a t),  k >= 1
    const double a = 1.0 / tau;
    const double decay = std::exp(-a * t);
    if (!out.empty()) {
        out[0] = amplitude * (1.0 - decay * (1.0 + a * t));
    }
    for (std::size_t k = 1; k < out.size(); ++k) {
        const double kk = static_cast<double>(k);
        out[k] = amplitude * a * a * std::pow(-a, kk - 2.0) * decay * (kk - 1.0 - a * t);
    }
}

void validate(const ReferenceSpec& r) {
    if (!std::isfinite(r.amplitude)) {
        throw std::invalid_argument("reference amplitude must be finite");
    }
    if (r.kind == ReferenceSpec::Kind::filtered_step && !(r.tau > 0.0 && std::isfinite(r.tau))) {
        throw std::invalid_argument("reference filter time constant tau must be > 0");
    }
    if (r.kind == ReferenceSpec::Kind::sinusoid && !(r.omega > 0.0 && std::isfinite(r.omega))) {
        throw std::invalid_argument("reference sinusoid omega must be > 0");
    }
}

std::string ControllerSpec::label() const {
    return scheme == Scheme::eadrc ? "eADRC" : "oADRC-" + variant.case_id;
}

ControllerSpec eadrc_controller(const AdrcDesign& d) {
    return {d, Scheme::eadrc, make_variant(d, "A")};
}

ControllerSpec oadrc_controller(const AdrcDesign& d, std::string_view case_id) {
    return {d, Scheme::oadrc, make_variant(d, case_id)};
}

double Scenario::quiet_end() const {
    double end = t_end;
    if (disturbance.t_on) {
        end = std::min(end, *disturbance.t_on);
    }
    if (noise.t_on) {
        end = std::min(end, *noise.t_on);
    }
    return end;
}

void validate(const Scenario& sc) {
    validate(sc.plant);
    validate(sc.controller.design.params);
    validate(sc.reference);
    if (sc.controller.variant.kr.size() != static_cast<std::size_t>(sc.controller.design.order())) {
        throw std::invalid_argument("controller variant does not match design order");
    }
    if (!(sc.dt > 0.0) || !std::isfinite(sc.dt)) {
        throw std::invalid_argument("dt must be > 0");
    }
    if (!(sc.t_end > 0.0) || !std::isfinite(sc.t_end)) {
        throw std::invalid_argument("t_end must be > 0");
    }
    if (sc.t_end / sc.dt > 5e7) {
        throw std::invalid_argument("t_end / dt exceeds 5e7 steps");
    }
    const double delay = sc.plant.tf.delay();
    if (delay > 0.0 && sc.dt > delay / 10.0) {
        throw std::invalid_argument("dt must be <= delay/10 for a plant with dead time");
    }
    if (!(sc.noise.std_dev >= 0.0) || !std::isfinite(sc.noise.std_dev)) {
        throw std::invalid_argument("noise std must be >= 0");
    }
    if (!std::isfinite(sc.disturbance.amplitude)) {
        throw std::invalid_argument("disturbance amplitude must be finite");
    }
    for (const auto& t_on : {sc.disturbance.t_on, sc.noise.t_on}) {
        if (t_on && !(*t_on >= 0.0 && std::isfinite(*t_on))) {
            throw std::invalid_argument("onset times must be finite and >= 0");
        }
    }
    if (sc.rms_from && sc.rms_to && !(*sc.rms_from < *sc.rms_to)) {
        throw std::invalid_argument("rms window must satisfy from < to");
    }
}

double oadrc_control(const AdrcDesign& d, const GainVariant& v, std::span<const double> r_and_derivs,
                     const Eigen::VectorXd& xhat) {
    const int n = d.order();
    double acc = d.k[0] * r_and_derivs[0];
    for (int i = 0; i < n; ++i) {
        acc += v.kr[static_cast<std::size_t>(i)] * r_and_derivs[static_cast<std::size_t>(i) + 1];
    }
    for (int i = 0; i < n; ++i) {
        acc -= d.k[static_cast<std::size_t>(i)] * xhat(i);
    }
    acc -= xhat(n);
    return acc / d.params.b0;
}

double eadrc_control(const AdrcDesign& d, const Eigen::VectorXd& xhat_e) {
    const int n = d.order();
    double acc = xhat_e(n);
    for (int i = 0; i < n; ++i) {
        acc += d.k[static_cast<std::size_t>(i)] * xhat_e(i);
    }
    return acc / d.params.b0;
}

namespace {

// xhat' = A xhat + b_sign * b u + l (input - xhat_1); A is the integrator chain.
void eso_rhs(const AdrcDesign& d, const Eigen::VectorXd& x, double u_term, double input,
             Eigen::VectorXd& dx) {
    const int n = d.order();
    const double innov = input - x(0);
    for (int i = 0; i < n; ++i) {
        dx(i) = x(i + 1) + d.l[static_cast<std::size_t>(i)] * innov;
    }
    dx(n) = d.l[static_cast<std::size_t>(n)] * innov;
    dx(n - 1) += d.params.b0 * u_term;
}

template <typename Rhs>
Eigen::VectorXd rk4(const Eigen::VectorXd& x, double t, double h, Rhs&& f) {
    Eigen::VectorXd k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size());
    f(t, x, k1);
    f(t + 0.5 * h, x + 0.5 * h * k1, k2);
    f(t + 0.5 * h, x + 0.5 * h * k2, k3);
    f(t + h, x + h * k3, k4);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void check_state(const Eigen::VectorXd& state, const AdrcDesign& d) {
    if (state.size() != d.order() + 1) {
        throw std::invalid_argument("controller state must have dimension n+1");
    }
}

}  // namespace

ControllerStep step_oadrc(const Eigen::VectorXd& state, const AdrcDesign& d, const GainVariant& v,
                          std::span<const double> r_and_derivs, double y_measured, double dt) {
    check_state(state, d);
    if (r_and_derivs.size() < static_cast<std::size_t>(d.order()) + 1) {
        throw std::invalid_argument("step_oadrc: need r and its first n derivatives");
    }
    const double u = oadrc_control(d, v, r_and_derivs, state);
    auto f = [&](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
        eso_rhs(d, x, u, y_measured, dx);
    };
    return {rk4(state, 0.0, dt, f), u};
}

ControllerStep step_eadrc(const Eigen::VectorXd& state, const AdrcDesign& d, double e_measured,
                          double dt) {
    check_state(state, d);
    const double u = eadrc_control(d, state);
    auto f = [&](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
        eso_rhs(d, x, -u, e_measured, dx);
    };
    return {rk4(state, 0.0, dt, f), u};
}

namespace {

// Controllable canonical realization of a proper plant.
struct PlantRealization {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::RowVectorXd c;
    double d = 0.0;
};

PlantRealization realize(const RationalTf& g) {
    const Polynomial& den = g.den();   // monic
    const int m = den.degree();
    PlantRealization p;
    p.a = Eigen::MatrixXd::Zero(m, m);
    p.b = Eigen::VectorXd::Zero(m);
    p.c = Eigen::RowVectorXd::Zero(m);
    if (m == 0) {
        p.d = g.num()[0] / den[0];
        return p;
    }
    for (int i = 0; i + 1 < m; ++i) {
        p.a(i, i + 1) = 1.0;
    }
    for (int i = 0; i < m; ++i) {
        p.a(m - 1, i) = -den[static_cast<std::size_t>(i)];
    }
    p.b(m - 1) = 1.0;
    Polynomial num = g.num();
    if (num.degree() == m) {
        p.d = num[static_cast<std::size_t>(m)];
        num -= den * p.d;
    }
    for (int i = 0; i < m; ++i) {
        p.c(i) = num[static_cast<std::size_t>(i)];
    }
    return p;
}

double integrate_trapz(const std::vector<double>& t, const std::vector<double>& f) {
    double acc = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        acc += 0.5 * (f[i] + f[i - 1]) * (t[i] - t[i - 1]);
    }
    return acc;
}

}  // namespace

SimTrace simulate(const Scenario& sc) {
    validate(sc);
    const AdrcDesign& d = sc.controller.design;
    const GainVariant& variant = sc.controller.variant;
    const bool output_based = sc.controller.scheme == Scheme::oadrc;
    const int n = d.order();
    const PlantRealization plant = realize(sc.plant.tf);
    const Eigen::Index np = plant.a.rows();
    const Eigen::Index nz = np + n + 1;

    const auto steps = static_cast<std::size_t>(std::llround(sc.t_end / sc.dt));
    const double delay = sc.plant.tf.delay();
    const auto delay_steps = static_cast<std::size_t>(std::llround(delay / sc.dt));
    std::vector<double> input_buffer(delay_steps, 0.0);   // ring of held plant inputs
    std::size_t buffer_head = 0;

    std::mt19937_64 rng(sc.noise.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    SimTrace tr;
    tr.label = sc.controller.label();
    tr.seed = sc.noise.seed;
    for (auto* v : {&tr.t, &tr.r, &tr.y, &tr.u, &tr.e}) {
        v->reserve(steps + 1);
    }
    tr.xhat.reserve(steps + 1);

    std::vector<double> refs(static_cast<std::size_t>(n) + 1);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(nz);

    // Held per step: measurement noise, disturbance, delayed input (if any).
    double noise_held = 0.0;
    double dist_held = 0.0;
    double delayed_input = 0.0;

    const auto control = [&](double t, const Eigen::VectorXd& x) {
        sc.reference.evaluate(t, refs);
        const Eigen::VectorXd xhat = x.tail(n + 1);
        return output_based ? oadrc_control(d, variant, refs, xhat) : eadrc_control(d, xhat);
    };
    const auto plant_input = [&](double u) { return delay_steps > 0 ? delayed_input : u + dist_held; };

    auto rhs = [&](double t, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
        const double u = control(t, x);   // also refreshes refs
        const double u_in = plant_input(u);
        const Eigen::VectorXd xp = x.head(np);
        const double y_meas = plant.c.dot(xp) + plant.d * u_in + noise_held;
        dx.head(np) = plant.a * xp + plant.b * u_in;
        Eigen::VectorXd dxh(n + 1);
        if (output_based) {
            eso_rhs(d, x.tail(n + 1), u, y_meas, dxh);
        } else {
            eso_rhs(d, x.tail(n + 1), -u, refs[0] - y_meas, dxh);
        }
        dx.tail(n + 1) = dxh;
    };

    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * sc.dt;
        const double half = 0.5 * sc.dt;
        dist_held = (sc.disturbance.t_on && t >= *sc.disturbance.t_on - half) ? sc.disturbance.amplitude : 0.0;
        noise_held = (sc.noise.t_on && t >= *sc.noise.t_on - half) ? sc.noise.std_dev * gauss(rng) : 0.0;

        const double u = control(t, z);
        if (delay_steps > 0) {
            delayed_input = input_buffer[buffer_head];
            input_buffer[buffer_head] = u + dist_held;
            buffer_head = (buffer_head + 1) % delay_steps;
        }
        const double y = plant.c.dot(z.head(np)) + plant.d * plant_input(u);
        tr.t.push_back(t);
        tr.r.push_back(refs[0]);
        tr.y.push_back(y);
        tr.u.push_back(u);
        tr.e.push_back(refs[0] - y);
        tr.xhat.emplace_back(z.tail(n + 1));

        if (!std::isfinite(y) || std::abs(y) > kDivergenceBound) {
            tr.status = SimStatus::diverged;
            tr.diverged_at = t;
            break;
        }
        if (k == steps) {
            break;
        }
        z = rk4(z, t, sc.dt, rhs);
    }
    tr.metrics = compute_metrics(tr, sc);
    return tr;
}

SimMetrics compute_metrics(const SimTrace& tr, const Scenario& sc) {
    SimMetrics m;
    if (tr.t.empty()) {
        return m;
    }
    std::vector<double> abs_e(tr.e.size()), u_sq(tr.u.size());
    std::transform(tr.e.begin(), tr.e.end(), abs_e.begin(), [](double v) { return std::abs(v); });
    std::transform(tr.u.begin(), tr.u.end(), u_sq.begin(), [](double v) { return v * v; });
    m.iae = integrate_trapz(tr.t, abs_e);
    m.control_energy = integrate_trapz(tr.t, u_sq);

    const double quiet = sc.quiet_end();
    const double from = sc.rms_from.value_or(0.5 * quiet);
    const double to = sc.rms_to.value_or(quiet);
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        if (tr.t[i] >= from - 1e-12 && tr.t[i] <= to + 1e-12) {
            acc += tr.e[i] * tr.e[i];
            ++count;
        }
    }
    m.rms_error_window = count > 0 ? std::sqrt(acc / static_cast<double>(count)) : 0.0;

    if (sc.reference.kind == ReferenceSpec::Kind::filtered_step && sc.reference.amplitude != 0.0) {
        const double target = sc.reference.amplitude;
        const double band = 0.02 * std::abs(target);
        double peak = -std::numeric_limits<double>::infinity();
        std::optional<double> last_outside;
        bool any = false;
        for (std::size_t i = 0; i < tr.t.size() && tr.t[i] <= quiet + 1e-12; ++i) {
            any = true;
            peak = std::max(peak, tr.y[i] * (target > 0 ? 1.0 : -1.0));
            if (std::abs(tr.y[i] - target) > band) {
                last_outside = i + 1 < tr.t.size() ? tr.t[i + 1] : tr.t[i];
            }
        }
        if (any) {
            m.overshoot_pct = std::max(0.0, (peak - std::abs(target)) / std::abs(target) * 100.0);
            m.settling_time_2pct = last_outside.value_or(0.0);
        }
    }
    return m;
}

std::vector<SweepItem> sweep(const Scenario& tmpl, SweepParam param, std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("sweep needs at least one value");
    }
    std::vector<SweepItem> out;
    out.reserve(values.size());
    for (double v : values) {
        SweepItem item;
        item.value = v;
        try {
            Scenario sc = tmpl;
            DesignParams p = tmpl.controller.design.params;
            (param == SweepParam::k_eso ? p.k_eso : p.omega_cl) = v;
            const AdrcDesign d = make_design(p);
            sc.controller = tmpl.controller.scheme == Scheme::eadrc
                                ? eadrc_controller(d)
                                : oadrc_controller(d, tmpl.controller.variant.case_id);
            item.trace = simulate(sc);
        } catch (const std::exception& ex) {
            item.error = ex.what();
        }
        out.push_back(std::move(item));
    }
    return out;
}

}  // namespace adrc
