#include "adrc/presets.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace adrc {

namespace {

Preset base(std::string id, std::string description, std::string plant, int n, double wcl, double keso) {
    Preset p;
    p.id = std::move(id);
    p.description = std::move(description);
    p.plant = std::move(plant);
    p.design = {n, 1.0, wcl, keso};
    p.reference = ReferenceSpec::filtered_step(0.1);
    p.schemes = {"eADRC", "A", "B"};
    return p;
}

Preset sweep_preset(std::string id, std::string description, std::string plant, int n, double wcl,
                    SweepParam param, std::vector<double> values) {
    Preset p = base(std::move(id), std::move(description), std::move(plant), n, wcl, 8.0);
    p.sweep_param = param;
    p.sweep_values = std::move(values);
    return p;
}

Preset time_domain(std::string id, std::string description, std::string plant, int n) {
    Preset p = base(std::move(id), std::move(description), std::move(plant), n, 3.0, 8.0);
    p.reference = ReferenceSpec::filtered_step(0.2);
    p.disturbance = {0.5, 10.0};
    p.noise = {0.01, 15.0, 1};
    p.t_end = 20.0;
    return p;
}

std::vector<Preset> build_presets() {
    std::vector<Preset> v;
    v.push_back(base("fig4a", "tracking-error frequency responses, first-order plant with dead time",
                     "P1", 1, 3.0, 8.0));
    v.push_back(base("fig4b", "tracking-error frequency responses, second-order plant", "P2", 2, 3.0, 8.0));
    const std::vector<double> keso{6, 9, 12, 15, 18, 21, 24};
    v.push_back(sweep_preset("fig5", "k_eso sweep 6..24 at omega_cl = 3, second-order plant", "P2", 2,
                             3.0, SweepParam::k_eso, keso));
    v.push_back(sweep_preset("fig5-p1-keso", "k_eso sweep 6..24 at omega_cl = 1.5, delayed plant", "P1",
                             1, 1.5, SweepParam::k_eso, keso));
    v.push_back(sweep_preset("fig5-p1-wcl", "omega_cl sweep 1.5..4.5 at k_eso = 8, delayed plant", "P1",
                             1, 1.5, SweepParam::omega_cl, {1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5}));
    v.push_back(sweep_preset("fig5-p2-keso", "k_eso sweep 6..24 at omega_cl = 3, second-order plant",
                             "P2", 2, 3.0, SweepParam::k_eso, keso));
    v.push_back(sweep_preset("fig5-p2-wcl", "omega_cl sweep 3..9 at k_eso = 8, second-order plant", "P2",
                             2, 3.0, SweepParam::omega_cl, {3, 4, 5, 6, 7, 8, 9}));
    v.push_back(time_domain("fig6", "step, input disturbance at 10 s, noise from 15 s, second-order plant",
                            "P2", 2));
    v.push_back(time_domain("fig7", "step, input disturbance at 10 s, noise from 15 s, delayed plant",
                            "P1", 1));
    {
        Preset p = base("fig10", "reference derivative ablation, third-order plant, r = sin t", "P3", 3,
                        2.5, 5.0);
        p.reference = ReferenceSpec::sinusoid(1.0, 1.0);
        p.t_end = 20.0;
        p.rms_from = 10.0;
        p.rms_to = 20.0;
        p.schemes = {"A", "A1", "A2", "B"};
        v.push_back(std::move(p));
    }
    v.push_back(base("table2", "transfer functions for n = 1", "P1", 1, 3.0, 8.0));
    v.push_back(base("table3", "transfer functions for n = 2", "P2", 2, 3.0, 8.0));
    return v;
}

double parse_number(std::string_view s) {
    while (!s.empty() && s.front() == ' ') {
        s.remove_prefix(1);
    }
    while (!s.empty() && s.back() == ' ') {
        s.remove_suffix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

const std::vector<Preset>& all_presets() {
    static const std::vector<Preset> presets = build_presets();
    return presets;
}

const Preset& find_preset(std::string_view id) {
    for (const auto& p : all_presets()) {
        if (p.id == id) {
            return p;
        }
    }
    throw std::invalid_argument("unknown preset '" + std::string(id) + "'");
}

PlantModel plant_by_id(std::string_view id) {
    if (id == "P1") {
        return plant_p1();
    }
    if (id == "P2") {
        return plant_p2();
    }
    if (id == "P3") {
        return plant_p3();
    }
    throw std::invalid_argument("unknown plant '" + std::string(id) + "' (expected P1, P2 or P3)");
}

std::vector<double> parse_values(std::string_view spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string_view::npos) {
        const auto c1 = spec.find(':');
        const auto c2 = spec.find(':', c1 + 1);
        if (c2 == std::string_view::npos) {
            throw std::invalid_argument("range must be start:stop:count");
        }
        const double start = parse_number(spec.substr(0, c1));
        const double stop = parse_number(spec.substr(c1 + 1, c2 - c1 - 1));
        const double count_d = parse_number(spec.substr(c2 + 1));
        if (count_d < 1 || count_d != std::floor(count_d)) {
            throw std::invalid_argument("range count must be a positive integer");
        }
        const auto count = static_cast<std::size_t>(count_d);
        for (std::size_t i = 0; i < count; ++i) {
            out.push_back(count == 1 ? start
                                     : start + (stop - start) * static_cast<double>(i) /
                                                   static_cast<double>(count - 1));
        }
        return out;
    }
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const auto next = spec.find(',', pos);
        const auto end = next == std::string_view::npos ? spec.size() : next;
        out.push_back(parse_number(spec.substr(pos, end - pos)));
        if (next == std::string_view::npos) {
            break;
        }
        pos = next + 1;
    }
    return out;
}

Scenario make_scenario(const Preset& p, const PlantModel& plant, const AdrcDesign& d,
                       std::string_view scheme) {
    Scenario sc;
    sc.plant = plant;
    sc.controller = scheme == "eADRC" ? eadrc_controller(d) : oadrc_controller(d, scheme);
    sc.reference = p.reference;
    sc.disturbance = p.disturbance;
    sc.noise = p.noise;
    sc.t_end = p.t_end;
    sc.dt = p.dt;
    sc.rms_from = p.rms_from;
    sc.rms_to = p.rms_to;
    return sc;
}

}  // namespace adrc
