#include "adrc/export.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace adrc {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string bode_csv(std::span<const BodePoint> points) {
    std::string out = "omega_rad_s,mag_db,phase_deg\n";
    for (const auto& p : points) {
        out += format_double(p.omega);
        out += ',';
        out += format_double(p.mag_db);
        out += ',';
        out += format_double(p.phase_deg);
        out += '\n';
    }
    return out;
}

std::string trace_csv(const SimTrace& tr) {
    std::string out = "t,r,y,u,e\n";
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        for (const auto* col : {&tr.t, &tr.r, &tr.y, &tr.u, &tr.e}) {
            if (col != &tr.t) {
                out += ',';
            }
            out += format_double((*col)[i]);
        }
        out += '\n';
    }
    return out;
}

nlohmann::json to_json(const Polynomial& p) {
    auto arr = nlohmann::json::array();
    for (double c : p.coeffs()) {
        arr.push_back(c);
    }
    if (arr.empty()) {
        arr.push_back(0.0);
    }
    return arr;
}

nlohmann::json to_json(const RationalTf& g) {
    return {{"num", to_json(g.num())}, {"den", to_json(g.den())}, {"delay", g.delay()}};
}

namespace {

nlohmann::json opt(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const Margins& m) {
    return {{"gain_margin_db", opt(m.gain_margin_db)},
            {"phase_margin_deg", opt(m.phase_margin_deg)},
            {"gain_crossover_rad_s", opt(m.gain_crossover)},
            {"phase_crossover_rad_s", opt(m.phase_crossover)}};
}

nlohmann::json to_json(const SimMetrics& m) {
    return {{"overshoot_pct", opt(m.overshoot_pct)},
            {"settling_time_2pct", opt(m.settling_time_2pct)},
            {"iae", m.iae},
            {"control_energy", m.control_energy},
            {"rms_error_window", m.rms_error_window}};
}

nlohmann::json to_json(const AdrcDesign& d) {
    nlohmann::json acl = nlohmann::json::array();
    for (Eigen::Index r = 0; r < d.a_cl.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < d.a_cl.cols(); ++c) {
            row.push_back(d.a_cl(r, c));
        }
        acl.push_back(std::move(row));
    }
    return {{"n", d.params.n},
            {"b0", d.params.b0},
            {"omega_cl", d.params.omega_cl},
            {"k_eso", d.params.k_eso},
            {"k", d.k},
            {"l", d.l},
            {"a_cl", std::move(acl)}};
}

nlohmann::json to_json(const RealizabilityReport& r) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : r.entries) {
        entries.push_back({{"name", e.name},
                           {"num_degree", e.num_degree},
                           {"den_degree", e.den_degree},
                           {"properness", std::string(to_string(e.properness))}});
    }
    return {{"transfer_functions", std::move(entries)},
            {"g_fb_has_integrator", r.g_fb_has_integrator},
            {"g_ff_zero_dc", r.g_ff_zero_dc},
            {"derivative_inputs", r.derivative_inputs},
            {"modules", r.modules}};
}

RationalTf rational_tf_from_json(const nlohmann::json& j) {
    const auto num = j.at("num").get<std::vector<double>>();
    const auto den = j.at("den").get<std::vector<double>>();
    const double delay = j.value("delay", 0.0);
    return RationalTf(Polynomial(num), Polynomial(den), delay);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace adrc
