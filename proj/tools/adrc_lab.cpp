#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "adrc/advise.hpp"
#include "adrc/design.hpp"
#include "adrc/export.hpp"
#include "adrc/loopan.hpp"
#include "adrc/presets.hpp"
#include "adrc/sim.hpp"
#include "adrc/tfsynth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace adrc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUsage = 2;

// Raised for anything the user can fix by changing flags.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonFlags {
    std::string preset;
    std::string plant;
    std::string plant_num;
    std::string plant_den;
    double plant_delay = 0.0;
    std::optional<int> n;
    std::optional<double> b0;
    std::optional<double> wcl;
    std::optional<double> keso;
    std::string out;
};

struct ScenarioFlags {
    std::string schemes;
    std::string ref;
    std::optional<double> tau;
    std::optional<double> amp;
    std::optional<double> ref_omega;
    std::optional<double> t_end;
    std::optional<double> dt;
    std::optional<double> dist_amp;
    std::optional<double> dist_on;
    bool no_dist = false;
    std::optional<double> noise_std;
    std::optional<double> noise_on;
    std::optional<std::uint64_t> seed;
    bool no_noise = false;
    std::optional<double> rms_from;
    std::optional<double> rms_to;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--preset", f.preset, "named configuration (fig4a, fig5, fig6, fig7, fig10, table2, ...)");
    auto* plant = cmd->add_option("--plant", f.plant, "plant id: P1, P2 or P3");
    auto* num = cmd->add_option("--plant-num", f.plant_num, "custom plant numerator, ascending, comma separated");
    auto* den = cmd->add_option("--plant-den", f.plant_den, "custom plant denominator, ascending, comma separated");
    cmd->add_option("--plant-delay", f.plant_delay, "custom plant dead time [s]")->needs(num);
    num->needs(den);
    den->needs(num);
    plant->excludes(num)->excludes(den);
    cmd->add_option("--n", f.n, "ADRC order (default: preset, else plant relative degree)");
    cmd->add_option("--b0", f.b0, "input gain estimate (default 1)");
    cmd->add_option("--wcl", f.wcl, "closed-loop bandwidth omega_cl [rad/s] (default 3)");
    cmd->add_option("--keso", f.keso, "observer/controller bandwidth ratio k_eso (default 8)");
    cmd->add_option("--out", f.out, "output directory (default $ADRC_LAB_OUT, else ./adrc_out)");
}

void add_scenario(CLI::App* cmd, ScenarioFlags& f) {
    cmd->add_option("--schemes", f.schemes, "comma list of eADRC, A, A1.., B (default: preset, else eADRC,A,B)");
    cmd->add_option("--ref", f.ref, "reference: step (filtered) or sin")->check(CLI::IsMember({"step", "sin"}));
    cmd->add_option("--tau", f.tau, "reference filter time constant [s]");
    cmd->add_option("--amp", f.amp, "reference amplitude");
    cmd->add_option("--ref-omega", f.ref_omega, "sinusoid frequency [rad/s]");
    cmd->add_option("--tend", f.t_end, "simulation horizon [s]");
    cmd->add_option("--dt", f.dt, "RK4 step [s]");
    cmd->add_option("--dist-amp", f.dist_amp, "input step disturbance amplitude");
    cmd->add_option("--dist-on", f.dist_on, "disturbance onset [s]");
    cmd->add_flag("--no-dist", f.no_dist, "disable the disturbance");
    cmd->add_option("--noise-std", f.noise_std, "measurement noise standard deviation");
    cmd->add_option("--noise-on", f.noise_on, "noise onset [s]");
    cmd->add_option("--seed", f.seed, "noise seed");
    cmd->add_flag("--no-noise", f.no_noise, "disable measurement noise");
    cmd->add_option("--rms-from", f.rms_from, "RMS error window start [s]");
    cmd->add_option("--rms-to", f.rms_to, "RMS error window end [s]");
}

std::vector<double> parse_coeffs(const std::string& s, const char* what) {
    try {
        return parse_values(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(what) + ": " + e.what());
    }
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Fully resolved configuration shared by every command.
struct Run {
    std::string command;
    const Preset* preset = nullptr;
    std::string plant_id;   // empty for custom plants
    PlantModel plant;
    bool has_plant = false;
    DesignParams params;
    fs::path out;
    json extra = json::object();

    [[nodiscard]] json config() const {
        json plant_json = nullptr;
        if (has_plant) {
            plant_json = to_json(plant.tf);
            plant_json["id"] = plant_id.empty() ? json(nullptr) : json(plant_id);
        }
        json j{{"command", command},
               {"preset", preset ? json(preset->id) : json(nullptr)},
               {"plant", plant_json},
               {"design",
                {{"n", params.n}, {"b0", params.b0}, {"omega_cl", params.omega_cl}, {"k_eso", params.k_eso}}},
               {"out", out.generic_string()}};
        for (const auto& [k, v] : extra.items()) {
            j[k] = v;
        }
        return j;
    }
};

Run resolve(const std::string& command, const CommonFlags& f, bool needs_plant = true) {
    Run run;
    run.command = command;
    if (!f.preset.empty()) {
        try {
            run.preset = &find_preset(f.preset);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (!f.plant_num.empty()) {
            throw UsageError("--preset and a custom plant are mutually exclusive");
        }
    }
    std::optional<int> plant_order;
    if (!f.plant_num.empty()) {
        const Polynomial num(parse_coeffs(f.plant_num, "--plant-num"));
        const Polynomial den(parse_coeffs(f.plant_den, "--plant-den"));
        if (den.is_zero()) {
            throw UsageError("--plant-den must not be zero");
        }
        try {
            run.plant = {RationalTf(num, den, f.plant_delay), "custom"};
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("custom plant: ") + e.what());
        }
        plant_order = den.degree() - num.degree();
    } else if (!f.plant.empty() || run.preset) {
        run.plant_id = f.plant.empty() ? run.preset->plant : f.plant;
        try {
            run.plant = plant_by_id(run.plant_id);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        plant_order = run.plant.tf.den().degree() - run.plant.tf.num().degree();
    } else if (needs_plant) {
        throw UsageError("a plant is required: --plant, --plant-num/--plant-den or --preset");
    }
    run.has_plant = plant_order.has_value();
    if (plant_order) {
        try {
            validate(run.plant);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }

    DesignParams p{1, 1.0, 3.0, 8.0};
    if (run.preset) {
        p = run.preset->design;
    }
    const bool preset_plant = run.preset && (f.plant.empty() || f.plant == run.preset->plant);
    if (plant_order && !preset_plant) {
        p.n = *plant_order;
    }
    if (f.n) p.n = *f.n;
    if (f.b0) p.b0 = *f.b0;
    if (f.wcl) p.omega_cl = *f.wcl;
    if (f.keso) p.k_eso = *f.keso;
    try {
        validate(p);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    run.params = p;

    if (!f.out.empty()) {
        run.out = f.out;
    } else if (const char* env = std::getenv("ADRC_LAB_OUT"); env && *env) {
        run.out = env;
    } else {
        run.out = "adrc_out";
    }
    return run;
}

void emit_json(const Run& run, const std::string& name, json body) {
    body["config"] = run.config();
    write_file_atomic(run.out / name, body.dump(2) + "\n");
}

json design_json(const AdrcDesign& d) { return to_json(d); }

void print_vector(std::ostream& os, const char* name, const std::vector<double>& v) {
    os << name << " = (";
    for (std::size_t i = 0; i < v.size(); ++i) {
        os << (i ? ", " : "") << format_double(v[i]);
    }
    os << ")\n";
}

int cmd_design(const CommonFlags& f) {
    Run run = resolve("design", f, false);
    const AdrcDesign d = make_design(run.params);
    for (const auto& w : design_warnings(run.params)) {
        std::cerr << "warning: " << w << "\n";
    }
    print_vector(std::cout, "k", d.k);
    print_vector(std::cout, "l", d.l);
    std::cout << "A_CL =\n" << d.a_cl << "\n";
    json body{{"design", design_json(d)}, {"warnings", design_warnings(run.params)}};
    emit_json(run, "design.json", std::move(body));
    return kExitOk;
}

json tf_file(const RationalTf& g) { return to_json(g); }

int cmd_tf(const CommonFlags& f, const std::string& case_id) {
    Run run = resolve("tf", f, false);
    run.extra["case"] = case_id;
    const AdrcDesign d = make_design(run.params);
    GainVariant v;
    try {
        v = make_variant(d, case_id);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const TfSet t = synth_tfset(d, v);
    emit_json(run, "g_fb.json", tf_file(t.g_fb));
    emit_json(run, "g_pf_bar.json", tf_file(t.g_pf_bar));
    emit_json(run, "g_pf.json", tf_file(t.g_pf));
    emit_json(run, "g_ff.json", tf_file(t.g_ff));
    emit_json(run, "g_pf_mod.json", tf_file(t.g_pf_mod));
    emit_json(run, "g_r.json", tf_file(RationalTf(t.g_r, Polynomial::constant(1.0))));
    const RealizabilityReport rep = realizability_report(t);
    emit_json(run, "realizability.json", {{"report", to_json(rep)}});
    write_file_atomic(run.out / "report.txt", rep.to_text());
    std::cout << "G_FB     = (" << to_string(t.g_fb.num()) << ") / (" << to_string(t.g_fb.den()) << ")\n";
    std::cout << "Gbar_PF  = (" << to_string(t.g_pf_bar.num()) << ") / (" << to_string(t.g_pf_bar.den()) << ")\n";
    std::cout << "G_R      = " << to_string(t.g_r) << "\n";
    std::cout << "G_FF     = (" << to_string(t.g_ff.num()) << ") / (" << to_string(t.g_ff.den()) << ")\n";
    std::cout << "Gmod_PF  = (" << to_string(t.g_pf_mod.num()) << ") / (" << to_string(t.g_pf_mod.den()) << ")\n\n";
    std::cout << rep.to_text();
    return kExitOk;
}

int cmd_check_equivalence(const CommonFlags& f, std::optional<double> perturb_l) {
    Run run = resolve("check-equivalence", f, false);
    run.extra["perturb_l"] = opt_json(perturb_l);
    const AdrcDesign d = make_design(run.params);
    std::vector<double> l = d.l;
    if (perturb_l) {
        l.back() *= 1.0 + *perturb_l;
    }
    const RationalTf g_fb = synth_g_fb(d);
    const RationalTf e = synth_eadrc_tf(d, l);
    const EquivalenceResult r = check_equivalence(g_fb, e, logspace(1e-3, 1e3, 400));
    std::cout << "max coefficient deviation: " << format_double(r.max_coeff_deviation) << "\n"
              << "max grid deviation:        " << format_double(r.max_grid_deviation) << " at omega = "
              << format_double(r.worst_omega) << " rad/s\n"
              << (r.passed ? "equivalent" : "NOT equivalent") << "\n";
    emit_json(run, "equivalence.json",
              {{"max_coeff_deviation", r.max_coeff_deviation},
               {"max_grid_deviation", r.max_grid_deviation},
               {"worst_omega_rad_s", r.worst_omega},
               {"passed", r.passed},
               {"g_fb", to_json(g_fb)},
               {"eadrc", to_json(e)}});
    return r.passed ? kExitOk : kExitViolated;
}

int cmd_verify_tables(const CommonFlags& f) {
    Run run = resolve("verify-tables", f, false);
    const std::vector<TableCheck> rows = verify_tables(run.params.omega_cl, run.params.k_eso, run.params.b0);
    bool ok = true;
    json arr = json::array();
    for (const auto& c : rows) {
        const char* verdict = c.matches ? "match" : (c.known_misprint ? "MISPRINT" : "MISMATCH");
        std::cout << c.table << "  " << c.quantity << ": " << verdict
                  << " (rel. deviation " << format_double(c.deviation) << ")\n";
        if (!c.matches && c.known_misprint) {
            std::cout << "      printed: " << to_string(c.printed) << "\n"
                      << "      derived: " << to_string(c.derived) << "\n";
        }
        // A misprint that suddenly matches means the check itself is broken.
        if (c.matches == c.known_misprint) {
            ok = false;
        }
        arr.push_back({{"table", c.table},
                       {"quantity", c.quantity},
                       {"printed", to_json(c.printed)},
                       {"derived", to_json(c.derived)},
                       {"deviation", c.deviation},
                       {"matches", c.matches},
                       {"known_misprint", c.known_misprint}});
    }
    emit_json(run, "tables.json", {{"rows", arr}, {"passed", ok}});
    return ok ? kExitOk : kExitViolated;
}

// Closed loop for either scheme. The error-based loop is built on G_FB only
// after its own controller transfer function has been checked against it.
struct Loop {
    AdrcDesign design;
    TfSet tfs;
    LoopSet loops;
};

Loop build_loop(const Run& run, const std::string& scheme) {
    const AdrcDesign d = make_design(run.params);
    TfSet t = synth_tfset(d, make_variant(d, "A"));
    if (scheme == "eadrc") {
        const EquivalenceResult r = check_equivalence(t.g_fb, synth_eadrc_tf(d), logspace(1e-3, 1e3, 400));
        if (!r.passed) {
            throw std::logic_error("error-based controller differs from G_FB (max deviation " +
                                   format_double(r.max_grid_deviation) + ")");
        }
    }
    LoopSet loops = build_loopset(t, d, run.plant);
    return {d, std::move(t), std::move(loops)};
}

int cmd_bode(const CommonFlags& f, const std::string& which, const std::string& scheme, double wmin, double wmax,
             std::size_t points) {
    Run run = resolve("bode", f);
    run.extra["tf"] = which;
    run.extra["scheme"] = scheme;
    run.extra["grid"] = {{"w_min", wmin}, {"w_max", wmax}, {"points", points}};
    if (!(wmin > 0.0) || !(wmax > wmin) || points < 2) {
        throw UsageError("frequency grid needs 0 < w_min < w_max and at least 2 points");
    }
    const Loop loop = build_loop(run, scheme);
    const FrequencyResponse* g = nullptr;
    if (which == "ol") g = &loop.loops.g_ol;
    else if (which == "yd") g = &loop.loops.g_yd;
    else if (which == "un") g = &loop.loops.g_un;
    else if (which == "er-oA") g = &loop.loops.g_er_o_case_a;
    else if (which == "er-oB") g = &loop.loops.g_er_o_case_b;
    else g = &loop.loops.g_er_e;
    const std::vector<double> grid = logspace(wmin, wmax, points);
    std::vector<BodePoint> pts;
    try {
        pts = bode(*g, grid);
    } catch (const PoleOnAxisError& e) {
        std::cerr << "error: pole on the frequency grid at omega = " << format_double(e.omega()) << " rad/s\n";
        return kExitViolated;
    }
    const fs::path file = run.out / ("bode_" + which + "_" + scheme + ".csv");
    write_file_atomic(file, bode_csv(pts));
    std::cout << "wrote " << file.generic_string() << " (" << pts.size() << " points)\n";
    return kExitOk;
}

int cmd_margins(const CommonFlags& f, const std::string& scheme) {
    Run run = resolve("margins", f);
    run.extra["scheme"] = scheme;
    const Loop loop = build_loop(run, scheme);
    const Margins m = margins(loop.loops.g_ol);
    const auto show = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("none"); };
    std::cout << "gain margin:     " << show(m.gain_margin_db) << " dB at " << show(m.phase_crossover) << " rad/s\n"
              << "phase margin:    " << show(m.phase_margin_deg) << " deg at " << show(m.gain_crossover)
              << " rad/s\n";
    if (m.phase_margin_deg && *m.phase_margin_deg < 0.0) {
        std::cout << "closed loop is unstable (negative phase margin)\n";
    }
    emit_json(run, "margins_" + scheme + ".json", {{"margins", to_json(m)}});
    return kExitOk;
}

struct SimSetup {
    Run run;
    AdrcDesign design;
    std::vector<Scenario> scenarios;
};

std::optional<double> pick(std::optional<double> flag, std::optional<double> preset) {
    return flag ? flag : preset;
}

SimSetup resolve_sim(const std::string& command, const CommonFlags& cf, const ScenarioFlags& f) {
    SimSetup s{resolve(command, cf), {}, {}};
    Run& run = s.run;
    s.design = make_design(run.params);

    Preset base;
    base.reference = ReferenceSpec::filtered_step(0.1);
    base.schemes = {"eADRC", "A", "B"};
    if (run.preset) {
        base = *run.preset;
    }
    ReferenceSpec ref = base.reference;
    if (f.ref == "sin") {
        ref = ReferenceSpec::sinusoid(ref.amplitude, ref.omega);
    } else if (f.ref == "step") {
        ref = ReferenceSpec::filtered_step(ref.tau, ref.amplitude);
    }
    if (f.tau) ref.tau = *f.tau;
    if (f.amp) ref.amplitude = *f.amp;
    if (f.ref_omega) ref.omega = *f.ref_omega;

    Preset p = base;
    p.reference = ref;
    if (f.t_end) p.t_end = *f.t_end;
    if (f.dt) p.dt = *f.dt;
    if (f.dist_amp) p.disturbance.amplitude = *f.dist_amp;
    p.disturbance.t_on = f.no_dist ? std::nullopt : pick(f.dist_on, base.disturbance.t_on);
    if (f.noise_std) p.noise.std_dev = *f.noise_std;
    if (f.seed) p.noise.seed = *f.seed;
    p.noise.t_on = f.no_noise ? std::nullopt : pick(f.noise_on, base.noise.t_on);
    p.rms_from = pick(f.rms_from, base.rms_from);
    p.rms_to = pick(f.rms_to, base.rms_to);
    const std::vector<std::string> schemes = f.schemes.empty() ? base.schemes : split_list(f.schemes);
    if (schemes.empty()) {
        throw UsageError("--schemes must name at least one scheme");
    }

    for (const auto& sch : schemes) {
        try {
            Scenario sc = make_scenario(p, run.plant, s.design, sch);
            validate(sc);
            s.scenarios.push_back(std::move(sc));
        } catch (const std::invalid_argument& e) {
            throw UsageError(sch + ": " + e.what());
        }
    }

    run.extra["schemes"] = schemes;
    run.extra["reference"] = {{"kind", ref.kind == ReferenceSpec::Kind::sinusoid ? "sin" : "step"},
                              {"amplitude", ref.amplitude},
                              {"tau", ref.tau},
                              {"omega", ref.omega}};
    run.extra["disturbance"] = {{"amplitude", p.disturbance.amplitude}, {"t_on", opt_json(p.disturbance.t_on)}};
    run.extra["noise"] = {{"std_dev", p.noise.std_dev}, {"t_on", opt_json(p.noise.t_on)}, {"seed", p.noise.seed}};
    run.extra["t_end"] = p.t_end;
    run.extra["dt"] = p.dt;
    run.extra["rms_window"] = {{"from", opt_json(p.rms_from)}, {"to", opt_json(p.rms_to)}};
    return s;
}

json trace_summary(const SimTrace& tr) {
    return {{"label", tr.label},
            {"status", tr.status == SimStatus::ok ? "ok" : "diverged"},
            {"diverged_at", opt_json(tr.diverged_at)},
            {"metrics", to_json(tr.metrics)}};
}

void print_metrics(const SimTrace& tr) {
    const auto show = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("-"); };
    std::cout << tr.label << ": "
              << (tr.status == SimStatus::ok ? "ok" : "DIVERGED at t = " + show(tr.diverged_at))
              << "  overshoot% " << show(tr.metrics.overshoot_pct) << "  t_s(2%) "
              << show(tr.metrics.settling_time_2pct) << "  IAE " << format_double(tr.metrics.iae) << "  int u^2 "
              << format_double(tr.metrics.control_energy) << "  RMS e " << format_double(tr.metrics.rms_error_window)
              << "\n";
}

int cmd_simulate(const CommonFlags& cf, const ScenarioFlags& f) {
    const SimSetup s = resolve_sim("simulate", cf, f);
    json results = json::array();
    bool any_ok = false;
    for (const auto& sc : s.scenarios) {
        const SimTrace tr = simulate(sc);
        write_file_atomic(s.run.out / ("trace_" + tr.label + ".csv"), trace_csv(tr));
        print_metrics(tr);
        results.push_back(trace_summary(tr));
        any_ok = any_ok || tr.status == SimStatus::ok;
    }
    emit_json(s.run, "metrics.json", {{"results", results}});
    return any_ok ? kExitOk : kExitViolated;
}

int cmd_sweep(const CommonFlags& cf, const ScenarioFlags& f, const std::string& param, const std::string& values) {
    SimSetup s = resolve_sim("sweep", cf, f);
    SweepParam sp = param == "wcl" ? SweepParam::omega_cl : SweepParam::k_eso;
    std::vector<double> vals;
    if (!values.empty()) {
        vals = parse_values(values);
    } else if (s.run.preset && s.run.preset->sweep_param) {
        vals = s.run.preset->sweep_values;
        if (param.empty()) {
            sp = *s.run.preset->sweep_param;
        }
    } else {
        throw UsageError("--values is required without a sweep preset");
    }
    const std::string pname = sp == SweepParam::omega_cl ? "wcl" : "keso";
    for (double v : vals) {
        DesignParams p = s.run.params;
        (sp == SweepParam::omega_cl ? p.omega_cl : p.k_eso) = v;
        try {
            validate(p);
        } catch (const std::invalid_argument& e) {
            throw UsageError("--values: " + std::string(e.what()));
        }
    }
    s.run.extra["sweep"] = {{"param", pname}, {"values", vals}};

    std::string summary = "scheme,param,value,status,overshoot_pct,settling_time_2pct,iae,control_energy,rms_error_window\n";
    json items = json::array();
    bool any_ok = false;
    for (const auto& sc : s.scenarios) {
        const std::vector<SweepItem> res = sweep(sc, sp, vals);
        for (std::size_t i = 0; i < res.size(); ++i) {
            const SweepItem& it = res[i];
            const std::string label = sc.controller.label();
            json entry{{"scheme", label}, {"value", it.value}, {"error", it.error}};
            std::string status = "error";
            std::string cols = ",,,,";
            if (it.trace) {
                const SimTrace& tr = *it.trace;
                write_file_atomic(s.run.out / ("sweep_" + label + "_" + pname + "_" + std::to_string(i) + ".csv"),
                                  trace_csv(tr));
                status = tr.status == SimStatus::ok ? "ok" : "diverged";
                any_ok = any_ok || tr.status == SimStatus::ok;
                const auto o = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
                cols = o(tr.metrics.overshoot_pct) + "," + o(tr.metrics.settling_time_2pct) + "," +
                       format_double(tr.metrics.iae) + "," + format_double(tr.metrics.control_energy) + "," +
                       format_double(tr.metrics.rms_error_window);
                entry["result"] = trace_summary(tr);
                std::cout << pname << " = " << format_double(it.value) << "  ";
                print_metrics(tr);
            } else {
                std::cout << pname << " = " << format_double(it.value) << "  " << label << ": error: " << it.error
                          << "\n";
            }
            summary += label + "," + pname + "," + format_double(it.value) + "," + status + "," + cols + "\n";
            items.push_back(std::move(entry));
        }
    }
    write_file_atomic(s.run.out / "summary.csv", summary);
    emit_json(s.run, "summary.json", {{"items", items}, {"any_ok", any_ok}});
    if (!any_ok) {
        std::cerr << "no sweep item completed without divergence\n";
    }
    return any_ok ? kExitOk : kExitViolated;
}

bool yes_no(const std::string& s, const char* flag) {
    if (s == "yes") return true;
    if (s == "no") return false;
    throw UsageError(std::string(flag) + " must be yes or no");
}

int cmd_advise(const std::string& derivs, const std::string& transient, const std::string& simple, int m) {
    AdviseAnswers a;
    try {
        a.derivatives = parse_availability(derivs);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    a.transient_shaping = yes_no(transient, "--transient-shaping");
    a.simplicity_priority = yes_no(simple, "--simplicity");
    a.num_derivatives = m;
    Advice adv;
    try {
        adv = advise(a);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::cout << "recommended: " << adv.scheme << "\n\n" << adv.rationale << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ADRC design, synthesis, loop analysis and simulation lab.\n"
                 "Transfer-function JSON: {num: [c0, c1, ...], den: [...], delay: seconds}, ascending powers of s."};
    app.require_subcommand(1);

    CommonFlags cf;
    ScenarioFlags sf;

    auto* design = app.add_subcommand("design", "controller/observer gains and A_CL");
    add_common(design, cf);

    std::string case_id = "A";
    auto* tf = app.add_subcommand("tf", "synthesize G_FB, Gbar_PF, G_R, G_FF, Gmod_PF and a realizability report");
    add_common(tf, cf);
    tf->add_option("--case", case_id, "reference-derivative case: A, A1.., B");

    std::optional<double> perturb;
    auto* eq = app.add_subcommand("check-equivalence", "error-based controller vs G_FB, coefficientwise and on a grid");
    add_common(eq, cf);
    eq->add_option("--perturb-l", perturb, "test hook: scale the last observer gain by (1 + value)");

    auto* tables = app.add_subcommand("verify-tables", "compare the printed n = 1 and n = 2 closed forms");
    add_common(tables, cf);

    std::string which = "er-e";
    std::string scheme = "oadrc";
    double wmin = 1e-3, wmax = 1e3;
    std::size_t points = 1000;
    auto* bode_cmd = app.add_subcommand("bode", "Bode data of a closed-loop transfer function");
    add_common(bode_cmd, cf);
    bode_cmd->add_option("--tf", which, "ol, yd, un, er-oA, er-oB or er-e")
        ->check(CLI::IsMember({"ol", "yd", "un", "er-oA", "er-oB", "er-e"}));
    bode_cmd->add_option("--scheme", scheme, "oadrc or eadrc")->check(CLI::IsMember({"oadrc", "eadrc"}));
    bode_cmd->add_option("--wmin", wmin, "lowest frequency [rad/s]");
    bode_cmd->add_option("--wmax", wmax, "highest frequency [rad/s]");
    bode_cmd->add_option("--points", points, "log-spaced grid points");

    auto* margins_cmd = app.add_subcommand("margins", "gain and phase margins of the open loop");
    add_common(margins_cmd, cf);
    margins_cmd->add_option("--scheme", scheme, "oadrc or eadrc")->check(CLI::IsMember({"oadrc", "eadrc"}));

    auto* sim = app.add_subcommand("simulate", "time-domain simulation, one trace per scheme");
    add_common(sim, cf);
    add_scenario(sim, sf);

    std::string param;
    std::string values;
    auto* sw = app.add_subcommand("sweep", "simulations over k_eso or omega_cl");
    add_common(sw, cf);
    add_scenario(sw, sf);
    sw->add_option("--param", param, "keso or wcl")->check(CLI::IsMember({"keso", "wcl"}));
    sw->add_option("--values", values, "start:stop:count or a comma list");

    std::string derivs, transient, simple;
    int num_derivs = 1;
    auto* adv = app.add_subcommand("advise", "recommend a control structure");
    adv->add_option("--derivatives", derivs, "available reference derivatives: none, partial or all")->required();
    adv->add_option("--transient-shaping", transient, "transient shaping needed: yes or no")->required();
    adv->add_option("--simplicity", simple, "implementation simplicity is the priority: yes or no")->required();
    adv->add_option("--num-derivatives", num_derivs, "available derivatives for the partial case");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*design) return cmd_design(cf);
        if (*tf) return cmd_tf(cf, case_id);
        if (*eq) return cmd_check_equivalence(cf, perturb);
        if (*tables) return cmd_verify_tables(cf);
        if (*bode_cmd) return cmd_bode(cf, which, scheme, wmin, wmax, points);
        if (*margins_cmd) return cmd_margins(cf, scheme);
        if (*sim) return cmd_simulate(cf, sf);
        if (*sw) return cmd_sweep(cf, sf, param, values);
        if (*adv) return cmd_advise(derivs, transient, simple, num_derivs);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::logic_error& e) {
        std::cerr << "internal check failed: " << e.what() << "\n";
        return kExitViolated;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitViolated;
    }
    return kExitUsage;
}
