#include <doctest.h>

#include <cmath>
#include <random>

#include "adrc/design.hpp"
#include "adrc/loopan.hpp"
#include "adrc/tfsynth.hpp"

using namespace adrc;

namespace {

const AdrcDesign kFirst = make_design({1, 1.0, 3.0, 8.0});
const AdrcDesign kSecond = make_design({2, 1.0, 3.0, 8.0});

double worst_grid_deviation(const RationalTf& a, const RationalTf& b) {
    double worst = 0.0;
    for (double w : logspace(1e-3, 1e3, 400)) {
        worst = std::max(worst, std::abs(a(w) - b(w)) / std::abs(b(w)));
    }
    return worst;
}

}  // namespace

TEST_CASE("feedback transfer function, first order") {
    const RationalTf g = synth_g_fb(kFirst);
    CHECK(g.num() == Polynomial{1728, 720});
    CHECK(g.den() == Polynomial{0, 51, 1});
    CHECK(g.has_integrator());
}

TEST_CASE("feedback transfer function, second order") {
    const RationalTf g = synth_g_fb(kSecond);
    const double k1 = 9, k2 = 6, l1 = 72, l2 = 1728, l3 = 13824;
    const Polynomial expect{k1 * l3, k1 * l2 + k2 * l3, k1 * l1 + k2 * l2 + l3};
    CHECK(max_rel_coeff_deviation(g.num(), expect) < 1e-12);
    CHECK(max_rel_coeff_deviation(g.den(), Polynomial{0, l2 + k1 + l1 * k2, k2 + l1, 1}) < 1e-12);
}

TEST_CASE("b0 scales the feedback gain") {
    const AdrcDesign d = make_design({2, 4.0, 3.0, 8.0});
    const RationalTf g = synth_g_fb(d);
    const RationalTf g1 = synth_g_fb(kSecond);
    CHECK(max_rel_coeff_deviation(g.num() * 4.0, g1.num()) < 1e-12);
}

TEST_CASE("derivative-free pre-filter core") {
    const RationalTf p = synth_g_pf_bar(kFirst);
    CHECK(max_rel_coeff_deviation(p.num() * 720.0, Polynomial{576, 48, 1}) < 1e-12);
    CHECK(max_rel_coeff_deviation(p.den(), Polynomial{1728.0 / 720.0, 1.0}) < 1e-12);
    CHECK(p.dc_gain() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    for (int n = 1; n <= 4; ++n) {
        const RationalTf q = synth_g_pf_bar(make_design({n, 1.0, 2.0, 6.0}));
        CHECK(q.num().degree() - q.den().degree() == 1);
        CHECK(q.properness() == Properness::improper);
    }
}

TEST_CASE("reference polynomial per case") {
    CHECK(synth_g_r(make_variant(kSecond, "A"), kSecond) == Polynomial{9});
    CHECK(synth_g_r(make_variant(kSecond, "B"), kSecond) == Polynomial{9, 6, 1});
    const AdrcDesign d3 = make_design({3, 1.0, 2.5, 5.0});
    CHECK(synth_g_r(make_variant(d3, "A1"), d3) == Polynomial{d3.k[0], d3.k[1]});
}

TEST_CASE("feedforward high-pass") {
    const RationalTf g = synth_g_ff(kFirst);
    CHECK(g.num() == Polynomial{0, 1});
    CHECK(g.den() == Polynomial{51, 1});
    for (int n = 1; n <= kMaxOrder; ++n) {
        const AdrcDesign d = make_design({n, 2.5, 1.3, 7.0});
        const RationalTf f = synth_g_ff(d);
        CHECK(f.dc_gain() == 0.0);
        CHECK(std::abs(f(1e7)) == doctest::Approx(1.0 / 2.5).epsilon(1e-4));
    }
}

TEST_CASE("modified pre-filter") {
    const RationalTf p = synth_g_pf_mod(kFirst);
    const RationalTf expect(Polynomial{576, 48}, Polynomial{1728, 720});
    CHECK(max_rel_coeff_deviation(p.num(), expect.num()) < 1e-12);
    CHECK(max_rel_coeff_deviation(p.den(), expect.den()) < 1e-12);
    CHECK(p.dc_gain() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("unity DC gain through the case A pre-filter") {
    for (int n = 1; n <= kMaxOrder; ++n) {
        const AdrcDesign d = make_design({n, 1.0, 2.0, 5.0});
        const TfSet t = synth_tfset(d, make_variant(d, "A"));
        CHECK(t.g_pf.num()[0] / t.g_pf.den()[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("degree invariants") {
    for (int n = 1; n <= kMaxOrder; ++n) {
        const AdrcDesign d = make_design({n, 1.0, 3.0, 8.0});
        const TfSet t = synth_tfset(d, make_variant(d, "B"));
        CHECK(t.g_fb.num().degree() == n);
        CHECK(t.g_fb.den().degree() == n + 1);
        CHECK(t.g_fb.den()[0] == 0.0);
        CHECK(t.g_pf_bar.num().degree() == n + 1);
        CHECK(t.g_pf_bar.den().degree() == n);
        CHECK(t.g_ff.num().degree() == n);
        CHECK(t.g_ff.den().degree() == n);
        CHECK(t.g_pf_mod.num().degree() == n);
        CHECK(t.g_pf_mod.den().degree() == n);
    }
}

TEST_CASE("realizable decomposition identity") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> w(0.5, 10.0);
    std::uniform_real_distribution<double> ke(2.0, 20.0);
    for (int n = 1; n <= 3; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            const AdrcDesign d = make_design({n, 1.0, w(rng), ke(rng)});
            const TfSet t = synth_tfset(d, make_variant(d, "A"));
            for (double om : logspace(1e-3, 1e3, 400)) {
                const auto lhs = t.g_fb(om) * t.g_pf_bar(om);
                const auto rhs = t.g_fb(om) * t.g_pf_mod(om) + t.g_ff(om);
                CHECK(std::abs(lhs - rhs) <= 1e-9 * std::abs(lhs));
            }
        }
    }
}

TEST_CASE("error-based controller equals G_FB") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> w(0.1, 20.0);
    std::uniform_real_distribution<double> ke(1.5, 24.0);
    std::uniform_real_distribution<double> b(0.2, 5.0);
    for (int n = 1; n <= kMaxOrder; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            const AdrcDesign d = make_design({n, b(rng), w(rng), ke(rng)});
            const RationalTf g = synth_g_fb(d);
            const RationalTf e = synth_eadrc_tf(d);
            CHECK(max_rel_coeff_deviation(g.num(), e.num()) < 1e-9);
            CHECK(max_rel_coeff_deviation(g.den(), e.den()) < 1e-9);
            CHECK(worst_grid_deviation(e, g) < 1e-9);
        }
    }
    const AdrcDesign d = make_design({3, 1.0, 2.5, 5.0});
    CHECK(check_equivalence(synth_g_fb(d), synth_eadrc_tf(d), logspace(1e-3, 1e3, 400)).passed);
}

TEST_CASE("a perturbed observer gain breaks equivalence") {
    std::vector<double> l = kSecond.l;
    l.back() *= 1.001;
    const EquivalenceResult r =
        check_equivalence(synth_g_fb(kSecond), synth_eadrc_tf(kSecond, l), logspace(1e-3, 1e3, 400));
    CHECK_FALSE(r.passed);
    CHECK(r.max_grid_deviation > 1e-4);
    CHECK(r.worst_omega > 0.0);
}

TEST_CASE("realizability report") {
    const TfSet t = synth_tfset(kSecond, make_variant(kSecond, "A"));
    const RealizabilityReport r = realizability_report(t);
    CHECK(r.at("g_fb").properness == Properness::strictly_proper);
    CHECK(r.at("g_fb").num_degree == 2);
    CHECK(r.at("g_fb").den_degree == 3);
    CHECK(r.at("g_pf_bar").properness == Properness::improper);
    CHECK(r.at("g_pf_bar").num_degree == 3);
    CHECK(r.at("g_ff").properness == Properness::proper);
    CHECK(r.at("g_pf_mod").den_degree == 2);
    CHECK(r.g_fb_has_integrator);
    CHECK(r.g_ff_zero_dc);
    CHECK(r.modules.size() == 2);
    const std::string text = r.to_text();
    CHECK(text.find("not realizable") != std::string::npos);
    CHECK(text.find("n-th order high-pass") != std::string::npos);

    const TfSet tb = synth_tfset(kSecond, make_variant(kSecond, "B"));
    const RealizabilityReport rb = realizability_report(tb);
    CHECK(rb.derivative_inputs == 2);
    CHECK(rb.modules.size() == 3);

    const RealizabilityReport r1 = realizability_report(synth_tfset(kFirst, make_variant(kFirst, "A")));
    CHECK(r1.at("g_fb").num_degree == 1);
    CHECK(r1.at("g_fb").den_degree == 2);
}

TEST_CASE("printed closed forms") {
    const auto rows = verify_tables(3.0, 8.0, 1.0);
    int misprints = 0;
    for (const auto& c : rows) {
        if (c.known_misprint) {
            ++misprints;
            CHECK_FALSE(c.matches);
            CHECK(c.printed == Polynomial{0, 579, 1});
            CHECK(c.derived == Polynomial{0, 51, 1});
        } else {
            CHECK_MESSAGE(c.matches, c.table << " " << c.quantity);
        }
    }
    CHECK(misprints == 1);
}
