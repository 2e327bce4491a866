#include "adrc/tfsynth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "wide.hpp"

namespace adrc {

namespace {

using detail::kWideCancelTol;
using detail::MatrixW;
using detail::VectorW;
using detail::Wide;

// Descending coefficients of det(sI - m) by the Berkowitz recursion:
// p_{r+1} = T_{r+1} p_r, T lower-triangular Toeplitz with first column
// (1, -a, -R S, -R A S, ..., -R A^{r-1} S) for the bordering of A_r.
// With magnitude set, every entry and subtraction is taken in absolute value,
// which bounds the terms that cancel in each coefficient.
std::vector<Wide> charpoly_berkowitz(const MatrixW& m, bool magnitude = false) {
    const Eigen::Index n = m.rows();
    const Wide sign = magnitude ? 1 : -1;
    std::vector<Wide> p{Wide(1)};
    for (Eigen::Index r = 0; r < n; ++r) {
        const MatrixW ar = m.topLeftCorner(r, r);
        const VectorW row = m.row(r).head(r).transpose();
        std::vector<Wide> col(static_cast<std::size_t>(r) + 2);
        col[0] = 1;
        col[1] = sign * m(r, r);
        VectorW v = m.col(r).head(r);
        for (Eigen::Index k = 0; k < r; ++k) {
            col[static_cast<std::size_t>(k) + 2] = sign * row.dot(v);
            v = ar * v;
        }
        std::vector<Wide> next(static_cast<std::size_t>(r) + 2, Wide(0));
        for (std::size_t i = 0; i < next.size(); ++i) {
            for (std::size_t j = 0; j <= std::min(i, p.size() - 1); ++j) {
                next[i] += col[i - j] * p[j];
            }
        }
        p = std::move(next);
    }
    return p;
}

// det(sI - m) and h^T adj(sI - m) l, descending. The adjugate form uses
// adj(sI - m) = sum_j s^(d-1-j) sum_{i<=j} c_i m^(j-i).
struct Pencil {
    std::vector<Wide> det;
    std::vector<Wide> form;
};

Pencil pencil_forms(const MatrixW& m, const VectorW& h, const VectorW& l) {
    std::vector<Wide> c = charpoly_berkowitz(m);
    const MatrixW am = m.cwiseAbs();
    const std::vector<Wide> cb = charpoly_berkowitz(am, true);
    for (std::size_t i = 1; i < c.size(); ++i) {
        if (abs(c[i]) < kWideCancelTol * cb[i]) c[i] = 0;
    }
    const auto dim = static_cast<std::size_t>(m.rows());
    std::vector<Wide> moments(dim), bounds(dim);
    VectorW v = l;
    VectorW av = l.cwiseAbs();
    const VectorW ah = h.cwiseAbs();
    for (std::size_t q = 0; q < dim; ++q) {
        moments[q] = h.dot(v);
        bounds[q] = ah.dot(av);
        v = m * v;
        av = am * av;
    }
    std::vector<Wide> form(dim, Wide(0));
    for (std::size_t j = 0; j < dim; ++j) {
        Wide acc = 0;
        Wide mag = 0;
        for (std::size_t i = 0; i <= j; ++i) {
            acc += c[i] * moments[j - i];
            mag += cb[i] * bounds[j - i];
        }
        form[j] = abs(acc) < kWideCancelTol * mag ? Wide(0) : acc;
    }
    return {std::move(c), std::move(form)};
}

Polynomial ascending(const std::vector<Wide>& desc) {
    std::vector<double> asc(desc.size());
    for (std::size_t j = 0; j < desc.size(); ++j) {
        asc[desc.size() - 1 - j] = static_cast<double>(desc[j]);
    }
    return Polynomial(std::move(asc));
}

RationalTf eadrc_from_gains(const AdrcDesign& d, const std::vector<double>& l) {
    const int n = d.order();
    const EsoModel eso = eso_model(n, d.params.b0);
    const auto dim = static_cast<Eigen::Index>(n + 1);
    // u = h^T xe,  xe' = A xe - b u + l (e - c^T xe)
    const std::vector<double> kext = d.k_ext();
    VectorW h(dim);
    VectorW lv(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        h(i) = Wide(kext[static_cast<std::size_t>(i)]) / d.params.b0;
        lv(i) = l[static_cast<std::size_t>(i)];
    }
    const MatrixW a = eso.a.cast<Wide>();
    const MatrixW lc = lv * eso.c.cast<Wide>().transpose();
    const MatrixW bh = eso.b.cast<Wide>() * h.transpose();
    MatrixW loop = a - lc - bh;
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            const Wide mag = abs(a(i, j)) + abs(lc(i, j)) + abs(bh(i, j));
            if (abs(loop(i, j)) < kWideCancelTol * mag) loop(i, j) = 0;
        }
    }
    const Pencil pf = pencil_forms(loop, h, lv);
    return RationalTf(ascending(pf.form), ascending(pf.det));
}

std::string fmt_short(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

ClosedLoopPolys closed_loop_polys(const AdrcDesign& d) {
    const int n = d.order();
    const auto dim = static_cast<Eigen::Index>(n + 1);
    // A_CL = A - l c^T - (b / b0)(k^T, 1), assembled without rounding
    const std::vector<double> kext = d.k_ext();
    VectorW kw(dim), lw(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        kw(i) = kext[static_cast<std::size_t>(i)];
        lw(i) = d.l[static_cast<std::size_t>(i)];
    }
    MatrixW acl = MatrixW::Zero(dim, dim);
    for (Eigen::Index i = 0; i + 1 < dim; ++i) acl(i, i + 1) = 1;
    acl.col(0) -= lw;
    acl.row(n - 1) -= kw.transpose();
    // b / b0 is the unit vector at row n-1
    VectorW unit_b = VectorW::Zero(dim);
    unit_b(n - 1) = 1;
    const detail::Faddeev f = detail::faddeev(acl);
    return {Polynomial(f.det), Polynomial(detail::adjugate_form(f, kw, lw)),
            Polynomial(detail::adjugate_form(f, kw, unit_b))};
}

namespace {

RationalTf g_fb_from(const ClosedLoopPolys& cl, const AdrcDesign& d) {
    return RationalTf(cl.kadj_l * (1.0 / d.params.b0), cl.det);
}

RationalTf g_pf_bar_from(const ClosedLoopPolys& cl) {
    return RationalTf(cl.det - cl.kadj_b, cl.kadj_l);
}

RationalTf g_ff_from(const ClosedLoopPolys& cl, const AdrcDesign& d) {
    const int n = d.order();
    Polynomial reduced_det;
    try {
        reduced_det = cl.det.divided_by_s(1, kIntegratorTol);
    } catch (const std::domain_error&) {
        throw std::logic_error("G_FF: det(sI - A_CL) has no free integrator (constant term " +
                               fmt_short(cl.det[0]) + "); the closed-loop matrix is inconsistent");
    }
    return RationalTf(Polynomial::monomial(n, 1.0 / d.params.b0), reduced_det);
}

RationalTf g_pf_mod_from(const ClosedLoopPolys& cl, const AdrcDesign& d) {
    const Polynomial lead = Polynomial::monomial(d.order() + 1);
    return RationalTf(cl.det - lead - cl.kadj_b, cl.kadj_l);
}

}  // namespace

RationalTf synth_g_fb(const AdrcDesign& d) { return g_fb_from(closed_loop_polys(d), d); }

RationalTf synth_g_pf_bar(const AdrcDesign& d) { return g_pf_bar_from(closed_loop_polys(d)); }

Polynomial synth_g_r(const GainVariant& variant, const AdrcDesign& d) {
    if (variant.kr.size() != static_cast<std::size_t>(d.order())) {
        throw std::invalid_argument("synth_g_r: variant does not match design order");
    }
    std::vector<double> c(variant.kr.size() + 1);
    c[0] = d.k[0];
    std::copy(variant.kr.begin(), variant.kr.end(), c.begin() + 1);
    return Polynomial(std::move(c));
}

RationalTf synth_g_ff(const AdrcDesign& d) { return g_ff_from(closed_loop_polys(d), d); }

RationalTf synth_g_pf_mod(const AdrcDesign& d) { return g_pf_mod_from(closed_loop_polys(d), d); }

RationalTf synth_eadrc_tf(const AdrcDesign& d) { return eadrc_from_gains(d, d.l); }

RationalTf synth_eadrc_tf(const AdrcDesign& d, const std::vector<double>& l_override) {
    if (l_override.size() != d.l.size()) {
        throw std::invalid_argument("synth_eadrc_tf: observer gain count mismatch");
    }
    return eadrc_from_gains(d, l_override);
}

TfSet synth_tfset(const AdrcDesign& d, const GainVariant& variant) {
    const ClosedLoopPolys cl = closed_loop_polys(d);
    TfSet t{
        .g_fb = g_fb_from(cl, d),
        .g_pf_bar = g_pf_bar_from(cl),
        .g_r = synth_g_r(variant, d),
        .g_pf = {},
        .g_ff = g_ff_from(cl, d),
        .g_pf_mod = g_pf_mod_from(cl, d),
        .variant = variant,
    };
    t.g_pf = t.g_pf_bar * t.g_r;
    return t;
}

const TfClass& RealizabilityReport::at(const std::string& name) const {
    for (const auto& e : entries) {
        if (e.name == name) {
            return e;
        }
    }
    throw std::out_of_range("no transfer function named " + name);
}

std::string RealizabilityReport::to_text() const {
    std::ostringstream os;
    for (const auto& e : entries) {
        os << e.name << ": " << to_string(e.properness) << " (num degree " << e.num_degree
           << ", den degree " << e.den_degree << ")";
        if (e.name == "g_pf_bar") {
            os << " - not realizable on its own";
        } else if (e.name == "g_ff") {
            os << " - n-th order high-pass (n = " << e.num_degree << ")";
        }
        os << '\n';
    }
    os << "g_fb integrator: " << (g_fb_has_integrator ? "yes" : "no") << '\n';
    os << "g_ff DC gain zero: " << (g_ff_zero_dc ? "yes" : "no") << '\n';
    os << "reference derivative inputs: " << derivative_inputs << '\n';
    os << "modules:\n";
    for (const auto& m : modules) {
        os << "  " << m << '\n';
    }
    return os.str();
}

RealizabilityReport realizability_report(const TfSet& t) {
    RealizabilityReport r;
    const auto classify = [](std::string name, const RationalTf& g) {
        return TfClass{std::move(name), g.num().degree(), g.den().degree(), g.properness()};
    };
    r.entries.push_back(classify("g_fb", t.g_fb));
    r.entries.push_back(classify("g_pf_bar", t.g_pf_bar));
    r.entries.push_back(classify("g_ff", t.g_ff));
    r.entries.push_back(classify("g_pf_mod", t.g_pf_mod));
    r.g_fb_has_integrator = t.g_fb.has_integrator();
    r.g_ff_zero_dc = t.g_ff.num()[0] == 0.0 && t.g_ff.den()[0] != 0.0;
    r.derivative_inputs = t.variant.derivatives_used();
    r.modules.push_back("Module 1: feedback G_FB (error-based ADRC on its own)");
    r.modules.push_back("Module 2: reference channel with modified pre-filter G~_PF and feedforward G_FF");
    if (r.derivative_inputs > 0) {
        r.modules.push_back("Module 3: reference derivative inputs through G_R (" +
                            std::to_string(r.derivative_inputs) + " of " +
                            std::to_string(t.variant.kr.size()) + ")");
    }
    return r;
}

EquivalenceResult check_equivalence(const RationalTf& g_fb, const RationalTf& eadrc,
                                    const std::vector<double>& grid, double tol) {
    EquivalenceResult res;
    res.max_coeff_deviation = std::max(max_rel_coeff_deviation(g_fb.num(), eadrc.num()),
                                       max_rel_coeff_deviation(g_fb.den(), eadrc.den()));
    for (double w : grid) {
        const auto a = g_fb(w);
        const auto b = eadrc(w);
        const double dev = std::abs(a - b) / std::abs(a);
        if (dev > res.max_grid_deviation || std::isnan(dev)) {
            res.max_grid_deviation = dev;
            res.worst_omega = w;
        }
    }
    res.passed = res.max_coeff_deviation < tol && res.max_grid_deviation < tol;
    return res;
}

std::vector<TableCheck> verify_tables(double omega_cl, double k_eso, double b0, double tol) {
    std::vector<TableCheck> out;
    const auto add = [&](std::string table, std::string quantity, const Polynomial& printed,
                         const Polynomial& derived, bool misprint) {
        TableCheck c{std::move(table), std::move(quantity), printed, derived,
                     max_rel_coeff_deviation(printed, derived), false, misprint};
        c.matches = c.deviation < tol;
        out.push_back(std::move(c));
    };

    {
        const AdrcDesign d = make_design({1, b0, omega_cl, k_eso});
        const double k1 = d.k[0];
        const double l1 = d.l[0], l2 = d.l[1];
        const TfSet a = synth_tfset(d, make_variant(d, "A"));
        const TfSet b = synth_tfset(d, make_variant(d, "B"));
        const Polynomial fb_num{k1 * l2 / b0, (k1 * l1 + l2) / b0};
        add("n=1", "G_FB numerator", fb_num, a.g_fb.num(), false);
        add("n=1", "G_FB denominator as printed, s^2 + (k1+l2)s", Polynomial{0.0, k1 + l2, 1.0},
            a.g_fb.den(), true);
        add("n=1", "G_FB denominator, s^2 + (k1+l1)s", Polynomial{0.0, k1 + l1, 1.0}, a.g_fb.den(),
            false);
        const Polynomial pf_den{k1 * l2, k1 * l1 + l2};
        const RationalTf pf_a(Polynomial{l2, l1, 1.0} * k1, pf_den);
        add("n=1", "G_PF case A numerator", pf_a.num(), a.g_pf.num(), false);
        add("n=1", "G_PF case A denominator", pf_a.den(), a.g_pf.den(), false);
        const RationalTf pf_b(Polynomial{l2, l1, 1.0} * Polynomial{k1, 1.0}, pf_den);
        add("n=1", "G_PF case B numerator", pf_b.num(), b.g_pf.num(), false);
        add("n=1", "G_PF case B denominator", pf_b.den(), b.g_pf.den(), false);
    }
    {
        const AdrcDesign d = make_design({2, b0, omega_cl, k_eso});
        const double k1 = d.k[0], k2 = d.k[1];
        const double l1 = d.l[0], l2 = d.l[1], l3 = d.l[2];
        const TfSet a = synth_tfset(d, make_variant(d, "A"));
        const TfSet b = synth_tfset(d, make_variant(d, "B"));
        const Polynomial core{k1 * l3, k1 * l2 + k2 * l3, k1 * l1 + k2 * l2 + l3};
        add("n=2", "G_FB numerator", core * (1.0 / b0), a.g_fb.num(), false);
        add("n=2", "G_FB denominator", Polynomial{0.0, l2 + k1 + l1 * k2, k2 + l1, 1.0},
            a.g_fb.den(), false);
        const Polynomial obs{l3, l2, l1, 1.0};
        const RationalTf pf_a(obs * k1, core);
        add("n=2", "G_PF case A numerator", pf_a.num(), a.g_pf.num(), false);
        add("n=2", "G_PF case A denominator", pf_a.den(), a.g_pf.den(), false);
        const RationalTf pf_b(obs * Polynomial{k1, k2, 1.0}, core);
        add("n=2", "G_PF case B numerator", pf_b.num(), b.g_pf.num(), false);
        add("n=2", "G_PF case B denominator", pf_b.den(), b.g_pf.den(), false);
    }
    return out;
}

}  // namespace adrc
