#include "adrc/ratpoly.hpp"

#include "wide.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace adrc {

namespace {

// Builds a canonical coefficient vector from raw sums and the sum of absolute
// values of the terms that produced each sum.
std::vector<double> cancel_noise(std::vector<double> sum, const std::vector<double>& abs_terms) {
    for (std::size_t k = 0; k < sum.size(); ++k) {
        if (std::abs(sum[k]) < Polynomial::kCancelTol * abs_terms[k]) {
            sum[k] = 0.0;
        }
    }
    return sum;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    for (double c : coeffs_) {
        if (!std::isfinite(c)) {
            throw std::invalid_argument("polynomial coefficients must be finite");
        }
    }
    drop_trailing_zeros();
}

Polynomial::Polynomial(std::initializer_list<double> coeffs)
    : Polynomial(std::vector<double>(coeffs)) {}

Polynomial Polynomial::constant(double c) { return Polynomial(std::vector<double>{c}); }

Polynomial Polynomial::monomial(int k, double c) {
    if (k < 0) {
        throw std::invalid_argument("monomial power must be non-negative");
    }
    std::vector<double> v(static_cast<std::size_t>(k) + 1, 0.0);
    v.back() = c;
    return Polynomial(std::move(v));
}

Polynomial Polynomial::binomial_power(double a, int n) {
    Polynomial p = constant(1.0);
    const Polynomial factor{a, 1.0};
    for (int i = 0; i < n; ++i) {
        p *= factor;
    }
    return p;
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs_) {
        m = std::max(m, std::abs(c));
    }
    return m;
}

std::complex<double> Polynomial::operator()(std::complex<double> s) const {
    std::complex<double> acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * s + *it;
    }
    return acc;
}

double Polynomial::operator()(double s) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * s + *it;
    }
    return acc;
}

Polynomial Polynomial::divided_by_s(int k, double tol) const {
    if (k < 0) {
        throw std::invalid_argument("divided_by_s: negative power");
    }
    if (k == 0 || is_zero()) {
        return *this;
    }
    const double scale = max_abs_coeff();
    for (int i = 0; i < k; ++i) {
        if (std::abs((*this)[static_cast<std::size_t>(i)]) > tol * scale) {
            throw std::domain_error("divided_by_s: coefficient of s^" + std::to_string(i) +
                                    " is not zero, polynomial has no factor s^" +
                                    std::to_string(k));
        }
    }
    if (degree() < k) {
        return Polynomial{};
    }
    return Polynomial(std::vector<double>(coeffs_.begin() + k, coeffs_.end()));
}

Polynomial Polynomial::trimmed(double rel_tol) const {
    const double bound = rel_tol * max_abs_coeff();
    std::vector<double> v = coeffs_;
    for (double& c : v) {
        if (std::abs(c) < bound) {
            c = 0.0;
        }
    }
    return Polynomial(std::move(v));
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    const std::size_t len = std::max(coeffs_.size(), other.coeffs_.size());
    std::vector<double> sum(len, 0.0);
    std::vector<double> abs_terms(len, 0.0);
    for (std::size_t k = 0; k < len; ++k) {
        const double a = (*this)[k];
        const double b = other[k];
        sum[k] = a + b;
        abs_terms[k] = std::abs(a) + std::abs(b);
    }
    coeffs_ = cancel_noise(std::move(sum), abs_terms);
    drop_trailing_zeros();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) { return *this += -other; }

Polynomial& Polynomial::operator*=(const Polynomial& other) {
    if (is_zero() || other.is_zero()) {
        coeffs_.clear();
        return *this;
    }
    const std::size_t len = coeffs_.size() + other.coeffs_.size() - 1;
    std::vector<double> sum(len, 0.0);
    std::vector<double> abs_terms(len, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j) {
            const double t = coeffs_[i] * other.coeffs_[j];
            sum[i + j] += t;
            abs_terms[i + j] += std::abs(t);
        }
    }
    coeffs_ = cancel_noise(std::move(sum), abs_terms);
    drop_trailing_zeros();
    return *this;
}

Polynomial& Polynomial::operator*=(double scale) {
    if (!std::isfinite(scale)) {
        throw std::invalid_argument("polynomial scale must be finite");
    }
    for (double& c : coeffs_) {
        c *= scale;
    }
    drop_trailing_zeros();
    return *this;
}

void Polynomial::drop_trailing_zeros() {
    for (double& c : coeffs_) {
        if (c == 0.0) {
            c = 0.0;  // no negative zeros in output
        }
    }
    while (!coeffs_.empty() && coeffs_.back() == 0.0) {
        coeffs_.pop_back();
    }
}

double max_rel_coeff_deviation(const Polynomial& a, const Polynomial& b) {
    const double floor = 1e-12 * std::max(a.max_abs_coeff(), b.max_abs_coeff());
    const std::size_t len = static_cast<std::size_t>(std::max(a.degree(), b.degree()) + 1);
    double worst = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        const double scale = std::max({std::abs(a[k]), std::abs(b[k]), floor});
        if (scale == 0.0) {
            continue;
        }
        worst = std::max(worst, std::abs(a[k] - b[k]) / scale);
    }
    return worst;
}

std::string to_string(const Polynomial& p, char var) {
    if (p.is_zero()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (int k = p.degree(); k >= 0; --k) {
        const double c = p[static_cast<std::size_t>(k)];
        if (c == 0.0) {
            continue;
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10g", std::abs(c));
        if (first) {
            os << (c < 0 ? "-" : "");
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        const bool unit = std::abs(c) == 1.0 && k > 0;
        if (!unit) {
            os << buf;
        }
        if (k > 0) {
            os << (unit ? "" : "*") << var;
            if (k > 1) {
                os << '^' << k;
            }
        }
    }
    return os.str();
}

std::string_view to_string(Properness p) {
    switch (p) {
        case Properness::strictly_proper: return "strictly proper";
        case Properness::proper: return "proper";
        case Properness::improper: return "improper";
    }
    return "unknown";
}

RationalTf::RationalTf(Polynomial num, Polynomial den, double delay)
    : num_(std::move(num)), den_(std::move(den)), delay_(delay) {
    if (den_.is_zero()) {
        throw std::invalid_argument("transfer function denominator is the zero polynomial");
    }
    if (!(delay_ >= 0.0) || !std::isfinite(delay_)) {
        throw std::invalid_argument("dead time must be finite and non-negative");
    }
    const double lead = den_.leading();
    if (lead != 1.0) {
        num_ *= 1.0 / lead;
        den_ *= 1.0 / lead;
    }
}

Properness RationalTf::properness() const {
    if (num_.degree() < den_.degree()) {
        return Properness::strictly_proper;
    }
    if (num_.degree() == den_.degree()) {
        return Properness::proper;
    }
    return Properness::improper;
}

std::complex<double> RationalTf::rational_at(std::complex<double> s) const {
    const std::complex<double> d = den_(s);
    if (std::abs(d) < kPoleTol) {
        throw PoleOnAxisError(s.imag(), "transfer function evaluated at a pole (s = " +
                                            std::to_string(s.real()) + " + " +
                                            std::to_string(s.imag()) + "j)");
    }
    return num_(s) / d;
}

std::complex<double> RationalTf::operator()(double omega) const {
    if (!std::isfinite(omega)) {
        throw std::invalid_argument("frequency must be finite");
    }
    const std::complex<double> g = rational_at({0.0, omega});
    if (delay_ == 0.0) {
        return g;
    }
    return g * std::polar(1.0, -omega * delay_);
}

double RationalTf::dc_gain() const {
    if (std::abs(den_[0]) < kPoleTol) {
        throw PoleOnAxisError(0.0, "transfer function has a pole at s = 0");
    }
    return num_[0] / den_[0];
}

RationalTf operator*(const RationalTf& a, const RationalTf& b) {
    return RationalTf(a.num_ * b.num_, a.den_ * b.den_, a.delay_ + b.delay_);
}

RationalTf operator*(const RationalTf& a, const Polynomial& p) {
    return RationalTf(a.num_ * p, a.den_, a.delay_);
}

RationalTf operator+(const RationalTf& a, const RationalTf& b) {
    if (a.delay_ != b.delay_) {
        throw std::invalid_argument("cannot add transfer functions with different dead times");
    }
    if (a.den_ == b.den_) {
        return RationalTf(a.num_ + b.num_, a.den_, a.delay_);
    }
    return RationalTf(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_, a.delay_);
}

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

PolyMatrix PolyMatrix::pencil(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("pencil: matrix must be square");
    }
    const auto n = static_cast<std::size_t>(m.rows());
    PolyMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const double v = -m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            out(r, c) = r == c ? Polynomial{v, 1.0} : Polynomial::constant(v);
        }
    }
    return out;
}

PolyMatrix PolyMatrix::scaled_identity(std::size_t n, const Polynomial& p) {
    PolyMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        out(i, i) = p;
    }
    return out;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
    if (a.cols_ != b.rows_) {
        throw std::invalid_argument("PolyMatrix product: dimension mismatch");
    }
    PolyMatrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r) {
        for (std::size_t c = 0; c < b.cols_; ++c) {
            Polynomial acc;
            for (std::size_t k = 0; k < a.cols_; ++k) {
                acc += a(r, k) * b(k, c);
            }
            out(r, c) = std::move(acc);
        }
    }
    return out;
}

Polynomial PolyMatrix::contract(std::span<const double> row, std::span<const double> col) const {
    if (row.size() != rows_ || col.size() != cols_) {
        throw std::invalid_argument("PolyMatrix::contract: dimension mismatch");
    }
    std::size_t len = 0;
    for (const auto& e : entries_) {
        len = std::max(len, static_cast<std::size_t>(e.degree() + 1));
    }
    std::vector<double> sum(len, 0.0);
    std::vector<double> abs_terms(len, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            const double w = row[r] * col[c];
            const Polynomial& e = (*this)(r, c);
            for (int k = 0; k <= e.degree(); ++k) {
                const double t = w * e[static_cast<std::size_t>(k)];
                sum[static_cast<std::size_t>(k)] += t;
                abs_terms[static_cast<std::size_t>(k)] += std::abs(t);
            }
        }
    }
    return Polynomial(cancel_noise(std::move(sum), abs_terms));
}

namespace detail {

// N_0 = I, c_n = 1
// c_{n-k} = -tr(M N_{k-1}) / k,  N_k = M N_{k-1} + c_{n-k} I
// adj(sI - M) = sum_{k=1..n} N_{k-1} s^{n-k}
// bounds run the same recursion on |M| with every sign made positive.
Faddeev faddeev(const MatrixW& m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw std::invalid_argument("resolvent: matrix must be square with dimension >= 1");
    }
    const Eigen::Index n = m.rows();
    const auto un = static_cast<std::size_t>(n);
    Faddeev f;
    f.det.assign(un + 1, 0.0);
    f.det[un] = 1.0;

    const MatrixW am = m.cwiseAbs();
    MatrixW nk = MatrixW::Identity(n, n);
    MatrixW bound = nk;
    for (Eigen::Index k = 1; k <= n; ++k) {
        f.terms.push_back(nk);
        f.bounds.push_back(bound);
        const MatrixW mn = m * nk;
        const MatrixW mb = am * bound;
        Wide c = -mn.trace() / k;
        const Wide cb = mb.trace() / k;
        if (abs(c) < kWideCancelTol * cb) {
            c = 0;
        }
        f.det[un - static_cast<std::size_t>(k)] = static_cast<double>(c);
        nk = mn;
        nk.diagonal().array() += c;
        bound = mb;
        bound.diagonal().array() += cb;
    }
    return f;
}

namespace {

double settle(const Wide& v, const Wide& bound) {
    return abs(v) < kWideCancelTol * bound ? 0.0 : static_cast<double>(v);
}

}  // namespace

std::vector<double> adjugate_form(const Faddeev& f, const VectorW& row, const VectorW& col) {
    const std::size_t un = f.terms.size();
    const VectorW ra = row.cwiseAbs();
    const VectorW ca = col.cwiseAbs();
    std::vector<double> v(un, 0.0);
    for (std::size_t k = 1; k <= un; ++k) {
        v[un - k] = settle(row.dot(f.terms[k - 1] * col), ra.dot(f.bounds[k - 1] * ca));
    }
    return v;
}

}  // namespace detail

Resolvent resolvent(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw std::invalid_argument("resolvent: matrix must be square with dimension >= 1");
    }
    detail::Faddeev f = detail::faddeev(m.cast<detail::Wide>());
    const std::size_t un = f.terms.size();
    PolyMatrix adj(un, un);
    for (std::size_t r = 0; r < un; ++r) {
        for (std::size_t col = 0; col < un; ++col) {
            detail::VectorW er = detail::VectorW::Zero(static_cast<Eigen::Index>(un));
            detail::VectorW ec = er;
            er(static_cast<Eigen::Index>(r)) = 1;
            ec(static_cast<Eigen::Index>(col)) = 1;
            adj(r, col) = Polynomial(detail::adjugate_form(f, er, ec));
        }
    }
    return {std::move(adj), Polynomial(std::move(f.det))};
}

}  // namespace adrc
