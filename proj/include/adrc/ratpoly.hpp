#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace adrc {

/// Real polynomial in the Laplace variable s, ascending powers.
///
/// coeffs()[k] multiplies s^k. The zero polynomial has no coefficients and
/// degree() == -1. Arithmetic results are canonical: a coefficient that is
/// below the rounding noise of the terms that produced it is set to zero and
/// trailing zeros are removed.
class Polynomial {
public:
    /// Relative cancellation threshold used by the arithmetic operators.
    static constexpr double kCancelTol = 1e-12;

    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);
    Polynomial(std::initializer_list<double> coeffs);

    static Polynomial constant(double c);
    /// c * s^k
    static Polynomial monomial(int k, double c = 1.0);
    /// (s + a)^n expanded by repeated multiplication.
    static Polynomial binomial_power(double a, int n);

    [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
    [[nodiscard]] std::span<const double> coeffs() const { return coeffs_; }
    /// Coefficient of s^k; zero beyond the degree.
    [[nodiscard]] double operator[](std::size_t k) const {
        return k < coeffs_.size() ? coeffs_[k] : 0.0;
    }
    [[nodiscard]] double leading() const { return coeffs_.empty() ? 0.0 : coeffs_.back(); }
    [[nodiscard]] double max_abs_coeff() const;

    [[nodiscard]] std::complex<double> operator()(std::complex<double> s) const;
    [[nodiscard]] double operator()(double s) const;

    /// Divide by s^k. Throws std::domain_error unless the k lowest
    /// coefficients are below tol * max_abs_coeff().
    [[nodiscard]] Polynomial divided_by_s(int k, double tol) const;

    /// Zero every coefficient with |c| < rel_tol * max|c|.
    [[nodiscard]] Polynomial trimmed(double rel_tol) const;

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(const Polynomial& other);
    Polynomial& operator*=(double scale);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
    friend Polynomial operator*(Polynomial a, double c) { return a *= c; }
    friend Polynomial operator*(double c, Polynomial a) { return a *= c; }
    friend Polynomial operator-(Polynomial a) { return a *= -1.0; }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void drop_trailing_zeros();

    std::vector<double> coeffs_;
};

/// Largest per-coefficient relative deviation between two polynomials.
///
/// Each coefficient pair is compared relative to max(|a_k|, |b_k|), floored
/// at 1e-12 of the overall largest coefficient so that coefficients which
/// both sit at the rounding floor do not dominate.
double max_rel_coeff_deviation(const Polynomial& a, const Polynomial& b);

std::string to_string(const Polynomial& p, char var = 's');

enum class Properness { strictly_proper, proper, improper };

std::string_view to_string(Properness p);

/// Thrown when a transfer function is evaluated at one of its poles.
class PoleOnAxisError : public std::domain_error {
public:
    PoleOnAxisError(double omega, const std::string& what)
        : std::domain_error(what), omega_(omega) {}
    [[nodiscard]] double omega() const { return omega_; }

private:
    double omega_;
};

/// num(s) / den(s) * exp(-s * delay).
///
/// The denominator is kept monic; its leading coefficient is folded into
/// the numerator on construction. Improper ratios are allowed.
class RationalTf {
public:
    /// |den(jw)| below this is treated as a pole on the imaginary axis.
    static constexpr double kPoleTol = 1e-300;

    RationalTf() : num_(Polynomial::constant(0.0)), den_(Polynomial::constant(1.0)) {}
    RationalTf(Polynomial num, Polynomial den, double delay = 0.0);

    [[nodiscard]] const Polynomial& num() const { return num_; }
    [[nodiscard]] const Polynomial& den() const { return den_; }
    [[nodiscard]] double delay() const { return delay_; }

    [[nodiscard]] Properness properness() const;
    [[nodiscard]] bool has_integrator() const { return den_.degree() > 0 && den_[0] == 0.0; }

    /// G(jw) including the dead-time factor.
    [[nodiscard]] std::complex<double> operator()(double omega) const;
    /// Rational part only, at an arbitrary complex point.
    [[nodiscard]] std::complex<double> rational_at(std::complex<double> s) const;

    /// num(0) / den(0); throws PoleOnAxisError when den(0) == 0.
    [[nodiscard]] double dc_gain() const;

    friend RationalTf operator*(const RationalTf& a, const RationalTf& b);
    friend RationalTf operator*(const RationalTf& a, const Polynomial& p);
    /// Requires equal delays.
    friend RationalTf operator+(const RationalTf& a, const RationalTf& b);

private:
    Polynomial num_;
    Polynomial den_;
    double delay_ = 0.0;
};

/// Dense square grid of polynomials.
class PolyMatrix {
public:
    PolyMatrix() = default;
    PolyMatrix(std::size_t rows, std::size_t cols);

    /// s*I - m
    static PolyMatrix pencil(const Eigen::MatrixXd& m);
    static PolyMatrix scaled_identity(std::size_t n, const Polynomial& p);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    Polynomial& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Polynomial& operator()(std::size_t r, std::size_t c) const {
        return entries_[r * cols_ + c];
    }

    friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);

    /// row^T * M * col, as a single polynomial.
    [[nodiscard]] Polynomial contract(std::span<const double> row, std::span<const double> col) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Polynomial> entries_;
};

struct Resolvent {
    PolyMatrix adj;   ///< adj(sI - M)
    Polynomial det;   ///< det(sI - M), monic
};

/// adj(sI - m) and det(sI - m) by the Faddeev-LeVerrier recursion.
Resolvent resolvent(const Eigen::MatrixXd& m);

}  // namespace adrc
