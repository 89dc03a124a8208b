//==============================================================================
// seqspace.hpp
// Truncated weighted Fourier-Lebesgue phase space.
//
// A state holds a finite double sequence zeta = (xi, eta) over the modes
// |j| <= J.  On the real subspace eta_j = conj(xi_j).  Norms are the weighted
// l^p norms ||xi||_{p,w} + ||eta||_{p,w} with 1 <= p <= 2 and a positive,
// symmetric, sub-multiplicative weight w_j.  The real pairing is
// <z1, z2> = 2 Re sum_j xi1_j conj(xi2_j), and omega0(z1,z2) = <i z1, z2>.
//==============================================================================
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace birknls {

using cplx = std::complex<double>;

// <j> := 1 + |j|
inline double angle_bracket(long long j) { return 1.0 + std::llabs(j); }

/// Parametric weight families.  All are symmetric in j and sub-multiplicative.
///  - unit:        w_j = 1
///  - polynomial:  w_j = <j>^s
///  - analytic:    w_j = <j>^s e^{a |j|^b}
///  - shifted:     w_j = <j + offset> <-j + offset> style power, kept symmetric
///                 by evaluating at |j|; used for offset experiments.
struct Weight {
    enum class Family { unit, polynomial, analytic, shifted };
    Family family = Family::unit;
    double s = 0.0;
    double a = 0.0;
    double b = 1.0;
    long long offset = 0;

    static Weight unit();
    static Weight polynomial(double s);
    static Weight analytic(double s, double a, double b = 1.0);
    static Weight shifted(double s, long long offset);

    double operator()(long long j) const;

    std::string describe() const;
};

/// Pointwise comparison u <= v on |j| <= range.
bool weight_leq(const Weight& u, const Weight& v, int range);

/// Truncated state: xi_j, eta_j for |j| <= J, stored densely.
/// Index convention: mode j maps to slot j + J in [0, 2J].
class TruncState {
public:
    explicit TruncState(int J);
    TruncState(int J, std::vector<cplx> xi, std::vector<cplx> eta);

    int J() const { return J_; }
    int modes() const { return 2 * J_ + 1; }

    cplx xi(int j) const { return xi_[j + J_]; }
    cplx eta(int j) const { return eta_[j + J_]; }
    void set_xi(int j, cplx v) { xi_[j + J_] = v; }
    void set_eta(int j, cplx v) { eta_[j + J_] = v; }

    const std::vector<cplx>& xi_raw() const { return xi_; }
    const std::vector<cplx>& eta_raw() const { return eta_; }

    /// eta_j := conj(xi_j) for all j.
    void make_real();
    /// max_j |eta_j - conj(xi_j)|; a state is flagged real when <= 1e-12.
    double reality_defect() const;
    bool is_real(double tol = 1e-12) const { return reality_defect() <= tol; }

    bool all_finite() const;

    TruncState& operator*=(double c);
    TruncState operator+(const TruncState& o) const;

private:
    int J_;
    std::vector<cplx> xi_, eta_;
};

/// p in [1,2] together with the weight defining || . ||_{p,w}.
struct NormSpec {
    double p = 2.0;
    Weight w = Weight::unit();

    NormSpec() = default;
    NormSpec(double p_, Weight w_);

    double conjugate_exponent() const;  // p' with 1/p + 1/p' = 1 (inf for p=1)
};

/// ||zeta||_{p,w} = ||xi||_{p,w} + ||eta||_{p,w}.
double state_norm(const TruncState& z, const NormSpec& spec);

/// Norm of the xi half alone (used for single-sequence estimates).
double seq_norm(const std::vector<cplx>& v, int J, const NormSpec& spec);

/// <z1, z2> = 2 Re sum_j xi1_j conj(xi2_j).  Throws on cutoff mismatch.
double real_scalar_product(const TruncState& z1, const TruncState& z2);

/// omega0(z1, z2) = <i z1, z2> = -2 Im sum_j xi1_j conj(xi2_j).
double omega0(const TruncState& z1, const TruncState& z2);

}  // namespace birknls
