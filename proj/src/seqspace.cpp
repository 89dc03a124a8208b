#include "birknls/seqspace.hpp"

#include <limits>
#include <stdexcept>

namespace birknls {

Weight Weight::unit() { return Weight{}; }

Weight Weight::polynomial(double s) {
    Weight w;
    w.family = Family::polynomial;
    w.s = s;
    return w;
}

Weight Weight::analytic(double s, double a, double b) {
    Weight w;
    w.family = Family::analytic;
    w.s = s;
    w.a = a;
    w.b = b;
    return w;
}

Weight Weight::shifted(double s, long long offset) {
    Weight w;
    w.family = Family::shifted;
    w.s = s;
    w.offset = offset;
    return w;
}

double Weight::operator()(long long j) const {
    switch (family) {
        case Family::unit:
            return 1.0;
        case Family::polynomial:
            return std::pow(angle_bracket(j), s);
        case Family::analytic:
            return std::pow(angle_bracket(j), s) *
                   std::exp(a * std::pow(std::llabs(j), b));
        case Family::shifted:
            return std::pow(angle_bracket(std::llabs(j) + offset), s);
    }
    return 1.0;
}

std::string Weight::describe() const {
    switch (family) {
        case Family::unit: return "unit";
        case Family::polynomial: return "<j>^" + std::to_string(s);
        case Family::analytic:
            return "<j>^" + std::to_string(s) + " exp(" + std::to_string(a) +
                   "|j|^" + std::to_string(b) + ")";
        case Family::shifted:
            return "<|j|+" + std::to_string(offset) + ">^" + std::to_string(s);
    }
    return "?";
}

bool weight_leq(const Weight& u, const Weight& v, int range) {
    for (int j = -range; j <= range; ++j)
        if (u(j) > v(j) * (1.0 + 1e-14)) return false;
    return true;
}

TruncState::TruncState(int J) : J_(J) {
    if (J < 0) throw std::invalid_argument("TruncState: J must be >= 0");
    xi_.assign(2 * J + 1, cplx(0, 0));
    eta_.assign(2 * J + 1, cplx(0, 0));
}

TruncState::TruncState(int J, std::vector<cplx> xi, std::vector<cplx> eta)
    : J_(J), xi_(std::move(xi)), eta_(std::move(eta)) {
    if (xi_.size() != size_t(2 * J + 1) || eta_.size() != size_t(2 * J + 1))
        throw std::invalid_argument("TruncState: wrong array length");
}

void TruncState::make_real() {
    for (int m = 0; m < modes(); ++m) eta_[m] = std::conj(xi_[m]);
}

double TruncState::reality_defect() const {
    double d = 0;
    for (int m = 0; m < modes(); ++m)
        d = std::max(d, std::abs(eta_[m] - std::conj(xi_[m])));
    return d;
}

bool TruncState::all_finite() const {
    for (int m = 0; m < modes(); ++m)
        if (!std::isfinite(xi_[m].real()) || !std::isfinite(xi_[m].imag()) ||
            !std::isfinite(eta_[m].real()) || !std::isfinite(eta_[m].imag()))
            return false;
    return true;
}

TruncState& TruncState::operator*=(double c) {
    for (auto& v : xi_) v *= c;
    for (auto& v : eta_) v *= c;
    return *this;
}

TruncState TruncState::operator+(const TruncState& o) const {
    if (o.J_ != J_) throw std::invalid_argument("TruncState: cutoff mismatch");
    TruncState r(J_);
    for (int m = 0; m < modes(); ++m) {
        r.xi_[m] = xi_[m] + o.xi_[m];
        r.eta_[m] = eta_[m] + o.eta_[m];
    }
    return r;
}

NormSpec::NormSpec(double p_, Weight w_) : p(p_), w(std::move(w_)) {
    if (p < 1.0 || p > 2.0) throw std::invalid_argument("NormSpec: p must lie in [1,2]");
}

double NormSpec::conjugate_exponent() const {
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    return p / (p - 1.0);
}

double seq_norm(const std::vector<cplx>& v, int J, const NormSpec& spec) {
    double acc = 0;
    for (int j = -J; j <= J; ++j) {
        double t = spec.w(j) * std::abs(v[j + J]);
        acc += std::pow(t, spec.p);
    }
    return std::pow(acc, 1.0 / spec.p);
}

double state_norm(const TruncState& z, const NormSpec& spec) {
    return seq_norm(z.xi_raw(), z.J(), spec) + seq_norm(z.eta_raw(), z.J(), spec);
}

double real_scalar_product(const TruncState& z1, const TruncState& z2) {
    if (z1.J() != z2.J())
        throw std::invalid_argument("real_scalar_product: cutoff mismatch");
    cplx acc(0, 0);
    for (int j = -z1.J(); j <= z1.J(); ++j) acc += z1.xi(j) * std::conj(z2.xi(j));
    return 2.0 * acc.real();
}

double omega0(const TruncState& z1, const TruncState& z2) {
    if (z1.J() != z2.J()) throw std::invalid_argument("omega0: cutoff mismatch");
    cplx acc(0, 0);
    for (int j = -z1.J(); j <= z1.J(); ++j) acc += z1.xi(j) * std::conj(z2.xi(j));
    return -2.0 * acc.imag();
}

}  // namespace birknls
