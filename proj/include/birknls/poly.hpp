//==============================================================================
// poly.hpp
// Sparse multivariate complex polynomials over the truncated phase-space
// variables (xi_j, eta_j), |j| <= J, with an auxiliary formal variable t
// used by time-dependent vector fields.
//
// Monomial encoding: a monomial of total degree d <= 7 stores its variable
// ids (each +1, so 0 marks an empty slot) as 7 sorted bytes of a uint64_t;
// the top byte holds the t-exponent.  Sorting makes the encoding canonical,
// hashable and totally ordered, so coefficient tables are deterministic.
// The degree cap applies to the (xi, eta)-degree only, never to t.
//
// Variable ids: var = ch * mpc + (j + J) with ch = 0 for xi, 1 for eta and
// mpc = 2J + 1 modes per channel.
//==============================================================================
#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "birknls/seqspace.hpp"

namespace birknls {

constexpr int kMaxPolyDegree = 7;
constexpr double kPruneTol = 1e-14;  // coefficients below this are dropped

namespace mono {

constexpr uint64_t kOne = 0;  // empty monomial

inline uint64_t from_vars(const std::vector<int>& vars) {
    if (vars.size() > kMaxPolyDegree)
        throw std::invalid_argument("monomial degree exceeds hard cap 7");
    uint8_t d[kMaxPolyDegree] = {0};
    for (size_t i = 0; i < vars.size(); ++i) d[i] = uint8_t(vars[i] + 1);
    // insertion sort, descending so empty slots trail
    for (int i = 1; i < kMaxPolyDegree; ++i)
        for (int k = i; k > 0 && d[k] > d[k - 1]; --k) std::swap(d[k], d[k - 1]);
    uint64_t m = 0;
    for (int i = 0; i < kMaxPolyDegree; ++i) m |= uint64_t(d[i]) << (8 * i);
    return m;
}

inline uint64_t var(int v) { return uint64_t(uint8_t(v + 1)); }

inline int degree(uint64_t m) {
    int d = 0;
    for (int i = 0; i < kMaxPolyDegree; ++i)
        if ((m >> (8 * i)) & 0xff) ++d;
    return d;
}

inline int tpow(uint64_t m) { return int(m >> 56); }
inline uint64_t set_tpow(uint64_t m, int p) {
    return (m & 0x00ffffffffffffffULL) | (uint64_t(uint8_t(p)) << 56);
}
inline uint64_t t_times(uint64_t m, int p) {
    int q = tpow(m) + p;
    if (q > 255) throw std::overflow_error("t-power overflow");
    return set_tpow(m, q);
}
inline uint64_t drop_t(uint64_t m) { return m & 0x00ffffffffffffffULL; }

/// Merge the digit lists of a and b.  Returns false when the combined
/// (xi,eta)-degree exceeds cap; the product is then truncated away.
inline bool mul(uint64_t a, uint64_t b, int cap, uint64_t& out) {
    int da = degree(a), db = degree(b);
    if (da + db > cap || da + db > kMaxPolyDegree) return false;
    uint8_t d[kMaxPolyDegree] = {0};
    int n = 0;
    int ia = 0, ib = 0;
    auto dig = [](uint64_t m, int i) { return uint8_t((m >> (8 * i)) & 0xff); };
    while (ia < da && ib < db) {
        uint8_t x = dig(a, ia), y = dig(b, ib);
        if (x >= y) { d[n++] = x; ++ia; } else { d[n++] = y; ++ib; }
    }
    while (ia < da) d[n++] = dig(a, ia++);
    while (ib < db) d[n++] = dig(b, ib++);
    uint64_t m = 0;
    for (int i = 0; i < kMaxPolyDegree; ++i) m |= uint64_t(d[i]) << (8 * i);
    int tp = tpow(a) + tpow(b);
    if (tp > 255) throw std::overflow_error("t-power overflow");
    out = m | (uint64_t(uint8_t(tp)) << 56);
    return true;
}

inline int exponent_of(uint64_t m, int v) {
    uint8_t target = uint8_t(v + 1);
    int e = 0;
    for (int i = 0; i < kMaxPolyDegree; ++i)
        if (uint8_t((m >> (8 * i)) & 0xff) == target) ++e;
    return e;
}

/// Remove one factor of variable v; false when v does not divide m.
inline bool divide_once(uint64_t m, int v, uint64_t& out) {
    uint8_t target = uint8_t(v + 1);
    uint8_t d[kMaxPolyDegree];
    for (int i = 0; i < kMaxPolyDegree; ++i) d[i] = uint8_t((m >> (8 * i)) & 0xff);
    int hit = -1;
    for (int i = 0; i < kMaxPolyDegree; ++i)
        if (d[i] == target) { hit = i; break; }
    if (hit < 0) return false;
    for (int i = hit; i + 1 < kMaxPolyDegree; ++i) d[i] = d[i + 1];
    d[kMaxPolyDegree - 1] = 0;
    uint64_t r = 0;
    for (int i = 0; i < kMaxPolyDegree; ++i) r |= uint64_t(d[i]) << (8 * i);
    out = r | (m & 0xff00000000000000ULL);
    return true;
}

/// Iterate distinct variables of m as (var, exponent) pairs.
inline void foreach_var(uint64_t m, const std::function<void(int, int)>& fn) {
    int i = 0;
    while (i < kMaxPolyDegree) {
        uint8_t d = uint8_t((m >> (8 * i)) & 0xff);
        if (d == 0) break;
        int e = 1;
        while (i + e < kMaxPolyDegree && uint8_t((m >> (8 * (i + e))) & 0xff) == d) ++e;
        fn(int(d) - 1, e);
        i += e;
    }
}

}  // namespace mono

/// Sparse polynomial: sorted (monomial, coefficient) table, zero-free.
class ScalarPoly {
public:
    ScalarPoly() = default;
    static ScalarPoly constant(cplx c);
    static ScalarPoly variable(int v);
    static ScalarPoly monomial(uint64_t m, cplx c);

    const std::vector<std::pair<uint64_t, cplx>>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }

    cplx coeff(uint64_t m) const;
    void add_term(uint64_t m, cplx c);  // accumulate one term (keeps order)

    ScalarPoly operator+(const ScalarPoly& o) const;
    ScalarPoly operator-(const ScalarPoly& o) const;
    ScalarPoly& operator+=(const ScalarPoly& o);
    ScalarPoly operator*(cplx c) const;
    ScalarPoly mul(const ScalarPoly& o, int cap) const;

    /// d/d(var v): exponent-weighted divisions.
    ScalarPoly derivative(int v) const;

    /// coefficientwise absolute value
    ScalarPoly majorant() const;

    /// keep monomials with pred(m) true
    ScalarPoly filter(const std::function<bool(uint64_t)>& pred) const;
    /// multiply each coefficient by fn(m)
    ScalarPoly map_coeff(const std::function<cplx(uint64_t, cplx)>& fn) const;

    ScalarPoly degree_part(int d) const;
    ScalarPoly degree_leq(int d) const;
    int max_degree() const;
    int min_degree() const;  // 0 for the empty polynomial

    /// integrate in t: t^p -> t^{p+1}/(p+1)
    ScalarPoly t_integrate() const;
    /// substitute t := tval
    ScalarPoly t_eval(double tval) const;
    int max_tpow() const;

    double max_abs_coeff() const;
    double sum_abs_coeff() const;

    /// evaluate at numeric variable values (t must have been eliminated)
    cplx eval(const std::vector<cplx>& vars) const;

    void prune(double tol = kPruneTol);

private:
    std::vector<std::pair<uint64_t, cplx>> terms_;
    void normalize();  // sort + combine + prune
    friend ScalarPoly poly_sum_raw(std::vector<std::pair<uint64_t, cplx>> raw);
};

/// Assemble from an unsorted term list (combines duplicates, prunes).
ScalarPoly poly_sum_raw(std::vector<std::pair<uint64_t, cplx>> raw);

}  // namespace birknls
