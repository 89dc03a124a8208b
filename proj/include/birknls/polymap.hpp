//==============================================================================
// polymap.hpp
// Polynomial maps of the truncated phase space into itself and polynomial
// operator fields, plus the calculus the normalization pipeline needs:
// composition, near-identity inversion, differentials and adjoints,
// majorants, tame-norm estimates, Picard flows, torus averaging and the
// Poisson bracket.
//
// Slot convention: slot = ch * (2J+1) + (j+J), ch = 0 for the xi channel and
// 1 for eta.  A map F assigns a ScalarPoly to every output slot; an operator
// field assigns one to every (output slot, input slot) pair.
//
// All truncation is silent and by design: every operation taking a cap is
// exact through that total degree and discards everything above it.
//==============================================================================
#pragma once

#include <Eigen/Dense>

#include "birknls/poly.hpp"
#include "birknls/seqspace.hpp"

namespace birknls {

struct SlotSpace {
    int J = 0;
    int mpc() const { return 2 * J + 1; }
    int nslots() const { return 2 * mpc(); }
    int var(int ch, int j) const { return ch * mpc() + (j + J); }
    int channel_of(int v) const { return v / mpc(); }
    int mode_of(int v) const { return v % mpc() - J; }
    int mirror(int v) const { return (1 - channel_of(v)) * mpc() + (v % mpc()); }
};

/// Map (or vector field) with one polynomial per output slot.
struct PolyMap {
    SlotSpace space;
    int cap = 5;
    std::vector<ScalarPoly> comp;

    PolyMap() = default;
    PolyMap(SlotSpace s, int cap_) : space(s), cap(cap_), comp(s.nslots()) {}

    ScalarPoly& at(int ch, int j) { return comp[space.var(ch, j)]; }
    const ScalarPoly& at(int ch, int j) const { return comp[space.var(ch, j)]; }
};

/// Operator-valued polynomial: entries (out, in) -> ScalarPoly, stored dense.
struct OperatorPoly {
    SlotSpace space;
    int cap = 5;
    std::vector<ScalarPoly> entry;  // row-major [out * nslots + in]

    OperatorPoly() = default;
    OperatorPoly(SlotSpace s, int cap_) : space(s), cap(cap_), entry(size_t(s.nslots()) * s.nslots()) {}

    ScalarPoly& at(int out, int in) { return entry[size_t(out) * space.nslots() + in]; }
    const ScalarPoly& at(int out, int in) const { return entry[size_t(out) * space.nslots() + in]; }
};

// ---- construction ----------------------------------------------------------

PolyMap identity_map(SlotSpace s, int cap);
/// E0 = diag(+i on xi slots, -i on eta slots); represents omega0.
OperatorPoly e0_operator(SlotSpace s, int cap);
OperatorPoly identity_operator(SlotSpace s, int cap);

// ---- algebra ---------------------------------------------------------------

PolyMap map_add(const PolyMap& a, const PolyMap& b);
PolyMap map_sub(const PolyMap& a, const PolyMap& b);
PolyMap map_scale(const PolyMap& a, cplx c);

/// Taylor coefficients of F o G, exact through degree cap.
PolyMap compose(const PolyMap& F, const PolyMap& G, int cap);
ScalarPoly compose_scalar(const ScalarPoly& f, const PolyMap& G, int cap);

bool is_near_identity(const PolyMap& F, double tol = 1e-12);

/// Inverse of Phi = 1 + F with F = O(zeta^2): returns 1 - G with
/// (1+F) o (1-G) = 1 through degree cap.  Rejects non-near-identity input.
PolyMap invert_near_identity(const PolyMap& Phi, int cap);

/// Entrywise partial derivatives: dF[out][in] = d F_out / d var_in.
OperatorPoly differential(const PolyMap& F);

/// Adjoint w.r.t. the real pairing 2 Re sum: block swap + slot transpose,
/// no coefficient conjugation (entries are functions of zeta).
OperatorPoly bstar(const OperatorPoly& A);

OperatorPoly op_add(const OperatorPoly& a, const OperatorPoly& b);
OperatorPoly op_sub(const OperatorPoly& a, const OperatorPoly& b);
OperatorPoly op_scale(const OperatorPoly& a, cplx c);
OperatorPoly op_mul(const OperatorPoly& a, const OperatorPoly& b, int cap);
/// Compose every entry with the map G (evaluation point change).
OperatorPoly op_compose(const OperatorPoly& A, const PolyMap& G, int cap);
/// A(zeta) applied to the vector field F(zeta).
PolyMap op_apply(const OperatorPoly& A, const PolyMap& F, int cap);
/// Multiply every entry by t^p.
OperatorPoly op_times_tpow(const OperatorPoly& A, int p);
PolyMap map_times_tpow(const PolyMap& F, int p);

PolyMap map_majorant(const PolyMap& F);
OperatorPoly op_majorant(const OperatorPoly& A);

double map_max_abs_coeff(const PolyMap& F);
double op_max_abs_coeff(const OperatorPoly& A);
PolyMap map_degree_leq(const PolyMap& F, int d);
OperatorPoly op_degree_leq(const OperatorPoly& A, int d);

// ---- evaluation ------------------------------------------------------------

std::vector<cplx> state_vars(const TruncState& z);           // var-indexed values
TruncState vars_to_state(const std::vector<cplx>& v, int J);
TruncState map_eval(const PolyMap& F, const TruncState& z);
Eigen::MatrixXcd op_eval(const OperatorPoly& A, const TruncState& z);

// ---- averaging and rotations -----------------------------------------------

/// Phase count of a monomial under the rotation phi_l^t, including the
/// output-slot contribution for vector- and operator-valued objects.
int phase_count(uint64_t m, const SlotSpace& s, int l);

ScalarPoly average_Ml(const ScalarPoly& g, const SlotSpace& s, int l);
ScalarPoly average_M(const ScalarPoly& g, const SlotSpace& s);
PolyMap average_Ml(const PolyMap& F, int l);
PolyMap average_M(const PolyMap& F);
OperatorPoly average_Ml(const OperatorPoly& A, int l);
OperatorPoly average_M(const OperatorPoly& A);

/// L_j g = (1/2pi) int_0^{2pi} t g(phi_j^t .) dt: coefficient factor pi on
/// resonant monomials, 1/(i m) otherwise.
ScalarPoly op_Lj(const ScalarPoly& g, const SlotSpace& s, int j);

/// d/d theta_j along phi_j^t: coefficient factor i m.
ScalarPoly theta_derivative(const ScalarPoly& g, const SlotSpace& s, int j);

/// Numeric rotation phi_l^t on a state.
TruncState rotate_state(const TruncState& z, int l, double t);

// ---- gradient, Hamiltonian fields, bracket ---------------------------------

/// Pairing gradient: <grad f, v> = df(v) with the 2 Re pairing.  In the
/// doubled coordinates the xi component is df/d eta_j and vice versa.
PolyMap gradient(const ScalarPoly& f, SlotSpace s, int cap);

/// Global factor relating J grad(-I_l) to the unit rotation field i xi_l.
/// Determined from the flow-periodicity anchor, not hardcoded.
double hamiltonian_calibration();

/// X_F = kappa J grad F with kappa from hamiltonian_calibration().
PolyMap hamiltonian_field(const ScalarPoly& f, SlotSpace s, int cap);

/// {F, G} w.r.t. omega0 under the calibrated convention.
ScalarPoly poisson_bracket(const ScalarPoly& F, const ScalarPoly& G,
                           const SlotSpace& s, int cap);

/// Action polynomial I_l = xi_l eta_l / 2.
ScalarPoly action_poly(const SlotSpace& s, int l);

// ---- flow ------------------------------------------------------------------

/// Time-1 flow of a vector field with polynomial t-dependence and zero
/// constant and linear part.  Degree-by-degree Picard recursion; every
/// t-integral is done symbolically, so the result is exact through cap.
PolyMap flow_time1(const PolyMap& Y, int cap);

/// Full time-polynomial flow (t left in the coefficients), for tests.
PolyMap flow_timepoly(const PolyMap& Y, int cap);

/// Flow of a constant linear field z' = A z, evaluated numerically at time t
/// by scaling-and-squaring.  Test path for linear rotation fields.
Eigen::MatrixXcd linear_flow(const Eigen::MatrixXcd& A, double t);

// ---- reality structure -----------------------------------------------------

/// Conjugate-mirror: swap xi <-> eta in every monomial and conjugate the
/// coefficient.  A map is real for real sequences iff its eta-channel equals
/// the mirror of its xi-channel.
ScalarPoly conj_mirror(const ScalarPoly& f, const SlotSpace& s);
double reality_defect(const PolyMap& F);
/// Rebuild the eta channel as the mirror of the xi channel.
PolyMap enforce_reality(const PolyMap& F);

// ---- tame norms ------------------------------------------------------------

struct TameNormReport {
    double abs_part = 0;    // |F|_rho (upper or sampled, see flag)
    double tame_part = 0;   // |F|^T_rho
    double combined = 0;    // |F|_rho + rho |F|^T_rho
};

/// Per-monomial worst-case upper bound of the tame norm of F over the ball
/// B^{p,u}(rho) intersected with l^{p,v}, target weight w.
TameNormReport tame_norm_upper(const PolyMap& F, double rho, const Weight& u,
                               const Weight& v, const Weight& w, double p);

/// Certified lower bound: max over concentrated and seeded random states.
TameNormReport tame_norm_sample(const PolyMap& F, double rho, const Weight& u,
                                const Weight& v, const Weight& w, double p,
                                uint64_t seed, int nsamples = 64);

}  // namespace birknls
