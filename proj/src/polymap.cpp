#include "birknls/polymap.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "birknls/util.hpp"

namespace birknls {

PolyMap identity_map(SlotSpace s, int cap) {
    PolyMap F(s, cap);
    for (int v = 0; v < s.nslots(); ++v) F.comp[v] = ScalarPoly::variable(v);
    return F;
}

OperatorPoly e0_operator(SlotSpace s, int cap) {
    OperatorPoly E(s, cap);
    for (int v = 0; v < s.nslots(); ++v)
        E.at(v, v) = ScalarPoly::constant(s.channel_of(v) == 0 ? cplx(0, 1) : cplx(0, -1));
    return E;
}

OperatorPoly identity_operator(SlotSpace s, int cap) {
    OperatorPoly E(s, cap);
    for (int v = 0; v < s.nslots(); ++v) E.at(v, v) = ScalarPoly::constant(1.0);
    return E;
}

PolyMap map_add(const PolyMap& a, const PolyMap& b) {
    PolyMap r = a;
    for (int v = 0; v < a.space.nslots(); ++v) r.comp[v] += b.comp[v];
    return r;
}

PolyMap map_sub(const PolyMap& a, const PolyMap& b) {
    PolyMap r = a;
    for (int v = 0; v < a.space.nslots(); ++v) r.comp[v] = r.comp[v] - b.comp[v];
    return r;
}

PolyMap map_scale(const PolyMap& a, cplx c) {
    PolyMap r = a;
    for (auto& f : r.comp) f = f * c;
    return r;
}

// Substitute G's components into f.  Per-variable powers are cached, so a
// monomial of degree d costs at most d capped multiplications.
ScalarPoly compose_scalar(const ScalarPoly& f, const PolyMap& G, int cap) {
    std::map<std::pair<int, int>, ScalarPoly> powers;  // (var, exp) -> G_var^exp
    std::function<const ScalarPoly&(int, int)> power = [&](int v, int e) -> const ScalarPoly& {
        auto key = std::make_pair(v, e);
        auto it = powers.find(key);
        if (it != powers.end()) return it->second;
        ScalarPoly p = (e == 1) ? G.comp[v] : power(v, e - 1).mul(G.comp[v], cap);
        return powers.emplace(key, std::move(p)).first->second;
    };
    std::vector<std::pair<uint64_t, cplx>> raw;
    for (const auto& term : f.terms()) {
        ScalarPoly prod = ScalarPoly::constant(1.0);
        bool first = true;
        mono::foreach_var(term.first, [&](int v, int e) {
            const ScalarPoly& pw = power(v, e);
            prod = first ? pw : prod.mul(pw, cap);
            first = false;
        });
        int tp = mono::tpow(term.first);
        for (const auto& pt : prod.terms()) {
            uint64_t m = tp ? mono::t_times(pt.first, tp) : pt.first;
            raw.push_back({m, term.second * pt.second});
        }
    }
    return poly_sum_raw(std::move(raw));
}

PolyMap compose(const PolyMap& F, const PolyMap& G, int cap) {
    if (F.space.J != G.space.J) throw std::invalid_argument("compose: cutoff mismatch");
    PolyMap r(F.space, cap);
    for (int v = 0; v < F.space.nslots(); ++v)
        r.comp[v] = compose_scalar(F.comp[v], G, cap);
    return r;
}

bool is_near_identity(const PolyMap& F, double tol) {
    const SlotSpace& s = F.space;
    for (int v = 0; v < s.nslots(); ++v) {
        for (const auto& t : F.comp[v].terms()) {
            int d = mono::degree(t.first);
            if (d == 0) return false;
            if (d == 1) {
                cplx want = (t.first == mono::var(v)) ? cplx(1, 0) : cplx(0, 0);
                if (std::abs(t.second - want) > tol) return false;
            }
        }
        if (std::abs(F.comp[v].coeff(mono::var(v)) - cplx(1, 0)) > tol) return false;
    }
    return true;
}

PolyMap invert_near_identity(const PolyMap& Phi, int cap) {
    if (!is_near_identity(Phi))
        throw std::invalid_argument("invert_near_identity: map is not 1 + O(zeta^2)");
    const SlotSpace& s = Phi.space;
    PolyMap id = identity_map(s, cap);
    PolyMap F = map_sub(Phi, id);  // nonlinear part, O(zeta^2)
    // fixed point G = F o (1 - G); each pass extends the exact degree range
    PolyMap G(s, cap);
    for (int pass = 0; pass < cap; ++pass) {
        PolyMap Gn = compose(F, map_sub(id, G), cap);
        double delta = map_max_abs_coeff(map_sub(Gn, G));
        G = std::move(Gn);
        if (delta < 1e-15) break;
    }
    return map_sub(id, G);
}

OperatorPoly differential(const PolyMap& F) {
    OperatorPoly A(F.space, F.cap);
    for (int out = 0; out < F.space.nslots(); ++out)
        for (int in = 0; in < F.space.nslots(); ++in)
            A.at(out, in) = F.comp[out].derivative(in);
    return A;
}

OperatorPoly bstar(const OperatorPoly& A) {
    const SlotSpace& s = A.space;
    OperatorPoly R(s, A.cap);
    for (int out = 0; out < s.nslots(); ++out)
        for (int in = 0; in < s.nslots(); ++in)
            R.at(out, in) = A.at(s.mirror(in), s.mirror(out));
    return R;
}

OperatorPoly op_add(const OperatorPoly& a, const OperatorPoly& b) {
    OperatorPoly r = a;
    for (size_t i = 0; i < r.entry.size(); ++i) r.entry[i] += b.entry[i];
    return r;
}

OperatorPoly op_sub(const OperatorPoly& a, const OperatorPoly& b) {
    OperatorPoly r = a;
    for (size_t i = 0; i < r.entry.size(); ++i) r.entry[i] = r.entry[i] - b.entry[i];
    return r;
}

OperatorPoly op_scale(const OperatorPoly& a, cplx c) {
    OperatorPoly r = a;
    for (auto& f : r.entry) f = f * c;
    return r;
}

OperatorPoly op_mul(const OperatorPoly& a, const OperatorPoly& b, int cap) {
    const int n = a.space.nslots();
    OperatorPoly r(a.space, cap);
    for (int out = 0; out < n; ++out)
        for (int in = 0; in < n; ++in) {
            ScalarPoly acc;
            for (int k = 0; k < n; ++k) {
                if (a.at(out, k).empty() || b.at(k, in).empty()) continue;
                acc += a.at(out, k).mul(b.at(k, in), cap);
            }
            r.at(out, in) = std::move(acc);
        }
    return r;
}

OperatorPoly op_compose(const OperatorPoly& A, const PolyMap& G, int cap) {
    OperatorPoly r(A.space, cap);
    for (size_t i = 0; i < A.entry.size(); ++i)
        if (!A.entry[i].empty()) r.entry[i] = compose_scalar(A.entry[i], G, cap);
    return r;
}

PolyMap op_apply(const OperatorPoly& A, const PolyMap& F, int cap) {
    const int n = A.space.nslots();
    PolyMap r(A.space, cap);
    for (int out = 0; out < n; ++out) {
        ScalarPoly acc;
        for (int in = 0; in < n; ++in) {
            if (A.at(out, in).empty() || F.comp[in].empty()) continue;
            acc += A.at(out, in).mul(F.comp[in], cap);
        }
        r.comp[out] = std::move(acc);
    }
    return r;
}

static ScalarPoly poly_times_tpow(const ScalarPoly& f, int p) {
    std::vector<std::pair<uint64_t, cplx>> raw;
    raw.reserve(f.size());
    for (const auto& t : f.terms()) raw.push_back({mono::t_times(t.first, p), t.second});
    return poly_sum_raw(std::move(raw));
}

OperatorPoly op_times_tpow(const OperatorPoly& A, int p) {
    OperatorPoly r = A;
    for (auto& f : r.entry) f = poly_times_tpow(f, p);
    return r;
}

PolyMap map_times_tpow(const PolyMap& F, int p) {
    PolyMap r = F;
    for (auto& f : r.comp) f = poly_times_tpow(f, p);
    return r;
}

PolyMap map_majorant(const PolyMap& F) {
    PolyMap r = F;
    for (auto& f : r.comp) f = f.majorant();
    return r;
}

OperatorPoly op_majorant(const OperatorPoly& A) {
    OperatorPoly r = A;
    for (auto& f : r.entry) f = f.majorant();
    return r;
}

double map_max_abs_coeff(const PolyMap& F) {
    double m = 0;
    for (const auto& f : F.comp) m = std::max(m, f.max_abs_coeff());
    return m;
}

double op_max_abs_coeff(const OperatorPoly& A) {
    double m = 0;
    for (const auto& f : A.entry) m = std::max(m, f.max_abs_coeff());
    return m;
}

PolyMap map_degree_leq(const PolyMap& F, int d) {
    PolyMap r = F;
    for (auto& f : r.comp) f = f.degree_leq(d);
    return r;
}

OperatorPoly op_degree_leq(const OperatorPoly& A, int d) {
    OperatorPoly r = A;
    for (auto& f : r.entry) f = f.degree_leq(d);
    return r;
}

std::vector<cplx> state_vars(const TruncState& z) {
    const int mpc = 2 * z.J() + 1;
    std::vector<cplx> v(2 * mpc);
    for (int m = 0; m < mpc; ++m) {
        v[m] = z.xi_raw()[m];
        v[mpc + m] = z.eta_raw()[m];
    }
    return v;
}

TruncState vars_to_state(const std::vector<cplx>& v, int J) {
    const int mpc = 2 * J + 1;
    TruncState z(J);
    for (int m = 0; m < mpc; ++m) {
        z.set_xi(m - J, v[m]);
        z.set_eta(m - J, v[mpc + m]);
    }
    return z;
}

TruncState map_eval(const PolyMap& F, const TruncState& z) {
    auto vars = state_vars(z);
    std::vector<cplx> out(F.space.nslots());
    for (int v = 0; v < F.space.nslots(); ++v) out[v] = F.comp[v].eval(vars);
    return vars_to_state(out, F.space.J);
}

Eigen::MatrixXcd op_eval(const OperatorPoly& A, const TruncState& z) {
    auto vars = state_vars(z);
    const int n = A.space.nslots();
    Eigen::MatrixXcd M(n, n);
    for (int out = 0; out < n; ++out)
        for (int in = 0; in < n; ++in) M(out, in) = A.at(out, in).eval(vars);
    return M;
}

int phase_count(uint64_t m, const SlotSpace& s, int l) {
    int ph = 0;
    mono::foreach_var(m, [&](int v, int e) {
        if (s.mode_of(v) == l) ph += (s.channel_of(v) == 0 ? e : -e);
    });
    return ph;
}

// slot contribution: +1 for (l, xi) outputs, -1 for (l, eta)
static int slot_phase(const SlotSpace& s, int slot, int l) {
    if (s.mode_of(slot) != l) return 0;
    return s.channel_of(slot) == 0 ? 1 : -1;
}

ScalarPoly average_Ml(const ScalarPoly& g, const SlotSpace& s, int l) {
    return g.filter([&](uint64_t m) { return phase_count(m, s, l) == 0; });
}

ScalarPoly average_M(const ScalarPoly& g, const SlotSpace& s) {
    return g.filter([&](uint64_t m) {
        for (int l = -s.J; l <= s.J; ++l)
            if (phase_count(m, s, l) != 0) return false;
        return true;
    });
}

PolyMap average_Ml(const PolyMap& F, int l) {
    PolyMap r = F;
    for (int slot = 0; slot < F.space.nslots(); ++slot) {
        int sp = slot_phase(F.space, slot, l);
        r.comp[slot] = F.comp[slot].filter(
            [&](uint64_t m) { return phase_count(m, F.space, l) - sp == 0; });
    }
    return r;
}

PolyMap average_M(const PolyMap& F) {
    PolyMap r = F;
    for (int l = -F.space.J; l <= F.space.J; ++l) r = average_Ml(r, l);
    return r;
}

OperatorPoly average_Ml(const OperatorPoly& A, int l) {
    OperatorPoly r = A;
    const int n = A.space.nslots();
    for (int out = 0; out < n; ++out)
        for (int in = 0; in < n; ++in) {
            int sp = slot_phase(A.space, out, l) - slot_phase(A.space, in, l);
            r.at(out, in) = A.at(out, in).filter(
                [&](uint64_t m) { return phase_count(m, A.space, l) - sp == 0; });
        }
    return r;
}

OperatorPoly average_M(const OperatorPoly& A) {
    OperatorPoly r = A;
    for (int l = -A.space.J; l <= A.space.J; ++l) r = average_Ml(r, l);
    return r;
}

ScalarPoly op_Lj(const ScalarPoly& g, const SlotSpace& s, int j) {
    return g.map_coeff([&](uint64_t m, cplx c) {
        int ph = phase_count(m, s, j);
        if (ph == 0) return c * M_PI;
        return c / cplx(0, double(ph));
    });
}

ScalarPoly theta_derivative(const ScalarPoly& g, const SlotSpace& s, int j) {
    return g.map_coeff([&](uint64_t m, cplx c) {
        return c * cplx(0, double(phase_count(m, s, j)));
    });
}

TruncState rotate_state(const TruncState& z, int l, double t) {
    TruncState r = z;
    r.set_xi(l, z.xi(l) * std::exp(cplx(0, t)));
    r.set_eta(l, z.eta(l) * std::exp(cplx(0, -t)));
    return r;
}

PolyMap gradient(const ScalarPoly& f, SlotSpace s, int cap) {
    PolyMap g(s, cap);
    for (int j = -s.J; j <= s.J; ++j) {
        g.at(0, j) = f.derivative(s.var(1, j));  // d f / d eta_j
        g.at(1, j) = f.derivative(s.var(0, j));  // d f / d xi_j
    }
    return g;
}

double hamiltonian_calibration() {
    // Anchor: the flow of X_{-I_l} must be the 2pi-periodic rotation with
    // [X_{-I_l}]_(l,xi) = i xi_l.  Computed on a single-mode space.
    SlotSpace s{0};
    ScalarPoly minusI = action_poly(s, 0) * cplx(-1, 0);
    PolyMap g = gradient(minusI, s, 3);
    // uncalibrated field: J grad with J = diag(-i, +i)
    cplx raw = g.at(0, 0).coeff(mono::var(s.var(0, 0))) * cplx(0, -1);
    cplx kappa = cplx(0, 1) / raw;
    if (std::abs(kappa.imag()) > 1e-14 || kappa.real() <= 0)
        throw std::logic_error("hamiltonian_calibration: anchor not met");
    return kappa.real();
}

PolyMap hamiltonian_field(const ScalarPoly& f, SlotSpace s, int cap) {
    static const double kappa = hamiltonian_calibration();
    PolyMap g = gradient(f, s, cap);
    PolyMap X(s, cap);
    for (int j = -s.J; j <= s.J; ++j) {
        X.at(0, j) = g.at(0, j) * cplx(0, -kappa);
        X.at(1, j) = g.at(1, j) * cplx(0, kappa);
    }
    return X;
}

ScalarPoly poisson_bracket(const ScalarPoly& F, const ScalarPoly& G,
                           const SlotSpace& s, int cap) {
    static const double kappa = hamiltonian_calibration();
    ScalarPoly acc;
    for (int j = -s.J; j <= s.J; ++j) {
        int xv = s.var(0, j), ev = s.var(1, j);
        acc += F.derivative(ev).mul(G.derivative(xv), cap);
        acc += F.derivative(xv).mul(G.derivative(ev), cap) * cplx(-1, 0);
    }
    return acc * cplx(0, kappa);
}

ScalarPoly action_poly(const SlotSpace& s, int l) {
    uint64_t m;
    mono::mul(mono::var(s.var(0, l)), mono::var(s.var(1, l)), 2, m);
    return ScalarPoly::monomial(m, cplx(0.5, 0));
}

static void check_flow_field(const PolyMap& Y) {
    for (const auto& f : Y.comp)
        if (!f.empty() && f.min_degree() < 2)
            throw std::invalid_argument("flow: vector field must vanish to second order");
}

PolyMap flow_timepoly(const PolyMap& Y, int cap) {
    check_flow_field(Y);
    const SlotSpace& s = Y.space;
    PolyMap id = identity_map(s, cap);
    PolyMap u = id;
    for (int pass = 0; pass < cap; ++pass) {
        PolyMap rhs = compose(Y, u, cap);
        PolyMap next = id;
        for (int v = 0; v < s.nslots(); ++v) next.comp[v] += rhs.comp[v].t_integrate();
        double delta = map_max_abs_coeff(map_sub(next, u));
        u = std::move(next);
        if (delta < 1e-15) break;
    }
    return u;
}

PolyMap flow_time1(const PolyMap& Y, int cap) {
    PolyMap u = flow_timepoly(Y, cap);
    for (auto& f : u.comp) f = f.t_eval(1.0);
    return u;
}

Eigen::MatrixXcd linear_flow(const Eigen::MatrixXcd& A, double t) {
    Eigen::MatrixXcd B = A * t;
    int squarings = 0;
    double nrm = B.cwiseAbs().sum();
    while (nrm > 0.5) { B *= 0.5; nrm *= 0.5; ++squarings; }
    const int n = int(A.rows());
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n), acc = term;
    for (int k = 1; k <= 20; ++k) {
        term = term * B / double(k);
        acc += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    for (int i = 0; i < squarings; ++i) acc = acc * acc;
    return acc;
}

ScalarPoly conj_mirror(const ScalarPoly& f, const SlotSpace& s) {
    std::vector<std::pair<uint64_t, cplx>> raw;
    for (const auto& t : f.terms()) {
        std::vector<int> vars;
        mono::foreach_var(t.first, [&](int v, int e) {
            for (int i = 0; i < e; ++i) vars.push_back(s.mirror(v));
        });
        uint64_t m = mono::set_tpow(mono::from_vars(vars), mono::tpow(t.first));
        raw.push_back({m, std::conj(t.second)});
    }
    return poly_sum_raw(std::move(raw));
}

double reality_defect(const PolyMap& F) {
    double d = 0;
    for (int j = -F.space.J; j <= F.space.J; ++j) {
        ScalarPoly diff = F.at(1, j) - conj_mirror(F.at(0, j), F.space);
        d = std::max(d, diff.max_abs_coeff());
    }
    return d;
}

PolyMap enforce_reality(const PolyMap& F) {
    PolyMap r = F;
    for (int j = -F.space.J; j <= F.space.J; ++j)
        r.at(1, j) = conj_mirror(F.at(0, j), F.space);
    return r;
}

// ---- tame norms -------------------------------------------------------------

TameNormReport tame_norm_upper(const PolyMap& F, double rho, const Weight& u,
                               const Weight& v, const Weight& w, double p) {
    const SlotSpace& s = F.space;
    // Per slot and degree: bound |F_slot^n(zeta)| by sum_m |c_m| prod (rho/u)
    // over the ball, and for the tame part pull one variable out through v.
    int maxdeg = 0;
    for (const auto& f : F.comp) maxdeg = std::max(maxdeg, f.max_degree());
    double abs_part = 0, tame_part = 0;
    for (int d = 1; d <= maxdeg; ++d) {
        std::vector<double> slot_abs(s.nslots(), 0), slot_tame(s.nslots(), 0);
        for (int slot = 0; slot < s.nslots(); ++slot) {
            const ScalarPoly part = F.comp[slot].degree_part(d);
            for (const auto& t : part.terms()) {
                double c = std::abs(t.second);
                double prod_u = 1;
                // minimizing u/v over the monomial's variables gives the best
                // admissible factor when one entry is routed through the
                // v-norm and the rest stay in the u-ball
                double minratio = 1e300;
                mono::foreach_var(t.first, [&](int var, int e) {
                    double uw = u(s.mode_of(var));
                    for (int i = 0; i < e; ++i) prod_u *= uw;
                    minratio = std::min(minratio, uw / v(s.mode_of(var)));
                });
                slot_abs[slot] += c / prod_u;
                slot_tame[slot] += c / prod_u * minratio;
            }
        }
        double na = 0, nt = 0;
        for (int slot = 0; slot < s.nslots(); ++slot) {
            int mode = s.mode_of(slot);
            na += std::pow(u(mode) * slot_abs[slot], p);
            nt += std::pow(w(mode) * slot_tame[slot], p);
        }
        abs_part += std::pow(na, 1.0 / p) * std::pow(rho, d);
        tame_part += std::pow(nt, 1.0 / p) * std::pow(rho, d - 1);
    }
    return {abs_part, tame_part, abs_part + rho * tame_part};
}

TameNormReport tame_norm_sample(const PolyMap& F, double rho, const Weight& u,
                                const Weight& v, const Weight& w, double p,
                                uint64_t seed, int nsamples) {
    const SlotSpace& s = F.space;
    const int J = s.J;
    PolyMap M = map_majorant(F);
    NormSpec nu(p, u), nv(p, v), nw(p, w);
    double abs_part = 0, tame_part = 0;

    auto visit = [&](const TruncState& z) {
        TruncState y = map_eval(M, z);
        double nrm_u = state_norm(y, nu);
        double nrm_w = state_norm(y, nw);
        double denom = state_norm(z, nv);
        abs_part = std::max(abs_part, nrm_u);
        if (denom > 0) tame_part = std::max(tame_part, nrm_w / denom);
    };

    // extreme points: all mass on one mode (both channels, magnitudes only)
    for (int j = -J; j <= J; ++j) {
        TruncState z(J);
        double a = rho / (2.0 * u(j));
        z.set_xi(j, a);
        z.set_eta(j, a);
        visit(z);
    }
    Rng rng(seed);
    for (int k = 0; k < nsamples; ++k) {
        TruncState z = random_real_state(J, rho * rng.uniform(0.5, 1.0), rng);
        // majorant evaluation uses moduli; replace entries by their moduli
        for (int j = -J; j <= J; ++j) {
            z.set_xi(j, std::abs(z.xi(j)));
            z.set_eta(j, std::abs(z.eta(j)));
        }
        // rescale into the u-ball
        double nrm = state_norm(z, nu);
        if (nrm > 0) z *= rho / nrm;
        visit(z);
    }
    return {abs_part, tame_part, abs_part + rho * tame_part};
}

TruncState random_real_state(int J, double rho, Rng& rng) {
    TruncState z(J);
    for (int j = -J; j <= J; ++j) {
        double re = rng.uniform(-1, 1), im = rng.uniform(-1, 1);
        z.set_xi(j, cplx(re, im));
    }
    z.make_real();
    NormSpec l2(2.0, Weight::unit());
    double nrm = state_norm(z, l2);
    if (nrm > 0) z *= rho / nrm;
    return z;
}

}  // namespace birknls
