#include "doctest.h"

#include <cmath>

#include "birknls/polymap.hpp"
#include "birknls/util.hpp"

using namespace birknls;

namespace {

// random near-identity map with a reality-structured cubic part
PolyMap random_cubic_map(SlotSpace s, int cap, uint64_t seed) {
    Rng rng(seed);
    PolyMap F = identity_map(s, cap);
    for (int j = -s.J; j <= s.J; ++j) {
        for (int trial = 0; trial < 6; ++trial) {
            std::vector<int> vars;
            for (int k = 0; k < 3; ++k) {
                int mode = int(rng.next_u64() % (2 * s.J + 1)) - s.J;
                int ch = int(rng.next_u64() % 2);
                vars.push_back(s.var(ch, mode));
            }
            cplx c(rng.uniform(-1, 1), rng.uniform(-1, 1));
            F.at(0, j).add_term(mono::from_vars(vars), c * 0.3);
        }
    }
    return enforce_reality(F);
}

// one-mode scalar polynomial map zeta -> zeta + c zeta^3 on slot (0, xi),
// mirrored on the eta channel so the map is real for real sequences
PolyMap one_mode_cubic(cplx c, int cap) {
    SlotSpace s{0};
    PolyMap F = identity_map(s, cap);
    int x = s.var(0, 0);
    F.comp[x].add_term(mono::from_vars({x, x, x}), c);
    return enforce_reality(F);
}

}  // namespace

TEST_CASE("compose with identity and cap-aware coefficients") {
    SlotSpace s{1};
    PolyMap F = random_cubic_map(s, 5, 42);
    PolyMap id = identity_map(s, 5);
    CHECK(map_max_abs_coeff(map_sub(compose(F, id, 5), F)) < 1e-14);
    CHECK(map_max_abs_coeff(map_sub(compose(id, F, 5), F)) < 1e-14);
}

TEST_CASE("one-mode composition reproduces hand substitution") {
    // F = G = zeta + zeta^3; F(G) = zeta + 2 zeta^3 + 3 zeta^5 + ... truncated
    PolyMap F = one_mode_cubic(1.0, 5);
    PolyMap H = compose(F, F, 5);
    SlotSpace s{0};
    int x = s.var(0, 0);
    CHECK(H.comp[x].coeff(mono::var(x)) == cplx(1, 0));
    CHECK(H.comp[x].coeff(mono::from_vars({x, x, x})) == cplx(2, 0));
    CHECK(H.comp[x].coeff(mono::from_vars({x, x, x, x, x})) == cplx(3, 0));
}

TEST_CASE("compose is associative through the cap") {
    SlotSpace s{1};
    PolyMap A = random_cubic_map(s, 5, 1);
    PolyMap B = random_cubic_map(s, 5, 2);
    PolyMap C = random_cubic_map(s, 5, 3);
    PolyMap lhs = compose(compose(A, B, 5), C, 5);
    PolyMap rhs = compose(A, compose(B, C, 5), 5);
    CHECK(map_max_abs_coeff(map_sub(lhs, rhs)) < 1e-12);
}

TEST_CASE("series reversion: inverse of zeta + c zeta^3") {
    cplx c(0.7, 0);
    PolyMap F = one_mode_cubic(c, 5);
    PolyMap G = invert_near_identity(F, 5);
    SlotSpace s{0};
    int x = s.var(0, 0);
    // Lagrange reversion: zeta - c zeta^3 + 3 c^2 zeta^5
    CHECK(std::abs(G.comp[x].coeff(mono::from_vars({x, x, x})) - (-c)) < 1e-14);
    CHECK(std::abs(G.comp[x].coeff(mono::from_vars({x, x, x, x, x})) - 3.0 * c * c) < 1e-13);

    CHECK(map_max_abs_coeff(map_sub(compose(F, G, 5), identity_map(s, 5))) < 1e-13);
    CHECK(map_max_abs_coeff(map_sub(compose(G, F, 5), identity_map(s, 5))) < 1e-13);
}

TEST_CASE("invert_near_identity is a two-sided inverse on random cubic maps") {
    SlotSpace s{1};
    PolyMap F = random_cubic_map(s, 5, 77);
    PolyMap G = invert_near_identity(F, 5);
    PolyMap id = identity_map(s, 5);
    CHECK(map_max_abs_coeff(map_sub(compose(F, G, 5), id)) < 1e-12);
    CHECK(map_max_abs_coeff(map_sub(compose(G, F, 5), id)) < 1e-12);

    PolyMap bad(s, 5);  // zero map, not near-identity
    CHECK_THROWS(invert_near_identity(bad, 5));
}

TEST_CASE("inverting the identity gives the identity") {
    SlotSpace s{1};
    PolyMap id = identity_map(s, 5);
    CHECK(map_max_abs_coeff(map_sub(invert_near_identity(id, 5), id)) < 1e-15);
}

TEST_CASE("differential entries and linear-map adjoint") {
    SlotSpace s{1};
    PolyMap F(s, 5);
    // slot (0, xi) = xi_0^2 eta_1 -> entry ((0,xi),(1,eta)) = xi_0^2
    int x0 = s.var(0, 0), e1 = s.var(1, 1);
    F.comp[x0] = ScalarPoly::monomial(mono::from_vars({x0, x0, e1}), 1.0);
    OperatorPoly d = differential(F);
    CHECK(d.at(x0, e1).coeff(mono::from_vars({x0, x0})) == cplx(1, 0));
    CHECK(d.at(x0, x0).coeff(mono::from_vars({x0, e1})) == cplx(2, 0));
}

TEST_CASE("adjoint pairing identity on random real triples") {
    SlotSpace s{1};
    PolyMap F = random_cubic_map(s, 5, 9);
    OperatorPoly dF = differential(F);
    OperatorPoly dFs = bstar(dF);
    Rng rng(10);
    for (int trial = 0; trial < 5; ++trial) {
        TruncState z = random_real_state(1, 0.8, rng);
        TruncState u = random_real_state(1, 1.0, rng);
        TruncState v = random_real_state(1, 1.0, rng);
        Eigen::MatrixXcd A = op_eval(dF, z);
        Eigen::MatrixXcd As = op_eval(dFs, z);
        Eigen::VectorXcd uv = Eigen::Map<const Eigen::VectorXcd>(state_vars(u).data(), s.nslots());
        Eigen::VectorXcd vv = Eigen::Map<const Eigen::VectorXcd>(state_vars(v).data(), s.nslots());
        Eigen::VectorXcd Au = A * uv, Asv = As * vv;
        std::vector<cplx> Au_s(Au.data(), Au.data() + Au.size());
        std::vector<cplx> Asv_s(Asv.data(), Asv.data() + Asv.size());
        double lhs = real_scalar_product(vars_to_state(Au_s, 1), v);
        double rhs = real_scalar_product(u, vars_to_state(Asv_s, 1));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("bstar of a constant linear map is the conjugate transpose") {
    SlotSpace s{0};
    OperatorPoly A(s, 3);
    // xi-block entry a, mirrored on the eta block for reality
    cplx a(1.5, -0.5);
    A.at(s.var(0, 0), s.var(0, 0)) = ScalarPoly::constant(a);
    A.at(s.var(1, 0), s.var(1, 0)) = ScalarPoly::constant(std::conj(a));
    OperatorPoly As = bstar(A);
    CHECK(As.at(s.var(0, 0), s.var(0, 0)).coeff(mono::kOne) == std::conj(a));
}

TEST_CASE("majorant: modulus coefficients, idempotence, pointwise bound") {
    SlotSpace s{1};
    PolyMap F = random_cubic_map(s, 5, 33);
    F.at(0, 0).add_term(mono::from_vars({s.var(0, 0), s.var(1, 1)}), cplx(0, -2));
    PolyMap M = map_majorant(F);
    CHECK(map_max_abs_coeff(map_sub(map_majorant(M), M)) == 0.0);
    Rng rng(34);
    for (int trial = 0; trial < 10; ++trial) {
        TruncState z = random_real_state(1, 0.5, rng);
        TruncState absz(1);
        for (int j = -1; j <= 1; ++j) {
            absz.set_xi(j, std::abs(z.xi(j)));
            absz.set_eta(j, std::abs(z.eta(j)));
        }
        TruncState Fz = map_eval(F, z), Mz = map_eval(M, absz);
        for (int j = -1; j <= 1; ++j) {
            CHECK(std::abs(Fz.xi(j)) <= std::abs(Mz.xi(j)) + 1e-12);
            CHECK(std::abs(Fz.eta(j)) <= std::abs(Mz.eta(j)) + 1e-12);
        }
    }
}

TEST_CASE("majorant subadditivity coefficientwise") {
    SlotSpace s{1};
    PolyMap F = random_cubic_map(s, 5, 35), G = random_cubic_map(s, 5, 36);
    PolyMap lhs = map_majorant(map_add(F, G));
    PolyMap rhs = map_add(map_majorant(F), map_majorant(G));
    for (int v = 0; v < s.nslots(); ++v)
        for (const auto& t : lhs.comp[v].terms())
            CHECK(t.second.real() <= rhs.comp[v].coeff(t.first).real() + 1e-14);
}

TEST_CASE("averaging: resonant filters and projection property") {
    SlotSpace s{2};
    int x1 = s.var(0, 1), e1 = s.var(1, 1);
    ScalarPoly res = ScalarPoly::monomial(mono::from_vars({x1, e1}), 1.0);
    CHECK(average_Ml(res, s, 1).size() == 1);  // xi_1 eta_1 is resonant
    ScalarPoly nonres = ScalarPoly::monomial(mono::from_vars({x1, x1, e1}), 1.0);
    CHECK(average_Ml(nonres, s, 1).empty());  // phase count 1

    PolyMap F = random_cubic_map(s, 5, 50);
    PolyMap M1 = average_Ml(F, 1);
    CHECK(map_max_abs_coeff(map_sub(average_Ml(M1, 1), M1)) < 1e-15);
}

TEST_CASE("fully averaged maps are rotation-invariant at t = 0.7") {
    SlotSpace s{1};
    PolyMap G = average_M(random_cubic_map(s, 5, 51));
    Rng rng(52);
    for (int l = -1; l <= 1; ++l) {
        TruncState z = random_real_state(1, 0.6, rng);
        TruncState lhs = map_eval(G, rotate_state(z, l, 0.7));
        TruncState rhs = rotate_state(map_eval(G, z), l, 0.7);
        for (int j = -1; j <= 1; ++j)
            CHECK(std::abs(lhs.xi(j) - rhs.xi(j)) < 1e-10 * (1 + std::abs(rhs.xi(j))));
    }
}

TEST_CASE("L_j factors: coefficient values and the homological identity") {
    SlotSpace s{1};
    int x1 = s.var(0, 1), e1 = s.var(1, 1), x0 = s.var(0, 0);

    // phase count 2 monomial: factor 1/(2i) = -i/2
    ScalarPoly g2 = ScalarPoly::monomial(mono::from_vars({x1, x1}), 1.0);
    CHECK(std::abs(op_Lj(g2, s, 1).coeff(mono::from_vars({x1, x1})) - cplx(0, -0.5)) < 1e-15);

    // quadrature oracle: (1/2pi) int_0^{2pi} t e^{imt} dt for m = 2
    const int Q = 1 << 14;
    cplx quad(0, 0);
    for (int q = 0; q < Q; ++q) {
        double t = 2 * M_PI * (q + 0.5) / Q;
        quad += t * std::exp(cplx(0, 2 * t));
    }
    quad /= double(Q);
    CHECK(std::abs(quad - cplx(0, -0.5)) < 1e-6);

    // resonant monomial: factor pi
    ScalarPoly g0 = ScalarPoly::monomial(mono::from_vars({x1, e1}), 1.0);
    CHECK(std::abs(op_Lj(g0, s, 1).coeff(mono::from_vars({x1, e1})) - cplx(M_PI, 0)) < 1e-15);

    // d(L_j g)/d theta_j = g - M_j g, coefficientwise, on a mixed polynomial
    ScalarPoly g = g2 + g0 + ScalarPoly::monomial(mono::from_vars({x0, e1, e1}), cplx(0.3, 0.1));
    ScalarPoly lhs = theta_derivative(op_Lj(g, s, 1), s, 1);
    ScalarPoly rhs = g - average_Ml(g, s, 1);
    CHECK((lhs - rhs).max_abs_coeff() < 1e-15);
}

TEST_CASE("hamiltonian calibration anchors the rotation field") {
    CHECK(hamiltonian_calibration() == doctest::Approx(2.0));

    SlotSpace s{1};
    ScalarPoly mI = action_poly(s, 1) * cplx(-1, 0);
    PolyMap X = hamiltonian_field(mI, s, 3);
    // [X_{-I_1}]_(1,xi) = i xi_1 verbatim, all other slots zero
    CHECK(std::abs(X.at(0, 1).coeff(mono::var(s.var(0, 1))) - cplx(0, 1)) < 1e-15);
    CHECK(X.at(0, 0).empty());
    CHECK(std::abs(X.at(1, 1).coeff(mono::var(s.var(1, 1))) - cplx(0, -1)) < 1e-15);

    // 2pi-periodic flow (linear special path, variation-of-constants mode)
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(s.nslots(), s.nslots());
    A(s.var(0, 1), s.var(0, 1)) = cplx(0, 1);
    A(s.var(1, 1), s.var(1, 1)) = cplx(0, -1);
    Eigen::MatrixXcd Phi = linear_flow(A, 2 * M_PI);
    CHECK((Phi - Eigen::MatrixXcd::Identity(s.nslots(), s.nslots())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("poisson bracket: actions commute, antisymmetry, convention anchor") {
    SlotSpace s{1};
    for (int j = -1; j <= 1; ++j)
        for (int k = -1; k <= 1; ++k)
            CHECK(poisson_bracket(action_poly(s, j), action_poly(s, k), s, 5).empty());

    // {Re xi_0, Im xi_0}: constant, fixed by the calibrated convention
    int x0 = s.var(0, 0), e0 = s.var(1, 0);
    ScalarPoly rex = (ScalarPoly::variable(x0) + ScalarPoly::variable(e0)) * cplx(0.5, 0);
    ScalarPoly imx = (ScalarPoly::variable(x0) - ScalarPoly::variable(e0)) * (cplx(0, -0.5));
    ScalarPoly br = poisson_bracket(rex, imx, s, 5);
    cplx val = br.coeff(mono::kOne);
    CHECK(std::abs(val.imag()) < 1e-15);
    CHECK(val.real() != 0.0);

    // flow oracle: X_{Im xi_0} translates xi_0 at unit speed, so the bracket
    // equals d(Re xi_0)/dt along that flow
    PolyMap X = hamiltonian_field(imx, s, 5);
    cplx speed = X.at(0, 0).coeff(mono::kOne);
    CHECK(std::abs(val - speed) < 1e-14);

    // antisymmetry on random real-structured scalars
    Rng rng(60);
    PolyMap F = random_cubic_map(s, 5, 61), G = random_cubic_map(s, 5, 62);
    ScalarPoly f = F.at(0, 0).mul(conj_mirror(F.at(0, 0), s), 4);
    ScalarPoly g = G.at(0, 1).mul(conj_mirror(G.at(0, 1), s), 4);
    ScalarPoly anti = poisson_bracket(f, g, s, 6) + poisson_bracket(g, f, s, 6);
    CHECK(anti.max_abs_coeff() < 1e-12);

    // {F, -I_0} is the theta_0 phase derivative
    ScalarPoly lhs = poisson_bracket(rex, action_poly(s, 0) * cplx(-1, 0), s, 5);
    ScalarPoly rhs = theta_derivative(rex, s, 0);
    CHECK((lhs - rhs).max_abs_coeff() < 1e-15);
}

TEST_CASE("flow: zero field, cubic oracle, omega0 preservation") {
    SlotSpace s{0};
    PolyMap zero(s, 5);
    PolyMap id = identity_map(s, 5);
    CHECK(map_max_abs_coeff(map_sub(flow_time1(zero, 5), id)) == 0.0);

    // u' = u^3: exact solution u (1 - 2 t u^2)^{-1/2} = u + t u^3 + (3/2) t^2 u^5
    PolyMap Y(s, 5);
    int x = s.var(0, 0);
    Y.comp[x] = ScalarPoly::monomial(mono::from_vars({x, x, x}), 1.0);
    PolyMap u = flow_time1(Y, 5);
    CHECK(std::abs(u.comp[x].coeff(mono::var(x)) - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(u.comp[x].coeff(mono::from_vars({x, x, x})) - cplx(1, 0)) < 1e-14);
    CHECK(std::abs(u.comp[x].coeff(mono::from_vars({x, x, x, x, x})) - cplx(1.5, 0)) < 1e-13);

    // linear part rejected
    CHECK_THROWS(flow_time1(identity_map(s, 5), 5));
}

TEST_CASE("hamiltonian flow preserves omega0 through degree cap - 1") {
    SlotSpace s{1};
    // real quartic Hamiltonian built from |.|^2-type blocks plus a real quartic
    ScalarPoly H;
    int x0 = s.var(0, 0), x1 = s.var(0, 1), em1 = s.var(1, -1);
    ScalarPoly piece = ScalarPoly::monomial(mono::from_vars({x0, x0, em1}), cplx(0.4, 0.2));
    H = piece + conj_mirror(piece, s);
    ScalarPoly p2 = ScalarPoly::monomial(mono::from_vars({x0, x1, em1, em1}), cplx(-0.3, 0.6));
    H += p2 + conj_mirror(p2, s);

    const int cap = 5;
    PolyMap X = hamiltonian_field(H, s, cap);
    PolyMap phi = flow_time1(X, cap);
    OperatorPoly d = differential(phi);
    OperatorPoly E = e0_operator(s, cap);
    OperatorPoly pulled = op_mul(op_mul(bstar(d), E, cap - 1), d, cap - 1);
    OperatorPoly defect = op_degree_leq(op_sub(pulled, E), cap - 1);
    CHECK(op_max_abs_coeff(defect) < 1e-12);
}

TEST_CASE("tame norm: zero map, concentrated monomial, ordering") {
    SlotSpace s{1};
    PolyMap zero(s, 5);
    auto up = tame_norm_upper(zero, 0.1, Weight::unit(), Weight::unit(), Weight::unit(), 2.0);
    auto lo = tame_norm_sample(zero, 0.1, Weight::unit(), Weight::unit(), Weight::unit(), 2.0, 5);
    CHECK(up.combined == 0.0);
    CHECK(lo.combined == 0.0);

    // single monomial slot (0, xi) = xi_1^3 at rho = 0.1: the concentrated
    // state xi_1 = rho/2 realizes (rho/2)^3
    PolyMap F(s, 5);
    int x1 = s.var(0, 1);
    F.comp[s.var(0, 0)] = ScalarPoly::monomial(mono::from_vars({x1, x1, x1}), 1.0);
    double rho = 0.1;
    auto samp = tame_norm_sample(F, rho, Weight::unit(), Weight::unit(), Weight::unit(), 2.0, 5);
    CHECK(samp.abs_part >= std::pow(rho / 2, 3) * (1 - 1e-12));
    auto upper = tame_norm_upper(F, rho, Weight::unit(), Weight::unit(), Weight::unit(), 2.0);
    CHECK(upper.abs_part >= samp.abs_part - 1e-15);
    CHECK(upper.tame_part >= samp.tame_part - 1e-15);

    // upper >= sample on random maps
    PolyMap G = random_cubic_map(s, 5, 80);
    auto u2 = tame_norm_upper(G, 0.05, Weight::unit(), Weight::polynomial(1), Weight::polynomial(1), 2.0);
    auto s2 = tame_norm_sample(G, 0.05, Weight::unit(), Weight::polynomial(1), Weight::polynomial(1), 2.0, 81);
    CHECK(u2.abs_part >= s2.abs_part - 1e-15);
    CHECK(u2.tame_part >= s2.tame_part - 1e-15);
}

TEST_CASE("reality structure: mirror involution and defect detection") {
    SlotSpace s{1};
    PolyMap F = random_cubic_map(s, 5, 90);
    CHECK(reality_defect(F) < 1e-15);
    F.at(1, 0).add_term(mono::var(s.var(0, 0)), cplx(0.5, 0.5));
    CHECK(reality_defect(F) > 0.1);
}
