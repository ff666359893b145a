#include <doctest.h>

#include "jetfpt/certificates.hpp"
#include "jetfpt/gen.hpp"
#include "oracles.hpp"

using namespace jetfpt;

TEST_CASE("exponent decomposition") {
    auto d32 = decompose_exponent(3, 2);
    CHECK(d32.a == 6);
    CHECK(d32.b == 2);
    CHECK(d32.c == 0);
    auto d23 = decompose_exponent(2, 3);
    CHECK(d23.a == 4);
    CHECK(d23.b == 2);
    CHECK(d23.c == 1);
    auto d52 = decompose_exponent(5, 2);
    CHECK(d52.a == 20);
    CHECK(d52.b == 4);
    CHECK(d52.c == 0);
    CHECK_THROWS_AS((void)decompose_exponent(5, 1), PreconditionError);

    for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u})
        for (unsigned e = 2; e <= 5; ++e) {
            auto dec = decompose_exponent(p, e);
            long long q = 1;
            for (unsigned i = 0; i < e; ++i) q *= p;
            CHECK(dec.a + dec.b + dec.c == q - 1);
            CHECK(dec.a >= dec.b);
            CHECK(dec.b > dec.c);
            CHECK(dec.c >= 0);
        }
}

TEST_CASE("multinomial valuation: Kummer carries equal Legendre sums") {
    CHECK(multinomial_p_valuation({2ull, 2ull}, 2) == 1); // C(4,2) = 6
    CHECK(multinomial_p_valuation({17ull}, 5) == 0);      // singleton

    for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u})
        for (unsigned e = 2; e <= 5; ++e) {
            auto dec = decompose_exponent(p, e);
            CHECK(multinomial_p_valuation({static_cast<unsigned long long>(dec.a),
                                           static_cast<unsigned long long>(dec.b),
                                           static_cast<unsigned long long>(dec.c)},
                                          p) == 0);
        }

    SplitMix64 rng(1000);
    for (int trial = 0; trial < 1000; ++trial) {
        std::uint32_t p = trial % 2 ? 3 : 2;
        std::vector<unsigned long long> parts(1 + rng.next() % 4);
        for (auto& part : parts) part = rng.next() % 500;
        CHECK(static_cast<long long>(multinomial_p_valuation(parts, p)) ==
              oracle::legendre_multinomial_valuation(parts, p));
    }

    // and against the exact integer for a small instance
    unsigned parts[] = {2, 2, 2};
    CHECK(oracle::multinomial_exact(parts) == 90);
    CHECK(multinomial_p_valuation({2ull, 2ull, 2ull}, 3) == 2); // 90 = 2 * 3^2 * 5
}

TEST_CASE("L-monomials instantiate the displayed patterns") {
    VarTable vt41(4, 1);
    LMonomialSet s = build_l_monomials(2, 4, 1);
    CHECK(monomial_to_string(s.l1[0].term, vt41) == "x1 x2");
    CHECK(monomial_to_string(s.l1[1].term, vt41) == "x3 x4_1");
    CHECK(monomial_to_string(s.l2[0].term, vt41) == "x4^2");
    CHECK(monomial_to_string(s.l2[1].term, vt41) == "x4 x4_1");
    CHECK(monomial_to_string(s.l3[0].term, vt41) == "x2^2");
    CHECK(monomial_to_string(s.l3[1].term, vt41) == "x2 x2_1");
    CHECK(s.l2[1].integer_factor == 2);
    CHECK(s.l1[1].integer_factor == 1);
    // combined: L2 = x4^3 x4_1, L3 = x2^3 x2_1
    CHECK(s.exp2[vt41.flat(4, 0)] == 3);
    CHECK(s.exp2[vt41.flat(4, 1)] == 1);
    CHECK(s.exp3[vt41.flat(2, 0)] == 3);

    LMonomialSet s0 = build_l_monomials(2, 4, 0);
    VarTable vt40(4, 0);
    CHECK(monomial_to_string(s0.l1[0].term, vt40) == "x1 x2");
    CHECK(monomial_to_string(s0.l2[0].term, vt40) == "x4^2");
    CHECK(monomial_to_string(s0.l3[0].term, vt40) == "x2^2");

    LMonomialSet s3 = build_l_monomials(3, 9, 2);
    VarTable vt92(9, 2);
    CHECK(monomial_to_string(s3.l1[2].term, vt92) == "x7 x8_1 x9_1");
    CHECK(s3.l1[2].xi_tuple == std::vector<int>{7, 8, 9});
}

TEST_CASE("L-monomial invariants across the stated ranges") {
    for (int d = 2; d <= 3; ++d)
        for (int n = d * d; n <= 12; ++n)
            for (int m = 0; m <= 4; ++m)
                CHECK_NOTHROW((void)build_l_monomials(d, n, m)); // invariants are validated inside
    CHECK_THROWS_AS((void)build_l_monomials(3, 8, 1), PreconditionError); // d^2 > N
    CHECK_THROWS_AS((void)build_l_monomials(1, 4, 1), PreconditionError);
}

TEST_CASE("the M-monomial and its headroom report") {
    MMonomialReport rep = build_m_monomial(2, 4, 1, 5, 2);
    CHECK(rep.dec.a == 20);
    CHECK(rep.dec.b == 4);
    CHECK(rep.dec.c == 0);
    CHECK(rep.q == 25);
    VarTable vt(4, 1);
    CHECK(rep.exponents[vt.flat(4, 0)] == 12); // b * (m(d-1)+d) = 4 * 3
    CHECK(rep.exponents[vt.flat(1, 0)] == 20);
    CHECK(rep.exponents[vt.flat(4, 1)] == 24); // a + b
    CHECK(rep.max_positive == 24);
    CHECK(rep.bound_positive == 24);
    CHECK(rep.max_weight0 == 20);
    CHECK(rep.bound_weight0 == 20); // max{4*3, 20 + 0}
    CHECK(rep.outside_bracket);
    REQUIRE(rep.packed);

    CHECK_THROWS_AS((void)build_m_monomial(2, 4, 1, 5, 1), PreconditionError); // e = 1
    CHECK_THROWS_AS((void)build_m_monomial(2, 4, 1, 3, 2), PreconditionError); // p <= m(d-1)+d

    // the weight-0 maximum meets the closed-form bound exactly
    for (int d = 2; d <= 3; ++d)
        for (int m = 0; m <= 3; ++m)
            for (std::uint32_t p : {7u, 11u, 13u}) {
                if (static_cast<long long>(p) <= static_cast<long long>(m) * (d - 1) + d)
                    continue;
                MMonomialReport r = build_m_monomial(d, d * d, m, p, 2);
                CHECK(r.max_weight0 == r.bound_weight0);
                if (m >= 1) CHECK(r.max_positive == r.bound_positive);
            }
}

TEST_CASE("membership extraction on seeded forms and the Fermat stand-in") {
    MMonomialReport rep = build_m_monomial(2, 4, 0, 5, 2);
    int nonzero = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        GeneralTypePolynomial g = gen_general_type(2, 4, 5, seed);
        std::uint32_t via_dp = verify_m_membership(g.poly, rep);
        // the expanded residue is the independent route for the same number
        std::uint32_t direct = power_residue(g.poly, 24, 25).coeff_of(*rep.packed);
        CHECK(via_dp == direct);
        if (via_dp != 0) ++nonzero;
    }
    // the proxy succeeds on roughly half the seeds at p = 5 (measured ~55%);
    // a handful of hits over 20 seeds is the robust statement
    CHECK(nonzero >= 5);

    VarTable vt3(3, 0);
    PolyMod fermat = parse_poly("x1^3 + x2^3 + x3^3", vt3, 7);
    Monomial target(vt3.count());
    for (std::size_t v = 0; v < 3; ++v) target.set_exp(v, 6);
    CHECK(coefficient_of(target, {{&fermat, 6}}) == 6);
}

TEST_CASE("matrix C: entries, gamma, and conditions") {
    ExponentMatrix c24 = matrix_C(2, 4);
    using R = Rational;
    CHECK(c24.entries[0] == std::vector<R>{2, 1, 0, 0, 0});
    CHECK(c24.entries[1] == std::vector<R>{0, 1, 2, 1, 0});
    CHECK(c24.entries[2] == std::vector<R>{0, 0, 0, 1, 2});
    CHECK(c24.gamma == std::vector<R>{3, 4, 3, 0, 0});

    ExponentMatrix c1 = matrix_C(1, 5);
    for (int i = 0; i <= 5; ++i) {
        CHECK(c1.entries[i][i] == 1);
        CHECK(c1.gamma[i] == 1);
    }

    for (int d = 1; d <= 4; ++d)
        for (int l = 1; l <= 6; ++l) {
            int m = d * l;
            ExponentMatrix c = matrix_C(d, m);
            auto cond = check_conditions(c, d);
            CHECK(cond.upper_triangular);
            CHECK(cond.col_sums_equal_d);
            CHECK(cond.weighted_sums_equal_j);
            for (int i = 0; i <= m; ++i) {
                Rational expect = i == 0 || i == l ? Rational(d * (d + 1), 2)
                                  : i <= l - 1     ? Rational(d * d)
                                                   : Rational(0);
                CHECK(c.gamma[i] == expect);
            }
        }
}

TEST_CASE("matrix A extraction from purity certificates") {
    VarTable b4(4, 0);
    JetSystem quad = jet_equations(parse_poly("x1 x2 + x3 x4", b4, 3), 0);
    PurityResult pres = is_f_pure(quad);
    REQUIRE(pres.certificate);
    MatrixAReport rep = extract_matrix_A(*pres.certificate, quad);
    CHECK(rep.matrix.size == 1);
    CHECK(rep.matrix.entries[0][0] == 2);
    CHECK(rep.conditions.upper_triangular);
    CHECK(rep.conditions.col_sums_equal_d);
    CHECK(rep.conditions.weighted_sums_equal_j);
    CHECK(rep.conditions.row_sums_at_most_n);

    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        GeneralTypePolynomial g = gen_general_type(2, 4, 7, seed);
        for (int m : {0, 1}) {
            JetSystem sys = jet_equations(g.poly, m);
            PurityResult res = is_f_pure(sys);
            REQUIRE(res.f_pure);
            MatrixAReport arep = extract_matrix_A(*res.certificate, sys);
            CHECK(arep.conditions.upper_triangular);
            CHECK(arep.conditions.col_sums_equal_d);
            CHECK(arep.conditions.weighted_sums_equal_j);
            CHECK(arep.conditions.row_sums_at_most_n);
            // alpha recomputed straight from the provenance exponents
            for (int i = 0; i <= m; ++i) {
                Rational direct(0);
                for (std::size_t fi = 0; fi < res.certificate->provenance.size(); ++fi)
                    for (const auto& pick : res.certificate->provenance[fi])
                        for (std::size_t v = 0; v < sys.vt.count(); ++v)
                            if (sys.vt.weight(v) == i)
                                direct += Rational(pick.monomial.exp(v), sys.p - 1);
                CHECK(direct == arep.matrix.row_sums[i]);
            }
        }
    }

    GoodMonomialCertificate empty;
    CHECK_THROWS_AS((void)extract_matrix_A(empty, quad), PreconditionError);
}

TEST_CASE("row-sum program: pinned optima and the bracket") {
    CHECK(lp_min_max_rowsum(2, 2).optimum == 3);
    CHECK(lp_min_max_rowsum(1, 4).optimum == 1);

    MinMaxRowSumResult d2m4 = lp_min_max_rowsum(2, 4);
    CHECK(d2m4.optimum >= Rational(10, 3));
    CHECK(d2m4.optimum <= 4);

    Rational previous(-1);
    for (int d = 1; d <= 3; ++d) {
        previous = -1;
        for (int l = 1; l <= 6; ++l) {
            MinMaxRowSumResult res = lp_min_max_rowsum(d, d * l);
            Rational lo = Rational(d * d) - Rational(d * d - d, l + 1);
            CHECK(res.optimum >= lo);
            CHECK(res.optimum <= d * d);
            CHECK(res.optimum >= previous); // recorded monotonicity
            previous = res.optimum;
            // witness feasibility
            int m = d * l;
            for (int j = 0; j <= m; ++j) {
                Rational sum(0), wsum(0);
                for (int i = 0; i <= m; ++i) {
                    CHECK(res.witness[i][j] >= 0);
                    if (i > j) CHECK(res.witness[i][j] == 0);
                    sum += res.witness[i][j];
                    wsum += Rational(i) * res.witness[i][j];
                }
                CHECK(sum == d);
                CHECK(wsum == j);
            }
            for (int i = 0; i <= m; ++i) {
                Rational row(0);
                for (int j = 0; j <= m; ++j) row += res.witness[i][j];
                CHECK(row <= res.optimum);
            }
        }
    }
}

TEST_CASE("denominator grid search brackets the LP optimum") {
    auto lp22 = lp_min_max_rowsum(2, 2).optimum;
    auto grid22 = grid_min_max_rowsum(2, 2, 3);
    REQUIRE(grid22);
    CHECK(*grid22 >= lp22);
    CHECK(*grid22 == 3);

    auto lp24 = lp_min_max_rowsum(2, 4).optimum;
    auto grid24 = grid_min_max_rowsum(2, 4, 3);
    if (grid24) CHECK(*grid24 >= lp24);
}
