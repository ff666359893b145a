#include <doctest.h>

#include "jetfpt/frobenius.hpp"
#include "jetfpt/gen.hpp"
#include "oracles.hpp"

using namespace jetfpt;

TEST_CASE("Fedder residue instantiations") {
    VarTable line(1, 0);
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
        JetSystem sys = jet_equations(parse_poly("x1", line, p), 0);
        PolyMod r = fedder_residue(sys, p);
        REQUIRE(r.term_count() == 1);
        CHECK(r.terms().front().first.exp(0) == p - 1);
    }

    JetSystem square = jet_equations(parse_poly("x1^2", line, 3), 0);
    CHECK(fedder_residue(square, 3).is_zero()); // x1^4 lies in m^[3]

    VarTable space(3, 0);
    JetSystem fermat5 = jet_equations(parse_poly("x1^3 + x2^3 + x3^3", space, 5), 0);
    CHECK(fedder_residue(fermat5, 5).is_zero());
    JetSystem fermat7 = jet_equations(parse_poly("x1^3 + x2^3 + x3^3", space, 7), 0);
    PolyMod r7 = fedder_residue(fermat7, 7);
    REQUIRE(!r7.is_zero());
    Monomial target(space.count());
    for (std::size_t v = 0; v < 3; ++v) target.set_exp(v, 6);
    CHECK(r7.coeff_of(target) == 6);
    CHECK(r7.term_count() == 1); // the central monomial is the only survivor
}

TEST_CASE("residues match naive expansion then filtering") {
    SplitMix64 rng(314);
    int done = 0;
    while (done < 25) {
        int n = 1 + static_cast<int>(rng.next() % 3);
        int m = static_cast<int>(rng.next() % 2);
        if ((m + 1) * n > 6) continue;
        std::uint32_t p = done % 2 ? 2 : 3;
        std::uint32_t q = done % 3 == 2 ? p * p : p; // q <= 9
        PolyMod f = oracle::random_base_poly(n, p, 2, 4, rng);
        if (f.is_zero()) continue;
        JetSystem sys = jet_equations(f, m);
        CHECK(fedder_residue(sys, q) == oracle::naive_fedder_residue(sys, q));
        ++done;
    }
    // a complete intersection instance
    VarTable b3(3, 0);
    std::vector<PolyMod> fs{parse_poly("x1 + x2^2", b3, 3), parse_poly("x2 x3", b3, 3)};
    JetSystem ci = jet_equations(fs, 0);
    CHECK(fedder_residue(ci, 3) == oracle::naive_fedder_residue(ci, 3));
    CHECK(fedder_residue(ci, 9) == oracle::naive_fedder_residue(ci, 9));
}

TEST_CASE("smooth coordinate hypersurfaces are F-pure with the packed certificate") {
    VarTable line(1, 0);
    for (int m : {0, 1, 2}) {
        JetSystem sys = jet_equations(parse_poly("x1", line, 5), m);
        PurityResult res = is_f_pure(sys);
        REQUIRE(res.f_pure);
        REQUIRE(res.certificate);
        const Monomial& mono = res.certificate->monomial;
        for (std::size_t v = 0; v < sys.vt.count(); ++v) CHECK(mono.exp(v) == 4);
        CHECK(revalidate(*res.certificate, sys));
    }
}

TEST_CASE("the split quadric is F-pure at p = 3 and x1x2x3x4 is good") {
    VarTable b4(4, 0);
    JetSystem sys = jet_equations(parse_poly("x1 x2 + x3 x4", b4, 3), 0);
    PurityResult res = is_f_pure(sys);
    REQUIRE(res.f_pure);
    REQUIRE(res.certificate);
    CHECK(revalidate(*res.certificate, sys));
    // the certificate takes the lexicographically least survivor
    CHECK(monomial_to_string(res.certificate->monomial, sys.vt) == "x3^2 x4^2");
    // the monomial named by the expansion is good as well, coefficient 2
    Monomial mixed(sys.vt.count());
    for (std::size_t v = 0; v < 4; ++v) mixed.set_exp(v, 1);
    const PolyMod& f = sys.equations[0][0];
    CHECK(coefficient_of(mixed, {{&f, 2u}}) == 2);
    CHECK(fedder_residue(sys, 3).coeff_of(mixed) == 2);
}

TEST_CASE("certificate tampering fails revalidation") {
    VarTable b4(4, 0);
    JetSystem sys = jet_equations(parse_poly("x1 x2 + x3 x4", b4, 3), 0);
    PurityResult res = is_f_pure(sys);
    REQUIRE(res.certificate);
    auto cert = *res.certificate;
    cert.coefficient = cert.coefficient == 1 ? 2 : 1;
    CHECK(!revalidate(cert, sys));
    cert = *res.certificate;
    cert.monomial.set_exp(0, 250);
    CHECK(!revalidate(cert, sys));
    cert = *res.certificate;
    cert.provenance[0][0].monomial.set_exp(0, 2);
    CHECK(!revalidate(cert, sys));
}

TEST_CASE("digit recursion agrees with materialized residues") {
    SplitMix64 rng(2718);
    int done = 0;
    while (done < 30) {
        int n = 1 + static_cast<int>(rng.next() % 3);
        int m = static_cast<int>(rng.next() % 2);
        if ((m + 1) * n > 6) continue;
        std::uint32_t p = done % 2 ? 2 : 3;
        std::uint32_t q = done % 2 ? (done % 4 == 1 ? 4 : 8) : 9;
        PolyMod f = oracle::random_base_poly(n, p, 2, 4, rng);
        if (f.is_zero()) continue;
        JetSystem sys = jet_equations(f, m);
        PolyMod g = oracle::random_poly(sys.vt, p, 3, 2, rng);
        if (g.is_zero()) g = PolyMod::constant(sys.vt, p, 1);

        PolyMod expected = mul_pruned(g, fedder_residue(sys, q), static_cast<int>(q));
        CHECK(frobenius_survives(sys, g, q) == !expected.is_zero());
        auto [alive, witness] = frobenius_survivor(sys, g, q);
        CHECK(alive == !expected.is_zero());
        if (witness) {
            CHECK(witness->outside_bracket(q));
            CHECK(expected.coeff_of(*witness) != 0);
        }
        ++done;
    }
}

TEST_CASE("digit recursion at depth three and on complete intersections") {
    SplitMix64 rng(424242);
    VarTable b2(2, 0);
    // q = 27: three digit levels over p = 3
    int done = 0;
    while (done < 8) {
        PolyMod f = oracle::random_base_poly(2, 3, 2, 3, rng);
        if (f.is_zero()) continue;
        JetSystem sys = jet_equations(f, 0);
        PolyMod g = oracle::random_poly(sys.vt, 3, 2, 2, rng);
        if (g.is_zero()) g = PolyMod::constant(sys.vt, 3, 1);
        PolyMod expected = mul_pruned(g, fedder_residue(sys, 27), 27);
        CHECK(frobenius_survives(sys, g, 27) == !expected.is_zero());
        auto [alive, witness] = frobenius_survivor(sys, g, 27);
        CHECK(alive == !expected.is_zero());
        if (witness) CHECK(expected.coeff_of(*witness) != 0);
        ++done;
    }
    // multiplier against a complete intersection at e = 2
    VarTable b3(3, 0);
    std::vector<PolyMod> fs{parse_poly("x1 + x2^2", b3, 3), parse_poly("x2 x3", b3, 3)};
    JetSystem ci = jet_equations(fs, 0);
    for (const char* gt : {"x3", "x1 x3", "x2^2"}) {
        PolyMod g = parse_poly(gt, ci.vt, 3);
        PolyMod expected = mul_pruned(g, fedder_residue(ci, 9), 9);
        CHECK(frobenius_survives(ci, g, 9) == !expected.is_zero());
    }
}

TEST_CASE("a probe that needs the second Frobenius power") {
    // p = 2, f = x1x2 + x3x4, g = x1^2: g * f lands in m^[2], but
    // g * f^3 keeps x1^3 x2 x3^2 x4^2 outside m^[4]
    VarTable b4(4, 0);
    JetSystem sys = jet_equations(parse_poly("x1 x2 + x3 x4", b4, 2), 0);
    PolyMod g = parse_poly("x1^2", sys.vt, 2);
    CHECK(!frobenius_survives(sys, g, 2));
    CHECK(frobenius_survives(sys, g, 4));
    RegularProbeResult probe = f_regular_probe(sys, g, 2);
    CHECK(probe.verdict == RegularProbeVerdict::certified_for_g);
    CHECK(probe.witness_e == 2u);
    REQUIRE(probe.witness_monomial);
    PolyMod expected = mul_pruned(g, fedder_residue(sys, 4), 4);
    CHECK(expected.coeff_of(*probe.witness_monomial) != 0);
}

TEST_CASE("regularity probe on coordinate hypersurfaces") {
    VarTable b2(2, 0);
    JetSystem sys = jet_equations(parse_poly("x1", b2, 3), 0);
    PolyMod g = PolyMod::variable(sys.vt, 3, sys.vt.flat(2, 0));
    RegularProbeResult res = f_regular_probe(sys, g, 2);
    CHECK(res.verdict == RegularProbeVerdict::certified_for_g);
    CHECK(res.witness_e == 1u);
    REQUIRE(res.witness_monomial);
    CHECK(monomial_to_string(*res.witness_monomial, sys.vt) == "x1^2 x2");
    CHECK(res.headroom[sys.vt.flat(1, 0)] == 1);
    CHECK(res.headroom[sys.vt.flat(2, 0)] == 2);

    PolyMod bad = parse_poly("x1 + x1 x2", sys.vt, 3);
    CHECK_THROWS_AS((void)f_regular_probe(sys, bad, 2), PreconditionError);
    CHECK_THROWS_AS((void)f_regular_probe(sys, PolyMod::zero(sys.vt, 3), 2),
                    PreconditionError);
}

TEST_CASE("single-divisor membership screen") {
    VarTable b2(2, 0);
    PolyMod f = parse_poly("x1 + x2^2", b2, 5);
    CHECK(is_poly_multiple(parse_poly("x1 x2 + x2^3", b2, 5), f)); // x2 * f
    CHECK(is_poly_multiple(PolyMod::zero(b2, 5), f));
    CHECK(!is_poly_multiple(parse_poly("x2", b2, 5), f));
    CHECK(!is_poly_multiple(parse_poly("x1", b2, 5), f));
}

TEST_CASE("default panel covers variables and derivatives") {
    VarTable b2(2, 0);
    JetSystem sys = jet_equations(parse_poly("x1^2 + x2^2", b2, 5), 1);
    auto panel = default_g_panel(sys);
    CHECK(panel.size() >= sys.vt.count());
    for (const auto& g : panel) {
        CHECK(!g.is_zero());
        CHECK(!is_poly_multiple(g, sys.base[0]));
    }
}

TEST_CASE("residues and certificates are identical across worker counts") {
    GeneralTypePolynomial g = gen_general_type(2, 4, 7, 3);
    JetSystem sys = jet_equations(g.poly, 1);
    PolyMod r1 = fedder_residue(sys, 7, 1);
    PolyMod r4 = fedder_residue(sys, 7, 4);
    CHECK(r1 == r4);
    PurityResult a = is_f_pure(sys, 1), b = is_f_pure(sys, 4);
    REQUIRE((a.certificate && b.certificate));
    CHECK(a.certificate->monomial == b.certificate->monomial);
    CHECK(a.certificate->coefficient == b.certificate->coefficient);
    // the extraction path recomputes exactly the residue's coefficient
    CHECK(a.certificate->monomial == r1.terms().front().first);
    CHECK(a.certificate->coefficient == r1.terms().front().second);
}
