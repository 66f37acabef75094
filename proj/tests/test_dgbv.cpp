#include <string>

#include "doctest.h"
#include "tsf/dgbv.hpp"

using namespace tsf;

namespace {

DgbvData basic(const std::string& name) { return basic_dgbv(build_sl2(builder(name))); }

// Left t-derivatives: contraction for odd t's, d/dt for even ones.
std::vector<Derivation> t_derivatives(const FreeAlgebra& T) {
    std::vector<Derivation> out;
    for (int a = 0; a < T.size(); ++a) {
        if (T.is_odd(a)) {
            out.push_back(contraction(T, a));
        } else {
            Derivation d = zero_derivation(T, 0, 0);
            d.images[a] = T.one();
            out.push_back(d);
        }
    }
    return out;
}

// Top coefficient of a ^ chi read off directly from the product.
Q top_coefficient(const DgbvData& g, const Element& a) {
    Element p = g.alg->mul(a, *g.chi);
    Q out = 0;
    for (const auto& [m, c] : p)
        if (m.odd == g.top.odd) out += c;
    return out;
}

}  // namespace

TEST_CASE("bracket with the unit vanishes and the torus bracket is zero") {
    for (const auto& name : {"torus2", "heisenberg5", "trunc_linear"}) {
        CAPTURE(name);
        auto g = basic(name);
        for (int k : g.carrier.degrees())
            for (const auto& b : g.carrier.basis(k)) {
                CHECK(bracket(g, g.alg->one(), b).empty());
                CHECK(bracket(g, b, g.alg->one()).empty());
            }
    }
    auto t = basic("torus2");
    for (int k : t.carrier.degrees())
        for (int l : t.carrier.degrees())
            for (const auto& a : t.carrier.basis(k))
                for (const auto& b : t.carrier.basis(l)) CHECK(bracket(t, a, b).empty());
}

TEST_CASE("bracket on the plane by hand") {
    auto g = basic("trunc_linear");
    const auto& A = *g.alg;
    // delta kills functions, so the bracket of two functions is zero.
    CHECK(bracket(g, A.parse("x"), A.parse("y")).empty());
    CHECK(bracket(g, A.parse("x^x"), A.parse("x^y")).empty());
    // [x . dy] is a constant fixed by the Poisson tensor.
    Q expected = signs::kBracketPoisson * g.ops->pi()(0, 1);
    CHECK(sgn(expected) != 0);
    CHECK(bracket(g, A.parse("x"), A.parse("dy")) == A.scalar(expected));
    CHECK(bracket(g, A.parse("x"), A.parse("dx")).empty());
    CHECK(poisson_cross_check(g, A.parse("x"), A.parse("y")).ok());
    CHECK(poisson_cross_check(g, A.parse("x^y"), A.parse("y^y")).ok());
    CHECK_THROWS_AS(bracket(g, A.parse("x + dx"), A.parse("y")), DomainError);
}

TEST_CASE("generalized BV axioms hold exhaustively on small carriers") {
    for (const auto& name : {"torus1", "torus2", "heisenberg5", "kodaira_thurston", "trunc_linear_1_2"}) {
        CAPTURE(name);
        auto g = basic(name);
        REQUIRE(g.carrier.total_dim() <= kGbvThreshold);
        Report r = verify_gbv(g);
        for (const auto& c : r.checks) {
            CAPTURE(c.name);
            CHECK(c.ok());
        }
        const auto* id = r.find("[a.(b^c)] = [a.b]^c + (-1)^((|a|+1)|b|) b^[a.c]");
        REQUIRE(id);
        const auto n = static_cast<std::size_t>(g.carrier.total_dim());
        CHECK(id->cases == n * n * n);
        CHECK(id->note.find("exhaustive") != std::string::npos);
    }
}

TEST_CASE("above the threshold the third slot runs over generators") {
    auto g = basic("trunc_linear_1_2");
    Report r = verify_gbv(g, 4);
    const auto* id = r.find("[a.(b^c)] = [a.b]^c + (-1)^((|a|+1)|b|) b^[a.c]");
    REQUIRE(id);
    CHECK(id->ok());
    CHECK(id->note.find("exceeds threshold 4") != std::string::npos);
    const auto n = static_cast<std::size_t>(g.carrier.total_dim());
    CHECK(id->cases < n * n * n);
}

TEST_CASE("a corrupted delta breaks the axioms with a witness") {
    auto g = basic("trunc_linear_1_2");
    DgbvData bad = g;
    const auto& A = *g.alg;
    auto orig = g.delta_of;
    // Flip the sign of delta on 2-forms only.
    bad.delta_of = [orig, &A](const Element& e) {
        Element r = orig(e);
        auto k = A.homogeneous_degree(e);
        return k && *k == 2 ? scale(-1, r) : r;
    };
    Report r = verify_gbv(bad);
    CHECK_FALSE(r.ok());
    bool witnessed = false;
    for (const auto& c : r.checks)
        if (!c.ok()) witnessed = witnessed || !c.witnesses.empty();
    CHECK(witnessed);
}

TEST_CASE("integrals against chi") {
    auto h = basic("heisenberg5");
    const auto& A = *h.alg;
    CHECK(integral(h, A.parse("e1^e2^e3^e4")) == UPoly{{{}, Q(1)}});
    CHECK(integral(h, A.parse("e1^e2")).empty());
    CHECK(integral(h, A.parse("2*e3^e4^e1^e2")) == UPoly{{{}, Q(2)}});
    for (int k : h.carrier.degrees())
        for (const auto& b : h.carrier.basis(k)) {
            UPoly got = integral(h, b);
            Q want = top_coefficient(h, b);
            CHECK((sgn(want) == 0 ? got.empty() : got == UPoly{{{}, want}}));
        }
    CHECK(integral_axioms(h).ok());
    CHECK(integral_axioms(basic("kodaira_thurston")).ok());
    CHECK_THROWS_AS(integral(basic("trunc_linear"), A.one()), DomainError);

    auto cx = std::make_shared<const CartanComplex>(
        build_cartan(std::make_shared<const FoliatedModel>(builder("heisenberg5_reeb")), 2));
    auto g = equivariant_dgbv(cx);
    const auto& E = *g.alg;
    REQUIRE(g.u.size() == 1);
    UPoly p = integral(g, E.parse("u^e1^e2^e3^e4"));
    CHECK(p == UPoly{{{1}, Q(1)}});
    CHECK(render_upoly(p, E, g.u) == "u");
    CHECK(integral_axioms(g).ok());
}

TEST_CASE("pairing on the 2-torus and the Heisenberg model") {
    auto t = basic("torus1");
    auto v = pairing_and_niceness(t);
    CHECK(v.nice);
    bool saw_middle = false;
    for (const auto& b : v.blocks) {
        CHECK(b.nondegenerate);
        CHECK(sgn(determinant(b.matrix)) != 0);
        // Entries are integrals of products of the representatives.
        for (size_t i = 0; i < b.left.size(); ++i)
            for (size_t j = 0; j < b.right.size(); ++j) {
                Element a = t.carrier.element(b.k, b.left[i]), c = t.carrier.element(b.l, b.right[j]);
                CHECK(b.matrix(static_cast<int>(i), static_cast<int>(j)) == top_coefficient(t, t.alg->mul(a, c)));
            }
        if (b.k == 1) {
            saw_middle = true;
            CHECK(b.matrix.rows() == 2);
            CHECK(b.matrix(0, 0) == 0);
            CHECK(b.matrix(0, 1) == -b.matrix(1, 0));
        }
    }
    CHECK(saw_middle);

    auto h = basic("heisenberg5");
    auto hv = pairing_and_niceness(h);
    CHECK(hv.nice);
    bool saw = false;
    for (const auto& b : hv.blocks)
        if (b.k == 1 && b.l == 3) {
            saw = true;
            CHECK(b.matrix.rows() == 4);
            CHECK(b.matrix.cols() == 4);
            CHECK(sgn(determinant(b.matrix)) != 0);
        }
    CHECK(saw);

    auto z = pairing_and_niceness(with_chi(h, Element{}));
    CHECK_FALSE(z.nice);
    bool radical = false;
    for (const auto& b : z.blocks)
        if (b.radical && !is_zero(*b.radical)) {
            radical = true;
            CHECK_FALSE(b.radical_text.empty());
        }
    CHECK(radical);
}

TEST_CASE("Frobenius potential: cubic term and WDVV") {
    for (const auto& name : {"torus1", "heisenberg5", "cosym5"}) {
        CAPTURE(name);
        auto g = basic(name);
        auto P2 = frobenius_potential(g, 2);
        CHECK(P2.potential.empty());
        auto P = frobenius_potential(g, 4);
        CHECK(P.checks.ok());
        const auto& T = *P.tvars;
        auto dt = t_derivatives(T);
        const int r = T.size();
        CHECK(P.classes.size() == static_cast<size_t>(r));
        for (int a = 0; a < r; ++a) {
            CHECK(T.is_odd(a) == (P.degrees[a] % 2 != 0));
            for (int b = 0; b < r; ++b) {
                Q eta = top_coefficient(g, g.alg->mul(P.classes[a], P.classes[b]));
                CHECK(P.eta(a, b) == eta);
                for (int c = 0; c < r; ++c) {
                    Element e = dt[a].apply(T, dt[b].apply(T, dt[c].apply(T, P.potential)));
                    auto it = e.find(T.unit_monomial());
                    Q got = it == e.end() ? Q(0) : it->second;
                    Element triple = g.alg->mul(g.alg->mul(P.classes[a], P.classes[b]), P.classes[c]);
                    CHECK(got == top_coefficient(g, triple));
                }
            }
        }
        CHECK(wdvv_check(P, 4).ok());
        CHECK(wdvv_check(frobenius_potential(g, 5), 5).ok());
        auto j = potential_to_json(P);
        CHECK(j.is_object());

        FrobeniusPotential bad = P;
        bad.potential.begin()->second += 1;
        Report w = wdvv_check(bad, 4);
        CHECK_FALSE(w.ok());
        CHECK_FALSE(w.checks.front().witnesses.empty());
    }
}

TEST_CASE("Frobenius construction rejects unsupported input") {
    auto kt = basic("kodaira_thurston");
    CHECK_THROWS_AS(frobenius_potential(kt, 4), DomainError);
    CHECK_THROWS_AS(frobenius_potential(basic("trunc_linear"), 4), DomainError);
    auto cx = std::make_shared<const CartanComplex>(
        build_cartan(std::make_shared<const FoliatedModel>(builder("torus1_t2")), 2));
    CHECK_THROWS_AS(frobenius_potential(equivariant_dgbv(cx), 4), DomainError);
}
