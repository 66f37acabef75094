#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tsf/cartan.hpp"

namespace tsf {

// Polynomial in the u's: exponent vector -> coefficient. Scalars use the
// all-zero key (the empty key when there are no u's).
using UPoly = std::map<std::vector<int>, Q>;
std::string render_upoly(const UPoly& p, const FreeAlgebra& alg, const std::vector<int>& u);

struct DgbvData {
    std::string kind;  // "basic" or "equivariant"
    ModelPtr model;
    CartanPtr cartan;  // equivariant only
    std::shared_ptr<const HodgeOps> ops;
    AlgebraPtr alg;
    GradedCarrier carrier;
    LinearOp d, delta;  // d is d_G in the equivariant case
    std::function<Element(const Element&)> d_of, delta_of;
    std::function<Element(const Element&, const Element&)> mul;
    std::optional<Element> chi;  // in alg
    Monomial top;                // integrand monomial, u-exponents ignored
    std::vector<int> u;          // generator indices of the u's in alg
    int transverse_top = 0;      // top basic degree 2n
};

DgbvData basic_dgbv(const SL2Package& p);
DgbvData equivariant_dgbv(CartanPtr cx);
// Copy with chi replaced (used for the degenerate control chi = 0).
DgbvData with_chi(const DgbvData& g, std::optional<Element> chi);

inline constexpr int kGbvThreshold = 64;

// (-1)^|a| (delta(a b) - delta(a) b - (-1)^|a| a delta(b)); throws on inhomogeneous input.
Element bracket(const DgbvData& g, const Element& a, const Element& b);

Report verify_gbv(const DgbvData& g, int threshold = kGbvThreshold);

// Top coefficient of alpha ^ chi, by u-exponent; throws when chi is absent.
UPoly integral(const DgbvData& g, const Element& alpha);
Report integral_axioms(const DgbvData& g);

struct PairingBlock {
    int k = 0, l = 0;  // H^k x H^l with k + l = transverse_top
    std::vector<Vec> left, right;  // representatives in carrier coordinates
    Matrix matrix;                 // scalar pairing; constant coefficients when equivariant
    std::vector<std::vector<UPoly>> entries;  // equivariant only
    bool nondegenerate = true;
    std::optional<Vec> radical;  // coefficients on left (or right, see radical_side)
    std::string radical_side;
    std::string radical_text;
};
struct PairingVerdict {
    bool nice = true;
    std::vector<PairingBlock> blocks;
    Report axioms;
};
PairingVerdict pairing_and_niceness(const DgbvData& g);

// t-monomials on the left, carrier elements on the right.
using TSeries = std::map<Monomial, Element, MonomialLess>;

struct FrobeniusPotential {
    int order = 0;
    AlgebraPtr alg;    // carrier algebra
    AlgebraPtr tvars;  // t0, t1, ...; t_a is odd exactly when Delta_a is
    std::vector<Element> classes;  // harmonic representatives Delta_a
    std::vector<int> degrees;
    Matrix eta;  // int Delta_a ^ Delta_b
    TSeries gamma;
    Element potential;  // in tvars, orders 3..order
    std::map<int, int> obstructions;  // order -> solved components
    Report checks;
};

// Throws DomainError when a precondition fails or an obstruction is not d delta-exact.
FrobeniusPotential frobenius_potential(const DgbvData& g, int K);
// WDVV residuals of p.potential through order K - 3 in t.
Report wdvv_check(const FrobeniusPotential& p, int K);
nlohmann::json potential_to_json(const FrobeniusPotential& p);

// [f . dh] = kBracketPoisson * pi(df, dh) for basic functions f, h.
Report poisson_cross_check(const DgbvData& g, const Element& f, const Element& h);

}  // namespace tsf
