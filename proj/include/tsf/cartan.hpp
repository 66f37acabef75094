#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tsf/hodge.hpp"

namespace tsf {

// Truncated Cartan model: invariants of S(g*) (u-degree <= D) tensored with the
// form window, graded by total degree 2 * (u-degree) + form degree.
struct CartanComplex {
    ModelPtr model;
    int m = 0;
    int D = 0;
    AlgebraPtr ext;         // model generators followed by u_1..u_m of degree 2
    std::vector<int> u;     // generator indices of the u's in ext
    GradedCarrier window;   // model forms stable under d, iota_a, L_a, delta
    GradedCarrier carrier;  // invariant cochains in ext
    std::shared_ptr<const HodgeOps> ops;        // on ext
    std::shared_ptr<const HodgeOps> model_ops;  // on the model algebra
    Derivation d_ext;
    std::vector<Derivation> iota_ext, lie_ext, rho;
    LinearOp d, del, dG, delta;  // on the carrier
    LinearOp wd, wdelta;         // on the window
    int max_degree = 0;
    std::optional<int> f_min;  // least form degree where some iota_a acts
    int safe_window = 0;
    std::vector<int> sg_dims;  // dim S^i(g*)^G for i = 0..D

    int u_degree(const Monomial& mon) const;
    Element embed(const Element& model_elem) const;
    // Inverse of embed on elements without u's.
    Element restrict(const Element& e) const;
    Element truncate(const Element& e) const;
    Element partial(const Element& e, bool truncated = true) const;
    Element mul(const Element& a, const Element& b) const { return truncate(ext->mul(a, b)); }
    // u-degree of carrier basis vector i in degree k.
    int basis_u_degree(int k, int i) const;
};

using CartanPtr = std::shared_ptr<const CartanComplex>;

// Throws when the action is missing, omega is not invariant, or any of the
// identities d^2 = 0, del^2 = 0, [d, del] = 0, [del, delta] = 0, [d_G, delta] = 0 fails.
CartanComplex build_cartan(ModelPtr m, int D);

Report cartan_identities(const CartanComplex& cx);

// Throws when k lies outside [0, safe_window].
CohomologyDegree equivariant_cohomology(const CartanComplex& cx, int k);

struct FormalityDegree {
    int k = 0;
    int lhs = 0;  // dim H_G^k
    int rhs = 0;  // sum_i dim S^i(g*)^G dim H^{k-2i}
};
struct FormalityVerdict {
    bool ok = true;
    std::vector<FormalityDegree> degrees;
    std::optional<int> first_discrepancy;
};
// Checks the moment condition first unless bypass_moment_check is set.
FormalityVerdict formality_check(const CartanComplex& cx, bool bypass_moment_check = false);

Report verify_iota_exactness(const CartanComplex& cx, int a);

struct DgDeltaEntry {
    int k = 0;
    Vec alpha, beta;
    bool verified = false;
};
struct DgDeltaVerdict {
    bool ok = true;
    std::vector<DgDeltaEntry> entries;
    std::optional<DgDeltaEntry> counterexample;
};
DgDeltaVerdict dG_delta_lemma_check(const CartanComplex& cx);

struct EquivariantClass {
    int k = 0;
    Vec coords;  // in the carrier, degree k
    std::vector<Element> components;  // by u-degree
    bool verified = false;
};
// s(alpha) for a harmonic window form alpha of degree k (window coordinates).
EquivariantClass canonical_section(const CartanComplex& cx, int k, const Vec& alpha);

// p o s = id on a harmonic basis of every window cohomology group within the safe window.
Report section_checks(const CartanComplex& cx);
// d and del induce zero on H(Omega_G, delta).
Report induced_differentials_vanish(const CartanComplex& cx);

}  // namespace tsf
