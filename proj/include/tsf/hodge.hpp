#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tsf/foliation.hpp"

namespace tsf {

// Frozen sign conventions. Every operator below is built from these.
namespace signs {
inline const Q kLambdaScale{1, 2};   // Lambda = kLambdaScale * sum_ij pi^ij iota_i iota_j
inline constexpr int kPairingSign = 1;   // B(theta^I, theta^K) = det(kPairingSign * pi^{IK})
inline constexpr int kCommLLambda = -1;  // [L, Lambda] = kCommLLambda * H
inline constexpr int kCommLDelta = 1;    // [L, delta] = kCommLDelta * d
inline constexpr int kBracketPoisson = -1;  // [f . dg] = kBracketPoisson * pi(df, dg)
}  // namespace signs

// Sparse transverse symplectic operators on a free algebra whose transverse
// symplectic form has constant coefficients in a frame of odd generators.
class HodgeOps {
public:
    HodgeOps(AlgebraPtr alg, std::vector<int> frame, Element omega, Derivation d);
    static std::shared_ptr<const HodgeOps> for_model(const FoliatedModel& m);

    const FreeAlgebra& alg() const { return *alg_; }
    const AlgebraPtr& algebra() const { return alg_; }
    int n() const { return n_; }
    const std::vector<int>& frame() const { return frame_; }
    std::uint64_t frame_mask() const { return mask_; }
    const Element& omega() const { return omega_; }
    const Matrix& omega_matrix() const { return w_; }
    const Matrix& pi() const { return pi_; }
    const Element& volume() const { return vol_; }
    const Q& top_coefficient() const { return topc_; }

    Element d(const Element& e) const { return d_.apply(*alg_, e); }
    Element L(const Element& e) const { return alg_->mul(e, omega_); }
    Element Lambda(const Element& e) const;
    Element H(const Element& e) const;
    Element delta(const Element& e) const;
    Element star(const Element& e) const;
    // Contraction with the frame vector dual to frame()[i].
    Element iota(int i, const Element& e) const { return iotas_[i].apply(*alg_, e); }

    // Frame monomial for a set of frame positions.
    Monomial frame_monomial(const std::vector<int>& positions) const;
    std::vector<std::vector<int>> subsets(int p) const;
    Q pairing(const std::vector<int>& I, const std::vector<int>& K) const;
    Matrix pairing_matrix(int p) const;

private:
    AlgebraPtr alg_;
    std::vector<int> frame_;
    std::uint64_t mask_ = 0;
    Element omega_;
    Derivation d_;
    int n_ = 0;
    Matrix w_, pi_;
    Element vol_;
    Q topc_;
    std::vector<Derivation> iotas_;
    std::map<std::uint64_t, Element> star_;
    mutable std::map<Monomial, Element, MonomialLess> delta_cache_;
};

struct SL2Package {
    ModelPtr model;
    std::shared_ptr<const HodgeOps> ops;
    GradedCarrier carrier;
    int n = 0;
    LinearOp d, L, Lambda, H, delta, star;
};

// Builds every operator on the basic complex and verifies the frozen-convention
// identities; throws DomainError naming the first failing identity.
SL2Package build_sl2(ModelPtr m);
inline SL2Package build_sl2(const FoliatedModel& m) { return build_sl2(std::make_shared<const FoliatedModel>(m)); }

// Adds a check comparing two operators block by block (missing blocks count as zero).
void compare_ops(Report& rep, const std::string& name, const LinearOp& lhs, const LinearOp& rhs);

// Operator identities. With literal = true the relations are checked exactly as
// [L,Lambda] = H and [L,delta] = -d; otherwise with the frozen signs.
Report sl2_identities(const SL2Package& p, bool literal);
// Pairing checks: parity symmetry of B_p, B_1 o flat = id, star 1 = omega^n/n!.
Report pairing_checks(const HodgeOps& ops);

// Checks a) [Lambda, iota(X)] = 0, b) delta(f a) = f delta a - iota(X) a and
// c) delta(df ^ a) = -df ^ delta a + L(X) a for a basic function f and odd
// derivation X (the contraction with a foliate field). The precondition df = iota(X) omega is
// enforced unless enforce_precondition is false.
Report verify_delta_leibniz(const SL2Package& p, const Element& f, const Derivation& X,
                            bool enforce_precondition = true);

struct CohomologyDegree {
    int k = 0;
    Subspace ker, im;
    Quotient q;
};
// Image of op inside degree k of its target.
Subspace image_into(const LinearOp& op, int k);
CohomologyDegree cohomology(const LinearOp& d, int k);

Subspace harmonic_space(const SL2Package& p, int k);

struct LefschetzDegree {
    int k = 0;  // L^k : H^{n-k} -> H^{n+k}
    int source_dim = 0, target_dim = 0, rank = 0;
    bool iso = true;
    std::string witness_kind;  // "kernel" or "cokernel"
    Vec witness;               // basic form of degree n-k (kernel) or n+k (cokernel)
    std::string witness_text;
    bool witness_verified = false;
};
struct LefschetzVerdict {
    bool ok = true;
    std::vector<LefschetzDegree> degrees;
};
LefschetzVerdict hard_lefschetz_check(const SL2Package& p);

struct DdeltaDegree {
    int k = 0;
    Subspace im_d_ker_delta, ker_d_im_delta, im_d_delta;
    bool equal = true;
    std::optional<Vec> witness;
    std::string witness_text;
    bool witness_verified = false;
};
struct DdeltaVerdict {
    bool all_equal = true;
    std::vector<DdeltaDegree> degrees;
};
DdeltaVerdict ddelta_check(const LinearOp& d, const LinearOp& delta, const GradedCarrier& c);
inline DdeltaVerdict ddelta_check(const SL2Package& p) { return ddelta_check(p.d, p.delta, p.carrier); }

// Cohomology of (ker delta, d) and (ker d, delta) against the full complex.
Report quasi_isomorphism_check(const LinearOp& d, const LinearOp& delta);

struct NoHarmonicRepresentative : DomainError {
    NoHarmonicRepresentative(const std::string& msg, std::string cert)
        : DomainError(msg), certificate(std::move(cert)) {}
    std::string certificate;
};
// alpha + d gamma with delta d gamma = -delta alpha; identity on harmonic input.
Vec harmonic_representative(const LinearOp& d, const LinearOp& delta, int k, const Vec& alpha);
inline Vec harmonic_representative(const SL2Package& p, int k, const Vec& alpha) {
    return harmonic_representative(p.d, p.delta, k, alpha);
}

struct PrimitivePart {
    int r = 0;  // the part contributes L^r alpha_r
    int degree = 0;
    Vec form;   // closed primitive representative of degree k - 2r
};
struct PrimitiveDecomposition {
    std::vector<PrimitivePart> parts;
    bool verified = false;
};
PrimitiveDecomposition primitive_decomposition(const SL2Package& p, int k, const Vec& alpha);

}  // namespace tsf
