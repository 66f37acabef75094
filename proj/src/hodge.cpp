#include "tsf/hodge.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace tsf {

HodgeOps::HodgeOps(AlgebraPtr alg, std::vector<int> frame, Element omega, Derivation d)
    : alg_(std::move(alg)), frame_(std::move(frame)), omega_(std::move(omega)), d_(std::move(d)) {
    const auto& A = *alg_;
    std::sort(frame_.begin(), frame_.end());
    for (int g = 0; g < A.size(); ++g)
        if (A.is_odd(g) && A.generators()[g].degree != 1)
            throw DomainError("symplectic Hodge operators need odd generators of degree 1");
    if (frame_.size() % 2 != 0) throw DomainError("transverse frame has odd rank " + std::to_string(frame_.size()));
    n_ = static_cast<int>(frame_.size()) / 2;
    const int r = 2 * n_;
    std::map<int, int> pos;
    for (int i = 0; i < r; ++i) {
        mask_ |= std::uint64_t{1} << A.slot(frame_[i]);
        pos[A.slot(frame_[i])] = i;
    }

    w_ = Matrix(r, r);
    for (const auto& [m, c] : omega_) {
        if (m.poly_degree() != 0 || std::popcount(m.odd) != 2 || (m.odd & ~mask_) != 0)
            throw DomainError("omega must have constant coefficients on the transverse frame");
        int a = pos[std::countr_zero(m.odd)];
        int b = pos[63 - std::countl_zero(m.odd)];
        w_(a, b) += c;
        w_(b, a) -= c;
    }
    auto inv = inverse(w_);
    if (!inv) throw DomainError("omega is degenerate on the transverse frame");
    pi_ = *inv;

    vol_ = A.power(omega_, n_);
    Q fact = 1;
    for (int i = 2; i <= n_; ++i) fact *= i;
    vol_ = scale(Q(1) / fact, vol_);
    std::vector<int> all(r);
    for (int i = 0; i < r; ++i) all[i] = i;
    auto it = vol_.find(frame_monomial(all));
    if (it == vol_.end()) throw DomainError("omega^n vanishes on the transverse frame");
    topc_ = it->second;

    for (int g : frame_) iotas_.push_back(contraction(A, g));

    // star on frame monomials: theta^K ^ star(theta^I) = B(I, K) vol, solved one
    // complementary pair at a time (the system is a signed permutation).
    for (std::uint64_t I = 0; I < (std::uint64_t{1} << r); ++I) {
        std::vector<int> ipos;
        for (int i = 0; i < r; ++i)
            if (I >> i & 1) ipos.push_back(i);
        Element s;
        for (const auto& K : subsets(static_cast<int>(ipos.size()))) {
            std::vector<int> J;
            for (int i = 0; i < r; ++i)
                if (std::find(K.begin(), K.end(), i) == K.end()) J.push_back(i);
            Monomial mj = frame_monomial(J);
            auto prod = A.mul(frame_monomial(K), mj);
            Q b = pairing(ipos, K);
            if (sgn(b) == 0) continue;
            add_term(s, mj, b * topc_ * prod->first);
        }
        std::uint64_t key = 0;
        for (int i : ipos) key |= std::uint64_t{1} << A.slot(frame_[i]);
        star_[key] = std::move(s);
    }
}

std::shared_ptr<const HodgeOps> HodgeOps::for_model(const FoliatedModel& m) {
    return std::make_shared<const HodgeOps>(m.ambient.alg, m.frame(), m.omega, m.ambient.d);
}

Monomial HodgeOps::frame_monomial(const std::vector<int>& positions) const {
    Monomial m = alg_->unit_monomial();
    for (int i : positions) m.odd |= std::uint64_t{1} << alg_->slot(frame_[i]);
    return m;
}

std::vector<std::vector<int>> HodgeOps::subsets(int p) const {
    std::vector<std::vector<int>> out;
    const int r = 2 * n_;
    if (p < 0 || p > r) return out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == p) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < r; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

Q HodgeOps::pairing(const std::vector<int>& I, const std::vector<int>& K) const {
    if (I.size() != K.size()) return 0;
    if (I.empty()) return 1;
    const int p = static_cast<int>(I.size());
    Matrix m(p, p);
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) m(a, b) = signs::kPairingSign * pi_(I[a], K[b]);
    return determinant(m);
}

Matrix HodgeOps::pairing_matrix(int p) const {
    auto S = subsets(p);
    Matrix m(static_cast<int>(S.size()), static_cast<int>(S.size()));
    for (size_t a = 0; a < S.size(); ++a)
        for (size_t b = 0; b < S.size(); ++b) m(static_cast<int>(a), static_cast<int>(b)) = pairing(S[a], S[b]);
    return m;
}

Element HodgeOps::Lambda(const Element& e) const {
    Element r;
    const int k = 2 * n_;
    for (int j = 0; j < k; ++j) {
        Element ij = iota(j, e);
        if (ij.empty()) continue;
        for (int i = 0; i < k; ++i)
            if (sgn(pi_(i, j)) != 0) r = add(r, iota(i, ij), signs::kLambdaScale * pi_(i, j));
    }
    return r;
}

Element HodgeOps::H(const Element& e) const {
    Element r;
    for (const auto& [m, c] : e) add_term(r, m, c * (n_ - std::popcount(m.odd)));
    return r;
}

Element HodgeOps::delta(const Element& e) const {
    Element r;
    for (const auto& [m, c] : e) {
        auto it = delta_cache_.find(m);
        if (it == delta_cache_.end()) {
            Element x{{m, Q(1)}};
            it = delta_cache_.emplace(m, add(Lambda(d(x)), d(Lambda(x)), -1)).first;
        }
        for (const auto& [mt, ct] : it->second) add_term(r, mt, c * ct);
    }
    return r;
}

Element HodgeOps::star(const Element& e) const {
    Element r;
    for (const auto& [m, c] : e) {
        if ((m.odd & ~mask_) != 0) throw DomainError("star is defined on transverse forms only: " + alg_->render(m));
        Monomial even = m;
        even.odd = 0;
        r = add(r, alg_->mul(Element{{even, c}}, star_.at(m.odd)));
    }
    return r;
}

namespace {

LinearOp star_op(const GradedCarrier& c, const HodgeOps& ops) {
    const int top = 2 * ops.n();
    GradedSpace s = c.space();
    LinearOp op{s, s, 0, {}, top};
    for (int k : c.degrees()) {
        Matrix m(c.dim(top - k), c.dim(k));
        for (int i = 0; i < c.dim(k); ++i) {
            Element b = c.basis_element(k, i);
            Element img = ops.star(b);
            if (img.empty()) continue;
            auto v = c.coordinates(top - k, img);
            if (!v) throw DomainError("star leaves the carrier: " + ops.alg().render(b));
            for (int r = 0; r < m.rows(); ++r) m(r, i) = (*v)[r];
        }
        op.blocks[k] = std::move(m);
    }
    return op;
}

std::string signed_name(int s, const std::string& op) { return (s < 0 ? "-" : "+") + op; }

}  // namespace

void compare_ops(Report& rep, const std::string& name, const LinearOp& lhs, const LinearOp& rhs) {
    auto& c = rep.add(name);
    for (const auto& [k, m] : lhs.blocks) {
        auto it = rhs.blocks.find(k);
        bool ok = it == rhs.blocks.end() ? m.is_zero() : m == it->second;
        c.check(ok, "degree " + std::to_string(k));
    }
}

SL2Package build_sl2(ModelPtr m) {
    SL2Package p;
    p.model = m;
    p.ops = HodgeOps::for_model(*m);
    p.carrier = m->basic;
    p.n = p.ops->n();
    if (p.n != m->n) throw DomainError("transverse frame rank disagrees with the basic top degree");
    const auto& ops = *p.ops;
    const auto& c = p.carrier;
    p.d = c.matrix_of([&](const Element& e) { return ops.d(e); }, 1, "d");
    p.L = c.matrix_of([&](const Element& e) { return ops.L(e); }, 2, "L");
    p.Lambda = c.matrix_of([&](const Element& e) { return ops.Lambda(e); }, -2, "Lambda");
    p.H = c.matrix_of([&](const Element& e) { return ops.H(e); }, 0, "H");
    p.delta = c.matrix_of([&](const Element& e) { return ops.delta(e); }, -1, "delta");
    p.star = star_op(c, ops);

    for (const Report& r : {sl2_identities(p, false), pairing_checks(ops)})
        for (const auto& chk : r.checks)
            if (!chk.ok())
                throw DomainError("sl(2) verification failed: " + chk.name +
                                  (chk.witnesses.empty() ? "" : " at " + chk.witnesses.front()));
    return p;
}

Report sl2_identities(const SL2Package& p, bool literal) {
    Report rep;
    const int sLD = literal ? -1 : signs::kCommLDelta;
    const int sLL = literal ? 1 : signs::kCommLLambda;
    compare_ops(rep, "[L,d] = 0", commutator(p.L, p.d), LinearOp::zero(p.d.source, p.d.target, 3));
    compare_ops(rep, "[Lambda,d] = delta", commutator(p.Lambda, p.d), p.delta);
    compare_ops(rep, "[Lambda,delta] = 0", commutator(p.Lambda, p.delta), LinearOp::zero(p.d.source, p.d.target, -3));
    compare_ops(rep, "[L,delta] = " + signed_name(sLD, "d"), commutator(p.L, p.delta), scale(sLD, p.d));
    compare_ops(rep, "[L,Lambda] = " + signed_name(sLL, "H"), commutator(p.L, p.Lambda), scale(sLL, p.H));
    compare_ops(rep, "[H,L] = -2L", commutator(p.H, p.L), scale(-2, p.L));
    compare_ops(rep, "[H,Lambda] = 2Lambda", commutator(p.H, p.Lambda), scale(2, p.Lambda));
    compare_ops(rep, "delta^2 = 0", compose(p.delta, p.delta), LinearOp::zero(p.d.source, p.d.target, -2));
    compare_ops(rep, "d delta + delta d = 0", anticommutator(p.d, p.delta), LinearOp::zero(p.d.source, p.d.target, 0));
    compare_ops(rep, "star^2 = id", compose(p.star, p.star), LinearOp::identity(p.star.source));

    const auto& ops = *p.ops;
    const auto& alg = ops.alg();
    auto& adj = rep.add("beta ^ star alpha = star beta ^ alpha");
    for (int k : p.carrier.degrees()) {
        auto basis = p.carrier.basis(k);
        std::vector<Element> stars;
        for (const auto& b : basis) stars.push_back(ops.star(b));
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = 0; j < basis.size(); ++j) {
                bool ok = alg.mul(basis[j], stars[i]) == alg.mul(stars[j], basis[i]);
                if (ok)
                    adj.pass();
                else
                    adj.fail("alpha=" + alg.render(basis[i]) + ", beta=" + alg.render(basis[j]));
            }
    }

    auto& route = rep.add("delta = (-1)^(p+1) star d star");
    LinearOp sds = compose(p.star, compose(p.d, p.star));
    for (const auto& [k, m] : p.delta.blocks) {
        Q s = (k + 1) % 2 == 0 ? 1 : -1;
        route.check(m == s * sds.block(k), "degree " + std::to_string(k));
    }
    return rep;
}

Report pairing_checks(const HodgeOps& ops) {
    Report rep;
    const auto& alg = ops.alg();
    const int r = 2 * ops.n();
    auto& sym = rep.add("B_p symmetric for even p, skew for odd p");
    for (int p = 0; p <= r; ++p) {
        Matrix m = ops.pairing_matrix(p);
        Matrix t = m.transpose();
        sym.check(p % 2 == 0 ? t == m : t == Q(-1) * m, "p=" + std::to_string(p));
    }

    auto& flat = rep.add("B_1 o flat = id");
    for (int k = 0; k < r; ++k) {
        Element f = ops.iota(k, ops.omega());
        for (int l = 0; l < r; ++l) {
            Q v = 0;
            for (int j = 0; j < r; ++j) {
                auto it = f.find(ops.frame_monomial({j}));
                if (it != f.end()) v += it->second * ops.pairing({j}, {l});
            }
            flat.check(v == (k == l ? 1 : 0), "k=" + std::to_string(k) + ", l=" + std::to_string(l));
        }
    }

    rep.add("star 1 = omega^n/n!").check(ops.star(alg.one()) == ops.volume(), alg.render(ops.star(alg.one())));

    Q bww = 0;
    for (const auto& [m1, c1] : ops.omega())
        for (const auto& [m2, c2] : ops.omega()) {
            std::vector<int> I, K;
            for (int i = 0; i < r; ++i) {
                if (m1.odd & ops.frame_monomial({i}).odd) I.push_back(i);
                if (m2.odd & ops.frame_monomial({i}).odd) K.push_back(i);
            }
            bww += c1 * c2 * ops.pairing(I, K);
        }
    Element lhs = alg.mul(ops.omega(), ops.star(ops.omega()));
    rep.add("omega ^ star omega = B(omega, omega) omega^n/n!")
        .check(lhs == scale(bww, ops.volume()), "B(omega, omega) = " + to_string(bww));
    return rep;
}

Report verify_delta_leibniz(const SL2Package& p, const Element& f, const Derivation& X, bool enforce_precondition) {
    const auto& ops = *p.ops;
    const auto& alg = ops.alg();
    if (!f.empty() && alg.homogeneous_degree(f) != 0) throw DomainError("f must be a function (degree 0)");
    if (X.parity != 1 || X.shift != -1) throw DomainError("X must act as an odd derivation of degree -1");
    Element df = ops.d(f);
    Element residual = add(df, X.apply(alg, ops.omega()), -1);
    if (!residual.empty() && enforce_precondition)
        throw DomainError("precondition df = iota(X) omega violated; residual " + alg.render(residual));

    Report rep;
    rep.add("precondition df = iota(X) omega").check(residual.empty(), alg.render(residual));
    auto& a = rep.add("a) [Lambda, iota(X)] alpha = 0");
    auto& b = rep.add("b) delta(f alpha) = f delta alpha - iota(X) alpha");
    auto& c = rep.add("c) delta(df ^ alpha) = -df ^ delta alpha + L(X) alpha");
    for (int k : p.carrier.degrees())
        for (const auto& al : p.carrier.basis(k)) {
            std::string w = alg.render(al);
            Element xa = X.apply(alg, al);
            a.check(add(ops.Lambda(xa), X.apply(alg, ops.Lambda(al)), -1).empty(), w);
            Element lb = ops.delta(alg.mul(f, al));
            Element rb = add(alg.mul(f, ops.delta(al)), xa, -1);
            b.check(lb == rb, w);
            Element lc = ops.delta(alg.mul(df, al));
            Element lx = add(ops.d(xa), X.apply(alg, ops.d(al)));
            Element rc = add(lx, alg.mul(df, ops.delta(al)), -1);
            c.check(lc == rc, w);
        }
    return rep;
}

Subspace image_into(const LinearOp& op, int k) {
    int s = op.reflect ? *op.reflect - k : k - op.shift;
    auto it = op.blocks.find(s);
    if (it == op.blocks.end()) return Subspace(op.target.dim(k));
    return image(it->second);
}

CohomologyDegree cohomology(const LinearOp& d, int k) {
    CohomologyDegree h;
    h.k = k;
    h.ker = kernel(d, k);
    h.im = image_into(d, k);
    h.q = quotient(h.ker, h.im);
    return h;
}

Subspace harmonic_space(const SL2Package& p, int k) { return intersect(kernel(p.d, k), kernel(p.delta, k)); }

namespace {

// op^s on degree k; zero matrix when the chain leaves the source.
Matrix power_block(const LinearOp& op, int k, int s) {
    Matrix m = Matrix::identity(op.source.dim(k));
    int cur = k;
    for (int i = 0; i < s; ++i) {
        auto it = op.blocks.find(cur);
        if (it == op.blocks.end()) return Matrix(op.target.dim(k + s * op.shift), op.source.dim(k));
        m = it->second * m;
        cur += op.shift;
    }
    return m;
}

// Matrix of L^s : H^j -> H^{j+2s} in representative coordinates.
Matrix lefschetz_on_cohomology(const SL2Package& p, const CohomologyDegree& hj,
                               const std::optional<CohomologyDegree>& ht, int s) {
    int tdim = ht ? ht->q.dim : 0;
    Matrix m(tdim, hj.q.dim);
    if (!ht) return m;
    Matrix ls = power_block(p.L, hj.k, s);
    for (int i = 0; i < hj.q.dim; ++i) {
        auto c = quotient_coordinates(ht->q, ht->im, ls.apply(hj.q.reps[i]));
        if (!c) throw DomainError("L does not preserve closed forms");
        for (int r = 0; r < tdim; ++r) m(r, i) = (*c)[r];
    }
    return m;
}

std::optional<CohomologyDegree> cohomology_if(const LinearOp& d, int k) {
    if (!d.source.has(k)) return std::nullopt;
    return cohomology(d, k);
}

Vec combine(const std::vector<Vec>& reps, const Vec& coeffs, int dim) {
    Vec x(dim);
    for (size_t i = 0; i < coeffs.size(); ++i)
        if (sgn(coeffs[i]) != 0) x = x + coeffs[i] * reps[i];
    return x;
}

}  // namespace

LefschetzVerdict hard_lefschetz_check(const SL2Package& p) {
    LefschetzVerdict v;
    const auto& alg = p.ops->alg();
    for (int k = 1; k <= p.n; ++k) {
        const int s = p.n - k, t = p.n + k;
        auto hs = cohomology(p.d, s);
        auto ht = cohomology_if(p.d, t);
        Matrix m = lefschetz_on_cohomology(p, hs, ht, k);
        LefschetzDegree ld;
        ld.k = k;
        ld.source_dim = hs.q.dim;
        ld.target_dim = m.rows();
        ld.rank = rank(m);
        ld.iso = ld.source_dim == ld.target_dim && ld.rank == ld.source_dim;
        if (!ld.iso) {
            v.ok = false;
            Matrix ls = power_block(p.L, s, k);
            if (ld.rank < ld.source_dim) {
                Vec kv = kernel(m).basis().front();
                Vec x = combine(hs.q.reps, kv, p.carrier.dim(s));
                ld.witness_kind = "kernel";
                ld.witness = x;
                ld.witness_text = alg.render(p.carrier.element(s, x));
                bool closed = is_zero(p.d.apply(s, x));
                bool nonzero_class = !hs.im.contains(x);
                bool killed = ht && ht->im.contains(ls.apply(x));
                ld.witness_verified = closed && nonzero_class && killed;
            } else {
                Subspace im = image(m);
                int pick = 0;
                while (pick < ht->q.dim) {
                    Vec e(ht->q.dim);
                    e[pick] = 1;
                    if (!im.contains(e)) break;
                    ++pick;
                }
                Vec y = ht->q.reps[pick];
                ld.witness_kind = "cokernel";
                ld.witness = y;
                ld.witness_text = alg.render(p.carrier.element(t, y));
                std::vector<Vec> gens = ht->im.basis();
                for (const auto& z : hs.ker.basis()) gens.push_back(ls.apply(z));
                Subspace reach = Subspace::span(p.carrier.dim(t), gens);
                ld.witness_verified = is_zero(p.d.apply(t, y)) && !reach.contains(y);
            }
        }
        v.degrees.push_back(std::move(ld));
    }
    return v;
}

DdeltaVerdict ddelta_check(const LinearOp& d, const LinearOp& delta, const GradedCarrier& c) {
    DdeltaVerdict v;
    LinearOp dd = compose(d, delta);
    const auto& alg = *c.algebra();
    for (int k : d.source.degrees()) {
        DdeltaDegree r;
        r.k = k;
        Subspace kd = kernel(d, k), kdel = kernel(delta, k);
        Subspace imd = image_into(d, k), imdel = image_into(delta, k);
        r.im_d_ker_delta = intersect(imd, kdel);
        r.ker_d_im_delta = intersect(kd, imdel);
        r.im_d_delta = image(dd.block(k));
        r.equal = r.im_d_ker_delta == r.ker_d_im_delta && r.im_d_ker_delta == r.im_d_delta;
        if (!r.equal) {
            v.all_equal = false;
            bool from_first = false;
            for (const auto& w : r.im_d_ker_delta.basis())
                if (!r.im_d_delta.contains(w)) {
                    r.witness = w;
                    from_first = true;
                    break;
                }
            if (!r.witness)
                for (const auto& w : r.ker_d_im_delta.basis())
                    if (!r.im_d_delta.contains(w)) {
                        r.witness = w;
                        break;
                    }
            if (r.witness) {
                const Vec& w = *r.witness;
                r.witness_text = alg.render(c.element(k, w));
                bool member;
                if (from_first) {
                    member = d.blocks.count(k - 1) && solve_least(d.block(k - 1), w).has_value() &&
                             is_zero(delta.apply(k, w));
                } else {
                    member = delta.blocks.count(k + 1) && solve_least(delta.block(k + 1), w).has_value() &&
                             is_zero(d.apply(k, w));
                }
                r.witness_verified = member && !solve_least(dd.block(k), w).has_value();
            }
        }
        v.degrees.push_back(std::move(r));
    }
    return v;
}

Report quasi_isomorphism_check(const LinearOp& d, const LinearOp& delta) {
    Report rep;
    auto& a = rep.add("H(ker delta, d) -> H(d) is an isomorphism");
    auto& b = rep.add("H(ker d, delta) -> H(delta) is an isomorphism");
    auto restricted_image = [](const LinearOp& op, int src, const Subspace& dom, int tdim) {
        std::vector<Vec> gens;
        auto it = op.blocks.find(src);
        if (it != op.blocks.end())
            for (const auto& v : dom.basis()) gens.push_back(it->second.apply(v));
        return Subspace::span(tdim, gens);
    };
    for (int k : d.source.degrees()) {
        const int dim = d.source.dim(k);
        Subspace z = intersect(kernel(d, k), kernel(delta, k));
        {
            Subspace bnd = d.source.has(k - 1) ? restricted_image(d, k - 1, kernel(delta, k - 1), dim) : Subspace(dim);
            auto h = cohomology(d, k);
            bool injective = intersect(z, h.im) == bnd;
            int sub = z.dim() - bnd.dim();
            a.check(injective && sub == h.q.dim,
                    "degree " + std::to_string(k) + ": " + std::to_string(sub) + " vs " + std::to_string(h.q.dim));
        }
        {
            Subspace bnd = d.source.has(k + 1) ? restricted_image(delta, k + 1, kernel(d, k + 1), dim) : Subspace(dim);
            auto h = cohomology(delta, k);
            bool injective = intersect(z, h.im) == bnd;
            int sub = z.dim() - bnd.dim();
            b.check(injective && sub == h.q.dim,
                    "degree " + std::to_string(k) + ": " + std::to_string(sub) + " vs " + std::to_string(h.q.dim));
        }
    }
    return rep;
}

Vec harmonic_representative(const LinearOp& d, const LinearOp& delta, int k, const Vec& alpha) {
    if (d.blocks.count(k) && !is_zero(d.apply(k, alpha)))
        throw DomainError("harmonic_representative: input of degree " + std::to_string(k) + " is not closed");
    Vec da = delta.apply(k, alpha);
    if (is_zero(da)) return alpha;
    auto fail = [&]() -> NoHarmonicRepresentative {
        return NoHarmonicRepresentative("no symplectic harmonic representative in degree " + std::to_string(k),
                                        "delta(alpha) is not in the image of delta d on degree " +
                                            std::to_string(k - 1));
    };
    if (!d.blocks.count(k - 1)) throw fail();
    Matrix m = delta.block(k) * d.block(k - 1);
    auto gamma = solve_least(m, Q(-1) * da);
    if (!gamma) throw fail();
    return alpha + d.apply(k - 1, *gamma);
}

PrimitiveDecomposition primitive_decomposition(const SL2Package& p, int k, const Vec& alpha) {
    if (!is_zero(p.d.apply(k, alpha))) throw DomainError("primitive_decomposition: input is not closed");
    const int n = p.n;
    auto hk = cohomology(p.d, k);
    auto a = quotient_coordinates(hk.q, hk.im, alpha);
    if (!a) throw DomainError("primitive_decomposition: input is not closed");

    struct Block {
        int r, j;
        CohomologyDegree h;
        std::vector<Vec> prim;  // primitive classes in H^j coordinates
    };
    std::vector<Block> blocks;
    std::vector<Vec> cols;
    for (int r = 0; 2 * r <= k; ++r) {
        const int j = k - 2 * r;
        if (j > n) continue;
        Block b{r, j, cohomology(p.d, j), {}};
        const int s = n - j + 1;
        auto ht = cohomology_if(p.d, j + 2 * s);
        Matrix ls = lefschetz_on_cohomology(p, b.h, ht, s);
        b.prim = ls.rows() == 0 ? Subspace::full(b.h.q.dim).basis() : kernel(ls).basis();
        Matrix lr = lefschetz_on_cohomology(p, b.h, hk, r);
        for (const auto& v : b.prim) cols.push_back(lr.apply(v));
        blocks.push_back(std::move(b));
    }
    auto coef = solve_least(Matrix::from_columns(cols, hk.q.dim), *a);
    if (!coef) throw DomainError("primitive_decomposition: class is not a sum of Lefschetz images of primitives");

    PrimitiveDecomposition out;
    size_t idx = 0;
    Vec resum(p.carrier.dim(k));
    bool primitive_ok = true;
    for (const auto& b : blocks) {
        Vec cls(b.h.q.dim);
        for (const auto& v : b.prim) cls = cls + (*coef)[idx++] * v;
        if (is_zero(cls)) continue;
        Vec form = combine(b.h.q.reps, cls, p.carrier.dim(b.j));
        resum = resum + power_block(p.L, b.j, b.r).apply(form);
        const int s = n - b.j + 1;
        Vec top = power_block(p.L, b.j, s).apply(form);
        if (p.d.source.has(b.j + 2 * s) && !image_into(p.d, b.j + 2 * s).contains(top)) primitive_ok = false;
        out.parts.push_back({b.r, b.j, std::move(form)});
    }
    out.verified = primitive_ok && hk.im.contains(resum - alpha);
    return out;
}

}  // namespace tsf
