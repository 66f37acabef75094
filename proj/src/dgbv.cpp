#include "tsf/dgbv.hpp"

#include <algorithm>
#include <array>
#include <bit>

namespace tsf {

namespace {

int parity_of(const FreeAlgebra& alg, const Monomial& m) { return alg.degree(m) % 2 != 0 ? 1 : 0; }

std::pair<Element, Element> split_parity(const FreeAlgebra& alg, const Element& e) {
    std::pair<Element, Element> r;
    for (const auto& [m, c] : e) (parity_of(alg, m) ? r.second : r.first).emplace(m, c);
    return r;
}

struct BasisItem {
    int k;
    Element e;
};

std::vector<BasisItem> all_basis(const GradedCarrier& c) {
    std::vector<BasisItem> out;
    for (int k : c.degrees())
        for (auto& b : c.basis(k)) out.push_back({k, std::move(b)});
    return out;
}

UPoly upoly_add(UPoly a, const UPoly& b, const Q& sb) {
    for (const auto& [k, c] : b) {
        Q v = a[k] + sb * c;
        if (sgn(v) == 0)
            a.erase(k);
        else
            a[k] = v;
    }
    return a;
}

Q constant_term(const UPoly& p, int m) {
    auto it = p.find(std::vector<int>(m, 0));
    return it == p.end() ? Q(0) : it->second;
}

// Left-kernel or right-kernel vector of a pairing matrix, if any.
void find_radical(PairingBlock& b) {
    const Matrix& M = b.matrix;
    Subspace left = kernel(M.transpose());
    if (left.dim() > 0) {
        b.radical = left.basis().front();
        b.radical_side = "left";
        return;
    }
    Subspace right = kernel(M);
    if (right.dim() > 0) {
        b.radical = right.basis().front();
        b.radical_side = "right";
    }
}

// ---- formal series in the t's ----

int t_order(const Monomial& m) {
    int s = std::popcount(m.odd);
    for (int e : m.exps) s += e;
    return s;
}
int t_parity(const Monomial& m) { return std::popcount(m.odd) % 2; }

void series_add_to(TSeries& x, const Monomial& m, const Element& e, const Q& s = 1) {
    if (e.empty()) return;
    Element r = add(x[m], e, s);
    if (r.empty())
        x.erase(m);
    else
        x[m] = std::move(r);
}

struct SeriesCtx {
    const FreeAlgebra& T;
    const FreeAlgebra& A;
    std::function<Element(const Element&, const Element&)> mul;

    // (t^M g)(t^N h) = (-1)^{|g||N|} t^M t^N g h
    TSeries product(const TSeries& x, const TSeries& y, int max_order) const {
        TSeries out;
        for (const auto& [M, g] : x) {
            auto [ge, go] = split_parity(A, g);
            for (const auto& [N, h] : y) {
                if (t_order(M) + t_order(N) > max_order) continue;
                auto tm = T.mul(M, N);
                if (!tm) continue;
                const int s = tm->first;
                if (!ge.empty()) series_add_to(out, tm->second, mul(ge, h), s);
                if (!go.empty()) series_add_to(out, tm->second, mul(go, h), t_parity(N) ? -s : s);
            }
        }
        return out;
    }

    // Odd operator on the right factor: op(t^M g) = (-1)^{|M|} t^M op(g).
    TSeries odd_op(const std::function<Element(const Element&)>& op, const TSeries& x) const {
        TSeries out;
        for (const auto& [M, g] : x) series_add_to(out, M, op(g), t_parity(M) ? -1 : 1);
        return out;
    }

    TSeries derivative(const Derivation& dt, const TSeries& x) const {
        TSeries out;
        for (const auto& [M, g] : x)
            for (const auto& [M2, c] : dt.apply(T, M)) series_add_to(out, M2, g, c);
        return out;
    }
};

Derivation t_derivative(const FreeAlgebra& T, int a) {
    if (T.is_odd(a)) return contraction(T, a);
    Derivation d = zero_derivation(T, 0, 0);
    d.images[a] = T.one();
    return d;
}

Element truncate_order(const Element& e, int max_order) {
    Element r;
    for (const auto& [m, c] : e)
        if (t_order(m) <= max_order) r.emplace(m, c);
    return r;
}

// All t-monomials of exactly the given order.
void monomials_of_order(const FreeAlgebra& T, int order, int var, Monomial& cur, std::vector<Monomial>& out) {
    if (order == 0) {
        out.push_back(cur);
        return;
    }
    if (var >= T.size()) return;
    const int slot = T.slot(var);
    if (T.is_odd(var)) {
        cur.odd |= std::uint64_t{1} << slot;
        monomials_of_order(T, order - 1, var + 1, cur, out);
        cur.odd &= ~(std::uint64_t{1} << slot);
    } else {
        for (int e = order; e >= 1; --e) {
            cur.exps[slot] = e;
            monomials_of_order(T, order - e, var + 1, cur, out);
        }
        cur.exps[slot] = 0;
    }
    monomials_of_order(T, order, var + 1, cur, out);
}

// Variables of a t-monomial in index order, with multiplicity.
std::vector<int> variables(const FreeAlgebra& T, const Monomial& m) {
    std::vector<int> v;
    for (int g = 0; g < T.size(); ++g) {
        const int s = T.slot(g);
        if (T.is_odd(g)) {
            if (m.odd >> s & 1) v.push_back(g);
        } else {
            for (int e = 0; e < m.exps[s]; ++e) v.push_back(g);
        }
    }
    return v;
}

Element third_derivative(const std::vector<Derivation>& dts, const FreeAlgebra& T, int a, int b, int c, const Element& f) {
    return dts[a].apply(T, dts[b].apply(T, dts[c].apply(T, f)));
}

std::string triple_name(int a, int b, int c) {
    return "(t" + std::to_string(a) + ", t" + std::to_string(b) + ", t" + std::to_string(c) + ")";
}

}  // namespace

std::string render_upoly(const UPoly& p, const FreeAlgebra& alg, const std::vector<int>& u) {
    if (p.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        const auto& [key, c] = *it;
        std::string mon;
        for (size_t a = 0; a < key.size(); ++a) {
            if (key[a] == 0) continue;
            if (!mon.empty()) mon += "*";
            mon += alg.generators()[u[a]].name;
            if (key[a] > 1) mon += "**" + std::to_string(key[a]);
        }
        Q v = c;
        if (!first) {
            s += sgn(v) < 0 ? " - " : " + ";
            v = abs(v);
        }
        if (mon.empty())
            s += to_string(v);
        else if (v == 1)
            s += mon;
        else if (v == -1)
            s += "-" + mon;
        else
            s += to_string(v) + "*" + mon;
        first = false;
    }
    return s;
}

DgbvData basic_dgbv(const SL2Package& p) {
    DgbvData g;
    g.kind = "basic";
    g.model = p.model;
    g.ops = p.ops;
    g.alg = p.model->ambient.alg;
    g.carrier = p.carrier;
    g.d = p.d;
    g.delta = p.delta;
    auto ops = p.ops;
    g.d_of = [ops](const Element& e) { return ops->d(e); };
    g.delta_of = [ops](const Element& e) { return ops->delta(e); };
    auto model = p.model;
    g.mul = [model](const Element& a, const Element& b) { return model->ambient.wedge(a, b); };
    g.chi = p.model->chi;
    g.top = p.model->ambient.top_monomial();
    g.transverse_top = 2 * p.model->n;
    return g;
}

DgbvData equivariant_dgbv(CartanPtr cx) {
    DgbvData g;
    g.kind = "equivariant";
    g.model = cx->model;
    g.cartan = cx;
    g.ops = cx->ops;
    g.alg = cx->ext;
    g.carrier = cx->carrier;
    g.d = cx->dG;
    g.delta = cx->delta;
    g.d_of = [cx](const Element& e) { return add(cx->ops->d(e), cx->partial(e)); };
    g.delta_of = [cx](const Element& e) { return cx->ops->delta(e); };
    g.mul = [cx](const Element& a, const Element& b) { return cx->mul(a, b); };
    if (cx->model->chi) g.chi = cx->embed(*cx->model->chi);
    Monomial top = cx->model->ambient.top_monomial();
    top.exps.resize(top.exps.size() + cx->m, 0);
    g.top = top;
    g.u = cx->u;
    g.transverse_top = 2 * cx->model->n;
    return g;
}

DgbvData with_chi(const DgbvData& g, std::optional<Element> chi) {
    DgbvData r = g;
    r.chi = std::move(chi);
    return r;
}

Element bracket(const DgbvData& g, const Element& a, const Element& b) {
    auto da = g.alg->homogeneous_degree(a);
    auto db = g.alg->homogeneous_degree(b);
    if ((!da && !a.empty()) || (!db && !b.empty())) throw DomainError("bracket: inhomogeneous input");
    if (a.empty() || b.empty()) return {};
    const int s = *da % 2 ? -1 : 1;
    Element r = add(g.delta_of(g.mul(a, b)), g.mul(g.delta_of(a), b), -1);
    r = add(r, g.mul(a, g.delta_of(b)), -s);
    return scale(s, r);
}

Report verify_gbv(const DgbvData& g, int threshold) {
    Report rep;
    const auto& s = g.d.source;
    compare_ops(rep, "delta^2 = 0", compose(g.delta, g.delta), LinearOp::zero(s, s, -2));
    compare_ops(rep, "d^2 = 0", compose(g.d, g.d), LinearOp::zero(s, s, 2));
    compare_ops(rep, "d delta + delta d = 0", anticommutator(g.d, g.delta), LinearOp::zero(s, s, 0));

    const auto basis = all_basis(g.carrier);
    const auto& alg = *g.alg;
    auto& der = rep.add("d is a derivation of the product");
    auto& sym = rep.add("[a.b] = -(-1)^((|a|+1)(|b|+1)) [b.a]");
    auto& unit = rep.add("[1.b] = 0");
    std::map<std::pair<size_t, size_t>, Element> br;
    for (size_t i = 0; i < basis.size(); ++i) {
        const auto& [ka, a] = basis[i];
        unit.check(bracket(g, alg.one(), a).empty(), alg.render(a));
        for (size_t j = 0; j < basis.size(); ++j) {
            const auto& [kb, b] = basis[j];
            Element lhs = g.d_of(g.mul(a, b));
            Element rhs = add(g.mul(g.d_of(a), b), g.mul(a, g.d_of(b)), ka % 2 ? -1 : 1);
            der.check(lhs == rhs, "(" + alg.render(a) + ", " + alg.render(b) + ")");
            br[{i, j}] = bracket(g, a, b);
        }
    }
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = 0; j < basis.size(); ++j) {
            const int e = (basis[i].k + 1) * (basis[j].k + 1);
            sym.check(br[{i, j}] == scale(e % 2 ? 1 : -1, br[{j, i}]),
                      "(" + alg.render(basis[i].e) + ", " + alg.render(basis[j].e) + ")");
        }

    auto& id = rep.add("[a.(b^c)] = [a.b]^c + (-1)^((|a|+1)|b|) b^[a.c]");
    std::vector<BasisItem> cs;
    const bool exhaustive = static_cast<int>(basis.size()) <= threshold;
    if (exhaustive) {
        cs = basis;
        id.note = "exhaustive over " + std::to_string(basis.size()) + "^3 basis triples (threshold " +
                  std::to_string(threshold) + ")";
    } else {
        for (int gi = 0; gi < alg.size(); ++gi) cs.push_back({alg.generators()[gi].degree, alg.gen(gi)});
        id.note = "carrier dimension " + std::to_string(basis.size()) + " exceeds threshold " +
                  std::to_string(threshold) + ": a, b over the basis, c over the algebra generators";
    }
    for (size_t i = 0; i < basis.size(); ++i) {
        const auto& [ka, a] = basis[i];
        for (size_t j = 0; j < basis.size(); ++j) {
            const auto& [kb, b] = basis[j];
            for (size_t l = 0; l < cs.size(); ++l) {
                const auto& [kc, c] = cs[l];
                Element lhs = bracket(g, a, g.mul(b, c));
                Element ac = exhaustive ? br[{i, l}] : bracket(g, a, c);
                Element rhs = add(g.mul(br[{i, j}], c), g.mul(b, ac), ((ka + 1) * kb) % 2 ? -1 : 1);
                id.check(lhs == rhs, "(" + alg.render(a) + ", " + alg.render(b) + ", " + alg.render(c) + ")");
            }
        }
    }
    return rep;
}

UPoly integral(const DgbvData& g, const Element& alpha) {
    if (!g.chi) throw DomainError("integral: no characteristic form chi configured on model '" + g.model->name + "'");
    const int m = static_cast<int>(g.u.size());
    const int ne = g.alg->num_even() - m;
    Element w = g.alg->mul(alpha, *g.chi);
    UPoly r;
    for (const auto& [mon, c] : w) {
        if (mon.odd != g.top.odd) continue;
        if (!std::equal(mon.exps.begin(), mon.exps.begin() + ne, g.top.exps.begin())) continue;
        std::vector<int> key(mon.exps.begin() + ne, mon.exps.end());
        Q v = r[key] + c;
        if (sgn(v) == 0)
            r.erase(key);
        else
            r[key] = v;
    }
    return r;
}

Report integral_axioms(const DgbvData& g) {
    Report rep;
    const auto basis = all_basis(g.carrier);
    const auto& alg = *g.alg;
    auto& da = rep.add("int (d a)^b = (-1)^(|a|+1) int a^(d b)");
    auto& dl = rep.add("int (delta a)^b = (-1)^|a| int a^(delta b)");
    for (const auto& [ka, a] : basis) {
        Element dA = g.d_of(a), lA = g.delta_of(a);
        for (const auto& [kb, b] : basis) {
            std::string w = "(" + alg.render(a) + ", " + alg.render(b) + ")";
            UPoly l1 = integral(g, g.mul(dA, b));
            UPoly r1 = integral(g, g.mul(a, g.d_of(b)));
            da.check(upoly_add(l1, r1, ka % 2 ? -1 : 1).empty(), w);
            UPoly l2 = integral(g, g.mul(lA, b));
            UPoly r2 = integral(g, g.mul(a, g.delta_of(b)));
            dl.check(upoly_add(l2, r2, ka % 2 ? 1 : -1).empty(), w);
        }
    }
    auto& ex = rep.add("exact ^ closed integrates to zero");
    for (int k : g.carrier.degrees()) {
        Subspace im = image_into(g.d, k);
        if (im.dim() == 0) continue;
        for (int l : g.carrier.degrees()) {
            Subspace z = kernel(g.d, l);
            for (const auto& x : im.basis())
                for (const auto& y : z.basis()) {
                    Element ex_e = g.carrier.element(k, x), z_e = g.carrier.element(l, y);
                    ex.check(integral(g, g.mul(ex_e, z_e)).empty(), "(" + alg.render(ex_e) + ", " + alg.render(z_e) + ")");
                }
        }
    }
    return rep;
}

PairingVerdict pairing_and_niceness(const DgbvData& g) {
    PairingVerdict v;
    v.axioms = integral_axioms(g);
    const int N = g.transverse_top;
    const int m = static_cast<int>(g.u.size());
    const auto& alg = *g.alg;

    if (g.kind == "basic") {
        std::map<int, std::vector<Vec>> reps;
        for (int k = 0; k <= N; ++k)
            if (g.d.source.has(k)) reps[k] = cohomology(g.d, k).q.reps;
        for (int k = 0; 2 * k <= N; ++k) {
            PairingBlock b;
            b.k = k;
            b.l = N - k;
            b.left = reps[k];
            b.right = reps[N - k];
            if (b.left.empty() && b.right.empty()) continue;
            b.matrix = Matrix(static_cast<int>(b.left.size()), static_cast<int>(b.right.size()));
            for (size_t i = 0; i < b.left.size(); ++i)
                for (size_t j = 0; j < b.right.size(); ++j) {
                    UPoly p = integral(g, g.mul(g.carrier.element(b.k, b.left[i]), g.carrier.element(b.l, b.right[j])));
                    b.matrix(i, j) = constant_term(p, 0);
                }
            b.nondegenerate = b.left.size() == b.right.size() && rank(b.matrix) == static_cast<int>(b.left.size());
            if (!b.nondegenerate) {
                find_radical(b);
                if (b.radical) {
                    const auto& side = b.radical_side == "left" ? b.left : b.right;
                    const int deg = b.radical_side == "left" ? b.k : b.l;
                    Vec x(g.carrier.dim(deg));
                    for (size_t i = 0; i < side.size(); ++i) x = x + (*b.radical)[i] * side[i];
                    b.radical_text = alg.render(g.carrier.element(deg, x));
                }
            }
            v.nice = v.nice && b.nondegenerate;
            v.blocks.push_back(std::move(b));
        }
    } else {
        const auto& cx = *g.cartan;
        if (N > cx.safe_window)
            throw DomainError("pairing needs degrees up to " + std::to_string(N) + " inside the safe window " +
                              std::to_string(cx.safe_window) + "; raise the cutoff");
        // Free generators s(Delta) of H_G over S(g*)^G, one per basic class.
        std::map<int, std::vector<Vec>> gens;
        for (int k = 0; k <= N; ++k) {
            if (!cx.wd.source.has(k)) continue;
            auto h = cohomology(cx.wd, k);
            for (const auto& r : h.q.reps)
                gens[k].push_back(canonical_section(cx, k, harmonic_representative(cx.wd, cx.wdelta, k, r)).coords);
        }
        for (int k = 0; 2 * k <= N; ++k) {
            PairingBlock b;
            b.k = k;
            b.l = N - k;
            b.left = gens[k];
            b.right = gens[N - k];
            if (b.left.empty() && b.right.empty()) continue;
            b.matrix = Matrix(static_cast<int>(b.left.size()), static_cast<int>(b.right.size()));
            b.entries.assign(b.left.size(), std::vector<UPoly>(b.right.size()));
            for (size_t i = 0; i < b.left.size(); ++i)
                for (size_t j = 0; j < b.right.size(); ++j) {
                    b.entries[i][j] = integral(g, g.mul(g.carrier.element(b.k, b.left[i]), g.carrier.element(b.l, b.right[j])));
                    b.matrix(i, j) = constant_term(b.entries[i][j], m);
                }
            // A nonzero constant determinant makes the full determinant a nonzero
            // element of S(g*)^G, hence a unit of the fraction field.
            b.nondegenerate = b.left.size() == b.right.size() && rank(b.matrix) == static_cast<int>(b.left.size());
            if (!b.nondegenerate) {
                find_radical(b);
                if (b.radical) {
                    const auto& side = b.radical_side == "left" ? b.left : b.right;
                    const int deg = b.radical_side == "left" ? b.k : b.l;
                    Vec x(g.carrier.dim(deg));
                    for (size_t i = 0; i < side.size(); ++i) x = x + (*b.radical)[i] * side[i];
                    b.radical_text = alg.render(g.carrier.element(deg, x));
                }
            }
            v.nice = v.nice && b.nondegenerate;
            v.blocks.push_back(std::move(b));
        }
    }
    v.nice = v.nice && v.axioms.ok();
    return v;
}

FrobeniusPotential frobenius_potential(const DgbvData& g, int K) {
    if (g.kind != "basic") throw DomainError("frobenius_potential: only the basic carrier is supported");
    if (K < 0) throw DomainError("frobenius_potential: order must be non-negative");
    const auto& alg = *g.alg;

    Report gbv = verify_gbv(g);
    for (const auto& c : gbv.checks)
        if (!c.ok()) throw DomainError("frobenius_potential: dGBV axiom failed: " + c.name);
    PairingVerdict pv = pairing_and_niceness(g);
    if (!pv.nice) throw DomainError("frobenius_potential: the integral is not nice");
    Report qi = quasi_isomorphism_check(g.d, g.delta);
    for (const auto& c : qi.checks)
        if (!c.ok()) throw DomainError("frobenius_potential: " + c.name + " fails");

    FrobeniusPotential P;
    P.order = K;
    P.alg = g.alg;
    P.checks.merge(gbv);
    P.checks.merge(pv.axioms);
    P.checks.merge(qi);

    std::vector<Generator> tg;
    for (int k : g.carrier.degrees()) {
        if (!g.d.source.has(k)) continue;
        auto hk = cohomology(g.d, k);
        for (const auto& r : hk.q.reps) {
            Vec h = harmonic_representative(g.d, g.delta, k, r);
            tg.push_back({"t" + std::to_string(P.classes.size()), k % 2});
            P.classes.push_back(g.carrier.element(k, h));
            P.degrees.push_back(k);
        }
    }
    P.tvars = std::make_shared<const FreeAlgebra>(tg);
    const auto& T = *P.tvars;
    const int r = T.size();

    P.eta = Matrix(r, r);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) P.eta(a, b) = constant_term(integral(g, g.mul(P.classes[a], P.classes[b])), 0);
    if (!inverse(P.eta)) throw DomainError("frobenius_potential: pairing matrix is singular");

    SeriesCtx S{T, alg, g.mul};
    TSeries& G = P.gamma;
    for (int a = 0; a < r; ++a) series_add_to(G, T.generator_monomial(a), P.classes[a]);

    const LinearOp ddelta = compose(g.d, g.delta);
    auto& obs = P.checks.add("obstruction d delta-exact at every order");
    for (int n = 2; n <= K; ++n) {
        TSeries sq;
        for (auto& [M, e] : S.product(G, G, n))
            if (t_order(M) == n) sq.emplace(M, std::move(e));
        TSeries rn = S.odd_op(g.delta_of, sq);
        int solved = 0;
        for (const auto& [M, re] : rn) {
            Element rhs = scale(Q(t_parity(M) ? 1 : -1, 2), re);
            std::map<int, Element> by_degree;
            for (const auto& [mon, c] : rhs) by_degree[alg.degree(mon)].emplace(mon, c);
            for (const auto& [k, part] : by_degree) {
                std::string w = "order " + std::to_string(n) + ", " + T.render(M) + ": " + alg.render(part);
                auto rv = g.carrier.coordinates(k, part);
                if (!rv) throw DomainError("frobenius_potential: obstruction leaves the carrier at " + w);
                std::optional<Vec> beta;
                if (g.d.source.has(k - 1)) beta = solve_least(ddelta.block(k), *rv);
                if (!beta) {
                    obs.fail(w);
                    throw DomainError("frobenius_potential: obstruction is not d delta-exact at " + w);
                }
                obs.pass();
                ++solved;
                series_add_to(G, M, g.carrier.element(k - 1, g.delta.apply(k, *beta)));
            }
        }
        P.obstructions[n] = solved;
    }

    // Maurer-Cartan and gauge checks on the assembled series.
    {
        TSeries dG = S.odd_op(g.d_of, G);
        TSeries sq = S.product(G, G, K);
        TSeries dlG = S.odd_op(g.delta_of, G);
        TSeries br = S.odd_op(g.delta_of, sq);
        for (const auto& [M, e] : S.product(dlG, G, K)) series_add_to(br, M, e, -1);
        for (const auto& [M, e] : S.product(G, dlG, K)) series_add_to(br, M, e, -1);
        TSeries mc = dG;
        for (const auto& [M, e] : br)
            if (t_order(M) <= K) series_add_to(mc, M, e, Q(1, 2));
        auto& mcc = P.checks.add("d Gamma + 1/2 [Gamma . Gamma] = 0 through order K");
        mcc.check(mc.empty(), mc.empty() ? "" : T.render(mc.begin()->first) + ": " + alg.render(mc.begin()->second));
        auto& dl = P.checks.add("delta Gamma = 0 through order K");
        dl.check(dlG.empty(), dlG.empty() ? "" : T.render(dlG.begin()->first));
    }

    std::vector<Derivation> dts;
    for (int a = 0; a < r; ++a) dts.push_back(t_derivative(T, a));
    std::vector<TSeries> dGam;
    for (int a = 0; a < r; ++a) dGam.push_back(S.derivative(dts[a], G));

    // A_abc = int d_a Gamma d_b Gamma d_c Gamma for a <= b <= c.
    const int ko = K - 3;
    std::map<std::array<int, 3>, Element> A;
    if (ko >= 0)
        for (int a = 0; a < r; ++a)
            for (int b = a; b < r; ++b) {
                TSeries ab = S.product(dGam[a], dGam[b], ko);
                if (ab.empty()) continue;
                for (int c = b; c < r; ++c) {
                    Element sum;
                    for (const auto& [M, e] : S.product(ab, dGam[c], ko)) {
                        Q v = constant_term(integral(g, e), 0);
                        if (sgn(v) != 0) add_term(sum, M, v);
                    }
                    if (!sum.empty()) A[{a, b, c}] = std::move(sum);
                }
            }

    for (int n = 3; n <= K; ++n) {
        std::vector<Monomial> mons;
        Monomial cur = T.unit_monomial();
        monomials_of_order(T, n, 0, cur, mons);
        for (const auto& M : mons) {
            auto vars = variables(T, M);
            const int a = vars[0], b = vars[1], c = vars[2];
            Element dm = third_derivative(dts, T, a, b, c, Element{{M, Q(1)}});
            if (dm.size() != 1) throw DomainError("frobenius_potential: internal derivative error");
            const auto& [rest, kappa] = *dm.begin();
            auto it = A.find({a, b, c});
            if (it == A.end()) continue;
            auto jt = it->second.find(rest);
            if (jt == it->second.end()) continue;
            add_term(P.potential, M, jt->second / kappa);
        }
    }

    auto& cub = P.checks.add("third derivatives at 0 equal int Delta_a ^ Delta_b ^ Delta_c");
    auto& thr = P.checks.add("third derivatives equal int d_a Gamma ^ d_b Gamma ^ d_c Gamma");
    if (ko >= 0)
        for (int a = 0; a < r; ++a)
            for (int b = a; b < r; ++b)
                for (int c = b; c < r; ++c) {
                    Element lhs = truncate_order(third_derivative(dts, T, a, b, c, P.potential), ko);
                    auto it = A.find({a, b, c});
                    Element rhs = it == A.end() ? Element{} : it->second;
                    thr.check(lhs == rhs, triple_name(a, b, c));
                    Q direct = constant_term(integral(g, g.mul(g.mul(P.classes[a], P.classes[b]), P.classes[c])), 0);
                    auto z = lhs.find(T.unit_monomial());
                    Q at0 = z == lhs.end() ? Q(0) : z->second;
                    cub.check(at0 == direct, triple_name(a, b, c));
                }

    if (K >= 3) P.checks.merge(wdvv_check(P, K));
    for (const auto& c : P.checks.checks)
        if (!c.ok())
            throw DomainError("frobenius_potential: verification failed: " + c.name +
                              (c.witnesses.empty() ? "" : " at " + c.witnesses.front()));
    return P;
}

Report wdvv_check(const FrobeniusPotential& p, int K) {
    if (K > p.order) throw DomainError("wdvv_check: potential only built to order " + std::to_string(p.order));
    Report rep;
    auto& chk = rep.add("WDVV");
    const int ko = K - 3;
    if (ko < 0) {
        chk.note = "order below 3: nothing to check";
        return rep;
    }
    const auto& T = *p.tvars;
    const int r = T.size();
    auto ginv = inverse(p.eta);
    if (!ginv) throw DomainError("wdvv_check: pairing matrix is singular");
    std::vector<Derivation> dts;
    for (int a = 0; a < r; ++a) dts.push_back(t_derivative(T, a));

    auto idx = [r](int a, int b, int c) { return (static_cast<size_t>(a) * r + b) * r + c; };
    std::vector<Element> phi(static_cast<size_t>(r) * r * r);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            for (int c = 0; c < r; ++c) phi[idx(a, b, c)] = truncate_order(third_derivative(dts, T, a, b, c, p.potential), ko);

    auto tmul = [&](const Element& x, const Element& y) { return truncate_order(T.mul(x, y), ko); };
    // psi[a][b][f] = sum_e phi_abe g^ef
    std::vector<Element> psi(static_cast<size_t>(r) * r * r);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            for (int e = 0; e < r; ++e) {
                const Element& x = phi[idx(a, b, e)];
                if (x.empty()) continue;
                for (int f = 0; f < r; ++f)
                    if (sgn((*ginv)(e, f)) != 0) psi[idx(a, b, f)] = add(psi[idx(a, b, f)], x, (*ginv)(e, f));
            }
    const auto& deg = p.degrees;
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            for (int c = 0; c < r; ++c)
                for (int d = 0; d < r; ++d) {
                    Element lhs, rhs;
                    for (int f = 0; f < r; ++f) {
                        const Element& x = psi[idx(a, b, f)];
                        if (!x.empty()) lhs = add(lhs, tmul(x, phi[idx(f, c, d)]));
                        const Element& y = psi[idx(b, c, f)];
                        if (!y.empty()) rhs = add(rhs, tmul(y, phi[idx(f, a, d)]));
                    }
                    const int s = (deg[a] * (deg[b] + deg[c])) % 2 ? -1 : 1;
                    Element res = add(lhs, rhs, -s);
                    if (res.empty()) {
                        chk.pass();
                    } else {
                        const auto& [M, v] = *res.begin();
                        chk.fail("(a,b,c,d) = (t" + std::to_string(a) + ", t" + std::to_string(b) + ", t" +
                                 std::to_string(c) + ", t" + std::to_string(d) + ") at " + T.render(M) + ": residual " +
                                 to_string(v));
                    }
                }
    chk.note = "through order " + std::to_string(ko) + " in t";
    return rep;
}

nlohmann::json potential_to_json(const FrobeniusPotential& p) {
    nlohmann::json j;
    j["order"] = p.order;
    const auto& T = *p.tvars;
    j["coordinates"] = nlohmann::json::array();
    for (size_t a = 0; a < p.classes.size(); ++a)
        j["coordinates"].push_back({{"name", T.generators()[a].name},
                                    {"degree", p.degrees[a]},
                                    {"class", p.alg->render(p.classes[a])}});
    j["pairing"] = nlohmann::json::array();
    for (int a = 0; a < p.eta.rows(); ++a) {
        nlohmann::json row = nlohmann::json::array();
        for (int b = 0; b < p.eta.cols(); ++b) row.push_back(to_string(p.eta(a, b)));
        j["pairing"].push_back(row);
    }
    j["coefficients"] = nlohmann::json::array();
    for (const auto& [m, c] : p.potential) j["coefficients"].push_back({{"monomial", T.render(m)}, {"coefficient", to_string(c)}});
    j["obstructions"] = nlohmann::json::object();
    for (const auto& [n, k] : p.obstructions) j["obstructions"][std::to_string(n)] = k;
    return j;
}

Report poisson_cross_check(const DgbvData& g, const Element& f, const Element& h) {
    Report rep;
    auto& chk = rep.add("[f . dh] = kBracketPoisson * pi(df, dh)");
    const auto& ops = *g.ops;
    const auto& alg = *g.alg;
    auto df = g.d_of(f), dh = g.d_of(h);
    Element pi;
    const int fr = static_cast<int>(ops.frame().size());
    for (int i = 0; i < fr; ++i)
        for (int j = 0; j < fr; ++j)
            if (sgn(ops.pi()(i, j)) != 0)
                pi = add(pi, g.mul(ops.iota(i, df), ops.iota(j, dh)), ops.pi()(i, j));
    Element lhs = bracket(g, f, dh);
    Element rhs = scale(signs::kBracketPoisson, pi);
    chk.check(lhs == rhs, "[" + alg.render(f) + " . " + alg.render(dh) + "] = " + alg.render(lhs) + " vs " + alg.render(rhs));
    return rep;
}

}  // namespace tsf
