#include "tsf/foliation.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

namespace tsf {

bool LieAction::abelian() const {
    return std::all_of(structure.begin(), structure.end(), [](const Q& q) { return sgn(q) == 0; });
}

std::vector<Derivation> FoliatedModel::leafwise_contractions() const {
    std::vector<Derivation> r;
    for (int g : leafwise) r.push_back(contraction(alg(), g));
    return r;
}

std::vector<int> FoliatedModel::frame() const {
    std::vector<int> f;
    for (int g = 0; g < alg().size(); ++g)
        if (alg().is_odd(g) && std::find(leafwise.begin(), leafwise.end(), g) == leafwise.end()) f.push_back(g);
    return f;
}

namespace {

Element lie_of(const ModelAlgebra& amb, const Derivation& iota, const Element& e) {
    return add(amb.differential(iota.apply(*amb.alg, e)), iota.apply(*amb.alg, amb.differential(e)));
}

}  // namespace

GradedCarrier extract_basic(const GradedCarrier& start, const ModelAlgebra& ambient,
                            const std::vector<Derivation>& leafwise) {
    const auto& alg = *ambient.alg;
    std::vector<std::function<Element(const Element&)>> maps;
    for (const auto& io : leafwise) {
        maps.push_back([&alg, &io](const Element& e) { return io.apply(alg, e); });
        maps.push_back([&ambient, &io](const Element& e) { return lie_of(ambient, io, e); });
    }
    GradedCarrier basic = maps.empty() ? start : joint_kernel(start, maps);

    for (int k : basic.degrees())
        for (const auto& b : basic.basis(k)) {
            Element db = ambient.differential(b);
            if (!basic.contains(k + 1, db))
                throw DomainError("not a foliated model: d(" + alg.render(b) + ") = " + alg.render(db) +
                                  " is not basic");
        }
    if (!leafwise.empty()) {
        std::vector<Element> all;
        for (int k : basic.degrees())
            for (auto& b : basic.basis(k)) all.push_back(std::move(b));
        for (size_t i = 0; i < all.size(); ++i)
            for (size_t j = i; j < all.size(); ++j) {
                Element p = ambient.wedge(all[i], all[j]);
                for (const auto& f : maps)
                    if (!f(p).empty())
                        throw DomainError("not a foliated model: basic forms " + alg.render(all[i]) + " and " +
                                          alg.render(all[j]) + " have a non-basic product");
            }
    }
    return basic;
}

FoliatedModel make_model(std::string name, ModelAlgebra ambient, std::vector<int> leafwise, Element omega,
                         std::optional<Element> chi, std::optional<Element> eta, std::optional<LieAction> action) {
    FoliatedModel m;
    m.name = std::move(name);
    m.ambient = std::move(ambient);
    const auto& alg = *m.ambient.alg;
    std::sort(leafwise.begin(), leafwise.end());
    leafwise.erase(std::unique(leafwise.begin(), leafwise.end()), leafwise.end());
    for (int g : leafwise)
        if (g < 0 || g >= alg.size() || !alg.is_odd(g))
            throw DomainError("foliation: leafwise generators must be odd generators");
    m.leafwise = std::move(leafwise);

    if (!omega.empty() && alg.homogeneous_degree(omega) != 2) throw DomainError("omega must have degree 2");
    m.omega = std::move(omega);
    if (chi && !chi->empty() && alg.homogeneous_degree(*chi) != static_cast<int>(m.leafwise.size()))
        throw DomainError("chi must have degree equal to the leaf dimension");
    m.chi = std::move(chi);
    if (eta && !eta->empty() && alg.homogeneous_degree(*eta) != static_cast<int>(m.leafwise.size()))
        throw DomainError("eta must have degree equal to the leaf dimension");
    m.eta = std::move(eta);

    if (action) {
        const int dim = action->dim;
        if (dim < 0) throw DomainError("action: negative dimension");
        if (static_cast<int>(action->structure.size()) != dim * dim * dim)
            throw DomainError("action: structure constants must have dimension^3 entries");
        if (static_cast<int>(action->iota.size()) != dim || static_cast<int>(action->lie.size()) != dim ||
            static_cast<int>(action->moment.size()) != dim)
            throw DomainError("action: iota, lie and moment need one entry per basis vector");
        for (int a = 0; a < dim; ++a) {
            if (action->iota[a].parity != 1 || action->iota[a].shift != -1)
                throw DomainError("action: iota_" + std::to_string(a) + " must be odd of degree -1");
            if (action->lie[a].parity != 0 || action->lie[a].shift != 0)
                throw DomainError("action: L_" + std::to_string(a) + " must be even of degree 0");
            const auto& phi = action->moment[a];
            if (!phi.empty() && alg.homogeneous_degree(phi) != 0)
                throw DomainError("action: moment " + std::to_string(a) + " must have degree 0");
        }
    }
    m.action = std::move(action);

    m.basic = extract_basic(m.ambient.carrier, m.ambient, m.leafwise_contractions());
    int top = -1;
    for (int k : m.basic.degrees())
        if (m.basic.dim(k) > 0) top = std::max(top, k);
    if (top < 0 || top % 2 != 0)
        throw DomainError("basic subcomplex has odd top degree " + std::to_string(top) + "; not transversely symplectic");
    m.n = top / 2;
    return m;
}

namespace {

std::vector<Element> carrier_elements(const GradedCarrier& c) {
    std::vector<Element> all;
    for (int k : c.degrees())
        for (auto& b : c.basis(k)) all.push_back(std::move(b));
    return all;
}

Element combo(const LieAction& act, int a, int b, const std::function<Element(int)>& term) {
    Element r;
    for (int k = 0; k < act.dim; ++k)
        if (sgn(act.c(a, b, k)) != 0) r = add(r, term(k), act.c(a, b, k));
    return r;
}

void moment_checks(const FoliatedModel& m, Report& rep) {
    const auto& alg = m.alg();
    const auto& act = *m.action;
    auto& dphi = rep.add("moment map: d Phi^a = iota_a omega");
    auto& basic = rep.add("moment map: Phi^a basic of degree 0");
    auto& equiv = rep.add("moment map equivariance: L_a Phi^b = sum_c c_ab^c Phi^c");
    for (int a = 0; a < act.dim; ++a) {
        const Element& phi = act.moment[a];
        Element lhs = m.ambient.differential(phi);
        Element rhs = act.iota[a].apply(alg, m.omega);
        dphi.check(lhs == rhs, "a=" + std::to_string(a) + ": d Phi = " + alg.render(lhs) + ", iota omega = " +
                                   alg.render(rhs));
        basic.check(m.basic.contains(0, phi), "a=" + std::to_string(a) + ": " + alg.render(phi));
        for (int b = 0; b < act.dim; ++b) {
            Element l = act.lie[a].apply(alg, act.moment[b]);
            Element r = combo(act, a, b, [&](int k) { return act.moment[k]; });
            equiv.check(l == r, "a=" + std::to_string(a) + ", b=" + std::to_string(b));
        }
    }
}

bool poly_bounded(const FreeAlgebra& alg, const Derivation& f, bool upper) {
    for (int g = 0; g < alg.size(); ++g) {
        int pg = alg.is_odd(g) ? 0 : 1;
        for (const auto& [mon, c] : f.images[g]) {
            int p = mon.poly_degree();
            if (upper ? p > pg : p < pg) return false;
        }
    }
    return true;
}

}  // namespace

Report validate_moment(const FoliatedModel& m) {
    Report rep;
    if (m.action) moment_checks(m, rep);
    return rep;
}

Report validate_model(const FoliatedModel& m) {
    Report rep;
    const auto& alg = m.alg();
    const auto& amb = m.ambient;
    rep.merge(verify_cdga(amb), "cdga: ");
    auto contr = m.leafwise_contractions();

    auto& iw = rep.add("iota(X_i) omega = 0");
    for (size_t i = 0; i < contr.size(); ++i)
        iw.check(contr[i].apply(alg, m.omega).empty(), alg.generators()[m.leafwise[i]].name);

    {
        auto& ker = rep.add("kernel of omega-contraction equals the leafwise span");
        std::vector<int> ones;
        for (int g = 0; g < alg.size(); ++g)
            if (alg.is_odd(g) && alg.generators()[g].degree == 1) ones.push_back(g);
        std::vector<Element> imgs;
        std::map<Monomial, int, MonomialLess> idx;
        for (int g : ones) {
            imgs.push_back(contraction(alg, g).apply(alg, m.omega));
            for (const auto& [mon, c] : imgs.back()) idx.emplace(mon, 0);
        }
        int r = 0;
        for (auto& [mon, i] : idx) i = r++;
        Matrix mat(r, static_cast<int>(ones.size()));
        for (size_t j = 0; j < imgs.size(); ++j)
            for (const auto& [mon, c] : imgs[j]) mat(idx[mon], static_cast<int>(j)) = c;
        std::vector<Vec> leaf;
        for (int g : m.leafwise) {
            auto it = std::find(ones.begin(), ones.end(), g);
            if (it == ones.end()) continue;
            Vec v(ones.size());
            v[it - ones.begin()] = 1;
            leaf.push_back(std::move(v));
        }
        auto eq = subspace_equal(kernel(mat), Subspace::span(static_cast<int>(ones.size()), leaf));
        std::string w;
        if (eq.witness) {
            Element e;
            for (size_t j = 0; j < ones.size(); ++j) add_term(e, alg.generator_monomial(ones[j]), (*eq.witness)[j]);
            w = "dual vector of " + alg.render(e);
        }
        ker.check(eq.equal, w);
    }

    rep.add("d omega = 0").check(amb.differential(m.omega).empty(), alg.render(amb.differential(m.omega)));
    rep.add("omega is basic").check(m.basic.contains(2, m.omega), alg.render(m.omega));
    Element wn = alg.power(m.omega, m.n);
    rep.add("omega^n != 0").check(!wn.empty(), "n=" + std::to_string(m.n));
    rep.add("omega^(n+1) = 0").check(alg.mul(wn, m.omega).empty(), "n=" + std::to_string(m.n));

    {
        auto& c1 = rep.add("chi: iota(X_1)...iota(X_l) d chi = 0");
        auto& c2 = rep.add("chi: iota(X_1)...iota(X_l) chi = 1");
        if (!m.chi) {
            c1.skipped = c2.skipped = true;
            c1.note = c2.note = "model has no characteristic form";
        } else {
            auto contract_all = [&](Element e) {
                for (auto it = contr.rbegin(); it != contr.rend(); ++it) e = it->apply(alg, e);
                return e;
            };
            Element a = contract_all(amb.differential(*m.chi));
            Element b = contract_all(*m.chi);
            c1.check(a.empty(), alg.render(a));
            c2.check(b == alg.one(), alg.render(b));
        }
    }
    {
        auto& vol = rep.add("eta ^ omega^n is a volume form");
        if (!m.eta) {
            vol.skipped = true;
            vol.note = "model has no eta";
        } else {
            Element v = alg.mul(*m.eta, wn);
            auto it = v.find(amb.top_monomial());
            vol.check(v.size() == 1 && it != v.end(), alg.render(v));
        }
    }

    if (amb.truncation) {
        auto& up = rep.add("truncation: d does not raise polynomial degree");
        up.check(poly_bounded(alg, amb.d, true), "d");
    }

    if (!m.action) return rep;
    const auto& act = *m.action;
    const int dim = act.dim;
    auto tag = [](int a, int b = -1) {
        return b < 0 ? "a=" + std::to_string(a) : "a=" + std::to_string(a) + ", b=" + std::to_string(b);
    };

    auto& anti = rep.add("structure constants antisymmetric");
    auto& jac = rep.add("Jacobi identity");
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            for (int k = 0; k < dim; ++k) {
                anti.check(act.c(a, b, k) == -act.c(b, a, k), tag(a, b));
                for (int e = 0; e < dim; ++e) {
                    Q s = 0;
                    for (int l = 0; l < dim; ++l)
                        s += act.c(a, b, l) * act.c(l, k, e) + act.c(b, k, l) * act.c(l, a, e) +
                             act.c(k, a, l) * act.c(l, b, e);
                    jac.check(sgn(s) == 0, tag(a, b) + ", c=" + std::to_string(k));
                }
            }

    auto all = carrier_elements(amb.carrier);
    auto& cartan = rep.add("Cartan formula L_a = d iota_a + iota_a d");
    auto& ii = rep.add("iota_a iota_b + iota_b iota_a = 0");
    auto& li = rep.add("[L_a, iota_b] = sum_c c_ab^c iota_c");
    auto& ll = rep.add("[L_a, L_b] = sum_c c_ab^c L_c");
    for (const auto& x : all)
        for (int a = 0; a < dim; ++a) {
            cartan.check(act.lie[a].apply(alg, x) == lie_of(amb, act.iota[a], x), tag(a) + " on " + alg.render(x));
            for (int b = 0; b < dim; ++b) {
                ii.check(graded_commutator(alg, act.iota[a], act.iota[b], x).empty(), tag(a, b));
                Element l1 = graded_commutator(alg, act.lie[a], act.iota[b], x);
                Element r1 = combo(act, a, b, [&](int k) { return act.iota[k].apply(alg, x); });
                li.check(l1 == r1, tag(a, b) + " on " + alg.render(x));
                Element l2 = graded_commutator(alg, act.lie[a], act.lie[b], x);
                Element r2 = combo(act, a, b, [&](int k) { return act.lie[k].apply(alg, x); });
                ll.check(l2 == r2, tag(a, b) + " on " + alg.render(x));
            }
        }

    auto& inv = rep.add("L_a omega = 0");
    for (int a = 0; a < dim; ++a) inv.check(act.lie[a].apply(alg, m.omega).empty(), tag(a));

    moment_checks(m, rep);

    auto& tl = rep.add("transverse action: L_a preserves basic forms");
    auto& ti = rep.add("transverse action: iota_a preserves basic forms");
    auto is_basic = [&](const Element& e) {
        for (const auto& io : contr)
            if (!io.apply(alg, e).empty() || !lie_of(amb, io, e).empty()) return false;
        return true;
    };
    for (int k : m.basic.degrees())
        for (const auto& b : m.basic.basis(k))
            for (int a = 0; a < dim; ++a) {
                tl.check(is_basic(act.lie[a].apply(alg, b)), tag(a) + " on " + alg.render(b));
                ti.check(is_basic(act.iota[a].apply(alg, b)), tag(a) + " on " + alg.render(b));
            }

    if (amb.truncation) {
        auto& lu = rep.add("truncation: L_a preserves polynomial degree");
        auto& il = rep.add("truncation: iota_a does not lower polynomial degree");
        for (int a = 0; a < dim; ++a) {
            lu.check(poly_bounded(alg, act.lie[a], true) && poly_bounded(alg, act.lie[a], false), tag(a));
            il.check(poly_bounded(alg, act.iota[a], false), tag(a));
        }
    }
    return rep;
}

namespace {

AlgebraPtr make_alg(const std::vector<Generator>& gens) { return std::make_shared<const FreeAlgebra>(gens); }

Derivation parse_derivation(const FreeAlgebra& alg, int parity, int shift,
                            const std::map<std::string, std::string>& images, const std::string& field) {
    Derivation d = zero_derivation(alg, parity, shift);
    for (const auto& [name, expr] : images) {
        int g = alg.find(name);
        if (g < 0) throw DomainError(field + ": unknown generator '" + name + "'");
        d.images[g] = alg.parse_homogeneous(expr, alg.generators()[g].degree + shift, field + "/" + name);
    }
    return d;
}

std::vector<Generator> odd_gens(int count) {
    std::vector<Generator> g;
    for (int i = 1; i <= count; ++i) g.push_back({"e" + std::to_string(i), 1});
    return g;
}

FoliatedModel simple(const std::string& name, int count, const std::map<std::string, std::string>& d,
                     const std::string& omega, const std::vector<std::string>& leaf,
                     std::optional<std::string> chi, std::optional<std::string> eta) {
    auto alg = make_alg(odd_gens(count));
    auto amb = ModelAlgebra::make(alg, parse_derivation(*alg, 1, 1, d, "differential"), std::nullopt);
    std::vector<int> lw;
    for (const auto& s : leaf) lw.push_back(alg->index(s));
    std::optional<Element> c, e;
    if (chi) c = alg->parse(*chi);
    if (eta) e = alg->parse(*eta);
    return make_model(name, std::move(amb), lw, alg->parse(omega), c, e);
}

}  // namespace

FoliatedModel torus(int n) {
    if (n < 1) throw DomainError("torus needs n >= 1");
    std::string omega;
    for (int i = 1; i <= n; ++i)
        omega += (i > 1 ? " + " : "") + ("e" + std::to_string(2 * i - 1)) + "^e" + std::to_string(2 * i);
    return simple("torus" + std::to_string(n), 2 * n, {}, omega, {}, "1", std::nullopt);
}

FoliatedModel heisenberg5() {
    return simple("heisenberg5", 5, {{"e5", "e1^e2 + e3^e4"}}, "e1^e2 + e3^e4", {"e5"}, "e5", std::nullopt);
}

FoliatedModel kodaira_thurston() {
    return simple("kodaira_thurston", 4, {{"e4", "e1^e2"}}, "e1^e4 + e2^e3", {}, "1", std::nullopt);
}

FoliatedModel cosym5() {
    return simple("cosym5", 5, {}, "e1^e2 + e3^e4", {"e5"}, "e5", "e5");
}

FoliatedModel trunc_linear(int n, int D) {
    if (n < 1 || D < 0) throw DomainError("trunc_linear needs n >= 1 and D >= 0");
    auto suffix = [n](int i) { return n == 1 ? std::string() : std::to_string(i); };
    std::vector<Generator> gens;
    for (int i = 1; i <= n; ++i) {
        gens.push_back({"x" + suffix(i), 0});
        gens.push_back({"y" + suffix(i), 0});
    }
    for (int i = 1; i <= n; ++i) {
        gens.push_back({"dx" + suffix(i), 1});
        gens.push_back({"dy" + suffix(i), 1});
    }
    auto alg = make_alg(gens);
    std::map<std::string, std::string> d, io, lie;
    std::string omega, moment;
    for (int i = 1; i <= n; ++i) {
        std::string x = "x" + suffix(i), y = "y" + suffix(i), dx = "dx" + suffix(i), dy = "dy" + suffix(i);
        d[x] = dx;
        d[y] = dy;
        io[dx] = "-" + y;
        io[dy] = x;
        lie[x] = "-" + y;
        lie[y] = x;
        lie[dx] = "-" + dy;
        lie[dy] = dx;
        omega += (i > 1 ? " + " : "") + dx + "^" + dy;
        moment += " - 1/2*" + x + "^" + x + " - 1/2*" + y + "^" + y;
    }
    auto amb = ModelAlgebra::make(alg, parse_derivation(*alg, 1, 1, d, "differential"), D);
    LieAction act;
    act.dim = 1;
    act.structure.assign(1, 0);
    act.iota.push_back(parse_derivation(*alg, 1, -1, io, "iota"));
    act.lie.push_back(parse_derivation(*alg, 0, 0, lie, "lie"));
    act.moment.push_back(alg->parse(moment));
    std::string name = "trunc_linear_" + std::to_string(n) + "_" + std::to_string(D);
    return make_model(name, std::move(amb), {}, alg->parse(omega), std::nullopt, std::nullopt, std::move(act));
}

FoliatedModel heisenberg5_reeb() {
    FoliatedModel m = heisenberg5();
    const auto& alg = m.alg();
    LieAction act;
    act.dim = 1;
    act.structure.assign(1, 0);
    act.iota.push_back(contraction(alg, alg.index("e5")));
    act.lie.push_back(zero_derivation(alg, 0, 0));
    act.moment.push_back(Element{});
    return make_model("heisenberg5_reeb", std::move(m.ambient), m.leafwise, m.omega, m.chi, m.eta, std::move(act));
}

FoliatedModel with_trivial_action(FoliatedModel m, int dim) {
    const auto& alg = m.alg();
    LieAction act;
    act.dim = dim;
    act.structure.assign(static_cast<size_t>(dim) * dim * dim, 0);
    for (int a = 0; a < dim; ++a) {
        act.iota.push_back(zero_derivation(alg, 1, -1));
        act.lie.push_back(zero_derivation(alg, 0, 0));
        act.moment.push_back(Element{});
    }
    m.action = std::move(act);
    m.name += "_t" + std::to_string(dim);
    return m;
}

FoliatedModel builder(const std::string& name) {
    std::smatch mt;
    if (std::regex_match(name, mt, std::regex("torus([1-9][0-9]?)"))) return torus(std::stoi(mt[1]));
    if (name == "heisenberg5") return heisenberg5();
    if (name == "heisenberg5_reeb") return heisenberg5_reeb();
    if (name == "kodaira_thurston") return kodaira_thurston();
    if (name == "cosym5") return cosym5();
    if (name == "trunc_linear") return trunc_linear(1, 4);
    if (std::regex_match(name, mt, std::regex("trunc_linear_([1-9])_([0-9]{1,2})")))
        return trunc_linear(std::stoi(mt[1]), std::stoi(mt[2]));
    if (std::regex_match(name, mt, std::regex("torus([1-9])_t([0-9])")))
        return with_trivial_action(torus(std::stoi(mt[1])), std::stoi(mt[2]));
    throw DomainError("unknown builder '" + name + "'");
}

std::vector<std::string> builder_names() {
    return {"torus1",   "torus2",         "torus3",       "heisenberg5", "heisenberg5_reeb", "kodaira_thurston",
            "cosym5",   "trunc_linear",   "torus1_t2"};
}

// JSON schema.

namespace {

nlohmann::json derivation_json(const FreeAlgebra& alg, const Derivation& d) {
    nlohmann::json j = nlohmann::json::object();
    for (int g = 0; g < alg.size(); ++g)
        if (!d.images[g].empty()) j[alg.generators()[g].name] = alg.render(d.images[g]);
    return j;
}

struct Reader {
    [[noreturn]] static void fail(const std::string& path, const std::string& msg) {
        throw DomainError("schema error at " + (path.empty() ? std::string("/") : path) + ": " + msg);
    }
    static const nlohmann::json& field(const nlohmann::json& j, const std::string& key, const std::string& path) {
        if (!j.is_object()) fail(path, "expected an object");
        auto it = j.find(key);
        if (it == j.end()) fail(path + "/" + key, "missing required field");
        return *it;
    }
    static std::string str(const nlohmann::json& j, const std::string& path) {
        if (!j.is_string()) fail(path, "expected a string");
        return j.get<std::string>();
    }
    static int integer(const nlohmann::json& j, const std::string& path) {
        if (!j.is_number_integer()) fail(path, "expected an integer");
        return j.get<int>();
    }
    static Q rational(const nlohmann::json& j, const std::string& path) {
        if (j.is_number_integer()) return Q(j.get<long>());
        try {
            return parse_rational(str(j, path));
        } catch (const DomainError& e) {
            fail(path, e.what());
        }
    }
    static Element expr(const FreeAlgebra& alg, const nlohmann::json& j, const std::string& path) {
        try {
            return alg.parse(str(j, path));
        } catch (const ParseError& e) {
            fail(path, e.what());
        } catch (const DomainError& e) {
            fail(path, e.what());
        }
    }
    static Derivation derivation(const FreeAlgebra& alg, const nlohmann::json& j, int parity, int shift,
                                 const std::string& path) {
        if (!j.is_object()) fail(path, "expected an object mapping generators to expressions");
        Derivation d = zero_derivation(alg, parity, shift);
        for (const auto& [name, v] : j.items()) {
            std::string p = path + "/" + name;
            int g = alg.find(name);
            if (g < 0) fail(p, "unknown generator '" + name + "'");
            Element e = expr(alg, v, p);
            int want = alg.generators()[g].degree + shift;
            if (!e.empty() && alg.homogeneous_degree(e) != want)
                fail(p, "expected a homogeneous expression of degree " + std::to_string(want));
            d.images[g] = std::move(e);
        }
        return d;
    }
};

}  // namespace

nlohmann::json model_to_json(const FoliatedModel& m) {
    const auto& alg = m.alg();
    nlohmann::json j;
    j["name"] = m.name;
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : alg.generators()) gens.push_back({{"name", g.name}, {"degree", g.degree}});
    j["generators"] = gens;
    j["differential"] = derivation_json(alg, m.ambient.d);
    j["omega"] = alg.render(m.omega);
    nlohmann::json leaf = nlohmann::json::array();
    for (int g : m.leafwise) leaf.push_back(alg.generators()[g].name);
    j["foliation"] = leaf;
    if (m.chi) j["chi"] = alg.render(*m.chi);
    if (m.eta) j["eta"] = alg.render(*m.eta);
    if (m.ambient.truncation) j["truncation"] = *m.ambient.truncation;
    if (m.action) {
        const auto& act = *m.action;
        nlohmann::json a;
        a["dimension"] = act.dim;
        nlohmann::json sc = nlohmann::json::array();
        for (int x = 0; x < act.dim; ++x)
            for (int y = 0; y < act.dim; ++y)
                for (int z = 0; z < act.dim; ++z)
                    if (sgn(act.c(x, y, z)) != 0) sc.push_back({x, y, z, to_string(act.c(x, y, z))});
        a["structure_constants"] = sc;
        nlohmann::json io = nlohmann::json::array(), lie = nlohmann::json::array(), mom = nlohmann::json::array();
        for (int x = 0; x < act.dim; ++x) {
            io.push_back(derivation_json(alg, act.iota[x]));
            lie.push_back(derivation_json(alg, act.lie[x]));
            mom.push_back(alg.render(act.moment[x]));
        }
        a["iota"] = io;
        a["lie"] = lie;
        a["moment"] = mom;
        j["action"] = a;
    }
    return j;
}

FoliatedModel model_from_json(const nlohmann::json& j) {
    using R = Reader;
    if (!j.is_object()) R::fail("", "expected an object");
    std::string name = j.contains("name") ? R::str(j["name"], "/name") : std::string("model");

    const auto& gj = R::field(j, "generators", "");
    if (!gj.is_array()) R::fail("/generators", "expected an array");
    std::vector<Generator> gens;
    for (size_t i = 0; i < gj.size(); ++i) {
        std::string p = "/generators/" + std::to_string(i);
        gens.push_back({R::str(R::field(gj[i], "name", p), p + "/name"),
                        R::integer(R::field(gj[i], "degree", p), p + "/degree")});
    }
    AlgebraPtr alg;
    try {
        alg = make_alg(gens);
    } catch (const DomainError& e) {
        R::fail("/generators", e.what());
    }

    std::optional<int> trunc;
    if (j.contains("truncation")) trunc = R::integer(j["truncation"], "/truncation");
    Derivation d = j.contains("differential") ? R::derivation(*alg, j["differential"], 1, 1, "/differential")
                                              : zero_derivation(*alg, 1, 1);
    ModelAlgebra amb;
    try {
        amb = ModelAlgebra::make(alg, std::move(d), trunc);
    } catch (const DomainError& e) {
        R::fail("", e.what());
    }

    Element omega = R::expr(*alg, R::field(j, "omega", ""), "/omega");
    std::vector<int> leaf;
    if (j.contains("foliation")) {
        const auto& fj = j["foliation"];
        if (!fj.is_array()) R::fail("/foliation", "expected an array of generator names");
        for (size_t i = 0; i < fj.size(); ++i) {
            std::string p = "/foliation/" + std::to_string(i);
            std::string s = R::str(fj[i], p);
            int g = alg->find(s);
            if (g < 0) R::fail(p, "unknown generator '" + s + "'");
            leaf.push_back(g);
        }
    }
    std::optional<Element> chi, eta;
    if (j.contains("chi")) chi = R::expr(*alg, j["chi"], "/chi");
    if (j.contains("eta")) eta = R::expr(*alg, j["eta"], "/eta");

    std::optional<LieAction> action;
    if (j.contains("action")) {
        const auto& aj = j["action"];
        LieAction act;
        act.dim = R::integer(R::field(aj, "dimension", "/action"), "/action/dimension");
        if (act.dim < 0 || act.dim > 16) R::fail("/action/dimension", "expected 0..16");
        act.structure.assign(static_cast<size_t>(act.dim) * act.dim * act.dim, 0);
        if (aj.contains("structure_constants")) {
            const auto& sc = aj["structure_constants"];
            if (!sc.is_array()) R::fail("/action/structure_constants", "expected an array");
            for (size_t i = 0; i < sc.size(); ++i) {
                std::string p = "/action/structure_constants/" + std::to_string(i);
                if (!sc[i].is_array() || sc[i].size() != 4) R::fail(p, "expected [a, b, c, value]");
                int idx[3];
                for (int t = 0; t < 3; ++t) {
                    idx[t] = R::integer(sc[i][t], p + "/" + std::to_string(t));
                    if (idx[t] < 0 || idx[t] >= act.dim) R::fail(p + "/" + std::to_string(t), "index out of range");
                }
                act.c(idx[0], idx[1], idx[2]) = R::rational(sc[i][3], p + "/3");
            }
        }
        auto list = [&](const char* key) -> const nlohmann::json& {
            const auto& v = R::field(aj, key, "/action");
            if (!v.is_array() || static_cast<int>(v.size()) != act.dim)
                R::fail(std::string("/action/") + key, "expected an array of length dimension");
            return v;
        };
        const auto& io = list("iota");
        const auto& lie = list("lie");
        const auto& mom = list("moment");
        for (int a = 0; a < act.dim; ++a) {
            std::string s = std::to_string(a);
            act.iota.push_back(R::derivation(*alg, io[a], 1, -1, "/action/iota/" + s));
            act.lie.push_back(R::derivation(*alg, lie[a], 0, 0, "/action/lie/" + s));
            act.moment.push_back(R::expr(*alg, mom[a], "/action/moment/" + s));
        }
        action = std::move(act);
    }
    return make_model(name, std::move(amb), leaf, std::move(omega), std::move(chi), std::move(eta),
                      std::move(action));
}

FoliatedModel model_from_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        size_t line = 1, col = 1;
        size_t end = std::min<size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw DomainError("JSON syntax error at line " + std::to_string(line) + ", column " + std::to_string(col));
    }
    return model_from_json(j);
}

FoliatedModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open model file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_text(ss.str());
}

}  // namespace tsf
