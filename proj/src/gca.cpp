#include "tsf/gca.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>
#include <set>

namespace tsf {

int Monomial::poly_degree() const { return std::accumulate(exps.begin(), exps.end(), 0); }

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
    int pa = std::popcount(a.odd), pb = std::popcount(b.odd);
    if (pa != pb) return pa < pb;
    if (a.odd != b.odd) {
        std::uint64_t x = a.odd, y = b.odd;
        while (x && y) {
            int i = std::countr_zero(x), j = std::countr_zero(y);
            if (i != j) return i < j;
            x &= x - 1;
            y &= y - 1;
        }
        return x == 0 && y != 0;
    }
    int da = a.poly_degree(), db = b.poly_degree();
    if (da != db) return da < db;
    return a.exps > b.exps;
}

void add_term(Element& e, const Monomial& m, const Q& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = e.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) e.erase(it);
    }
}

Element add(const Element& a, const Element& b, const Q& sb) {
    Element r = a;
    for (const auto& [m, c] : b) add_term(r, m, sb * c);
    return r;
}

Element scale(const Q& s, const Element& a) {
    Element r;
    if (sgn(s) == 0) return r;
    for (const auto& [m, c] : a) r.emplace(m, s * c);
    return r;
}

ParseError::ParseError(const std::string& msg, size_t pos)
    : DomainError(msg + " at position " + std::to_string(pos)), position(pos) {}

namespace {

bool valid_name(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; });
}

}  // namespace

FreeAlgebra::FreeAlgebra(std::vector<Generator> gens) : gens_(std::move(gens)) {
    for (int g = 0; g < size(); ++g) {
        const auto& gen = gens_[g];
        if (!valid_name(gen.name)) throw DomainError("invalid generator name '" + gen.name + "'");
        if (gen.degree < 0) throw DomainError("negative degree for generator '" + gen.name + "'");
        if (!names_.emplace(gen.name, g).second) throw DomainError("duplicate generator '" + gen.name + "'");
        if (is_odd(g)) {
            slot_.push_back(num_odd());
            odd_.push_back(g);
        } else {
            slot_.push_back(num_even());
            even_.push_back(g);
        }
    }
    if (num_odd() > 64) throw DomainError("at most 64 odd generators are supported");
}

int FreeAlgebra::find(const std::string& name) const {
    auto it = names_.find(name);
    return it == names_.end() ? -1 : it->second;
}

int FreeAlgebra::index(const std::string& name) const {
    int g = find(name);
    if (g < 0) throw DomainError("unknown generator '" + name + "'");
    return g;
}

int FreeAlgebra::degree(const Monomial& m) const {
    int d = 0;
    for (int s = 0; s < num_even(); ++s) d += m.exps[s] * gens_[even_[s]].degree;
    for (std::uint64_t x = m.odd; x; x &= x - 1) d += gens_[odd_[std::countr_zero(x)]].degree;
    return d;
}

Monomial FreeAlgebra::unit_monomial() const { return Monomial{std::vector<int>(num_even(), 0), 0}; }

Monomial FreeAlgebra::generator_monomial(int g) const {
    Monomial m = unit_monomial();
    if (is_odd(g))
        m.odd = std::uint64_t{1} << slot_[g];
    else
        m.exps[slot_[g]] = 1;
    return m;
}

Element FreeAlgebra::one() const { return scalar(1); }

Element FreeAlgebra::scalar(const Q& c) const {
    Element e;
    add_term(e, unit_monomial(), c);
    return e;
}

Element FreeAlgebra::gen(int g) const {
    Element e;
    e.emplace(generator_monomial(g), 1);
    return e;
}

std::optional<std::pair<int, Monomial>> FreeAlgebra::mul(const Monomial& a, const Monomial& b) const {
    if (a.odd & b.odd) return std::nullopt;
    int inversions = 0;
    for (std::uint64_t y = b.odd; y; y &= y - 1) {
        int j = std::countr_zero(y);
        inversions += std::popcount(j + 1 < 64 ? a.odd >> (j + 1) : std::uint64_t{0});
    }
    Monomial r = a;
    for (size_t s = 0; s < r.exps.size(); ++s) r.exps[s] += b.exps[s];
    r.odd |= b.odd;
    return std::make_pair(inversions % 2 ? -1 : 1, std::move(r));
}

Element FreeAlgebra::mul(const Element& a, const Element& b) const {
    Element r;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            auto p = mul(ma, mb);
            if (!p) continue;
            Q c = ca * cb;
            if (p->first < 0) c = -c;
            add_term(r, p->second, c);
        }
    return r;
}

Element FreeAlgebra::power(const Element& a, int k) const {
    Element r = one();
    for (int i = 0; i < k; ++i) r = mul(r, a);
    return r;
}

std::optional<int> FreeAlgebra::homogeneous_degree(const Element& e) const {
    if (e.empty()) return std::nullopt;
    int d = degree(e.begin()->first);
    for (const auto& [m, c] : e)
        if (degree(m) != d) return std::nullopt;
    return d;
}

Element FreeAlgebra::part(const Element& e, int k) const {
    Element r;
    for (const auto& [m, c] : e)
        if (degree(m) == k) r.emplace(m, c);
    return r;
}

std::string FreeAlgebra::render(const Monomial& m) const {
    std::string s;
    auto append = [&](int g) {
        if (!s.empty()) s += '^';
        s += gens_[g].name;
    };
    for (int slot = 0; slot < num_even(); ++slot)
        for (int k = 0; k < m.exps[slot]; ++k) append(even_[slot]);
    for (std::uint64_t x = m.odd; x; x &= x - 1) append(odd_[std::countr_zero(x)]);
    return s.empty() ? "1" : s;
}

std::string FreeAlgebra::render(const Element& e) const {
    if (e.empty()) return "0";
    std::string out;
    bool first = true;
    const Monomial unit = unit_monomial();
    for (const auto& [m, c] : e) {
        Q a = abs(c);
        std::string term;
        if (m == unit)
            term = to_string(a);
        else if (a == 1)
            term = render(m);
        else
            term = to_string(a) + "*" + render(m);
        if (first)
            out += (sgn(c) < 0 ? "-" : "") + term;
        else
            out += (sgn(c) < 0 ? " - " : " + ") + term;
        first = false;
    }
    return out;
}

namespace {

class ExprParser {
public:
    ExprParser(const FreeAlgebra& alg, const std::string& text) : alg_(alg), s_(text) {}

    Element parse() {
        skip();
        if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
        Element r;
        int sign = 1;
        if (peek() == '+' || peek() == '-') {
            sign = get() == '-' ? -1 : 1;
            skip();
        }
        for (;;) {
            term(r, sign);
            skip();
            if (pos_ >= s_.size()) break;
            char ch = peek();
            if (ch != '+' && ch != '-') throw ParseError("expected '+' or '-'", pos_);
            sign = get() == '-' ? -1 : 1;
            skip();
        }
        return r;
    }

private:
    const FreeAlgebra& alg_;
    const std::string& s_;
    size_t pos_ = 0;

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char get() { return s_[pos_++]; }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    Q rational() {
        size_t start = pos_;
        std::string num;
        while (std::isdigit(static_cast<unsigned char>(peek()))) num += get();
        skip();
        if (peek() == '/') {
            get();
            skip();
            std::string den;
            while (std::isdigit(static_cast<unsigned char>(peek()))) den += get();
            if (den.empty()) throw ParseError("expected denominator", pos_);
            if (den.find_first_not_of('0') == std::string::npos) throw ParseError("zero denominator", pos_);
            num += "/" + den;
        }
        try {
            return parse_rational(num);
        } catch (const DomainError&) {
            throw ParseError("bad rational", start);
        }
    }

    int generator() {
        skip();
        size_t start = pos_;
        if (!(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'))
            throw ParseError("expected generator name", pos_);
        std::string name;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') name += get();
        int g = alg_.find(name);
        if (g < 0) throw ParseError("unknown generator '" + name + "'", start);
        return g;
    }

    void term(Element& r, int sign) {
        Q coeff = sign;
        std::optional<int> first;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            coeff *= rational();
            skip();
            if (peek() != '*') {
                add_term(r, alg_.unit_monomial(), coeff);
                return;
            }
            get();
            skip();
        }
        first = generator();
        Monomial m = alg_.generator_monomial(*first);
        bool zero = false;
        skip();
        while (peek() == '^') {
            get();
            int g = generator();
            auto p = alg_.mul(m, alg_.generator_monomial(g));
            if (!p) {
                zero = true;
            } else {
                if (p->first < 0) coeff = -coeff;
                m = p->second;
            }
            skip();
        }
        if (!zero) add_term(r, m, coeff);
    }
};

}  // namespace

Element FreeAlgebra::parse(const std::string& text) const { return ExprParser(*this, text).parse(); }

Element FreeAlgebra::parse_homogeneous(const std::string& text, int degree, const std::string& field) const {
    Element e = parse(text);
    if (e.empty()) return e;
    auto d = homogeneous_degree(e);
    if (!d) throw DomainError(field + ": inhomogeneous expression '" + text + "'");
    if (*d != degree)
        throw DomainError(field + ": expected degree " + std::to_string(degree) + ", got " + std::to_string(*d));
    return e;
}

Element Derivation::apply(const FreeAlgebra& alg, const Monomial& m) const {
    Element r;
    for (int s = 0; s < alg.num_even(); ++s) {
        int e = m.exps[s];
        if (e == 0) continue;
        const Element& img = images[alg.even_generator(s)];
        if (img.empty()) continue;
        Monomial rest = m;
        rest.exps[s] -= 1;
        Element term = alg.mul(img, Element{{rest, Q(e)}});
        r = add(r, term);
    }
    Monomial prefix = m;
    prefix.odd = 0;
    int k = 0;
    for (std::uint64_t x = m.odd; x; x &= x - 1, ++k) {
        int slot = std::countr_zero(x);
        const Element& img = images[alg.odd_generator(slot)];
        if (!img.empty()) {
            Monomial suffix = alg.unit_monomial();
            suffix.odd = m.odd & ~((std::uint64_t{2} << slot) - 1);
            Q sign = (parity != 0 && k % 2 != 0) ? -1 : 1;
            Element left{{prefix, sign}};
            r = add(r, alg.mul(alg.mul(left, img), Element{{suffix, Q(1)}}));
        }
        prefix.odd |= std::uint64_t{1} << slot;
    }
    return r;
}

Element Derivation::apply(const FreeAlgebra& alg, const Element& e) const {
    Element r;
    for (const auto& [m, c] : e) {
        Element t = apply(alg, m);
        for (const auto& [mt, ct] : t) add_term(r, mt, c * ct);
    }
    return r;
}

Derivation zero_derivation(const FreeAlgebra& alg, int parity, int shift) {
    return Derivation{parity, shift, std::vector<Element>(alg.size())};
}

Derivation contraction(const FreeAlgebra& alg, int g) {
    if (!alg.is_odd(g)) throw DomainError("contraction needs an odd generator");
    Derivation d = zero_derivation(alg, 1, -alg.generators()[g].degree);
    d.images[g] = alg.one();
    return d;
}

Derivation derivation_sum(const Derivation& a, const Derivation& b, const Q& sb) {
    if (a.parity != b.parity || a.shift != b.shift) throw DomainError("adding derivations of different type");
    Derivation r = a;
    for (size_t g = 0; g < r.images.size(); ++g) r.images[g] = add(r.images[g], b.images[g], sb);
    return r;
}

Element graded_commutator(const FreeAlgebra& alg, const Derivation& a, const Derivation& b, const Element& e) {
    Q s = (a.parity * b.parity) % 2 ? 1 : -1;
    return add(a.apply(alg, b.apply(alg, e)), b.apply(alg, a.apply(alg, e)), s);
}

GradedCarrier GradedCarrier::from_monomials(AlgebraPtr alg, const std::map<int, std::vector<Monomial>>& mons) {
    GradedCarrier c(std::move(alg));
    for (const auto& [k, list] : mons) {
        std::set<Monomial, MonomialLess> sorted(list.begin(), list.end());
        auto& v = c.mons_[k];
        v.assign(sorted.begin(), sorted.end());
        auto& idx = c.index_[k];
        for (size_t i = 0; i < v.size(); ++i) idx.emplace(v[i], static_cast<int>(i));
        c.spaces_[k] = Subspace::full(static_cast<int>(v.size()));
    }
    return c;
}

GradedCarrier GradedCarrier::from_elements(AlgebraPtr alg, const std::map<int, std::vector<Element>>& gens) {
    GradedCarrier c(std::move(alg));
    for (const auto& [k, list] : gens) {
        std::set<Monomial, MonomialLess> sorted;
        for (const auto& e : list)
            for (const auto& [m, q] : e) sorted.insert(m);
        auto& v = c.mons_[k];
        v.assign(sorted.begin(), sorted.end());
        auto& idx = c.index_[k];
        for (size_t i = 0; i < v.size(); ++i) idx.emplace(v[i], static_cast<int>(i));
        std::vector<Vec> rows;
        for (const auto& e : list) rows.push_back(*c.raw_vector(k, e));
        c.spaces_[k] = Subspace::span(static_cast<int>(v.size()), rows);
    }
    return c;
}

std::vector<int> GradedCarrier::degrees() const {
    std::vector<int> d;
    for (const auto& [k, s] : spaces_) d.push_back(k);
    return d;
}

int GradedCarrier::dim(int k) const {
    auto it = spaces_.find(k);
    return it == spaces_.end() ? 0 : it->second.dim();
}

int GradedCarrier::total_dim() const {
    int t = 0;
    for (const auto& [k, s] : spaces_) t += s.dim();
    return t;
}

const std::vector<Monomial>& GradedCarrier::coordinate_monomials(int k) const {
    static const std::vector<Monomial> empty;
    auto it = mons_.find(k);
    return it == mons_.end() ? empty : it->second;
}

const Subspace& GradedCarrier::subspace(int k) const {
    static const Subspace empty;
    auto it = spaces_.find(k);
    return it == spaces_.end() ? empty : it->second;
}

Element GradedCarrier::basis_element(int k, int i) const {
    const auto& row = spaces_.at(k).basis()[i];
    const auto& mons = mons_.at(k);
    Element e;
    for (size_t j = 0; j < row.size(); ++j)
        if (sgn(row[j]) != 0) e.emplace(mons[j], row[j]);
    return e;
}

std::vector<Element> GradedCarrier::basis(int k) const {
    std::vector<Element> b;
    for (int i = 0; i < dim(k); ++i) b.push_back(basis_element(k, i));
    return b;
}

std::optional<Vec> GradedCarrier::raw_vector(int k, const Element& e) const {
    auto it = index_.find(k);
    if (it == index_.end()) {
        if (e.empty()) return Vec{};
        return std::nullopt;
    }
    Vec v(it->second.size());
    for (const auto& [m, c] : e) {
        auto jt = it->second.find(m);
        if (jt == it->second.end()) return std::nullopt;
        v[jt->second] = c;
    }
    return v;
}

std::optional<Vec> GradedCarrier::coordinates(int k, const Element& e) const {
    auto v = raw_vector(k, e);
    if (!v) return std::nullopt;
    auto it = spaces_.find(k);
    if (it == spaces_.end()) return Vec{};
    return it->second.coordinates(*v);
}

Element GradedCarrier::element(int k, const Vec& coords) const {
    Element e;
    if (coords.empty()) return e;
    const auto& basis = spaces_.at(k).basis();
    const auto& mons = mons_.at(k);
    for (size_t i = 0; i < coords.size(); ++i) {
        if (sgn(coords[i]) == 0) continue;
        for (size_t j = 0; j < mons.size(); ++j)
            if (sgn(basis[i][j]) != 0) add_term(e, mons[j], coords[i] * basis[i][j]);
    }
    return e;
}

GradedSpace GradedCarrier::space() const {
    GradedSpace g;
    for (const auto& [k, s] : spaces_) {
        auto& labels = g.labels[k];
        for (int i = 0; i < s.dim(); ++i) labels.push_back(alg_->render(basis_element(k, i)));
    }
    return g;
}

LinearOp GradedCarrier::matrix_of(const std::function<Element(const Element&)>& f, int shift,
                                  const GradedCarrier& target, const std::string& what) const {
    LinearOp op{space(), target.space(), shift, {}, std::nullopt};
    for (const auto& [k, s] : spaces_) {
        Matrix m(target.dim(k + shift), s.dim());
        for (int i = 0; i < s.dim(); ++i) {
            Element b = basis_element(k, i);
            Element img = f(b);
            if (img.empty()) continue;
            auto c = target.coordinates(k + shift, img);
            if (!c || static_cast<int>(c->size()) != m.rows())
                throw DomainError(what + " leaves the carrier: " + alg_->render(b) + " -> " + alg_->render(img));
            for (int r = 0; r < m.rows(); ++r) m(r, i) = (*c)[r];
        }
        op.blocks[k] = std::move(m);
    }
    return op;
}

GradedCarrier joint_kernel(const GradedCarrier& c, const std::vector<std::function<Element(const Element&)>>& maps) {
    std::map<int, std::vector<Element>> gens;
    for (int k : c.degrees()) {
        auto basis = c.basis(k);
        std::vector<Vec> rows;
        for (const auto& f : maps) {
            std::vector<Element> imgs;
            std::map<Monomial, int, MonomialLess> idx;
            for (const auto& b : basis) {
                imgs.push_back(f(b));
                for (const auto& [m, q] : imgs.back()) idx.emplace(m, 0);
            }
            int r = 0;
            for (auto& [m, i] : idx) i = r++;
            std::vector<Vec> block(idx.size(), Vec(basis.size()));
            for (size_t j = 0; j < imgs.size(); ++j)
                for (const auto& [m, q] : imgs[j]) block[idx[m]][j] = q;
            rows.insert(rows.end(), block.begin(), block.end());
        }
        Subspace ker = rows.empty() ? Subspace::full(static_cast<int>(basis.size()))
                                    : kernel(Matrix::from_rows(rows, static_cast<int>(basis.size())));
        auto& out = gens[k];
        for (const auto& v : ker.basis()) out.push_back(c.element(k, v));
    }
    return GradedCarrier::from_elements(c.algebra(), gens);
}

GradedCarrier stable_subcarrier(const GradedCarrier& c, const std::vector<GradedMap>& maps) {
    GradedCarrier cur = c;
    for (;;) {
        std::map<int, std::vector<Element>> gens;
        for (int k : cur.degrees()) {
            auto basis = cur.basis(k);
            const int nb = static_cast<int>(basis.size());
            std::vector<Vec> rows;
            for (const auto& [f, s] : maps) {
                std::vector<Element> imgs;
                bool any = false;
                for (const auto& b : basis) {
                    imgs.push_back(f(b));
                    any = any || !imgs.back().empty();
                }
                if (!any) continue;
                auto target = cur.basis(k + s);
                std::map<Monomial, int, MonomialLess> idx;
                for (const auto& e : imgs)
                    for (const auto& [m, q] : e) idx.emplace(m, 0);
                for (const auto& e : target)
                    for (const auto& [m, q] : e) idx.emplace(m, 0);
                int r = 0;
                for (auto& [m, i] : idx) i = r++;
                std::vector<Vec> trows;
                for (const auto& e : target) {
                    Vec v(idx.size());
                    for (const auto& [m, q] : e) v[idx[m]] = q;
                    trows.push_back(std::move(v));
                }
                auto ann = Subspace::span(r, trows).annihilator();
                if (ann.empty()) continue;
                Matrix img(r, nb);
                for (int j = 0; j < nb; ++j)
                    for (const auto& [m, q] : imgs[j]) img(idx[m], j) = q;
                Matrix cons = Matrix::from_rows(ann, r) * img;
                for (int i = 0; i < cons.rows(); ++i) rows.push_back(cons.row(i));
            }
            Subspace ker = rows.empty() ? Subspace::full(nb) : kernel(Matrix::from_rows(rows, nb));
            auto& out = gens[k];
            for (const auto& v : ker.basis()) out.push_back(cur.element(k, v));
        }
        GradedCarrier next = GradedCarrier::from_elements(cur.algebra(), gens);
        if (next.total_dim() == cur.total_dim()) return next;
        cur = std::move(next);
    }
}

Element extend_even(const Element& e, int extra) {
    Element r;
    for (const auto& [m, c] : e) {
        Monomial x = m;
        x.exps.resize(x.exps.size() + extra, 0);
        r.emplace(std::move(x), c);
    }
    return r;
}

ModelAlgebra ModelAlgebra::make(AlgebraPtr alg, Derivation d, std::optional<int> truncation) {
    for (int g = 0; g < alg->size(); ++g) {
        const auto& gen = alg->generators()[g];
        if (!alg->is_odd(g) && gen.degree != 0)
            throw DomainError("even generator '" + gen.name + "' must have degree 0");
    }
    if (alg->num_even() > 0 && !truncation)
        throw DomainError("a truncation degree is required when degree-0 generators are present");
    if (truncation && *truncation < 0) throw DomainError("truncation must be non-negative");
    if (alg->num_odd() > 20) throw DomainError("too many odd generators for a dense carrier");
    if (d.parity != 1 || d.shift != 1) throw DomainError("differential must be an odd derivation of degree +1");
    for (int g = 0; g < alg->size(); ++g) {
        const auto& img = d.images[g];
        if (img.empty()) continue;
        auto deg = alg->homogeneous_degree(img);
        if (!deg || *deg != alg->generators()[g].degree + 1)
            throw DomainError("differential of '" + alg->generators()[g].name + "' has wrong degree");
    }

    std::map<int, std::vector<Monomial>> mons;
    const int D = truncation.value_or(0);
    std::vector<std::vector<int>> exps_list;
    std::vector<int> cur(alg->num_even(), 0);
    std::function<void(int, int)> rec = [&](int s, int left) {
        if (s == alg->num_even()) {
            exps_list.push_back(cur);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            cur[s] = e;
            rec(s + 1, left - e);
        }
        cur[s] = 0;
    };
    rec(0, D);
    const std::uint64_t nsub = std::uint64_t{1} << alg->num_odd();
    for (std::uint64_t odd = 0; odd < nsub; ++odd)
        for (const auto& ex : exps_list) {
            Monomial m{ex, odd};
            mons[alg->degree(m)].push_back(m);
        }
    for (int k = 0; k <= static_cast<int>(mons.rbegin()->first); ++k) mons[k];

    ModelAlgebra ma;
    ma.alg = alg;
    ma.d = std::move(d);
    ma.truncation = truncation;
    ma.carrier = GradedCarrier::from_monomials(alg, mons);
    return ma;
}

Element ModelAlgebra::wedge(const Element& a, const Element& b) const {
    if (product_overrides.empty()) return alg->mul(a, b);
    Element r;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            auto it = product_overrides.find({ma, mb});
            Element t;
            if (it != product_overrides.end())
                t = it->second;
            else
                t = alg->mul(Element{{ma, Q(1)}}, Element{{mb, Q(1)}});
            for (const auto& [m, c] : t) add_term(r, m, ca * cb * c);
        }
    return r;
}

int ModelAlgebra::top_degree() const { return alg->degree(top_monomial()); }

Monomial ModelAlgebra::top_monomial() const {
    Monomial m = alg->unit_monomial();
    m.odd = alg->num_odd() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << alg->num_odd()) - 1;
    return m;
}

Report verify_cdga(const ModelAlgebra& m) {
    Report rep;
    const auto& alg = *m.alg;
    std::vector<std::pair<int, Element>> basis;
    for (int k : m.carrier.degrees())
        for (auto& b : m.carrier.basis(k)) basis.emplace_back(k, std::move(b));
    auto show = [&](std::initializer_list<const Element*> es) {
        std::string s = "(";
        bool first = true;
        for (const auto* e : es) {
            s += (first ? "" : ", ") + alg.render(*e);
            first = false;
        }
        return s + ")";
    };

    auto& unit = rep.add("unit law");
    for (const auto& [k, b] : basis)
        unit.check(m.wedge(alg.one(), b) == b && m.wedge(b, alg.one()) == b, show({&b}));

    auto& comm = rep.add("graded commutativity");
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = i; j < basis.size(); ++j) {
            const auto& [ka, a] = basis[i];
            const auto& [kb, b] = basis[j];
            Q s = (ka * kb) % 2 ? -1 : 1;
            comm.check(m.wedge(a, b) == scale(s, m.wedge(b, a)), show({&a, &b}));
        }

    auto& assoc = rep.add("associativity");
    for (const auto& [ka, a] : basis)
        for (const auto& [kb, b] : basis) {
            Element ab = m.wedge(a, b);
            for (const auto& [kc, c] : basis)
                assoc.check(m.wedge(ab, c) == m.wedge(a, m.wedge(b, c)), show({&a, &b, &c}));
        }

    auto& dd = rep.add("d^2 = 0");
    auto& stable = rep.add("d preserves the carrier");
    for (const auto& [k, b] : basis) {
        Element db = m.differential(b);
        dd.check(m.differential(db).empty(), show({&b}));
        stable.check(m.carrier.contains(k + 1, db), show({&b}));
    }

    auto& leib = rep.add("Leibniz rule");
    for (const auto& [ka, a] : basis)
        for (const auto& [kb, b] : basis) {
            Element lhs = m.differential(m.wedge(a, b));
            Element rhs = add(m.wedge(m.differential(a), b), m.wedge(a, m.differential(b)), ka % 2 ? -1 : 1);
            leib.check(lhs == rhs, show({&a, &b}));
        }
    return rep;
}

}  // namespace tsf
