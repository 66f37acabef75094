#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tsf/exactla.hpp"
#include "tsf/report.hpp"

namespace tsf {

struct Generator {
    std::string name;
    int degree = 1;
};

// Monomial of a free graded-commutative algebra: exponents of the even
// generators and a bitmask of the odd generators (each indexed by slot).
struct Monomial {
    std::vector<int> exps;
    std::uint64_t odd = 0;

    bool operator==(const Monomial&) const = default;
    int poly_degree() const;
};

// Normal-form order: odd degree, odd part lexicographic, even degree,
// even exponents descending.
struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

struct MonomialPairLess {
    bool operator()(const std::pair<Monomial, Monomial>& a, const std::pair<Monomial, Monomial>& b) const {
        MonomialLess lt;
        if (lt(a.first, b.first)) return true;
        if (lt(b.first, a.first)) return false;
        return lt(a.second, b.second);
    }
};

using Element = std::map<Monomial, Q, MonomialLess>;

void add_term(Element& e, const Monomial& m, const Q& c);
Element add(const Element& a, const Element& b, const Q& sb = 1);
Element scale(const Q& s, const Element& a);
inline bool is_zero(const Element& e) { return e.empty(); }

struct ParseError : DomainError {
    ParseError(const std::string& msg, size_t pos);
    size_t position;
};

class FreeAlgebra {
public:
    explicit FreeAlgebra(std::vector<Generator> gens);

    const std::vector<Generator>& generators() const { return gens_; }
    int size() const { return static_cast<int>(gens_.size()); }
    int find(const std::string& name) const;
    int index(const std::string& name) const;  // throws on unknown name
    bool is_odd(int g) const { return gens_[g].degree % 2 != 0; }
    int slot(int g) const { return slot_[g]; }
    int num_even() const { return static_cast<int>(even_.size()); }
    int num_odd() const { return static_cast<int>(odd_.size()); }
    int even_generator(int s) const { return even_[s]; }
    int odd_generator(int s) const { return odd_[s]; }

    int degree(const Monomial& m) const;
    Monomial unit_monomial() const;
    Monomial generator_monomial(int g) const;
    Element one() const;
    Element scalar(const Q& c) const;
    Element gen(int g) const;

    // Product of two monomials with its Koszul sign, or nullopt when zero.
    std::optional<std::pair<int, Monomial>> mul(const Monomial& a, const Monomial& b) const;
    Element mul(const Element& a, const Element& b) const;
    Element power(const Element& a, int k) const;

    // Degree of a homogeneous element; nullopt for zero or inhomogeneous input.
    std::optional<int> homogeneous_degree(const Element& e) const;
    // Homogeneous part of e in degree k.
    Element part(const Element& e, int k) const;

    std::string render(const Monomial& m) const;
    std::string render(const Element& e) const;
    // expr ::= term (('+'|'-') term)* ; term ::= [rational '*'] gen ('^' gen)* | rational
    Element parse(const std::string& text) const;
    Element parse_homogeneous(const std::string& text, int degree, const std::string& field) const;

private:
    std::vector<Generator> gens_;
    std::vector<int> slot_;
    std::vector<int> even_;
    std::vector<int> odd_;
    std::map<std::string, int> names_;
};

using AlgebraPtr = std::shared_ptr<const FreeAlgebra>;

// Graded derivation determined by its values on generators.
struct Derivation {
    int parity = 0;
    int shift = 0;
    std::vector<Element> images;

    Element apply(const FreeAlgebra& alg, const Element& e) const;
    Element apply(const FreeAlgebra& alg, const Monomial& m) const;
};

Derivation zero_derivation(const FreeAlgebra& alg, int parity, int shift);
// Contraction with the vector dual to odd generator g.
Derivation contraction(const FreeAlgebra& alg, int g);
Derivation derivation_sum(const Derivation& a, const Derivation& b, const Q& sb = 1);
// Graded commutator of two derivations, evaluated on an element.
Element graded_commutator(const FreeAlgebra& alg, const Derivation& a, const Derivation& b, const Element& e);

// A finite-dimensional graded subspace of a free algebra: per degree, a list
// of coordinate monomials and the canonical echelon basis in those coordinates.
class GradedCarrier {
public:
    GradedCarrier() = default;
    explicit GradedCarrier(AlgebraPtr alg) : alg_(std::move(alg)) {}

    static GradedCarrier from_monomials(AlgebraPtr alg, const std::map<int, std::vector<Monomial>>& mons);
    // Subspace spanned by the given elements in each degree.
    static GradedCarrier from_elements(AlgebraPtr alg, const std::map<int, std::vector<Element>>& gens);

    const AlgebraPtr& algebra() const { return alg_; }
    std::vector<int> degrees() const;
    int dim(int k) const;
    int total_dim() const;
    Element basis_element(int k, int i) const;
    std::vector<Element> basis(int k) const;
    const std::vector<Monomial>& coordinate_monomials(int k) const;
    const Subspace& subspace(int k) const;

    // Coordinates in the coordinate monomials (before echelon reduction).
    std::optional<Vec> raw_vector(int k, const Element& e) const;
    std::optional<Vec> coordinates(int k, const Element& e) const;
    Element element(int k, const Vec& coords) const;
    bool contains(int k, const Element& e) const { return coordinates(k, e).has_value(); }

    GradedSpace space() const;
    // Matrix of a linear map on elements; throws if an image leaves `target`.
    LinearOp matrix_of(const std::function<Element(const Element&)>& f, int shift,
                       const GradedCarrier& target, const std::string& what) const;
    LinearOp matrix_of(const std::function<Element(const Element&)>& f, int shift, const std::string& what) const {
        return matrix_of(f, shift, *this, what);
    }

private:
    AlgebraPtr alg_;
    std::map<int, std::vector<Monomial>> mons_;
    std::map<int, std::map<Monomial, int, MonomialLess>> index_;
    std::map<int, Subspace> spaces_;
};

// Joint kernel of linear maps on each degree of a carrier; images may leave it.
GradedCarrier joint_kernel(const GradedCarrier& c, const std::vector<std::function<Element(const Element&)>>& maps);

// A linear map on elements together with its degree shift.
using GradedMap = std::pair<std::function<Element(const Element&)>, int>;

// Largest subcarrier of c mapped into itself by every map.
GradedCarrier stable_subcarrier(const GradedCarrier& c, const std::vector<GradedMap>& maps);

// Embeds into an algebra with `extra` further even generators appended.
Element extend_even(const Element& e, int extra);

// Free graded-commutative algebra on degree-0 and odd generators, with an
// optional cutoff on the degree in the degree-0 generators.
struct ModelAlgebra {
    AlgebraPtr alg;
    Derivation d;
    std::optional<int> truncation;
    GradedCarrier carrier;
    std::map<std::pair<Monomial, Monomial>, Element, MonomialPairLess> product_overrides;

    static ModelAlgebra make(AlgebraPtr alg, Derivation d, std::optional<int> truncation);

    Element wedge(const Element& a, const Element& b) const;
    Element differential(const Element& a) const { return d.apply(*alg, a); }
    int top_degree() const;
    Monomial top_monomial() const;
};

Report verify_cdga(const ModelAlgebra& m);

}  // namespace tsf
