#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tsf/gca.hpp"

namespace tsf {

// Lie algebra data with per-basis-vector contraction and Lie derivative.
struct LieAction {
    int dim = 0;
    std::vector<Q> structure;  // c_{ab}^k at (a * dim + b) * dim + k
    std::vector<Derivation> iota;
    std::vector<Derivation> lie;
    std::vector<Element> moment;

    const Q& c(int a, int b, int k) const { return structure[(static_cast<size_t>(a) * dim + b) * dim + k]; }
    Q& c(int a, int b, int k) { return structure[(static_cast<size_t>(a) * dim + b) * dim + k]; }
    bool abelian() const;
};

struct FoliatedModel {
    std::string name;
    ModelAlgebra ambient;
    std::vector<int> leafwise;  // odd generators whose dual vectors span the leaves
    Element omega;
    std::optional<Element> chi;
    std::optional<Element> eta;
    std::optional<LieAction> action;

    GradedCarrier basic;
    int n = 0;

    const FreeAlgebra& alg() const { return *ambient.alg; }
    std::vector<Derivation> leafwise_contractions() const;
    // Odd degree-1 generators transverse to the leaves.
    std::vector<int> frame() const;
};

using ModelPtr = std::shared_ptr<const FoliatedModel>;

GradedCarrier extract_basic(const GradedCarrier& start, const ModelAlgebra& ambient,
                            const std::vector<Derivation>& leafwise);

// Computes the basic subcomplex and n; throws on structural errors.
FoliatedModel make_model(std::string name, ModelAlgebra ambient, std::vector<int> leafwise, Element omega,
                         std::optional<Element> chi = std::nullopt, std::optional<Element> eta = std::nullopt,
                         std::optional<LieAction> action = std::nullopt);

Report validate_model(const FoliatedModel& m);
// Hamiltonian part of validation only (moment condition and equivariance).
Report validate_moment(const FoliatedModel& m);

FoliatedModel torus(int n);
FoliatedModel heisenberg5();
FoliatedModel kodaira_thurston();
FoliatedModel cosym5();
FoliatedModel trunc_linear(int n, int D);
// heisenberg5 with the 1-dimensional algebra acting along the Reeb direction.
FoliatedModel heisenberg5_reeb();
// Trivial action of an m-dimensional abelian algebra (zero contractions and moments).
FoliatedModel with_trivial_action(FoliatedModel m, int dim);

FoliatedModel builder(const std::string& name);
std::vector<std::string> builder_names();

nlohmann::json model_to_json(const FoliatedModel& m);
FoliatedModel model_from_json(const nlohmann::json& j);
FoliatedModel model_from_text(const std::string& text);
FoliatedModel load_model_file(const std::string& path);

}  // namespace tsf
