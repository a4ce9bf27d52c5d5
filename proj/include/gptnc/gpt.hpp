#pragma once

#include "gptnc/geometry.hpp"
#include "gptnc/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gptnc {

/// Prepare-measure GPT with the standard dot product on its coordinates.
struct Gpt {
    std::size_t dim = 0;
    geometry::ConvexBody states;
    geometry::ConvexBody effects;
    Vector unit;
    std::map<std::string, std::string> meta;
};

/// Builds a Gpt from generating points (canonicalized, both representations).
Gpt make_gpt(std::size_t dim, std::vector<Vector> state_points, std::vector<Vector> effect_points,
             Vector unit);

struct ValidityCheck {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct ValidityReport {
    std::vector<ValidityCheck> checks;
    std::size_t state_rank = 0;
    std::size_t effect_rank = 0;
    std::size_t gram_rank = 0;
    bool ok() const;
    const ValidityCheck& get(const std::string& name) const;
};

/// Checks normalization, E inside the dual of Ω, presence of 0 and u,
/// tomographic ranks, boundedness. `tol` = 0 means exact comparisons.
ValidityReport validate(const Gpt& g, const Rational& tol = 0);

struct SimplicialGpt {
    std::size_t d = 0;
    std::vector<std::string> basis_labels;
    Gpt gpt;
};

SimplicialGpt canonical_simplicial(std::size_t d);

bool is_simplicial(const Gpt& g);
bool satisfies_no_restriction(const Gpt& g);

struct WeakNonclassicality {
    bool incompatibility = false;
    bool mixture_ambiguity = false;
    friend bool operator==(const WeakNonclassicality&, const WeakNonclassicality&) = default;
};

WeakNonclassicality weak_nonclassicality(const Gpt& g);

/// omega acts on states, epsilon on effects (both dim(h) x dim(g)).
struct GptEquivalenceMaps {
    Matrix omega;
    Matrix epsilon;
};

/// True iff omega(Ω_g) = Ω_h, epsilon(E_g) = E_h and <epsilon e, omega s> = <e, s>
/// on all vertex pairs. With tol > 0 the body comparison uses the vertex
/// Hausdorff distance and the probability comparison |Δ| <= tol.
bool verify_equivalence(const Gpt& g, const Gpt& h, const GptEquivalenceMaps& maps,
                        const Rational& tol = 0);

/// Catalog entries carry labelled states/effects and, for `rebit`, the
/// reference toy-model ontological model over (λ0+, λ0-, λ1+, λ1-).
struct CatalogEntry {
    Gpt gpt;
    std::vector<std::pair<std::string, Vector>> named_states;
    std::vector<std::pair<std::string, Vector>> named_effects;
    std::optional<OntologicalModel> model;
    std::vector<std::string> ontic_labels;
};

using CatalogParams = std::map<std::string, std::string>;

/// Names: rebit, gbit, classical (d=), polygon (n=, restrict=i,j,..),
/// restricted_square (effects=i,j,..).
CatalogEntry catalog(const std::string& name, const CatalogParams& params = {});

std::vector<std::string> catalog_names();

/// The raw probability table <e, s> over effect vertices (rows) and state
/// vertices (columns).
Matrix probability_table(const Gpt& g);

} // namespace gptnc
