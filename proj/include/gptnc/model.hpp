#pragma once

#include "gptnc/matrix.hpp"

#include <cstddef>

namespace gptnc {

/// Finite ontological model of a GPT. Row λ of `mu_map` is the linear
/// functional s -> mu_s(λ); row λ of `xi_map` is e -> xi_e(λ).
struct OntologicalModel {
    std::size_t d = 0;
    Matrix mu_map;
    Matrix xi_map;
    friend bool operator==(const OntologicalModel&, const OntologicalModel&) = default;
};

/// Linear maps of the GPT space into R^d taking states into the unit simplex
/// and effects into its dual hypercube.
struct EmbeddingWitness {
    std::size_t d = 0;
    Matrix iota;
    Matrix kappa;
    friend bool operator==(const EmbeddingWitness&, const EmbeddingWitness&) = default;
};

} // namespace gptnc
