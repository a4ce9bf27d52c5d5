#pragma once

#include "gptnc/gpt.hpp"
#include "gptnc/lp.hpp"
#include "gptnc/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gptnc::embed {

/// Coordinates in which states and effects both span the accessible space
/// of dimension `dim`: <e, s> = <effect_map e, state_map s> for s in span(Ω)
/// and e in span(E). Identity maps when the GPT is tomographically full.
struct Accessible {
    std::size_t dim = 0;
    bool reduced = false;
    Matrix state_map;   // dim x g.dim
    Matrix effect_map;  // dim x g.dim
    std::vector<Vector> states;
    std::vector<Vector> effects;
    Vector unit;
};

Accessible accessible_space(const Gpt& g);

/// Candidate ontic pairs (v_i, h_j) and weights with
/// sum_ij alpha_ij v_i h_j^T = identity on the accessible space.
/// v_i are the vertices of K_E = {v : <e, v> in [0, 1] for e in E, <u, v> = 1};
/// h_j are the extreme rays of the cone dual to the state cone.
struct PairDecomposition {
    std::size_t dim = 0;
    std::vector<Vector> v_list;
    std::vector<Vector> h_list;
    Matrix alpha;  // |v_list| x |h_list|
    std::size_t support() const;
};

/// sum_ij alpha_ij v_i h_j^T == I exactly and alpha >= 0.
bool is_valid(const PairDecomposition& pd);

/// Builds the exact LP  alpha >= 0,  sum_ij alpha_ij v_i h_j^T = I  over the
/// full candidate lists of `g`, columns ordered (i, j) row-major.
struct EmbeddingLp {
    Accessible space;
    std::vector<Vector> v_list;
    std::vector<Vector> h_list;
    lp::Problem<Rational> problem;
};

EmbeddingLp build_embedding_lp(const Gpt& g);

struct DecideOptions {
    bool minimize = true;
};

struct Verdict {
    bool embeddable = false;
    std::optional<EmbeddingWitness> witness;
    std::optional<OntologicalModel> model;
    std::optional<PairDecomposition> decomposition;
    /// Farkas vector y over the r*r equality rows: y.A_j >= 0 for every
    /// column and y.vec(I) < 0. Empty when embeddable.
    std::vector<Rational> farkas;
    std::size_t lp_support = 0;   // support of the basic solution before minimization
    std::size_t lp_rows = 0;
    std::size_t accessible_dim = 0;
    std::size_t lower_bound = 0;
    std::vector<std::string> warnings;
};

Verdict decide(const Gpt& g, const DecideOptions& opts = {});

/// Re-derives the LP for `g` and checks the certificate with rational arithmetic.
bool verify_certificate(const Gpt& g, const std::vector<Rational>& farkas);

bool verify_witness(const Gpt& g, const EmbeddingWitness& w, const Rational& tol = 0);

struct ModelCheck {
    bool normalized = true;     // mu_s is a distribution on every state vertex
    bool responses = true;      // xi_e in [0,1]^d on every effect vertex
    bool unit = true;           // xi_u = all ones
    bool reproduces = true;     // sum xi mu = <e, s> on every pair
    bool ok() const { return normalized && responses && unit && reproduces; }
};

ModelCheck check_model(const Gpt& g, const OntologicalModel& m, const Rational& tol = 0);

EmbeddingWitness model_to_witness(const OntologicalModel& m);
OntologicalModel witness_to_model(const EmbeddingWitness& w);

/// Ontic-cardinality lower bound from zero patterns. `antichain` is the
/// largest set of state vertices each having an effect vanishing on it but
/// on none of the others; `bound` is the implied minimum |Λ|.
struct LowerBound {
    std::size_t antichain = 0;
    std::size_t accessible_dim = 0;
    std::size_t bound = 0;
    std::vector<Vector> witnesses;  // the antichain's states
};

LowerBound lower_bound_details(const Gpt& g);
std::size_t min_d_lower_bound(const Gpt& g);

/// Smallest d whose subset lattice holds an antichain of size k.
std::size_t sperner_min_d(std::size_t k);

struct SearchOptions {
    std::size_t restarts = 100;
    std::uint64_t seed = 0;
    std::size_t max_iterations = 40;
    double tol = 1e-7;
    unsigned jobs = 1;
};

/// Alternating-LP search for a model with exactly `d` ontic states. Returns
/// a model passing check_model at `tol`, or nullopt. Absence proves nothing.
std::optional<OntologicalModel> bilinear_search(const Gpt& g, std::size_t d, const SearchOptions& opts = {});

/// Greedy column elimination with exact LP re-solves; never increases support.
PairDecomposition minimize_support(const PairDecomposition& pd);

/// Model over λ = (i, j) with alpha_ij > 0, in the accessible coordinates.
OntologicalModel model_from_decomposition(const PairDecomposition& pd, const Accessible& space);

} // namespace gptnc::embed
