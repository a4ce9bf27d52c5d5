#pragma once

#include "gptnc/gpt.hpp"
#include "gptnc/model.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace gptnc::quasiprob {

/// Linear maps to real functions on Λ: row λ of mu_hat is s -> mu_hat(s)(λ),
/// row λ of xi_hat is e -> xi_hat(e)(λ). Values may be negative.
struct QuasiRep {
    std::size_t d = 0;
    Matrix mu_hat;
    Matrix xi_hat;
    friend bool operator==(const QuasiRep&, const QuasiRep&) = default;
};

/// mu_hat(s)(λ) = <h_λ, s>, xi_hat(e)(λ) = <e, v_λ> for pairs (v_λ, h_λ).
/// Requires sum_λ v_λ h_λ^T to act as the identity on span(Ω) and
/// <u, v_λ> = 1; throws NotIdentityDecomposition otherwise.
QuasiRep from_decomposition(const Gpt& g, const std::vector<std::pair<Vector, Vector>>& pairs);

/// mu_hat >= 0 on state vertices and xi_hat in [0,1] on effect vertices.
bool is_positive(const Gpt& g, const QuasiRep& q, const Rational& tol = 0);

/// Largest total negative mass over state vertices, and over effect
/// vertices the largest total amount by which responses leave [0,1].
struct Negativity {
    Rational states;
    Rational effects;
    Rational total() const { return states + effects; }
};

Negativity negativity(const Gpt& g, const QuasiRep& q);

struct QuasiCheck {
    bool normalized = true;    // sum_λ mu_hat(s)(λ) = 1 on state vertices
    bool measurements = true;  // sum over each measurement of xi_hat = 1 pointwise
    bool reproduces = true;    // sum_λ xi_hat mu_hat = <e, s> on vertex pairs
    bool ok() const { return normalized && measurements && reproduces; }
};

/// Checks the representation invariants. Measurements checked: each caller
/// list (effects summing to u), the trivial {u}, and {e, u - e} for every
/// effect vertex when the effect body is closed under complement.
QuasiCheck check(const Gpt& g, const QuasiRep& q, const std::vector<std::vector<Vector>>& measurements = {},
                 const Rational& tol = 0);

QuasiRep from_model(const OntologicalModel& m);
/// Throws NotPositive unless is_positive(g, q).
OntologicalModel to_model(const Gpt& g, const QuasiRep& q);

/// Signed frame for a square-state GPT: v_λ on the four states
/// (1, ±1, ±1) and h_λ = v_λ / 4.
std::vector<std::pair<Vector, Vector>> square_frame();

struct NegativitySearch {
    QuasiRep rep;
    Negativity negativity;
    std::size_t iterations = 0;
};

/// Non-certifying heuristic: penalized gradient descent on the squared sign
/// violations over representations with |Λ| = d (d >= accessible rank),
/// then an exact correction so the returned representation satisfies every
/// invariant in rational arithmetic. Up to eight seeded starts, keeping the
/// best. A zero result is a positive representation; a nonzero result
/// proves nothing.
NegativitySearch minimize_negativity(const Gpt& g, std::size_t d, std::uint64_t seed = 0,
                                     std::size_t iterations = 20000);

} // namespace gptnc::quasiprob
