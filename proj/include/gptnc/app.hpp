#pragma once

#include "gptnc/embed.hpp"
#include "gptnc/gpt.hpp"
#include "gptnc/quotient.hpp"

#include <optional>
#include <string>

namespace gptnc::app {

/// Point estimates with an entrywise absolute uncertainty radius.
struct NoisyTable {
    quotient::OperationalTheory theory;
    Rational epsilon = 0;
};

/// Parses the CSV (and optional relations JSON text), checks entries and
/// measurement normalization up to epsilon. Throws MalformedInput or
/// NormalizationViolation.
NoisyTable ingest(const std::string& csv, const std::optional<std::string>& relations_json, const Rational& epsilon);

/// g_r: states s -> (1 - r) s + r c with c the state barycenter, effects
/// e -> (1 - r) e + r <e, c> u. Fixes 0 and u; r in [0, 1].
Gpt depolarize(const Gpt& g, const Rational& r);

struct Robustness {
    Rational r_star;   // midpoint of the final bracket
    Rational lower;    // largest tested r with g_r not embeddable (0 if none)
    Rational upper;    // smallest tested r with g_r embeddable
    std::size_t steps = 0;
};

/// Bisection with the exact LP; the bracket shrinks to at most `precision`.
Robustness robustness_radius(const Gpt& g, double precision = 1e-3);

/// Radius used to shrink/expand the point-estimate bodies for a given
/// entrywise epsilon: min(1, eps * sqrt(|P| |K|) / sigma_min).
Rational approximation_radius(const quotient::QuotientResult& q, std::size_t n_preps, std::size_t n_effects,
                              const Rational& epsilon);

/// Outer approximation: states pushed away from the barycenter by rho,
/// effects likewise, then clipped to the dual of the expanded states.
Gpt expand(const Gpt& g, const Rational& rho);

enum class Outcome { Classical, Nonclassical, Inconclusive };

std::string outcome_name(Outcome o);

struct RobustVerdict {
    Outcome outcome = Outcome::Inconclusive;
    Rational radius;           // shrink/expand radius derived from epsilon
    Rational margin;           // Nonclassical: robustness radius of the inner GPT; Classical: radius
    Rational gap;              // Inconclusive: the radius straddling the threshold
    std::size_t rank = 0;
    Gpt point;
    std::optional<embed::Verdict> inner;
    std::optional<embed::Verdict> outer;
};

/// tol = 0 quotients exactly; otherwise singular values <= tol are dropped.
RobustVerdict verdict(const NoisyTable& nt, double tol = 0);

} // namespace gptnc::app
