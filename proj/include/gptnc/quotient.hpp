#pragma once

#include "gptnc/gpt.hpp"
#include "gptnc/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace gptnc::quotient {

struct Measurement {
    std::string label;
    std::vector<std::string> outcomes;
};

/// target = weight * first + (1 - weight) * second (preparation labels).
struct Mixture {
    std::string target;
    Rational weight;
    std::string first;
    std::string second;
};

/// target = first + second (operational-effect labels "k|M").
struct CoarseGraining {
    std::string target;
    std::string first;
    std::string second;
};

/// Preparations, measurements and the table Pr([k|M], P). Table rows follow
/// effect_labels() (measurements in order, outcomes in order); columns follow
/// `preps`.
struct OperationalTheory {
    std::vector<std::string> preps;
    std::vector<Measurement> measurements;
    Matrix table;
    std::vector<Mixture> mixtures;
    std::vector<CoarseGraining> coarse_grainings;

    std::vector<std::string> effect_labels() const;
    std::size_t effect_index(const std::string& label) const;
    std::size_t prep_index(const std::string& label) const;
};

std::string effect_label(const std::string& outcome, const std::string& measurement);

/// Entries in [0,1], outcome rows summing to 1 per measurement, declared
/// relations satisfied; all within `tol`. Throws InconsistentTable or
/// MalformedInput (unknown labels).
void check_theory(const OperationalTheory& t, const Rational& tol = 0);

struct EquivalenceClasses {
    std::vector<std::vector<std::string>> preps;
    std::vector<std::vector<std::string>> effects;
};

/// Groups labels with identical table columns (preps) or rows (effects).
EquivalenceClasses equivalence_classes(const OperationalTheory& t, const Rational& tol = 0);

struct QuotientMaps {
    std::map<std::string, Vector> state_of;
    std::map<std::string, Vector> effect_of;
};

struct FactorizationReport {
    bool exact = true;
    std::size_t rank = 0;
    std::vector<double> singular_values;  // all of them, descending
    std::vector<double> discarded;        // those at or below the cutoff
};

struct QuotientResult {
    Gpt gpt;
    QuotientMaps maps;
    FactorizationReport report;
};

/// Rank-factorizes the table and fixes the gauge so the unit effect is the
/// first coordinate. tol = 0 selects exact elimination; tol > 0 selects
/// singular-value thresholding at `tol` followed by rationalization.
QuotientResult quotient_to_gpt(const OperationalTheory& t, double tol = 0);

bool verify_quotient(const OperationalTheory& t, const Gpt& g, const QuotientMaps& maps,
                     const Rational& tol = 0);

/// Ontological model of an operational theory: one distribution per
/// preparation and one response function per operational effect.
struct OtModel {
    std::size_t d = 0;
    std::map<std::string, Vector> mu;
    std::map<std::string, Vector> xi;
};

struct OtModelCheck {
    bool normalized = true;
    bool responses = true;
    bool reproduces = true;
    bool relations = true;       // declared mixtures/coarse-grainings preserved
    bool noncontextual = true;   // equivalent procedures share representations
    bool ok() const { return normalized && responses && reproduces && relations && noncontextual; }
};

OtModelCheck check_ot_model(const OperationalTheory& t, const OtModel& m, const Rational& tol = 0);

/// mu(P) = mu_map s_P, xi([k|M]) = xi_map e_[k|M]. Throws ModelMismatch if
/// the GPT model does not reproduce the table on the quotiented vectors.
OtModel lift_model(const OntologicalModel& gm, const QuotientMaps& maps, const OperationalTheory& t);

/// Inverse direction: the unique linear maps with mu_map s_P = mu(P) and
/// xi_map e = xi(e). Throws NotWellDefined when equivalent procedures carry
/// different representations (or no linear extension exists).
OntologicalModel project_model(const OtModel& m, const QuotientMaps& maps, std::size_t dim);

/// Operational theory whose preparations are the state vertices and whose
/// measurements are the binary tests {e, u - e} over effect vertices.
OperationalTheory theory_from_gpt(const Gpt& g);

/// CSV: header "prep,k|M,...", one row per preparation. Measurements are
/// grouped by the part after '|' in order of first appearance.
OperationalTheory parse_table_csv(const std::string& text);
std::string table_to_csv(const OperationalTheory& t);

} // namespace gptnc::quotient
