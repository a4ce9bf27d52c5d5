#pragma once

// JSON forms of the library's values. Exact scalars are written as "p/q"
// strings; on input, strings are parsed exactly and plain numbers are
// rationalized to within 1e-12.

#include "gptnc/app.hpp"
#include "gptnc/embed.hpp"
#include "gptnc/gpt.hpp"
#include "gptnc/quasiprob.hpp"
#include "gptnc/quotient.hpp"

#include <json.hpp>

namespace gptnc::io {

using Json = nlohmann::json;

Json to_json(const Rational& q);
Rational rational_from(const Json& j);

Json to_json(const Vector& v);
Vector vector_from(const Json& j);

Json to_json(const Matrix& m);
Matrix matrix_from(const Json& j, std::size_t cols_if_empty = 0);

Json to_json(const geometry::ConvexBody& b);
/// Accepts vertices and/or facets; vertices win when both are present.
geometry::ConvexBody body_from(const Json& j);

Json to_json(const Gpt& g);
Gpt gpt_from(const Json& j);

Json to_json(const ValidityReport& r);
Json to_json(const OntologicalModel& m);
OntologicalModel model_from(const Json& j);
Json to_json(const EmbeddingWitness& w);
EmbeddingWitness witness_from(const Json& j);

Json to_json(const embed::Verdict& v);
Json to_json(const embed::PairDecomposition& pd);

Json to_json(const quasiprob::QuasiRep& q);
quasiprob::QuasiRep quasirep_from(const Json& j);
/// [{"v": [...], "h": [...]}, ...] or [[v, h], ...].
std::vector<std::pair<Vector, Vector>> pairs_from(const Json& j);

Json to_json(const quotient::QuotientMaps& maps);
quotient::QuotientMaps maps_from(const Json& j);
Json to_json(const quotient::FactorizationReport& r);
Json to_json(const quotient::OtModel& m);
quotient::OtModel ot_model_from(const Json& j);

/// {"mixtures": [{"target", "weight", "first", "second"}],
///  "coarse_grainings": [{"target", "first", "second"}]}
void relations_from(const Json& j, quotient::OperationalTheory& t);
Json relations_to_json(const quotient::OperationalTheory& t);

Json to_json(const app::Robustness& r);
Json to_json(const app::RobustVerdict& v);

/// Parses JSON text, mapping parse failures to MalformedInput.
Json parse(const std::string& text);

} // namespace gptnc::io
