#include "gptnc/io.hpp"

#include "gptnc/errors.hpp"

namespace gptnc::io {

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number()) return rationalize(j.get<double>(), 1e-12);
    throw MalformedInput("expected a number or \"p/q\" string, got " + j.dump());
}

Json to_json(const Vector& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(to_json(x));
    return out;
}

Vector vector_from(const Json& j) {
    if (!j.is_array()) throw MalformedInput("expected an array of scalars");
    Vector v;
    for (const auto& x : j) v.push_back(rational_from(x));
    return v;
}

Json to_json(const Matrix& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
    return out;
}

Matrix matrix_from(const Json& j, std::size_t cols_if_empty) {
    if (!j.is_array()) throw MalformedInput("expected an array of rows");
    std::vector<Vector> rows;
    for (const auto& r : j) rows.push_back(vector_from(r));
    for (const auto& r : rows)
        if (r.size() != rows.front().size()) throw MalformedInput("ragged matrix rows");
    return Matrix::from_rows(rows, cols_if_empty);
}

namespace {

Json facet_json(const geometry::Facet& f) { return Json{{"normal", to_json(f.normal)}, {"offset", to_json(f.offset)}}; }

geometry::Facet facet_from(const Json& j) {
    if (!j.is_object() || !j.contains("normal") || !j.contains("offset"))
        throw MalformedInput("facet needs \"normal\" and \"offset\"");
    return {vector_from(j.at("normal")), rational_from(j.at("offset"))};
}

std::size_t dim_from(const Json& j) {
    if (!j.contains("dim") || !j.at("dim").is_number_integer() || j.at("dim").get<long>() < 0)
        throw MalformedInput("missing or invalid \"dim\"");
    return j.at("dim").get<std::size_t>();
}

const Json& field(const Json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw MalformedInput(std::string("missing field \"") + name + "\"");
    return j.at(name);
}

} // namespace

Json to_json(const geometry::ConvexBody& b) {
    Json out{{"dim", b.dim}, {"vertices", Json::array()}, {"facets", Json::array()}};
    for (const auto& v : b.vertices) out["vertices"].push_back(to_json(v));
    for (const auto& f : b.facets) out["facets"].push_back(facet_json(f));
    if (!b.equations.empty()) {
        out["equations"] = Json::array();
        for (const auto& f : b.equations) out["equations"].push_back(facet_json(f));
    }
    return out;
}

geometry::ConvexBody body_from(const Json& j) {
    std::size_t dim = dim_from(j);
    if (j.contains("vertices") && !j.at("vertices").empty()) {
        std::vector<Vector> pts;
        for (const auto& v : j.at("vertices")) {
            pts.push_back(vector_from(v));
            if (pts.back().size() != dim) throw DimensionMismatch("vertex length differs from dim");
        }
        return geometry::make_body(dim, std::move(pts));
    }
    if (j.contains("facets")) {
        std::vector<geometry::Facet> facets, equations;
        for (const auto& f : j.at("facets")) facets.push_back(facet_from(f));
        if (j.contains("equations"))
            for (const auto& f : j.at("equations")) equations.push_back(facet_from(f));
        return geometry::body_from_facets(dim, facets, equations);
    }
    throw MalformedInput("body needs \"vertices\" or \"facets\"");
}

Json to_json(const Gpt& g) {
    Json meta = Json::object();
    for (const auto& [k, v] : g.meta) meta[k] = v;
    return Json{{"dim", g.dim}, {"unit", to_json(g.unit)}, {"states", to_json(g.states)},
                {"effects", to_json(g.effects)}, {"meta", meta}};
}

Gpt gpt_from(const Json& j) {
    Gpt g;
    g.dim = dim_from(j);
    g.unit = vector_from(field(j, "unit"));
    g.states = body_from(field(j, "states"));
    g.effects = body_from(field(j, "effects"));
    if (g.unit.size() != g.dim || g.states.dim != g.dim || g.effects.dim != g.dim)
        throw DimensionMismatch("unit, states and effects must share the GPT dimension");
    if (j.contains("meta"))
        for (const auto& [k, v] : j.at("meta").items()) g.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
    return g;
}

Json to_json(const ValidityReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return Json{{"ok", r.ok()}, {"checks", checks}, {"state_rank", r.state_rank}, {"effect_rank", r.effect_rank},
                {"gram_rank", r.gram_rank}};
}

Json to_json(const OntologicalModel& m) {
    return Json{{"d", m.d}, {"mu_map", to_json(m.mu_map)}, {"xi_map", to_json(m.xi_map)}};
}

OntologicalModel model_from(const Json& j) {
    OntologicalModel m;
    m.d = field(j, "d").get<std::size_t>();
    m.mu_map = matrix_from(field(j, "mu_map"));
    m.xi_map = matrix_from(field(j, "xi_map"));
    if (m.mu_map.rows() != m.d || m.xi_map.rows() != m.d) throw DimensionMismatch("model maps need d rows");
    return m;
}

Json to_json(const EmbeddingWitness& w) {
    return Json{{"d", w.d}, {"iota", to_json(w.iota)}, {"kappa", to_json(w.kappa)}};
}

EmbeddingWitness witness_from(const Json& j) {
    EmbeddingWitness w;
    w.d = field(j, "d").get<std::size_t>();
    w.iota = matrix_from(field(j, "iota"));
    w.kappa = matrix_from(field(j, "kappa"));
    if (w.iota.rows() != w.d || w.kappa.rows() != w.d) throw DimensionMismatch("witness maps need d rows");
    return w;
}

Json to_json(const embed::PairDecomposition& pd) {
    Json v = Json::array(), h = Json::array();
    for (const auto& x : pd.v_list) v.push_back(to_json(x));
    for (const auto& x : pd.h_list) h.push_back(to_json(x));
    return Json{{"dim", pd.dim}, {"v_list", v}, {"h_list", h}, {"alpha", to_json(pd.alpha)}};
}

Json to_json(const embed::Verdict& v) {
    Json out{{"embeddable", v.embeddable}, {"lower_bound", v.lower_bound}, {"accessible_dim", v.accessible_dim}};
    if (v.witness) {
        out["d"] = v.witness->d;
        out["iota"] = to_json(v.witness->iota);
        out["kappa"] = to_json(v.witness->kappa);
        out["lp_support"] = v.lp_support;
    } else {
        out["farkas"] = to_json(v.farkas);
    }
    if (!v.warnings.empty()) out["warnings"] = v.warnings;
    return out;
}

Json to_json(const quasiprob::QuasiRep& q) {
    return Json{{"d", q.d}, {"mu_hat", to_json(q.mu_hat)}, {"xi_hat", to_json(q.xi_hat)}};
}

quasiprob::QuasiRep quasirep_from(const Json& j) {
    quasiprob::QuasiRep q;
    q.d = field(j, "d").get<std::size_t>();
    q.mu_hat = matrix_from(field(j, "mu_hat"));
    q.xi_hat = matrix_from(field(j, "xi_hat"));
    return q;
}

std::vector<std::pair<Vector, Vector>> pairs_from(const Json& j) {
    if (!j.is_array()) throw MalformedInput("pairs must be an array");
    std::vector<std::pair<Vector, Vector>> out;
    for (const auto& p : j) {
        if (p.is_object())
            out.emplace_back(vector_from(field(p, "v")), vector_from(field(p, "h")));
        else if (p.is_array() && p.size() == 2)
            out.emplace_back(vector_from(p[0]), vector_from(p[1]));
        else
            throw MalformedInput("each pair is {\"v\", \"h\"} or [v, h]");
    }
    return out;
}

Json to_json(const quotient::QuotientMaps& maps) {
    Json s = Json::object(), e = Json::object();
    for (const auto& [k, v] : maps.state_of) s[k] = to_json(v);
    for (const auto& [k, v] : maps.effect_of) e[k] = to_json(v);
    return Json{{"state_of", s}, {"effect_of", e}};
}

quotient::QuotientMaps maps_from(const Json& j) {
    quotient::QuotientMaps maps;
    for (const auto& [k, v] : field(j, "state_of").items()) maps.state_of[k] = vector_from(v);
    for (const auto& [k, v] : field(j, "effect_of").items()) maps.effect_of[k] = vector_from(v);
    return maps;
}

Json to_json(const quotient::FactorizationReport& r) {
    return Json{{"exact", r.exact}, {"rank", r.rank}, {"singular_values", r.singular_values},
                {"discarded", r.discarded}};
}

Json to_json(const quotient::OtModel& m) {
    Json mu = Json::object(), xi = Json::object();
    for (const auto& [k, v] : m.mu) mu[k] = to_json(v);
    for (const auto& [k, v] : m.xi) xi[k] = to_json(v);
    return Json{{"d", m.d}, {"mu", mu}, {"xi", xi}};
}

quotient::OtModel ot_model_from(const Json& j) {
    quotient::OtModel m;
    m.d = field(j, "d").get<std::size_t>();
    for (const auto& [k, v] : field(j, "mu").items()) m.mu[k] = vector_from(v);
    for (const auto& [k, v] : field(j, "xi").items()) m.xi[k] = vector_from(v);
    return m;
}

void relations_from(const Json& j, quotient::OperationalTheory& t) {
    if (!j.is_object()) throw MalformedInput("relations must be a JSON object");
    if (j.contains("mixtures"))
        for (const auto& m : j.at("mixtures"))
            t.mixtures.push_back({field(m, "target").get<std::string>(), rational_from(field(m, "weight")),
                                  field(m, "first").get<std::string>(), field(m, "second").get<std::string>()});
    if (j.contains("coarse_grainings"))
        for (const auto& c : j.at("coarse_grainings"))
            t.coarse_grainings.push_back({field(c, "target").get<std::string>(), field(c, "first").get<std::string>(),
                                          field(c, "second").get<std::string>()});
}

Json relations_to_json(const quotient::OperationalTheory& t) {
    Json mixtures = Json::array(), cgs = Json::array();
    for (const auto& m : t.mixtures)
        mixtures.push_back({{"target", m.target}, {"weight", to_json(m.weight)}, {"first", m.first}, {"second", m.second}});
    for (const auto& c : t.coarse_grainings)
        cgs.push_back({{"target", c.target}, {"first", c.first}, {"second", c.second}});
    return Json{{"mixtures", mixtures}, {"coarse_grainings", cgs}};
}

Json to_json(const app::Robustness& r) {
    return Json{{"r_star", to_json(r.r_star)}, {"r_star_float", r.r_star.get_d()}, {"lower", to_json(r.lower)},
                {"upper", to_json(r.upper)}, {"steps", r.steps}};
}

Json to_json(const app::RobustVerdict& v) {
    Json out{{"verdict", app::outcome_name(v.outcome)}, {"radius", to_json(v.radius)}, {"rank", v.rank}};
    if (v.outcome == app::Outcome::Inconclusive)
        out["gap"] = to_json(v.gap);
    else
        out["margin"] = to_json(v.margin);
    if (v.inner) out["inner"] = to_json(*v.inner);
    if (v.outer) out["outer"] = to_json(*v.outer);
    return out;
}

Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw MalformedInput(std::string("invalid JSON: ") + e.what());
    }
}

} // namespace gptnc::io
