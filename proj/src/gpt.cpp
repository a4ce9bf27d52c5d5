#include "gptnc/gpt.hpp"

#include "gptnc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace gptnc {

using geometry::ConvexBody;

Gpt make_gpt(std::size_t dim, std::vector<Vector> state_points, std::vector<Vector> effect_points,
             Vector unit) {
    if (unit.size() != dim) throw DimensionMismatch("unit has wrong length");
    Gpt g;
    g.dim = dim;
    g.states = geometry::make_body(dim, std::move(state_points));
    g.effects = geometry::make_body(dim, std::move(effect_points));
    g.unit = std::move(unit);
    return g;
}

bool ValidityReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidityCheck& ValidityReport::get(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw std::out_of_range("no validity check named " + name);
}

Matrix probability_table(const Gpt& g) {
    Matrix t(g.effects.vertices.size(), g.states.vertices.size());
    for (std::size_t i = 0; i < g.effects.vertices.size(); ++i)
        for (std::size_t j = 0; j < g.states.vertices.size(); ++j)
            t(i, j) = dot(g.effects.vertices[i], g.states.vertices[j]);
    return t;
}

ValidityReport validate(const Gpt& g, const Rational& tol) {
    ValidityReport rep;
    auto abs_q = [](const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; };

    ValidityCheck dims{"dimensions", true, ""};
    auto check_len = [&](const std::vector<Vector>& pts, const char* what) {
        for (const auto& p : pts)
            if (p.size() != g.dim) {
                dims.passed = false;
                dims.detail = std::string(what) + " vertex has wrong length";
            }
    };
    if (g.unit.size() != g.dim) {
        dims.passed = false;
        dims.detail = "unit has wrong length";
    }
    check_len(g.states.vertices, "state");
    check_len(g.effects.vertices, "effect");
    rep.checks.push_back(dims);
    if (!dims.passed) return rep;

    ValidityCheck nonempty{"nonempty", !g.states.vertices.empty() && !g.effects.vertices.empty(), ""};
    if (!nonempty.passed) nonempty.detail = "state or effect body has no vertices";
    rep.checks.push_back(nonempty);

    ValidityCheck norm{"normalization", true, ""};
    for (std::size_t j = 0; j < g.states.vertices.size(); ++j) {
        Rational v = dot(g.unit, g.states.vertices[j]);
        if (abs_q(v - 1) > tol) {
            norm.passed = false;
            norm.detail += "state vertex " + std::to_string(j) + " has <u,s> = " + to_string(v) + "; ";
        }
    }
    rep.checks.push_back(norm);

    ValidityCheck contain{"effects_in_dual", true, ""};
    for (std::size_t i = 0; i < g.effects.vertices.size(); ++i)
        for (std::size_t j = 0; j < g.states.vertices.size(); ++j) {
            Rational p = dot(g.effects.vertices[i], g.states.vertices[j]);
            if (p < -tol || p > 1 + tol) {
                contain.passed = false;
                contain.detail += "effect " + std::to_string(i) + " on state " + std::to_string(j) +
                                  " gives " + to_string(p) + "; ";
            }
        }
    rep.checks.push_back(contain);

    ValidityCheck zu{"zero_and_unit", true, ""};
    if (!g.effects.vertices.empty()) {
        if (!geometry::in_hull(g.effects.vertices, Vector(g.dim))) {
            zu.passed = false;
            zu.detail += "zero effect missing; ";
        }
        if (!geometry::in_hull(g.effects.vertices, g.unit)) {
            zu.passed = false;
            zu.detail += "unit effect missing; ";
        }
    }
    rep.checks.push_back(zu);

    rep.state_rank = rank(g.states.vertices, g.dim);
    rep.effect_rank = rank(g.effects.vertices, g.dim);
    rep.gram_rank = rank(probability_table(g));
    ValidityCheck tomo{"tomography", rep.gram_rank == rep.state_rank && rep.gram_rank == rep.effect_rank, ""};
    std::ostringstream os;
    os << "gram rank " << rep.gram_rank << ", state span " << rep.state_rank << ", effect span "
       << rep.effect_rank << ", dim " << g.dim;
    tomo.detail = os.str();
    rep.checks.push_back(tomo);

    // Vertex lists are finite, so both bodies are compact polytopes.
    rep.checks.push_back({"bounded", true, "finite vertex representation"});
    return rep;
}

SimplicialGpt canonical_simplicial(std::size_t d) {
    if (d < 1) throw InvalidDimension("simplicial GPT needs d >= 1");
    if (d > 16) throw InvalidDimension("simplicial GPT with d > 16 is outside desk scale");
    SimplicialGpt s;
    s.d = d;
    Gpt& g = s.gpt;
    g.dim = d;
    g.unit.assign(d, Rational(1));
    g.states.dim = d;
    for (std::size_t i = 0; i < d; ++i) {
        Vector b(d);
        b[i] = 1;
        g.states.vertices.push_back(std::move(b));
        s.basis_labels.push_back("b" + std::to_string(i + 1));
    }
    std::sort(g.states.vertices.begin(), g.states.vertices.end());
    g.effects.dim = d;
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        Vector e(d);
        for (std::size_t i = 0; i < d; ++i)
            if (mask >> i & 1) e[i] = 1;
        g.effects.vertices.push_back(std::move(e));
    }
    std::sort(g.effects.vertices.begin(), g.effects.vertices.end());
    geometry::compute_facets(g.states);
    geometry::compute_facets(g.effects);
    g.meta["name"] = "simplicial";
    g.meta["d"] = std::to_string(d);
    return s;
}

namespace {

std::optional<ConvexBody> try_dual(const Gpt& g) {
    try {
        return geometry::dual_body(g.states, g.unit);
    } catch (const UnboundedBody&) {
        return std::nullopt;
    } catch (const UnnormalizedBody&) {
        return std::nullopt;
    }
}

} // namespace

bool satisfies_no_restriction(const Gpt& g) {
    auto dual = try_dual(g);
    return dual && geometry::same_set(*dual, g.effects);
}

bool is_simplicial(const Gpt& g) {
    return geometry::is_simplex(g.states) && satisfies_no_restriction(g);
}

WeakNonclassicality weak_nonclassicality(const Gpt& g) {
    return {!geometry::is_hypercube(g.effects), !geometry::is_simplex(g.states)};
}

bool verify_equivalence(const Gpt& g, const Gpt& h, const GptEquivalenceMaps& maps, const Rational& tol) {
    auto check_shape = [&](const Matrix& m) {
        if (m.rows() != h.dim || m.cols() != g.dim)
            throw DimensionMismatch("equivalence map must be dim(h) x dim(g)");
    };
    check_shape(maps.omega);
    check_shape(maps.epsilon);
    if (g.dim != h.dim) return false;
    if (!inverse(maps.omega) || !inverse(maps.epsilon)) return false;

    auto image = [](const ConvexBody& b, const Matrix& m) {
        std::vector<Vector> pts;
        for (const auto& v : b.vertices) pts.push_back(m.apply(v));
        return pts;
    };
    auto imgs = image(g.states, maps.omega);
    auto imge = image(g.effects, maps.epsilon);
    if (sgn(tol) == 0) {
        // Invertible linear maps send vertices to vertices, so sorting suffices.
        auto ss = imgs, se = imge;
        std::sort(ss.begin(), ss.end());
        std::sort(se.begin(), se.end());
        if (ss != h.states.vertices || se != h.effects.vertices) return false;
    } else {
        ConvexBody bs{h.dim, imgs, {}, {}}, be{h.dim, imge, {}, {}};
        if (imgs.size() != h.states.vertices.size() || imge.size() != h.effects.vertices.size()) return false;
        if (geometry::vertex_hausdorff(bs, h.states) > tol.get_d()) return false;
        if (geometry::vertex_hausdorff(be, h.effects) > tol.get_d()) return false;
    }
    for (std::size_t i = 0; i < g.effects.vertices.size(); ++i)
        for (std::size_t j = 0; j < g.states.vertices.size(); ++j) {
            Rational diff = dot(imge[i], imgs[j]) - dot(g.effects.vertices[i], g.states.vertices[j]);
            if ((sgn(diff) < 0 ? Rational(-diff) : diff) > tol) return false;
        }
    return true;
}

namespace {

Vector vec(std::initializer_list<Rational> xs) { return Vector(xs); }

std::vector<int> parse_index_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw BadParams("bad index '" + item + "'");
        }
    }
    return out;
}

long param_int(const CatalogParams& p, const std::string& key, long fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    try {
        std::size_t used = 0;
        long v = std::stol(it->second, &used);
        if (used != it->second.size()) throw BadParams("");
        return v;
    } catch (const std::exception&) {
        throw BadParams("parameter " + key + " must be an integer, got '" + it->second + "'");
    }
}

void reject_unknown(const CatalogParams& p, std::initializer_list<const char*> known) {
    for (const auto& [k, v] : p)
        if (std::none_of(known.begin(), known.end(), [&](const char* n) { return k == n; }))
            throw BadParams("unknown parameter '" + k + "'");
}

CatalogEntry rebit() {
    const Rational h(1, 2), q(1, 4);
    CatalogEntry c;
    c.named_states = {{"|0><0|", vec({1, 0, 1})},
                      {"|1><1|", vec({1, 0, -1})},
                      {"|+><+|", vec({1, 1, 0})},
                      {"|-><-|", vec({1, -1, 0})}};
    c.named_effects = {{"0", vec({0, 0, 0})},         {"1", vec({1, 0, 0})},
                       {"|0><0|", vec({h, 0, h})},    {"|1><1|", vec({h, 0, -h})},
                       {"|+><+|", vec({h, h, 0})},    {"|-><-|", vec({h, -h, 0})}};
    std::vector<Vector> s, e;
    for (auto& [n, v] : c.named_states) s.push_back(v);
    for (auto& [n, v] : c.named_effects) e.push_back(v);
    c.gpt = make_gpt(3, s, e, vec({1, 0, 0}));
    c.gpt.meta["name"] = "rebit";
    c.gpt.meta["coordinates"] = "(t, x, z): rho = (t I + x X + z Z) / 2, effects E = (t I + x X + z Z)";

    // Toy model over (λ0+, λ0-, λ1+, λ1-): mu_s(λ) = <h_λ, s>, xi_e(λ) = <e, v_λ>.
    c.ontic_labels = {"l0+", "l0-", "l1+", "l1-"};
    OntologicalModel m;
    m.d = 4;
    m.mu_map = Matrix::from_rows({vec({q, q, q}), vec({q, -q, q}), vec({q, q, -q}), vec({q, -q, -q})});
    m.xi_map = Matrix::from_rows({vec({1, 1, 1}), vec({1, -1, 1}), vec({1, 1, -1}), vec({1, -1, -1})});
    c.model = m;
    return c;
}

std::vector<Vector> square_states() {
    return {vec({1, 1, 1}), vec({1, 1, -1}), vec({1, -1, 1}), vec({1, -1, -1})};
}

CatalogEntry gbit() {
    CatalogEntry c;
    ConvexBody states = geometry::make_body(3, square_states());
    Vector unit = vec({1, 0, 0});
    c.gpt.dim = 3;
    c.gpt.states = states;
    c.gpt.effects = geometry::dual_body(states, unit);
    c.gpt.unit = unit;
    c.gpt.meta["name"] = "gbit";
    for (const auto& s : c.gpt.states.vertices) c.named_states.push_back({"s", s});
    for (const auto& e : c.gpt.effects.vertices) c.named_effects.push_back({"e", e});
    return c;
}

CatalogEntry restricted_square(const CatalogParams& p) {
    reject_unknown(p, {"effects"});
    CatalogEntry full = gbit();
    // Nontrivial effects of the full dual, indexed in canonical order.
    std::vector<Vector> nontrivial;
    for (const auto& e : full.gpt.effects.vertices)
        if (!is_zero(e) && e != full.gpt.unit) nontrivial.push_back(e);
    std::vector<int> pick;
    if (auto it = p.find("effects"); it != p.end()) pick = parse_index_list(it->second);
    else
        for (int i = 0; i < 2; ++i) pick.push_back(i);
    std::vector<Vector> effects = {Vector(3), full.gpt.unit};
    for (int i : pick) {
        if (i < 0 || static_cast<std::size_t>(i) >= nontrivial.size())
            throw BadParams("restricted_square effect index out of range: " + std::to_string(i));
        effects.push_back(nontrivial[static_cast<std::size_t>(i)]);
    }
    CatalogEntry c;
    c.gpt = make_gpt(3, square_states(), effects, full.gpt.unit);
    c.gpt.meta["name"] = "restricted_square";
    c.gpt.meta["effects"] = p.count("effects") ? p.at("effects") : "0,1";
    for (const auto& s : c.gpt.states.vertices) c.named_states.push_back({"s", s});
    for (const auto& e : c.gpt.effects.vertices) c.named_effects.push_back({"e", e});
    return c;
}

CatalogEntry polygon(const CatalogParams& p) {
    reject_unknown(p, {"n", "restrict"});
    long n = param_int(p, "n", 5);
    if (n < 3 || n > 64) throw BadParams("polygon needs 3 <= n <= 64");
    // Rational approximation of the regular n-gon at height 1; exact for n = 4.
    std::vector<Vector> pts;
    for (long k = 0; k < n; ++k) {
        double a = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        pts.push_back(vec({1, rationalize(std::cos(a), 1e-9), rationalize(std::sin(a), 1e-9)}));
    }
    CatalogEntry c;
    Vector unit = vec({1, 0, 0});
    c.gpt.dim = 3;
    c.gpt.states = geometry::make_body(3, pts);
    if (c.gpt.states.vertices.size() != static_cast<std::size_t>(n))
        throw BadParams("rational polygon approximation lost a vertex");
    ConvexBody dual = geometry::dual_body(c.gpt.states, unit);
    c.gpt.unit = unit;
    if (auto it = p.find("restrict"); it != p.end()) {
        std::vector<Vector> nontrivial;
        for (const auto& e : dual.vertices)
            if (!is_zero(e) && e != unit) nontrivial.push_back(e);
        std::vector<Vector> effects = {Vector(3), unit};
        for (int i : parse_index_list(it->second)) {
            if (i < 0 || static_cast<std::size_t>(i) >= nontrivial.size())
                throw BadParams("polygon restriction index out of range: " + std::to_string(i));
            effects.push_back(nontrivial[static_cast<std::size_t>(i)]);
        }
        c.gpt.effects = geometry::make_body(3, effects);
        c.gpt.meta["restrict"] = it->second;
    } else {
        c.gpt.effects = dual;
    }
    c.gpt.meta["name"] = "polygon";
    c.gpt.meta["n"] = std::to_string(n);
    for (const auto& s : c.gpt.states.vertices) c.named_states.push_back({"s", s});
    for (const auto& e : c.gpt.effects.vertices) c.named_effects.push_back({"e", e});
    return c;
}

} // namespace

std::vector<std::string> catalog_names() {
    return {"rebit", "gbit", "classical", "polygon", "restricted_square"};
}

CatalogEntry catalog(const std::string& name, const CatalogParams& params) {
    if (name == "rebit") {
        reject_unknown(params, {});
        return rebit();
    }
    if (name == "gbit") {
        reject_unknown(params, {});
        return gbit();
    }
    if (name == "classical") {
        reject_unknown(params, {"d"});
        long d = param_int(params, "d", 2);
        if (d < 1 || d > 16) throw BadParams("classical needs 1 <= d <= 16");
        auto s = canonical_simplicial(static_cast<std::size_t>(d));
        CatalogEntry c;
        c.gpt = s.gpt;
        c.gpt.meta["name"] = "classical";
        for (const auto& v : s.gpt.states.vertices) {
            auto one = std::find(v.begin(), v.end(), Rational(1));
            c.named_states.push_back({s.basis_labels[static_cast<std::size_t>(one - v.begin())], v});
        }
        for (const auto& e : c.gpt.effects.vertices) c.named_effects.push_back({"e", e});
        OntologicalModel m;
        m.d = s.d;
        m.mu_map = Matrix::identity(s.d);
        m.xi_map = Matrix::identity(s.d);
        c.model = m;
        c.ontic_labels = s.basis_labels;
        return c;
    }
    if (name == "polygon") return polygon(params);
    if (name == "restricted_square") return restricted_square(params);
    throw UnknownName("no catalog entry named '" + name + "'");
}

} // namespace gptnc
