#include "gptnc/app.hpp"

#include "gptnc/errors.hpp"
#include "gptnc/io.hpp"

#include <cmath>

namespace gptnc::app {

namespace {

Rational abs_q(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

} // namespace

NoisyTable ingest(const std::string& csv, const std::optional<std::string>& relations_json, const Rational& epsilon) {
    if (sgn(epsilon) < 0) throw BadParams("epsilon must be nonnegative");
    NoisyTable nt;
    nt.epsilon = epsilon;
    nt.theory = quotient::parse_table_csv(csv);
    if (relations_json) io::relations_from(io::parse(*relations_json), nt.theory);
    const auto& t = nt.theory;
    for (std::size_t i = 0; i < t.table.rows(); ++i)
        for (std::size_t j = 0; j < t.table.cols(); ++j)
            if (t.table(i, j) < -epsilon || t.table(i, j) > 1 + epsilon)
                throw MalformedInput("entry " + to_string(t.table(i, j)) + " is not a probability");
    std::size_t row = 0;
    for (const auto& m : t.measurements) {
        // Each outcome carries its own epsilon, so the sum may drift by k * epsilon.
        Rational slack = epsilon * static_cast<unsigned long>(m.outcomes.size());
        for (std::size_t j = 0; j < t.preps.size(); ++j) {
            Rational total = 0;
            for (std::size_t k = 0; k < m.outcomes.size(); ++k) total += t.table(row + k, j);
            if (abs_q(total - 1) > slack)
                throw NormalizationViolation("outcomes of " + m.label + " sum to " + to_string(total) + " on " +
                                             t.preps[j]);
        }
        row += m.outcomes.size();
    }
    return nt;
}

Gpt depolarize(const Gpt& g, const Rational& r) {
    if (r < 0 || r > 1) throw BadParams("depolarizing parameter must lie in [0, 1]");
    Vector c = geometry::barycenter(g.states);
    std::vector<Vector> states, effects;
    for (const auto& s : g.states.vertices) states.push_back(Rational(1 - r) * s + r * c);
    for (const auto& e : g.effects.vertices) effects.push_back(Rational(1 - r) * e + Rational(r * dot(e, c)) * g.unit);
    Gpt out = make_gpt(g.dim, std::move(states), std::move(effects), g.unit);
    out.meta = g.meta;
    out.meta["depolarized"] = to_string(r);
    return out;
}

Robustness robustness_radius(const Gpt& g, double precision) {
    Robustness rb;
    if (embed::decide(g, {false}).embeddable) return rb;
    if (!embed::decide(depolarize(g, 1), {false}).embeddable)
        throw DegenerateBody("fully depolarized GPT is not embeddable");
    Rational lo = 0, hi = 1;
    const Rational prec = rationalize(precision, precision * 1e-3);
    while (hi - lo > prec) {
        Rational mid = (lo + hi) / 2;
        if (embed::decide(depolarize(g, mid), {false}).embeddable)
            hi = mid;
        else
            lo = mid;
        ++rb.steps;
    }
    rb.lower = lo;
    rb.upper = hi;
    rb.r_star = (lo + hi) / 2;
    return rb;
}

Rational approximation_radius(const quotient::QuotientResult& q, std::size_t n_preps, std::size_t n_effects,
                              const Rational& epsilon) {
    if (sgn(epsilon) == 0) return 0;
    double sigma_min = q.report.singular_values.at(q.report.rank - 1);
    double rho = epsilon.get_d() * std::sqrt(static_cast<double>(n_preps * n_effects)) / sigma_min;
    if (rho >= 1) return 1;
    // Round up so the radius stays conservative.
    Rational out = rationalize(rho, rho * 1e-6);
    return out < rho ? Rational(out + Rational(1, 1000000000)) : out;
}

Gpt expand(const Gpt& g, const Rational& rho) {
    if (sgn(rho) < 0) throw BadParams("expansion radius must be nonnegative");
    if (sgn(rho) == 0) return g;
    Vector c = geometry::barycenter(g.states);
    std::vector<Vector> states, effects;
    for (const auto& s : g.states.vertices) states.push_back(Rational(1 + rho) * s - rho * c);
    for (const auto& e : g.effects.vertices) effects.push_back(Rational(1 + rho) * e - Rational(rho * dot(e, c)) * g.unit);
    Gpt out;
    out.dim = g.dim;
    out.unit = g.unit;
    out.meta = g.meta;
    out.meta["expanded"] = to_string(rho);
    out.states = geometry::make_body(g.dim, std::move(states));
    geometry::ConvexBody grown = geometry::make_body(g.dim, std::move(effects));
    out.effects = geometry::intersect(grown, geometry::dual_body(out.states, g.unit));
    return out;
}

std::string outcome_name(Outcome o) {
    switch (o) {
    case Outcome::Classical: return "classical";
    case Outcome::Nonclassical: return "nonclassical";
    case Outcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

RobustVerdict verdict(const NoisyTable& nt, double tol) {
    RobustVerdict v;
    auto q = quotient::quotient_to_gpt(nt.theory, tol > 0 ? tol : (sgn(nt.epsilon) > 0 ? 1e-9 : 0.0));
    v.point = q.gpt;
    v.rank = q.report.rank;
    v.radius = approximation_radius(q, nt.theory.preps.size(), nt.theory.table.rows(), nt.epsilon);

    Gpt inner = depolarize(v.point, v.radius);
    v.inner = embed::decide(inner);
    if (!v.inner->embeddable) {
        if (!embed::verify_certificate(inner, v.inner->farkas))
            throw Error("InternalError", "Farkas certificate failed re-verification");
        v.outcome = Outcome::Nonclassical;
        v.margin = robustness_radius(inner).r_star;
        return v;
    }
    Gpt outer = expand(v.point, v.radius);
    v.outer = embed::decide(outer);
    if (v.outer->embeddable) {
        if (!embed::verify_witness(outer, *v.outer->witness))
            throw Error("InternalError", "embedding witness failed re-verification");
        v.outcome = Outcome::Classical;
        v.margin = v.radius;
        return v;
    }
    v.outcome = Outcome::Inconclusive;
    v.gap = v.radius;
    return v;
}

} // namespace gptnc::app
