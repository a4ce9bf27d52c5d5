#include "gptnc/quotient.hpp"

#include "gptnc/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <sstream>

namespace gptnc::quotient {

namespace {

Rational abs_q(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

bool close(const Rational& a, const Rational& b, const Rational& tol) { return abs_q(a - b) <= tol; }

bool close(const Vector& a, const Vector& b, const Rational& tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!close(a[i], b[i], tol)) return false;
    return true;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

std::string effect_label(const std::string& outcome, const std::string& measurement) {
    return outcome + "|" + measurement;
}

std::vector<std::string> OperationalTheory::effect_labels() const {
    std::vector<std::string> out;
    for (const auto& m : measurements)
        for (const auto& k : m.outcomes) out.push_back(effect_label(k, m.label));
    return out;
}

std::size_t OperationalTheory::effect_index(const std::string& label) const {
    auto labels = effect_labels();
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw MalformedInput("unknown operational effect '" + label + "'");
    return static_cast<std::size_t>(it - labels.begin());
}

std::size_t OperationalTheory::prep_index(const std::string& label) const {
    auto it = std::find(preps.begin(), preps.end(), label);
    if (it == preps.end()) throw MalformedInput("unknown preparation '" + label + "'");
    return static_cast<std::size_t>(it - preps.begin());
}

void check_theory(const OperationalTheory& t, const Rational& tol) {
    std::size_t n_eff = 0;
    for (const auto& m : t.measurements) n_eff += m.outcomes.size();
    if (t.table.rows() != n_eff || t.table.cols() != t.preps.size())
        throw InconsistentTable("table shape does not match the declared preparations and effects");
    if (t.preps.empty() || t.measurements.empty()) throw InconsistentTable("no preparations or measurements");
    for (std::size_t i = 0; i < t.table.rows(); ++i)
        for (std::size_t j = 0; j < t.table.cols(); ++j)
            if (t.table(i, j) < -tol || t.table(i, j) > 1 + tol)
                throw InconsistentTable("entry outside [0,1] at effect " + t.effect_labels()[i] + ", prep " + t.preps[j]);
    std::size_t row = 0;
    for (const auto& m : t.measurements) {
        for (std::size_t j = 0; j < t.preps.size(); ++j) {
            Rational total = 0;
            for (std::size_t k = 0; k < m.outcomes.size(); ++k) total += t.table(row + k, j);
            if (!close(total, 1, tol))
                throw InconsistentTable("outcomes of " + m.label + " sum to " + to_string(total) + " on " + t.preps[j]);
        }
        row += m.outcomes.size();
    }
    for (const auto& mx : t.mixtures) {
        auto a = t.prep_index(mx.target), b = t.prep_index(mx.first), c = t.prep_index(mx.second);
        for (std::size_t i = 0; i < t.table.rows(); ++i)
            if (!close(t.table(i, a), mx.weight * t.table(i, b) + (1 - mx.weight) * t.table(i, c), tol))
                throw InconsistentTable("declared mixture for " + mx.target + " does not hold in the table");
    }
    for (const auto& cg : t.coarse_grainings) {
        auto a = t.effect_index(cg.target), b = t.effect_index(cg.first), c = t.effect_index(cg.second);
        for (std::size_t j = 0; j < t.table.cols(); ++j)
            if (!close(t.table(a, j), t.table(b, j) + t.table(c, j), tol))
                throw InconsistentTable("declared coarse-graining for " + cg.target + " does not hold in the table");
    }
}

EquivalenceClasses equivalence_classes(const OperationalTheory& t, const Rational& tol) {
    auto group = [&](const std::vector<Vector>& items, const std::vector<std::string>& labels) {
        std::vector<std::vector<std::string>> classes;
        std::vector<std::size_t> reps;
        for (std::size_t i = 0; i < items.size(); ++i) {
            bool placed = false;
            for (std::size_t c = 0; c < reps.size() && !placed; ++c)
                if (close(items[reps[c]], items[i], tol)) {
                    classes[c].push_back(labels[i]);
                    placed = true;
                }
            if (!placed) {
                reps.push_back(i);
                classes.push_back({labels[i]});
            }
        }
        return classes;
    };
    std::vector<Vector> cols, rows;
    for (std::size_t j = 0; j < t.table.cols(); ++j) cols.push_back(t.table.col(j));
    for (std::size_t i = 0; i < t.table.rows(); ++i) rows.push_back(t.table.row(i));
    return {group(cols, t.preps), group(rows, t.effect_labels())};
}

QuotientResult quotient_to_gpt(const OperationalTheory& t, double tol) {
    const bool exact = tol <= 0;
    const Rational qtol = exact ? Rational(0) : rationalize(tol, tol * 1e-3);
    check_theory(t, qtol);
    const std::size_t n_eff = t.table.rows(), n_prep = t.table.cols();

    QuotientResult out;
    out.report.exact = exact;
    Eigen::MatrixXd td(n_eff, n_prep);
    for (std::size_t i = 0; i < n_eff; ++i)
        for (std::size_t j = 0; j < n_prep; ++j) td(i, j) = t.table(i, j).get_d();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(td, Eigen::ComputeThinU | Eigen::ComputeThinV);
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        out.report.singular_values.push_back(svd.singularValues()(i));

    std::vector<Vector> states(n_prep), effects(n_eff);
    std::size_t r = 0;
    if (exact) {
        Echelon ech = row_reduce(t.table);
        r = ech.pivots.size();
        for (std::size_t j = 0; j < n_prep; ++j) {
            states[j].resize(r);
            for (std::size_t i = 0; i < r; ++i) states[j][i] = ech.rref(i, j);
        }
        for (std::size_t k = 0; k < n_eff; ++k) {
            effects[k].resize(r);
            for (std::size_t i = 0; i < r; ++i) effects[k][i] = t.table(k, ech.pivots[i]);
        }
        for (std::size_t i = r; i < out.report.singular_values.size(); ++i)
            out.report.discarded.push_back(out.report.singular_values[i]);
    } else {
        for (double s : out.report.singular_values) {
            if (s > tol)
                ++r;
            else
                out.report.discarded.push_back(s);
        }
        const double eps = std::max(tol * 1e-3, 1e-12);
        for (std::size_t j = 0; j < n_prep; ++j)
            for (std::size_t i = 0; i < r; ++i)
                states[j].push_back(rationalize(svd.singularValues()(i) * svd.matrixV()(j, i), eps));
        for (std::size_t k = 0; k < n_eff; ++k)
            for (std::size_t i = 0; i < r; ++i) effects[k].push_back(rationalize(svd.matrixU()(k, i), eps));
    }
    out.report.rank = r;
    if (r == 0) throw RankDeficientNormalization("table has rank 0");

    // Gauge: unit functional from the first measurement becomes coordinate 0.
    Vector unit(r);
    for (std::size_t k = 0; k < t.measurements.front().outcomes.size(); ++k) unit = unit + effects[k];
    for (std::size_t j = 0; j < n_prep; ++j)
        if (!close(dot(unit, states[j]), 1, qtol))
            throw RankDeficientNormalization("no unit functional normalizes preparation " + t.preps[j]);
    std::vector<Vector> gauge_rows{unit};
    for (std::size_t i = 0; i < r && gauge_rows.size() < r; ++i) {
        Vector ei(r);
        ei[i] = 1;
        gauge_rows.push_back(ei);
        if (rank(gauge_rows, r) < gauge_rows.size()) gauge_rows.pop_back();
    }
    Matrix gauge = Matrix::from_rows(gauge_rows, r);
    Matrix gauge_inv_t = inverse(gauge)->transpose();
    for (auto& s : states) {
        s = gauge.apply(s);
        s[0] = 1;  // exact already; pins rounding in float mode
    }
    for (auto& e : effects) e = gauge_inv_t.apply(e);
    Vector u(r);
    u[0] = 1;

    auto labels = t.effect_labels();
    for (std::size_t j = 0; j < n_prep; ++j) out.maps.state_of[t.preps[j]] = states[j];
    for (std::size_t k = 0; k < n_eff; ++k) out.maps.effect_of[labels[k]] = effects[k];
    std::vector<Vector> effect_points = effects;
    effect_points.push_back(Vector(r));
    effect_points.push_back(u);
    out.gpt = make_gpt(r, states, effect_points, u);
    out.gpt.meta["source"] = "quotient";
    out.gpt.meta["rank"] = std::to_string(r);
    return out;
}

bool verify_quotient(const OperationalTheory& t, const Gpt& g, const QuotientMaps& maps, const Rational& tol) {
    auto labels = t.effect_labels();
    for (const auto& p : t.preps)
        if (!maps.state_of.count(p) || maps.state_of.at(p).size() != g.dim) return false;
    for (const auto& l : labels)
        if (!maps.effect_of.count(l) || maps.effect_of.at(l).size() != g.dim) return false;
    for (std::size_t k = 0; k < labels.size(); ++k)
        for (std::size_t j = 0; j < t.preps.size(); ++j)
            if (!close(dot(maps.effect_of.at(labels[k]), maps.state_of.at(t.preps[j])), t.table(k, j), tol))
                return false;
    auto classes = equivalence_classes(t, tol);
    for (const auto& cls : classes.preps)
        for (const auto& p : cls)
            if (!close(maps.state_of.at(p), maps.state_of.at(cls.front()), tol)) return false;
    for (const auto& cls : classes.effects)
        for (const auto& e : cls)
            if (!close(maps.effect_of.at(e), maps.effect_of.at(cls.front()), tol)) return false;
    return true;
}

OtModelCheck check_ot_model(const OperationalTheory& t, const OtModel& m, const Rational& tol) {
    OtModelCheck c;
    auto labels = t.effect_labels();
    for (const auto& p : t.preps) {
        if (!m.mu.count(p) || m.mu.at(p).size() != m.d) throw DimensionMismatch("missing distribution for " + p);
        Rational total = 0;
        for (const auto& x : m.mu.at(p)) {
            if (x < -tol) c.normalized = false;
            total += x;
        }
        if (!close(total, 1, tol)) c.normalized = false;
    }
    for (const auto& l : labels) {
        if (!m.xi.count(l) || m.xi.at(l).size() != m.d) throw DimensionMismatch("missing response for " + l);
        for (const auto& x : m.xi.at(l))
            if (x < -tol || x > 1 + tol) c.responses = false;
    }
    for (std::size_t k = 0; k < labels.size(); ++k)
        for (std::size_t j = 0; j < t.preps.size(); ++j)
            if (!close(dot(m.xi.at(labels[k]), m.mu.at(t.preps[j])), t.table(k, j), tol)) c.reproduces = false;
    for (const auto& mx : t.mixtures)
        if (!close(m.mu.at(mx.target), mx.weight * m.mu.at(mx.first) + Rational(1 - mx.weight) * m.mu.at(mx.second), tol))
            c.relations = false;
    for (const auto& cg : t.coarse_grainings)
        if (!close(m.xi.at(cg.target), m.xi.at(cg.first) + m.xi.at(cg.second), tol)) c.relations = false;
    auto classes = equivalence_classes(t, tol);
    for (const auto& cls : classes.preps)
        for (const auto& p : cls)
            if (!close(m.mu.at(p), m.mu.at(cls.front()), tol)) c.noncontextual = false;
    for (const auto& cls : classes.effects)
        for (const auto& e : cls)
            if (!close(m.xi.at(e), m.xi.at(cls.front()), tol)) c.noncontextual = false;
    return c;
}

OtModel lift_model(const OntologicalModel& gm, const QuotientMaps& maps, const OperationalTheory& t) {
    OtModel m;
    m.d = gm.d;
    for (const auto& p : t.preps) {
        auto it = maps.state_of.find(p);
        if (it == maps.state_of.end()) throw ModelMismatch("no state vector for preparation " + p);
        if (it->second.size() != gm.mu_map.cols()) throw ModelMismatch("model and quotient dimensions differ");
        m.mu[p] = gm.mu_map.apply(it->second);
    }
    for (const auto& l : t.effect_labels()) {
        auto it = maps.effect_of.find(l);
        if (it == maps.effect_of.end()) throw ModelMismatch("no effect vector for " + l);
        if (it->second.size() != gm.xi_map.cols()) throw ModelMismatch("model and quotient dimensions differ");
        m.xi[l] = gm.xi_map.apply(it->second);
    }
    for (const auto& [l, e] : maps.effect_of)
        for (const auto& [p, s] : maps.state_of)
            if (dot(m.xi.at(l), m.mu.at(p)) != dot(e, s))
                throw ModelMismatch("model does not reproduce <e, s> for " + l + " on " + p);
    return m;
}

OntologicalModel project_model(const OtModel& m, const QuotientMaps& maps, std::size_t dim) {
    auto fit = [&](const std::map<std::string, Vector>& vectors, const std::map<std::string, Vector>& values,
                   const char* what) {
        std::vector<Vector> cols, targets;
        for (const auto& [label, v] : vectors) {
            auto it = values.find(label);
            if (it == values.end()) throw NotWellDefined(std::string("no representation for ") + what + " " + label);
            if (v.size() != dim || it->second.size() != m.d) throw DimensionMismatch("representation sizes differ");
            cols.push_back(v);
            targets.push_back(it->second);
        }
        for (std::size_t a = 0; a < cols.size(); ++a)
            for (std::size_t b = a + 1; b < cols.size(); ++b)
                if (cols[a] == cols[b] && targets[a] != targets[b])
                    throw NotWellDefined(std::string("operationally equivalent ") + what +
                                         "s carry different representations (the model is contextual)");
        auto x = solve_left(Matrix::from_columns(cols, dim), Matrix::from_columns(targets, m.d));
        if (!x) throw NotWellDefined(std::string("no linear map reproduces the ") + what + " representations");
        return *x;
    };
    OntologicalModel out;
    out.d = m.d;
    out.mu_map = fit(maps.state_of, m.mu, "preparation");
    out.xi_map = fit(maps.effect_of, m.xi, "effect");
    return out;
}

OperationalTheory theory_from_gpt(const Gpt& g) {
    OperationalTheory t;
    const auto& s = g.states.vertices;
    const auto& e = g.effects.vertices;
    for (std::size_t j = 0; j < s.size(); ++j) t.preps.push_back("s" + std::to_string(j));
    t.table = Matrix(2 * e.size(), s.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        t.measurements.push_back({"m" + std::to_string(i), {"0", "1"}});
        for (std::size_t j = 0; j < s.size(); ++j) {
            t.table(2 * i, j) = dot(e[i], s[j]);
            t.table(2 * i + 1, j) = 1 - t.table(2 * i, j);
        }
    }
    return t;
}

OperationalTheory parse_table_csv(const std::string& text) {
    std::stringstream in(text);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty() || trim(line)[0] == '#') continue;
        rows.push_back(split_csv_line(line));
    }
    if (rows.size() < 2) throw MalformedInput("CSV needs a header and at least one preparation row");
    const auto& header = rows.front();
    if (header.size() < 2) throw MalformedInput("CSV header needs at least one effect column");

    OperationalTheory t;
    std::vector<std::pair<std::string, std::string>> cols;  // (outcome, measurement)
    for (std::size_t c = 1; c < header.size(); ++c) {
        auto bar = header[c].find('|');
        if (bar == std::string::npos || bar == 0 || bar + 1 == header[c].size())
            throw MalformedInput("effect column '" + header[c] + "' is not of the form k|M");
        cols.emplace_back(header[c].substr(0, bar), header[c].substr(bar + 1));
        auto m = std::find_if(t.measurements.begin(), t.measurements.end(),
                              [&](const Measurement& x) { return x.label == cols.back().second; });
        if (m == t.measurements.end()) {
            t.measurements.push_back({cols.back().second, {}});
            m = t.measurements.end() - 1;
        }
        if (std::find(m->outcomes.begin(), m->outcomes.end(), cols.back().first) != m->outcomes.end())
            throw MalformedInput("duplicate effect column '" + header[c] + "'");
        m->outcomes.push_back(cols.back().first);
    }
    auto labels = t.effect_labels();
    std::vector<std::size_t> row_of(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        row_of[c] = static_cast<std::size_t>(
            std::find(labels.begin(), labels.end(), effect_label(cols[c].first, cols[c].second)) - labels.begin());

    t.table = Matrix(labels.size(), rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != header.size())
            throw MalformedInput("row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                                 " cells, header has " + std::to_string(header.size()));
        if (std::find(t.preps.begin(), t.preps.end(), rows[r][0]) != t.preps.end())
            throw MalformedInput("duplicate preparation label '" + rows[r][0] + "'");
        t.preps.push_back(rows[r][0]);
        for (std::size_t c = 1; c < header.size(); ++c) t.table(row_of[c - 1], r - 1) = parse_rational(rows[r][c]);
    }
    return t;
}

std::string table_to_csv(const OperationalTheory& t) {
    std::ostringstream out;
    out << "prep";
    for (const auto& l : t.effect_labels()) out << ',' << l;
    out << '\n';
    for (std::size_t j = 0; j < t.preps.size(); ++j) {
        out << t.preps[j];
        for (std::size_t i = 0; i < t.table.rows(); ++i) out << ',' << to_string(t.table(i, j));
        out << '\n';
    }
    return out.str();
}

} // namespace gptnc::quotient
