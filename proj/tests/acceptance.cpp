// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any fails.

#include "gptnc/app.hpp"
#include "gptnc/embed.hpp"
#include "gptnc/errors.hpp"
#include "gptnc/gpt.hpp"
#include "gptnc/lp.hpp"
#include "gptnc/quasiprob.hpp"
#include "gptnc/quotient.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "theories.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace gptnc;
using test::half;
using test::v;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "failed: ";
            else detail << "; ";
            detail << what;
            pass = false;
        }
    }
};

int failures = 0;

void report(int id, const char* name, const std::function<void(Outcome&)>& body) {
    Outcome o;
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failures;
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.str().c_str());
    std::fflush(stdout);
}

// Sum over λ of xi(e)(λ) mu(s)(λ).
Rational model_probability(const OntologicalModel& m, const Vector& e, const Vector& s) {
    Vector mu = m.mu_map.apply(s), xi = m.xi_map.apply(e);
    Rational p = 0;
    for (std::size_t k = 0; k < mu.size(); ++k) p += xi[k] * mu[k];
    return p;
}

Rational trace_probability(const Vector& e, const Vector& s) {
    auto rho = oracle::pauli_sum(s);
    for (auto& row : rho)
        for (auto& x : row) x /= 2;
    return oracle::trace(oracle::mul(oracle::pauli_sum(e), rho));
}

// Vertices are affinely independent, so the body is a simplex.
bool simplex_oracle(const std::vector<Vector>& vertices) {
    std::vector<Vector> lifted;
    for (const auto& x : vertices) {
        Vector y{Rational(1)};
        y.insert(y.end(), x.begin(), x.end());
        lifted.push_back(y);
    }
    return oracle::rank(lifted) == vertices.size();
}

// Some vertex plus subset sums of dim edge vectors reproduces every vertex.
bool parallelotope_oracle(const std::vector<Vector>& vertices, std::size_t dim) {
    if (vertices.size() != (std::size_t{1} << dim)) return false;
    for (const auto& origin : vertices) {
        std::vector<Vector> others;
        for (const auto& x : vertices)
            if (x != origin) others.push_back(x - origin);
        std::vector<std::size_t> pick(dim);
        std::function<bool(std::size_t, std::size_t)> choose = [&](std::size_t k, std::size_t from) {
            if (k == dim) {
                std::vector<Vector> dirs;
                for (auto i : pick) dirs.push_back(others[i]);
                return oracle::rank(dirs) == dim && oracle::cube_by_map(vertices, origin, dirs);
            }
            for (std::size_t i = from; i < others.size(); ++i) {
                pick[k] = i;
                if (choose(k + 1, i + 1)) return true;
            }
            return false;
        };
        if (choose(0, 0)) return true;
    }
    return false;
}

bool farkas_reverifies(const Gpt& g, const std::vector<Rational>& y) {
    return !y.empty() && embed::verify_certificate(g, y) && lp::verify_farkas(embed::build_embedding_lp(g).problem, y);
}

} // namespace

int main() {
    const auto rebit = catalog("rebit");

    report(1, "rebit embeddability", [&](Outcome& o) {
        auto t0 = Clock::now();
        auto vd = embed::decide(rebit.gpt);
        double dt = seconds_since(t0);
        o.require(vd.embeddable && vd.model.has_value(), "decide says NotEmbeddable");
        if (!vd.model) return;
        std::size_t exact = 0, pairs = 0;
        for (const auto& e : rebit.gpt.effects.vertices)
            for (const auto& s : rebit.gpt.states.vertices) {
                ++pairs;
                Rational p = model_probability(*vd.model, e, s);
                if (p == oracle::dot(e, s) && p == trace_probability(e, s)) ++exact;
            }
        o.require(pairs == 24, "expected 24 vertex pairs, got " + std::to_string(pairs));
        o.require(exact == pairs, std::to_string(pairs - exact) + " pairs not reproduced exactly");
        o.require(embed::check_model(rebit.gpt, *vd.model).ok(), "model check");
        o.require(dt < 5.0, "runtime over 5 s");
        o.detail << "d=" << vd.model->d << ", " << exact << "/" << pairs << " pairs exact, " << dt << " s";
    });

    report(2, "rebit dimension gap", [&](Outcome& o) {
        auto t0 = Clock::now();
        auto lb = embed::lower_bound_details(rebit.gpt);
        embed::SearchOptions so;
        so.restarts = 1000;
        auto found = embed::bilinear_search(rebit.gpt, 3, so);
        double dt = seconds_since(t0);
        o.require(lb.bound == 4, "lower bound " + std::to_string(lb.bound));
        o.require(embed::min_d_lower_bound(rebit.gpt) == 4, "min_d_lower_bound != 4");
        o.require(!found, "bilinear_search found a d=3 model");
        o.require(dt < 60.0, "runtime over 60 s");
        o.detail << "lower bound " << lb.bound << " (antichain " << lb.antichain << "), d=3 search over 1000 restarts "
                 << (found ? "found a model" : "found nothing") << ", " << dt << " s";
    });

    report(3, "toy model golden values", [&](Outcome& o) {
        o.require(rebit.model.has_value(), "catalog rebit has no reference model");
        if (!rebit.model) return;
        const auto& m = *rebit.model;
        auto state = [&](const char* n) {
            for (const auto& [name, x] : rebit.named_states)
                if (name == n) return x;
            throw std::runtime_error(n);
        };
        auto effect = [&](const char* n) {
            for (const auto& [name, x] : rebit.named_effects)
                if (name == n) return x;
            throw std::runtime_error(n);
        };
        const Rational z = 0;
        o.require(m.mu_map.apply(state("|0><0|")) == v({half, half, z, z}), "mu(|0><0|)");
        o.require(m.mu_map.apply(state("|1><1|")) == v({z, z, half, half}), "mu(|1><1|)");
        o.require(m.mu_map.apply(state("|+><+|")) == v({half, z, half, z}), "mu(|+><+|)");
        o.require(m.mu_map.apply(state("|-><-|")) == v({z, half, z, half}), "mu(|-><-|)");
        o.require(m.xi_map.apply(effect("|+><+|")) == v({1, 0, 1, 0}), "xi(|+><+|)");
        o.require(m.xi_map.apply(effect("|0><0|")) == v({1, 1, 0, 0}), "xi(|0><0|)");
        o.require(m.xi_map.apply(effect("1")) == v({1, 1, 1, 1}), "xi(unit)");
        std::size_t pairs = 0;
        for (const auto& [en, e] : rebit.named_effects)
            for (const auto& [sn, s] : rebit.named_states) {
                ++pairs;
                Rational p = model_probability(m, e, s);
                o.require(p == oracle::dot(e, s) && p == trace_probability(e, s), en + " on " + sn);
            }
        o.detail << "golden mu/xi match; " << pairs << " (t,x,z) pairs exact";
    });

    report(4, "no-restriction equivalence", [&](Outcome& o) {
        std::mt19937_64 rng(20240601);
        std::size_t exceptions = 0, simplicial = 0;
        for (int trial = 0; trial < 200; ++trial) {
            std::size_t dim = 2 + trial % 3;
            Gpt g = oracle::random_no_restriction(rng, dim);
            bool emb = embed::decide(g, {false}).embeddable;
            bool simp = is_simplicial(g);
            // Independent check of simpliciality: affinely independent states.
            if (simp != simplex_oracle(g.states.vertices)) ++exceptions;
            if (emb != simp) ++exceptions;
            simplicial += simp;
        }
        o.require(exceptions == 0, std::to_string(exceptions) + " exceptions");
        auto gbit = catalog("gbit").gpt;
        auto vd = embed::decide(gbit);
        o.require(!vd.embeddable, "gbit embeddable");
        o.require(farkas_reverifies(gbit, vd.farkas), "gbit Farkas certificate does not re-verify");
        o.detail << "200 instances, " << simplicial << " simplicial, " << exceptions
                 << " exceptions; gbit NotEmbeddable with a verified certificate";
    });

    report(5, "quotient round trip", [&](Outcome& o) {
        auto t = theories::with_duplicate(theories::rebit(), "+", "+'");
        auto q = quotient::quotient_to_gpt(t);
        auto vd = embed::decide(q.gpt);
        o.require(vd.embeddable, "quotient GPT not embeddable");
        if (!vd.embeddable) return;
        auto lifted = quotient::lift_model(*vd.model, q.maps, t);
        auto ck = quotient::check_ot_model(t, lifted);
        o.require(ck.ok(), "lifted model fails the operational check");
        // Reproduce the table directly.
        std::size_t bad = 0;
        auto effects = t.effect_labels();
        for (std::size_t i = 0; i < effects.size(); ++i)
            for (std::size_t j = 0; j < t.preps.size(); ++j) {
                const auto& mu = lifted.mu.at(t.preps[j]);
                const auto& xi = lifted.xi.at(effects[i]);
                Rational p = 0;
                for (std::size_t k = 0; k < mu.size(); ++k) p += xi[k] * mu[k];
                if (p != t.table(i, j)) ++bad;
            }
        o.require(bad == 0, std::to_string(bad) + " table entries differ");
        o.require(lifted.mu.at("+") == lifted.mu.at("+'"), "duplicates get different distributions");
        auto ctx = lifted;
        ctx.mu["+'"] = ctx.mu.at("0");
        bool raised = false;
        try {
            quotient::project_model(ctx, q.maps, q.gpt.dim);
        } catch (const NotWellDefined&) {
            raised = true;
        }
        o.require(raised, "contextual model projected without NotWellDefined");
        o.detail << effects.size() * t.preps.size() << " table entries reproduced; duplicates agree; "
                 << "contextual projection raises NotWellDefined";
    });

    report(6, "positive quasiprobability iff embeddable", [&](Outcome& o) {
        std::vector<std::pair<std::string, CatalogParams>> entries = {
            {"rebit", {}},
            {"gbit", {}},
            {"restricted_square", {}},
            {"restricted_square", {{"effects", "0"}}},
            {"polygon", {{"n", "3"}}},
            {"polygon", {{"n", "5"}}},
            {"polygon", {{"n", "6"}}},
        };
        for (const char* d : {"1", "2", "3", "4"}) entries.push_back({"classical", {{"d", d}}});
        std::size_t pos = 0, neg = 0;
        for (const auto& [name, params] : entries) {
            std::string tag = name;
            for (const auto& [k, val] : params) tag += " " + k + "=" + val;
            Gpt g = catalog(name, params).gpt;
            auto vd = embed::decide(g);
            if (vd.embeddable) {
                // A model is a positive representation, and back.
                auto rep = quasiprob::from_model(*vd.model);
                o.require(quasiprob::is_positive(g, rep) && quasiprob::check(g, rep).ok(), tag + ": rep not positive");
                auto back = quasiprob::to_model(g, rep);
                o.require(back == *vd.model, tag + ": to_model(from_model(m)) != m");
                o.require(quasiprob::from_model(back) == rep, tag + ": from_model(to_model(q)) != q");
                ++pos;
            } else {
                // Any positive representation would be a model, which the certificate excludes.
                o.require(farkas_reverifies(g, vd.farkas), tag + ": certificate does not re-verify");
                ++neg;
            }
        }
        o.detail << entries.size() << " catalog entries: " << pos << " embeddable with positive reps round-tripping "
                 << "bitwise, " << neg << " excluded by verified certificates";
    });

    report(7, "support dimension bound", [&](Outcome& o) {
        std::mt19937_64 rng(77);
        std::size_t checked = 0, embeddable = 0, worst = 0;
        for (int trial = 0; trial < 200; ++trial) {
            std::size_t dim = 2 + trial % 3;
            Gpt g = trial % 4 == 3 ? oracle::random_no_restriction(rng, dim) : oracle::random_restricted(rng, dim);
            auto vd = embed::decide(g, {false});
            ++checked;
            if (!vd.embeddable) continue;
            ++embeddable;
            std::size_t r = vd.accessible_dim;
            worst = std::max(worst, vd.lp_support);
            if (vd.lp_support > r * r)
                o.require(false, "trial " + std::to_string(trial) + ": support " + std::to_string(vd.lp_support) +
                                     " > " + std::to_string(r * r));
        }
        o.require(embeddable > 0, "no embeddable instances generated");
        o.detail << checked << " instances, " << embeddable << " basic solutions, max support " << worst;
    });

    report(8, "gbit robustness threshold", [&](Outcome& o) {
        auto gbit = catalog("gbit").gpt;
        auto a = app::robustness_radius(gbit, 1e-3);
        auto b = app::robustness_radius(gbit, 1e-3);
        const Rational regression(599, 2048);
        const Rational step(1, 1000);
        o.require(a.r_star == b.r_star && a.lower == b.lower && a.upper == b.upper, "runs differ");
        o.require(a.r_star == regression, "r* = " + to_string(a.r_star) + ", recorded " + to_string(regression));
        o.require(a.upper - a.lower <= step, "bracket wider than 1e-3");
        o.require(embed::decide(app::depolarize(gbit, a.r_star + step), {false}).embeddable, "g(r*+1e-3) not embeddable");
        o.require(!embed::decide(app::depolarize(gbit, a.r_star - step), {false}).embeddable, "g(r*-1e-3) embeddable");
        o.detail << "r* = " << to_string(a.r_star) << " (" << a.r_star.get_d() << ") in two runs";
    });

    report(9, "weak-nonclassicality flags", [&](Outcome& o) {
        auto check = [&](const std::string& tag, const Gpt& g, bool expected) {
            auto f = weak_nonclassicality(g);
            o.require(f.incompatibility == expected && f.mixture_ambiguity == expected, tag + " flags");
            // Independent characterizations: states a simplex, effects a parallelotope.
            o.require(f.mixture_ambiguity == !simplex_oracle(g.states.vertices), tag + " simplex oracle");
            o.require(f.incompatibility == !parallelotope_oracle(g.effects.vertices, g.dim), tag + " cube oracle");
        };
        for (std::size_t d = 1; d <= 4; ++d) check("simplicial d=" + std::to_string(d), canonical_simplicial(d).gpt, false);
        check("rebit", rebit.gpt, true);
        check("gbit", catalog("gbit").gpt, true);
        o.detail << "simplicial d=1..4 {false,false}; rebit, gbit {true,true}; oracles agree";
    });

    return failures == 0 ? 0 : 1;
}
