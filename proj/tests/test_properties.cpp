// Randomized invariants. Every generator is seeded, so failures replay.

#include "gptnc/app.hpp"
#include "gptnc/embed.hpp"
#include "gptnc/geometry.hpp"
#include "gptnc/quasiprob.hpp"
#include "gptnc/quotient.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace gptnc;
using namespace gptnc::geometry;
using test::v;

namespace {

std::vector<Vector> random_points(std::mt19937_64& rng, std::size_t dim, std::size_t n) {
    std::uniform_int_distribution<int> coord(-4, 4);
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < n; ++i) {
        Vector p;
        for (std::size_t k = 0; k < dim; ++k) p.push_back(coord(rng));
        pts.push_back(p);
    }
    return pts;
}

Matrix random_invertible(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> coord(-2, 2);
    for (;;) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = coord(rng);
        if (oracle::rank(m.row_list()) == n) return m;
    }
}

} // namespace

TEST_CASE("double dual contains the body") {
    // The effect body holds 0, so the second dual is taken without a
    // normalizing functional: {x : <x, e> in [0, 1] for every effect e}.
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t dim = 2 + trial % 3;
        Gpt g = oracle::random_no_restriction(rng, dim);
        std::vector<Facet> hs;
        for (const auto& e : g.effects.vertices) {
            if (is_zero(e)) continue;
            hs.push_back({e, 1});
            hs.push_back({Rational(-1) * e, 0});
        }
        ConvexBody dd = body_from_facets(dim, hs);
        for (const auto& s : g.states.vertices) CHECK(contains(dd, s));
        CHECK(oracle::pairs_are_probabilities(g.effects.vertices, g.states.vertices));
        CHECK(dual_body(g.states, g.unit).vertices == g.effects.vertices);
    }
}

TEST_CASE("library duals match the brute-force oracle") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t dim = 2 + trial % 2;
        Gpt g = oracle::random_no_restriction(rng, dim);
        CHECK(oracle::same_points(g.effects.vertices, oracle::dual_vertices(g.states.vertices)));
    }
}

TEST_CASE("extremal rays are idempotent") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t dim = 3 + trial % 2;
        std::vector<Vector> gens;
        for (auto& p : random_points(rng, dim - 1, dim + 3)) {
            Vector g{Rational(5)};
            g.insert(g.end(), p.begin(), p.end());
            gens.push_back(g);
        }
        if (oracle::rank(gens) < dim) continue;
        auto once = extremal_rays(Cone{dim, gens, {}});
        auto twice = extremal_rays(Cone{dim, once, {}});
        CHECK(oracle::same_points(once, twice));
        // Every input generator is a nonnegative combination: it lies in the cone's facets.
        auto f = cone_facets(once, dim);
        for (const auto& g : gens)
            for (const auto& n : f.normals) CHECK(oracle::dot(n, g) >= 0);
    }
}

TEST_CASE("vertex-facet round trip") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t dim = 2 + trial % 3;
        auto pts = random_points(rng, dim, dim + 4);
        if (affine_dimension(pts) < dim) continue;
        ConvexBody b = make_body(dim, pts);
        CHECK(body_from_facets(dim, b.facets, b.equations).vertices == b.vertices);
        for (const auto& p : pts) CHECK(contains(b, p));
    }
}

TEST_CASE("shrinking nests") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto pts = random_points(rng, 2, 6);
        if (affine_dimension(pts) < 2) continue;
        ConvexBody b = make_body(2, pts);
        Vector c = barycenter(b);
        Rational r1 = test::q(trial % 5, 10), r2 = test::q(trial % 5 + 3, 10);
        ConvexBody outer = shrink_toward(b, c, r1), inner = shrink_toward(b, c, r2);
        for (const auto& x : inner.vertices) CHECK(contains(outer, x));
    }
}

TEST_CASE("equivalence is symmetric under inverted maps") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 15; ++trial) {
        std::size_t dim = 2 + trial % 3;
        Gpt g = oracle::random_no_restriction(rng, dim);
        Matrix w = random_invertible(rng, dim);
        Matrix e = inverse(w)->transpose();
        Gpt h = make_gpt(dim, transform(g.states, w).vertices, transform(g.effects, e).vertices, e.apply(g.unit));
        CHECK(verify_equivalence(g, h, {w, e}));
        CHECK(verify_equivalence(h, g, {*inverse(w), *inverse(e)}));
    }
}

TEST_CASE("decide is sound on random restricted GPTs") {
    std::mt19937_64 rng(7);
    int embeddable = 0, not_embeddable = 0;
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t dim = 2 + trial % 3;
        Gpt g = oracle::random_restricted(rng, dim);
        auto vd = embed::decide(g);
        if (vd.embeddable) {
            ++embeddable;
            CHECK(embed::verify_witness(g, *vd.witness));
            CHECK(embed::check_model(g, *vd.model).ok());
            CHECK(embed::min_d_lower_bound(g) <= vd.model->d);
            CHECK(vd.lp_support <= vd.accessible_dim * vd.accessible_dim);
            CHECK(embed::witness_to_model(embed::model_to_witness(*vd.model)) == *vd.model);
            CHECK(quasiprob::is_positive(g, quasiprob::from_model(*vd.model)));
        } else {
            ++not_embeddable;
            CHECK(embed::verify_certificate(g, vd.farkas));
        }
    }
    CHECK(embeddable > 0);
    CHECK(not_embeddable > 0);
}

TEST_CASE("no-restriction GPTs of full dimension are never witnessed by d = dim unless simplicial") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t dim = 2 + trial % 3;
        Gpt g = oracle::random_no_restriction(rng, dim);
        auto vd = embed::decide(g);
        if (vd.embeddable && vd.witness->d == dim) CHECK(is_simplicial(g));
        CHECK(vd.embeddable == is_simplicial(g));
    }
}

TEST_CASE("embeddability is inherited by sub-GPTs through the same witness") {
    std::mt19937_64 rng(9);
    auto rebit = catalog("rebit").gpt;
    auto w = *embed::decide(rebit).witness;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Vector> states, effects = {Vector(3), rebit.unit};
        for (const auto& s : rebit.states.vertices)
            if (rng() % 2 || states.empty()) states.push_back(s);
        for (const auto& e : rebit.effects.vertices)
            if (rng() % 2) effects.push_back(e);
        Gpt sub = make_gpt(3, states, effects, rebit.unit);
        CHECK(embed::verify_witness(sub, w));
        CHECK(embed::decide(sub).embeddable);
    }
}

TEST_CASE("mixtures and coarse-grainings survive quotienting") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 10; ++trial) {
        Gpt g = oracle::random_no_restriction(rng, 3);
        auto t = quotient::theory_from_gpt(g);
        // Mix two random preparations with a random weight.
        std::size_t a = rng() % t.preps.size(), b = rng() % t.preps.size();
        Rational w = test::q(static_cast<long>(rng() % 9) + 1, 10);
        Matrix table(t.table.rows(), t.table.cols() + 1);
        for (std::size_t i = 0; i < t.table.rows(); ++i) {
            for (std::size_t j = 0; j < t.table.cols(); ++j) table(i, j) = t.table(i, j);
            table(i, t.table.cols()) = w * t.table(i, a) + (1 - w) * t.table(i, b);
        }
        t.table = table;
        t.preps.push_back("mix");
        t.mixtures.push_back({"mix", w, t.preps[a], t.preps[b]});
        // Binary test on effect 0 coarse-grains to the unit.
        t.measurements.push_back({"unit", {"1"}});
        Matrix with_unit(t.table.rows() + 1, t.table.cols());
        for (std::size_t i = 0; i < t.table.rows(); ++i)
            for (std::size_t j = 0; j < t.table.cols(); ++j) with_unit(i, j) = t.table(i, j);
        for (std::size_t j = 0; j < t.table.cols(); ++j) with_unit(t.table.rows(), j) = 1;
        t.table = with_unit;
        t.coarse_grainings.push_back({"1|unit", "0|m0", "1|m0"});
        auto q = quotient::quotient_to_gpt(t);
        const auto& s = q.maps.state_of;
        CHECK(s.at("mix") == w * s.at(t.preps[a]) + (1 - w) * s.at(t.preps[b]));
        const auto& e = q.maps.effect_of;
        CHECK(e.at("1|unit") == e.at("0|m0") + e.at("1|m0"));
        CHECK(quotient::verify_quotient(t, q.gpt, q.maps));
    }
}

TEST_CASE("lifted models pass the operational checks on random embeddable GPTs") {
    std::mt19937_64 rng(12);
    int lifted = 0;
    for (int trial = 0; trial < 20 && lifted < 5; ++trial) {
        Gpt g = oracle::random_restricted(rng, 3);
        auto t = quotient::theory_from_gpt(g);
        auto q = quotient::quotient_to_gpt(t);
        auto vd = embed::decide(q.gpt);
        if (!vd.embeddable) continue;
        ++lifted;
        auto m = quotient::lift_model(*vd.model, q.maps, t);
        CHECK(quotient::check_ot_model(t, m).ok());
        CHECK(quotient::project_model(m, q.maps, q.gpt.dim) == *vd.model);
    }
    CHECK(lifted > 0);
}
