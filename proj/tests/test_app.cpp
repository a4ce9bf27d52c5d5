#include "gptnc/app.hpp"
#include "gptnc/errors.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "theories.hpp"

#include <doctest.h>

#include <random>

using namespace gptnc;
using namespace gptnc::app;
using test::half;
using test::v;

namespace {

std::string csv_of(const Gpt& g) { return quotient::table_to_csv(quotient::theory_from_gpt(g)); }

} // namespace

TEST_CASE("exact rebit CSV runs through to the catalog rebit") {
    auto t = theories::rebit();
    auto nt = ingest(quotient::table_to_csv(t), std::nullopt, 0);
    auto q = quotient::quotient_to_gpt(nt.theory);
    std::vector<Vector> from, to;
    auto c = catalog("rebit");
    for (const auto& [label, s] : std::vector<std::pair<std::string, std::string>>{
             {"0", "|0><0|"}, {"1", "|1><1|"}, {"+", "|+><+|"}, {"-", "|-><-|"}}) {
        from.push_back(q.maps.state_of.at(label));
        for (const auto& [n, x] : c.named_states)
            if (n == s) to.push_back(x);
    }
    CHECK(verify_equivalence(q.gpt, c.gpt, theories::maps_between(from, to, 3)));
    auto vd = verdict(nt);
    CHECK(vd.outcome == Outcome::Classical);
    CHECK(vd.rank == 3);
}

TEST_CASE("perturbed rebit CSV keeps rank 3 under a coarse cutoff") {
    auto t = theories::rebit();
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> noise(-1000, 1000);
    for (std::size_t i = 0; i < t.table.rows(); ++i)
        for (std::size_t j = 0; j < t.table.cols(); ++j) {
            Rational shift = test::q(noise(rng), 1000000);  // |shift| <= 1e-3
            Rational x = t.table(i, j) + shift;
            t.table(i, j) = x < 0 ? Rational(0) : x;
        }
    auto nt = ingest(quotient::table_to_csv(t), std::nullopt, Rational(1, 500));
    auto q = quotient::quotient_to_gpt(nt.theory, 1e-2);
    CHECK(q.report.rank == 3);
    CHECK(oracle::rank(t.table.row_list()) == 4);
}

TEST_CASE("ingestion errors") {
    CHECK_THROWS_AS(ingest("prep,0|Z,1|Z\nP,1,1/2\n", std::nullopt, 0), NormalizationViolation);
    CHECK_THROWS_AS(ingest("prep,0|Z,1|Z\nP,3/4,3/4\n", std::nullopt, Rational(1, 10)), NormalizationViolation);
    CHECK_THROWS_AS(ingest("prep,0|Z,1|Z\nP,3/2,-1/2\n", std::nullopt, 0), MalformedInput);
    CHECK_THROWS_AS(ingest("prep,0|Z,1|Z\nP,1,0\n", std::string("{not json"), 0), MalformedInput);
    CHECK_THROWS_AS(ingest("prep,0|Z,1|Z\nP,1,0\n", std::nullopt, -1), BadParams);
    // Within epsilon is accepted.
    CHECK_NOTHROW(ingest("prep,0|Z,1|Z\nP,0.501,0.5\n", std::nullopt, Rational(1, 1000)));
}

TEST_CASE("relations travel with the CSV") {
    auto t = theories::with_mixture(theories::rebit(), "m", half, "0", "+");
    std::string rel = R"({"mixtures":[{"target":"m","weight":"1/2","first":"0","second":"+"}],
                          "coarse_grainings":[{"target":"1|D","first":"0|Z","second":"1|Z"}]})";
    auto nt = ingest(quotient::table_to_csv(t), rel, 0);
    CHECK(nt.theory.mixtures.size() == 1);
    CHECK(nt.theory.coarse_grainings.size() == 1);
    std::string bad = R"({"mixtures":[{"target":"m","weight":"1/3","first":"0","second":"+"}]})";
    auto wrong = ingest(quotient::table_to_csv(t), bad, 0);
    CHECK_THROWS_AS(quotient::check_theory(wrong.theory), InconsistentTable);
}

TEST_CASE("depolarizing map") {
    auto gbit = catalog("gbit").gpt;
    CHECK(depolarize(gbit, 0).states.vertices == gbit.states.vertices);
    auto full = depolarize(gbit, 1);
    CHECK(full.states.vertices == std::vector<Vector>{v({1, 0, 0})});
    auto g = depolarize(gbit, half);
    CHECK(validate(g).ok());
    CHECK(oracle::pairs_are_probabilities(g.effects.vertices, g.states.vertices));
    // States shrink to half the square.
    CHECK(oracle::same_points(g.states.vertices,
                              {v({1, half, half}), v({1, half, -half}), v({1, -half, half}), v({1, -half, -half})}));
    CHECK_THROWS_AS(depolarize(gbit, 2), BadParams);
}

TEST_CASE("robustness radius") {
    CHECK(robustness_radius(catalog("rebit").gpt).r_star == 0);
    for (std::size_t d = 1; d <= 4; ++d) CHECK(robustness_radius(canonical_simplicial(d).gpt).r_star == 0);
    auto gbit = catalog("gbit").gpt;
    auto rb = robustness_radius(gbit);
    CHECK(rb.r_star > 0);
    CHECK(rb.r_star < 1);
    CHECK(rb.upper - rb.lower <= Rational(1, 1000));
    CHECK(embed::decide(depolarize(gbit, rb.upper), {false}).embeddable);
    CHECK_FALSE(embed::decide(depolarize(gbit, rb.lower), {false}).embeddable);
    // The threshold 1 - 1/sqrt(2) lies inside the bracket.
    CHECK(rb.lower.get_d() < 1 - 1 / std::sqrt(2.0));
    CHECK(rb.upper.get_d() > 1 - 1 / std::sqrt(2.0));
}

TEST_CASE("robustness grows with the effect set") {
    auto gbit = catalog("gbit").gpt;
    auto sub = catalog("restricted_square", {{"effects", "0,1"}}).gpt;
    CHECK(robustness_radius(sub).r_star <= robustness_radius(gbit).r_star);
}

TEST_CASE("verdicts from exact tables") {
    auto gbit = verdict(ingest(csv_of(catalog("gbit").gpt), std::nullopt, 0));
    CHECK(gbit.outcome == Outcome::Nonclassical);
    REQUIRE(gbit.inner.has_value());
    CHECK(embed::verify_certificate(depolarize(gbit.point, gbit.radius), gbit.inner->farkas));
    CHECK(gbit.margin > 0);

    auto cl = verdict(ingest(csv_of(canonical_simplicial(3).gpt), std::nullopt, 0));
    CHECK(cl.outcome == Outcome::Classical);
    REQUIRE(cl.outer.has_value());
    CHECK(cl.outer->embeddable);
}

TEST_CASE("noise never makes gbit look more nonclassical") {
    std::string csv = csv_of(catalog("gbit").gpt);
    bool left_nonclassical = false;
    for (Rational eps : {Rational(0), Rational(1, 1000), Rational(1, 100), Rational(1, 10), Rational(3, 10)}) {
        CAPTURE(eps.get_d());
        auto vd = verdict(ingest(csv, std::nullopt, eps));
        if (vd.outcome != Outcome::Nonclassical) left_nonclassical = true;
        else CHECK_FALSE(left_nonclassical);
        CHECK(vd.outcome != Outcome::Classical);
    }
    CHECK(verdict(ingest(csv, std::nullopt, Rational(1, 10))).outcome != Outcome::Nonclassical);
}

TEST_CASE("expansion keeps a valid GPT") {
    auto rebit = catalog("rebit").gpt;
    auto big = expand(rebit, Rational(1, 10));
    CHECK(validate(big).ok());
    for (const auto& s : rebit.states.vertices) CHECK(geometry::contains(big.states, s));
    CHECK(expand(rebit, 0).states.vertices == rebit.states.vertices);
    CHECK_THROWS_AS(expand(rebit, -1), BadParams);
}
