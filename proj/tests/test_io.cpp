#include "gptnc/errors.hpp"
#include "gptnc/io.hpp"
#include "support.hpp"
#include "theories.hpp"

#include <doctest.h>

using namespace gptnc;
using namespace gptnc::io;
using test::v;

TEST_CASE("scalars") {
    CHECK(rational_from(Json("3/4")) == Rational(3, 4));
    CHECK(rational_from(Json(2)) == 2);
    CHECK(rational_from(Json(0.25)) == Rational(1, 4));
    CHECK(rational_from(Json("-1e-3")) == Rational(-1, 1000));
    CHECK(to_json(Rational(-5, 10)) == Json("-1/2"));
    CHECK_THROWS_AS(rational_from(Json::array()), MalformedInput);
}

TEST_CASE("GPT JSON round trip") {
    for (const char* name : {"rebit", "gbit"}) {
        Gpt g = catalog(name).gpt;
        Gpt back = gpt_from(parse(to_json(g).dump()));
        CHECK(back.dim == g.dim);
        CHECK(back.unit == g.unit);
        CHECK(back.states.vertices == g.states.vertices);
        CHECK(back.effects.vertices == g.effects.vertices);
        CHECK(back.meta == g.meta);
    }
}

TEST_CASE("bodies can be given by facets alone") {
    Json j = {{"dim", 2},
              {"facets",
               {{{"normal", {1, 0}}, {"offset", 1}},
                {{"normal", {-1, 0}}, {"offset", 0}},
                {{"normal", {0, 1}}, {"offset", 1}},
                {{"normal", {0, -1}}, {"offset", 0}}}}};
    auto b = body_from(j);
    CHECK(b.vertices == std::vector<Vector>{v({0, 0}), v({0, 1}), v({1, 0}), v({1, 1})});
}

TEST_CASE("models, witnesses and representations round trip exactly") {
    auto rebit = catalog("rebit");
    CHECK(model_from(parse(to_json(*rebit.model).dump())) == *rebit.model);
    auto w = embed::model_to_witness(*rebit.model);
    CHECK(witness_from(parse(to_json(w).dump())) == w);
    auto q = quasiprob::from_model(*rebit.model);
    CHECK(quasirep_from(parse(to_json(q).dump())) == q);
}

TEST_CASE("quotient artifacts round trip") {
    auto t = theories::rebit();
    auto q = quotient::quotient_to_gpt(t);
    auto maps = maps_from(to_json(q.maps));
    CHECK(maps.state_of == q.maps.state_of);
    CHECK(maps.effect_of == q.maps.effect_of);

    quotient::OtModel m;
    m.d = 2;
    m.mu = {{"P", v({1, 0})}};
    m.xi = {{"0|Z", v({1, 0})}};
    auto back = ot_model_from(to_json(m));
    CHECK(back.mu == m.mu);
    CHECK(back.xi == m.xi);

    auto mix = theories::with_mixture(t, "m", Rational(1, 3), "0", "+");
    quotient::OperationalTheory fresh = t;
    relations_from(relations_to_json(mix), fresh);
    REQUIRE(fresh.mixtures.size() == 1);
    CHECK(fresh.mixtures[0].weight == Rational(1, 3));
}

TEST_CASE("pairs accept both spellings") {
    auto p = pairs_from(parse(R"([{"v":[1,0],"h":[1,0]}, [[0,1],["1/2",0]]])"));
    REQUIRE(p.size() == 2);
    CHECK(p[1].second == v({Rational(1, 2), 0}));
    CHECK_THROWS_AS(pairs_from(parse(R"([[1,2,3]])")), MalformedInput);
}

TEST_CASE("malformed documents") {
    CHECK_THROWS_AS(parse("{"), MalformedInput);
    CHECK_THROWS_AS(gpt_from(parse(R"({"dim":2})")), MalformedInput);
    CHECK_THROWS_AS(gpt_from(parse(R"({"dim":-1,"unit":[]})")), MalformedInput);
    CHECK_THROWS_AS(body_from(parse(R"({"dim":2})")), MalformedInput);
    CHECK_THROWS_AS(body_from(parse(R"({"dim":2,"vertices":[[1,2,3]]})")), DimensionMismatch);
    CHECK_THROWS_AS(matrix_from(parse(R"([[1,2],[3]])")), MalformedInput);
    CHECK_THROWS_AS(model_from(parse(R"({"d":2,"mu_map":[[1]],"xi_map":[[1]]})")), DimensionMismatch);
}

TEST_CASE("verdict JSON shape") {
    auto e = to_json(embed::decide(catalog("rebit").gpt));
    CHECK(e.at("embeddable") == true);
    CHECK(e.contains("iota"));
    CHECK(e.contains("kappa"));
    CHECK(e.at("lower_bound") == 4);
    auto n = to_json(embed::decide(catalog("gbit").gpt));
    CHECK(n.at("embeddable") == false);
    CHECK(n.contains("farkas"));
    CHECK_FALSE(n.contains("iota"));
}
