#include "gptnc/errors.hpp"
#include "gptnc/gpt.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace gptnc;
using test::half;
using test::v;

namespace {

Vector named(const std::vector<std::pair<std::string, Vector>>& list, const std::string& name) {
    for (const auto& [n, x] : list)
        if (n == name) return x;
    FAIL("no entry named " << name);
    return {};
}

} // namespace

TEST_CASE("rebit coordinates reproduce density-matrix traces") {
    auto rebit = catalog("rebit");
    // Kets for |0>, |1>, |+>, |->; the 1/sqrt2 cancels inside the projector.
    std::vector<std::pair<std::string, oracle::Mat2>> kets = {{"|0><0|", oracle::projector(1, 0)},
                                                             {"|1><1|", oracle::projector(0, 1)},
                                                             {"|+><+|", oracle::projector(1, 1)},
                                                             {"|-><-|", oracle::projector(1, -1)}};
    for (const auto& [sn, rho] : kets) {
        Vector s = named(rebit.named_states, sn);
        // rho = (t I + x X + z Z) / 2 recovers the state coordinates.
        auto back = oracle::pauli_sum(s);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(back[i][j] / 2 == rho[i][j]);
        for (const auto& [en, proj] : kets) {
            Vector e = named(rebit.named_effects, en);
            CHECK(dot(e, s) == oracle::trace(oracle::mul(proj, rho)));
        }
    }
    CHECK(dot(named(rebit.named_effects, "|0><0|"), named(rebit.named_states, "|+><+|")) == half);
}

TEST_CASE("validate") {
    auto rebit = catalog("rebit");
    CHECK(validate(rebit.gpt).ok());
    CHECK(validate(rebit.gpt).state_rank == 3);

    SUBCASE("scaled state breaks normalization") {
        Gpt g = rebit.gpt;
        g.states.vertices[0] = Rational(11, 10) * g.states.vertices[0];
        auto r = validate(g);
        CHECK_FALSE(r.ok());
        CHECK_FALSE(r.get("normalization").passed);
    }
    SUBCASE("effect outside the dual") {
        Gpt g = rebit.gpt;
        g.effects.vertices.push_back(Rational(2) * g.unit);
        auto r = validate(g);
        CHECK_FALSE(r.ok());
        CHECK_FALSE(r.get("effects_in_dual").passed);
    }
}

TEST_CASE("every catalog entry validates and sits inside its dual") {
    std::vector<std::pair<std::string, CatalogParams>> entries = {
        {"rebit", {}},           {"gbit", {}},
        {"classical", {{"d", "1"}}}, {"classical", {{"d", "4"}}},
        {"polygon", {{"n", "3"}}},   {"polygon", {{"n", "6"}}},
        {"polygon", {{"n", "5"}, {"restrict", "0,1,2"}}},
        {"restricted_square", {}},   {"restricted_square", {{"effects", "0,1,2,3"}}}};
    for (const auto& [name, params] : entries) {
        CAPTURE(name);
        auto c = catalog(name, params);
        CHECK(validate(c.gpt).ok());
        auto dual = geometry::dual_body(c.gpt.states, c.gpt.unit);
        for (const auto& e : c.gpt.effects.vertices) CHECK(geometry::contains(dual, e));
        if (is_simplicial(c.gpt)) CHECK(satisfies_no_restriction(c.gpt));
    }
}

TEST_CASE("catalog errors") {
    CHECK_THROWS_AS(catalog("qutrit"), UnknownName);
    CHECK_THROWS_AS(catalog("classical", {{"d", "0"}}), BadParams);
    CHECK_THROWS_AS(catalog("classical", {{"d", "x"}}), BadParams);
    CHECK_THROWS_AS(catalog("polygon", {{"sides", "4"}}), BadParams);
    CHECK_THROWS_AS(catalog("restricted_square", {{"effects", "99"}}), BadParams);
}

TEST_CASE("canonical simplicial GPTs") {
    auto s2 = canonical_simplicial(2);
    CHECK(s2.gpt.states.vertices.size() == 2);
    CHECK(s2.gpt.effects.vertices.size() == 4);
    auto s1 = canonical_simplicial(1);
    CHECK(s1.gpt.states.vertices == std::vector<Vector>{v({1})});
    CHECK(oracle::same_points(s1.gpt.effects.vertices, {v({0}), v({1})}));
    auto s3 = canonical_simplicial(3);
    CHECK(s3.gpt.effects.vertices.size() == 8);
    CHECK(geometry::is_hypercube(s3.gpt.effects));
    CHECK_THROWS_AS(canonical_simplicial(0), InvalidDimension);
    auto c2 = catalog("classical", {{"d", "2"}});
    CHECK(c2.gpt.states.vertices == s2.gpt.states.vertices);
    CHECK(c2.gpt.effects.vertices == s2.gpt.effects.vertices);
}

TEST_CASE("simpliciality and the no-restriction hypothesis") {
    CHECK(is_simplicial(canonical_simplicial(3).gpt));
    CHECK_FALSE(is_simplicial(catalog("rebit").gpt));
    CHECK_FALSE(is_simplicial(catalog("gbit").gpt));
    CHECK(satisfies_no_restriction(catalog("gbit").gpt));
    CHECK_FALSE(satisfies_no_restriction(catalog("rebit").gpt));
    for (std::size_t d = 1; d <= 5; ++d) CHECK(satisfies_no_restriction(canonical_simplicial(d).gpt));
}

TEST_CASE("gbit effects are the brute-force dual of the square") {
    auto g = catalog("gbit").gpt;
    CHECK(oracle::same_points(g.effects.vertices, oracle::dual_vertices(g.states.vertices)));
    // 0, u and the four edge functionals.
    CHECK(g.effects.vertices.size() == 6);
}

TEST_CASE("weak nonclassicality flags") {
    for (std::size_t d = 1; d <= 5; ++d) CHECK(weak_nonclassicality(canonical_simplicial(d).gpt) == WeakNonclassicality{});
    CHECK(weak_nonclassicality(catalog("rebit").gpt) == WeakNonclassicality{true, true});
    CHECK(weak_nonclassicality(catalog("gbit").gpt) == WeakNonclassicality{true, true});
}

TEST_CASE("equivalence verification") {
    auto rebit = catalog("rebit").gpt;
    GptEquivalenceMaps id{Matrix::identity(3), Matrix::identity(3)};
    CHECK(verify_equivalence(rebit, rebit, id));

    // Quarter turn in the (x, z) plane; effects transform by the inverse transpose,
    // which for a rotation is the rotation itself.
    Matrix rot = Matrix::from_rows({v({1, 0, 0}), v({0, 0, -1}), v({0, 1, 0})});
    Gpt turned = make_gpt(3, geometry::transform(rebit.states, rot).vertices,
                          geometry::transform(rebit.effects, rot).vertices, rebit.unit);
    GptEquivalenceMaps maps{rot, rot};
    CHECK(verify_equivalence(rebit, turned, maps));
    GptEquivalenceMaps inv{rot.transpose(), rot.transpose()};
    CHECK(verify_equivalence(turned, rebit, inv));

    // A shear on states needs the inverse transpose on effects.
    Matrix shear = Matrix::from_rows({v({1, 0, 0}), v({1, 1, 0}), v({0, 0, 1})});
    Matrix shear_it = inverse(shear)->transpose();
    Gpt sheared = make_gpt(3, geometry::transform(rebit.states, shear).vertices,
                           geometry::transform(rebit.effects, shear_it).vertices, shear_it.apply(rebit.unit));
    CHECK(verify_equivalence(rebit, sheared, {shear, shear_it}));
    CHECK_FALSE(verify_equivalence(rebit, sheared, {shear, shear}));

    auto s4 = canonical_simplicial(4).gpt;
    Matrix any(4, 3);
    CHECK_FALSE(verify_equivalence(rebit, s4, {any, any}));
    CHECK_THROWS_AS(verify_equivalence(rebit, s4, {Matrix::identity(3), Matrix::identity(3)}), DimensionMismatch);
}

TEST_CASE("probability table orientation") {
    auto g = canonical_simplicial(2).gpt;
    Matrix t = probability_table(g);
    CHECK(t.rows() == g.effects.vertices.size());
    CHECK(t.cols() == g.states.vertices.size());
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j) CHECK(t(i, j) == dot(g.effects.vertices[i], g.states.vertices[j]));
}
