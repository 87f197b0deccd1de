#include <doctest.h>

#include <iga/knots.hpp>

#include <vector>

using iga::Index;
using iga::KnotVector;
using iga::Real;

TEST_CASE("open knot vector accessors") {
    KnotVector kv(2, {0.0, 0.0, 0.0, 0.25, 0.5, 0.5, 0.75, 1.0, 1.0, 1.0});
    CHECK(kv.degree() == 2);
    CHECK(kv.size() == 10);
    CHECK(kv.num_basis() == 7);
    CHECK(kv.param_begin() == doctest::Approx(0.0));
    CHECK(kv.param_end() == doctest::Approx(1.0));
    CHECK(kv[3] == doctest::Approx(0.25));
    CHECK(kv.data().size() == 10);
}

TEST_CASE("constructor validation") {
    // Decreasing knots.
    CHECK_THROWS_AS(KnotVector(1, {0.0, 0.0, 0.5, 0.25, 1.0, 1.0}), iga::argument_error);
    // End multiplicity below degree + 1 (not clamped).
    CHECK_THROWS_AS(KnotVector(2, {0.0, 0.0, 0.5, 1.0, 1.0, 1.0}), iga::argument_error);
    // Interior multiplicity exceeding the degree.
    CHECK_THROWS_AS(KnotVector(2, {0.0, 0.0, 0.0, 0.5, 0.5, 0.5, 1.0, 1.0, 1.0}),
                    iga::argument_error);
    // Too few knots to carry a single basis function.
    CHECK_THROWS_AS(KnotVector(2, {0.0, 0.0, 1.0, 1.0}), iga::argument_error);
    // Negative degree.
    CHECK_THROWS_AS(KnotVector(-1, {0.0, 1.0}), iga::argument_error);
}

TEST_CASE("find_span basics") {
    KnotVector kv(2, {0.0, 0.0, 0.0, 0.25, 0.5, 0.5, 0.75, 1.0, 1.0, 1.0});
    CHECK(iga::find_span(kv, 0.0) == 2);
    CHECK(iga::find_span(kv, 0.1) == 2);
    CHECK(iga::find_span(kv, 0.25) == 3);
    CHECK(iga::find_span(kv, 0.3) == 3);
    // 0.5 is a double knot: the span [kv[4], kv[5]) is empty, so the containing
    // span starts at index 5.
    CHECK(iga::find_span(kv, 0.5) == 5);
    CHECK(iga::find_span(kv, 0.6) == 5);
    CHECK(iga::find_span(kv, 0.8) == 6);
    // Right end maps to the last non-empty span.
    CHECK(iga::find_span(kv, 1.0) == 6);
    CHECK_THROWS_AS(iga::find_span(kv, -0.01), iga::domain_error);
    CHECK_THROWS_AS(iga::find_span(kv, 1.01), iga::domain_error);
}

TEST_CASE("find_span agrees with a linear scan on a fine uniform vector") {
    KnotVector kv = iga::uniform_open_knots(3, 16, -1.0, 3.0);
    for (int k = 0; k <= 400; ++k) {
        Real xi = -1.0 + 4.0 * static_cast<Real>(k) / 400.0;
        Index s = iga::find_span(kv, xi);
        CHECK(kv[s] <= xi);
        if (xi < kv.param_end()) {
            CHECK(xi < kv[s + 1]);
        } else {
            CHECK(kv[s + 1] == doctest::Approx(kv.param_end()));
        }
    }
}

TEST_CASE("uniform_open_knots layout") {
    KnotVector kv = iga::uniform_open_knots(2, 4);
    // p+1 copies of each end plus 3 interior knots.
    REQUIRE(kv.size() == 9);
    CHECK(kv.num_basis() == 6);
    std::vector<Real> expect = {0.0, 0.0, 0.0, 0.25, 0.5, 0.75, 1.0, 1.0, 1.0};
    for (Index i = 0; i < kv.size(); ++i) {
        CHECK(kv[i] == doctest::Approx(expect[static_cast<std::size_t>(i)]).epsilon(1e-15));
    }

    KnotVector shifted = iga::uniform_open_knots(1, 2, 2.0, 6.0);
    CHECK(shifted.param_begin() == doctest::Approx(2.0));
    CHECK(shifted.param_end() == doctest::Approx(6.0));
    CHECK(shifted[2] == doctest::Approx(4.0));

    CHECK_THROWS_AS(iga::uniform_open_knots(0, 4), iga::argument_error);
    CHECK_THROWS_AS(iga::uniform_open_knots(2, 0), iga::argument_error);
    CHECK_THROWS_AS(iga::uniform_open_knots(2, 4, 1.0, 1.0), iga::argument_error);
}

TEST_CASE("nonempty_spans and distinct_knots") {
    KnotVector kv(2, {0.0, 0.0, 0.0, 0.25, 0.5, 0.5, 0.75, 1.0, 1.0, 1.0});
    auto spans = kv.nonempty_spans();
    REQUIRE(spans.size() == 4);
    CHECK(spans[0] == 2);
    CHECK(spans[1] == 3);
    CHECK(spans[2] == 5);
    CHECK(spans[3] == 6);

    auto dk = kv.distinct_knots();
    REQUIRE(dk.size() == 5);
    CHECK(dk[0].first == doctest::Approx(0.0));
    CHECK(dk[0].second == 3);
    CHECK(dk[1].first == doctest::Approx(0.25));
    CHECK(dk[1].second == 1);
    CHECK(dk[2].first == doctest::Approx(0.5));
    CHECK(dk[2].second == 2);
    CHECK(dk[3].first == doctest::Approx(0.75));
    CHECK(dk[3].second == 1);
    CHECK(dk[4].first == doctest::Approx(1.0));
    CHECK(dk[4].second == 3);

    // A uniform vector has one non-empty span per element.
    KnotVector u = iga::uniform_open_knots(3, 8);
    CHECK(u.nonempty_spans().size() == 8);
}
