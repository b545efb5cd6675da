// tests/test_classifier.cpp: small-steps buckets and Knuth's five forms.

#include "chainlab/classifier.hpp"

#include "catch_amalgamated.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <set>

using namespace chainlab;

TEST_CASE("classify_small_steps examples", "[classifier]") {
    CHECK(classify_small_steps(8).bucket == Bucket::Zero);

    const SmallStepsBucket seven = classify_small_steps(7);
    CHECK(seven.bucket == Bucket::Two);
    CHECK(seven.primary_form() == 1);
    CHECK(seven.forms.front().params == std::vector<unsigned>{0, 1, 2});

    const SmallStepsBucket b135 = classify_small_steps(135);
    CHECK(b135.bucket == Bucket::Two);
    CHECK(b135.primary_form() == 2);
    CHECK(b135.forms.front().params == std::vector<unsigned>{0});

    CHECK(classify_small_steps(3).bucket == Bucket::One);
    CHECK(classify_small_steps(255).bucket == Bucket::ThreePlus);
}

TEST_CASE("knuth_form_of examples", "[classifier]") {
    const auto fifteen = knuth_form_of(15);
    REQUIRE(fifteen.size() == 1);
    CHECK(fifteen[0].form == 4);
    CHECK(fifteen[0].params == std::vector<unsigned>{0, 1, 2});

    const auto f147 = knuth_form_of(147);
    REQUIRE(f147.size() == 1);
    CHECK(f147[0].form == 3);
    CHECK(f147[0].params == std::vector<unsigned>{0, 4});

    const auto eleven = knuth_form_of(11);
    REQUIRE(eleven.size() == 1);
    CHECK(eleven[0].form == 1);

    CHECK(knuth_form_of(23).front().form == 5);
    CHECK(knuth_form_of(29).empty());
    CHECK(knuth_form_of(1).empty());
}

TEST_CASE("knuth_form_number round-trips through knuth_form_of", "[classifier]") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<unsigned> small(0, 40);
    for (int trial = 0; trial < 5000; ++trial) {
        const int form = 1 + trial % 5;
        std::vector<unsigned> p;
        switch (form) {
            case 2: p = {small(rng)}; break;
            case 3: {
                const unsigned a = small(rng);
                p = {a, a + 2 + small(rng)};
                break;
            }
            default: {
                const unsigned a = small(rng);
                const unsigned b = a + 1 + small(rng);
                p = {a, b, b + 1 + small(rng)};
                break;
            }
        }
        const Natural n = knuth_form_number(form, p);
        const auto matches = knuth_form_of(n);
        const bool found = std::any_of(matches.begin(), matches.end(),
                                       [&](const KnuthMatch& m) { return m.form == form && m.params == p; });
        REQUIRE(found);
        REQUIRE(classify_small_steps(n).bucket == Bucket::Two);
    }
    CHECK_THROWS_AS(knuth_form_number(3, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(knuth_form_number(1, {2, 1, 3}), std::invalid_argument);
    CHECK_THROWS_AS(knuth_form_number(6, {0}), std::invalid_argument);
    CHECK(knuth_form_number(2, {0}) == 135);
}

TEST_CASE("buckets Zero and One are bit-count iffs", "[classifier][property]") {
    for (unsigned n = 1; n <= (1u << 20); ++n) {
        const Bucket b = classify_small_steps(n).bucket;
        const int ones = std::popcount(n);
        REQUIRE((b == Bucket::Zero) == (ones == 1));
        REQUIRE((b == Bucket::One) == (ones == 2));
        if (b == Bucket::Two) {
            REQUIRE((ones == 3 || ones == 4));
        }
    }
}

TEST_CASE("small buckets respect the Knuth-Stolarsky bound", "[classifier][property]") {
    for (unsigned n = 1; n <= (1u << 20); ++n) {
        const Bucket b = classify_small_steps(n).bucket;
        if (b == Bucket::ThreePlus) {
            continue;
        }
        const unsigned s = b == Bucket::Zero ? 0 : b == Bucket::One ? 1 : 2;
        // s >= log2 nu  <=>  2^s >= nu
        REQUIRE((1u << s) >= static_cast<unsigned>(std::popcount(n)));
    }
}

TEST_CASE("overlapping forms are all reported", "[classifier]") {
    // every nu = 4 number in range that matches more than one form
    std::set<std::vector<int>> combos;
    for (unsigned n = 1; n <= (1u << 20); ++n) {
        if (std::popcount(n) != 4) {
            continue;
        }
        const auto matches = knuth_form_of(n);
        std::vector<int> ids;
        for (const auto& m : matches) {
            ids.push_back(m.form);
        }
        REQUIRE(std::is_sorted(ids.begin(), ids.end()));
        if (ids.size() > 1) {
            combos.insert(ids);
        }
    }
    // with sorted exponents the top gap pins the form, so no number matches two
    CHECK(combos.empty());
}

TEST_CASE("cross_check examples", "[classifier]") {
    SearchContext ctx;
    const CrossCheckReport small = cross_check(1, 255, ctx);
    CHECK(small.discrepancies.empty());
    CHECK(small.checked == 255);
    CHECK(capped_small_steps(255, 3, ctx) == 3);
    CHECK(classify_small_steps(255).bucket == Bucket::ThreePlus);

    for (unsigned k = 0; k < 60; ++k) {
        CHECK(classify_small_steps(pow2(k)).bucket == Bucket::Zero);
        CHECK(capped_small_steps(pow2(k), 2, ctx) == 0);
    }
}

TEST_CASE("cross_check finds no discrepancy up to 2^14", "[classifier][property]") {
    LengthCache cache;
    SearchContext ctx;
    ctx.cache = &cache;
    const CrossCheckReport report = cross_check(1, 1u << 14, ctx, 2);
    CHECK(report.discrepancies.empty());
    CHECK(report.unchecked.empty());
    CHECK(report.checked == (1u << 14));
}

TEST_CASE("bucket_agrees", "[classifier]") {
    CHECK(bucket_agrees(Bucket::Zero, 0));
    CHECK_FALSE(bucket_agrees(Bucket::Zero, 1));
    CHECK(bucket_agrees(Bucket::ThreePlus, 3));
    CHECK_FALSE(bucket_agrees(Bucket::Two, 3));
}
