// tests/test_ordinal.cpp: Cantor normal forms, natural sums and the order-type bounds.

#include "chainlab/ordinal.hpp"

#include "catch_amalgamated.hpp"

#include <random>

using namespace chainlab;

namespace {

OrdinalCNF random_cnf(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> degree(0, 6);
    std::uniform_int_distribution<int> coeff(0, 100);
    std::bernoulli_distribution zero(0.25);
    std::vector<Natural> c(static_cast<std::size_t>(degree(rng)) + 1);
    for (auto& x : c) {
        x = zero(rng) ? 0 : coeff(rng);
    }
    return OrdinalCNF::from_coefficients(std::move(c));
}

}  // namespace

TEST_CASE("natural_sum examples", "[ordinal]") {
    CHECK(natural_sum(parse_cnf("w+1"), parse_cnf("w*2+3")) == parse_cnf("w*3+4"));
    CHECK(natural_sum(parse_cnf("w^2"), parse_cnf("w")) == parse_cnf("w^2+w"));
    const OrdinalCNF alpha = parse_cnf("w^5*2+w^2+7");
    CHECK(natural_sum(OrdinalCNF{}, alpha) == alpha);
    // unlike the ordinary sum, 1 + w and w + 1 agree
    CHECK(natural_sum(OrdinalCNF::finite(1), parse_cnf("w")) == parse_cnf("w+1"));
}

TEST_CASE("compare examples", "[ordinal]") {
    CHECK(compare(parse_cnf("w^2"), parse_cnf("w*5+9")) == std::strong_ordering::greater);
    CHECK(compare(parse_cnf("w*2"), parse_cnf("w*2")) == std::strong_ordering::equal);
    CHECK(compare(parse_cnf("7"), parse_cnf("w")) == std::strong_ordering::less);
    CHECK(parse_cnf("0") < parse_cnf("1"));
}

TEST_CASE("rwo1_bound examples", "[ordinal]") {
    CHECK(format_cnf(rwo1_bound(1).bound) == "1");
    CHECK(format_cnf(rwo1_bound(2).bound) == "w*2+1");
    CHECK(format_cnf(rwo1_bound(3).bound) == "w^2*3+w*2+1");
    CHECK(rwo1_bound(3).bound == parse_cnf("w^2*3+w*2+1"));
    CHECK_THROWS_AS(rwo1_bound(0), std::invalid_argument);
}

TEST_CASE("rwo1_bound sits below both upper bounds", "[ordinal][property]") {
    for (unsigned q = 1; q <= 12; ++q) {
        const Rwo1Bound r = rwo1_bound(q);
        REQUIRE(r.bound < r.first_upper);
        REQUIRE(r.first_upper < r.second_upper);
        REQUIRE(r.first_upper == OrdinalCNF::term(q - 1, q + 1));
        REQUIRE(r.second_upper == OrdinalCNF::term(q, 1));
    }
}

TEST_CASE("parse and format", "[ordinal]") {
    const OrdinalCNF x = parse_cnf("w^2*3+w*2+1");
    CHECK(x.coefficients() == std::vector<Natural>{1, 2, 3});
    CHECK(parse_cnf("0").is_zero());
    CHECK(format_cnf(OrdinalCNF{}) == "0");
    CHECK(parse_cnf(" w ^ 3 + 4 ") == parse_cnf("w^3+4"));
    CHECK(format_cnf(parse_cnf("w^1*1+w^0*5")) == "w+5");
    CHECK(parse_cnf("w^2*123456789012345678901234567890").coefficient(2) ==
          Natural("123456789012345678901234567890"));

    for (const char* bad : {"", "+", "w+", "+w", "w^", "w*", "w^2*0", "w+w^2", "w+w", "3+w", "x", "w^2w",
                            "w^99999", "1+2", "w*-1"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_cnf(bad), std::invalid_argument);
    }
}

TEST_CASE("natural sum laws on random forms", "[ordinal][property]") {
    std::mt19937_64 rng(424242);
    for (int trial = 0; trial < 3000; ++trial) {
        const OrdinalCNF x = random_cnf(rng);
        const OrdinalCNF y = random_cnf(rng);
        const OrdinalCNF z = random_cnf(rng);
        REQUIRE(parse_cnf(format_cnf(x)) == x);
        REQUIRE(natural_sum(x, y) == natural_sum(y, x));
        REQUIRE(natural_sum(natural_sum(x, y), z) == natural_sum(x, natural_sum(y, z)));
        REQUIRE(natural_sum(x, OrdinalCNF{}) == x);
        if (x < y) {
            REQUIRE(natural_sum(x, z) < natural_sum(y, z));
        }
        // compare is a total order consistent with equality
        REQUIRE(((x <=> y) == 0) == (x == y));
        REQUIRE(((x <=> y) < 0) == ((y <=> x) > 0));
    }
}
