// tests/test_catalog.cpp: S_k, phi, T-sets, catalog enumeration and bound verifiers.

#include "chainlab/catalog.hpp"
#include "chainlab/catalog_io.hpp"

#include "catch_amalgamated.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <set>

using namespace chainlab;

namespace {

SearchContext& shared() {
    static LengthCache cache;
    static SearchContext ctx{ChainClass::all(), kDefaultBudget, &cache};
    return ctx;
}

/// k - 1 - log2(1 + sum 2^-b_i) in long double, independent of ExactLogValue.
long double sk_float(unsigned k, const std::vector<unsigned>& b) {
    long double s = 1;
    for (unsigned bi : b) {
        s += std::ldexp(1.0L, -static_cast<int>(bi));
    }
    return static_cast<long double>(k) - 1 - std::log2(s);
}

/// Every c-vector of length len with entries in [0, top], in lexicographic order.
std::vector<std::vector<unsigned>> grid(unsigned len, unsigned top) {
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> c(len, 0);
    std::function<void(unsigned)> fill = [&](unsigned i) {
        if (i == len) {
            out.push_back(c);
            return;
        }
        for (unsigned v = 0; v <= top; ++v) {
            c[i] = v;
            fill(i + 1);
        }
    };
    fill(0);
    return out;
}

}  // namespace

TEST_CASE("sk_value examples", "[catalog]") {
    CHECK(to_decimal(sk_value(2, {1})) == "0.415037");
    CHECK(sk_value(2, {1}) == ExactLogValue::from_log(2, 3));
    CHECK(to_decimal(sk_value(3, {1, 2})) == "1.192645");
    CHECK(sk_value(3, {1, 2}) == ExactLogValue::from_log(4, 7));
    CHECK(sk_value(1, {}) == ExactLogValue{});
    CHECK_THROWS_AS(sk_value(3, {2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(sk_value(3, {0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(sk_value(3, {1}), std::invalid_argument);
}

TEST_CASE("phi and phi_inverse examples", "[catalog]") {
    CHECK(phi_exponents({0, 0}) == std::vector<unsigned>{1, 2});
    CHECK(to_decimal(phi({0, 0})) == "1.192645");
    CHECK(phi_exponents({1, 0}) == std::vector<unsigned>{2, 3});
    CHECK(to_decimal(phi({1, 0})) == "1.540568");
    CHECK(phi({1, 0}) == defect(11, shared()).value());
    CHECK(to_decimal(phi({0})) == "0.415037");

    CHECK(phi_inverse({1, 2}) == std::vector<unsigned>{0, 0});
    CHECK(phi_inverse({2, 3}) == std::vector<unsigned>{1, 0});
    CHECK(phi_inverse({3, 7}) == std::vector<unsigned>{2, 3});
    CHECK_THROWS_AS(phi_inverse({3, 3}), std::invalid_argument);
}

TEST_CASE("sk_prefix examples", "[catalog]") {
    const auto s2 = sk_prefix(2, 3);
    REQUIRE(s2.size() == 3);
    CHECK(s2[0] == ExactLogValue::from_log(2, 3));
    CHECK(s2[1] == ExactLogValue::from_log(3, 5));
    CHECK(s2[2] == ExactLogValue::from_log(4, 9));
    CHECK(to_decimal(s2[1]) == "0.678072");
    CHECK(to_decimal(s2[2]) == "0.830075");

    const auto s3 = sk_prefix(3, 2);
    CHECK(s3[0] == sk_value(3, {1, 2}));
    CHECK(s3[1] == sk_value(3, {1, 3}));
    for (unsigned k = 2; k <= 6; ++k) {
        CHECK(sk_prefix(k, 1).front() == phi(std::vector<unsigned>(k - 1, 0)));
    }
}

TEST_CASE("phi is an order isomorphism onto S_k", "[catalog][property]") {
    for (unsigned k = 2; k <= 4; ++k) {
        const auto cs = grid(k - 1, 6);
        std::vector<ExactLogValue> values;
        for (const auto& c : cs) {
            const auto b = phi_exponents(c);
            REQUIRE(phi_inverse(b) == c);
            REQUIRE(phi_exponents(phi_inverse(b)) == b);
            const ExactLogValue v = phi(c);
            // (k-2, k-1)
            REQUIRE(compare(v, ExactLogValue{static_cast<std::int64_t>(k) - 2, 1, 0}) > 0);
            REQUIRE(compare(v, ExactLogValue{static_cast<std::int64_t>(k) - 1, 1, 0}) < 0);
            REQUIRE(std::fabs(to_double(v) - static_cast<double>(sk_float(k, b))) < 1e-12);
            values.push_back(v);
        }
        // the grid is generated in lex order, so every pair must compare the same way
        for (std::size_t i = 0; i < values.size(); ++i) {
            for (std::size_t j = i + 1; j < values.size(); ++j) {
                REQUIRE(compare(values[i], values[j]) < 0);
            }
        }
    }
}

TEST_CASE("t_set_values examples", "[catalog]") {
    const auto t2 = t_set_values(2, 10);
    REQUIRE(t2.size() == 1);
    CHECK(t2[0].value == ExactLogValue::from_log(9, 135));
    CHECK(t2[0].n == 135);
    // independent evaluation of 9 - log2 135
    CHECK(std::fabs(to_double(t2[0].value) - static_cast<double>(9 - std::log2(135.0L))) < 1e-12);
    CHECK(to_decimal(t2[0].value) == "1.923184");

    // a = 2 in 5 - log2(9 + 3 * 2^-a)
    const auto t3 = t_set_values(3, 6);
    const ExactLogValue target = ExactLogValue::from_log(7, 39);
    CHECK(std::any_of(t3.begin(), t3.end(), [&](const TValue& t) { return t.value == target; }));
    CHECK(to_decimal(target) == "1.714598");
    CHECK(compare(target, ExactLogValue{5, 39, 2}) == 0);

    const auto t1 = t_set_values(1, 8);
    CHECK(t1.front().value == sk_value(3, {1, 2}));
    CHECK(to_decimal(t1.front().value) == "1.192645");
    CHECK_THROWS_AS(t_set_values(6, 3), std::invalid_argument);
}

TEST_CASE("T-set values lie in (1, 2) and are sorted", "[catalog]") {
    for (int form = 1; form <= 5; ++form) {
        const auto values = t_set_values(form, 12);
        for (std::size_t i = 0; i < values.size(); ++i) {
            REQUIRE(compare(values[i].value, ExactLogValue{1, 1, 0}) > 0);
            REQUIRE(compare(values[i].value, ExactLogValue{2, 1, 0}) < 0);
            if (i > 0) {
                REQUIRE(compare(values[i - 1].value, values[i].value) < 0);
            }
        }
    }
}

TEST_CASE("thresholds", "[catalog]") {
    const Threshold r = Threshold::parse("0.999");
    CHECK(r.num == 999);
    CHECK(r.den == 1000);
    CHECK(r.str() == "0.999");
    CHECK(Threshold::parse("1.05").str() == "1.05");
    CHECK(Threshold::parse("2").str() == "2");
    CHECK(Threshold::parse(".5").str() == "0.5");
    CHECK_THROWS_AS(Threshold::parse("."), std::invalid_argument);
    CHECK_THROWS_AS(Threshold::parse("1.2.3"), std::invalid_argument);
    CHECK_THROWS_AS(Threshold::parse("-1"), std::invalid_argument);

    // 4 - log2 7 = 1.1926... is <= 1.2 but not <= 1.19
    CHECK(at_most(ExactLogValue::from_log(4, 7), Threshold::parse("1.2")));
    CHECK_FALSE(at_most(ExactLogValue::from_log(4, 7), Threshold::parse("1.19")));
    CHECK(at_most(ExactLogValue{1, 1, 0}, Threshold::integer(1)));
    CHECK(max_length_within(7, Threshold::parse("1.2")) == 4);
    CHECK(max_length_within(7, Threshold::parse("1.19")) == 3);
    CHECK(max_length_within(8, Threshold::integer(0)) == 3);
}

TEST_CASE("enumerate_defects examples", "[catalog]") {
    auto& ctx = shared();
    const Catalog low = enumerate_defects(Threshold::parse("0.9"), 4096, ctx);
    std::vector<Natural> leaders;
    for (const auto& e : low.entries) {
        leaders.push_back(e.leader);
    }
    // delta(17) = 5 - log2 17 = 0.912537 lies just above 0.9
    CHECK(leaders == std::vector<Natural>{1, 3, 5, 9});
    CHECK_FALSE(at_most(ExactLogValue::from_log(5, 17), Threshold::parse("0.9")));
    CHECK(low.entries[1].defect.value() == sk_value(2, {1}));
    CHECK(low.entries[0].multiplicity == 13);

    const Catalog zero = enumerate_defects(Threshold::integer(0), 500, ctx);
    REQUIRE(zero.entries.size() == 1);
    CHECK(zero.entries[0].leader == 1);
    CHECK(zero.entries[0].defect.value() == ExactLogValue{});

    const Catalog mid = enumerate_defects(Threshold::parse("1.3"), 4096, ctx, {false, 16});
    CHECK(std::any_of(mid.entries.begin(), mid.entries.end(), [](const CatalogEntry& e) {
        return e.leader == 7 && to_decimal(e.defect) == "1.192645";
    }));
}

TEST_CASE("defect values in [0, 1] are {0} and S_2", "[catalog][property]") {
    auto& ctx = shared();
    const Natural n_max = 4096;
    const Catalog cat = enumerate_defects(Threshold::integer(1), n_max, ctx);
    CHECK(cat.unchecked.empty());
    std::set<unsigned> seen;
    for (const auto& e : cat.entries) {
        REQUIRE(e.stability == StabilityVerdict::CertifiedStable);
        if (e.leader == 1) {
            continue;
        }
        const unsigned b = floor_log2(e.leader);
        REQUIRE(e.leader == pow2(b) + 1);
        REQUIRE(e.defect.value() == sk_value(2, {b}));
        seen.insert(b);
    }
    for (unsigned b = 1; pow2(b) + 1 <= n_max; ++b) {
        REQUIRE(seen.count(b) == 1);
    }
    CHECK(cat.certificate.witnesses_verified);
    CHECK_FALSE(cat.certificate.certified_through_threshold);
    REQUIRE(cat.certificate.certified_below);
    CHECK(*cat.certificate.certified_below == sk_value(2, {12}));
}

TEST_CASE("certificate covers all of D below the first missing witness", "[catalog]") {
    auto& ctx = shared();
    const Catalog cat = enumerate_defects(Threshold::parse("0.999"), 4096, ctx);
    CHECK(cat.certificate.certified_through_threshold);
    CHECK(cat.certificate.note == "complete for all of D^A in [0, 0.999]");
    CHECK(cat.entries.size() == 11);

    const Catalog small = enumerate_defects(Threshold::parse("0.999"), 100, ctx);
    CHECK_FALSE(small.certificate.certified_through_threshold);
    CHECK(*small.certificate.certified_below == sk_value(2, {7}));
}

TEST_CASE("defect values in (1, 2] come from the T-sets", "[catalog][property]") {
    auto& ctx = shared();
    const unsigned limit = 1u << 14;
    const Catalog cat = enumerate_defects(Threshold::integer(2), limit, ctx, {false, 16});
    REQUIRE(cat.unchecked.empty());

    std::vector<TValue> t;
    for (int form = 1; form <= 5; ++form) {
        for (const auto& v : t_set_values(form, 14)) {
            t.push_back(v);
        }
    }
    std::size_t in_range = 0;
    for (const auto& e : cat.entries) {
        if (compare(e.defect.value(), ExactLogValue{1, 1, 0}) <= 0) {
            continue;
        }
        ++in_range;
        const bool listed =
            std::any_of(t.begin(), t.end(), [&](const TValue& v) { return v.value == e.defect.value(); });
        REQUIRE(listed);
    }
    CHECK(in_range > 100);

    // attainment, value by value: every T value with a representative in range shows up
    for (const auto& v : t) {
        if (v.n > limit) {
            continue;
        }
        const bool present = std::any_of(cat.entries.begin(), cat.entries.end(),
                                         [&](const CatalogEntry& e) { return e.defect.value() == v.value; });
        REQUIRE(present);
    }
}

TEST_CASE("integer deficit lies in [0, nu - 1]", "[catalog][property]") {
    auto& ctx = shared();
    for (unsigned n = 1; n <= 2048; ++n) {
        const unsigned k = static_cast<unsigned>(std::popcount(n));
        const int m = static_cast<int>(floor_log2(Natural(n)) + k - 1) - static_cast<int>(exact_length(n, ctx));
        REQUIRE(m >= 0);
        REQUIRE(m <= static_cast<int>(k) - 1);
    }
}

TEST_CASE("q_empirical examples", "[catalog]") {
    auto& ctx = shared();
    const QEstimate q0 = q_empirical(Threshold::integer(0), 1024, ctx);
    CHECK(q0.max_ones == 1);
    CHECK(q0.witness == 1);
    const QEstimate q1 = q_empirical(Threshold::integer(1), 1024, ctx);
    CHECK(q1.max_ones == 2);
    CHECK(q1.witness == 3);
    const QEstimate q2 = q_empirical(Threshold::integer(2), 1024, ctx);
    CHECK(q2.max_ones == 4);
    CHECK(q2.witness == 15);
    const QEstimate q3 = q_empirical(Threshold::integer(3), 1024, ctx);
    CHECK(q3.max_ones == 8);
    CHECK(q3.witness == 255);
    CHECK(q3.unchecked.empty());
}

TEST_CASE("nu is at most 8 when s = 3", "[catalog][property]") {
    SearchContext ctx;
    for (unsigned n = 1; n <= 4096; ++n) {
        if (std::popcount(n) > 8) {
            REQUIRE(capped_small_steps(n, 3, ctx) == 4);
        }
    }
}

TEST_CASE("bound verifiers", "[catalog]") {
    auto& ctx = shared();
    const BoundReport schonhage = verify_schonhage(4096, ctx);
    CHECK(schonhage.violations.empty());
    CHECK(schonhage.unchecked.empty());
    CHECK(schonhage.checked == 4096);

    const BoundReport ks = verify_knuth_stolarsky(4096, ctx);
    CHECK(ks.violations.empty());
    CHECK(ks.checked == 4096);

    for (const auto& row : verify_scholz_brauer(12, ctx)) {
        CHECK(row.checked);
        CHECK(row.holds);
    }
    const auto rows = verify_scholz_brauer(5, ctx);
    CHECK(rows[4].lhs == 7);  // l(31)
    CHECK(rows[4].rhs == 7);  // 5 + l(5) - 1
}

TEST_CASE("f_bounds examples", "[catalog]") {
    const FBoundsReport two = f_bounds(2);
    CHECK(two.exact);
    CHECK(two.upper == 2);
    CHECK(f_bounds(5).lower_expression == "2");
    const FBoundsReport ten = f_bounds(10);
    CHECK_FALSE(ten.exact);
    CHECK(ten.lower_expression == "3");
    CHECK(ten.upper == 10);
    const FBoundsReport forty = f_bounds(40);
    CHECK(forty.lower_expression == "log2(41) - 2.13");
    CHECK(forty.lower_approx == Catch::Approx(std::log2(41.0) - 2.13).epsilon(1e-12));
    CHECK(forty.upper == 40);
}

TEST_CASE("catalog exports", "[catalog]") {
    auto& ctx = shared();
    const Catalog cat = enumerate_defects(Threshold::parse("1.5"), 300, ctx);
    const std::string csv = catalog_csv(cat);
    CHECK(csv.rfind("value_approx,leader,length_of_leader,multiplicity,stability\n0.000000,1,0,", 0) == 0);

    // JSON keeps exact triples; re-parsing reproduces every ordering
    const auto doc = nlohmann::json::parse(catalog_json(cat).dump());
    const auto& entries = doc.at("entries");
    REQUIRE(entries.size() == cat.entries.size());
    std::vector<ExactLogValue> parsed;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        parsed.push_back(log_value_from_json(entries[i].at("value")));
        REQUIRE(parsed.back() == cat.entries[i].defect.value());
        REQUIRE(entries[i].at("leader").get<std::string>() == cat.entries[i].leader.str());
    }
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        for (std::size_t j = 0; j < parsed.size(); ++j) {
            REQUIRE(compare(parsed[i], parsed[j]) == compare_defects(cat.entries[i].defect, cat.entries[j].defect));
        }
    }
    CHECK_THROWS(log_value_from_json(nlohmann::json{{"c", 1}, {"m", "0"}, {"scale", 0}}));
}
