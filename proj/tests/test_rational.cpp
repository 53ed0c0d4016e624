#include <catch2/catch_amalgamated.hpp>

#include "stacksp/rational.hpp"

using namespace stacksp;

TEST_CASE("parse_rational accepts integers and fractions") {
    CHECK(parse_rational("3") == Rat(3));
    CHECK(parse_rational("-7") == Rat(-7));
    CHECK(parse_rational("3/2") == Rat(3, 2));
    CHECK(parse_rational("-10/4") == Rat(-5, 2));
    CHECK(parse_rational("0") == Rat(0));
}

TEST_CASE("parse_rational rejects malformed input") {
    CHECK_THROWS_AS(parse_rational(""), InputError);
    CHECK_THROWS_AS(parse_rational("a"), InputError);
    CHECK_THROWS_AS(parse_rational("1.5"), InputError);
    CHECK_THROWS_AS(parse_rational("1/0"), InputError);
    CHECK_THROWS_AS(parse_rational("1/"), InputError);
    CHECK_THROWS_AS(parse_rational("/2"), InputError);
    CHECK_THROWS_AS(parse_rational("--3"), InputError);
}

TEST_CASE("format_rational reduces and round-trips") {
    CHECK(format_rational(Rat(6, 4)) == "3/2");
    CHECK(format_rational(Rat(-6, 3)) == "-2");
    CHECK(format_rational(Rat(0)) == "0");
    for (const char* text : {"0", "5", "-5", "7/3", "-7/3"})
        CHECK(format_rational(parse_rational(text)) == text);
}

TEST_CASE("rational json uses integers when possible") {
    CHECK(rational_to_json(Rat(4)).is_number_integer());
    CHECK(rational_to_json(Rat(4)).get<std::int64_t>() == 4);
    CHECK(rational_to_json(Rat(3, 2)).is_string());
    CHECK(rational_to_json(Rat(3, 2)).get<std::string>() == "3/2");

    // Values past int64 fall back to the string form.
    const Rat huge = Rat(Int("123456789012345678901234567890"));
    const Json j = rational_to_json(huge);
    CHECK(j.is_string());
    CHECK(rational_from_json(j) == huge);

    CHECK(rational_from_json(Json(-12)) == Rat(-12));
    CHECK(rational_from_json(Json(std::uint64_t{18446744073709551615ull})) ==
          Rat(Int("18446744073709551615")));
    CHECK_THROWS_AS(rational_from_json(Json(1.5)), InputError);
}

TEST_CASE("Price distinguishes finite values from INFINITE") {
    const Price inf = Price::infinite();
    CHECK(inf.is_infinite());
    CHECK_FALSE(inf.is_finite());
    CHECK_THROWS_AS(inf.value(), Error);

    const Price two = Price::finite(Rat(2));
    CHECK(two.is_finite());
    CHECK(two.value() == Rat(2));
    CHECK(two != inf);
    CHECK(Price::finite(Rat(2)) == two);
    CHECK(Price::infinite() == inf);

    CHECK_THROWS_AS(Price::finite(Rat(-1)), InputError);
    CHECK(Price::finite(Rat(0)).is_finite());
}

TEST_CASE("price json round-trips including inf") {
    CHECK(price_to_json(Price::infinite()) == Json("inf"));
    CHECK(price_from_json(Json("inf")).is_infinite());
    CHECK(price_from_json(price_to_json(Price::finite(Rat(7, 2)))) == Price::finite(Rat(7, 2)));
    CHECK(price_from_json(Json(3)) == Price::finite(Rat(3)));
    CHECK_THROWS_AS(price_from_json(Json(-3)), InputError);
}
