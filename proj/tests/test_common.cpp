#include <doctest.h>

#include "slokit/common/canonical.hpp"
#include "slokit/common/clock.hpp"
#include "slokit/common/duration.hpp"
#include "slokit/common/hash.hpp"
#include "slokit/common/numfmt.hpp"

using namespace slokit;

TEST_CASE("sha256 matches published test vectors") {
    CHECK(hex_encode(sha256("")) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(hex_encode(sha256("abc")) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(hex_encode(sha256("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq")) ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("hex round trip") {
    Hash256 h = sha256("round trip");
    auto decoded = hex_decode32(hex_encode(h));
    REQUIRE(decoded.has_value());
    CHECK(*decoded == h);
    CHECK_FALSE(hex_decode32("abc").has_value());
    CHECK_FALSE(hex_decode32(std::string(64, 'x')).has_value());
}

TEST_CASE("preimage length prefixes disambiguate field boundaries") {
    // ("ab","c") and ("a","bc") concatenate identically without prefixes.
    auto h1 = Preimage{}.field("ab").field("c").hash();
    auto h2 = Preimage{}.field("a").field("bc").hash();
    CHECK(h1 != h2);
}

TEST_CASE("duration grammar") {
    CHECK(parse_duration_ms("5s") == 5'000);
    CHECK(parse_duration_ms("5m") == 300'000);
    CHECK(parse_duration_ms("2h") == 7'200'000);
    CHECK(parse_duration_ms("30d") == 2'592'000'000LL);
    CHECK_FALSE(parse_duration_ms("5").has_value());
    CHECK_FALSE(parse_duration_ms("m").has_value());
    CHECK_FALSE(parse_duration_ms("5w").has_value());
    CHECK_FALSE(parse_duration_ms("-5s").has_value());
    CHECK_FALSE(parse_duration_ms("5.5s").has_value());

    CHECK(format_duration_ms(300'000) == "5m");
    CHECK(format_duration_ms(2'592'000'000LL) == "30d");
    CHECK(format_duration_ms(90'000) == "90s");
}

TEST_CASE("double formatting round-trips") {
    for (double v : {0.0, 1.0, 0.1, 1e-9, 12345.6789, -2.5e300, 0.99}) {
        CHECK(parse_double(format_double(v)) == v);
        CHECK(parse_double(format_double_17(v)) == v);
    }
    CHECK(format_double(0.99) == "0.99");
    CHECK(parse_double("+Inf") == INFINITY);
    CHECK(parse_double("-inf") == -INFINITY);
    CHECK(std::isnan(*parse_double("NaN")));
    CHECK_FALSE(parse_double("1.2.3").has_value());
    CHECK_FALSE(parse_double("").has_value());
}

TEST_CASE("canonical json sorts keys and strips whitespace") {
    Json j;
    j["zeta"] = 1;
    j["alpha"] = Json{{"b", 2}, {"a", 1}};
    j["target"] = 0.99;
    CHECK(canonical_json(j) == R"({"alpha":{"a":1,"b":2},"target":0.99,"zeta":1})");
}

TEST_CASE("sim clock is monotone") {
    SimClock c(100);
    CHECK(c.now_ms() == 100);
    c.advance_ms(50);
    CHECK(c.now_ms() == 150);
    c.advance_to(200);
    CHECK(c.now_ms() == 200);
    CHECK_THROWS_AS(c.advance_to(10), std::invalid_argument);
}
