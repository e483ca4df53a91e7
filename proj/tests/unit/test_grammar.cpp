#include <doctest.h>

#include <random>

#include "maskagent/grammar.hpp"

using namespace maskagent;

TEST_CASE("format_action examples") {
    CHECK(format_action(Action::positive({0.175, 0.483}), CoordFormat::integer) == "Positive point: (175, 483)");
    CHECK(format_action(Action::negative({0.25, 0.5}), CoordFormat::decimal) == "Negative point: (0.250, 0.500)");
    CHECK(format_action(Action::box({0, 0, below_one(), below_one()}), CoordFormat::integer) ==
          "Box: (0, 0, 999, 999)");
}

TEST_CASE("parse_action examples") {
    const auto a = parse_action("Positive point: (175,483)", CoordFormat::integer);
    CHECK(a.action.is_positive());
    CHECK(a.action.point() == NormPoint{0.175, 0.483});
    CHECK_FALSE(a.stated_reward);

    const auto b = parse_action("Current mIoU: 73\nNegative point: (0.100, 0.900)", CoordFormat::decimal);
    REQUIRE(b.stated_reward);
    CHECK(*b.stated_reward == doctest::Approx(0.73));
    CHECK(b.action.is_negative());
    CHECK(b.action.point().x == doctest::Approx(0.1));
    CHECK(b.action.point().y == doctest::Approx(0.9));

    const auto c = parse_action("  positive POINT ( 3 ,4 ).", CoordFormat::integer);
    CHECK(c.action.point() == NormPoint{0.003, 0.004});
    const auto d = parse_action("Box: (1, 2, 3, 4)", CoordFormat::integer);
    CHECK(d.action.kind() == ActionKind::box);
}

TEST_CASE("parse_action error codes") {
    auto code = [](std::string_view text, CoordFormat f) {
        try {
            parse_action(text, f);
        } catch (const ActionParseError& e) {
            return e.code();
        }
        FAIL("no error for " << text);
        return ParseErrorCode::empty_input;
    };
    CHECK(code("", CoordFormat::integer) == ParseErrorCode::empty_input);
    CHECK(code("   \n ", CoordFormat::integer) == ParseErrorCode::empty_input);
    CHECK(code("Click point: (1, 2)", CoordFormat::integer) == ParseErrorCode::unknown_verb);
    CHECK(code("Positive point: (1200, 50)", CoordFormat::integer) == ParseErrorCode::out_of_range);
    CHECK(code("Positive point: (1.0, 0.5)", CoordFormat::decimal) == ParseErrorCode::out_of_range);
    CHECK(code("Positive point: (1x, 5)", CoordFormat::integer) == ParseErrorCode::malformed_number);
    CHECK(code("Positive point: (0.5, 5)", CoordFormat::integer) == ParseErrorCode::malformed_number);
    CHECK(code("Positive point: 1, 5", CoordFormat::integer) == ParseErrorCode::malformed_syntax);
    CHECK(code("Positive point: (1, 5, 6)", CoordFormat::integer) == ParseErrorCode::malformed_syntax);
    CHECK(code("Box: (5, 5, 1, 1)", CoordFormat::integer) == ParseErrorCode::out_of_range);
    CHECK(code("Current mIoU: 101\nPositive point: (1, 2)", CoordFormat::integer) == ParseErrorCode::out_of_range);
}

TEST_CASE("reward text") {
    CHECK(format_reward(0.734) == "Current mIoU: 73");
    CHECK(format_reward(0.735) == "Current mIoU: 74");
    CHECK(format_reward(0.0) == "Current mIoU: 0");
    CHECK(format_reward(1.0) == "Current mIoU: 100");
    CHECK(parse_reward("Current mIoU: 42") == doctest::Approx(0.42));
    CHECK_THROWS_AS(parse_reward("Current mIoU: 101"), ActionParseError);
    CHECK_THROWS_AS(parse_reward("nothing here"), ActionParseError);
}

TEST_CASE("parse after format recovers actions in both formats") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto fmt : {CoordFormat::integer, CoordFormat::decimal}) {
        for (int i = 0; i < 500; ++i) {
            Action a = Action::positive({0, 0});
            const int kind = static_cast<int>(rng() % 3);
            if (kind == 2) {
                double xs[2] = {u(rng), u(rng)}, ys[2] = {u(rng), u(rng)};
                std::sort(xs, xs + 2);
                std::sort(ys, ys + 2);
                a = Action::box({xs[0], ys[0], xs[1], ys[1]});
            } else {
                a = Action::click(kind == 0, {u(rng), u(rng)});
            }
            const auto back = parse_action(format_action(a, fmt), fmt).action;
            REQUIRE(back.kind() == a.kind());
            if (a.is_click()) {
                for (const auto [got, want] : {std::pair{back.point().x, a.point().x}, std::pair{back.point().y, a.point().y}}) {
                    // values in [0.9995, 1) clamp to 0.999
                    if (want >= 0.9995) CHECK(got == doctest::Approx(0.999));
                    else CHECK(std::abs(got - want) <= 0.0005 + 1e-12);
                }
            }
            CHECK(format_action(back, fmt) == format_action(a, fmt));
        }
    }
}

TEST_CASE("coord format names") {
    CHECK(parse_coord_format("decimal_0_1") == CoordFormat::decimal);
    CHECK(parse_coord_format("integer") == CoordFormat::integer);
    CHECK_THROWS(parse_coord_format("hex"));
    CHECK(quantize_coord(below_one()) == 999);
    CHECK(quantize_coord(0.0004) == 0);
    CHECK(quantize_coord(0.0005) == 1);
}
