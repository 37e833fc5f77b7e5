#include <doctest.h>

#include "spectrade/config.hpp"
#include "spectrade/errors.hpp"

using namespace spectrade;
using namespace spectrade::config;

TEST_CASE("default config is valid and matches the shipped parameter set") {
    ScenarioConfig c = default_config();
    CHECK_NOTHROW(c.validate());
    CHECK(c.market.rate_value_coeff == 1.0);
    CHECK(c.market.cost_coeff == 0.5);
    CHECK(c.market.entrant_gain == 0.2);
    CHECK(c.market.incumbent_gain == 0.1);
    CHECK(c.market.channel_count == 5);
    CHECK(c.market.noise_density_entrant == 0.001);
    CHECK(c.market.noise_density_incumbent == 0.002);
}

TEST_CASE("sectioned text round-trips exactly") {
    ScenarioConfig c = default_config();
    std::string text = serialize_config(c);
    ScenarioConfig back = parse_config_text(text);
    CHECK(serialize_config(back) == text);
}

TEST_CASE("json surface carries the identical schema") {
    ScenarioConfig c = default_config();
    std::string json_text = serialize_config_json(c);
    ScenarioConfig back = parse_config_text(json_text);
    CHECK(serialize_config(back) == serialize_config(c));
}

TEST_CASE("unknown keys are rejected") {
    std::string bad = "[sim]\nseed = 1\nbogus = 2\n";
    CHECK_THROWS_AS(parse_config_text(bad), ConfigError);
    std::string bad_section = "[warp]\nspeed = 9\n";
    CHECK_THROWS_AS(parse_config_text(bad_section), ConfigError);
    std::string bad_json = R"({"sim": {"seed": 1, "bogus": 2}})";
    CHECK_THROWS_AS(parse_config_text(bad_json), ConfigError);
    std::string bad_top = R"({"warp": {}})";
    CHECK_THROWS_AS(parse_config_text(bad_top), ConfigError);
}

TEST_CASE("key outside a section is rejected") {
    CHECK_THROWS_AS(parse_config_text("seed = 1\n"), ConfigError);
}

TEST_CASE("seed interactions must follow their node") {
    std::string text =
        "[nodes]\nseed_interaction = ghost sat-op positive 1 3\n";
    CHECK_THROWS_AS(parse_config_text(text), ConfigError);
}

TEST_CASE("validation catches unfunded buyers and duplicate ids") {
    ScenarioConfig c = default_config();
    c.buyers.push_back("freeloader");
    CHECK_THROWS_AS(c.validate(), ConfigError);

    ScenarioConfig d = default_config();
    d.nodes.push_back(d.nodes.front());
    CHECK_THROWS_AS(d.validate(), ConfigError);

    ScenarioConfig e = default_config();
    e.initial_balances.push_back(e.initial_balances.front());
    CHECK_THROWS_AS(e.validate(), ConfigError);
}

TEST_CASE("behavior names parse strictly") {
    std::string text = "[nodes]\nnode = x 10 sneaky\n";
    CHECK_THROWS_AS(parse_config_text(text), ConfigError);
}

TEST_CASE("grids expand inclusively") {
    auto g = make_grid({1.0, 2.0, 5});
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 1.0);
    CHECK(g.back() == 2.0);
    CHECK(g[2] == doctest::Approx(1.5));
    auto single = make_grid({3.0, 9.0, 1});
    REQUIRE(single.size() == 1);
    CHECK(single[0] == 3.0);
}

TEST_CASE("explicit cells survive the round trip") {
    ScenarioConfig c = default_config();
    geometry::CellGeometry cell;
    cell.cell_id = 0;
    cell.center_to_sat_km = 35786.0;
    cell.reuse_color = 1;
    cell.center = {12.5, -42.0};
    c.explicit_cells.push_back(cell);
    ScenarioConfig back = parse_config_text(serialize_config(c));
    REQUIRE(back.explicit_cells.size() == 1);
    CHECK(back.explicit_cells[0].center.x_km == 12.5);
    CHECK(back.explicit_cells[0].center.y_km == -42.0);
    CHECK(serialize_config(back) == serialize_config(c));
}
