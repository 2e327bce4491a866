#include <doctest.h>

#include <json.hpp>

#include "adrc/advise.hpp"
#include "adrc/export.hpp"
#include "adrc/presets.hpp"

using namespace adrc;

TEST_CASE("preset catalogue") {
    for (const char* id : {"fig4a", "fig4b", "fig5", "fig6", "fig7", "fig10", "table2", "table3"}) {
        CHECK_NOTHROW(find_preset(id));
    }
    CHECK_THROWS_AS(find_preset("fig99"), std::invalid_argument);
    const Preset& f10 = find_preset("fig10");
    CHECK(f10.plant == "P3");
    CHECK(f10.design.n == 3);
    CHECK(f10.reference.kind == ReferenceSpec::Kind::sinusoid);
    CHECK(f10.schemes == std::vector<std::string>{"A", "A1", "A2", "B"});
    const Preset& f6 = find_preset("fig6");
    CHECK(f6.reference.tau == 0.2);
    CHECK(f6.disturbance.t_on == 10.0);
    CHECK(f6.noise.t_on == 15.0);
    CHECK(find_preset("fig5").reference.tau == 0.1);
    for (const auto& p : all_presets()) {
        const PlantModel plant = plant_by_id(p.plant);
        const AdrcDesign d = make_design(p.design);
        for (const auto& s : p.schemes) {
            CHECK_NOTHROW(validate(make_scenario(p, plant, d, s)));
        }
    }
}

TEST_CASE("value lists") {
    CHECK(parse_values("6:24:7") == std::vector<double>{6, 9, 12, 15, 18, 21, 24});
    CHECK(parse_values("1.5, 2,4.5") == std::vector<double>{1.5, 2, 4.5});
    CHECK(parse_values("3:3:1") == std::vector<double>{3});
    CHECK_THROWS_AS(parse_values("1:2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_values("1:2:0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_values("a,b"), std::invalid_argument);
    CHECK_THROWS_AS(plant_by_id("P4"), std::invalid_argument);
}

TEST_CASE("advisor leaves") {
    CHECK(advise({DerivativeAvailability::none, false, true, 1}).scheme == "eADRC");
    CHECK(advise({DerivativeAvailability::none, true, false, 1}).scheme == "oADRC-A");
    CHECK(advise({DerivativeAvailability::all, false, false, 1}).scheme == "oADRC-B");
    CHECK(advise({DerivativeAvailability::all, true, true, 1}).scheme == "eADRC");
    CHECK(advise({DerivativeAvailability::partial, true, false, 2}).scheme == "oADRC-A2");
    CHECK_FALSE(advise({DerivativeAvailability::partial, true, false, 1}).rationale.empty());
    CHECK_THROWS_AS(parse_availability("some"), std::invalid_argument);
}

TEST_CASE("export formats") {
    const std::vector<BodePoint> pts{{1.0, -6.0, -90.0}, {0.1, 0.5, 1e-20}};
    CHECK(bode_csv(pts) == "omega_rad_s,mag_db,phase_deg\n1,-6,-90\n0.10000000000000001,0.5,9.9999999999999995e-21\n");
    const RationalTf g(Polynomial{1728, 720}, Polynomial{0, 51, 1}, 0.2);
    const nlohmann::json j = to_json(g);
    CHECK(j["num"] == nlohmann::json::array({1728.0, 720.0}));
    CHECK(j["delay"] == 0.2);
    const RationalTf back = rational_tf_from_json(j);
    CHECK(back.num() == g.num());
    CHECK(back.den() == g.den());
    CHECK(back.delay() == g.delay());
    CHECK(to_json(Margins{})["gain_margin_db"].is_null());
}
