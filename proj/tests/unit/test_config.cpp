#include <doctest.h>

#include <fstream>
#include <string>

#include "qring/config.hpp"
#include "qring/error.hpp"

using namespace qring;

namespace {

std::string write_ini(const std::string& name, const std::string& text)
{
    const std::string path = std::string(QRING_TEST_TMP) + "/" + name;
    std::ofstream(path) << text;
    return path;
}

} // namespace

TEST_SUITE("config")
{
    TEST_CASE("dimensionless block with solver settings")
    {
        const auto cfg = load_config(write_ini("dimless.ini", "[dimensionless]\nv = 100\na = 0.5\nr_i = 0.3\n"
                                                              "[solver]\nde = 0.02\nwindow = 5:60\nlevels = 3\n"));
        CHECK(cfg.params.v == 100.0);
        CHECK(cfg.params.a == 0.5);
        CHECK(cfg.params.b == 1.0);
        CHECK(cfg.params.r_i == 0.3);
        CHECK_FALSE(cfg.physical.has_value());
        CHECK(cfg.solver.de == 0.02);
        CHECK(cfg.solver.e_lo == 5.0);
        CHECK(cfg.solver.e_hi == 60.0);
        CHECK(cfg.solver.levels == 3);
    }

    TEST_CASE("physical block")
    {
        const auto cfg = load_config(write_ini("phys.ini", "[physical]\nrho_i = 9\nfield_B = 2.9\n"));
        REQUIRE(cfg.physical.has_value());
        CHECK(cfg.params.r_i == doctest::Approx(0.3));
        CHECK(cfg.params.s == doctest::Approx(-0.00737));
        CHECK(cfg.params.b == doctest::Approx(2.9 / unit_scales(0.067, 30.0).field_T));
        CHECK(cfg.params.v == doctest::Approx(400.0));
    }

    TEST_CASE("rejected configs")
    {
        CHECK_THROWS_AS(load_config(write_ini("both.ini", "[physical]\nrho_i = 9\n[dimensionless]\nv = 10\n")),
                        ConfigError);
        CHECK_THROWS_AS(load_config(write_ini("typo.ini", "[dimensionless]\nvv = 10\n")), ConfigError);
        CHECK_THROWS_AS(load_config(write_ini("section.ini", "[dimensionles]\nv = 10\n")), ConfigError);
        CHECK_THROWS_AS(load_config(write_ini("nan.ini", "[dimensionless]\nv = deep\n")), ConfigError);
        CHECK_THROWS_AS(load_config(write_ini("range.ini", "[dimensionless]\nr_i = 1.2\n")), ConfigError);
        CHECK_THROWS_AS(load_config(write_ini("de.ini", "[solver]\nde = 0\n")), ConfigError);
        CHECK_THROWS_AS(load_config(std::string(QRING_TEST_TMP) + "/missing.ini"), ConfigError);
    }

    TEST_CASE("window syntax")
    {
        CHECK(parse_window("0:40") == std::pair{0.0, 40.0});
        CHECK(parse_window("2.5:1e2") == std::pair{2.5, 100.0});
        CHECK_THROWS_AS(parse_window("40"), ConfigError);
        CHECK_THROWS_AS(parse_window("40:10"), ConfigError);
        CHECK_THROWS_AS(parse_window("-1:10"), ConfigError);
        CHECK_THROWS_AS(parse_window("1:10x"), ConfigError);
    }
}
