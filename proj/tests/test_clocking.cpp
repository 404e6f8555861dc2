#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fcnlay/clocking/clocking_scheme.hpp"

#include <cstdio>
#include <fstream>
#include <string>

using namespace fcnlay;

namespace
{
const std::string schemes_path =
    std::string{FCNLAY_SOURCE_DIR} + "/data/clock_schemes.json";
}

TEST_CASE("builtin scheme names resolve, unknown names do not")
{
    const auto& names = builtin_scheme_names();
    CHECK(names.size() == 7);
    for (const auto& name : names)
    {
        const auto scheme = scheme_from_name(name);
        CHECK(scheme.name == name);
        CHECK(scheme.phases >= 3);
        CHECK(scheme.phases <= 4);
    }
    CHECK(scheme_from_name("USE").name == "use");
    CHECK(scheme_from_name("2DDWave4").name == "2ddwave4");
    CHECK_THROWS_AS((void)scheme_from_name("nonsense"), fcn_error);
    CHECK_THROWS_AS((void)scheme_from_name(""), fcn_error);
}

TEST_CASE("diagonal wave schemes follow the (x + y) mod N rule")
{
    for (const unsigned phases : {3u, 4u})
    {
        const auto scheme = scheme_from_name("2ddwave" + std::to_string(phases));
        CHECK(scheme.regular);
        CHECK(scheme.phases == phases);
        for (std::uint64_t y = 0; y < 12; ++y)
        {
            for (std::uint64_t x = 0; x < 12; ++x)
            {
                REQUIRE(scheme.clock_number(x, y) == (x + y) % phases);
            }
        }
    }
}

TEST_CASE("regular cutouts are in range, periodic, and free of dead zones")
{
    for (const auto& name : builtin_scheme_names())
    {
        const auto scheme = scheme_from_name(name);
        if (!scheme.regular)
        {
            continue;
        }
        INFO("scheme ", name);
        const auto rows = scheme.cutout_rows();
        const auto cols = scheme.cutout_cols();
        REQUIRE(rows > 0);
        REQUIRE(cols > 0);
        for (const auto& row : scheme.cutout)
        {
            REQUIRE(row.size() == cols);
            for (const auto entry : row)
            {
                REQUIRE(entry < scheme.phases);
            }
        }
        // periodicity in both axes
        for (std::uint64_t y = 0; y < 2 * rows; ++y)
        {
            for (std::uint64_t x = 0; x < 2 * cols; ++x)
            {
                REQUIRE(scheme.clock_number(x, y) == scheme.clock_number(x + cols, y));
                REQUIRE(scheme.clock_number(x, y) == scheme.clock_number(x, y + rows));
            }
        }
        // every zone can hand its data to some cardinal neighbor
        for (std::uint64_t y = rows; y < 2 * rows; ++y)
        {
            for (std::uint64_t x = cols; x < 2 * cols; ++x)
            {
                const auto here = *scheme.clock_number(x, y);
                const auto successor =
                    static_cast<std::uint8_t>((here + 1) % scheme.phases);
                const bool reachable = *scheme.clock_number(x + 1, y) == successor ||
                                       *scheme.clock_number(x - 1, y) == successor ||
                                       *scheme.clock_number(x, y + 1) == successor ||
                                       *scheme.clock_number(x, y - 1) == successor;
                REQUIRE(reachable);
            }
        }
    }
}

TEST_CASE("the first cutout row of use counts up")
{
    const auto use = scheme_from_name("use");
    REQUIRE(use.cutout_rows() == 4);
    REQUIRE(use.cutout_cols() == 4);
    for (std::uint64_t x = 0; x < 4; ++x)
    {
        CHECK(*use.clock_number(x, 0) == x);
    }
}

TEST_CASE("open schemes defer zone numbers to the layout")
{
    for (const unsigned phases : {3u, 4u})
    {
        const auto scheme = scheme_from_name("open" + std::to_string(phases));
        CHECK_FALSE(scheme.regular);
        CHECK(scheme.phases == phases);
        CHECK_FALSE(scheme.clock_number(0, 0).has_value());
        CHECK_FALSE(scheme.clock_number(5, 9).has_value());
    }
}

TEST_CASE("scheme files load standalone and table forms")
{
    const auto use_from_file = load_scheme_file(schemes_path, "use");
    const auto use_builtin = scheme_from_name("use");
    CHECK(use_from_file.cutout == use_builtin.cutout);
    CHECK(use_from_file.phases == use_builtin.phases);

    const auto custom_path = std::string{FCNLAY_BINARY_DIR} + "/custom_scheme.json";
    {
        std::ofstream out{custom_path};
        out << R"({"name": "stripes", "phases": 4,
                   "cutout": [[0, 1, 2, 3]]})";
    }
    const auto custom = load_scheme_file(custom_path);
    CHECK(custom.name == "stripes");
    CHECK(custom.phases == 4);
    CHECK(custom.cutout_rows() == 1);
    CHECK(*custom.clock_number(5, 7) == 1);

    CHECK_THROWS_AS((void)load_scheme_file("/nonexistent.json"), fcn_error);

    const auto bad_path = std::string{FCNLAY_BINARY_DIR} + "/bad_scheme.json";
    {
        std::ofstream out{bad_path};
        out << R"({"name": "bad", "phases": 2, "cutout": [[0, 7]]})";
    }
    CHECK_THROWS_AS((void)load_scheme_file(bad_path), fcn_error);

    const auto garbage_path = std::string{FCNLAY_BINARY_DIR} + "/garbage_scheme.json";
    {
        std::ofstream out{garbage_path};
        out << "{ not json";
    }
    CHECK_THROWS_AS((void)load_scheme_file(garbage_path), fcn_error);
}
