#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fcnlay/layout/analysis.hpp"
#include "fcnlay/layout/check.hpp"
#include "fcnlay/network/logic_network.hpp"
#include "fcnlay/ortho/ortho.hpp"
#include "test_util.hpp"

#include <chrono>
#include <cstdint>
#include <memory>
#include <random>
#include <string>

using namespace fcnlay;

namespace
{

[[nodiscard]] std::shared_ptr<logic_network> random_substituted(std::mt19937_64& rng,
                                                                const int gates,
                                                                const int pis)
{
    return std::make_shared<logic_network>(
        substitute_fanouts(testutil::random_network(rng, gates, pis)));
}

}  // namespace

TEST_CASE("edge coloring separates fan-ins and fan-outs")
{
    std::mt19937_64 rng{41};
    for (int i = 0; i < 50; ++i)
    {
        const auto gates = 3 + static_cast<int>(rng() % 100);
        const auto net = random_substituted(rng, gates, 2 + static_cast<int>(rng() % 4));
        const auto colors = color_edges(*net);
        REQUIRE(colors.size() == net->num_edges());
        for (std::uint32_t v = 0; v < net->num_vertices(); ++v)
        {
            const auto& ins = net->in_edges(v);
            const auto& outs = net->out_edges(v);
            REQUIRE(ins.size() <= 2);
            REQUIRE(outs.size() <= 2);
            if (ins.size() == 2)
            {
                CHECK(colors[ins[0]] != colors[ins[1]]);
            }
            if (outs.size() == 2)
            {
                CHECK(colors[outs[0]] != colors[outs[1]]);
            }
        }
    }
}

TEST_CASE("edge coloring rejects unsubstituted networks")
{
    auto net = std::make_shared<logic_network>("wide");
    const auto x = net->add_vertex(logic_op::PI, "x");
    for (int i = 0; i < 3; ++i)
    {
        const auto n = net->add_vertex(logic_op::NOT);
        net->add_edge(x, 0, n, 0);
        const auto y = net->add_vertex(logic_op::PO, "y" + std::to_string(i));
        net->add_edge(n, 0, y, 0);
    }
    net->finalize();
    CHECK_THROWS_WITH_AS((void)color_edges(*net),
                         doctest::Contains("substitute"), fcn_error);
    CHECK_THROWS_AS((void)ortho_layout(net, {}), fcn_error);
}

TEST_CASE("random networks lay out validly in every pin mode")
{
    std::mt19937_64 rng{43};
    for (int i = 0; i < 12; ++i)
    {
        const auto gates = 5 + static_cast<int>(rng() % 56);
        const auto net = random_substituted(rng, gates, 2 + static_cast<int>(rng() % 4));

        for (const int mode : {0, 1, 2})
        {
            ortho_parameters params{};
            params.io_pins = mode >= 1;
            params.border_io = mode == 2;
            const auto lyt = ortho_layout(net, params);
            CHECK(check_validity(lyt).empty());
            CHECK(throughput_denominator(lyt) == 1);
            std::mt19937_64 vec_rng{rng()};
            CHECK(testutil::functionally_equivalent(*net, lyt, vec_rng));

            const auto v = static_cast<std::uint64_t>(net->num_vertices());
            CHECK(static_cast<std::uint64_t>(lyt.width()) <= v + 2);
            CHECK(static_cast<std::uint64_t>(lyt.height()) <= v + 2);

            if (params.border_io)
            {
                for (const auto pi : net->pis())
                {
                    const auto t = lyt.tile_of(pi);
                    REQUIRE(t.has_value());
                    CHECK((t->x == 0 || t->y == 0));
                }
            }
            if (!params.io_pins)
            {
                for (const auto pi : net->pis())
                {
                    CHECK_FALSE(lyt.tile_of(pi).has_value());
                }
            }
        }
    }
}

TEST_CASE("placement is deterministic")
{
    std::mt19937_64 rng_a{77};
    std::mt19937_64 rng_b{77};
    const auto net_a = random_substituted(rng_a, 30, 4);
    const auto net_b = random_substituted(rng_b, 30, 4);
    ortho_parameters params{};
    params.border_io = true;
    const auto lyt_a = ortho_layout(net_a, params);
    const auto lyt_b = ortho_layout(net_b, params);
    const auto line_a = format_stats_line(layout_stats(lyt_a));
    const auto line_b = format_stats_line(layout_stats(lyt_b));
    CHECK(line_a == line_b);
}

TEST_CASE("compacting drops only removable lines")
{
    std::mt19937_64 rng{51};
    for (int i = 0; i < 6; ++i)
    {
        const auto net = random_substituted(rng, 20, 3);
        ortho_parameters plain{};
        plain.io_pins = true;
        auto squeezed = plain;
        squeezed.compact = true;
        const auto a = ortho_layout(net, plain);
        const auto b = ortho_layout(net, squeezed);
        CHECK(b.width() <= a.width());
        CHECK(b.height() <= a.height());
        CHECK(check_validity(b).empty());
        std::mt19937_64 vec_rng{rng()};
        CHECK(testutil::functionally_equivalent(*net, b, vec_rng));
    }
}

TEST_CASE("two hundred gates place in under a second")
{
    std::mt19937_64 rng{61};
    const auto net = random_substituted(rng, 200, 8);
    ortho_parameters params{};
    params.border_io = true;
    const auto started = std::chrono::steady_clock::now();
    const auto lyt = ortho_layout(net, params);
    const auto elapsed = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - started).count();
    CHECK(elapsed < 1.0);
    CHECK(check_validity(lyt).empty());
}

TEST_CASE("layout carries the diagonal clocking")
{
    std::mt19937_64 rng{71};
    const auto net = random_substituted(rng, 10, 2);
    const auto lyt = ortho_layout(net, {});
    for (std::uint32_t y = 0; y < lyt.height(); ++y)
    {
        for (std::uint32_t x = 0; x < lyt.width(); ++x)
        {
            const auto clk = lyt.clock_at({x, y});
            REQUIRE(clk.has_value());
            CHECK(*clk == (x + y) % 4);
        }
    }
}
