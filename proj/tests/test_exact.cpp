#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fcnlay/clocking/clocking_scheme.hpp"
#include "fcnlay/exact/exact.hpp"
#include "fcnlay/layout/analysis.hpp"
#include "fcnlay/layout/check.hpp"
#include "fcnlay/layout/gate_layout.hpp"
#include "fcnlay/network/logic_network.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <utility>
#include <vector>

using namespace fcnlay;

namespace
{

/// x -> NOT -> NOT -> y
[[nodiscard]] std::shared_ptr<logic_network> not_chain(const int length)
{
    auto net = std::make_shared<logic_network>("chain");
    auto prev = net->add_vertex(logic_op::PI, "x");
    for (int i = 0; i < length; ++i)
    {
        const auto n = net->add_vertex(logic_op::NOT);
        net->add_edge(prev, 0, n, 0);
        prev = n;
    }
    const auto y = net->add_vertex(logic_op::PO, "y");
    net->add_edge(prev, 0, y, 0);
    net->finalize();
    return net;
}

/// x -> FANOUT -> (NOT, NOT) -> AND -> y
[[nodiscard]] std::shared_ptr<logic_network> reconvergent_net()
{
    auto net = std::make_shared<logic_network>("reconv");
    const auto x = net->add_vertex(logic_op::PI, "x");
    const auto f = net->add_vertex(logic_op::FANOUT);
    const auto n1 = net->add_vertex(logic_op::NOT);
    const auto n2 = net->add_vertex(logic_op::NOT);
    const auto g = net->add_vertex(logic_op::AND);
    const auto y = net->add_vertex(logic_op::PO, "y");
    net->add_edge(x, 0, f, 0);
    net->add_edge(f, 0, n1, 0);
    net->add_edge(f, 1, n2, 0);
    net->add_edge(n1, 0, g, 0);
    net->add_edge(n2, 0, g, 1);
    net->add_edge(g, 0, y, 0);
    net->finalize();
    return net;
}

/// x -> FANOUT -> (NOT -> y0, NOT -> y1); three placeable vertices that do
/// not fit a 1xN strip because the fan-out needs two successor neighbors.
[[nodiscard]] std::shared_ptr<logic_network> forked_net()
{
    auto net = std::make_shared<logic_network>("fork");
    const auto x = net->add_vertex(logic_op::PI, "x");
    const auto f = net->add_vertex(logic_op::FANOUT);
    const auto n1 = net->add_vertex(logic_op::NOT);
    const auto n2 = net->add_vertex(logic_op::NOT);
    const auto y0 = net->add_vertex(logic_op::PO, "y0");
    const auto y1 = net->add_vertex(logic_op::PO, "y1");
    net->add_edge(x, 0, f, 0);
    net->add_edge(f, 0, n1, 0);
    net->add_edge(f, 1, n2, 0);
    net->add_edge(n1, 0, y0, 0);
    net->add_edge(n2, 0, y1, 0);
    net->finalize();
    return net;
}

[[nodiscard]] exact_parameters base_params(const std::string& scheme = "2ddwave4")
{
    exact_parameters p{};
    p.scheme = scheme_from_name(scheme);
    return p;
}

}  // namespace

TEST_CASE("dimension stream ordering")
{
    const auto dims = dimension_sequence(5, 40);
    REQUIRE(dims.size() == 40);
    std::uint64_t prev_area = 0;
    std::uint32_t prev_gap = 0;
    bool prev_wide = false;
    for (const auto& [w, h] : dims)
    {
        const auto area = static_cast<std::uint64_t>(w) * h;
        CHECK(area >= 5);
        REQUIRE(area >= prev_area);
        const auto gap = w > h ? w - h : h - w;
        if (area == prev_area)
        {
            // same area: squarer shapes first, then tall before wide
            REQUIRE(gap >= prev_gap);
            if (gap == prev_gap)
            {
                CHECK(prev_wide == false);
                CHECK(w > h);
            }
        }
        prev_area = area;
        prev_gap = gap;
        prev_wide = w > h;
    }

    // every admissible pair up to the largest streamed area must be present
    const auto max_area = static_cast<std::uint64_t>(dims.back().first) * dims.back().second;
    for (std::uint32_t w = 1; w <= max_area; ++w)
    {
        for (std::uint32_t h = 1; h <= max_area; ++h)
        {
            const auto area = static_cast<std::uint64_t>(w) * h;
            if (area < 5 || area >= max_area)
            {
                continue;
            }
            const auto found =
                std::find(dims.begin(), dims.end(), std::pair{w, h}) != dims.end();
            CHECK(found);
        }
    }

    dimension_stream stream{5};
    for (const auto& expected : dims)
    {
        const auto got = stream.next();
        REQUIRE(got.has_value());
        CHECK(*got == expected);
    }

    dimension_stream bounded{5};
    while (bounded.next(8).has_value())
    {
    }
    CHECK_FALSE(bounded.next(8).has_value());
}

TEST_CASE("chain of inverters packs without wires")
{
    const auto net = not_chain(2);
    auto params = base_params();
    const auto result = exact_layout(net, params);
    REQUIRE(result.status == exact_status::FOUND);
    REQUIRE(result.layout.has_value());
    const auto& lyt = *result.layout;
    CHECK(lyt.width() * lyt.height() == 2);
    CHECK(check_validity(lyt).empty());
    const auto stats = layout_stats(lyt);
    CHECK(stats.gate_count == 2);
    CHECK(stats.wire_count == 0);

    std::mt19937_64 rng{1};
    CHECK(testutil::functionally_equivalent(*net, lyt, rng));
}

TEST_CASE("reconvergent fan-out fits a square")
{
    const auto net = reconvergent_net();
    auto params = base_params();
    const auto result = exact_layout(net, params);
    REQUIRE(result.status == exact_status::FOUND);
    REQUIRE(result.layout.has_value());
    CHECK(result.layout->width() * result.layout->height() == 4);
    CHECK(check_validity(*result.layout).empty());
    std::mt19937_64 rng{2};
    CHECK(testutil::functionally_equivalent(*net, *result.layout, rng));
    CHECK(throughput_denominator(*result.layout) == 1);
}

TEST_CASE("areas match an exhaustive placement oracle")
{
    const auto nets = testutil::enumerate_small_dags(3);
    REQUIRE(nets.size() > 10);
    auto params = base_params();
    for (const auto& net : nets)
    {
        const auto oracle = testutil::reference_min_area(*net, 12);
        const auto result = exact_layout(net, params);
        if (oracle.has_value())
        {
            REQUIRE(result.status == exact_status::FOUND);
            REQUIRE(result.layout.has_value());
            const auto area = static_cast<std::uint64_t>(result.layout->width()) *
                              result.layout->height();
            CHECK(area == *oracle);
            CHECK(check_validity(*result.layout).empty());
        }
        else
        {
            // the oracle gave up at area 12; the engine must agree up there
            exact_parameters bounded = params;
            bounded.upper_bound = 12;
            const auto capped = exact_layout(net, bounded);
            CHECK(capped.status == exact_status::UNSAT_UP_TO_BOUND);
        }
    }
}

TEST_CASE("upper bound reports unsatisfiable dimensions")
{
    const auto net = forked_net();
    auto params = base_params();
    params.upper_bound = 3;
    const auto result = exact_layout(net, params);
    CHECK(result.status == exact_status::UNSAT_UP_TO_BOUND);
    CHECK_FALSE(result.layout.has_value());
    REQUIRE(result.explored.size() == 2);
    for (const auto& inst : result.explored)
    {
        CHECK(inst.outcome == instance_outcome::UNSATISFIABLE);
        CHECK(inst.width * inst.height == 3);
    }

    params.upper_bound = 4;
    const auto wider = exact_layout(net, params);
    REQUIRE(wider.status == exact_status::FOUND);
    CHECK(wider.layout->width() * wider.layout->height() == 4);
}

TEST_CASE("tiny global budget times out")
{
    std::mt19937_64 rng{5};
    const auto net = std::make_shared<logic_network>(
        substitute_fanouts(testutil::random_network(rng, 20, 4)));
    auto params = base_params();
    params.global_timeout_s = 1e-6;
    const auto result = exact_layout(net, params);
    CHECK(result.status == exact_status::TIMEOUT);
    CHECK_FALSE(result.layout.has_value());
}

TEST_CASE("parameter validation")
{
    const auto net = not_chain(2);
    auto params = base_params();
    params.wire_limit = 0;
    CHECK_THROWS_AS((void)exact_layout(net, params), fcn_error);

    auto unfinalized = std::make_shared<logic_network>("raw");
    (void)unfinalized->add_vertex(logic_op::PI, "x");
    CHECK_THROWS_AS((void)exact_layout(unfinalized, base_params()), fcn_error);

    CHECK_THROWS_AS((void)exact_layout(nullptr, base_params()), fcn_error);

    auto tight = base_params();
    tight.upper_bound = 1;
    CHECK_THROWS_AS((void)exact_layout(not_chain(2), tight), fcn_error);
}

TEST_CASE("wire limit restricts connection length")
{
    const auto net = not_chain(3);
    auto params = base_params();
    params.wire_limit = 1;
    const auto result = exact_layout(net, params);
    REQUIRE(result.status == exact_status::FOUND);
    CHECK(check_validity(*result.layout).empty());
    // each realized connection must use at most one wire tile
    const auto& lyt = *result.layout;
    const auto stats = layout_stats(lyt);
    CHECK(stats.wire_count <= 2 * 1 * stats.gate_count);
}

TEST_CASE("pure input-output networks place pins directly")
{
    auto net = std::make_shared<logic_network>("pass");
    const auto x = net->add_vertex(logic_op::PI, "x");
    const auto y = net->add_vertex(logic_op::PO, "y");
    net->add_edge(x, 0, y, 0);
    net->finalize();

    auto params = base_params();
    const auto result = exact_layout(net, params);
    REQUIRE(result.status == exact_status::FOUND);
    const auto& lyt = *result.layout;
    CHECK(lyt.width() * lyt.height() == 2);
    CHECK(check_validity(lyt).empty());
    const auto stats = layout_stats(lyt);
    CHECK(stats.gate_count == 2);
}

TEST_CASE("majority gate with border pins")
{
    auto net = std::make_shared<logic_network>("maj");
    const auto a = net->add_vertex(logic_op::PI, "a");
    const auto b = net->add_vertex(logic_op::PI, "b");
    const auto c = net->add_vertex(logic_op::PI, "c");
    const auto m = net->add_vertex(logic_op::MAJ);
    const auto y = net->add_vertex(logic_op::PO, "y");
    net->add_edge(a, 0, m, 0);
    net->add_edge(b, 0, m, 1);
    net->add_edge(c, 0, m, 2);
    net->add_edge(m, 0, y, 0);
    net->finalize();

    auto params = base_params("open4");
    params.border_io = true;
    params.crossings = true;
    params.upper_bound = 36;
    const auto result = exact_layout(net, params);
    REQUIRE(result.status == exact_status::FOUND);
    const auto& lyt = *result.layout;
    CHECK(check_validity(lyt).empty());

    for (std::uint32_t v = 0; v < net->num_vertices(); ++v)
    {
        const auto op = net->vertex(v).op;
        if (op != logic_op::PI && op != logic_op::PO)
        {
            continue;
        }
        const auto t = lyt.tile_of(v);
        REQUIRE(t.has_value());
        const bool border = t->x == 0 || t->y == 0 || t->x + 1 == lyt.width() ||
                            t->y + 1 == lyt.height();
        CHECK(border);
    }
    std::mt19937_64 rng{3};
    CHECK(testutil::functionally_equivalent(*net, lyt, rng));
}

TEST_CASE("desync never needs more area than balanced")
{
    std::mt19937_64 rng{17};
    for (int i = 0; i < 3; ++i)
    {
        const auto net = std::make_shared<logic_network>(
            substitute_fanouts(testutil::random_network(rng, 3, 2)));
        auto balanced = base_params("use");
        balanced.crossings = true;
        balanced.upper_bound = 36;
        auto desynced = balanced;
        desynced.desync = true;

        const auto a = exact_layout(net, balanced);
        const auto b = exact_layout(net, desynced);
        REQUIRE(a.status == exact_status::FOUND);
        REQUIRE(b.status == exact_status::FOUND);
        const auto area_a = static_cast<std::uint64_t>(a.layout->width()) * a.layout->height();
        const auto area_b = static_cast<std::uint64_t>(b.layout->width()) * b.layout->height();
        CHECK(area_b <= area_a);
        CHECK(check_validity(*a.layout).empty());
        CHECK(check_validity(*b.layout).empty());
        // balanced layouts pay no throughput penalty
        CHECK(throughput_denominator(*a.layout) == 1);
    }
}

TEST_CASE("latch tiles restore balance")
{
    const auto net = reconvergent_net();
    auto params = base_params("use");
    params.crossings = true;
    params.latches = true;
    params.upper_bound = 36;
    const auto result = exact_layout(net, params);
    REQUIRE(result.status == exact_status::FOUND);
    const auto& lyt = *result.layout;
    CHECK(check_validity(lyt).empty());
    CHECK(throughput_denominator(lyt) == 1);
    std::mt19937_64 rng{4};
    CHECK(testutil::functionally_equivalent(*net, lyt, rng));
}

TEST_CASE("parallel and sequential searches find equal areas")
{
    std::mt19937_64 rng{29};
    const auto net = std::make_shared<logic_network>(
        substitute_fanouts(testutil::random_network(rng, 4, 2)));
    auto params = base_params();
    params.crossings = true;
    params.upper_bound = 36;
    const auto sequential = exact_layout(net, params);

    params.parallel = true;
    params.workers = 2;
    const auto parallel = exact_layout(net, params);

    REQUIRE(sequential.status == exact_status::FOUND);
    REQUIRE(parallel.status == exact_status::FOUND);
    const auto area_s = static_cast<std::uint64_t>(sequential.layout->width()) *
                        sequential.layout->height();
    const auto area_p = static_cast<std::uint64_t>(parallel.layout->width()) *
                        parallel.layout->height();
    CHECK(area_s == area_p);
    CHECK(check_validity(*parallel.layout).empty());
}
