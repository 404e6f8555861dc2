#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fcnlay/clocking/clocking_scheme.hpp"
#include "fcnlay/layout/check.hpp"
#include "fcnlay/layout/gate_layout.hpp"
#include "fcnlay/network/logic_network.hpp"
#include "fcnlay/ortho/ortho.hpp"
#include "fcnlay/techmap/cell_layout.hpp"
#include "fcnlay/techmap/gate_library.hpp"
#include "test_util.hpp"

#include <cstdint>
#include <fstream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace fcnlay;

namespace
{

[[nodiscard]] std::string shipped_library_text()
{
    std::ifstream in{std::string{FCNLAY_SOURCE_DIR} + "/data/qca_one.lib"};
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Midpoint cell of a block edge for the given port direction.
[[nodiscard]] std::pair<std::uint32_t, std::uint32_t>
port_cell(const gate_library& lib, const direction d)
{
    const auto mid_col = lib.block_cols() / 2;
    const auto mid_row = lib.block_rows() / 2;
    switch (d)
    {
        case direction::N: return {mid_col, 0};
        case direction::S: return {mid_col, lib.block_rows() - 1};
        case direction::W: return {0, mid_row};
        case direction::E: return {lib.block_cols() - 1, mid_row};
    }
    return {0, 0};
}

[[nodiscard]] bool port_occupied(const gate_library& lib, const library_block& blk,
                                 const direction d)
{
    const auto [cx, cy] = port_cell(lib, d);
    for (const auto& layer : blk.layers)
    {
        if (lib.glyph_meaning(layer[cy][cx]) != "empty")
        {
            return true;
        }
    }
    return false;
}

/// Two inverter chains crossing mid-grid on open clocking, pins placed.
struct crossing_fixture
{
    std::shared_ptr<logic_network> net{};
    std::shared_ptr<gate_layout> layout{};
};

[[nodiscard]] crossing_fixture make_crossing_fixture()
{
    crossing_fixture fx{};
    fx.net = std::make_shared<logic_network>("cross");
    const auto x0 = fx.net->add_vertex(logic_op::PI, "x0");
    const auto x1 = fx.net->add_vertex(logic_op::PI, "x1");
    const auto n0 = fx.net->add_vertex(logic_op::NOT);
    const auto n1 = fx.net->add_vertex(logic_op::NOT);
    const auto y0 = fx.net->add_vertex(logic_op::PO, "y0");
    const auto y1 = fx.net->add_vertex(logic_op::PO, "y1");
    fx.net->add_edge(x0, 0, n0, 0);
    fx.net->add_edge(x1, 0, n1, 0);
    fx.net->add_edge(n0, 0, y0, 0);
    fx.net->add_edge(n1, 0, y1, 0);
    fx.net->finalize();
    const auto e_h = fx.net->out_edges(x0)[0];
    const auto e_v = fx.net->out_edges(x1)[0];

    fx.layout = std::make_shared<gate_layout>(3, 3, scheme_from_name("open4"), fx.net);
    auto& lyt = *fx.layout;
    lyt.assign_clock({0, 1}, 0);
    lyt.assign_clock({1, 0}, 0);
    lyt.assign_clock({1, 1}, 1);
    lyt.assign_clock({2, 1}, 2);
    lyt.assign_clock({1, 2}, 2);
    lyt.assign_clock({2, 2}, 3);
    lyt.assign_clock({0, 2}, 3);
    lyt.assign_logic_vertex({0, 1}, x0, true);
    lyt.assign_logic_vertex({1, 0}, x1, true);
    lyt.assign_logic_vertex({2, 1}, n0);
    lyt.assign_logic_vertex({1, 2}, n1);
    lyt.assign_logic_vertex({2, 2}, y0, false, true);
    lyt.assign_logic_vertex({0, 2}, y1, false, true);
    lyt.assign_wire({1, 1}, e_h, wire_layer::GROUND, direction::W, direction::E);
    lyt.assign_wire({1, 1}, e_v, wire_layer::CROSSING, direction::N, direction::S);
    return fx;
}

}  // namespace

TEST_CASE("shipped library obeys its structural contract")
{
    const auto lib = load_library("qca-one");
    CHECK(lib.name() == "qca-one");
    CHECK(lib.block_rows() == 5);
    CHECK(lib.block_cols() == 5);
    CHECK(lib.crossover() == crossover_style::SECOND_LAYER);
    CHECK(lib.variants().size() == 88);

    for (const auto& [name, blk] : lib.variants())
    {
        CAPTURE(name);
        REQUIRE(!blk.layers.empty());
        for (const auto& matrix : blk.layers)
        {
            REQUIRE(matrix.size() == lib.block_rows());
            for (const auto& row : matrix)
            {
                REQUIRE(row.size() == lib.block_cols());
                for (const char g : row)
                {
                    CHECK_NOTHROW((void)lib.glyph_meaning(g));
                }
            }
        }
        for (const auto d : blk.ins)
        {
            CHECK(port_occupied(lib, blk, d));
        }
        for (const auto d : blk.outs)
        {
            CHECK(port_occupied(lib, blk, d));
        }
        if (blk.layers.size() == 2)
        {
            CHECK(blk.layer_runs.size() == 2);
        }
    }
}

TEST_CASE("lookup ignores port order and misses honestly")
{
    const auto lib = load_library("qca-one");
    const auto* a = lib.find("crossing", {direction::N, direction::W},
                             {direction::S, direction::E});
    const auto* b = lib.find("crossing", {direction::W, direction::N},
                             {direction::E, direction::S});
    REQUIRE(a != nullptr);
    CHECK(a == b);

    CHECK(lib.find("and", {direction::W, direction::N, direction::E}, {direction::S}) ==
          nullptr);
    CHECK(lib.find("nand", {direction::W, direction::N}, {direction::E}) == nullptr);
    CHECK(lib.find("wire", {direction::W}, {direction::W}) == nullptr);

    CHECK(lib.glyph_meaning('.') == "empty");
    CHECK(lib.glyph_meaning('x') == "normal");
    CHECK(lib.glyph_meaning('i') == "input");
    CHECK_THROWS_AS((void)lib.glyph_meaning('z'), fcn_error);
}

TEST_CASE("loading by path matches the built-in library")
{
    const auto by_path = load_library(std::string{FCNLAY_SOURCE_DIR} + "/data/qca_one.lib");
    CHECK(by_path.name() == "qca-one");
    CHECK(by_path.variants().size() == 88);
    CHECK_THROWS_AS((void)load_library("no-such-library"), fcn_error);
}

TEST_CASE("mapping scales dimensions by the block size")
{
    std::mt19937_64 rng{83};
    const auto lib = load_library("qca-one");
    for (int i = 0; i < 8; ++i)
    {
        const auto net = std::make_shared<logic_network>(
            substitute_fanouts(testutil::random_network(rng, 4 + static_cast<int>(rng() % 30),
                                                        2 + static_cast<int>(rng() % 3))));
        ortho_parameters params{};
        params.border_io = true;
        const auto lyt = ortho_layout(net, params);
        const auto cells = apply_library(lyt, lib);
        CHECK(cells.width() == lyt.width() * 5);
        CHECK(cells.height() == lyt.height() * 5);
        CHECK(cells.num_cells() > 0);
        CHECK(cells.name() == net->name());
        CHECK(cells.phases() == 4);

        // every cell inherits the clock of the tile it came from
        for (const auto& [pos, c] : cells.cells())
        {
            const tile t{pos.x / 5, pos.y / 5};
            const auto expected = lyt.clock_at(t);
            REQUIRE(expected.has_value());
            CHECK(c.clock == *expected);
        }

        // pin labels survive mapping, one set per placed input and output
        std::set<std::string> in_labels{};
        std::set<std::string> out_labels{};
        for (const auto& [pos, c] : cells.cells())
        {
            static_cast<void>(pos);
            if (c.kind == cell_kind::INPUT)
            {
                in_labels.insert(c.label);
            }
            if (c.kind == cell_kind::OUTPUT)
            {
                out_labels.insert(c.label);
            }
        }
        CHECK(in_labels.size() == net->pis().size());
        CHECK(out_labels.size() == net->pos().size());
    }
}

TEST_CASE("abutting blocks meet port to port")
{
    std::mt19937_64 rng{97};
    const auto lib = load_library("qca-one");
    const auto net = std::make_shared<logic_network>(
        substitute_fanouts(testutil::random_network(rng, 15, 3)));
    ortho_parameters params{};
    params.io_pins = true;
    const auto lyt = ortho_layout(net, params);
    const auto cells = apply_library(lyt, lib);

    const auto occupied = [&](const std::uint32_t x, const std::uint32_t y) {
        return cells.cell_at({x, y, 0}) != nullptr || cells.cell_at({x, y, 1}) != nullptr;
    };
    for (const auto& [e, path] : trace_edge_paths(lyt))
    {
        REQUIRE(path.has_value());
        const auto& tl = path->tiles;
        for (std::size_t i = 0; i + 1 < tl.size(); ++i)
        {
            const auto a = tl[i];
            const auto b = tl[i + 1];
            if (b.x == a.x + 1)
            {
                CHECK(occupied(a.x * 5 + 4, a.y * 5 + 2));
                CHECK(occupied(b.x * 5, b.y * 5 + 2));
            }
            else if (a.x == b.x + 1)
            {
                CHECK(occupied(a.x * 5, a.y * 5 + 2));
                CHECK(occupied(b.x * 5 + 4, b.y * 5 + 2));
            }
            else if (b.y == a.y + 1)
            {
                CHECK(occupied(a.x * 5 + 2, a.y * 5 + 4));
                CHECK(occupied(b.x * 5 + 2, b.y * 5));
            }
            else
            {
                CHECK(occupied(a.x * 5 + 2, a.y * 5));
                CHECK(occupied(b.x * 5 + 2, b.y * 5 + 4));
            }
        }
    }
}

TEST_CASE("every fuzzed layout finds covering blocks")
{
    std::mt19937_64 rng{103};
    const auto lib = load_library("qca-one");
    int crossings_seen = 0;
    for (int i = 0; i < 40; ++i)
    {
        const auto net = std::make_shared<logic_network>(
            substitute_fanouts(testutil::random_network(rng, 3 + static_cast<int>(rng() % 45),
                                                        2 + static_cast<int>(rng() % 4))));
        ortho_parameters params{};
        params.io_pins = (i % 3) != 0;
        params.border_io = (i % 3) == 2;
        const auto lyt = ortho_layout(net, params);
        const auto cells = apply_library(lyt, lib);
        CHECK(cells.width() == lyt.width() * 5);
        CHECK(cells.height() == lyt.height() * 5);
        bool has_upper = false;
        for (const auto& [pos, c] : cells.cells())
        {
            static_cast<void>(c);
            if (pos.layer == 1)
            {
                has_upper = true;
            }
        }
        bool layout_has_crossing = false;
        for (const auto t : lyt.occupied_tiles())
        {
            if (lyt.is_crossing_tile(t))
            {
                layout_has_crossing = true;
            }
        }
        CHECK(has_upper == layout_has_crossing);
        crossings_seen += layout_has_crossing ? 1 : 0;
    }
    // the fuzz corpus must actually exercise the crossing path
    CHECK(crossings_seen > 0);
}

TEST_CASE("second-layer and coplanar crossings emit differently")
{
    const auto fx = make_crossing_fixture();
    REQUIRE(check_validity(*fx.layout).empty());

    const auto stacked = load_library("qca-one");
    const auto mapped = apply_library(*fx.layout, stacked);
    bool upper = false;
    bool rotated = false;
    for (const auto& [pos, c] : mapped.cells())
    {
        upper = upper || pos.layer == 1;
        rotated = rotated || c.rotated;
    }
    CHECK(upper);
    CHECK_FALSE(rotated);

    auto text = shipped_library_text();
    const auto anchor = text.find("crossover second-layer");
    REQUIRE(anchor != std::string::npos);
    text.replace(anchor, std::string{"crossover second-layer"}.size(), "crossover coplanar");
    const auto coplanar = gate_library::parse(text, "patched");
    CHECK(coplanar.crossover() == crossover_style::COPLANAR);
    const auto flat = apply_library(*fx.layout, coplanar);
    upper = false;
    rotated = false;
    for (const auto& [pos, c] : flat.cells())
    {
        upper = upper || pos.layer == 1;
        rotated = rotated || c.rotated;
    }
    CHECK_FALSE(upper);
    CHECK(rotated);

    // pin labels of the fixture survive both styles
    std::set<std::string> labels{};
    for (const auto& [pos, c] : mapped.cells())
    {
        static_cast<void>(pos);
        if (!c.label.empty())
        {
            labels.insert(c.label);
        }
    }
    CHECK(labels == std::set<std::string>{"x0", "x1", "y0", "y1"});
}

TEST_CASE("format violations are rejected with the origin named")
{
    const std::string header = "library tiny\nversion 1\nblock_size 5 5\n"
                               "crossover second-layer\n"
                               "alphabet . empty x normal i input o output\n\n";
    const std::string wire_block = "block w kind=wire in=W out=E\n"
                                   ". . . . .\n"
                                   ". . . . .\n"
                                   "x x x x x\n"
                                   ". . . . .\n"
                                   ". . . . .\n";

    CHECK_NOTHROW((void)gate_library::parse(header + wire_block, "good"));

    const auto check_rejected = [&](const std::string& text) {
        CHECK_THROWS_WITH_AS((void)gate_library::parse(text, "broken"),
                             doctest::Contains("broken"), fcn_error);
    };

    // glyph outside the alphabet
    check_rejected(header + "block w kind=wire in=W out=E\n"
                            ". . . . .\n. . . . .\nx x z x x\n. . . . .\n. . . . .\n");
    // too few matrix rows
    check_rejected(header + "block w kind=wire in=W out=E\n"
                            ". . . . .\nx x x x x\n. . . . .\n. . . . .\n");
    // row with the wrong number of columns
    check_rejected(header + "block w kind=wire in=W out=E\n"
                            ". . . . .\n. . . . .\nx x x x\n. . . . .\n. . . . .\n");
    // declared port without a cell at its edge midpoint
    check_rejected(header + "block w kind=wire in=W out=E\n"
                            ". . . . .\n. . . . .\n. x x x x\n. . . . .\n. . . . .\n");
    // second layer promised but missing
    check_rejected(header + "block c kind=crossing in=W,N out=E,S layers=2\n"
                            ". . x . .\n. . x . .\nx x x x x\n. . x . .\n. . x . .\n");
    // no library name at all
    check_rejected("version 1\nblock_size 5 5\ncrossover second-layer\n"
                   "alphabet . empty x normal\n\n" + wire_block);
}

TEST_CASE("block size is a library property, not a constant")
{
    const std::string text = "library micro\nversion 1\nblock_size 3 3\n"
                             "crossover second-layer\n"
                             "alphabet . empty x normal i input o output\n\n"
                             "block in kind=pi out=E\n"
                             ". . .\n"
                             ". i x\n"
                             ". . .\n"
                             "block out kind=po in=W\n"
                             ". . .\n"
                             "x o .\n"
                             ". . .\n";
    const auto lib = gate_library::parse(text, "micro");
    CHECK(lib.block_rows() == 3);

    auto net = std::make_shared<logic_network>("pass");
    const auto x = net->add_vertex(logic_op::PI, "x");
    const auto y = net->add_vertex(logic_op::PO, "y");
    net->add_edge(x, 0, y, 0);
    net->finalize();
    ortho_parameters params{};
    params.io_pins = true;
    const auto lyt = ortho_layout(net, params);
    const auto cells = apply_library(lyt, lib);
    CHECK(cells.width() == lyt.width() * 3);
    CHECK(cells.height() == lyt.height() * 3);
}

TEST_CASE("uncovered configurations name the tile and ports")
{
    // a NAND vertex has no block in the shipped library
    auto net = std::make_shared<logic_network>("odd");
    const auto a = net->add_vertex(logic_op::PI, "a");
    const auto b = net->add_vertex(logic_op::PI, "b");
    const auto g = net->add_vertex(logic_op::NAND);
    const auto y = net->add_vertex(logic_op::PO, "y");
    net->add_edge(a, 0, g, 0);
    net->add_edge(b, 0, g, 1);
    net->add_edge(g, 0, y, 0);
    net->finalize();

    const auto lyt = ortho_layout(net, {});
    const auto lib = load_library("qca-one");
    CHECK_THROWS_WITH_AS((void)apply_library(lyt, lib), doctest::Contains("nand"),
                         fcn_error);
}
