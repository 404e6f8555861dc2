#include "fcnlay/techmap/cell_layout.hpp"

#include "fcnlay/layout/check.hpp"
#include "fcnlay/techmap/gate_library.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <unordered_map>
#include <vector>

namespace fcnlay
{

namespace
{

[[nodiscard]] const char* kind_of(const logic_op op) noexcept
{
    switch (op)
    {
        case logic_op::AND: return "and";
        case logic_op::OR: return "or";
        case logic_op::NOT: return "inverter";
        case logic_op::MAJ: return "maj";
        case logic_op::FANOUT: return "fanout";
        case logic_op::PI: return "pi";
        case logic_op::PO: return "po";
        case logic_op::CONST0: return "const0";
        case logic_op::CONST1: return "const1";
        case logic_op::NAND: return "nand";
        case logic_op::NOR: return "nor";
        case logic_op::XOR: return "xor";
        case logic_op::XNOR: return "xnor";
        default: return "";
    }
}

/// Direction from tile a to an adjacent tile b.
[[nodiscard]] direction dir_between(const tile a, const tile b)
{
    if (b.y + 1 == a.y && b.x == a.x) return direction::N;
    if (b.y == a.y + 1 && b.x == a.x) return direction::S;
    if (b.x + 1 == a.x && b.y == a.y) return direction::W;
    if (b.x == a.x + 1 && b.y == a.y) return direction::E;
    throw fcn_error{"technology mapping: connection path tiles are not adjacent"};
}

[[nodiscard]] std::string describe_ports(const std::vector<direction>& ins,
                                         const std::vector<direction>& outs)
{
    std::string s = "in=";
    for (const auto d : ins) s += direction_letter(d);
    s += " out=";
    for (const auto d : outs) s += direction_letter(d);
    return s;
}

}  // namespace

cell_layout apply_library(const gate_layout& layout, const gate_library& lib)
{
    const auto& net = layout.network();
    cell_layout cells{layout.width() * lib.block_cols(), layout.height() * lib.block_rows(),
                      net.name(), static_cast<std::uint8_t>(layout.scheme().phases)};

    // Port sides of every traced connection, keyed by vertex.
    std::vector<std::vector<direction>> in_sides(net.num_vertices());
    std::vector<std::vector<direction>> out_sides(net.num_vertices());
    for (const auto& [edge_id, path] : trace_edge_paths(layout))
    {
        if (!path)
        {
            throw fcn_error{"technology mapping: connection " + std::to_string(edge_id) +
                            " has no contiguous path; run the design-rule check"};
        }
        const auto& e = net.edge(edge_id);
        const auto& tiles = path->tiles;
        out_sides[e.source].push_back(dir_between(tiles[0], tiles[1]));
        in_sides[e.target].push_back(dir_between(tiles[tiles.size() - 1], tiles[tiles.size() - 2]));
    }

    const auto emit = [&](const block_matrix& m, const tile t, const std::uint8_t cell_layer,
                          const std::uint8_t clock, const std::string& label) -> void
    {
        for (std::uint32_t r = 0; r < lib.block_rows(); ++r)
        {
            for (std::uint32_t c = 0; c < lib.block_cols(); ++c)
            {
                const auto& meaning = lib.glyph_meaning(m[r][c]);
                if (meaning == "empty")
                {
                    continue;
                }
                cell out;
                out.clock = clock;
                if (meaning == "normal")
                {
                    out.kind = cell_kind::NORMAL;
                }
                else if (meaning == "rotated")
                {
                    out.kind = cell_kind::NORMAL;
                    out.rotated = true;
                }
                else if (meaning == "input")
                {
                    out.kind = cell_kind::INPUT;
                    out.label = label;
                }
                else if (meaning == "output")
                {
                    out.kind = cell_kind::OUTPUT;
                    out.label = label;
                }
                else if (meaning == "const0")
                {
                    out.kind = cell_kind::CONST0;
                }
                else if (meaning == "const1")
                {
                    out.kind = cell_kind::CONST1;
                }
                else
                {
                    throw fcn_error{"technology mapping: unknown glyph meaning '" + meaning + "'"};
                }
                cells.assign_cell({t.x * lib.block_cols() + c, t.y * lib.block_rows() + r,
                                   cell_layer},
                                  std::move(out));
            }
        }
    };

    const auto uncovered = [&](const tile t, const std::string& kind,
                               const std::vector<direction>& ins,
                               const std::vector<direction>& outs) -> fcn_error
    {
        return fcn_error{"technology mapping: no '" + kind + "' block for tile (" +
                         std::to_string(t.x) + ", " + std::to_string(t.y) + ") with " +
                         describe_ports(ins, outs) + " in library " + lib.name()};
    };

    for (const auto t : layout.occupied_tiles())
    {
        const auto clock_opt = layout.clock_at(t);
        if (!clock_opt)
        {
            throw fcn_error{"technology mapping: tile (" + std::to_string(t.x) + ", " +
                            std::to_string(t.y) + ") has no clock number"};
        }
        const auto clock = *clock_opt;

        if (const auto v = layout.vertex_at(t))
        {
            const auto& vx = net.vertex(*v);
            const std::string kind = kind_of(vx.op);
            if (kind.empty())
            {
                throw fcn_error{"technology mapping: no block kind for operation at tile (" +
                                std::to_string(t.x) + ", " + std::to_string(t.y) + ")"};
            }
            auto ins = in_sides[*v];
            auto outs = out_sides[*v];
            // Connections that leave the placed region still need a block
            // port; hand them free sides deterministically.
            const auto used = [&](const direction d)
            {
                return std::find(ins.begin(), ins.end(), d) != ins.end() ||
                       std::find(outs.begin(), outs.end(), d) != outs.end();
            };
            constexpr std::array in_order{direction::W, direction::N, direction::E, direction::S};
            constexpr std::array out_order{direction::E, direction::S, direction::W, direction::N};
            while (ins.size() < net.in_degree(*v))
            {
                const auto free = std::find_if_not(in_order.begin(), in_order.end(), used);
                if (free == in_order.end())
                {
                    throw uncovered(t, kind, ins, outs);
                }
                ins.push_back(*free);
            }
            while (outs.size() < net.out_degree(*v))
            {
                const auto free = std::find_if_not(out_order.begin(), out_order.end(), used);
                if (free == out_order.end())
                {
                    throw uncovered(t, kind, ins, outs);
                }
                outs.push_back(*free);
            }
            const auto* blk = lib.find(kind, ins, outs);
            if (blk == nullptr)
            {
                throw uncovered(t, kind, ins, outs);
            }
            emit(blk->layers[0], t, 0, clock, vx.label);
            continue;
        }

        const auto& segments = layout.wires_at(t);
        if (segments.size() == 1)
        {
            const auto& seg = segments[0];
            const auto* blk = lib.find("wire", {seg.entry}, {seg.exit});
            if (blk == nullptr)
            {
                throw uncovered(t, "wire", {seg.entry}, {seg.exit});
            }
            emit(blk->layers[0], t, seg.layer == wire_layer::GROUND ? 0 : 1, clock, {});
            continue;
        }

        // Crossing tile: two perpendicular straight runs.
        const std::vector<direction> ins{segments[0].entry, segments[1].entry};
        const std::vector<direction> outs{segments[0].exit, segments[1].exit};
        if (lib.crossover() == crossover_style::COPLANAR)
        {
            const auto* blk = lib.find("crossing_coplanar", ins, outs);
            if (blk == nullptr)
            {
                throw uncovered(t, "crossing_coplanar", ins, outs);
            }
            emit(blk->layers[0], t, 0, clock, {});
            continue;
        }
        const auto* blk = lib.find("crossing", ins, outs);
        if (blk == nullptr || blk->layer_runs.size() != blk->layers.size())
        {
            throw uncovered(t, "crossing", ins, outs);
        }
        for (std::size_t li = 0; li < blk->layers.size(); ++li)
        {
            const auto entry = blk->layer_runs[li].first;
            const auto seg = std::find_if(segments.begin(), segments.end(),
                                          [&](const auto& s) { return s.entry == entry; });
            if (seg == segments.end())
            {
                throw uncovered(t, "crossing", ins, outs);
            }
            emit(blk->layers[li], t, seg->layer == wire_layer::GROUND ? 0 : 1, clock, {});
        }
    }
    return cells;
}

}  // namespace fcnlay
