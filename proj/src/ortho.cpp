#include "fcnlay/ortho/ortho.hpp"

#include "fcnlay/clocking/clocking_scheme.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace fcnlay
{

namespace
{

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

[[nodiscard]] std::size_t sibling(const std::vector<std::uint32_t>& edges, const std::uint32_t e)
{
    if (edges.size() < 2)
    {
        return npos;
    }
    return edges[0] == e ? edges[1] : edges[0];
}

}  // namespace

std::vector<edge_color> color_edges(const logic_network& net)
{
    if (!net.finalized())
    {
        throw fcn_error{"edge coloring: network must be finalized"};
    }
    for (std::uint32_t v = 0; v < net.num_vertices(); ++v)
    {
        if (net.in_degree(v) > 2 || net.out_degree(v) > 2)
        {
            throw fcn_error{"edge coloring: vertex degree exceeds 2; substitute fan-outs first"};
        }
    }
    // Conflicts (same-head or same-tail pairs) form paths and even cycles, so
    // alternating propagation always succeeds.
    constexpr std::uint8_t uncolored = 0xFF;
    std::vector<std::uint8_t> color(net.num_edges(), uncolored);
    std::vector<std::uint32_t> stack;
    for (std::uint32_t e0 = 0; e0 < net.num_edges(); ++e0)
    {
        if (color[e0] != uncolored)
        {
            continue;
        }
        color[e0] = static_cast<std::uint8_t>(edge_color::EAST);
        stack.assign(1, e0);
        while (!stack.empty())
        {
            const auto e = stack.back();
            stack.pop_back();
            const auto want = color[e] == static_cast<std::uint8_t>(edge_color::EAST)
                                  ? static_cast<std::uint8_t>(edge_color::SOUTH)
                                  : static_cast<std::uint8_t>(edge_color::EAST);
            for (const auto sib : {sibling(net.in_edges(net.edge(e).target), e),
                                   sibling(net.out_edges(net.edge(e).source), e)})
            {
                if (sib == npos)
                {
                    continue;
                }
                if (color[sib] == uncolored)
                {
                    color[sib] = want;
                    stack.push_back(static_cast<std::uint32_t>(sib));
                }
                else if (color[sib] != want)
                {
                    throw fcn_error{"edge coloring: conflicting constraints"};
                }
            }
        }
    }
    std::vector<edge_color> result(net.num_edges());
    for (std::size_t e = 0; e < result.size(); ++e)
    {
        result[e] = static_cast<edge_color>(color[e]);
    }
    return result;
}

namespace
{

struct staged_wire
{
    std::uint32_t edge{};
    std::uint32_t x{};
    std::uint32_t y{};
    direction entry{direction::W};
    direction exit{direction::E};
};

struct staged_layout
{
    std::vector<std::optional<std::pair<std::uint32_t, std::uint32_t>>> pos{};
    std::vector<staged_wire> wires{};
};

/// Drops rows and columns that hold nothing but straight pass-through wires;
/// the runs crossing them shorten by one tile and stay contiguous.
void compact_stage(staged_layout& stage)
{
    if (std::none_of(stage.pos.cbegin(), stage.pos.cend(), [](const auto& p) { return p.has_value(); }))
    {
        return;
    }
    for (bool improved = true; improved;)
    {
        improved = false;
        std::uint32_t max_x = 0;
        std::uint32_t max_y = 0;
        for (const auto& p : stage.pos)
        {
            if (p)
            {
                max_x = std::max(max_x, p->first);
                max_y = std::max(max_y, p->second);
            }
        }
        for (const auto& w : stage.wires)
        {
            max_x = std::max(max_x, w.x);
            max_y = std::max(max_y, w.y);
        }
        std::vector<bool> row_blocked(max_y + 1, false);
        std::vector<bool> col_blocked(max_x + 1, false);
        for (const auto& p : stage.pos)
        {
            if (p)
            {
                row_blocked[p->second] = true;
                col_blocked[p->first] = true;
            }
        }
        for (const auto& w : stage.wires)
        {
            if (!(w.entry == direction::N && w.exit == direction::S))
            {
                row_blocked[w.y] = true;
            }
            if (!(w.entry == direction::W && w.exit == direction::E))
            {
                col_blocked[w.x] = true;
            }
        }
        std::vector<std::uint32_t> row_map(max_y + 1);
        std::vector<std::uint32_t> col_map(max_x + 1);
        std::uint32_t next = 0;
        for (std::uint32_t r = 0; r <= max_y; ++r)
        {
            row_map[r] = next;
            if (row_blocked[r])
            {
                ++next;
            }
            else
            {
                improved = true;
            }
        }
        next = 0;
        for (std::uint32_t c = 0; c <= max_x; ++c)
        {
            col_map[c] = next;
            if (col_blocked[c])
            {
                ++next;
            }
            else
            {
                improved = true;
            }
        }
        if (!improved)
        {
            return;
        }
        for (auto& p : stage.pos)
        {
            if (p)
            {
                p = std::pair{col_map[p->first], row_map[p->second]};
            }
        }
        std::vector<staged_wire> kept;
        kept.reserve(stage.wires.size());
        for (const auto& w : stage.wires)
        {
            if (!row_blocked[w.y] || !col_blocked[w.x])
            {
                continue;
            }
            kept.push_back({w.edge, col_map[w.x], row_map[w.y], w.entry, w.exit});
        }
        stage.wires = std::move(kept);
    }
}

}  // namespace

gate_layout ortho_layout(std::shared_ptr<const logic_network> net, const ortho_parameters& params)
{
    if (!net || !net->finalized())
    {
        throw fcn_error{"heuristic layout: network must be finalized"};
    }
    const auto colors = color_edges(*net);
    const bool io = params.io_pins || params.border_io;

    std::vector<bool> placeable(net->num_vertices(), false);
    bool any = false;
    for (std::uint32_t v = 0; v < net->num_vertices(); ++v)
    {
        const auto op = net->vertex(v).op;
        placeable[v] = io || (op != logic_op::PI && op != logic_op::PO);
        any = any || placeable[v];
    }
    if (!any)
    {
        placeable.assign(net->num_vertices(), true);
    }

    // Border rows/columns are reserved only when some PI will sit there.
    bool west_used = false;
    bool north_used = false;
    if (params.border_io)
    {
        for (const auto pi : net->pis())
        {
            const auto& outs = net->out_edges(pi);
            const bool south = !outs.empty() && colors[outs.front()] == edge_color::SOUTH;
            (south ? north_used : west_used) = true;
        }
    }

    staged_layout stage;
    stage.pos.resize(net->num_vertices());
    std::uint32_t next_col = west_used ? 1 : 0;
    std::uint32_t next_row = north_used ? 1 : 0;

    const auto emit_east_run = [&](const std::uint32_t e, const std::uint32_t cu,
                                   const std::uint32_t ru, const std::uint32_t cv,
                                   const std::uint32_t rv)
    {
        for (std::uint32_t x = cu + 1; x < cv; ++x)
        {
            stage.wires.push_back({e, x, ru, direction::W, direction::E});
        }
        if (rv != ru)
        {
            stage.wires.push_back({e, cv, ru, direction::W, direction::S});
            for (std::uint32_t y = ru + 1; y < rv; ++y)
            {
                stage.wires.push_back({e, cv, y, direction::N, direction::S});
            }
        }
    };
    const auto emit_south_run = [&](const std::uint32_t e, const std::uint32_t cu,
                                    const std::uint32_t ru, const std::uint32_t cv,
                                    const std::uint32_t rv)
    {
        for (std::uint32_t y = ru + 1; y < rv; ++y)
        {
            stage.wires.push_back({e, cu, y, direction::N, direction::S});
        }
        if (cv != cu)
        {
            stage.wires.push_back({e, cu, rv, direction::N, direction::E});
            for (std::uint32_t x = cu + 1; x < cv; ++x)
            {
                stage.wires.push_back({e, x, rv, direction::W, direction::E});
            }
        }
    };

    for (const auto v : net->topological_order())
    {
        if (!placeable[v])
        {
            continue;
        }
        std::vector<std::uint32_t> fan_in;
        for (const auto e : net->in_edges(v))
        {
            if (placeable[net->edge(e).source])
            {
                fan_in.push_back(e);
            }
        }
        std::uint32_t col = 0;
        std::uint32_t row = 0;
        const auto op = net->vertex(v).op;
        if (params.border_io && op == logic_op::PI)
        {
            const auto& outs = net->out_edges(v);
            const bool south = !outs.empty() && colors[outs.front()] == edge_color::SOUTH;
            if (south)
            {
                col = next_col++;
                row = 0;
            }
            else
            {
                col = 0;
                row = next_row++;
            }
        }
        else if (fan_in.size() == 1)
        {
            const auto& pred = *stage.pos[net->edge(fan_in[0]).source];
            if (colors[fan_in[0]] == edge_color::EAST)
            {
                col = next_col++;
                row = pred.second;
            }
            else
            {
                col = pred.first;
                row = next_row++;
            }
        }
        else
        {
            // Sources and two-fan-in joins take a fresh row and column.
            col = next_col++;
            row = next_row++;
        }
        stage.pos[v] = std::pair{col, row};
        for (const auto e : fan_in)
        {
            const auto& pred = *stage.pos[net->edge(e).source];
            if (colors[e] == edge_color::EAST)
            {
                emit_east_run(e, pred.first, pred.second, col, row);
            }
            else
            {
                emit_south_run(e, pred.first, pred.second, col, row);
            }
        }
    }

    if (params.compact)
    {
        compact_stage(stage);
    }

    std::uint32_t width = 1;
    std::uint32_t height = 1;
    for (const auto& p : stage.pos)
    {
        if (p)
        {
            width = std::max(width, p->first + 1);
            height = std::max(height, p->second + 1);
        }
    }
    for (const auto& w : stage.wires)
    {
        width = std::max(width, w.x + 1);
        height = std::max(height, w.y + 1);
    }

    gate_layout layout{width, height, scheme_from_name("2ddwave4"), net};
    for (std::uint32_t v = 0; v < net->num_vertices(); ++v)
    {
        if (stage.pos[v])
        {
            const auto op = net->vertex(v).op;
            layout.assign_logic_vertex(tile{stage.pos[v]->first, stage.pos[v]->second}, v,
                                       op == logic_op::PI, op == logic_op::PO);
        }
    }
    for (const auto& w : stage.wires)
    {
        const tile t{w.x, w.y};
        const auto layer = layout.wires_at(t).empty() ? wire_layer::GROUND : wire_layer::CROSSING;
        layout.assign_wire(t, w.edge, layer, w.entry, w.exit);
    }
    return layout;
}

}  // namespace fcnlay
