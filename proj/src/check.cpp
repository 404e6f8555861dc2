#include "fcnlay/layout/check.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <unordered_map>

namespace fcnlay
{

namespace
{

[[nodiscard]] std::string tile_str(const tile t)
{
    return "(" + std::to_string(t.x) + "," + std::to_string(t.y) + ")";
}

/// Side of t that faces the adjacent tile other; nullopt if not 4-adjacent.
[[nodiscard]] std::optional<direction> side_towards(const tile t, const tile other)
{
    for (const auto d : {direction::N, direction::E, direction::S, direction::W})
    {
        if (const auto n = neighbor(t, d); n && *n == other)
        {
            return d;
        }
    }
    return std::nullopt;
}

[[nodiscard]] bool is_straight(const wire_segment& s)
{
    return s.exit == opposite(s.entry);
}

[[nodiscard]] bool is_horizontal(const wire_segment& s)
{
    return (s.entry == direction::E || s.entry == direction::W) && is_straight(s);
}

}  // namespace

const char* design_rule_name(const design_rule rule) noexcept
{
    switch (rule)
    {
        case design_rule::WIRE_CONNECTIVITY: return "wire_connectivity";
        case design_rule::CLOCK_ORDERING: return "clock_ordering";
        case design_rule::GATE_PORTS: return "gate_ports";
        case design_rule::CROSSING_STRUCTURE: return "crossing_structure";
        case design_rule::IO_PLACEMENT: return "io_placement";
        case design_rule::CLOCK_ASSIGNMENT: return "clock_assignment";
    }
    return "unknown";
}

std::map<std::uint32_t, std::optional<edge_path>> trace_edge_paths(const gate_layout& layout)
{
    const auto& net = layout.network();

    // Per edge, the tiles carrying one of its segments.
    std::unordered_map<std::uint32_t, std::unordered_map<tile, wire_segment, tile_hash>> segs{};
    std::set<std::uint32_t> broken{};
    for (std::uint32_t y = 0; y < layout.height(); ++y)
    {
        for (std::uint32_t x = 0; x < layout.width(); ++x)
        {
            const tile t{x, y};
            for (const auto& s : layout.wires_at(t))
            {
                auto& per_edge = segs[s.edge];
                if (!per_edge.emplace(t, s).second)
                {
                    broken.insert(s.edge);  // two segments of one connection on one tile
                }
            }
        }
    }

    std::map<std::uint32_t, std::optional<edge_path>> paths{};
    for (std::uint32_t e = 0; e < net.num_edges(); ++e)
    {
        const auto& edge = net.edge(e);
        const auto ts = layout.tile_of(edge.source);
        const auto tt = layout.tile_of(edge.target);
        if (!ts || !tt)
        {
            if (segs.count(e) != 0)
            {
                broken.insert(e);  // wires for a connection with an unplaced endpoint
                paths[e] = std::nullopt;
            }
            continue;  // external connection, nothing to trace
        }

        if (broken.count(e) != 0)
        {
            paths[e] = std::nullopt;
            continue;
        }

        const auto seg_it = segs.find(e);
        if (seg_it == segs.end() || seg_it->second.empty())
        {
            if (side_towards(*ts, *tt))
            {
                paths[e] = edge_path{e, {*ts, *tt}};
            }
            else
            {
                paths[e] = std::nullopt;
            }
            continue;
        }

        const auto& per_edge = seg_it->second;

        // Exactly one segment must attach to the source tile.
        std::optional<tile> start{};
        bool ambiguous = false;
        for (const auto& [t, s] : per_edge)
        {
            if (const auto n = neighbor(t, s.entry); n && *n == *ts)
            {
                if (start)
                {
                    ambiguous = true;
                }
                start = t;
            }
        }
        if (!start || ambiguous)
        {
            paths[e] = std::nullopt;
            continue;
        }

        edge_path path{e, {*ts}};
        std::set<tile> visited{};
        auto cur = *start;
        bool ok = false;
        while (true)
        {
            if (!visited.insert(cur).second)
            {
                break;  // revisited a tile: not a simple path
            }
            path.tiles.push_back(cur);
            const auto& s = per_edge.at(cur);
            const auto next = neighbor(cur, s.exit);
            if (!next || !layout.in_bounds(*next))
            {
                break;
            }
            if (*next == *tt)
            {
                path.tiles.push_back(*tt);
                ok = visited.size() == per_edge.size();  // no orphan segments
                break;
            }
            const auto nit = per_edge.find(*next);
            if (nit == per_edge.end() || nit->second.entry != opposite(s.exit))
            {
                break;
            }
            cur = *next;
        }
        paths[e] = ok ? std::optional{std::move(path)} : std::nullopt;
    }
    return paths;
}

std::vector<rule_violation> check_validity(const gate_layout& layout)
{
    std::vector<rule_violation> violations{};
    const auto& net = layout.network();
    const auto& scheme = layout.scheme();
    const auto paths = trace_edge_paths(layout);

    // Open clocking: every used tile needs a clock number before path rules
    // can be evaluated on it.
    if (!scheme.regular)
    {
        for (const auto t : layout.occupied_tiles())
        {
            if (!layout.clock_at(t))
            {
                violations.push_back({design_rule::CLOCK_ASSIGNMENT, t,
                                      "tile " + tile_str(t) + " is used but has no clock number"});
            }
        }
    }

    // Wire connectivity and clock ordering along each traced path.
    for (const auto& [e, path] : paths)
    {
        const auto& edge = net.edge(e);
        if (!path)
        {
            const auto ts = layout.tile_of(edge.source);
            const tile at = ts ? *ts : tile{0, 0};
            violations.push_back({design_rule::WIRE_CONNECTIVITY, at,
                                  "connection " + std::to_string(e) + " (vertex " +
                                      std::to_string(edge.source) + " to vertex " +
                                      std::to_string(edge.target) +
                                      ") does not form one contiguous path"});
            continue;
        }
        for (std::size_t i = 0; i + 1 < path->tiles.size(); ++i)
        {
            const auto a = path->tiles[i];
            const auto b = path->tiles[i + 1];
            const auto ca = layout.clock_at(a);
            const auto cb = layout.clock_at(b);
            if (!ca || !cb)
            {
                continue;  // reported as missing clock assignment above
            }
            const auto step = 1u + layout.latch_at(a);
            if (*cb != (*ca + step) % scheme.phases)
            {
                violations.push_back(
                    {design_rule::CLOCK_ORDERING, b,
                     "clock " + std::to_string(*cb) + " on tile " + tile_str(b) +
                         " does not follow clock " + std::to_string(*ca) + " on tile " +
                         tile_str(a) + " (expected +" + std::to_string(step) + " mod " +
                         std::to_string(scheme.phases) + ")"});
            }
        }
    }

    // Gate ports: distinct sides for distinct connections, no side reused
    // for both an input and an output.
    for (std::uint32_t v = 0; v < net.num_vertices(); ++v)
    {
        const auto tv = layout.tile_of(v);
        if (!tv)
        {
            continue;
        }
        std::array<int, 4> in_use{};   // counts per direction
        std::array<int, 4> out_use{};
        for (const auto e : net.in_edges(v))
        {
            const auto pit = paths.find(e);
            if (pit == paths.end() || !pit->second)
            {
                continue;
            }
            const auto& tl = pit->second->tiles;
            const auto prev = tl[tl.size() - 2];
            if (const auto d = side_towards(*tv, prev))
            {
                ++in_use[static_cast<std::size_t>(*d)];
            }
        }
        for (const auto e : net.out_edges(v))
        {
            const auto pit = paths.find(e);
            if (pit == paths.end() || !pit->second)
            {
                continue;
            }
            const auto& tl = pit->second->tiles;
            const auto nxt = tl[1];
            if (const auto d = side_towards(*tv, nxt))
            {
                ++out_use[static_cast<std::size_t>(*d)];
            }
        }
        for (std::size_t d = 0; d < 4; ++d)
        {
            if (in_use[d] > 1 || out_use[d] > 1 || (in_use[d] > 0 && out_use[d] > 0))
            {
                violations.push_back(
                    {design_rule::GATE_PORTS, *tv,
                     "vertex " + std::to_string(v) + " on tile " + tile_str(*tv) +
                         " uses its " +
                         std::string(1, direction_letter(static_cast<direction>(d))) +
                         " side for more than one connection"});
            }
        }
    }

    // Crossing structure: two wires on a tile must be perpendicular straights
    // on distinct layers.
    for (std::uint32_t y = 0; y < layout.height(); ++y)
    {
        for (std::uint32_t x = 0; x < layout.width(); ++x)
        {
            const tile t{x, y};
            const auto& segs = layout.wires_at(t);
            if (segs.size() < 2)
            {
                continue;
            }
            if (segs.size() > 2)
            {
                violations.push_back({design_rule::CROSSING_STRUCTURE, t,
                                      "tile " + tile_str(t) + " carries more than two wires"});
                continue;
            }
            const bool straight = is_straight(segs[0]) && is_straight(segs[1]);
            const bool perpendicular = is_horizontal(segs[0]) != is_horizontal(segs[1]);
            const bool layered = segs[0].layer != segs[1].layer;
            if (!straight || !perpendicular || !layered)
            {
                violations.push_back({design_rule::CROSSING_STRUCTURE, t,
                                      "tile " + tile_str(t) +
                                          " carries two wires that are not perpendicular "
                                          "straights on distinct layers"});
            }
        }
    }

    // I/O placement: designated pin tiles host I/O vertices and vice versa.
    for (const auto t : layout.pi_tiles())
    {
        const auto v = layout.vertex_at(t);
        if (!v || net.vertex(*v).op != logic_op::PI)
        {
            violations.push_back({design_rule::IO_PLACEMENT, t,
                                  "input pin tile " + tile_str(t) +
                                      " does not host a primary input"});
        }
    }
    for (const auto t : layout.po_tiles())
    {
        const auto v = layout.vertex_at(t);
        if (!v || net.vertex(*v).op != logic_op::PO)
        {
            violations.push_back({design_rule::IO_PLACEMENT, t,
                                  "output pin tile " + tile_str(t) +
                                      " does not host a primary output"});
        }
    }
    for (std::uint32_t v = 0; v < net.num_vertices(); ++v)
    {
        const auto tv = layout.tile_of(v);
        if (!tv)
        {
            continue;
        }
        const auto op = net.vertex(v).op;
        if (op == logic_op::PI && layout.pi_tiles().count(*tv) == 0)
        {
            violations.push_back({design_rule::IO_PLACEMENT, *tv,
                                  "primary input on tile " + tile_str(*tv) +
                                      " is not designated as an input pin"});
        }
        if (op == logic_op::PO && layout.po_tiles().count(*tv) == 0)
        {
            violations.push_back({design_rule::IO_PLACEMENT, *tv,
                                  "primary output on tile " + tile_str(*tv) +
                                      " is not designated as an output pin"});
        }
    }

    return violations;
}

}  // namespace fcnlay
