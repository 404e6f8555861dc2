#include "fcnlay/layout/gate_layout.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace fcnlay
{

namespace
{

[[nodiscard]] std::string tile_str(const tile t)
{
    return "(" + std::to_string(t.x) + "," + std::to_string(t.y) + ")";
}

}  // namespace

gate_layout::gate_layout(const std::uint32_t width, const std::uint32_t height,
                         clocking_scheme scheme, std::shared_ptr<const logic_network> network) :
        width_{width},
        height_{height},
        scheme_{std::move(scheme)},
        network_{std::move(network)}
{
    if (width_ == 0 || height_ == 0)
    {
        throw fcn_error{"gate_layout: dimensions must be positive"};
    }
    if (!network_)
    {
        throw fcn_error{"gate_layout: network must not be null"};
    }
    if (!network_->finalized())
    {
        throw fcn_error{"gate_layout: network must be finalized"};
    }
}

std::optional<std::uint8_t> gate_layout::clock_at(const tile t) const
{
    if (!in_bounds(t))
    {
        return std::nullopt;
    }
    if (scheme_.regular)
    {
        return scheme_.clock_number(t.x, t.y);
    }
    const auto it = clock_at_.find(t);
    return it == clock_at_.end() ? std::optional<std::uint8_t>{} : std::optional{it->second};
}

void gate_layout::assign_clock(const tile t, const std::uint8_t clock)
{
    if (scheme_.regular)
    {
        throw fcn_error{"assign_clock: scheme '" + scheme_.name + "' fixes all clock numbers"};
    }
    if (!in_bounds(t))
    {
        throw fcn_error{"assign_clock: tile " + tile_str(t) + " is out of bounds"};
    }
    if (clock >= scheme_.phases)
    {
        throw fcn_error{"assign_clock: clock number " + std::to_string(clock) +
                        " exceeds phase count"};
    }
    clock_at_[t] = clock;
}

void gate_layout::assign_latch(const tile t, const std::uint8_t delay)
{
    if (!in_bounds(t))
    {
        throw fcn_error{"assign_latch: tile " + tile_str(t) + " is out of bounds"};
    }
    if (delay == 0)
    {
        latch_at_.erase(t);
        return;
    }
    latch_at_[t] = delay;
}

void gate_layout::assign_logic_vertex(const tile t, const std::uint32_t vertex, const bool is_pi,
                                      const bool is_po)
{
    if (!in_bounds(t))
    {
        throw fcn_error{"assign_logic_vertex: tile " + tile_str(t) + " is out of bounds"};
    }
    if (vertex >= network_->num_vertices())
    {
        throw fcn_error{"assign_logic_vertex: vertex " + std::to_string(vertex) +
                        " does not exist"};
    }
    if (vertex_at_.count(t) != 0)
    {
        throw fcn_error{"assign_logic_vertex: tile " + tile_str(t) +
                        " already holds a logic vertex"};
    }
    if (!wires_at(t).empty())
    {
        throw fcn_error{"assign_logic_vertex: tile " + tile_str(t) + " already holds wires"};
    }
    if (tile_of_.count(vertex) != 0)
    {
        throw fcn_error{"assign_logic_vertex: vertex " + std::to_string(vertex) +
                        " is already placed"};
    }
    const auto op = network_->vertex(vertex).op;
    if (is_pi && op != logic_op::PI)
    {
        throw fcn_error{"assign_logic_vertex: vertex " + std::to_string(vertex) +
                        " is not a primary input"};
    }
    if (is_po && op != logic_op::PO)
    {
        throw fcn_error{"assign_logic_vertex: vertex " + std::to_string(vertex) +
                        " is not a primary output"};
    }
    vertex_at_.emplace(t, vertex);
    tile_of_.emplace(vertex, t);
    if (is_pi)
    {
        pi_tiles_.insert(t);
    }
    if (is_po)
    {
        po_tiles_.insert(t);
    }
}

void gate_layout::assign_wire(const tile t, const std::uint32_t edge, const wire_layer layer,
                              const direction entry, const direction exit)
{
    if (!in_bounds(t))
    {
        throw fcn_error{"assign_wire: tile " + tile_str(t) + " is out of bounds"};
    }
    if (edge >= network_->num_edges())
    {
        throw fcn_error{"assign_wire: edge " + std::to_string(edge) + " does not exist"};
    }
    if (entry == exit)
    {
        throw fcn_error{"assign_wire: entry and exit side coincide on tile " + tile_str(t)};
    }
    if (vertex_at_.count(t) != 0)
    {
        throw fcn_error{"assign_wire: tile " + tile_str(t) +
                        " holds a logic vertex of an unrelated connection"};
    }
    auto& segs = wires_at_[t];
    if (segs.size() >= 2)
    {
        throw fcn_error{"assign_wire: tile " + tile_str(t) + " already carries two wires"};
    }
    for (const auto& s : segs)
    {
        if (s.layer == layer)
        {
            throw fcn_error{"assign_wire: layer already occupied on tile " + tile_str(t)};
        }
    }
    segs.push_back(wire_segment{edge, layer, entry, exit});
}

std::optional<std::uint32_t> gate_layout::vertex_at(const tile t) const
{
    const auto it = vertex_at_.find(t);
    return it == vertex_at_.end() ? std::optional<std::uint32_t>{} : std::optional{it->second};
}

std::optional<tile> gate_layout::tile_of(const std::uint32_t vertex) const
{
    const auto it = tile_of_.find(vertex);
    return it == tile_of_.end() ? std::optional<tile>{} : std::optional{it->second};
}

const std::vector<wire_segment>& gate_layout::wires_at(const tile t) const
{
    static const std::vector<wire_segment> empty{};
    const auto it = wires_at_.find(t);
    return it == wires_at_.end() ? empty : it->second;
}

bool gate_layout::is_free_tile(const tile t) const
{
    return in_bounds(t) && vertex_at_.count(t) == 0 && wires_at(t).empty();
}

tile gate_layout::random_tile(const wire_layer layer, std::mt19937_64& rng) const
{
    static_cast<void>(layer);
    std::uniform_int_distribution<std::uint32_t> dx{0, width_ - 1};
    std::uniform_int_distribution<std::uint32_t> dy{0, height_ - 1};
    const auto x = dx(rng);
    const auto y = dy(rng);
    return tile{x, y};
}

std::vector<tile> gate_layout::occupied_tiles() const
{
    std::set<tile> tiles{};
    for (const auto& [t, v] : vertex_at_)
    {
        static_cast<void>(v);
        tiles.insert(t);
    }
    for (const auto& [t, segs] : wires_at_)
    {
        if (!segs.empty())
        {
            tiles.insert(t);
        }
    }
    for (const auto& [t, d] : latch_at_)
    {
        static_cast<void>(d);
        tiles.insert(t);
    }
    std::vector<tile> out{tiles.begin(), tiles.end()};
    std::sort(out.begin(), out.end(),
              [](const tile a, const tile b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
    return out;
}

std::vector<tile> gate_layout::latch_tiles() const
{
    std::vector<tile> out{};
    out.reserve(latch_at_.size());
    for (const auto& [t, d] : latch_at_)
    {
        if (d >= 1)
        {
            out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const tile a, const tile b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
    return out;
}

}  // namespace fcnlay
