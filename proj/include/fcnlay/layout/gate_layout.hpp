#ifndef FCNLAY_LAYOUT_GATE_LAYOUT_HPP
#define FCNLAY_LAYOUT_GATE_LAYOUT_HPP

#include "fcnlay/clocking/clocking_scheme.hpp"
#include "fcnlay/network/logic_network.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <unordered_map>
#include <vector>

namespace fcnlay
{

enum class direction : std::uint8_t
{
    N,
    E,
    S,
    W
};

[[nodiscard]] constexpr direction opposite(const direction d) noexcept
{
    switch (d)
    {
        case direction::N: return direction::S;
        case direction::E: return direction::W;
        case direction::S: return direction::N;
        case direction::W: return direction::E;
    }
    return direction::N;
}

[[nodiscard]] constexpr char direction_letter(const direction d) noexcept
{
    switch (d)
    {
        case direction::N: return 'N';
        case direction::E: return 'E';
        case direction::S: return 'S';
        case direction::W: return 'W';
    }
    return '?';
}

enum class wire_layer : std::uint8_t
{
    GROUND,
    CROSSING
};

struct tile
{
    std::uint32_t x{};
    std::uint32_t y{};

    auto operator<=>(const tile&) const = default;
};

/// Neighbor of t towards d; nullopt when that would leave the first quadrant.
[[nodiscard]] constexpr std::optional<tile> neighbor(const tile t, const direction d) noexcept
{
    switch (d)
    {
        case direction::N: return t.y == 0 ? std::optional<tile>{} : tile{t.x, t.y - 1};
        case direction::E: return tile{t.x + 1, t.y};
        case direction::S: return tile{t.x, t.y + 1};
        case direction::W: return t.x == 0 ? std::optional<tile>{} : tile{t.x - 1, t.y};
    }
    return std::nullopt;
}

struct tile_hash
{
    [[nodiscard]] std::size_t operator()(const tile t) const noexcept
    {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(t.x) << 32) | t.y);
    }
};

/**
 * One wire occupancy on a tile: which network edge passes, on which layer,
 * and through which tile sides it enters and leaves.
 */
struct wire_segment
{
    std::uint32_t edge{};
    wire_layer layer{wire_layer::GROUND};
    direction entry{direction::W};
    direction exit{direction::E};
};

/**
 * W x H tile grid with sparse content maps: at most one logic vertex or up
 * to two crossing wire segments per tile, per-tile latch delays, and clock
 * numbers from the scheme (regular) or explicit assignment (open clocking).
 *
 * Single-writer object: build it up single-threaded, then analyze freely.
 */
class gate_layout
{
  public:
    gate_layout(std::uint32_t width, std::uint32_t height, clocking_scheme scheme,
                std::shared_ptr<const logic_network> network);

    [[nodiscard]] std::uint32_t width() const noexcept { return width_; }
    [[nodiscard]] std::uint32_t height() const noexcept { return height_; }
    [[nodiscard]] std::uint64_t area() const noexcept
    {
        return static_cast<std::uint64_t>(width_) * height_;
    }
    [[nodiscard]] const clocking_scheme& scheme() const noexcept { return scheme_; }
    [[nodiscard]] const logic_network& network() const noexcept { return *network_; }
    [[nodiscard]] std::shared_ptr<const logic_network> network_ptr() const noexcept
    {
        return network_;
    }

    [[nodiscard]] bool in_bounds(const tile t) const noexcept
    {
        return t.x < width_ && t.y < height_;
    }

    /// Clock number of t: scheme cutout for regular schemes, assigned value
    /// for open clocking (nullopt while unassigned).
    [[nodiscard]] std::optional<std::uint8_t> clock_at(tile t) const;

    /// Open clocking only; every entry must stay in [0, phases).
    void assign_clock(tile t, std::uint8_t clock);

    /// Latch delay in phases; delay >= 1 marks a synchronization element.
    void assign_latch(tile t, std::uint8_t delay);
    [[nodiscard]] std::uint8_t latch_at(const tile t) const
    {
        const auto it = latch_at_.find(t);
        return it == latch_at_.end() ? std::uint8_t{0} : it->second;
    }

    void assign_logic_vertex(tile t, std::uint32_t vertex, bool is_pi = false, bool is_po = false);
    void assign_wire(tile t, std::uint32_t edge, wire_layer layer, direction entry,
                     direction exit);

    [[nodiscard]] std::optional<std::uint32_t> vertex_at(tile t) const;
    [[nodiscard]] std::optional<tile> tile_of(std::uint32_t vertex) const;
    [[nodiscard]] const std::vector<wire_segment>& wires_at(tile t) const;

    [[nodiscard]] bool is_free_tile(tile t) const;
    [[nodiscard]] bool is_crossing_tile(const tile t) const { return wires_at(t).size() == 2; }

    [[nodiscard]] const std::set<tile>& pi_tiles() const noexcept { return pi_tiles_; }
    [[nodiscard]] const std::set<tile>& po_tiles() const noexcept { return po_tiles_; }

    /// Uniformly random in-bounds tile; deterministic for a seeded generator.
    /// The layer argument mirrors the placement interface and does not bias
    /// the distribution.
    [[nodiscard]] tile random_tile(wire_layer layer, std::mt19937_64& rng) const;

    /// Occupied tiles (vertex, wire, or latch) in row-major order.
    [[nodiscard]] std::vector<tile> occupied_tiles() const;

    /// Tiles hosting latch delays >= 1, row-major.
    [[nodiscard]] std::vector<tile> latch_tiles() const;

  private:
    std::uint32_t width_;
    std::uint32_t height_;
    clocking_scheme scheme_;
    std::shared_ptr<const logic_network> network_;
    std::unordered_map<tile, std::uint32_t, tile_hash> vertex_at_;
    std::unordered_map<std::uint32_t, tile> tile_of_;
    std::unordered_map<tile, std::vector<wire_segment>, tile_hash> wires_at_;
    std::unordered_map<tile, std::uint8_t, tile_hash> clock_at_;
    std::unordered_map<tile, std::uint8_t, tile_hash> latch_at_;
    std::set<tile> pi_tiles_;
    std::set<tile> po_tiles_;
};

}  // namespace fcnlay

#endif  // FCNLAY_LAYOUT_GATE_LAYOUT_HPP
