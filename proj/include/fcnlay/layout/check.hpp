#ifndef FCNLAY_LAYOUT_CHECK_HPP
#define FCNLAY_LAYOUT_CHECK_HPP

#include "fcnlay/layout/gate_layout.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fcnlay
{

enum class design_rule : std::uint8_t
{
    WIRE_CONNECTIVITY,    ///< every realized connection forms one contiguous path
    CLOCK_ORDERING,       ///< adjacent path tiles advance the clock by 1 (+delay on latches)
    GATE_PORTS,           ///< vertex in/out sides are distinct and match the vertex arity
    CROSSING_STRUCTURE,   ///< at most two wires per tile, as perpendicular straights
    IO_PLACEMENT,         ///< designated I/O tiles host exactly the I/O vertices
    CLOCK_ASSIGNMENT      ///< open clocking: every used tile carries a clock number
};

[[nodiscard]] const char* design_rule_name(design_rule rule) noexcept;

struct rule_violation
{
    design_rule rule{};
    tile where{};
    std::string message{};
};

/**
 * Tile path of one realized connection, source tile first, target tile last.
 * Wire tiles in between carry exactly one segment of the connection each.
 */
struct edge_path
{
    std::uint32_t edge{};
    std::vector<tile> tiles{};
};

/**
 * Follows the wire segments of every network connection whose endpoints are
 * both placed. Connections that cannot be traced to a single contiguous path
 * are reported as nullopt in the map (keyed by edge id).
 */
[[nodiscard]] std::map<std::uint32_t, std::optional<edge_path>>
trace_edge_paths(const gate_layout& layout);

/**
 * Structural design-rule check; returns all violations found (empty means
 * the layout is valid). Connections with an unplaced endpoint are treated
 * as external and skipped by the path rules.
 */
[[nodiscard]] std::vector<rule_violation> check_validity(const gate_layout& layout);

}  // namespace fcnlay

#endif  // FCNLAY_LAYOUT_CHECK_HPP
