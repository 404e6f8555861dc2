#ifndef FCNLAY_ORTHO_ORTHO_HPP
#define FCNLAY_ORTHO_ORTHO_HPP

#include "fcnlay/layout/gate_layout.hpp"
#include "fcnlay/network/logic_network.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace fcnlay
{

enum class edge_color : std::uint8_t
{
    EAST,
    SOUTH
};

/**
 * Two-colors every connection such that no vertex has two fan-ins of the same
 * color or two fan-outs of the same color. Always possible for fan-out
 * substituted networks (in/out degree <= 2); deterministic.
 *
 * Throws fcn_error when some vertex exceeds degree 2 on either side, with a
 * hint to substitute fan-outs first.
 */
[[nodiscard]] std::vector<edge_color> color_edges(const logic_network& net);

struct ortho_parameters
{
    bool io_pins{false};    ///< place PI/PO vertices on the grid
    bool border_io{false};  ///< put PIs on the west/north border (implies io_pins)
    /**
     * Drop rows/columns holding only straight pass-through wires. The
     * placement below anchors every row and column with the vertex that
     * claimed it, so this pass is a safety net that normally finds nothing;
     * genuine area optimization is out of scope here.
     */
    bool compact{false};
};

/**
 * Scalable heuristic placement and routing on the four-phase one-way
 * diagonal clocking: vertices go into fresh rows/columns in topological
 * order, east-colored connections run east then south, south-colored ones
 * south then east, and perpendicular run intersections become crossings.
 * Near-linear in network size; no area optimality guarantee.
 *
 * The network must be fan-out-substituted (in/out degree <= 2).
 */
[[nodiscard]] gate_layout ortho_layout(std::shared_ptr<const logic_network> net,
                                       const ortho_parameters& params = {});

}  // namespace fcnlay

#endif  // FCNLAY_ORTHO_ORTHO_HPP
