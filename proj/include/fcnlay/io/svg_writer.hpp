#ifndef FCNLAY_IO_SVG_WRITER_HPP
#define FCNLAY_IO_SVG_WRITER_HPP

#include "fcnlay/layout/gate_layout.hpp"
#include "fcnlay/techmap/cell_layout.hpp"

#include <string>

namespace fcnlay
{

/**
 * Renders a tile-level picture of the layout: one square per tile shaded by
 * clock number, gate and pin names on their tiles, wire paths as polylines
 * (dashed on the crossing layer), and latch markers with their delay.
 *
 * The result is a complete standalone SVG document.
 */
[[nodiscard]] std::string render_svg(const gate_layout& layout);

/**
 * Renders a cell-level picture: one small square per cell colored by clock
 * number, distinct fills for input, output, and constant cells, outlined
 * squares for the crossover layer, and pin labels next to their cells.
 *
 * The result is a complete standalone SVG document.
 */
[[nodiscard]] std::string render_svg(const cell_layout& cells);

}  // namespace fcnlay

#endif  // FCNLAY_IO_SVG_WRITER_HPP
