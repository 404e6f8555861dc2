#ifndef FCNLAY_IO_QCA_IO_HPP
#define FCNLAY_IO_QCA_IO_HPP

#include "fcnlay/techmap/cell_layout.hpp"

#include <string>

namespace fcnlay
{

/**
 * Writes a cell layout as a QCADesigner 2.0 design file: a version header,
 * a design section with substrate and cell layers, and one cell record per
 * cell at pitch 20 with cell size 18 and four quantum dots. INPUT/OUTPUT
 * cells carry their pin name as an attached label; CONST cells become fixed
 * cells whose dot charges encode the polarization. Upper-layer cells of
 * wire crossings go to a separate crossover cell layer.
 *
 * Throws fcn_error on an empty layout or when the file cannot be written.
 */
void write_qca(const cell_layout& cells, const std::string& path);

/**
 * Reads a file written by write_qca back into a cell layout; the semantic
 * content (positions, layers, kinds, clocks, rotation, labels) round-trips
 * exactly. The layout name is the file stem. Throws fcn_error on malformed
 * input.
 */
[[nodiscard]] cell_layout read_qca(const std::string& path);

}  // namespace fcnlay

#endif  // FCNLAY_IO_QCA_IO_HPP
