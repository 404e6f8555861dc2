#ifndef FCNLAY_TECHMAP_GATE_LIBRARY_HPP
#define FCNLAY_TECHMAP_GATE_LIBRARY_HPP

#include "fcnlay/layout/gate_layout.hpp"
#include "fcnlay/techmap/cell_layout.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fcnlay
{

enum class crossover_style : std::uint8_t
{
    SECOND_LAYER,  ///< crossing wires stack on two physical cell layers
    COPLANAR       ///< crossing wires share one layer via rotated cells
};

/// Glyph rows, one string per matrix row; glyph meanings come from the
/// library's alphabet declaration.
using block_matrix = std::vector<std::string>;

/**
 * One placeable block variant: a tile content kind plus its port sides and
 * the cell matrices (one per layer). Rotations and mirrors declared in the
 * library file are expanded into separate variants at load time.
 */
struct library_block
{
    std::string name{};
    std::string kind{};
    std::vector<direction> ins{};
    std::vector<direction> outs{};
    std::vector<block_matrix> layers{};
    /// per-layer (entry, exit) pair for multi-layer blocks; empty otherwise
    std::vector<std::pair<direction, direction>> layer_runs{};
};

/**
 * A technology's block set: fixed-size cell matrices keyed by tile content
 * kind and port configuration. Libraries are data files; see the shipped
 * default for the format.
 */
class gate_library
{
  public:
    /**
     * Parses a library from its text form. origin names the source in error
     * messages. Validates block dimensions, alphabet membership, and that
     * every declared port has a cell at its block-edge midpoint.
     */
    [[nodiscard]] static gate_library parse(const std::string& text, const std::string& origin);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::uint32_t block_rows() const noexcept { return block_rows_; }
    [[nodiscard]] std::uint32_t block_cols() const noexcept { return block_cols_; }
    [[nodiscard]] crossover_style crossover() const noexcept { return crossover_; }

    /// Meaning of one matrix glyph, as declared by the alphabet line.
    [[nodiscard]] const std::string& glyph_meaning(char glyph) const;

    /**
     * Looks up the block variant for a tile kind with the given port sides
     * (order-insensitive). Returns nullptr when the configuration is not
     * covered.
     */
    [[nodiscard]] const library_block* find(const std::string& kind, std::vector<direction> ins,
                                            std::vector<direction> outs) const;

    /// All expanded block variants, in a deterministic order.
    [[nodiscard]] const std::map<std::string, library_block>& variants() const noexcept
    {
        return variants_;
    }

  private:
    std::string name_{};
    std::uint32_t block_rows_{};
    std::uint32_t block_cols_{};
    crossover_style crossover_{crossover_style::SECOND_LAYER};
    std::unordered_map<char, std::string> alphabet_{};
    std::map<std::string, library_block> variants_{};
};

/**
 * Loads a built-in library by name ("qca-one") or any other argument as a
 * library file path. Throws fcn_error on unknown names, unreadable files,
 * or format violations.
 */
[[nodiscard]] gate_library load_library(const std::string& name_or_path);

/**
 * Technology mapping: replaces every occupied tile with its library block,
 * giving a cell grid of tile dimensions times the block size. Every cell
 * inherits its tile's clock number; I/O cells carry the pin labels. Ports
 * of connections that leave the placed region (unplaced I/O) are assigned
 * free block sides deterministically.
 *
 * Throws fcn_error when some tile configuration has no covering block,
 * naming the tile and the configuration.
 */
[[nodiscard]] cell_layout apply_library(const gate_layout& layout, const gate_library& lib);

}  // namespace fcnlay

#endif  // FCNLAY_TECHMAP_GATE_LIBRARY_HPP
