#ifndef FCNLAY_TECHMAP_CELL_LAYOUT_HPP
#define FCNLAY_TECHMAP_CELL_LAYOUT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <tuple>

namespace fcnlay
{

enum class cell_kind : std::uint8_t
{
    NORMAL,
    INPUT,
    OUTPUT,
    CONST0,
    CONST1
};

/**
 * One technology cell. Rotated cells occur only in coplanar wire crossings;
 * INPUT/OUTPUT cells carry the pin name in label.
 */
struct cell
{
    cell_kind kind{cell_kind::NORMAL};
    std::uint8_t clock{0};
    bool rotated{false};
    std::string label{};
};

/// Cell coordinates; layer 1 holds the upper wires of second-layer crossings.
struct cell_position
{
    std::uint32_t x{};
    std::uint32_t y{};
    std::uint8_t layer{0};

    [[nodiscard]] friend bool operator==(const cell_position&, const cell_position&) = default;
    [[nodiscard]] friend bool operator<(const cell_position& a, const cell_position& b)
    {
        return std::tie(a.layer, a.y, a.x) < std::tie(b.layer, b.y, b.x);
    }
};

/**
 * Sparse cell grid produced by technology mapping. Dimensions are the tile
 * grid dimensions times the library block size; iteration order is layer,
 * then row, then column, so emitters are deterministic.
 */
class cell_layout
{
  public:
    cell_layout(const std::uint32_t width, const std::uint32_t height, std::string name,
                const std::uint8_t phases)
        : width_{width}, height_{height}, name_{std::move(name)}, phases_{phases}
    {}

    [[nodiscard]] std::uint32_t width() const noexcept { return width_; }
    [[nodiscard]] std::uint32_t height() const noexcept { return height_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::uint8_t phases() const noexcept { return phases_; }

    void assign_cell(const cell_position pos, cell c) { cells_[pos] = std::move(c); }

    [[nodiscard]] const cell* cell_at(const cell_position pos) const
    {
        const auto it = cells_.find(pos);
        return it == cells_.end() ? nullptr : &it->second;
    }

    [[nodiscard]] const std::map<cell_position, cell>& cells() const noexcept { return cells_; }
    [[nodiscard]] std::size_t num_cells() const noexcept { return cells_.size(); }

  private:
    std::uint32_t width_;
    std::uint32_t height_;
    std::string name_;
    std::uint8_t phases_;
    std::map<cell_position, cell> cells_{};
};

}  // namespace fcnlay

#endif  // FCNLAY_TECHMAP_CELL_LAYOUT_HPP
