#ifndef FCNLAY_CLOCKING_CLOCKING_SCHEME_HPP
#define FCNLAY_CLOCKING_CLOCKING_SCHEME_HPP

#include "fcnlay/network/logic_network.hpp"  // fcn_error

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fcnlay
{

/**
 * Named clock-zone assignment. Regular schemes carry a small cutout matrix
 * that repeats over the plane; irregular (open) schemes leave zone numbers to
 * the layout. Immutable value object, freely shareable.
 */
struct clocking_scheme
{
    std::string name{};
    unsigned phases{4};
    bool regular{true};
    // cutout[row][column], present iff regular; every entry in [0, phases).
    std::vector<std::vector<std::uint8_t>> cutout{};

    /**
     * Clock number at (x, y): cutout[y mod rows][x mod cols] for regular
     * schemes, nullopt for irregular ones (the layout supplies values).
     */
    [[nodiscard]] std::optional<std::uint8_t> clock_number(const std::uint64_t x,
                                                           const std::uint64_t y) const
    {
        if (!regular)
        {
            return std::nullopt;
        }
        const auto& row = cutout[y % cutout.size()];
        return row[x % row.size()];
    }

    [[nodiscard]] std::size_t cutout_rows() const noexcept { return cutout.size(); }
    [[nodiscard]] std::size_t cutout_cols() const noexcept
    {
        return cutout.empty() ? 0 : cutout.front().size();
    }
};

/**
 * Returns a predefined scheme by case-insensitive name: 2ddwave3, 2ddwave4,
 * use, res, bancs, open3, open4. Throws fcn_error for unknown names.
 */
[[nodiscard]] clocking_scheme scheme_from_name(const std::string& name);

/**
 * Loads a user-defined regular scheme from a JSON file of the shape
 * {"name": ..., "phases": N, "cutout": [[...], ...]}. A file holding the
 * shipped multi-scheme table {"schemes": [...]} is also accepted when a
 * scheme name is given.
 */
[[nodiscard]] clocking_scheme load_scheme_file(const std::string& path,
                                               const std::string& scheme_name = "");

/// All built-in scheme names in presentation order.
[[nodiscard]] const std::vector<std::string>& builtin_scheme_names();

}  // namespace fcnlay

#endif  // FCNLAY_CLOCKING_CLOCKING_SCHEME_HPP
