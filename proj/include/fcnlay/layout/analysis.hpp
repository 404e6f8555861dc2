#ifndef FCNLAY_LAYOUT_ANALYSIS_HPP
#define FCNLAY_LAYOUT_ANALYSIS_HPP

#include "fcnlay/layout/gate_layout.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace fcnlay
{

/**
 * Number of tiles on the longest chain from a source tile to a sink tile,
 * counting both endpoints. Sources are placed vertices without realized
 * fan-ins; connections with an unplaced endpoint do not contribute.
 * Throws fcn_error if a realized connection has no contiguous wire path.
 */
[[nodiscard]] std::size_t critical_path_length(const gate_layout& layout);

/**
 * Denominator x of the sustainable throughput 1/x: new inputs can be fed
 * every x-th clock cycle. Every input launches in step with the wave front
 * reaching it, so only arrival-time imbalance that no launch schedule can
 * absorb costs throughput: the smallest number of extra hold cycles making
 * all reconvergent fan-ins wave-consistent, found over the realized
 * connections' cycle lags. Fan-ins driven from outside the layout are freely
 * schedulable and do not contribute. Throws fcn_error on broken paths or
 * clock-inconsistent ones.
 */
[[nodiscard]] std::uint64_t throughput_denominator(const gate_layout& layout);

struct energy_coefficients
{
    double slow{};
    double fast{};
};

/**
 * Per-tile-kind energy dissipation coefficients in meV. Keys: wire, fanout,
 * inverter_straight, inverter_bent, crossing, gate2, gate3, io_pin, const,
 * latch.
 */
struct energy_table
{
    std::map<std::string, energy_coefficients> per_kind{};

    [[nodiscard]] const energy_coefficients& lookup(const std::string& kind) const;
};

[[nodiscard]] energy_table parse_energy_table(std::string_view json_text);
[[nodiscard]] energy_table load_energy_table(const std::filesystem::path& file);
[[nodiscard]] const energy_table& default_energy_table();

struct energy_breakdown
{
    double slow_mev{};
    double fast_mev{};
};

/**
 * Sums the table coefficients over all occupied tiles, classified by their
 * content (both transition regimes). Latch tiles count as latches regardless
 * of the wires they carry.
 */
[[nodiscard]] energy_breakdown energy_estimate(const gate_layout& layout,
                                               const energy_table& table);

struct layout_statistics
{
    std::string network_name{};
    std::uint32_t width{};
    std::uint32_t height{};
    std::uint64_t area{};
    std::size_t gate_count{};      ///< placed vertices (gates, fan-outs, I/O pins)
    std::size_t wire_count{};      ///< wire occupancies; a crossing tile counts twice
    std::size_t crossing_count{};  ///< tiles carrying two wires
    std::size_t latch_count{};
    std::size_t critical_path{};
    std::uint64_t throughput_denominator{1};
    std::uint32_t bounding_box_width{};
    std::uint32_t bounding_box_height{};
    energy_breakdown energy{};
};

[[nodiscard]] layout_statistics layout_stats(const gate_layout& layout,
                                             const energy_table& energy = default_energy_table());

/// One-line summary in the canonical shell format.
[[nodiscard]] std::string format_stats_line(const layout_statistics& st);

}  // namespace fcnlay

#endif  // FCNLAY_LAYOUT_ANALYSIS_HPP
