#ifndef FCNLAY_EXACT_EXACT_HPP
#define FCNLAY_EXACT_EXACT_HPP

#include "fcnlay/clocking/clocking_scheme.hpp"
#include "fcnlay/layout/gate_layout.hpp"
#include "fcnlay/network/logic_network.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace fcnlay
{

/**
 * Design criteria for the exact engine. Balanced paths are the default;
 * desync trades the throughput guarantee for smaller areas.
 */
struct exact_parameters
{
    clocking_scheme scheme{};
    bool crossings{false};       ///< allow two perpendicular wires per tile
    bool io_pins{false};         ///< place PI/PO vertices as tiles
    bool border_io{false};       ///< restrict PI/PO tiles to the border (implies io_pins)
    bool desync{false};          ///< allow unbalanced reconvergent paths
    bool latches{false};         ///< allow per-tile synchronization delays
    std::optional<std::uint32_t> wire_limit{};  ///< max wire tiles per connection
    /// Per-instance solver budget in seconds. Unset: 60, or an even split of
    /// the global budget over the dimension stream when that is bounded.
    std::optional<double> timeout_s{};
    std::optional<double> global_timeout_s{};   ///< overall budget across instances
    std::optional<std::uint64_t> upper_bound{}; ///< largest area to try
    bool parallel{false};        ///< solve candidate grids concurrently
    unsigned workers{0};         ///< worker count in parallel mode; 0 = hardware
    bool minimize_crossings{true};  ///< after a solution, retry with fewer crossings
};

enum class instance_outcome : std::uint8_t
{
    SATISFIABLE,
    UNSATISFIABLE,
    TIMEOUT,
    CANCELED
};

struct explored_instance
{
    std::uint32_t width{};
    std::uint32_t height{};
    instance_outcome outcome{};
    double runtime_s{};
};

enum class exact_status : std::uint8_t
{
    FOUND,
    UNSAT_UP_TO_BOUND,
    TIMEOUT
};

struct exact_result
{
    std::optional<gate_layout> layout{};
    exact_status status{exact_status::TIMEOUT};
    std::vector<explored_instance> explored{};
    double runtime_s{};
};

/**
 * All grid dimensions (W, H) with W*H >= n in non-decreasing area; within one
 * area, squarer shapes first (smaller |W-H|), then W <= H before W > H.
 */
class dimension_stream
{
  public:
    explicit dimension_stream(std::uint64_t min_area);

    /// Next dimension pair, or nullopt once past the optional area bound.
    [[nodiscard]] std::optional<std::pair<std::uint32_t, std::uint32_t>>
    next(std::optional<std::uint64_t> upper_bound = std::nullopt);

  private:
    void refill();

    std::uint64_t area_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pending_{};
    std::size_t index_{0};
};

/// First count dimension pairs for a given minimum area (testing aid).
[[nodiscard]] std::vector<std::pair<std::uint32_t, std::uint32_t>>
dimension_sequence(std::uint64_t min_area, std::size_t count);

/**
 * Exact, area-minimal placement and routing: encodes each candidate grid as
 * a propositional formula and scans dimensions in non-decreasing area until
 * one is satisfiable. The returned layout is valid under every enabled
 * parameter; no smaller-area grid admits a layout (up to recorded
 * per-instance timeouts).
 *
 * The network must be fan-out-substituted. With io_pins off, PI/PO vertices
 * are left off the grid and their connections act as external drivers unless
 * the network consists of nothing but I/O vertices, which are then placed
 * directly.
 *
 * Throws fcn_error if the network cannot fit any admissible grid or the
 * parameters are inconsistent.
 */
[[nodiscard]] exact_result exact_layout(std::shared_ptr<const logic_network> net,
                                        const exact_parameters& params);

}  // namespace fcnlay

#endif  // FCNLAY_EXACT_EXACT_HPP
