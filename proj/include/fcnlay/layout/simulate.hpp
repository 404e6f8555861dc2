#ifndef FCNLAY_LAYOUT_SIMULATE_HPP
#define FCNLAY_LAYOUT_SIMULATE_HPP

#include "fcnlay/layout/gate_layout.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace fcnlay
{

using input_vector = std::unordered_map<std::string, bool>;

/**
 * Evaluates one input vector through the tile structure: values travel along
 * traced wire paths and are combined on gate tiles. Produces the same result
 * as network simulation whenever the layout realizes the network correctly.
 * Throws fcn_error if a realized connection has no contiguous path.
 */
[[nodiscard]] std::unordered_map<std::string, bool>
simulate_layout(const gate_layout& layout, const input_vector& assignment);

/**
 * Cycle-accurate pipeline simulation. A fresh vector enters every
 * interval-th clock cycle; every tile latches on its own phase and holds for
 * a full cycle (plus its latch delay). An output passes if its latched value
 * sequence, from some settle offset on, shows every expected value for
 * interval consecutive cycles, in order. Inputs driven from outside the
 * layout are launch-schedulable: all combinations of per-port cycle offsets
 * up to the layout depth are tried and one feasible schedule suffices.
 *
 * Returns true iff all outputs pass at the given interval.
 */
[[nodiscard]] bool wave_interval_feasible(const gate_layout& layout,
                                          const std::vector<input_vector>& vectors,
                                          std::uint64_t interval);

/**
 * Smallest feasible interval in [1, max_interval], or nullopt if none
 * passes. This is the reference oracle for throughput figures.
 */
[[nodiscard]] std::optional<std::uint64_t>
wave_minimum_interval(const gate_layout& layout, const std::vector<input_vector>& vectors,
                      std::uint64_t max_interval = 8);

}  // namespace fcnlay

#endif  // FCNLAY_LAYOUT_SIMULATE_HPP
