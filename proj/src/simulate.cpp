#include "fcnlay/layout/simulate.hpp"

#include "fcnlay/layout/analysis.hpp"
#include "fcnlay/layout/check.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

namespace fcnlay
{

namespace
{

[[nodiscard]] bool edge_realized(const gate_layout& layout, const std::uint32_t e)
{
    const auto& edge = layout.network().edge(e);
    return layout.tile_of(edge.source).has_value() && layout.tile_of(edge.target).has_value();
}

// --- single-vector evaluation through the tile structure -------------------

[[nodiscard]] bool external_input_value(const logic_network& net, const std::uint32_t source,
                                        const input_vector& assignment)
{
    const auto& sv = net.vertex(source);
    if (sv.op != logic_op::PI)
    {
        throw fcn_error{"simulate_layout: vertex " + std::to_string(source) +
                        " feeds the layout but is neither placed nor a primary input"};
    }
    const auto it = assignment.find(sv.label);
    if (it == assignment.end())
    {
        throw fcn_error{"simulate_layout: missing assignment for input '" + sv.label + "'"};
    }
    return it->second;
}

// --- wave pipeline model ----------------------------------------------------

constexpr std::int8_t UNKNOWN = -1;

enum class carrier_role : std::uint8_t
{
    INPUT,     ///< placed primary input, generates the input stream
    CONSTANT,  ///< placed constant generator
    GATE,      ///< any other placed vertex
    SEGMENT    ///< one wire occupancy along a connection
};

struct upstream_ref
{
    bool external{false};
    std::uint32_t carrier{};      ///< feeding carrier when internal
    std::uint8_t read_delay{};    ///< latch delay of the feeding tile
    std::uint32_t ext_port{};     ///< index into the external port list otherwise
};

struct wave_carrier
{
    carrier_role role{carrier_role::SEGMENT};
    std::uint8_t clock{};
    std::string pi_label{};            ///< INPUT only
    bool const_value{};                ///< CONSTANT only
    logic_op op{logic_op::FANOUT};     ///< GATE only
    std::vector<upstream_ref> inputs{};
};

struct wave_model
{
    std::uint8_t phases{4};
    std::vector<wave_carrier> carriers{};
    std::vector<std::vector<std::uint32_t>> by_phase{};  ///< carrier ids per clock number
    std::vector<std::string> external_labels{};          ///< PI label per external port
    // Observer per network output: carrier to sample and the output label.
    std::vector<std::pair<std::uint32_t, std::string>> observers{};
    std::uint64_t depth_cycles{2};
};

[[nodiscard]] std::uint8_t clock_or_throw(const gate_layout& layout, const tile t)
{
    const auto c = layout.clock_at(t);
    if (!c)
    {
        throw fcn_error{"wave simulation: tile (" + std::to_string(t.x) + "," +
                        std::to_string(t.y) + ") has no clock number"};
    }
    return *c;
}

[[nodiscard]] wave_model build_wave_model(const gate_layout& layout)
{
    const auto& net = layout.network();
    const auto paths = trace_edge_paths(layout);
    for (const auto& [e, p] : paths)
    {
        if (!p)
        {
            throw fcn_error{"wave simulation: connection " + std::to_string(e) +
                            " has no contiguous wire path"};
        }
    }

    wave_model model{};
    model.phases = layout.scheme().phases;

    std::map<std::uint32_t, std::uint32_t> vertex_carrier{};
    std::map<std::pair<std::uint64_t, std::uint32_t>, std::uint32_t> segment_carrier{};
    const auto tile_key = [](const tile t) {
        return (static_cast<std::uint64_t>(t.x) << 32) | t.y;
    };

    std::uint64_t total_latch = 0;

    // Placed vertices first.
    for (std::uint32_t v = 0; v < net.num_vertices(); ++v)
    {
        const auto tv = layout.tile_of(v);
        if (!tv)
        {
            continue;
        }
        wave_carrier c{};
        c.clock = clock_or_throw(layout, *tv);
        const auto op = net.vertex(v).op;
        if (op == logic_op::PI)
        {
            c.role = carrier_role::INPUT;
            c.pi_label = net.vertex(v).label;
        }
        else if (op == logic_op::CONST0 || op == logic_op::CONST1)
        {
            c.role = carrier_role::CONSTANT;
            c.const_value = op == logic_op::CONST1;
        }
        else
        {
            c.role = carrier_role::GATE;
            c.op = op;
        }
        vertex_carrier[v] = static_cast<std::uint32_t>(model.carriers.size());
        model.carriers.push_back(std::move(c));
        total_latch += layout.latch_at(*tv);
    }

    // Wire segments along every traced path.
    for (const auto& [e, p] : paths)
    {
        const auto& tl = p->tiles;
        for (std::size_t i = 1; i + 1 < tl.size(); ++i)
        {
            wave_carrier c{};
            c.role = carrier_role::SEGMENT;
            c.clock = clock_or_throw(layout, tl[i]);
            segment_carrier[{tile_key(tl[i]), e}] =
                static_cast<std::uint32_t>(model.carriers.size());
            model.carriers.push_back(std::move(c));
            total_latch += layout.latch_at(tl[i]);
        }
    }

    // Resolve upstream references now that all ids exist.
    const auto upstream_of = [&](const std::uint32_t e, const std::vector<tile>& tl,
                                 const std::size_t i) {
        upstream_ref ref{};
        const auto prev = tl[i - 1];
        ref.read_delay = layout.latch_at(prev);
        if (i == 1)
        {
            ref.carrier = vertex_carrier.at(net.edge(e).source);
        }
        else
        {
            ref.carrier = segment_carrier.at({tile_key(prev), e});
        }
        return ref;
    };

    for (const auto& [e, p] : paths)
    {
        const auto& tl = p->tiles;
        for (std::size_t i = 1; i + 1 < tl.size(); ++i)
        {
            model.carriers[segment_carrier.at({tile_key(tl[i]), e})].inputs = {
                upstream_of(e, tl, i)};
        }
    }

    for (std::uint32_t v = 0; v < net.num_vertices(); ++v)
    {
        if (vertex_carrier.count(v) == 0)
        {
            continue;
        }
        auto& c = model.carriers[vertex_carrier.at(v)];
        if (c.role != carrier_role::GATE)
        {
            continue;
        }
        for (const auto e : net.in_edges(v))
        {
            if (edge_realized(layout, e))
            {
                const auto& tl = paths.at(e)->tiles;
                c.inputs.push_back(upstream_of(e, tl, tl.size() - 1));
            }
            else
            {
                const auto& sv = net.vertex(net.edge(e).source);
                if (sv.op != logic_op::PI)
                {
                    throw fcn_error{"wave simulation: vertex " + std::to_string(v) +
                                    " is fed by an unplaced non-input vertex"};
                }
                upstream_ref ref{};
                ref.external = true;
                ref.ext_port = static_cast<std::uint32_t>(model.external_labels.size());
                model.external_labels.push_back(sv.label);
                c.inputs.push_back(ref);
            }
        }
    }

    // Observers: sample the output vertex when placed, its driver otherwise.
    for (const auto po : net.pos())
    {
        const auto& label = net.vertex(po).label;
        if (vertex_carrier.count(po) != 0)
        {
            model.observers.emplace_back(vertex_carrier.at(po), label);
            continue;
        }
        const auto& ins = net.in_edges(po);
        const auto driver = net.edge(ins.front()).source;
        if (vertex_carrier.count(driver) == 0)
        {
            throw fcn_error{"wave simulation: output '" + label +
                            "' has no placed vertex to observe"};
        }
        model.observers.emplace_back(vertex_carrier.at(driver), label);
    }

    model.by_phase.assign(model.phases, {});
    for (std::uint32_t i = 0; i < model.carriers.size(); ++i)
    {
        model.by_phase[model.carriers[i].clock].push_back(i);
    }

    model.depth_cycles =
        (model.carriers.size() + total_latch) / model.phases + 2;
    return model;
}

/**
 * Runs the clocked pipeline for enough cycles to push all generations through
 * and checks every observer sequence. ext_offsets holds one launch offset in
 * cycles per external port.
 */
[[nodiscard]] bool run_wave(const wave_model& model, const std::vector<input_vector>& vectors,
                            const std::vector<std::vector<std::int8_t>>& expected,
                            const std::uint64_t interval,
                            const std::vector<std::uint64_t>& ext_offsets)
{
    const auto N = static_cast<std::uint64_t>(model.phases);
    const auto G = static_cast<std::uint64_t>(vectors.size());
    const auto max_offset =
        ext_offsets.empty() ? 0 : *std::max_element(ext_offsets.begin(), ext_offsets.end());
    const auto cycles = model.depth_cycles + max_offset + G * interval + 2;
    const auto T = cycles * N;

    std::vector<std::vector<std::int8_t>> hist(model.carriers.size());
    for (auto& h : hist)
    {
        h.assign(T, UNKNOWN);
    }

    const auto input_at = [&](const std::string& label, const std::uint64_t cycle,
                              const std::uint64_t offset) -> std::int8_t {
        if (cycle < offset)
        {
            return UNKNOWN;
        }
        const auto g = std::min((cycle - offset) / interval, G - 1);
        return vectors[g].at(label) ? std::int8_t{1} : std::int8_t{0};
    };

    for (std::uint64_t tau = 0; tau < T; ++tau)
    {
        for (const auto ci : model.by_phase[tau % N])
        {
            const auto& c = model.carriers[ci];
            std::int8_t value = UNKNOWN;
            switch (c.role)
            {
                case carrier_role::INPUT:
                {
                    value = input_at(c.pi_label, tau / N, 0);
                    break;
                }
                case carrier_role::CONSTANT:
                {
                    value = c.const_value ? 1 : 0;
                    break;
                }
                case carrier_role::SEGMENT:
                case carrier_role::GATE:
                {
                    bool in_vals[3]{};
                    bool unknown = false;
                    std::size_t n = 0;
                    for (const auto& ref : c.inputs)
                    {
                        std::int8_t iv = UNKNOWN;
                        if (ref.external)
                        {
                            if (tau >= 1)
                            {
                                iv = input_at(model.external_labels[ref.ext_port], (tau - 1) / N,
                                              ext_offsets[ref.ext_port]);
                            }
                        }
                        else
                        {
                            const auto back = 1u + ref.read_delay;
                            if (tau >= back)
                            {
                                iv = hist[ref.carrier][tau - back];
                            }
                        }
                        if (iv == UNKNOWN)
                        {
                            unknown = true;
                        }
                        in_vals[n++] = iv == 1;
                    }
                    if (!unknown && n > 0)
                    {
                        if (c.role == carrier_role::SEGMENT)
                        {
                            value = in_vals[0] ? 1 : 0;
                        }
                        else
                        {
                            value = evaluate_op(c.op, in_vals, n) ? 1 : 0;
                        }
                    }
                    break;
                }
            }
            hist[ci][tau] = value;
        }
    }

    // A consumer samples each output once per interval. The output must show
    // every expected value at some fixed interval-strided sampling offset;
    // between samples the signal may carry mixtures of adjacent generations.
    for (std::size_t oi = 0; oi < model.observers.size(); ++oi)
    {
        const auto [ci, label] = model.observers[oi];
        static_cast<void>(label);
        const auto clk = model.carriers[ci].clock;
        std::vector<std::int8_t> s(cycles);
        for (std::uint64_t c = 0; c < cycles; ++c)
        {
            s[c] = hist[ci][c * N + clk];
        }
        bool matched = false;
        for (std::uint64_t o = 0; o + (G - 1) * interval < cycles && !matched; ++o)
        {
            bool all = true;
            for (std::uint64_t g = 0; g < G && all; ++g)
            {
                all = s[o + g * interval] == expected[oi][g];
            }
            matched = all;
        }
        if (!matched)
        {
            return false;
        }
    }
    return true;
}

}  // namespace

std::unordered_map<std::string, bool> simulate_layout(const gate_layout& layout,
                                                      const input_vector& assignment)
{
    const auto& net = layout.network();
    const auto paths = trace_edge_paths(layout);
    for (const auto& [e, p] : paths)
    {
        if (!p)
        {
            throw fcn_error{"simulate_layout: connection " + std::to_string(e) +
                            " has no contiguous wire path"};
        }
    }

    std::map<std::uint32_t, bool> value{};
    for (const auto v : net.topological_order())
    {
        const auto& vx = net.vertex(v);
        const bool placed = layout.tile_of(v).has_value();
        if (vx.op == logic_op::PI)
        {
            if (placed)
            {
                const auto it = assignment.find(vx.label);
                if (it == assignment.end())
                {
                    throw fcn_error{"simulate_layout: missing assignment for input '" + vx.label +
                                    "'"};
                }
                value[v] = it->second;
            }
            continue;
        }
        if (!placed && vx.op != logic_op::PO)
        {
            continue;
        }
        bool in_vals[3]{};
        std::size_t n = 0;
        for (const auto e : net.in_edges(v))
        {
            const auto source = net.edge(e).source;
            if (edge_realized(layout, e) || value.count(source) != 0)
            {
                in_vals[n++] = value.at(source);
            }
            else
            {
                in_vals[n++] = external_input_value(net, source, assignment);
            }
        }
        value[v] = evaluate_op(vx.op, in_vals, n);
    }

    std::unordered_map<std::string, bool> out{};
    for (const auto po : net.pos())
    {
        const auto it = value.find(po);
        if (it == value.end())
        {
            throw fcn_error{"simulate_layout: output '" + net.vertex(po).label +
                            "' is not reachable from the layout"};
        }
        out[net.vertex(po).label] = it->second;
    }
    return out;
}

bool wave_interval_feasible(const gate_layout& layout, const std::vector<input_vector>& vectors,
                            const std::uint64_t interval)
{
    if (vectors.empty() || interval == 0)
    {
        throw fcn_error{"wave simulation: need at least one vector and a positive interval"};
    }
    const auto model = build_wave_model(layout);
    const auto& net = layout.network();

    // Expected output values per observer and generation, from network
    // simulation.
    std::vector<std::vector<std::int8_t>> expected(model.observers.size());
    for (std::size_t g = 0; g < vectors.size(); ++g)
    {
        const auto out = simulate(net, vectors[g]);
        for (std::size_t oi = 0; oi < model.observers.size(); ++oi)
        {
            expected[oi].push_back(out.at(model.observers[oi].second) ? 1 : 0);
        }
    }

    const auto ports = model.external_labels.size();
    if (ports == 0)
    {
        return run_wave(model, vectors, expected, interval, {});
    }
    if (ports > 8)
    {
        throw fcn_error{"wave simulation: too many external input ports to schedule"};
    }

    // External drivers may launch later than cycle 0; any spread beyond the
    // layout depth cannot help, so offsets range over [0, depth].
    const auto max_offset = critical_path_length(layout) / model.phases + 2;
    std::vector<std::uint64_t> offsets(ports, 0);
    const std::function<bool(std::size_t)> enumerate = [&](const std::size_t port) -> bool {
        if (port == ports)
        {
            return run_wave(model, vectors, expected, interval, offsets);
        }
        for (std::uint64_t d = 0; d <= max_offset; ++d)
        {
            offsets[port] = d;
            if (enumerate(port + 1))
            {
                return true;
            }
        }
        return false;
    };
    return enumerate(0);
}

std::optional<std::uint64_t> wave_minimum_interval(const gate_layout& layout,
                                                   const std::vector<input_vector>& vectors,
                                                   const std::uint64_t max_interval)
{
    for (std::uint64_t k = 1; k <= max_interval; ++k)
    {
        if (wave_interval_feasible(layout, vectors, k))
        {
            return k;
        }
    }
    return std::nullopt;
}

}  // namespace fcnlay
