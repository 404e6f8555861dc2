#include "fcnlay/layout/analysis.hpp"

#include "fcnlay/embedded_data.hpp"
#include "fcnlay/layout/check.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

namespace fcnlay
{

namespace
{

struct arrival_info
{
    // Longest chains per placed vertex: tile counts and absolute phases.
    std::map<std::uint32_t, std::size_t> tiles{};
    std::map<std::uint32_t, std::uint64_t> phase{};
    // Absolute phase at which each realized connection is latched into its
    // target vertex, keyed by edge id.
    std::map<std::uint32_t, std::uint64_t> edge_phase_in{};
};

[[nodiscard]] std::uint64_t path_phase_cost(const gate_layout& layout,
                                            const std::vector<tile>& tiles)
{
    std::uint64_t cost = 0;
    for (std::size_t i = 0; i + 1 < tiles.size(); ++i)
    {
        cost += 1u + layout.latch_at(tiles[i]);
    }
    return cost;
}

[[nodiscard]] arrival_info
compute_arrivals(const gate_layout& layout,
                 const std::map<std::uint32_t, std::optional<edge_path>>& paths)
{
    const auto& net = layout.network();
    arrival_info info{};

    for (const auto& [e, path] : paths)
    {
        if (!path)
        {
            throw fcn_error{"analysis: connection " + std::to_string(e) +
                            " has no contiguous wire path"};
        }
    }

    for (const auto v : net.topological_order())
    {
        const auto tv = layout.tile_of(v);
        if (!tv)
        {
            continue;
        }
        std::size_t best_tiles = 1;
        std::uint64_t best_phase = 0;
        bool any_realized = false;
        for (const auto e : net.in_edges(v))
        {
            const auto pit = paths.find(e);
            if (pit == paths.end())
            {
                continue;  // driven from outside the layout
            }
            const auto& pt = pit->second->tiles;
            const auto u = net.edge(e).source;
            const auto in_phase = info.phase.at(u) + path_phase_cost(layout, pt);
            info.edge_phase_in.emplace(e, in_phase);
            best_tiles = std::max(best_tiles, info.tiles.at(u) + pt.size() - 1);
            best_phase = std::max(best_phase, in_phase);
            any_realized = true;
        }
        if (!any_realized)
        {
            const auto clk = layout.clock_at(*tv);
            if (!clk)
            {
                throw fcn_error{"analysis: source tile (" + std::to_string(tv->x) + "," +
                                std::to_string(tv->y) + ") has no clock number"};
            }
            best_phase = *clk;
        }
        info.tiles.emplace(v, best_tiles);
        info.phase.emplace(v, best_phase);
    }
    return info;
}

enum class energy_kind : std::uint8_t
{
    WIRE,
    FANOUT,
    INVERTER_STRAIGHT,
    INVERTER_BENT,
    CROSSING,
    GATE2,
    GATE3,
    IO_PIN,
    CONSTANT,
    LATCH
};

[[nodiscard]] const char* energy_kind_key(const energy_kind k)
{
    switch (k)
    {
        case energy_kind::WIRE: return "wire";
        case energy_kind::FANOUT: return "fanout";
        case energy_kind::INVERTER_STRAIGHT: return "inverter_straight";
        case energy_kind::INVERTER_BENT: return "inverter_bent";
        case energy_kind::CROSSING: return "crossing";
        case energy_kind::GATE2: return "gate2";
        case energy_kind::GATE3: return "gate3";
        case energy_kind::IO_PIN: return "io_pin";
        case energy_kind::CONSTANT: return "const";
        case energy_kind::LATCH: return "latch";
    }
    return "wire";
}

/// Whether the inverter on tile t runs straight through (fan-in side opposite
/// the fan-out side). Unrealized connections default to straight.
[[nodiscard]] bool inverter_is_straight(const gate_layout& layout,
                                        const std::map<std::uint32_t, std::optional<edge_path>>& paths,
                                        const std::uint32_t v, const tile t)
{
    const auto& net = layout.network();
    std::optional<direction> in_side{};
    std::optional<direction> out_side{};
    for (const auto e : net.in_edges(v))
    {
        const auto pit = paths.find(e);
        if (pit != paths.end() && pit->second)
        {
            const auto& tl = pit->second->tiles;
            const auto prev = tl[tl.size() - 2];
            for (const auto d : {direction::N, direction::E, direction::S, direction::W})
            {
                if (const auto n = neighbor(t, d); n && *n == prev)
                {
                    in_side = d;
                }
            }
        }
    }
    for (const auto e : net.out_edges(v))
    {
        const auto pit = paths.find(e);
        if (pit != paths.end() && pit->second)
        {
            const auto& tl = pit->second->tiles;
            const auto nxt = tl[1];
            for (const auto d : {direction::N, direction::E, direction::S, direction::W})
            {
                if (const auto n = neighbor(t, d); n && *n == nxt)
                {
                    out_side = d;
                }
            }
        }
    }
    if (!in_side || !out_side)
    {
        return true;
    }
    return *out_side == opposite(*in_side);
}

[[nodiscard]] energy_kind
classify_tile(const gate_layout& layout,
              const std::map<std::uint32_t, std::optional<edge_path>>& paths, const tile t)
{
    if (layout.latch_at(t) >= 1)
    {
        return energy_kind::LATCH;
    }
    if (const auto v = layout.vertex_at(t))
    {
        switch (layout.network().vertex(*v).op)
        {
            case logic_op::PI:
            case logic_op::PO: return energy_kind::IO_PIN;
            case logic_op::CONST0:
            case logic_op::CONST1: return energy_kind::CONSTANT;
            case logic_op::FANOUT: return energy_kind::FANOUT;
            case logic_op::NOT:
                return inverter_is_straight(layout, paths, *v, t) ?
                           energy_kind::INVERTER_STRAIGHT :
                           energy_kind::INVERTER_BENT;
            case logic_op::MAJ: return energy_kind::GATE3;
            default: return energy_kind::GATE2;
        }
    }
    return layout.wires_at(t).size() == 2 ? energy_kind::CROSSING : energy_kind::WIRE;
}

}  // namespace

std::size_t critical_path_length(const gate_layout& layout)
{
    const auto paths = trace_edge_paths(layout);
    const auto info = compute_arrivals(layout, paths);
    std::size_t cp = 0;
    for (const auto& [v, a] : info.tiles)
    {
        static_cast<void>(v);
        cp = std::max(cp, a);
    }
    return cp;
}

std::uint64_t throughput_denominator(const gate_layout& layout)
{
    const auto& net = layout.network();
    const auto paths = trace_edge_paths(layout);
    for (const auto& [e, path] : paths)
    {
        if (!path)
        {
            throw fcn_error{"analysis: connection " + std::to_string(e) +
                            " has no contiguous wire path"};
        }
    }
    const auto phases = static_cast<std::int64_t>(layout.scheme().phases);

    // Cycle lag of every realized connection: how many full cycles later than
    // its source's wave a target latches the value.
    struct connection_lag
    {
        std::uint32_t source{};
        std::uint32_t target{};
        std::int64_t cycles{};
    };
    std::vector<connection_lag> lags{};
    std::map<std::uint32_t, std::uint32_t> node_index{};
    const auto node_of = [&node_index](const std::uint32_t v) {
        return node_index.emplace(v, static_cast<std::uint32_t>(node_index.size()))
            .first->second;
    };
    for (const auto& [e, path] : paths)
    {
        const auto& tl = path->tiles;
        const auto source_clock = layout.clock_at(tl.front());
        const auto target_clock = layout.clock_at(tl.back());
        if (!source_clock || !target_clock)
        {
            throw fcn_error{"analysis: connection " + std::to_string(e) +
                            " touches a tile without a clock number"};
        }
        const auto raw = static_cast<std::int64_t>(*source_clock) +
                         static_cast<std::int64_t>(path_phase_cost(layout, tl)) -
                         static_cast<std::int64_t>(*target_clock);
        if (raw % phases != 0)
        {
            throw fcn_error{"analysis: fan-in arrivals of vertex " +
                            std::to_string(net.edge(e).target) +
                            " are not clock-consistent"};
        }
        lags.push_back({node_of(net.edge(e).source), node_of(net.edge(e).target),
                        raw / phases});
    }
    if (lags.empty())
    {
        return 1;
    }

    // Every vertex processes some wave index w; a connection with lag q feeds
    // wave w of its source into waves [w + q, w + q + slack] of its target
    // when inputs are held for slack extra cycles. Sources launch when their
    // wave front arrives, so only the residual imbalance that no launch
    // schedule can absorb costs throughput. Feasibility of a given slack is a
    // difference-constraint system; infeasibility shows as a negative cycle.
    const auto feasible = [&](const std::int64_t slack) {
        const auto n = node_index.size();
        std::vector<std::int64_t> potential(n, 0);
        for (std::size_t round = 0; round <= n; ++round)
        {
            bool relaxed = false;
            for (const auto& l : lags)
            {
                // target no later than source + lag + slack
                if (potential[l.target] > potential[l.source] + l.cycles + slack)
                {
                    potential[l.target] = potential[l.source] + l.cycles + slack;
                    relaxed = true;
                }
                // target no earlier than source + lag
                if (potential[l.source] > potential[l.target] - l.cycles)
                {
                    potential[l.source] = potential[l.target] - l.cycles;
                    relaxed = true;
                }
            }
            if (!relaxed)
            {
                return true;
            }
        }
        return false;
    };

    std::int64_t hi = 0;
    for (const auto& l : lags)
    {
        hi += l.cycles < 0 ? -l.cycles : l.cycles;
    }
    std::int64_t lo = 0;
    while (lo < hi)
    {
        const auto mid = lo + (hi - lo) / 2;
        if (feasible(mid))
        {
            hi = mid;
        }
        else
        {
            lo = mid + 1;
        }
    }
    return 1 + static_cast<std::uint64_t>(lo);
}

const energy_coefficients& energy_table::lookup(const std::string& kind) const
{
    const auto it = per_kind.find(kind);
    if (it == per_kind.end())
    {
        throw fcn_error{"energy table: no coefficients for tile kind '" + kind + "'"};
    }
    return it->second;
}

energy_table parse_energy_table(const std::string_view json_text)
{
    nlohmann::json j{};
    try
    {
        j = nlohmann::json::parse(json_text);
    }
    catch (const nlohmann::json::exception& ex)
    {
        throw fcn_error{std::string{"energy table: invalid JSON: "} + ex.what()};
    }
    if (!j.is_object() || !j.contains("coefficients") || !j["coefficients"].is_object())
    {
        throw fcn_error{"energy table: expected an object with a 'coefficients' member"};
    }
    energy_table table{};
    for (const auto& [kind, entry] : j["coefficients"].items())
    {
        if (!entry.is_object() || !entry.contains("slow") || !entry.contains("fast") ||
            !entry["slow"].is_number() || !entry["fast"].is_number())
        {
            throw fcn_error{"energy table: kind '" + kind +
                            "' needs numeric 'slow' and 'fast' members"};
        }
        table.per_kind[kind] =
            energy_coefficients{entry["slow"].get<double>(), entry["fast"].get<double>()};
    }
    static const char* required[] = {"wire",  "fanout", "inverter_straight", "inverter_bent",
                                     "crossing", "gate2",  "gate3", "io_pin", "const", "latch"};
    for (const auto* kind : required)
    {
        if (table.per_kind.count(kind) == 0)
        {
            throw fcn_error{"energy table: missing coefficients for tile kind '" +
                            std::string{kind} + "'"};
        }
    }
    return table;
}

energy_table load_energy_table(const std::filesystem::path& file)
{
    std::ifstream in{file};
    if (!in)
    {
        throw fcn_error{"energy table: cannot open '" + file.string() + "'"};
    }
    std::ostringstream buf{};
    buf << in.rdbuf();
    return parse_energy_table(buf.str());
}

const energy_table& default_energy_table()
{
    static const energy_table table = parse_energy_table(embedded::energy_json);
    return table;
}

energy_breakdown energy_estimate(const gate_layout& layout, const energy_table& table)
{
    const auto paths = trace_edge_paths(layout);
    energy_breakdown total{};
    for (const auto t : layout.occupied_tiles())
    {
        const auto kind = classify_tile(layout, paths, t);
        const auto& c = table.lookup(energy_kind_key(kind));
        total.slow_mev += c.slow;
        total.fast_mev += c.fast;
    }
    return total;
}

layout_statistics layout_stats(const gate_layout& layout, const energy_table& energy)
{
    layout_statistics st{};
    st.network_name = layout.network().name();
    st.width = layout.width();
    st.height = layout.height();
    st.area = layout.area();

    std::uint32_t min_x = UINT32_MAX;
    std::uint32_t min_y = UINT32_MAX;
    std::uint32_t max_x = 0;
    std::uint32_t max_y = 0;
    const auto occupied = layout.occupied_tiles();
    for (const auto t : occupied)
    {
        min_x = std::min(min_x, t.x);
        min_y = std::min(min_y, t.y);
        max_x = std::max(max_x, t.x);
        max_y = std::max(max_y, t.y);
        const auto segs = layout.wires_at(t).size();
        if (layout.vertex_at(t))
        {
            ++st.gate_count;
        }
        else if (segs > 0)
        {
            st.wire_count += segs;
            if (segs == 2)
            {
                ++st.crossing_count;
            }
        }
        if (layout.latch_at(t) >= 1)
        {
            ++st.latch_count;
        }
    }
    if (!occupied.empty())
    {
        st.bounding_box_width = max_x - min_x + 1;
        st.bounding_box_height = max_y - min_y + 1;
    }
    st.critical_path = critical_path_length(layout);
    st.throughput_denominator = throughput_denominator(layout);
    st.energy = energy_estimate(layout, energy);
    return st;
}

std::string format_stats_line(const layout_statistics& st)
{
    std::ostringstream os{};
    os << st.network_name << ": " << st.width << " x " << st.height << ", #G: " << st.gate_count
       << ", #W: " << st.wire_count << ", #C: " << st.crossing_count << ", #L: " << st.latch_count
       << ", CP: " << st.critical_path << ", TP: 1/" << st.throughput_denominator;
    return os.str();
}

}  // namespace fcnlay
