#ifndef FCNLAY_TESTS_TEST_UTIL_HPP
#define FCNLAY_TESTS_TEST_UTIL_HPP

#include "fcnlay/layout/gate_layout.hpp"
#include "fcnlay/layout/simulate.hpp"
#include "fcnlay/network/logic_network.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace fcnlay::testutil
{

/**
 * Random combinational network on AND/OR/NOT over the given number of
 * inputs. Signals may be read several times; callers pass the result through
 * substitute_fanouts before layout. Every PI feeds at least one gate and
 * every dangling signal gets an output, so the network is finalizable.
 */
[[nodiscard]] inline logic_network random_network(std::mt19937_64& rng,
                                                  const std::size_t gate_count,
                                                  const std::size_t pi_count)
{
    logic_network net{"rnd"};
    std::vector<std::uint32_t> signals;
    std::vector<std::size_t> reads;
    for (std::size_t i = 0; i < pi_count; ++i)
    {
        signals.push_back(net.add_vertex(logic_op::PI, "x" + std::to_string(i)));
        reads.push_back(0);
    }
    const auto pick = [&]() -> std::size_t
    {
        // bias towards signals read the least so every input stays live
        std::vector<std::size_t> unread;
        for (std::size_t i = 0; i < signals.size(); ++i)
        {
            if (reads[i] == 0)
            {
                unread.push_back(i);
            }
        }
        if (!unread.empty() && (rng() % 4 != 0))
        {
            return unread[rng() % unread.size()];
        }
        return rng() % signals.size();
    };
    for (std::size_t g = 0; g < gate_count; ++g)
    {
        const auto choice = rng() % 5;
        const logic_op op = choice == 0 ? logic_op::NOT : choice < 3 ? logic_op::AND
                                                                     : logic_op::OR;
        const auto v = net.add_vertex(op);
        const auto a = pick();
        net.add_edge(signals[a], 0, v, 0);
        ++reads[a];
        if (op != logic_op::NOT)
        {
            auto b = pick();
            if (signals[b] == signals[a])
            {
                b = rng() % signals.size();
            }
            net.add_edge(signals[b], 0, v, 1);
            ++reads[b];
        }
        signals.push_back(v);
        reads.push_back(0);
    }
    std::size_t po = 0;
    for (std::size_t i = 0; i < signals.size(); ++i)
    {
        if (reads[i] == 0)
        {
            const auto out = net.add_vertex(logic_op::PO, "y" + std::to_string(po++));
            net.add_edge(signals[i], 0, out, 0);
        }
    }
    net.finalize();
    return net;
}

/// All PI labels of a network in definition order.
[[nodiscard]] inline std::vector<std::string> pi_labels(const logic_network& net)
{
    std::vector<std::string> labels;
    for (const auto& v : net.vertices())
    {
        if (v.op == logic_op::PI)
        {
            labels.push_back(v.label);
        }
    }
    return labels;
}

/**
 * Compares layout simulation against network simulation: exhaustively for up
 * to 8 inputs, on 64 random vectors otherwise. The reference network may be
 * the pre-substitution original since fan-out substitution is functional
 * identity.
 */
[[nodiscard]] inline bool functionally_equivalent(const logic_network& reference,
                                                  const gate_layout& layout,
                                                  std::mt19937_64& rng)
{
    const auto labels = pi_labels(reference);
    std::vector<input_vector> vectors;
    if (labels.size() <= 8)
    {
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << labels.size()); ++bits)
        {
            input_vector v;
            for (std::size_t i = 0; i < labels.size(); ++i)
            {
                v[labels[i]] = ((bits >> i) & 1) != 0;
            }
            vectors.push_back(std::move(v));
        }
    }
    else
    {
        for (int k = 0; k < 64; ++k)
        {
            input_vector v;
            for (const auto& label : labels)
            {
                v[label] = (rng() & 1) != 0;
            }
            vectors.push_back(std::move(v));
        }
    }
    for (const auto& v : vectors)
    {
        if (simulate(reference, v) != simulate_layout(layout, v))
        {
            return false;
        }
    }
    return true;
}

/**
 * Every connected DAG over at most max_internal AND/OR/NOT/FANOUT vertices,
 * deduplicated up to structural isomorphism by a canonical signature. Inputs
 * come from fresh PIs, unused output capacity is closed with POs, and
 * non-fan-out vertices keep out-degree <= 1 so the results are ready for
 * layout without further substitution.
 */
[[nodiscard]] inline std::vector<std::shared_ptr<const logic_network>>
enumerate_small_dags(const std::size_t max_internal)
{
    struct proto_vertex
    {
        logic_op op;
        // indices of internal predecessors, -1 for a PI input
        std::vector<int> ins;
    };

    std::vector<std::shared_ptr<const logic_network>> nets;
    std::set<std::string> seen;
    std::vector<proto_vertex> current;

    const auto capacity = [](const logic_op op) { return op == logic_op::FANOUT ? 2 : 1; };

    const auto connected = [&]() -> bool
    {
        const auto n = current.size();
        std::vector<std::set<std::size_t>> adj(n);
        for (std::size_t v = 0; v < n; ++v)
        {
            for (const int u : current[v].ins)
            {
                if (u >= 0)
                {
                    adj[static_cast<std::size_t>(u)].insert(v);
                    adj[v].insert(static_cast<std::size_t>(u));
                }
            }
        }
        std::vector<bool> vis(n, false);
        std::vector<std::size_t> stack{0};
        vis[0] = true;
        std::size_t count = 0;
        while (!stack.empty())
        {
            const auto v = stack.back();
            stack.pop_back();
            ++count;
            for (const auto u : adj[v])
            {
                if (!vis[u])
                {
                    vis[u] = true;
                    stack.push_back(u);
                }
            }
        }
        return count == n;
    };

    const auto signature = [&]() -> std::string
    {
        std::string sig;
        for (const auto& pv : current)
        {
            sig += std::to_string(static_cast<int>(pv.op)) + ":";
            for (const int u : pv.ins)
            {
                sig += std::to_string(u) + ",";
            }
            sig += ";";
        }
        return sig;
    };

    const auto materialize = [&]()
    {
        auto net = std::make_shared<logic_network>("enum" + std::to_string(nets.size()));
        std::vector<std::uint32_t> ids(current.size());
        std::vector<std::uint8_t> used_ports(current.size(), 0);
        for (std::size_t v = 0; v < current.size(); ++v)
        {
            ids[v] = net->add_vertex(current[v].op);
        }
        std::size_t pi = 0;
        for (std::size_t v = 0; v < current.size(); ++v)
        {
            for (std::size_t port = 0; port < current[v].ins.size(); ++port)
            {
                const int u = current[v].ins[port];
                if (u < 0)
                {
                    const auto in = net->add_vertex(logic_op::PI, "x" + std::to_string(pi++));
                    net->add_edge(in, 0, ids[v], static_cast<std::uint8_t>(port));
                }
                else
                {
                    const auto s = static_cast<std::size_t>(u);
                    net->add_edge(ids[s], used_ports[s]++, ids[v],
                                  static_cast<std::uint8_t>(port));
                }
            }
        }
        std::size_t po = 0;
        for (std::size_t v = 0; v < current.size(); ++v)
        {
            while (used_ports[v] < capacity(current[v].op))
            {
                const auto out = net->add_vertex(logic_op::PO, "y" + std::to_string(po++));
                net->add_edge(ids[v], used_ports[v]++, out, 0);
            }
        }
        net->finalize();
        nets.push_back(std::move(net));
    };

    const auto record = [&]()
    {
        if (!connected())
        {
            return;
        }
        auto sig = signature();
        if (seen.insert(std::move(sig)).second)
        {
            materialize();
        }
    };

    // Vertices are created in topological order, so inputs reference earlier
    // indices only; remaining output capacity bounds how often an index may
    // be referenced.
    const std::vector<logic_op> ops{logic_op::NOT, logic_op::AND, logic_op::OR,
                                    logic_op::FANOUT};
    const auto arity = [](const logic_op op) { return op == logic_op::AND || op == logic_op::OR ? 2 : 1; };

    std::vector<int> remaining;  // free output slots per internal vertex

    const std::function<void()> grow = [&]()
    {
        if (!current.empty())
        {
            record();
        }
        if (current.size() == max_internal)
        {
            return;
        }
        const auto self = current.size();
        for (const auto op : ops)
        {
            // choose each input among {fresh PI} + earlier vertices with capacity
            const int n_in = arity(op);
            std::vector<int> choice(static_cast<std::size_t>(n_in), -2);
            const std::function<void(int)> assign = [&](const int slot)
            {
                if (slot == n_in)
                {
                    current.push_back({op, choice});
                    remaining.push_back(op == logic_op::FANOUT ? 2 : 1);
                    grow();
                    remaining.pop_back();
                    current.pop_back();
                    return;
                }
                // fresh PI; canonical order: second input never "more" than first
                choice[static_cast<std::size_t>(slot)] = -1;
                assign(slot + 1);
                for (std::size_t u = 0; u < self; ++u)
                {
                    if (remaining[u] > 0 &&
                        (slot == 0 || choice[0] <= static_cast<int>(u)))
                    {
                        --remaining[u];
                        choice[static_cast<std::size_t>(slot)] = static_cast<int>(u);
                        assign(slot + 1);
                        choice[static_cast<std::size_t>(slot)] = -2;
                        ++remaining[u];
                    }
                }
            };
            assign(0);
        }
    };
    grow();
    return nets;
}

/**
 * Reference minimal area by exhaustive search on the four-phase one-way
 * diagonal clocking without crossings and without I/O tiles: every injective
 * placement of the internal vertices is tried on every grid in non-decreasing
 * area, and connections are routed by complete enumeration of the monotone
 * east/south paths with backtracking. Returns the smallest area admitting a
 * full routing, or nullopt if none exists up to max_area.
 */
[[nodiscard]] inline std::optional<std::uint64_t>
reference_min_area(const logic_network& net, const std::uint64_t max_area = 12)
{
    std::vector<std::uint32_t> internal;
    for (const auto& v : net.vertices())
    {
        if (v.op != logic_op::PI && v.op != logic_op::PO)
        {
            internal.push_back(v.id);
        }
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> links;  // internal -> internal
    for (const auto& e : net.edges())
    {
        const auto sop = net.vertex(e.source).op;
        const auto top = net.vertex(e.target).op;
        if (sop != logic_op::PI && sop != logic_op::PO && top != logic_op::PI &&
            top != logic_op::PO)
        {
            links.emplace_back(e.source, e.target);
        }
    }

    struct grid_state
    {
        std::uint32_t w{}, h{};
        std::vector<int> occupant;              // -1 free, -2 wire, else vertex index
        std::vector<std::uint8_t> exit_used;    // bit 0: E, bit 1: S (per tile)
        std::vector<std::uint8_t> entry_used;   // bit 0: W, bit 1: N (per tile)

        [[nodiscard]] std::size_t at(const std::uint32_t x, const std::uint32_t y) const
        {
            return static_cast<std::size_t>(y) * w + x;
        }
    };

    const auto route_all = [&](grid_state& g, const std::map<std::uint32_t, tile>& place,
                               const auto& self, const std::size_t link) -> bool
    {
        if (link == links.size())
        {
            return true;
        }
        const auto src = place.at(links[link].first);
        const auto dst = place.at(links[link].second);
        if (dst.x < src.x || dst.y < src.y || (dst.x == src.x && dst.y == src.y))
        {
            return false;
        }
        // enumerate monotone east/south paths with backtracking
        std::vector<tile> path{src};
        const std::function<bool()> extend = [&]() -> bool
        {
            const auto cur = path.back();
            if (cur == dst)
            {
                return self(g, place, self, link + 1);
            }
            for (const bool east : {true, false})
            {
                const tile next =
                    east ? tile{cur.x + 1, cur.y} : tile{cur.x, cur.y + 1};
                if (next.x > dst.x || next.y > dst.y)
                {
                    continue;
                }
                const auto ni = g.at(next.x, next.y);
                const auto ci = g.at(cur.x, cur.y);
                const std::uint8_t exit_bit = east ? 1 : 2;
                const std::uint8_t entry_bit = east ? 1 : 2;
                if ((g.exit_used[ci] & exit_bit) != 0 || (g.entry_used[ni] & entry_bit) != 0)
                {
                    continue;
                }
                const bool terminal = next == dst;
                if (!terminal && g.occupant[ni] != -1)
                {
                    continue;  // no crossings in the reference search
                }
                g.exit_used[ci] |= exit_bit;
                g.entry_used[ni] |= entry_bit;
                const auto saved = g.occupant[ni];
                if (!terminal)
                {
                    g.occupant[ni] = -2;
                }
                path.push_back(next);
                if (extend())
                {
                    return true;
                }
                path.pop_back();
                if (!terminal)
                {
                    g.occupant[ni] = saved;
                }
                g.exit_used[ci] &= static_cast<std::uint8_t>(~exit_bit);
                g.entry_used[ni] &= static_cast<std::uint8_t>(~entry_bit);
            }
            return false;
        };
        return extend();
    };

    for (std::uint64_t area = std::max<std::uint64_t>(internal.size(), 1); area <= max_area;
         ++area)
    {
        for (std::uint32_t w = 1; w <= area; ++w)
        {
            if (area % w != 0)
            {
                continue;
            }
            const auto h = static_cast<std::uint32_t>(area / w);
            grid_state base;
            base.w = w;
            base.h = h;
            base.occupant.assign(static_cast<std::size_t>(area), -1);
            base.exit_used.assign(static_cast<std::size_t>(area), 0);
            base.entry_used.assign(static_cast<std::size_t>(area), 0);

            std::map<std::uint32_t, tile> place;
            const std::function<bool(std::size_t, grid_state&)> try_place =
                [&](const std::size_t k, grid_state& g) -> bool
            {
                if (k == internal.size())
                {
                    auto scratch = g;
                    return route_all(scratch, place, route_all, 0);
                }
                for (std::uint32_t y = 0; y < h; ++y)
                {
                    for (std::uint32_t x = 0; x < w; ++x)
                    {
                        const auto idx = g.at(x, y);
                        if (g.occupant[idx] != -1)
                        {
                            continue;
                        }
                        g.occupant[idx] = static_cast<int>(k);
                        place[internal[k]] = tile{x, y};
                        if (try_place(k + 1, g))
                        {
                            return true;
                        }
                        place.erase(internal[k]);
                        g.occupant[idx] = -1;
                    }
                }
                return false;
            };
            if (try_place(0, base))
            {
                return area;
            }
        }
    }
    return std::nullopt;
}

}  // namespace fcnlay::testutil

#endif  // FCNLAY_TESTS_TEST_UTIL_HPP
