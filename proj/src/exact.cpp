#include "fcnlay/exact/exact.hpp"

#include "fcnlay/layout/check.hpp"
#include "fcnlay/solver/sat.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fcnlay
{

dimension_stream::dimension_stream(const std::uint64_t min_area)
    : area_{std::max<std::uint64_t>(min_area, 1)}
{
    refill();
}

void dimension_stream::refill()
{
    pending_.clear();
    index_ = 0;
    for (std::uint64_t w = 1; w * w <= area_; ++w)
    {
        if (area_ % w != 0)
        {
            continue;
        }
        const std::uint64_t h = area_ / w;
        if (h > std::numeric_limits<std::uint32_t>::max())
        {
            continue;
        }
        pending_.emplace_back(static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h));
        if (w != h)
        {
            pending_.emplace_back(static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(w));
        }
    }
    std::sort(pending_.begin(), pending_.end(),
              [](const auto& a, const auto& b)
              {
                  const auto da = a.first > a.second ? a.first - a.second : a.second - a.first;
                  const auto db = b.first > b.second ? b.first - b.second : b.second - b.first;
                  return da != db ? da < db : a.first < b.first;
              });
}

std::optional<std::pair<std::uint32_t, std::uint32_t>>
dimension_stream::next(const std::optional<std::uint64_t> upper_bound)
{
    while (index_ >= pending_.size())
    {
        ++area_;
        refill();
    }
    if (upper_bound && area_ > *upper_bound)
    {
        return std::nullopt;
    }
    return pending_[index_++];
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> dimension_sequence(const std::uint64_t min_area,
                                                                        const std::size_t count)
{
    dimension_stream stream{min_area};
    std::vector<std::pair<std::uint32_t, std::uint32_t>> dims;
    dims.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
    {
        dims.push_back(*stream.next());
    }
    return dims;
}

namespace
{

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

using time_point = std::chrono::steady_clock::time_point;

[[nodiscard]] time_point now()
{
    return std::chrono::steady_clock::now();
}

[[nodiscard]] double seconds_since(const time_point start)
{
    return std::chrono::duration<double>(now() - start).count();
}

struct realized_edge
{
    std::uint32_t edge{};
    std::size_t src_slot{};
    std::size_t dst_slot{};
};

/**
 * Vertex and connection universe of one placement run: which vertices go on
 * the grid (slots) and which connections run between two placed endpoints.
 * Connections to off-grid I/O vertices are left to external wiring.
 */
struct placement_problem
{
    std::vector<std::uint32_t> placeable{};
    std::vector<std::size_t> slot_of{};
    std::vector<realized_edge> edges{};
    std::vector<std::vector<std::size_t>> fan_in{};
    std::vector<std::vector<std::size_t>> fan_out{};
    // Longest vertex chains ending at / starting from each slot; lower bounds
    // on how far from the grid corners the slot can sit on one-way clockings.
    std::vector<std::uint32_t> chain_before{};
    std::vector<std::uint32_t> chain_after{};
};

[[nodiscard]] placement_problem build_problem(const logic_network& net, const bool io_pins)
{
    placement_problem p;
    p.slot_of.assign(net.num_vertices(), npos);
    const auto is_pin = [&](const std::uint32_t v)
    {
        const auto op = net.vertex(v).op;
        return op == logic_op::PI || op == logic_op::PO;
    };
    for (std::uint32_t v = 0; v < net.num_vertices(); ++v)
    {
        if (io_pins || !is_pin(v))
        {
            p.placeable.push_back(v);
        }
    }
    if (p.placeable.empty())
    {
        // A network of nothing but I/O vertices is placed outright.
        for (std::uint32_t v = 0; v < net.num_vertices(); ++v)
        {
            p.placeable.push_back(v);
        }
    }
    for (std::size_t s = 0; s < p.placeable.size(); ++s)
    {
        p.slot_of[p.placeable[s]] = s;
    }
    p.fan_in.resize(p.placeable.size());
    p.fan_out.resize(p.placeable.size());
    for (std::uint32_t ei = 0; ei < net.num_edges(); ++ei)
    {
        const auto& e = net.edge(ei);
        const auto ss = p.slot_of[e.source];
        const auto ds = p.slot_of[e.target];
        if (ss == npos || ds == npos)
        {
            continue;
        }
        const auto idx = p.edges.size();
        p.edges.push_back({ei, ss, ds});
        p.fan_in[ds].push_back(idx);
        p.fan_out[ss].push_back(idx);
    }
    p.chain_before.assign(p.placeable.size(), 1);
    p.chain_after.assign(p.placeable.size(), 1);
    const auto topo = net.topological_order();
    for (const auto v : topo)
    {
        const auto s = p.slot_of[v];
        if (s == npos)
        {
            continue;
        }
        for (const auto re : p.fan_in[s])
        {
            p.chain_before[s] =
                std::max(p.chain_before[s], p.chain_before[p.edges[re].src_slot] + 1);
        }
    }
    for (auto it = topo.rbegin(); it != topo.rend(); ++it)
    {
        const auto s = p.slot_of[*it];
        if (s == npos)
        {
            continue;
        }
        for (const auto re : p.fan_out[s])
        {
            p.chain_after[s] = std::max(p.chain_after[s], p.chain_after[p.edges[re].dst_slot] + 1);
        }
    }
    return p;
}

/**
 * CNF model of one W x H grid: vertex placement, hop-based routing of every
 * realized connection, tile capacity with perpendicular-crossing structure,
 * clock compatibility (optionally with per-tile delays or free clock
 * assignment), and equal signal arrivals across reconvergences unless
 * desynchronization is allowed.
 */
class grid_encoder
{
  public:
    grid_encoder(std::shared_ptr<const logic_network> net, const placement_problem& prob,
                 const exact_parameters& params, const std::uint32_t width,
                 const std::uint32_t height)
        : net_{std::move(net)},
          prob_{prob},
          params_{params},
          width_{width},
          height_{height},
          tiles_{width * height},
          phases_{params.scheme.phases},
          regular_{params.scheme.regular}
    {
        if (regular_)
        {
            clk_.resize(tiles_);
            for (std::uint32_t ti = 0; ti < tiles_; ++ti)
            {
                const auto t = tile_at(ti);
                clk_[ti] = *params_.scheme.clock_number(t.x, t.y);
            }
        }
        build_adjacency();
    }

    void build(std::optional<std::uint32_t> crossing_bound);

    [[nodiscard]] sat_result solve(const std::optional<time_point> deadline,
                                   const std::atomic<bool>* cancel)
    {
        return solver_.solve(deadline, cancel);
    }

    [[nodiscard]] gate_layout decode() const;

  private:
    [[nodiscard]] std::uint32_t tile_index(const tile t) const { return t.y * width_ + t.x; }
    [[nodiscard]] tile tile_at(const std::uint32_t ti) const
    {
        return tile{ti % width_, ti / width_};
    }
    [[nodiscard]] bool on_border(const std::uint32_t ti) const
    {
        const auto t = tile_at(ti);
        return t.x == 0 || t.y == 0 || t.x + 1 == width_ || t.y + 1 == height_;
    }

    void build_adjacency();
    void allocate_placement();
    void allocate_flows();
    void emit_flow_clauses();
    void emit_capacity_clauses(std::optional<std::uint32_t> crossing_bound);
    void emit_port_clauses();
    void emit_clock_clauses();
    void emit_balance_clauses();
    void emit_wire_limit_clauses();

    void add_arrival_step(const std::vector<sat_literal>& condition, std::uint32_t from,
                          std::uint32_t to, std::uint32_t step);

    [[nodiscard]] std::int32_t place_var(const std::size_t slot, const std::uint32_t ti) const
    {
        return place_[slot * tiles_ + ti];
    }
    [[nodiscard]] std::int32_t hop_var(const std::size_t edge, const std::size_t ai) const
    {
        return hop_[edge * adj_.size() + ai];
    }
    [[nodiscard]] std::int32_t in_var(const std::size_t edge, const std::uint32_t ti) const
    {
        return flow_in_[edge * tiles_ + ti];
    }
    [[nodiscard]] std::int32_t out_var(const std::size_t edge, const std::uint32_t ti) const
    {
        return flow_out_[edge * tiles_ + ti];
    }
    [[nodiscard]] std::int32_t through_var(const std::size_t edge, const std::uint32_t ti) const
    {
        return through_[edge * tiles_ + ti];
    }
    [[nodiscard]] std::int32_t arrival_var(const std::uint32_t ti, const std::uint32_t k) const
    {
        return arrival_[static_cast<std::size_t>(ti) * kmax_ + (k - 1)];
    }

    std::shared_ptr<const logic_network> net_;
    const placement_problem& prob_;
    const exact_parameters& params_;
    std::uint32_t width_;
    std::uint32_t height_;
    std::uint32_t tiles_;
    unsigned phases_;
    bool regular_;
    bool monotone_{false};
    std::uint32_t kmax_{0};

    std::vector<std::uint8_t> clk_{};

    struct adjacency
    {
        std::uint32_t from{};
        std::uint32_t to{};
        direction dir{direction::E};
    };
    std::vector<adjacency> adj_{};
    std::vector<std::vector<std::size_t>> adj_out_{};
    std::vector<std::vector<std::size_t>> adj_in_{};
    std::vector<std::size_t> reverse_of_{};

    sat_solver solver_{};
    std::vector<std::int32_t> place_{};
    std::vector<std::int32_t> hop_{};
    std::vector<std::int32_t> flow_in_{};
    std::vector<std::int32_t> flow_out_{};
    std::vector<std::int32_t> through_{};
    std::vector<std::int32_t> straight_h_{};
    std::vector<std::int32_t> straight_v_{};
    std::vector<std::int32_t> cross_here_{};
    std::vector<std::int32_t> any_hop_{};
    std::vector<std::int32_t> arrival_{};
    std::vector<std::int32_t> latch_var_{};
    std::vector<std::int32_t> zone_var_{};
};

void grid_encoder::build_adjacency()
{
    const bool prefiltered = regular_ && !params_.latches;
    adj_out_.resize(tiles_);
    adj_in_.resize(tiles_);
    for (std::uint32_t ti = 0; ti < tiles_; ++ti)
    {
        const auto t = tile_at(ti);
        for (const auto d : {direction::N, direction::E, direction::S, direction::W})
        {
            const auto nb = neighbor(t, d);
            if (!nb || nb->x >= width_ || nb->y >= height_)
            {
                continue;
            }
            const auto nj = tile_index(*nb);
            if (prefiltered && clk_[nj] != (clk_[ti] + 1) % phases_)
            {
                continue;
            }
            const auto ai = adj_.size();
            adj_.push_back({ti, nj, d});
            adj_out_[ti].push_back(ai);
            adj_in_[nj].push_back(ai);
        }
    }
    reverse_of_.assign(adj_.size(), npos);
    std::unordered_map<std::uint64_t, std::size_t> by_pair;
    by_pair.reserve(adj_.size());
    for (std::size_t ai = 0; ai < adj_.size(); ++ai)
    {
        by_pair[(static_cast<std::uint64_t>(adj_[ai].from) << 32) | adj_[ai].to] = ai;
    }
    for (std::size_t ai = 0; ai < adj_.size(); ++ai)
    {
        const auto it = by_pair.find((static_cast<std::uint64_t>(adj_[ai].to) << 32) | adj_[ai].from);
        if (it != by_pair.end())
        {
            reverse_of_[ai] = it->second;
        }
    }
    // One-way grids (every admissible hop advances x + y) admit chain-length
    // placement windows and a tight arrival range.
    monotone_ = prefiltered;
    for (const auto& a : adj_)
    {
        if (a.dir == direction::N || a.dir == direction::W)
        {
            monotone_ = false;
            break;
        }
    }
}

void grid_encoder::allocate_placement()
{
    place_.assign(prob_.placeable.size() * tiles_, 0);
    for (std::size_t s = 0; s < prob_.placeable.size(); ++s)
    {
        const auto v = prob_.placeable[s];
        const auto op = net_->vertex(v).op;
        const bool pin = op == logic_op::PI || op == logic_op::PO;
        for (std::uint32_t ti = 0; ti < tiles_; ++ti)
        {
            if (params_.border_io && pin && !on_border(ti))
            {
                continue;
            }
            if (monotone_)
            {
                const auto t = tile_at(ti);
                const auto ahead = (width_ - 1 - t.x) + (height_ - 1 - t.y);
                if (t.x + t.y + 1 < prob_.chain_before[s] || ahead + 1 < prob_.chain_after[s])
                {
                    continue;
                }
            }
            place_[s * tiles_ + ti] = solver_.new_variable();
        }
    }
    for (std::size_t s = 0; s < prob_.placeable.size(); ++s)
    {
        std::vector<sat_literal> lits;
        for (std::uint32_t ti = 0; ti < tiles_; ++ti)
        {
            if (const auto p = place_var(s, ti); p != 0)
            {
                lits.push_back(p);
            }
        }
        solver_.exactly_one(lits);
    }
    for (std::uint32_t ti = 0; ti < tiles_; ++ti)
    {
        std::vector<sat_literal> lits;
        for (std::size_t s = 0; s < prob_.placeable.size(); ++s)
        {
            if (const auto p = place_var(s, ti); p != 0)
            {
                lits.push_back(p);
            }
        }
        solver_.at_most_one(lits);
    }
}

void grid_encoder::allocate_flows()
{
    const auto m = prob_.edges.size();
    hop_.assign(m * adj_.size(), 0);
    flow_in_.assign(m * tiles_, 0);
    flow_out_.assign(m * tiles_, 0);
    through_.assign(m * tiles_, 0);
    for (std::size_t e = 0; e < m; ++e)
    {
        for (std::size_t ai = 0; ai < adj_.size(); ++ai)
        {
            hop_[e * adj_.size() + ai] = solver_.new_variable();
        }
        for (std::uint32_t ti = 0; ti < tiles_; ++ti)
        {
            if (!adj_in_[ti].empty())
            {
                flow_in_[e * tiles_ + ti] = solver_.new_variable();
            }
            if (!adj_out_[ti].empty())
            {
                flow_out_[e * tiles_ + ti] = solver_.new_variable();
            }
            if (flow_in_[e * tiles_ + ti] != 0 && flow_out_[e * tiles_ + ti] != 0)
            {
                through_[e * tiles_ + ti] = solver_.new_variable();
            }
        }
    }
}

void grid_encoder::emit_flow_clauses()
{
    const auto m = prob_.edges.size();
    std::vector<sat_literal> lits;
    for (std::size_t e = 0; e < m; ++e)
    {
        // Hop aggregation per tile plus single-use of each tile side.
        for (std::uint32_t ti = 0; ti < tiles_; ++ti)
        {
            const auto in = in_var(e, ti);
            if (in != 0)
            {
                lits.clear();
                lits.push_back(-in);
                for (const auto ai : adj_in_[ti])
                {
                    lits.push_back(hop_var(e, ai));
                    solver_.add_clause({-hop_var(e, ai), in});
                }
                solver_.add_clause(lits);
                lits.assign(adj_in_[ti].size(), 0);
                std::transform(adj_in_[ti].begin(), adj_in_[ti].end(), lits.begin(),
                               [&](const std::size_t ai) { return hop_var(e, ai); });
                solver_.at_most_one(lits);
            }
            const auto out = out_var(e, ti);
            if (out != 0)
            {
                lits.clear();
                lits.push_back(-out);
                for (const auto ai : adj_out_[ti])
                {
                    lits.push_back(hop_var(e, ai));
                    solver_.add_clause({-hop_var(e, ai), out});
                }
                solver_.add_clause(lits);
                lits.assign(adj_out_[ti].size(), 0);
                std::transform(adj_out_[ti].begin(), adj_out_[ti].end(), lits.begin(),
                               [&](const std::size_t ai) { return hop_var(e, ai); });
                solver_.at_most_one(lits);
            }
        }
        // No immediate back-hops: a connection never leaves a tile through
        // the side it entered.
        for (std::size_t ai = 0; ai < adj_.size(); ++ai)
        {
            const auto ar = reverse_of_[ai];
            if (ar != npos && ai < ar)
            {
                solver_.add_clause({-hop_var(e, ai), -hop_var(e, ar)});
            }
        }
        // Path shape: sources emit, sinks absorb, and flow continues through
        // every tile in between.
        const auto& re = prob_.edges[e];
        for (std::uint32_t ti = 0; ti < tiles_; ++ti)
        {
            const auto ps = place_var(re.src_slot, ti);
            const auto pd = place_var(re.dst_slot, ti);
            const auto in = in_var(e, ti);
            const auto out = out_var(e, ti);
            if (ps != 0)
            {
                if (out != 0)
                {
                    solver_.add_clause({-ps, out});
                }
                else
                {
                    solver_.add_clause({-ps});
                }
                if (in != 0)
                {
                    solver_.add_clause({-ps, -in});
                }
            }
            if (pd != 0)
            {
                if (in != 0)
                {
                    solver_.add_clause({-pd, in});
                }
                else
                {
                    solver_.add_clause({-pd});
                }
                if (out != 0)
                {
                    solver_.add_clause({-pd, -out});
                }
            }
            if (out != 0)
            {
                lits.clear();
                lits.push_back(-out);
                if (ps != 0)
                {
                    lits.push_back(ps);
                }
                if (in != 0)
                {
                    lits.push_back(in);
                }
                solver_.add_clause(lits);
            }
            if (in != 0)
            {
                lits.clear();
                lits.push_back(-in);
                if (pd != 0)
                {
                    lits.push_back(pd);
                }
                if (out != 0)
                {
                    lits.push_back(out);
                }
                solver_.add_clause(lits);
            }
        }
    }
    // Tiles holding a vertex carry no unrelated flows.
    for (std::uint32_t ti = 0; ti < tiles_; ++ti)
    {
        for (std::size_t s = 0; s < prob_.placeable.size(); ++s)
        {
            const auto p = place_var(s, ti);
            if (p == 0)
            {
                continue;
            }
            for (std::size_t e = 0; e < m; ++e)
            {
                if (prob_.edges[e].dst_slot != s)
                {
                    if (const auto in = in_var(e, ti); in != 0)
                    {
                        solver_.add_clause({-p, -in});
                    }
                }
                if (prob_.edges[e].src_slot != s)
                {
                    if (const auto out = out_var(e, ti); out != 0)
                    {
                        solver_.add_clause({-p, -out});
                    }
                }
            }
        }
    }
}

void grid_encoder::emit_capacity_clauses(const std::optional<std::uint32_t> crossing_bound)
{
    const auto m = prob_.edges.size();
    for (std::size_t e = 0; e < m; ++e)
    {
        for (std::uint32_t ti = 0; ti < tiles_; ++ti)
        {
            const auto th = through_var(e, ti);
            if (th == 0)
            {
                continue;
            }
            const auto in = in_var(e, ti);
            const auto out = out_var(e, ti);
            solver_.add_clause({-th, in});
            solver_.add_clause({-th, out});
            solver_.add_clause({-in, -out, th});
        }
    }
    if (params_.crossings)
    {
        straight_h_.assign(m * tiles_, 0);
        straight_v_.assign(m * tiles_, 0);
        if (crossing_bound)
        {
            cross_here_.assign(tiles_, 0);
        }
        std::vector<sat_literal> lits;
        for (std::size_t e = 0; e < m; ++e)
        {
            for (std::uint32_t ti = 0; ti < tiles_; ++ti)
            {
                if (through_var(e, ti) == 0)
                {
                    continue;
                }
                const auto sh = solver_.new_variable();
                const auto sv = solver_.new_variable();
                straight_h_[e * tiles_ + ti] = sh;
                straight_v_[e * tiles_ + ti] = sv;
                const auto add_side = [&](const std::int32_t var, const bool horizontal,
                                          const std::vector<std::size_t>& side)
                {
                    lits.clear();
                    lits.push_back(-var);
                    for (const auto ai : side)
                    {
                        const auto d = adj_[ai].dir;
                        const bool h = d == direction::E || d == direction::W;
                        if (h == horizontal)
                        {
                            lits.push_back(hop_var(e, ai));
                        }
                    }
                    solver_.add_clause(lits);
                };
                add_side(sh, true, adj_in_[ti]);
                add_side(sh, true, adj_out_[ti]);
                add_side(sv, false, adj_in_[ti]);
                add_side(sv, false, adj_out_[ti]);
            }
        }
        for (std::uint32_t ti = 0; ti < tiles_; ++ti)
        {
            std::vector<sat_literal> occ;
            std::vector<std::size_t> occ_edges;
            for (std::size_t e = 0; e < m; ++e)
            {
                if (const auto th = through_var(e, ti); th != 0)
                {
                    occ.push_back(th);
                    occ_edges.push_back(e);
                }
            }
            if (occ.size() > 2)
            {
                solver_.at_most_k(occ, 2);
            }
            for (std::size_t i = 0; i < occ_edges.size(); ++i)
            {
                for (std::size_t j = i + 1; j < occ_edges.size(); ++j)
                {
                    const auto t1 = occ[i];
                    const auto t2 = occ[j];
                    const auto sh1 = straight_h_[occ_edges[i] * tiles_ + ti];
                    const auto sh2 = straight_h_[occ_edges[j] * tiles_ + ti];
                    const auto sv1 = straight_v_[occ_edges[i] * tiles_ + ti];
                    const auto sv2 = straight_v_[occ_edges[j] * tiles_ + ti];
                    solver_.add_clause({-t1, -t2, sh1, sh2});
                    solver_.add_clause({-t1, -t2, sv1, sv2});
                    solver_.add_clause({-t1, -t2, -sh1, -sh2});
                    solver_.add_clause({-t1, -t2, -sv1, -sv2});
                    if (crossing_bound)
                    {
                        if (cross_here_[ti] == 0)
                        {
                            cross_here_[ti] = solver_.new_variable();
                        }
                        solver_.add_clause({-t1, -t2, cross_here_[ti]});
                    }
                }
            }
        }
        if (crossing_bound)
        {
            std::vector<sat_literal> lits_x;
            for (std::uint32_t ti = 0; ti < tiles_; ++ti)
            {
                if (cross_here_[ti] != 0)
                {
                    lits_x.push_back(cross_here_[ti]);
                }
            }
            if (*crossing_bound == 0)
            {
                for (const auto x : lits_x)
                {
                    solver_.add_clause({-x});
                }
            }
            else if (lits_x.size() > *crossing_bound)
            {
                solver_.at_most_k(lits_x, *crossing_bound);
            }
        }
    }
    else
    {
        for (std::uint32_t ti = 0; ti < tiles_; ++ti)
        {
            std::vector<sat_literal> occ;
            for (std::size_t e = 0; e < m; ++e)
            {
                if (const auto th = through_var(e, ti); th != 0)
                {
                    occ.push_back(th);
                }
            }
            solver_.at_most_one(occ);
        }
    }
}

void grid_encoder::emit_port_clauses()
{
    // Two fan-ins of one gate never arrive through the same tile side, and
    // two fan-outs never leave through the same side.
    for (std::size_t s = 0; s < prob_.placeable.size(); ++s)
    {
        const auto& ins = prob_.fan_in[s];
        const auto& outs = prob_.fan_out[s];
        if (ins.size() < 2 && outs.size() < 2)
        {
            continue;
        }
        for (std::uint32_t ti = 0; ti < tiles_; ++ti)
        {
            const auto p = place_var(s, ti);
            if (p == 0)
            {
                continue;
            }
            for (std::size_t i = 0; i < ins.size(); ++i)
            {
                for (std::size_t j = i + 1; j < ins.size(); ++j)
                {
                    for (const auto ai : adj_in_[ti])
                    {
                        solver_.add_clause(
                            {-p, -hop_var(ins[i], ai), -hop_var(ins[j], ai)});
                    }
                }
            }
            for (std::size_t i = 0; i < outs.size(); ++i)
            {
                for (std::size_t j = i + 1; j < outs.size(); ++j)
                {
                    for (const auto ai : adj_out_[ti])
                    {
                        solver_.add_clause(
                            {-p, -hop_var(outs[i], ai), -hop_var(outs[j], ai)});
                    }
                }
            }
        }
    }
}

void grid_encoder::emit_clock_clauses()
{
    const auto m = prob_.edges.size();
    if (params_.latches)
    {
        latch_var_.assign(static_cast<std::size_t>(tiles_) * phases_, 0);
        for (std::uint32_t ti = 0; ti < tiles_; ++ti)
        {
            std::vector<sat_literal> lits;
            for (unsigned l = 0; l < phases_; ++l)
            {
                latch_var_[static_cast<std::size_t>(ti) * phases_ + l] = solver_.new_variable();
                lits.push_back(latch_var_[static_cast<std::size_t>(ti) * phases_ + l]);
            }
            solver_.exactly_one(lits);
        }
    }
    if (regular_)
    {
        if (!params_.latches)
        {
            return;  // hop admissibility already encodes the clock step
        }
        for (std::size_t ai = 0; ai < adj_.size(); ++ai)
        {
            const auto required =
                (clk_[adj_[ai].to] + phases_ - clk_[adj_[ai].from] - 1) % phases_;
            const auto lv =
                latch_var_[static_cast<std::size_t>(adj_[ai].from) * phases_ + required];
            for (std::size_t e = 0; e < m; ++e)
            {
                solver_.add_clause({-hop_var(e, ai), lv});
            }
        }
        return;
    }
    zone_var_.assign(static_cast<std::size_t>(tiles_) * phases_, 0);
    for (std::uint32_t ti = 0; ti < tiles_; ++ti)
    {
        std::vector<sat_literal> lits;
        for (unsigned z = 0; z < phases_; ++z)
        {
            zone_var_[static_cast<std::size_t>(ti) * phases_ + z] = solver_.new_variable();
            lits.push_back(zone_var_[static_cast<std::size_t>(ti) * phases_ + z]);
        }
        solver_.exactly_one(lits);
    }
    const auto zone_of = [&](const std::uint32_t ti, const unsigned z)
    { return zone_var_[static_cast<std::size_t>(ti) * phases_ + z]; };
    for (std::size_t ai = 0; ai < adj_.size(); ++ai)
    {
        for (std::size_t e = 0; e < m; ++e)
        {
            const auto h = hop_var(e, ai);
            for (unsigned z = 0; z < phases_; ++z)
            {
                if (!params_.latches)
                {
                    solver_.add_clause({-h, -zone_of(adj_[ai].from, z),
                                        zone_of(adj_[ai].to, (z + 1) % phases_)});
                }
                else
                {
                    for (unsigned l = 0; l < phases_; ++l)
                    {
                        const auto lv =
                            latch_var_[static_cast<std::size_t>(adj_[ai].from) * phases_ + l];
                        solver_.add_clause({-h, -zone_of(adj_[ai].from, z), -lv,
                                            zone_of(adj_[ai].to, (z + 1 + l) % phases_)});
                    }
                }
            }
        }
    }
}

void grid_encoder::add_arrival_step(const std::vector<sat_literal>& condition,
                                    const std::uint32_t from, const std::uint32_t to,
                                    const std::uint32_t step)
{
    std::vector<sat_literal> lits;
    for (std::uint32_t k = 0; k + step <= kmax_; ++k)
    {
        lits = condition;
        if (k >= 1)
        {
            lits.push_back(-arrival_var(from, k));
        }
        lits.push_back(arrival_var(to, k + step));
        solver_.add_clause(lits);
        if (k >= 1)
        {
            lits = condition;
            lits.push_back(-arrival_var(to, k + step));
            lits.push_back(arrival_var(from, k));
            solver_.add_clause(lits);
        }
    }
    // Arrivals too close to the range top cannot take this step at all.
    for (std::uint32_t k = kmax_ - std::min(kmax_, step - 1); k <= kmax_; ++k)
    {
        if (k >= 1 && k + step > kmax_)
        {
            lits = condition;
            lits.push_back(-arrival_var(from, k));
            solver_.add_clause(lits);
        }
    }
}

void grid_encoder::emit_balance_clauses()
{
    if (params_.desync)
    {
        return;
    }
    kmax_ = monotone_ ? (width_ - 1) + (height_ - 1) + phases_
                      : (params_.latches ? tiles_ * phases_ : tiles_ + phases_);
    kmax_ = std::max(kmax_, phases_ + 1);
    arrival_.assign(static_cast<std::size_t>(tiles_) * kmax_, 0);
    for (std::uint32_t ti = 0; ti < tiles_; ++ti)
    {
        for (std::uint32_t k = 1; k <= kmax_; ++k)
        {
            arrival_[static_cast<std::size_t>(ti) * kmax_ + (k - 1)] = solver_.new_variable();
        }
        for (std::uint32_t k = 2; k <= kmax_; ++k)
        {
            solver_.add_clause({-arrival_var(ti, k), arrival_var(ti, k - 1)});
        }
    }
    any_hop_.assign(adj_.size(), 0);
    for (std::size_t ai = 0; ai < adj_.size(); ++ai)
    {
        any_hop_[ai] = solver_.new_variable();
        for (std::size_t e = 0; e < prob_.edges.size(); ++e)
        {
            solver_.add_clause({-hop_var(e, ai), any_hop_[ai]});
        }
    }
    for (std::size_t ai = 0; ai < adj_.size(); ++ai)
    {
        if (!params_.latches)
        {
            add_arrival_step({-any_hop_[ai]}, adj_[ai].from, adj_[ai].to, 1);
        }
        else
        {
            for (unsigned l = 0; l < phases_; ++l)
            {
                const auto lv =
                    latch_var_[static_cast<std::size_t>(adj_[ai].from) * phases_ + l];
                add_arrival_step({-any_hop_[ai], -lv}, adj_[ai].from, adj_[ai].to, 1 + l);
            }
        }
    }
    // Signals launch at the clock number of their entry tile.
    for (std::size_t s = 0; s < prob_.placeable.size(); ++s)
    {
        if (!prob_.fan_in[s].empty())
        {
            continue;
        }
        for (std::uint32_t ti = 0; ti < tiles_; ++ti)
        {
            const auto p = place_var(s, ti);
            if (p == 0)
            {
                continue;
            }
            if (regular_)
            {
                const std::uint32_t c = clk_[ti];
                if (c >= 1)
                {
                    solver_.add_clause({-p, arrival_var(ti, c)});
                }
                solver_.add_clause({-p, -arrival_var(ti, c + 1)});
            }
            else
            {
                for (unsigned z = 0; z < phases_; ++z)
                {
                    const auto zv = zone_var_[static_cast<std::size_t>(ti) * phases_ + z];
                    if (z >= 1)
                    {
                        solver_.add_clause({-p, -zv, arrival_var(ti, z)});
                    }
                    solver_.add_clause({-p, -zv, -arrival_var(ti, z + 1)});
                }
            }
        }
    }
}

void grid_encoder::emit_wire_limit_clauses()
{
    if (!params_.wire_limit)
    {
        return;
    }
    for (std::size_t e = 0; e < prob_.edges.size(); ++e)
    {
        std::vector<sat_literal> occ;
        for (std::uint32_t ti = 0; ti < tiles_; ++ti)
        {
            if (const auto th = through_var(e, ti); th != 0)
            {
                occ.push_back(th);
            }
        }
        if (occ.size() > *params_.wire_limit)
        {
            solver_.at_most_k(occ, *params_.wire_limit);
        }
    }
}

void grid_encoder::build(const std::optional<std::uint32_t> crossing_bound)
{
    allocate_placement();
    allocate_flows();
    emit_flow_clauses();
    emit_capacity_clauses(crossing_bound);
    emit_port_clauses();
    emit_clock_clauses();
    emit_balance_clauses();
    emit_wire_limit_clauses();
}

gate_layout grid_encoder::decode() const
{
    gate_layout layout{width_, height_, params_.scheme, net_};
    if (!regular_)
    {
        for (std::uint32_t ti = 0; ti < tiles_; ++ti)
        {
            for (unsigned z = 0; z < phases_; ++z)
            {
                if (solver_.value(zone_var_[static_cast<std::size_t>(ti) * phases_ + z]))
                {
                    layout.assign_clock(tile_at(ti), static_cast<std::uint8_t>(z));
                    break;
                }
            }
        }
    }
    std::vector<std::uint32_t> slot_tile(prob_.placeable.size(), 0);
    for (std::size_t s = 0; s < prob_.placeable.size(); ++s)
    {
        bool placed = false;
        for (std::uint32_t ti = 0; ti < tiles_ && !placed; ++ti)
        {
            const auto p = place_var(s, ti);
            if (p != 0 && solver_.value(p))
            {
                slot_tile[s] = ti;
                const auto v = prob_.placeable[s];
                const auto op = net_->vertex(v).op;
                layout.assign_logic_vertex(tile_at(ti), v, op == logic_op::PI,
                                           op == logic_op::PO);
                placed = true;
            }
        }
        if (!placed)
        {
            throw fcn_error{"layout decode: vertex without a tile"};
        }
    }
    std::vector<bool> has_out_hop(tiles_, false);
    for (std::size_t e = 0; e < prob_.edges.size(); ++e)
    {
        const auto src = slot_tile[prob_.edges[e].src_slot];
        const auto dst = slot_tile[prob_.edges[e].dst_slot];
        std::vector<adjacency> chain;
        auto cur = src;
        while (cur != dst)
        {
            bool advanced = false;
            for (const auto ai : adj_out_[cur])
            {
                if (solver_.value(hop_var(e, ai)))
                {
                    chain.push_back(adj_[ai]);
                    has_out_hop[cur] = true;
                    cur = adj_[ai].to;
                    advanced = true;
                    break;
                }
            }
            if (!advanced || chain.size() > tiles_)
            {
                throw fcn_error{"layout decode: broken route"};
            }
        }
        for (std::size_t i = 1; i < chain.size(); ++i)
        {
            const auto t = tile_at(chain[i].from);
            const auto layer =
                layout.wires_at(t).empty() ? wire_layer::GROUND : wire_layer::CROSSING;
            layout.assign_wire(t, prob_.edges[e].edge, layer, opposite(chain[i - 1].dir),
                               chain[i].dir);
        }
    }
    if (params_.latches)
    {
        for (std::uint32_t ti = 0; ti < tiles_; ++ti)
        {
            if (!has_out_hop[ti])
            {
                continue;
            }
            for (unsigned l = 1; l < phases_; ++l)
            {
                if (solver_.value(latch_var_[static_cast<std::size_t>(ti) * phases_ + l]))
                {
                    layout.assign_latch(tile_at(ti), static_cast<std::uint8_t>(l));
                    break;
                }
            }
        }
    }
    return layout;
}

[[nodiscard]] instance_outcome outcome_of(const sat_result res, const std::atomic<bool>* cancel)
{
    switch (res)
    {
        case sat_result::SATISFIABLE: return instance_outcome::SATISFIABLE;
        case sat_result::UNSATISFIABLE: return instance_outcome::UNSATISFIABLE;
        default:
            return cancel != nullptr && cancel->load() ? instance_outcome::CANCELED
                                                       : instance_outcome::TIMEOUT;
    }
}

struct instance_result
{
    explored_instance info{};
    std::optional<gate_layout> layout{};
};

[[nodiscard]] instance_result run_instance(const std::shared_ptr<const logic_network>& net,
                                           const placement_problem& prob,
                                           const exact_parameters& params, const std::uint32_t w,
                                           const std::uint32_t h,
                                           const std::optional<time_point> deadline,
                                           const std::atomic<bool>* cancel)
{
    const auto start = now();
    grid_encoder enc{net, prob, params, w, h};
    enc.build(std::nullopt);
    const auto res = enc.solve(deadline, cancel);
    instance_result out;
    out.info = {w, h, outcome_of(res, cancel), seconds_since(start)};
    if (res == sat_result::SATISFIABLE)
    {
        out.layout = enc.decode();
    }
    return out;
}

[[nodiscard]] std::uint32_t count_crossings(const gate_layout& layout)
{
    std::uint32_t crossings = 0;
    for (const auto t : layout.occupied_tiles())
    {
        if (layout.is_crossing_tile(t))
        {
            ++crossings;
        }
    }
    return crossings;
}

/// Re-solves the found grid with ever tighter crossing bounds while budget
/// remains; keeps the last satisfiable refinement.
void refine_crossings(const std::shared_ptr<const logic_network>& net,
                      const placement_problem& prob, const exact_parameters& params,
                      gate_layout& layout, const std::optional<time_point> global_deadline,
                      const double per_instance_s)
{
    auto current = count_crossings(layout);
    while (current > 0)
    {
        auto deadline = now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                    std::chrono::duration<double>(per_instance_s));
        if (global_deadline)
        {
            deadline = std::min(deadline, *global_deadline);
        }
        if (deadline <= now())
        {
            return;
        }
        grid_encoder enc{net, prob, params, layout.width(), layout.height()};
        enc.build(current - 1);
        if (enc.solve(deadline, nullptr) != sat_result::SATISFIABLE)
        {
            return;
        }
        layout = enc.decode();
        const auto next = count_crossings(layout);
        if (next >= current)
        {
            return;
        }
        current = next;
    }
}

[[nodiscard]] double per_instance_seconds(const exact_parameters& params, const std::uint64_t n)
{
    if (params.timeout_s)
    {
        return *params.timeout_s;
    }
    if (params.global_timeout_s)
    {
        std::size_t instances = 10;
        if (params.upper_bound)
        {
            instances = 0;
            dimension_stream stream{n};
            while (stream.next(params.upper_bound))
            {
                ++instances;
            }
            instances = std::max<std::size_t>(instances, 1);
        }
        return *params.global_timeout_s / static_cast<double>(instances);
    }
    return 60.0;
}

struct search_state
{
    std::mutex mutex{};
    dimension_stream stream;
    std::vector<explored_instance> explored{};
    std::optional<gate_layout> best{};
    std::optional<std::uint64_t> best_area{};
    bool global_timeout{false};

    explicit search_state(const std::uint64_t n) : stream{n} {}
};

void parallel_worker(const std::shared_ptr<const logic_network>& net,
                     const placement_problem& prob, const exact_parameters& params,
                     const std::optional<time_point> global_deadline, const double per_instance_s,
                     search_state& state,
                     std::vector<std::pair<std::uint64_t, std::shared_ptr<std::atomic<bool>>>>& running)
{
    for (;;)
    {
        std::shared_ptr<std::atomic<bool>> cancel;
        std::uint32_t w = 0;
        std::uint32_t h = 0;
        {
            const std::lock_guard lock{state.mutex};
            if (global_deadline && now() >= *global_deadline)
            {
                state.global_timeout = !state.best.has_value();
                return;
            }
            const auto dim = state.stream.next(params.upper_bound);
            if (!dim)
            {
                return;
            }
            const auto area = static_cast<std::uint64_t>(dim->first) * dim->second;
            if (state.best_area && area >= *state.best_area)
            {
                return;
            }
            w = dim->first;
            h = dim->second;
            cancel = std::make_shared<std::atomic<bool>>(false);
            running.emplace_back(area, cancel);
        }
        auto deadline = now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                    std::chrono::duration<double>(per_instance_s));
        if (global_deadline)
        {
            deadline = std::min(deadline, *global_deadline);
        }
        auto res = run_instance(net, prob, params, w, h, deadline, cancel.get());
        {
            const std::lock_guard lock{state.mutex};
            state.explored.push_back(res.info);
            std::erase_if(running, [&](const auto& entry) { return entry.second == cancel; });
            if (res.layout)
            {
                const auto area = static_cast<std::uint64_t>(w) * h;
                if (!state.best_area || area < *state.best_area)
                {
                    state.best = std::move(res.layout);
                    state.best_area = area;
                    for (auto& entry : running)
                    {
                        if (entry.first >= area)
                        {
                            entry.second->store(true);
                        }
                    }
                }
            }
        }
    }
}

}  // namespace

exact_result exact_layout(std::shared_ptr<const logic_network> net, const exact_parameters& params)
{
    if (!net || !net->finalized())
    {
        throw fcn_error{"exact layout: network must be finalized"};
    }
    if (params.scheme.phases < 2)
    {
        throw fcn_error{"exact layout: clocking needs at least two phases"};
    }
    if (params.scheme.regular && params.scheme.cutout.empty())
    {
        throw fcn_error{"exact layout: regular clocking without a cutout"};
    }
    if (params.wire_limit && *params.wire_limit < 1)
    {
        throw fcn_error{"exact layout: wire limit must be at least 1"};
    }
    auto effective = params;
    if (effective.border_io)
    {
        effective.io_pins = true;
    }
    const auto prob = build_problem(*net, effective.io_pins);
    const auto n = static_cast<std::uint64_t>(prob.placeable.size());
    if (n == 0)
    {
        throw fcn_error{"exact layout: empty network"};
    }
    if (effective.upper_bound && n > *effective.upper_bound)
    {
        throw fcn_error{"exact layout: network larger than the area bound"};
    }
    const auto start = now();
    const std::optional<time_point> global_deadline =
        effective.global_timeout_s
            ? std::optional<time_point>{start +
                                        std::chrono::duration_cast<
                                            std::chrono::steady_clock::duration>(
                                            std::chrono::duration<double>(
                                                *effective.global_timeout_s))}
            : std::nullopt;
    const auto per_instance = per_instance_seconds(effective, n);

    exact_result result;
    search_state state{n};
    if (!effective.parallel)
    {
        for (;;)
        {
            if (global_deadline && now() >= *global_deadline)
            {
                state.global_timeout = true;
                break;
            }
            const auto dim = state.stream.next(effective.upper_bound);
            if (!dim)
            {
                break;
            }
            auto deadline =
                now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(per_instance));
            if (global_deadline)
            {
                deadline = std::min(deadline, *global_deadline);
            }
            auto res =
                run_instance(net, prob, effective, dim->first, dim->second, deadline, nullptr);
            state.explored.push_back(res.info);
            if (res.layout)
            {
                state.best = std::move(res.layout);
                state.best_area = static_cast<std::uint64_t>(dim->first) * dim->second;
                break;
            }
        }
    }
    else
    {
        auto workers = effective.workers != 0 ? effective.workers
                                              : std::max(1u, std::thread::hardware_concurrency());
        workers = std::min(workers, 32u);
        std::vector<std::pair<std::uint64_t, std::shared_ptr<std::atomic<bool>>>> running;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i)
        {
            pool.emplace_back(
                [&] {
                    parallel_worker(net, prob, effective, global_deadline, per_instance, state,
                                    running);
                });
        }
        for (auto& th : pool)
        {
            th.join();
        }
    }

    if (state.best && effective.crossings && effective.minimize_crossings)
    {
        refine_crossings(net, prob, effective, *state.best, global_deadline, per_instance);
    }

    std::stable_sort(state.explored.begin(), state.explored.end(),
                     [](const explored_instance& a, const explored_instance& b)
                     {
                         const auto aa = static_cast<std::uint64_t>(a.width) * a.height;
                         const auto ab = static_cast<std::uint64_t>(b.width) * b.height;
                         if (aa != ab)
                         {
                             return aa < ab;
                         }
                         const auto da = a.width > a.height ? a.width - a.height
                                                            : a.height - a.width;
                         const auto db = b.width > b.height ? b.width - b.height
                                                            : b.height - b.width;
                         return da != db ? da < db : a.width < b.width;
                     });
    result.explored = std::move(state.explored);
    if (state.best)
    {
        if (!check_validity(*state.best).empty())
        {
            throw fcn_error{"exact layout: solution violates design rules"};
        }
        result.layout = std::move(state.best);
        result.status = exact_status::FOUND;
    }
    else
    {
        const bool clean_unsat =
            effective.upper_bound && !state.global_timeout &&
            std::all_of(result.explored.begin(), result.explored.end(),
                        [](const explored_instance& e)
                        { return e.outcome == instance_outcome::UNSATISFIABLE; });
        result.status = clean_unsat ? exact_status::UNSAT_UP_TO_BOUND : exact_status::TIMEOUT;
    }
    result.runtime_s = seconds_since(start);
    return result;
}

}  // namespace fcnlay
