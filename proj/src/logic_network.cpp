#include "fcnlay/network/logic_network.hpp"

#include <algorithm>
#include <queue>

namespace fcnlay
{

const char* op_name(const logic_op op) noexcept
{
    switch (op)
    {
        case logic_op::PI: return "PI";
        case logic_op::PO: return "PO";
        case logic_op::AND: return "AND";
        case logic_op::OR: return "OR";
        case logic_op::NOT: return "NOT";
        case logic_op::XOR: return "XOR";
        case logic_op::NAND: return "NAND";
        case logic_op::NOR: return "NOR";
        case logic_op::XNOR: return "XNOR";
        case logic_op::MAJ: return "MAJ";
        case logic_op::FANOUT: return "FANOUT";
        case logic_op::CONST0: return "CONST0";
        case logic_op::CONST1: return "CONST1";
    }
    return "?";
}

logic_network::logic_network(std::string name) : name_{std::move(name)} {}

std::uint32_t logic_network::add_vertex(const logic_op op, std::string label)
{
    if (finalized_)
    {
        throw fcn_error{"logic_network: cannot modify a finalized network"};
    }
    const auto id = static_cast<std::uint32_t>(vertices_.size());
    vertices_.push_back(logic_vertex{id, op, std::move(label)});
    in_edges_.emplace_back();
    out_edges_.emplace_back();
    if (op == logic_op::PI)
    {
        pis_.push_back(id);
    }
    else if (op == logic_op::PO)
    {
        pos_.push_back(id);
    }
    return id;
}

void logic_network::add_edge(const std::uint32_t source, const std::uint8_t source_port,
                             const std::uint32_t target, const std::uint8_t target_port)
{
    if (finalized_)
    {
        throw fcn_error{"logic_network: cannot modify a finalized network"};
    }
    if (source >= vertices_.size() || target >= vertices_.size())
    {
        throw fcn_error{"logic_network: edge references an unknown vertex"};
    }
    const auto idx = static_cast<std::uint32_t>(edges_.size());
    edges_.push_back(logic_edge{source, target, source_port, target_port});
    out_edges_[source].push_back(idx);
    in_edges_[target].push_back(idx);
}

void logic_network::finalize()
{
    if (finalized_)
    {
        return;
    }
    for (const auto& v : vertices_)
    {
        const auto in = in_edges_[v.id].size();
        if (in != op_arity(v.op))
        {
            throw fcn_error{std::string{"logic_network: vertex "} + std::to_string(v.id) + " (" +
                            op_name(v.op) + ") has in-degree " + std::to_string(in) +
                            ", expected " + std::to_string(op_arity(v.op))};
        }
        if (v.op == logic_op::PO && !out_edges_[v.id].empty())
        {
            throw fcn_error{"logic_network: PO vertex " + std::to_string(v.id) +
                            " must have out-degree 0"};
        }
    }
    // Distinct target ports per vertex; sorted adjacency for determinism.
    for (auto& ins : in_edges_)
    {
        std::sort(ins.begin(), ins.end(),
                  [&](const auto a, const auto b)
                  { return edges_[a].target_port < edges_[b].target_port; });
        for (std::size_t i = 1; i < ins.size(); ++i)
        {
            if (edges_[ins[i - 1]].target_port == edges_[ins[i]].target_port)
            {
                throw fcn_error{"logic_network: duplicate fan-in port on vertex " +
                                std::to_string(edges_[ins[i]].target)};
            }
        }
    }
    for (auto& outs : out_edges_)
    {
        std::sort(outs.begin(), outs.end(),
                  [&](const auto a, const auto b)
                  { return edges_[a].source_port < edges_[b].source_port; });
    }
    if (topological_order().size() != vertices_.size())
    {
        throw fcn_error{"logic_network: combinational cycle detected"};
    }
    finalized_ = true;
}

std::vector<std::uint32_t> logic_network::topological_order() const
{
    std::vector<std::size_t> pending(vertices_.size());
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> ready;
    for (const auto& v : vertices_)
    {
        pending[v.id] = in_edges_[v.id].size();
        if (pending[v.id] == 0)
        {
            ready.push(v.id);
        }
    }
    std::vector<std::uint32_t> order;
    order.reserve(vertices_.size());
    while (!ready.empty())
    {
        const auto id = ready.top();
        ready.pop();
        order.push_back(id);
        for (const auto e : out_edges_[id])
        {
            const auto t = edges_[e].target;
            if (--pending[t] == 0)
            {
                ready.push(t);
            }
        }
    }
    return order;
}

network_statistics network_stats(const logic_network& net)
{
    network_statistics st{};
    st.vertex_count = net.num_vertices();
    st.edge_count = net.num_edges();
    st.pi_count = net.pis().size();
    st.po_count = net.pos().size();
    for (const auto& v : net.vertices())
    {
        if (v.op == logic_op::FANOUT)
        {
            ++st.fanout_count;
        }
    }
    return st;
}

bool evaluate_op(const logic_op op, const bool* in, const std::size_t n)
{
    switch (op)
    {
        case logic_op::CONST0: return false;
        case logic_op::CONST1: return true;
        case logic_op::PO:
        case logic_op::FANOUT: return in[0];
        case logic_op::NOT: return !in[0];
        case logic_op::AND: return in[0] && in[1];
        case logic_op::OR: return in[0] || in[1];
        case logic_op::XOR: return in[0] != in[1];
        case logic_op::NAND: return !(in[0] && in[1]);
        case logic_op::NOR: return !(in[0] || in[1]);
        case logic_op::XNOR: return in[0] == in[1];
        case logic_op::MAJ: return (in[0] && in[1]) || (in[0] && in[2]) || (in[1] && in[2]);
        case logic_op::PI: break;
    }
    (void)n;
    throw fcn_error{"simulate: PI evaluated without assignment"};
}

std::unordered_map<std::string, bool>
simulate(const logic_network& net, const std::unordered_map<std::string, bool>& assignment)
{
    std::vector<bool> value(net.num_vertices());
    for (const auto id : net.topological_order())
    {
        const auto& v = net.vertex(id);
        if (v.op == logic_op::PI)
        {
            const auto it = assignment.find(v.label);
            if (it == assignment.end())
            {
                throw fcn_error{"simulate: missing assignment for PI '" + v.label + "'"};
            }
            value[id] = it->second;
            continue;
        }
        bool in[3]{};
        std::size_t n = 0;
        for (const auto e : net.in_edges(id))
        {
            in[n++] = value[net.edge(e).source];
        }
        value[id] = evaluate_op(v.op, in, n);
    }
    std::unordered_map<std::string, bool> out;
    for (const auto po : net.pos())
    {
        out[net.vertex(po).label] = value[po];
    }
    return out;
}

logic_network substitute_fanouts(const logic_network& net, const unsigned max_fanout)
{
    if (max_fanout < 2)
    {
        throw fcn_error{"substitute_fanouts: max_fanout must be >= 2"};
    }
    logic_network result{net.name()};
    // Vertex order preserved so ids stay aligned with the input where possible.
    std::vector<std::uint32_t> mapped(net.num_vertices());
    for (const auto& v : net.vertices())
    {
        mapped[v.id] = result.add_vertex(v.op, v.label);
    }
    for (const auto& v : net.vertices())
    {
        const auto& outs = net.out_edges(v.id);
        const unsigned budget = v.op == logic_op::FANOUT ? max_fanout : 1u;
        // Left-deep chain: while the readers exceed the feeder's capacity,
        // spend all but the last slot on readers and chain a fresh FANOUT
        // through the last slot.
        auto feeder = mapped[v.id];
        auto capacity = budget;
        std::size_t next = 0;
        while (outs.size() - next > capacity)
        {
            std::uint8_t port = 0;
            for (; port + 1u < capacity; ++port, ++next)
            {
                const auto& ed = net.edge(outs[next]);
                result.add_edge(feeder, port, mapped[ed.target], ed.target_port);
            }
            const auto fo = result.add_vertex(logic_op::FANOUT);
            result.add_edge(feeder, port, fo, 0);
            feeder = fo;
            capacity = max_fanout;
        }
        std::uint8_t port = 0;
        for (; next < outs.size(); ++next, ++port)
        {
            const auto& ed = net.edge(outs[next]);
            result.add_edge(feeder, port, mapped[ed.target], ed.target_port);
        }
    }
    result.finalize();
    return result;
}

}  // namespace fcnlay
