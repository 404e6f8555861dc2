#ifndef FCNLAY_NETWORK_LOGIC_NETWORK_HPP
#define FCNLAY_NETWORK_LOGIC_NETWORK_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace fcnlay
{

/**
 * Base class of all toolkit errors.
 */
class fcn_error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class logic_op : std::uint8_t
{
    PI,
    PO,
    AND,
    OR,
    NOT,
    XOR,
    NAND,
    NOR,
    XNOR,
    MAJ,
    FANOUT,
    CONST0,
    CONST1
};

/**
 * Number of fan-ins the operation consumes. FANOUT consumes 1 and may drive
 * several readers; every other operation drives at most one reader after
 * fan-out substitution.
 */
[[nodiscard]] constexpr unsigned op_arity(const logic_op op) noexcept
{
    switch (op)
    {
        case logic_op::PI:
        case logic_op::CONST0:
        case logic_op::CONST1: return 0u;
        case logic_op::PO:
        case logic_op::NOT:
        case logic_op::FANOUT: return 1u;
        case logic_op::MAJ: return 3u;
        default: return 2u;
    }
}

[[nodiscard]] const char* op_name(logic_op op) noexcept;

struct logic_vertex
{
    std::uint32_t id{};
    logic_op op{logic_op::PI};
    // Port name for PI/PO vertices, empty otherwise.
    std::string label{};
};

/**
 * Directed connection between two vertices. Ports index fan-in slots on the
 * target (0..arity-1) and fan-out slots on the source (0..out_degree-1).
 */
struct logic_edge
{
    std::uint32_t source{};
    std::uint32_t target{};
    std::uint8_t source_port{};
    std::uint8_t target_port{};
};

/**
 * Immutable combinational logic network: a DAG of PI/PO/gate/fan-out vertices.
 *
 * Built through add_vertex/add_edge followed by a single finalize() call that
 * checks the structural invariants; afterwards the object never changes and
 * may be shared read-only across threads.
 */
class logic_network
{
  public:
    explicit logic_network(std::string name = "net");

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    std::uint32_t add_vertex(logic_op op, std::string label = {});
    void add_edge(std::uint32_t source, std::uint8_t source_port, std::uint32_t target,
                  std::uint8_t target_port);

    /**
     * Checks arities, PI/PO degrees, and acyclicity. Throws fcn_error on any
     * violation; the network is usable only after this succeeds.
     */
    void finalize();

    [[nodiscard]] bool finalized() const noexcept { return finalized_; }
    [[nodiscard]] std::size_t num_vertices() const noexcept { return vertices_.size(); }
    [[nodiscard]] std::size_t num_edges() const noexcept { return edges_.size(); }
    [[nodiscard]] const logic_vertex& vertex(std::uint32_t id) const { return vertices_.at(id); }
    [[nodiscard]] const logic_edge& edge(std::uint32_t idx) const { return edges_.at(idx); }
    [[nodiscard]] const std::vector<logic_vertex>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] const std::vector<logic_edge>& edges() const noexcept { return edges_; }

    // Edge indices sorted by port number.
    [[nodiscard]] const std::vector<std::uint32_t>& in_edges(std::uint32_t id) const
    {
        return in_edges_.at(id);
    }
    [[nodiscard]] const std::vector<std::uint32_t>& out_edges(std::uint32_t id) const
    {
        return out_edges_.at(id);
    }

    [[nodiscard]] std::size_t in_degree(std::uint32_t id) const { return in_edges_.at(id).size(); }
    [[nodiscard]] std::size_t out_degree(std::uint32_t id) const
    {
        return out_edges_.at(id).size();
    }

    // PI/PO vertex ids in declaration order.
    [[nodiscard]] const std::vector<std::uint32_t>& pis() const noexcept { return pis_; }
    [[nodiscard]] const std::vector<std::uint32_t>& pos() const noexcept { return pos_; }

    /**
     * Vertex ids in a deterministic topological order (Kahn, smallest id
     * first among ready vertices).
     */
    [[nodiscard]] std::vector<std::uint32_t> topological_order() const;

  private:
    std::string name_;
    std::vector<logic_vertex> vertices_;
    std::vector<logic_edge> edges_;
    std::vector<std::vector<std::uint32_t>> in_edges_;
    std::vector<std::vector<std::uint32_t>> out_edges_;
    std::vector<std::uint32_t> pis_;
    std::vector<std::uint32_t> pos_;
    bool finalized_{false};
};

struct network_statistics
{
    std::size_t vertex_count{};
    std::size_t edge_count{};
    std::size_t pi_count{};
    std::size_t po_count{};
    std::size_t fanout_count{};
};

[[nodiscard]] network_statistics network_stats(const logic_network& net);

/**
 * Evaluates one operation over its fan-in values in port order. PI has no
 * fan-ins and throws.
 */
[[nodiscard]] bool evaluate_op(logic_op op, const bool* inputs, std::size_t n);

/**
 * Evaluates the network under the given PI assignment in topological order.
 * Throws fcn_error if any PI label is missing from the assignment.
 */
[[nodiscard]] std::unordered_map<std::string, bool>
simulate(const logic_network& net, const std::unordered_map<std::string, bool>& assignment);

/**
 * Rewrites every signal with more than one reader through a left-deep chain
 * of FANOUT vertices of out-degree <= max_fanout. Simulation semantics are
 * preserved; the result is idempotent under re-application.
 */
[[nodiscard]] logic_network substitute_fanouts(const logic_network& net, unsigned max_fanout = 2);

}  // namespace fcnlay

#endif  // FCNLAY_NETWORK_LOGIC_NETWORK_HPP
