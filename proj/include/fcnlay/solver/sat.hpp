#ifndef FCNLAY_SOLVER_SAT_HPP
#define FCNLAY_SOLVER_SAT_HPP

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

namespace fcnlay
{

/**
 * Literal encoding: variables are 1-based ints, a negative value negates.
 * Clause input uses this DIMACS-style convention throughout.
 */
using sat_literal = std::int32_t;

enum class sat_result : std::uint8_t
{
    SATISFIABLE,
    UNSATISFIABLE,
    UNDECIDED  ///< deadline or cancellation hit before a verdict
};

/**
 * Conflict-driven clause-learning SAT solver. Deterministic for a fixed
 * formula: decision order, restarts, and clause database management use no
 * wall-clock input. Solving honors an optional deadline and cancellation
 * flag, either of which yields UNDECIDED.
 */
class sat_solver
{
  public:
    sat_solver() = default;

    /// Allocates and returns a fresh 1-based variable.
    [[nodiscard]] std::int32_t new_variable();
    [[nodiscard]] std::int32_t variable_count() const noexcept { return num_vars_; }

    /// Adds a clause over existing variables. An empty clause makes the
    /// formula trivially unsatisfiable.
    void add_clause(const std::vector<sat_literal>& literals);
    void add_clause(std::initializer_list<sat_literal> literals);

    /// At most one of the literals true (pairwise encoding below 6 literals,
    /// sequential counter otherwise).
    void at_most_one(const std::vector<sat_literal>& literals);
    void exactly_one(const std::vector<sat_literal>& literals);

    /// Sequential-counter cardinality constraint: at most bound literals true.
    void at_most_k(const std::vector<sat_literal>& literals, std::uint32_t bound);

    [[nodiscard]] sat_result
    solve(std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt,
          const std::atomic<bool>* cancel = nullptr);

    /// Model value of a variable after SATISFIABLE.
    [[nodiscard]] bool value(std::int32_t variable) const;

    [[nodiscard]] std::uint64_t conflict_count() const noexcept { return conflicts_; }

  private:
    // Internal literal representation: var index v in [0, n) with polarity p
    // packs to 2v+p where p=1 means negated.
    [[nodiscard]] static std::uint32_t encode(sat_literal lit) noexcept;

    enum class lbool : std::uint8_t
    {
        TRUE,
        FALSE,
        UNASSIGNED
    };

    struct clause
    {
        std::vector<std::uint32_t> lits{};
        std::uint32_t lbd{};
        bool learnt{false};
        double activity{};
    };

    struct watcher
    {
        std::uint32_t clause_index{};
        std::uint32_t blocker{};
    };

    [[nodiscard]] lbool lit_value(std::uint32_t lit) const;
    void enqueue(std::uint32_t lit, std::int32_t reason);
    [[nodiscard]] std::int32_t propagate();
    void analyze(std::int32_t conflict, std::vector<std::uint32_t>& learnt,
                 std::uint32_t& backtrack_level, std::uint32_t& lbd);
    void backtrack(std::uint32_t level);
    void bump_variable(std::uint32_t var);
    void bump_clause(std::uint32_t clause_index);
    void decay_activities();
    [[nodiscard]] std::optional<std::uint32_t> pick_branch_variable();
    void reduce_clause_database();
    void attach_clause(std::uint32_t clause_index);
    [[nodiscard]] std::uint32_t compute_lbd(const std::vector<std::uint32_t>& lits);

    // Max-heap over variable activities with position tracking.
    void heap_insert(std::uint32_t var);
    void heap_sift_up(std::size_t i);
    void heap_sift_down(std::size_t i);
    [[nodiscard]] std::optional<std::uint32_t> heap_pop();

    std::int32_t num_vars_{0};
    std::vector<clause> clauses_{};
    std::vector<std::vector<watcher>> watches_{};  // indexed by encoded literal
    std::vector<lbool> assignment_{};
    std::vector<std::uint32_t> trail_{};
    std::vector<std::uint32_t> trail_limits_{};
    std::size_t propagate_head_{0};
    std::vector<std::int32_t> reason_{};        // clause index or -1, per variable
    std::vector<std::uint32_t> level_{};        // decision level per variable
    std::vector<double> activity_{};
    std::vector<bool> phase_{};                 // saved phase per variable
    std::vector<bool> seen_{};
    double var_inc_{1.0};
    double clause_inc_{1.0};
    std::uint64_t conflicts_{0};
    bool unsatisfiable_{false};
    std::vector<std::uint32_t> lbd_stamp_{};
    std::uint32_t lbd_stamp_counter_{0};
    std::vector<std::uint32_t> heap_{};
    std::vector<std::int32_t> heap_pos_{};
    std::uint64_t next_reduce_{2000};
    std::uint64_t reductions_{0};
};

}  // namespace fcnlay

#endif  // FCNLAY_SOLVER_SAT_HPP
