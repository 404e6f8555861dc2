#include "fcnlay/solver/sat.hpp"

#include "fcnlay/network/logic_network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace fcnlay
{

namespace
{

constexpr std::int32_t NO_REASON = -1;

/// Luby restart sequence: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
[[nodiscard]] std::uint64_t luby(std::uint64_t x)
{
    std::uint64_t size = 1;
    std::uint64_t seq = 0;
    while (size < x + 1)
    {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x)
    {
        size = (size - 1) >> 1;
        --seq;
        x %= size;
    }
    return 1ull << seq;
}

}  // namespace

std::uint32_t sat_solver::encode(const sat_literal lit) noexcept
{
    const auto var = static_cast<std::uint32_t>(std::abs(lit) - 1);
    return (var << 1) | (lit < 0 ? 1u : 0u);
}

std::int32_t sat_solver::new_variable()
{
    ++num_vars_;
    assignment_.push_back(lbool::UNASSIGNED);
    reason_.push_back(NO_REASON);
    level_.push_back(0);
    activity_.push_back(0.0);
    phase_.push_back(false);
    seen_.push_back(false);
    lbd_stamp_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_pos_.push_back(-1);
    heap_insert(static_cast<std::uint32_t>(num_vars_ - 1));
    return num_vars_;
}

sat_solver::lbool sat_solver::lit_value(const std::uint32_t lit) const
{
    const auto a = assignment_[lit >> 1];
    if (a == lbool::UNASSIGNED)
    {
        return lbool::UNASSIGNED;
    }
    const bool is_true = (a == lbool::TRUE) != ((lit & 1u) != 0);
    return is_true ? lbool::TRUE : lbool::FALSE;
}

void sat_solver::add_clause(std::initializer_list<sat_literal> literals)
{
    add_clause(std::vector<sat_literal>{literals});
}

void sat_solver::add_clause(const std::vector<sat_literal>& literals)
{
    if (unsatisfiable_)
    {
        return;
    }
    std::vector<std::uint32_t> lits{};
    lits.reserve(literals.size());
    for (const auto l : literals)
    {
        if (l == 0 || std::abs(l) > num_vars_)
        {
            throw fcn_error{"sat: literal references an unknown variable"};
        }
        lits.push_back(encode(l));
    }
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 0; i + 1 < lits.size(); ++i)
    {
        if ((lits[i] ^ 1u) == lits[i + 1])
        {
            return;  // tautology
        }
    }
    // Level-0 simplification: drop falsified literals, skip satisfied clauses.
    std::vector<std::uint32_t> kept{};
    for (const auto l : lits)
    {
        const auto v = lit_value(l);
        if (v == lbool::TRUE)
        {
            return;
        }
        if (v == lbool::UNASSIGNED)
        {
            kept.push_back(l);
        }
    }
    if (kept.empty())
    {
        unsatisfiable_ = true;
        return;
    }
    if (kept.size() == 1)
    {
        if (lit_value(kept[0]) == lbool::FALSE)
        {
            unsatisfiable_ = true;
            return;
        }
        enqueue(kept[0], NO_REASON);
        return;
    }
    clause c{};
    c.lits = std::move(kept);
    clauses_.push_back(std::move(c));
    attach_clause(static_cast<std::uint32_t>(clauses_.size() - 1));
}

void sat_solver::attach_clause(const std::uint32_t clause_index)
{
    const auto& c = clauses_[clause_index];
    watches_[c.lits[0]].push_back({clause_index, c.lits[1]});
    watches_[c.lits[1]].push_back({clause_index, c.lits[0]});
}

void sat_solver::at_most_one(const std::vector<sat_literal>& literals)
{
    if (literals.size() < 2)
    {
        return;
    }
    if (literals.size() <= 5)
    {
        for (std::size_t i = 0; i < literals.size(); ++i)
        {
            for (std::size_t j = i + 1; j < literals.size(); ++j)
            {
                add_clause({-literals[i], -literals[j]});
            }
        }
        return;
    }
    at_most_k(literals, 1);
}

void sat_solver::exactly_one(const std::vector<sat_literal>& literals)
{
    add_clause(literals);
    at_most_one(literals);
}

void sat_solver::at_most_k(const std::vector<sat_literal>& literals, const std::uint32_t bound)
{
    const auto n = literals.size();
    if (bound >= n)
    {
        return;
    }
    if (bound == 0)
    {
        for (const auto l : literals)
        {
            add_clause({-l});
        }
        return;
    }
    // Sequential counter: r[i][j] means "at least j+1 of the first i+1 are true".
    std::vector<std::vector<std::int32_t>> r(n - 1, std::vector<std::int32_t>(bound, 0));
    for (auto& row : r)
    {
        for (auto& v : row)
        {
            v = new_variable();
        }
    }
    add_clause({-literals[0], r[0][0]});
    for (std::uint32_t j = 1; j < bound; ++j)
    {
        add_clause({-r[0][j]});
    }
    for (std::size_t i = 1; i < n; ++i)
    {
        if (i < n - 1)
        {
            add_clause({-literals[i], r[i][0]});
            add_clause({-r[i - 1][0], r[i][0]});
            for (std::uint32_t j = 1; j < bound; ++j)
            {
                add_clause({-literals[i], -r[i - 1][j - 1], r[i][j]});
                add_clause({-r[i - 1][j], r[i][j]});
            }
        }
        add_clause({-literals[i], -r[i - 1][bound - 1]});
    }
}

void sat_solver::enqueue(const std::uint32_t lit, const std::int32_t reason)
{
    const auto var = lit >> 1;
    assignment_[var] = (lit & 1u) != 0 ? lbool::FALSE : lbool::TRUE;
    phase_[var] = (lit & 1u) == 0;
    reason_[var] = reason;
    level_[var] = static_cast<std::uint32_t>(trail_limits_.size());
    trail_.push_back(lit);
}

std::int32_t sat_solver::propagate()
{
    while (propagate_head_ < trail_.size())
    {
        const auto p = trail_[propagate_head_++];
        const auto falsified = p ^ 1u;
        auto& ws = watches_[falsified];
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < ws.size())
        {
            const auto w = ws[i];
            if (lit_value(w.blocker) == lbool::TRUE)
            {
                ws[j++] = ws[i++];
                continue;
            }
            auto& c = clauses_[w.clause_index];
            if (c.lits[0] == falsified)
            {
                std::swap(c.lits[0], c.lits[1]);
            }
            const auto first = c.lits[0];
            if (lit_value(first) == lbool::TRUE)
            {
                ws[j++] = {w.clause_index, first};
                ++i;
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.lits.size(); ++k)
            {
                if (lit_value(c.lits[k]) != lbool::FALSE)
                {
                    std::swap(c.lits[1], c.lits[k]);
                    watches_[c.lits[1]].push_back({w.clause_index, first});
                    moved = true;
                    break;
                }
            }
            if (moved)
            {
                ++i;
                continue;
            }
            ws[j++] = {w.clause_index, first};
            ++i;
            if (lit_value(first) == lbool::FALSE)
            {
                while (i < ws.size())
                {
                    ws[j++] = ws[i++];
                }
                ws.resize(j);
                propagate_head_ = trail_.size();
                return static_cast<std::int32_t>(w.clause_index);
            }
            enqueue(first, static_cast<std::int32_t>(w.clause_index));
        }
        ws.resize(j);
    }
    return -1;
}

std::uint32_t sat_solver::compute_lbd(const std::vector<std::uint32_t>& lits)
{
    ++lbd_stamp_counter_;
    std::uint32_t lbd = 0;
    for (const auto l : lits)
    {
        const auto lvl = level_[l >> 1];
        if (lvl > 0 && lbd_stamp_[lvl % lbd_stamp_.size()] != lbd_stamp_counter_)
        {
            lbd_stamp_[lvl % lbd_stamp_.size()] = lbd_stamp_counter_;
            ++lbd;
        }
    }
    return lbd;
}

void sat_solver::analyze(const std::int32_t conflict, std::vector<std::uint32_t>& learnt,
                         std::uint32_t& backtrack_level, std::uint32_t& lbd)
{
    learnt.clear();
    learnt.push_back(0);  // placeholder for the asserting literal

    const auto current = static_cast<std::uint32_t>(trail_limits_.size());
    std::uint32_t counter = 0;
    std::uint32_t p = UINT32_MAX;
    auto conf = conflict;
    auto index = static_cast<std::ptrdiff_t>(trail_.size()) - 1;

    for (;;)
    {
        auto& c = clauses_[static_cast<std::size_t>(conf)];
        if (c.learnt)
        {
            bump_clause(static_cast<std::uint32_t>(conf));
        }
        for (std::size_t k = p == UINT32_MAX ? 0 : 1; k < c.lits.size(); ++k)
        {
            const auto q = c.lits[k];
            const auto vq = q >> 1;
            if (!seen_[vq] && level_[vq] > 0)
            {
                seen_[vq] = true;
                bump_variable(vq);
                if (level_[vq] >= current)
                {
                    ++counter;
                }
                else
                {
                    learnt.push_back(q);
                }
            }
        }
        while (!seen_[trail_[static_cast<std::size_t>(index)] >> 1])
        {
            --index;
        }
        p = trail_[static_cast<std::size_t>(index)];
        --index;
        seen_[p >> 1] = false;
        --counter;
        if (counter == 0)
        {
            break;
        }
        conf = reason_[p >> 1];
    }
    learnt[0] = p ^ 1u;

    // Local minimization: a literal is redundant when its reason clause only
    // holds level-0 literals and literals already in the learnt clause.
    const std::vector<std::uint32_t> to_clear{learnt.begin() + 1, learnt.end()};
    std::size_t out = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k)
    {
        const auto q = learnt[k];
        const auto r = reason_[q >> 1];
        bool drop = false;
        if (r >= 0)
        {
            drop = true;
            const auto& rc = clauses_[static_cast<std::size_t>(r)].lits;
            for (std::size_t k2 = 1; k2 < rc.size() && drop; ++k2)
            {
                const auto v2 = rc[k2] >> 1;
                drop = level_[v2] == 0 || seen_[v2];
            }
        }
        if (!drop)
        {
            learnt[out++] = q;
        }
    }
    learnt.resize(out);

    for (const auto q : to_clear)
    {
        seen_[q >> 1] = false;
    }

    if (learnt.size() == 1)
    {
        backtrack_level = 0;
    }
    else
    {
        std::size_t max_i = 1;
        for (std::size_t k = 2; k < learnt.size(); ++k)
        {
            if (level_[learnt[k] >> 1] > level_[learnt[max_i] >> 1])
            {
                max_i = k;
            }
        }
        std::swap(learnt[1], learnt[max_i]);
        backtrack_level = level_[learnt[1] >> 1];
    }
    lbd = compute_lbd(learnt);
}

void sat_solver::backtrack(const std::uint32_t level)
{
    if (trail_limits_.size() <= level)
    {
        return;
    }
    const auto bound = trail_limits_[level];
    for (auto k = trail_.size(); k > bound; --k)
    {
        const auto var = trail_[k - 1] >> 1;
        assignment_[var] = lbool::UNASSIGNED;
        reason_[var] = NO_REASON;
        if (heap_pos_[var] < 0)
        {
            heap_insert(var);
        }
    }
    trail_.resize(bound);
    trail_limits_.resize(level);
    propagate_head_ = bound;
}

void sat_solver::bump_variable(const std::uint32_t var)
{
    activity_[var] += var_inc_;
    if (activity_[var] > 1e100)
    {
        for (auto& a : activity_)
        {
            a *= 1e-100;
        }
        var_inc_ *= 1e-100;
    }
    if (heap_pos_[var] >= 0)
    {
        heap_sift_up(static_cast<std::size_t>(heap_pos_[var]));
    }
}

void sat_solver::bump_clause(const std::uint32_t clause_index)
{
    auto& c = clauses_[clause_index];
    c.activity += clause_inc_;
    if (c.activity > 1e20)
    {
        for (auto& cl : clauses_)
        {
            cl.activity *= 1e-20;
        }
        clause_inc_ *= 1e-20;
    }
}

void sat_solver::decay_activities()
{
    var_inc_ /= 0.95;
    clause_inc_ /= 0.999;
}

void sat_solver::heap_insert(const std::uint32_t var)
{
    heap_pos_[var] = static_cast<std::int32_t>(heap_.size());
    heap_.push_back(var);
    heap_sift_up(heap_.size() - 1);
}

void sat_solver::heap_sift_up(std::size_t i)
{
    const auto var = heap_[i];
    while (i > 0)
    {
        const auto parent = (i - 1) / 2;
        if (activity_[heap_[parent]] >= activity_[var])
        {
            break;
        }
        heap_[i] = heap_[parent];
        heap_pos_[heap_[i]] = static_cast<std::int32_t>(i);
        i = parent;
    }
    heap_[i] = var;
    heap_pos_[var] = static_cast<std::int32_t>(i);
}

void sat_solver::heap_sift_down(std::size_t i)
{
    const auto var = heap_[i];
    const auto n = heap_.size();
    for (;;)
    {
        auto child = 2 * i + 1;
        if (child >= n)
        {
            break;
        }
        if (child + 1 < n && activity_[heap_[child + 1]] > activity_[heap_[child]])
        {
            ++child;
        }
        if (activity_[heap_[child]] <= activity_[var])
        {
            break;
        }
        heap_[i] = heap_[child];
        heap_pos_[heap_[i]] = static_cast<std::int32_t>(i);
        i = child;
    }
    heap_[i] = var;
    heap_pos_[var] = static_cast<std::int32_t>(i);
}

std::optional<std::uint32_t> sat_solver::heap_pop()
{
    if (heap_.empty())
    {
        return std::nullopt;
    }
    const auto top = heap_[0];
    heap_pos_[top] = -1;
    if (heap_.size() > 1)
    {
        heap_[0] = heap_.back();
        heap_pos_[heap_[0]] = 0;
        heap_.pop_back();
        heap_sift_down(0);
    }
    else
    {
        heap_.pop_back();
    }
    return top;
}

std::optional<std::uint32_t> sat_solver::pick_branch_variable()
{
    while (auto var = heap_pop())
    {
        if (assignment_[*var] == lbool::UNASSIGNED)
        {
            return var;
        }
    }
    return std::nullopt;
}

void sat_solver::reduce_clause_database()
{
    ++reductions_;
    std::vector<std::uint32_t> candidates{};
    for (std::uint32_t i = 0; i < clauses_.size(); ++i)
    {
        const auto& c = clauses_[i];
        if (!c.learnt || c.lits.empty() || c.lbd <= 3)
        {
            continue;
        }
        // Clauses in use as propagation reasons stay.
        const auto v0 = c.lits[0] >> 1;
        if (assignment_[v0] != lbool::UNASSIGNED &&
            reason_[v0] == static_cast<std::int32_t>(i))
        {
            continue;
        }
        candidates.push_back(i);
    }
    std::sort(candidates.begin(), candidates.end(),
              [this](const std::uint32_t a, const std::uint32_t b) {
                  const auto& ca = clauses_[a];
                  const auto& cb = clauses_[b];
                  if (ca.lbd != cb.lbd)
                  {
                      return ca.lbd > cb.lbd;
                  }
                  if (ca.activity != cb.activity)
                  {
                      return ca.activity < cb.activity;
                  }
                  return a < b;
              });
    const auto drop = candidates.size() / 2;
    for (std::size_t k = 0; k < drop; ++k)
    {
        clauses_[candidates[k]].lits.clear();  // tombstone
    }
    // Rebuild all watch lists without the dropped clauses.
    for (auto& w : watches_)
    {
        w.clear();
    }
    for (std::uint32_t i = 0; i < clauses_.size(); ++i)
    {
        if (clauses_[i].lits.size() >= 2)
        {
            attach_clause(i);
        }
    }
}

sat_result sat_solver::solve(const std::optional<std::chrono::steady_clock::time_point> deadline,
                             const std::atomic<bool>* cancel)
{
    if (unsatisfiable_)
    {
        return sat_result::UNSATISFIABLE;
    }
    if (propagate() != -1)
    {
        unsatisfiable_ = true;
        return sat_result::UNSATISFIABLE;
    }

    const auto interrupted = [&]() {
        if (cancel != nullptr && cancel->load(std::memory_order_relaxed))
        {
            return true;
        }
        return deadline && std::chrono::steady_clock::now() >= *deadline;
    };

    std::vector<std::uint32_t> learnt{};
    std::uint64_t restart = 0;
    std::uint64_t check_countdown = 256;
    std::uint64_t decision_countdown = 4096;

    for (;;)
    {
        const auto budget = 100 * luby(restart++);
        std::uint64_t conflicts_here = 0;
        for (;;)
        {
            const auto conf = propagate();
            if (conf >= 0)
            {
                ++conflicts_;
                ++conflicts_here;
                if (trail_limits_.empty())
                {
                    unsatisfiable_ = true;
                    return sat_result::UNSATISFIABLE;
                }
                std::uint32_t bl = 0;
                std::uint32_t lbd = 0;
                analyze(conf, learnt, bl, lbd);
                backtrack(bl);
                if (learnt.size() == 1)
                {
                    enqueue(learnt[0], NO_REASON);
                }
                else
                {
                    clause c{};
                    c.lits = learnt;
                    c.learnt = true;
                    c.lbd = lbd;
                    c.activity = clause_inc_;
                    clauses_.push_back(std::move(c));
                    const auto ci = static_cast<std::uint32_t>(clauses_.size() - 1);
                    attach_clause(ci);
                    enqueue(learnt[0], static_cast<std::int32_t>(ci));
                }
                decay_activities();
                if (conflicts_ >= next_reduce_)
                {
                    reduce_clause_database();
                    next_reduce_ = conflicts_ + 2000 + 300 * reductions_;
                }
                if (--check_countdown == 0)
                {
                    check_countdown = 256;
                    if (interrupted())
                    {
                        backtrack(0);
                        return sat_result::UNDECIDED;
                    }
                }
            }
            else
            {
                if (conflicts_here >= budget)
                {
                    backtrack(0);
                    break;  // restart
                }
                if (--decision_countdown == 0)
                {
                    decision_countdown = 4096;
                    if (interrupted())
                    {
                        backtrack(0);
                        return sat_result::UNDECIDED;
                    }
                }
                const auto var = pick_branch_variable();
                if (!var)
                {
                    return sat_result::SATISFIABLE;
                }
                trail_limits_.push_back(static_cast<std::uint32_t>(trail_.size()));
                const auto lit = (*var << 1) | (phase_[*var] ? 0u : 1u);
                enqueue(lit, NO_REASON);
            }
        }
        if (interrupted())
        {
            return sat_result::UNDECIDED;
        }
    }
}

bool sat_solver::value(const std::int32_t variable) const
{
    if (variable <= 0 || variable > num_vars_)
    {
        throw fcn_error{"sat: value queried for an unknown variable"};
    }
    return assignment_[static_cast<std::size_t>(variable - 1)] == lbool::TRUE;
}

}  // namespace fcnlay
