#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fcnlay/solver/sat.hpp"

#include <atomic>
#include <chrono>
#include <random>
#include <vector>

using namespace fcnlay;

namespace
{

/// Exhaustive truth-table satisfiability for formulas with few variables.
[[nodiscard]] bool brute_force_satisfiable(const int num_vars,
                                           const std::vector<std::vector<sat_literal>>& clauses)
{
    for (std::uint32_t bits = 0; bits < (1u << num_vars); ++bits)
    {
        bool all = true;
        for (const auto& clause : clauses)
        {
            bool any = false;
            for (const auto lit : clause)
            {
                const auto var = lit > 0 ? lit : -lit;
                const bool val = ((bits >> (var - 1)) & 1) != 0;
                if (val == (lit > 0))
                {
                    any = true;
                    break;
                }
            }
            if (!any)
            {
                all = false;
                break;
            }
        }
        if (all)
        {
            return true;
        }
    }
    return false;
}

/// Pigeonhole formula: pigeons + 1 birds into pigeons holes; unsatisfiable.
void build_pigeonhole(sat_solver& solver, const int holes)
{
    const int pigeons = holes + 1;
    std::vector<std::vector<sat_literal>> var(pigeons, std::vector<sat_literal>(holes));
    for (int p = 0; p < pigeons; ++p)
    {
        for (int h = 0; h < holes; ++h)
        {
            var[p][h] = solver.new_variable();
        }
        solver.add_clause(var[p]);
    }
    for (int h = 0; h < holes; ++h)
    {
        std::vector<sat_literal> in_hole;
        for (int p = 0; p < pigeons; ++p)
        {
            in_hole.push_back(var[p][h]);
        }
        solver.at_most_one(in_hole);
    }
}

}  // namespace

TEST_CASE("unit clauses and contradictions")
{
    {
        sat_solver s;
        const auto x = s.new_variable();
        s.add_clause({x});
        REQUIRE(s.solve() == sat_result::SATISFIABLE);
        CHECK(s.value(x));
    }
    {
        sat_solver s;
        const auto x = s.new_variable();
        s.add_clause({x});
        s.add_clause({-x});
        CHECK(s.solve() == sat_result::UNSATISFIABLE);
    }
    {
        sat_solver s;
        (void)s.new_variable();
        s.add_clause(std::vector<sat_literal>{});
        CHECK(s.solve() == sat_result::UNSATISFIABLE);
    }
}

TEST_CASE("implication chains propagate")
{
    sat_solver s;
    std::vector<sat_literal> v;
    for (int i = 0; i < 20; ++i)
    {
        v.push_back(s.new_variable());
    }
    for (int i = 0; i + 1 < 20; ++i)
    {
        s.add_clause({-v[i], v[i + 1]});
    }
    s.add_clause({v[0]});
    REQUIRE(s.solve() == sat_result::SATISFIABLE);
    for (int i = 0; i < 20; ++i)
    {
        CHECK(s.value(v[i]));
    }
}

TEST_CASE("pigeonhole formulas are refuted")
{
    for (const int holes : {2, 3, 4, 5})
    {
        sat_solver s;
        build_pigeonhole(s, holes);
        CHECK(s.solve() == sat_result::UNSATISFIABLE);
    }
}

TEST_CASE("random 3-SAT verdicts match brute force")
{
    std::mt19937_64 rng{99};
    const int num_vars = 10;
    for (int instance = 0; instance < 60; ++instance)
    {
        const int num_clauses = 20 + static_cast<int>(rng() % 30);
        std::vector<std::vector<sat_literal>> clauses;
        sat_solver s;
        for (int v = 0; v < num_vars; ++v)
        {
            (void)s.new_variable();
        }
        for (int c = 0; c < num_clauses; ++c)
        {
            std::vector<sat_literal> clause;
            for (int k = 0; k < 3; ++k)
            {
                const auto var = static_cast<sat_literal>(1 + rng() % num_vars);
                const auto lit = (rng() & 1) != 0 ? var : -var;
                clause.push_back(lit);
            }
            clauses.push_back(clause);
            s.add_clause(clause);
        }
        const auto verdict = s.solve();
        const bool expected = brute_force_satisfiable(num_vars, clauses);
        REQUIRE(verdict ==
                (expected ? sat_result::SATISFIABLE : sat_result::UNSATISFIABLE));
        if (verdict == sat_result::SATISFIABLE)
        {
            // the reported model must satisfy every clause
            for (const auto& clause : clauses)
            {
                bool any = false;
                for (const auto lit : clause)
                {
                    if (s.value(lit > 0 ? lit : -lit) == (lit > 0))
                    {
                        any = true;
                    }
                }
                REQUIRE(any);
            }
        }
    }
}

TEST_CASE("larger satisfiable instances produce valid models")
{
    std::mt19937_64 rng{123};
    for (int instance = 0; instance < 10; ++instance)
    {
        sat_solver s;
        const int num_vars = 80;
        std::vector<bool> hidden(num_vars);
        for (int v = 0; v < num_vars; ++v)
        {
            (void)s.new_variable();
            hidden[static_cast<std::size_t>(v)] = (rng() & 1) != 0;
        }
        // clauses built around a hidden solution are satisfiable by design
        std::vector<std::vector<sat_literal>> clauses;
        for (int c = 0; c < 300; ++c)
        {
            std::vector<sat_literal> clause;
            for (int k = 0; k < 3; ++k)
            {
                const auto var = static_cast<int>(1 + rng() % num_vars);
                clause.push_back((rng() & 1) != 0 ? var : -var);
            }
            const auto keep = static_cast<std::size_t>(rng() % 3);
            const auto var = clause[keep] > 0 ? clause[keep] : -clause[keep];
            clause[keep] = hidden[static_cast<std::size_t>(var - 1)] ? var : -var;
            clauses.push_back(clause);
            s.add_clause(clause);
        }
        REQUIRE(s.solve() == sat_result::SATISFIABLE);
        for (const auto& clause : clauses)
        {
            bool any = false;
            for (const auto lit : clause)
            {
                if (s.value(lit > 0 ? lit : -lit) == (lit > 0))
                {
                    any = true;
                }
            }
            REQUIRE(any);
        }
    }
}

TEST_CASE("cardinality constraints")
{
    const auto make_vars = [](sat_solver& s, const int n)
    {
        std::vector<sat_literal> v;
        for (int i = 0; i < n; ++i)
        {
            v.push_back(s.new_variable());
        }
        return v;
    };

    SUBCASE("exactly one, pairwise region")
    {
        sat_solver s;
        const auto v = make_vars(s, 4);
        s.exactly_one(v);
        s.add_clause({v[2]});
        REQUIRE(s.solve() == sat_result::SATISFIABLE);
        int count = 0;
        for (const auto lit : v)
        {
            count += s.value(lit) ? 1 : 0;
        }
        CHECK(count == 1);
        CHECK(s.value(v[2]));
    }
    SUBCASE("exactly one, sequential-counter region")
    {
        sat_solver s;
        const auto v = make_vars(s, 9);
        s.exactly_one(v);
        s.add_clause({v[7]});
        REQUIRE(s.solve() == sat_result::SATISFIABLE);
        int count = 0;
        for (const auto lit : v)
        {
            count += s.value(lit) ? 1 : 0;
        }
        CHECK(count == 1);
    }
    SUBCASE("two forced trues violate at-most-one")
    {
        for (const int n : {4, 9})
        {
            sat_solver s;
            const auto v = make_vars(s, n);
            s.at_most_one(v);
            s.add_clause({v[0]});
            s.add_clause({v[1]});
            CHECK(s.solve() == sat_result::UNSATISFIABLE);
        }
    }
    SUBCASE("at most k")
    {
        sat_solver s;
        const auto v = make_vars(s, 8);
        s.at_most_k(v, 3);
        for (int i = 0; i < 3; ++i)
        {
            s.add_clause({v[i]});
        }
        REQUIRE(s.solve() == sat_result::SATISFIABLE);
        int count = 0;
        for (const auto lit : v)
        {
            count += s.value(lit) ? 1 : 0;
        }
        CHECK(count <= 3);

        sat_solver s2;
        const auto w = make_vars(s2, 8);
        s2.at_most_k(w, 3);
        for (int i = 0; i < 4; ++i)
        {
            s2.add_clause({w[i]});
        }
        CHECK(s2.solve() == sat_result::UNSATISFIABLE);
    }
    SUBCASE("at most zero forces all false")
    {
        sat_solver s;
        const auto v = make_vars(s, 5);
        s.at_most_k(v, 0);
        REQUIRE(s.solve() == sat_result::SATISFIABLE);
        for (const auto lit : v)
        {
            CHECK_FALSE(s.value(lit));
        }
    }
}

TEST_CASE("solving is deterministic")
{
    const auto run = []
    {
        sat_solver s;
        build_pigeonhole(s, 5);
        const auto r = s.solve();
        return std::pair{r, s.conflict_count()};
    };
    const auto first = run();
    const auto second = run();
    CHECK(first.first == sat_result::UNSATISFIABLE);
    CHECK(first == second);
}

TEST_CASE("deadlines and cancellation yield undecided")
{
    {
        sat_solver s;
        build_pigeonhole(s, 9);
        const auto verdict = s.solve(std::chrono::steady_clock::now());
        CHECK(verdict == sat_result::UNDECIDED);
    }
    {
        sat_solver s;
        build_pigeonhole(s, 9);
        std::atomic<bool> cancel{true};
        const auto verdict = s.solve(std::nullopt, &cancel);
        CHECK(verdict == sat_result::UNDECIDED);
    }
}
