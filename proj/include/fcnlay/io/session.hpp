#ifndef FCNLAY_IO_SESSION_HPP
#define FCNLAY_IO_SESSION_HPP

#include "fcnlay/layout/analysis.hpp"
#include "fcnlay/layout/gate_layout.hpp"
#include "fcnlay/network/logic_network.hpp"
#include "fcnlay/techmap/cell_layout.hpp"

#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fcnlay
{

/**
 * One executed command: the literal command line, the name of the store item
 * it produced or inspected, full statistics when the command printed them,
 * and the wall-clock runtime.
 */
struct run_record
{
    std::string cmd{};
    std::string name{};
    std::optional<layout_statistics> stats{};
    double runtime_s{};
};

/**
 * Store-based command shell: holds ordered stores of networks, gate layouts,
 * and cell layouts, each with a current item, and interprets the command
 * vocabulary (read, exact, ortho, cell, qca, svg, show, ps, list, set).
 *
 * Every successful command appends a run_record; write_log serializes the
 * records as one JSON document. Commands are processed strictly in order on
 * the calling thread; engines may parallelize internally.
 */
class session
{
  public:
    explicit session(std::ostream& out = std::cout, std::ostream& err = std::cerr);

    /// Energy table used by ps -g; defaults to the built-in coefficients.
    void set_energy_table(energy_table table);

    /**
     * Parses and runs a single command line. Throws fcn_error on unknown
     * commands, bad flags, missing store prerequisites, or engine failure.
     */
    void execute(const std::string& command_line);

    /**
     * Runs a command script, one command per line; blank lines and lines
     * starting with '#' are skipped. Stops at the first failing command,
     * reporting its line number. Returns 0 on success, 1 on command error.
     */
    [[nodiscard]] int run_script(const std::string& path);

    /// Runs a semicolon-separated command list with the same error policy.
    [[nodiscard]] int run_inline(const std::string& commands);

    /// Serializes all run records as a single JSON document.
    void write_log(const std::string& path) const;

    [[nodiscard]] const std::vector<run_record>& records() const noexcept { return records_; }

    [[nodiscard]] std::shared_ptr<const logic_network> current_network() const;
    [[nodiscard]] std::shared_ptr<const gate_layout> current_gate_layout() const;
    [[nodiscard]] std::shared_ptr<const cell_layout> current_cell_layout() const;

  private:
    struct command_args;

    void cmd_read(const command_args& args);
    void cmd_exact(const command_args& args);
    void cmd_ortho(const command_args& args);
    void cmd_cell(const command_args& args);
    void cmd_qca(const command_args& args);
    void cmd_svg(const command_args& args, bool spawn_viewer);
    void cmd_ps(const command_args& args);
    void cmd_list(const command_args& args);
    void cmd_set(const command_args& args);

    std::ostream& out_;
    std::ostream& err_;
    energy_table energy_;

    std::vector<std::shared_ptr<const logic_network>> networks_{};
    std::vector<std::shared_ptr<const gate_layout>> gate_layouts_{};
    std::vector<std::shared_ptr<const cell_layout>> cell_layouts_{};
    std::size_t current_network_{0};
    std::size_t current_gate_{0};
    std::size_t current_cell_{0};

    std::vector<run_record> records_{};
    run_record pending_{};
    std::map<std::string, int> svg_serial_{};
};

}  // namespace fcnlay

#endif  // FCNLAY_IO_SESSION_HPP
