#include "fcnlay/io/session.hpp"

#include "fcnlay/clocking/clocking_scheme.hpp"
#include "fcnlay/exact/exact.hpp"
#include "fcnlay/io/qca_io.hpp"
#include "fcnlay/io/svg_writer.hpp"
#include "fcnlay/network/verilog.hpp"
#include "fcnlay/ortho/ortho.hpp"
#include "fcnlay/techmap/gate_library.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace fcnlay
{

namespace
{

[[nodiscard]] std::string trim(const std::string& s)
{
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
    {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

/// Whitespace tokenizer honoring double-quoted segments for paths with spaces.
[[nodiscard]] std::vector<std::string> tokenize(const std::string& line)
{
    std::vector<std::string> tokens;
    std::string cur;
    bool quoted = false;
    for (const char c : line)
    {
        if (c == '"')
        {
            quoted = !quoted;
        }
        else if (!quoted && (c == ' ' || c == '\t'))
        {
            if (!cur.empty())
            {
                tokens.push_back(std::move(cur));
                cur.clear();
            }
        }
        else
        {
            cur += c;
        }
    }
    if (!cur.empty())
    {
        tokens.push_back(std::move(cur));
    }
    return tokens;
}

[[nodiscard]] double parse_number(const std::string& cmd, const std::string& flag,
                                  const std::string& text)
{
    try
    {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || v < 0)
        {
            throw fcn_error{""};
        }
        return v;
    }
    catch (const std::exception&)
    {
        throw fcn_error{cmd + ": " + flag + " expects a nonnegative number, got '" + text + "'"};
    }
}

}  // namespace

/**
 * Parsed command line: short flags may be clustered; a short flag that takes
 * a value must close its cluster and consumes the following token, as do
 * value-taking long flags.
 */
struct session::command_args
{
    std::string cmd{};
    std::vector<std::string> positionals{};
    std::set<char> shorts{};
    std::set<std::string> longs{};
    std::map<std::string, std::string> values{};

    [[nodiscard]] bool has(const char flag) const { return shorts.contains(flag); }
    [[nodiscard]] bool has(const std::string& flag) const { return longs.contains(flag); }

    [[nodiscard]] static command_args parse(const std::vector<std::string>& tokens,
                                            const std::string& bool_shorts,
                                            const std::string& value_shorts,
                                            const std::set<std::string>& bool_longs,
                                            const std::set<std::string>& value_longs)
    {
        command_args args;
        args.cmd = tokens.front();
        for (std::size_t i = 1; i < tokens.size(); ++i)
        {
            const auto& tok = tokens[i];
            if (tok.rfind("--", 0) == 0)
            {
                const auto name = tok.substr(2);
                if (value_longs.contains(name))
                {
                    if (++i >= tokens.size())
                    {
                        throw fcn_error{args.cmd + ": --" + name + " needs a value"};
                    }
                    args.values[name] = tokens[i];
                }
                else if (bool_longs.contains(name))
                {
                    args.longs.insert(name);
                }
                else
                {
                    throw fcn_error{args.cmd + ": unknown flag '--" + name + "'"};
                }
            }
            else if (tok.size() > 1 && tok.front() == '-' &&
                     (std::isalpha(static_cast<unsigned char>(tok[1])) != 0))
            {
                for (std::size_t k = 1; k < tok.size(); ++k)
                {
                    const char f = tok[k];
                    if (value_shorts.find(f) != std::string::npos)
                    {
                        if (k + 1 != tok.size())
                        {
                            throw fcn_error{args.cmd + ": -" + f +
                                            " takes a value and must end its flag group"};
                        }
                        if (++i >= tokens.size())
                        {
                            throw fcn_error{args.cmd + ": -" + std::string{f} + " needs a value"};
                        }
                        args.values[std::string{f}] = tokens[i];
                    }
                    else if (bool_shorts.find(f) != std::string::npos)
                    {
                        args.shorts.insert(f);
                    }
                    else
                    {
                        throw fcn_error{args.cmd + ": unknown flag '-" + std::string{f} + "'"};
                    }
                }
            }
            else
            {
                args.positionals.push_back(tok);
            }
        }
        return args;
    }
};

session::session(std::ostream& out, std::ostream& err)
    : out_{out}, err_{err}, energy_{default_energy_table()}
{
}

void session::set_energy_table(energy_table table)
{
    energy_ = std::move(table);
}

std::shared_ptr<const logic_network> session::current_network() const
{
    return networks_.empty() ? nullptr : networks_[current_network_];
}

std::shared_ptr<const gate_layout> session::current_gate_layout() const
{
    return gate_layouts_.empty() ? nullptr : gate_layouts_[current_gate_];
}

std::shared_ptr<const cell_layout> session::current_cell_layout() const
{
    return cell_layouts_.empty() ? nullptr : cell_layouts_[current_cell_];
}

void session::execute(const std::string& command_line)
{
    const auto line = trim(command_line);
    const auto tokens = tokenize(line);
    if (tokens.empty())
    {
        return;
    }
    pending_ = run_record{};
    pending_.cmd = line;

    const auto start = std::chrono::steady_clock::now();
    const auto& cmd = tokens.front();
    if (cmd == "read")
    {
        cmd_read(command_args::parse(tokens, "", "", {}, {}));
    }
    else if (cmd == "exact")
    {
        cmd_exact(command_args::parse(tokens, "ixbp", "s", {"latches"},
                                      {"timeout", "wire-limit", "upper-bound"}));
    }
    else if (cmd == "ortho")
    {
        cmd_ortho(command_args::parse(tokens, "", "", {"io", "border"}, {}));
    }
    else if (cmd == "cell")
    {
        cmd_cell(command_args::parse(tokens, "", "", {}, {"library"}));
    }
    else if (cmd == "qca")
    {
        cmd_qca(command_args::parse(tokens, "", "", {}, {}));
    }
    else if (cmd == "svg" || cmd == "show")
    {
        cmd_svg(command_args::parse(tokens, "gc", "", {}, {}), cmd == "show");
    }
    else if (cmd == "ps")
    {
        cmd_ps(command_args::parse(tokens, "ngc", "", {}, {}));
    }
    else if (cmd == "list")
    {
        cmd_list(command_args::parse(tokens, "ngc", "", {}, {}));
    }
    else if (cmd == "set")
    {
        cmd_set(command_args::parse(tokens, "ngc", "", {}, {}));
    }
    else
    {
        throw fcn_error{"unknown command '" + cmd + "'"};
    }
    const auto stop = std::chrono::steady_clock::now();
    pending_.runtime_s = std::chrono::duration<double>(stop - start).count();
    records_.push_back(pending_);
}

void session::cmd_read(const command_args& args)
{
    if (args.positionals.size() != 1)
    {
        throw fcn_error{"read: expected exactly one Verilog file path"};
    }
    auto net = parse_verilog_file(args.positionals.front());
    auto bounded = substitute_fanouts(net);
    networks_.push_back(std::make_shared<const logic_network>(std::move(bounded)));
    current_network_ = networks_.size() - 1;
    pending_.name = networks_.back()->name();
}

void session::cmd_exact(const command_args& args)
{
    const auto net = current_network();
    if (net == nullptr)
    {
        throw fcn_error{"no network in store"};
    }
    exact_parameters params{};
    const auto scheme_it = args.values.find("s");
    params.scheme =
        scheme_from_name(scheme_it == args.values.end() ? "2ddwave4" : scheme_it->second);
    params.crossings = args.has('x');
    params.border_io = args.has('b');
    params.io_pins = args.has('i') || params.border_io;
    params.desync = args.has('p');
    params.latches = args.has("latches");
    if (const auto it = args.values.find("timeout"); it != args.values.end())
    {
        params.timeout_s = parse_number("exact", "--timeout", it->second);
    }
    if (const auto it = args.values.find("wire-limit"); it != args.values.end())
    {
        params.wire_limit =
            static_cast<std::uint32_t>(parse_number("exact", "--wire-limit", it->second));
    }
    if (const auto it = args.values.find("upper-bound"); it != args.values.end())
    {
        params.upper_bound =
            static_cast<std::uint64_t>(parse_number("exact", "--upper-bound", it->second));
    }

    auto result = exact_layout(net, params);
    if (result.status != exact_status::FOUND || !result.layout.has_value())
    {
        throw fcn_error{result.status == exact_status::TIMEOUT
                            ? "exact: timed out before finding a layout"
                            : "exact: no layout exists up to the area bound"};
    }
    gate_layouts_.push_back(std::make_shared<const gate_layout>(std::move(*result.layout)));
    current_gate_ = gate_layouts_.size() - 1;
    pending_.name = net->name();
}

void session::cmd_ortho(const command_args& args)
{
    const auto net = current_network();
    if (net == nullptr)
    {
        throw fcn_error{"no network in store"};
    }
    ortho_parameters params{};
    params.border_io = args.has("border");
    params.io_pins = args.has("io") || params.border_io;
    auto layout = ortho_layout(net, params);
    gate_layouts_.push_back(std::make_shared<const gate_layout>(std::move(layout)));
    current_gate_ = gate_layouts_.size() - 1;
    pending_.name = net->name();
}

void session::cmd_cell(const command_args& args)
{
    const auto layout = current_gate_layout();
    if (layout == nullptr)
    {
        throw fcn_error{"no gate layout in store"};
    }
    const auto lib_it = args.values.find("library");
    const auto lib = load_library(lib_it == args.values.end() ? "qca-one" : lib_it->second);
    auto cells = apply_library(*layout, lib);
    cell_layouts_.push_back(std::make_shared<const cell_layout>(std::move(cells)));
    current_cell_ = cell_layouts_.size() - 1;
    pending_.name = cell_layouts_.back()->name();
}

void session::cmd_qca(const command_args& args)
{
    const auto cells = current_cell_layout();
    if (cells == nullptr)
    {
        throw fcn_error{"no cell layout in store"};
    }
    const auto path =
        args.positionals.empty() ? cells->name() + ".qca" : args.positionals.front();
    write_qca(*cells, path);
    pending_.name = cells->name();
}

void session::cmd_svg(const command_args& args, const bool spawn_viewer)
{
    std::string svg;
    std::string name;
    if (args.has('c'))
    {
        const auto cells = current_cell_layout();
        if (cells == nullptr)
        {
            throw fcn_error{"no cell layout in store"};
        }
        svg = render_svg(*cells);
        name = cells->name();
    }
    else
    {
        const auto layout = current_gate_layout();
        if (layout == nullptr)
        {
            throw fcn_error{"no gate layout in store"};
        }
        svg = render_svg(*layout);
        name = layout->network().name();
    }
    auto path = args.positionals.empty() ? name + ".svg" : args.positionals.front();
    if (args.positionals.empty())
    {
        // keep repeated renders of the same item from clobbering each other
        const auto n = ++svg_serial_[name];
        if (n > 1)
        {
            path = name + "_" + std::to_string(n) + ".svg";
        }
    }
    std::ofstream file{path};
    if (!file || !(file << svg))
    {
        throw fcn_error{"svg export: cannot write " + path};
    }
    file.close();
    pending_.name = name;
    if (spawn_viewer)
    {
        if (const char* viewer = std::getenv("FCNLAY_SVG_VIEWER"); viewer != nullptr)
        {
            const auto shell_cmd = std::string{viewer} + " \"" + path + "\" &";
            std::ignore = std::system(shell_cmd.c_str());
        }
    }
}

void session::cmd_ps(const command_args& args)
{
    if (args.has('n'))
    {
        const auto net = current_network();
        if (net == nullptr)
        {
            throw fcn_error{"no network in store"};
        }
        const auto st = network_stats(*net);
        out_ << net->name() << ": #V: " << st.vertex_count << ", #E: " << st.edge_count
             << ", #PI: " << st.pi_count << ", #PO: " << st.po_count
             << ", #FO: " << st.fanout_count << "\n";
        pending_.name = net->name();
        return;
    }
    if (args.has('c'))
    {
        const auto cells = current_cell_layout();
        if (cells == nullptr)
        {
            throw fcn_error{"no cell layout in store"};
        }
        out_ << cells->name() << ": " << cells->width() << " x " << cells->height()
             << ", #cells: " << cells->num_cells() << "\n";
        pending_.name = cells->name();
        return;
    }
    const auto layout = current_gate_layout();
    if (layout == nullptr)
    {
        throw fcn_error{"no gate layout in store"};
    }
    const auto st = layout_stats(*layout, energy_);
    out_ << format_stats_line(st) << "\n";
    pending_.name = st.network_name;
    pending_.stats = st;
}

void session::cmd_list(const command_args& args)
{
    const bool all = !args.has('n') && !args.has('g') && !args.has('c');
    const auto mark = [](const bool current) { return current ? "* " : "  "; };
    if (all || args.has('n'))
    {
        out_ << "networks:\n";
        for (std::size_t i = 0; i < networks_.size(); ++i)
        {
            out_ << "  " << mark(i == current_network_) << "[" << i << "] "
                 << networks_[i]->name() << "\n";
        }
    }
    if (all || args.has('g'))
    {
        out_ << "gate layouts:\n";
        for (std::size_t i = 0; i < gate_layouts_.size(); ++i)
        {
            out_ << "  " << mark(i == current_gate_) << "[" << i << "] "
                 << gate_layouts_[i]->network().name() << " (" << gate_layouts_[i]->width()
                 << " x " << gate_layouts_[i]->height() << ")\n";
        }
    }
    if (all || args.has('c'))
    {
        out_ << "cell layouts:\n";
        for (std::size_t i = 0; i < cell_layouts_.size(); ++i)
        {
            out_ << "  " << mark(i == current_cell_) << "[" << i << "] "
                 << cell_layouts_[i]->name() << " (" << cell_layouts_[i]->width() << " x "
                 << cell_layouts_[i]->height() << ")\n";
        }
    }
}

void session::cmd_set(const command_args& args)
{
    if (args.positionals.size() != 1)
    {
        throw fcn_error{"set: expected a store index"};
    }
    const auto index = static_cast<std::size_t>(
        parse_number("set", "index", args.positionals.front()));
    const auto pick = [&](const char* store, const std::size_t size, std::size_t& current)
    {
        if (index >= size)
        {
            throw fcn_error{"set: index " + std::to_string(index) + " out of range for " +
                            store + " store of size " + std::to_string(size)};
        }
        current = index;
    };
    if (args.has('n'))
    {
        pick("network", networks_.size(), current_network_);
    }
    else if (args.has('c'))
    {
        pick("cell layout", cell_layouts_.size(), current_cell_);
    }
    else if (args.has('g'))
    {
        pick("gate layout", gate_layouts_.size(), current_gate_);
    }
    else
    {
        throw fcn_error{"set: specify a store (-n, -g, or -c)"};
    }
}

int session::run_script(const std::string& path)
{
    std::ifstream file{path};
    if (!file)
    {
        err_ << "error: cannot open script '" << path << "'\n";
        return 1;
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(file, line))
    {
        ++line_no;
        const auto cmd = trim(line);
        if (cmd.empty() || cmd.front() == '#')
        {
            continue;
        }
        try
        {
            execute(cmd);
        }
        catch (const std::exception& ex)
        {
            err_ << "error: " << ex.what() << " (line " << line_no << ")\n";
            return 1;
        }
    }
    return 0;
}

int session::run_inline(const std::string& commands)
{
    std::size_t cmd_no = 0;
    std::size_t begin = 0;
    while (begin <= commands.size())
    {
        const auto end = commands.find(';', begin);
        const auto piece =
            commands.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
        begin = end == std::string::npos ? commands.size() + 1 : end + 1;
        ++cmd_no;
        const auto cmd = trim(piece);
        if (cmd.empty())
        {
            continue;
        }
        try
        {
            execute(cmd);
        }
        catch (const std::exception& ex)
        {
            err_ << "error: " << ex.what() << " (command " << cmd_no << ")\n";
            return 1;
        }
    }
    return 0;
}

void session::write_log(const std::string& path) const
{
    nlohmann::ordered_json doc;
    doc["commands"] = nlohmann::ordered_json::array();
    for (const auto& rec : records_)
    {
        nlohmann::ordered_json entry;
        entry["cmd"] = rec.cmd;
        entry["name"] = rec.name;
        if (rec.stats.has_value())
        {
            const auto& st = *rec.stats;
            entry["stats"] = nlohmann::ordered_json{{"w", st.width},
                                                    {"h", st.height},
                                                    {"gates", st.gate_count},
                                                    {"wires", st.wire_count},
                                                    {"crossings", st.crossing_count},
                                                    {"latches", st.latch_count},
                                                    {"cp", st.critical_path},
                                                    {"tp_denominator", st.throughput_denominator},
                                                    {"bbox_w", st.bounding_box_width},
                                                    {"bbox_h", st.bounding_box_height},
                                                    {"energy_slow_mev", st.energy.slow_mev},
                                                    {"energy_fast_mev", st.energy.fast_mev}};
        }
        entry["runtime_s"] = rec.runtime_s;
        doc["commands"].push_back(std::move(entry));
    }
    std::ofstream file{path};
    if (!file || !(file << doc.dump(2) << "\n"))
    {
        throw fcn_error{"log export: cannot write " + path};
    }
}

}  // namespace fcnlay
