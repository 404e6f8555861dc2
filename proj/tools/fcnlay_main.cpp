#include "fcnlay/io/session.hpp"
#include "fcnlay/layout/analysis.hpp"
#include "fcnlay/network/logic_network.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv)
{
    CLI::App app{"fcnlay: tile-based placement, routing, and technology mapping\n"
                 "for field-coupled nanocomputing circuits"};
    app.get_formatter()->column_width(30);

    std::string script_path;
    std::string inline_commands;
    std::string log_path;
    std::string energy_path;
    auto* script_opt =
        app.add_option("-f,--file", script_path, "command script to run, one command per line");
    auto* inline_opt = app.add_option("-c,--commands", inline_commands,
                                      "semicolon-separated command list to run");
    app.add_option("-l,--log", log_path, "write a JSON log of all executed commands");
    app.add_option("--energy", energy_path, "energy coefficient table (JSON) for ps -g");
    script_opt->excludes(inline_opt);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
        return 2;
    }
    if (script_path.empty() && inline_commands.empty())
    {
        std::cerr << "usage error: provide a script (-f) or a command list (-c)\n\n"
                  << app.help();
        return 2;
    }

    fcnlay::session shell{std::cout, std::cerr};
    try
    {
        if (!energy_path.empty())
        {
            shell.set_energy_table(fcnlay::load_energy_table(energy_path));
        }
        const int status = script_path.empty() ? shell.run_inline(inline_commands)
                                               : shell.run_script(script_path);
        if (!log_path.empty())
        {
            shell.write_log(log_path);
        }
        return status;
    }
    catch (const std::exception& ex)
    {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
