#include "fcnlay/clocking/clocking_scheme.hpp"

#include "fcnlay/embedded_data.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

namespace fcnlay
{

namespace
{

[[nodiscard]] std::string to_lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](const unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

[[nodiscard]] clocking_scheme scheme_from_json(const nlohmann::json& j)
{
    clocking_scheme s{};
    s.name = j.at("name").get<std::string>();
    s.phases = j.at("phases").get<unsigned>();
    s.regular = true;
    for (const auto& row : j.at("cutout"))
    {
        std::vector<std::uint8_t> r;
        for (const auto& entry : row)
        {
            const auto v = entry.get<int>();
            if (v < 0 || v >= static_cast<int>(s.phases))
            {
                throw fcn_error{"clocking scheme '" + s.name + "': cutout entry " +
                                std::to_string(v) + " outside [0, " + std::to_string(s.phases) +
                                ")"};
            }
            r.push_back(static_cast<std::uint8_t>(v));
        }
        if (!s.cutout.empty() && r.size() != s.cutout.front().size())
        {
            throw fcn_error{"clocking scheme '" + s.name + "': ragged cutout rows"};
        }
        s.cutout.push_back(std::move(r));
    }
    if (s.cutout.empty() || s.cutout.front().empty())
    {
        throw fcn_error{"clocking scheme '" + s.name + "': empty cutout"};
    }
    return s;
}

[[nodiscard]] const std::map<std::string, clocking_scheme>& builtin_table()
{
    static const auto table = []
    {
        std::map<std::string, clocking_scheme> t;
        const auto j = nlohmann::json::parse(embedded::clock_schemes_json);
        for (const auto& entry : j.at("schemes"))
        {
            auto s = scheme_from_json(entry);
            t.emplace(s.name, std::move(s));
        }
        for (const unsigned phases : {3u, 4u})
        {
            clocking_scheme open{};
            open.name = "open" + std::to_string(phases);
            open.phases = phases;
            open.regular = false;
            t.emplace(open.name, std::move(open));
        }
        return t;
    }();
    return table;
}

}  // namespace

clocking_scheme scheme_from_name(const std::string& name)
{
    const auto& table = builtin_table();
    const auto it = table.find(to_lower(name));
    if (it == table.end())
    {
        std::string known;
        for (const auto& [k, v] : table)
        {
            known += known.empty() ? k : ", " + k;
        }
        throw fcn_error{"unknown clocking scheme '" + name + "' (known: " + known + ")"};
    }
    return it->second;
}

clocking_scheme load_scheme_file(const std::string& path, const std::string& scheme_name)
{
    std::ifstream in{path};
    if (!in)
    {
        throw fcn_error{"cannot open clocking scheme file '" + path + "'"};
    }
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw fcn_error{"malformed clocking scheme file '" + path + "': " + e.what()};
    }
    try
    {
        if (j.contains("schemes"))
        {
            for (const auto& entry : j.at("schemes"))
            {
                if (scheme_name.empty() ||
                    to_lower(entry.at("name").get<std::string>()) == to_lower(scheme_name))
                {
                    return scheme_from_json(entry);
                }
            }
            throw fcn_error{"scheme '" + scheme_name + "' not found in '" + path + "'"};
        }
        return scheme_from_json(j);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw fcn_error{"malformed clocking scheme file '" + path + "': " + e.what()};
    }
}

const std::vector<std::string>& builtin_scheme_names()
{
    static const std::vector<std::string> names = []
    {
        std::vector<std::string> n;
        for (const auto& [k, v] : builtin_table())
        {
            n.push_back(k);
        }
        return n;
    }();
    return names;
}

}  // namespace fcnlay
