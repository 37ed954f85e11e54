#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "fermitrot/experiments.hpp"

using namespace fermitrot;

namespace {

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    require(static_cast<bool>(in), "cannot open config '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw invalid_input(std::string("config is not valid JSON: ") + e.what());
    }
}

struct Common {
    std::string config;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    unsigned jobs = std::max(1U, std::thread::hardware_concurrency());
    std::string family;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "JSON config file");
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
}

int run(const std::string& cmd, const Common& c) {
    const json cfg = load_config(c.config);
    const Report rep = run_command(cmd, cfg, RunOptions{c.seed, c.jobs}, c.family);
    json hashed = cfg;
    if (!c.family.empty()) hashed["family"] = c.family;
    const std::string text = render(rep, Provenance{cmd, c.seed, config_hash(hashed)}, c.format);
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(c.out, std::ios::binary);
        require(static_cast<bool>(f), "cannot write '" + c.out + "'");
        f << text;
    }
    if (!rep.ok) {
        std::cerr << "selfcheck failed\n";
        return 4;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trotter error analysis for fermionic Hamiltonians"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);

    Common common;
    std::map<std::string, CLI::App*> subs;
    for (const auto& name : command_names()) {
        auto* sub = app.add_subcommand(name);
        add_common(sub, common);
        if (name == "tightness") sub->add_option("--family", common.family, "T_first, V_first, sparse_T or sparse_V");
        subs[name] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string cmd;
    for (const auto& [name, sub] : subs)
        if (sub->parsed()) cmd = name;

    try {
        return run(cmd, common);
    } catch (const invalid_input& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const budget_exceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const numerical_failure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
