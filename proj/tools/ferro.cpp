// ferro: command line front end for the ferronematic lab.

#include "ferro/errors.hpp"
#include "ferro/runs.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

void apply_thread_cap()
{
#ifdef _OPENMP
    if (const char* s = std::getenv("FERRO_THREADS")) {
        const int n = std::atoi(s);
        if (n > 0)
            omp_set_num_threads(n);
    }
#endif
}

void summarise(const ferro::json& report)
{
    int failed = 0;
    if (report.contains("checks"))
        for (const auto& c : report["checks"])
            if (!c.value("pass", false))
                ++failed;
    std::cout << report.value("command", "") << ": "
              << (report.contains("checks") ? std::to_string(report["checks"].size()) : "0") << " checks, "
              << failed << " failed\n";
}

} // namespace

int main(int argc, char** argv)
{
    apply_thread_cap();
    CLI::App app{"Relaxation, diagnostics and reduced-energy tools for 2D ferronematics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    bool print = false;
    const std::map<std::string, std::string> help = {
        {"relax", "Relax (Q, M) by gradient flow and analyse the state"},
        {"diagnose", "Recompute diagnostics for a relax run (relax_dir)"},
        {"connect", "Minimal connection of the given points"},
        {"renorm", "Renormalised energy of the given points"},
        {"optimize", "Minimise W + c_beta L over defect positions"},
        {"sweep", "Relax over eps_ladder and fit the energy scaling"},
        {"crosscheck", "Compare a relax run (relax_dir) with an optimize run (optimize_dir)"},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, text] : help) {
        CLI::App* s = app.add_subcommand(name, text);
        s->add_option("config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
        s->add_option("-o,--out", out_override, "Override out_dir");
        s->add_flag("-p,--print", print, "Print the report to stdout");
        subs[name] = s;
    }
    CLI::App* self = app.add_subcommand("selftest", "Run the fast invariant checks");
    std::uint64_t seed = 7;
    self->add_option("--seed", seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (self->parsed()) {
            const ferro::json r = ferro::run_selftest(seed);
            std::cout << r.dump(2) << '\n';
            return r["pass"].get<bool>() ? 0 : 1;
        }
        for (const auto& [name, s] : subs) {
            if (!s->parsed())
                continue;
            ferro::RunConfig c = ferro::load_config(config_path);
            c.command = name;
            if (!out_override.empty())
                c.out_dir = out_override;
            ferro::json r;
            if (name == "relax")
                r = ferro::run_relax(c);
            else if (name == "diagnose")
                r = ferro::run_diagnose(c);
            else if (name == "connect")
                r = ferro::run_connect(c);
            else if (name == "renorm")
                r = ferro::run_renorm(c);
            else if (name == "optimize")
                r = ferro::run_optimize(c);
            else if (name == "sweep")
                r = ferro::run_sweep(c);
            else
                r = ferro::run_crosscheck(c);
            if (print)
                std::cout << r.dump(2) << '\n';
            else
                summarise(r);
        }
    } catch (const ferro::Error& e) {
        std::cerr << "ferro: " << e.what() << '\n';
        return ferro::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "ferro: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
