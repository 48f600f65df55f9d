#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jtac/channel.hpp"
#include "jtac/config.hpp"
#include "jtac/csv.hpp"
#include "jtac/errors.hpp"
#include "jtac/svg.hpp"
#include "jtac/sweep.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_override, bool nats) {
    jtac::cli::experiment_config cfg = jtac::cli::parse_config_file(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;

    std::vector<jtac::cli::sweep_row> rows = jtac::cli::run_sweep(cfg);

    std::printf("%s: sweep over %s, %zu points\n", cfg.name.c_str(),
                jtac::cli::sweep_variable_name(cfg.sweep_var).c_str(), rows.size());
    std::printf("%12s", jtac::cli::sweep_variable_name(cfg.sweep_var).c_str());
    for (auto mth : cfg.methods)
        std::printf(" %14s", (jtac::cli::method_name(mth) + (nats ? "[nats]" : "[bits]")).c_str());
    std::printf("\n");
    for (const auto& row : rows) {
        std::printf("%12.6g", row.sweep_value);
        for (auto mth : cfg.methods) {
            auto it = row.values.find(mth);
            if (it == row.values.end())
                std::printf(" %14s", "-");
            else
                std::printf(" %14.6f", nats ? it->second.nats : it->second.bits());
        }
        std::printf("\n");
        if (row.status != "ok")
            std::printf("    note: %s\n", row.status.c_str());
    }

    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec)
        throw jtac::config_error("cannot create output directory '" + cfg.out_dir + "': " +
                                 ec.message());
    if (cfg.emit_csv_file) {
        std::string path = cfg.out_dir + "/" + cfg.name + ".csv";
        jtac::cli::emit_csv(cfg, rows, path, nats);
        std::printf("wrote %s\n", path.c_str());
    }
    if (cfg.emit_svg_file) {
        std::string path = cfg.out_dir + "/" + cfg.name + ".svg";
        jtac::cli::emit_svg_plot(cfg, rows, jtac::cli::svg_style{}, path, nats);
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}

int cmd_table1() {
    const double d = 21.91;
    const double D_values[] = {4800.0, 480.0, 240.0, 160.0, 120.0, 96.0};
    std::printf("dispersion parameter for d = %.2f um\n\n", d);
    std::printf("%14s %16s %18s\n", "D (um^2/s)", "c = d^2/D (s)", "c = d^2/(2D) (s)");
    for (double D : D_values) {
        jtac::channel::channel_geometry geom{d, D};
        std::printf("%14g %16.5g %18.5g\n", D, d * d / D,
                    jtac::channel::c_from_geometry(geom));
    }
    std::printf("\nnote: the tabulated c column follows c = d^2/D; the first-hitting-time\n"
                "derivation used everywhere else in this tool gives c = d^2/(2D), a factor\n"
                "of 2 smaller. Configs take c directly, so either convention can be fed in.\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"capacity bounds and numerical capacity for the joint "
                 "time-and-concentration molecular diffusion channel"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    bool nats = false;
    CLI::App* run = app.add_subcommand("run", "evaluate a sweep config, emit CSV/SVG");
    run->add_option("config", config_path, "path to a sweep config file")->required();
    run->add_option("--out", out_override, "override the config's output directory");
    run->add_flag("--nats", nats, "report rates in nats instead of bits");

    CLI::App* table1 = app.add_subcommand("table1", "print the geometry-to-c mapping");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, out_override, nats);
        if (table1->parsed()) return cmd_table1();
    } catch (const jtac::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
