#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "config.hpp"
#include "gallery.hpp"
#include "horizonwave/errors.hpp"
#include "horizonwave/parallel.hpp"
#include "scenario.hpp"

namespace fs = std::filesystem;
using namespace horizonwave;
using namespace horizonwave::cli;
using nlohmann::json;

namespace {

int report_error(int code, const std::string& type, const std::string& message, const fs::path& out_dir,
                 const json& extra = {}) {
    const json report = error_report(code, type, message, extra);
    std::cerr << report.dump(2) << '\n';
    if (!out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (!ec) std::ofstream(out_dir / "error.json", std::ios::binary) << report.dump(2) << '\n';
    }
    return code;
}

/// Runs `body` and maps library exceptions onto exit codes.
template <typename Body>
int guarded(const fs::path& out_dir, Body&& body) {
    try {
        body();
        return kOk;
    } catch (const CheckFailure& e) {
        return report_error(e.exit_code(), e.exit_code() == kMissedObstruction ? "MissedObstruction" : "CheckFailed",
                            e.what(), out_dir, e.failed());
    } catch (const OrderShortfall& e) {
        return report_error(kValidation, "OrderShortfall", e.what(), out_dir,
                            {{"needed", e.needed()}, {"available", e.available()}});
    } catch (const NotAdmissible& e) {
        return report_error(kValidation, "NotAdmissible", e.what(), out_dir);
    } catch (const DimensionMismatch& e) {
        return report_error(kValidation, "DimensionMismatch", e.what(), out_dir);
    } catch (const ValidationError& e) {
        return report_error(kValidation, "ValidationError", e.what(), out_dir);
    } catch (const StepSizeUnderflow& e) {
        return report_error(kNumeric, "StepSizeUnderflow", e.what(), out_dir, {{"t_reached", e.t_reached()}});
    } catch (const NoConvergence& e) {
        return report_error(kNumeric, "NoConvergence", e.what(), out_dir);
    } catch (const DegenerateDivision& e) {
        return report_error(kNumeric, "DegenerateDivision", e.what(), out_dir, {{"t", e.t()}});
    } catch (const NoFiniteConstant& e) {
        return report_error(kNumeric, "NoFiniteConstant", e.what(), out_dir);
    } catch (const Error& e) {
        return report_error(kNumeric, "NumericError", e.what(), out_dir);
    } catch (const json::exception& e) {
        return report_error(kValidation, "ValidationError", e.what(), out_dir);
    } catch (const std::exception& e) {
        return report_error(kNumeric, "InternalError", e.what(), out_dir);
    }
}

void apply_thread_cap() {
    const char* env = std::getenv("HORIZONWAVE_THREADS");
    if (env == nullptr || *env == '\0') return;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) throw ValidationError(std::string("HORIZONWAVE_THREADS must be a positive integer, got '") + env + "'");
    set_max_threads(static_cast<int>(n));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Characteristic Cauchy problems on compact Cauchy horizons"};
    app.require_subcommand(1);

    std::string config_path;
    std::string run_out;
    auto* run = app.add_subcommand("run", "Run a scenario file");
    run->add_option("config", config_path, "Scenario file")->required();
    run->add_option("--out", run_out, "Output directory (overrides the scenario's `output`)");

    auto* gal = app.add_subcommand("gallery", "Built-in counterexamples and oracles");
    gal->require_subcommand(1);
    auto* list = gal->add_subcommand("list", "List gallery scenarios");
    bool list_json = false;
    list->add_flag("--json", list_json, "Print the list as JSON");
    std::string gallery_name;
    std::string gallery_out;
    auto* grun = gal->add_subcommand("run", "Run one gallery scenario");
    grun->add_option("name", gallery_name, "Scenario name")->required();
    grun->add_option("--out", gallery_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error(kValidation, "UsageError", e.what(), {});
    }

    if (list->parsed()) {
        if (list_json) {
            json out = json::array();
            for (const auto& e : gallery()) out.push_back({{"name", e.name}, {"description", e.description}});
            std::cout << out.dump(2) << '\n';
        } else {
            for (const auto& e : gallery()) std::cout << e.name << "  " << e.description << '\n';
        }
        return kOk;
    }

    if (grun->parsed()) {
        const fs::path out = gallery_out.empty() ? fs::path("horizonwave_out") / gallery_name : fs::path(gallery_out);
        return guarded(out, [&] {
            apply_thread_cap();
            const auto report = run_gallery(gallery_entry(gallery_name), out);
            std::cout << report.dump(2) << '\n';
        });
    }

    fs::path out = run_out;
    return guarded(out, [&] {
        apply_thread_cap();
        const fs::path path(config_path);
        const json config = load_config(path);
        if (out.empty()) {
            const std::string declared = config.value("output", "");
            out = declared.empty() ? fs::path("horizonwave_out") / config.value("name", path.stem().string())
                                   : path.parent_path() / declared;
        }
        json report;
        if (config.contains("gallery")) {
            report = run_gallery(gallery_entry(config.at("gallery").get<std::string>()), out);
        } else {
            auto ctx = run_experiment(config, path.parent_path(), out);
            report = finish_run(ctx);
        }
        std::cout << report.dump(2) << '\n';
    });
}
