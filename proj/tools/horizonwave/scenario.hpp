#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "horizonwave/asymptotic_engine.hpp"
#include "horizonwave/evolution.hpp"
#include "horizonwave/horizon_models.hpp"
#include "horizonwave/wave_operators.hpp"

namespace horizonwave::cli {

enum ExitCode : int {
    kOk = 0,
    kValidation = 2,
    kNumeric = 3,
    kMissedObstruction = 4,
};

/// A scenario ran but some declared check did not hold.
class CheckFailure : public std::runtime_error {
public:
    CheckFailure(const std::string& what, int exit_code, nlohmann::json failed)
        : std::runtime_error(what), exit_code_(exit_code), failed_(std::move(failed)) {}
    int exit_code() const noexcept { return exit_code_; }
    const nlohmann::json& failed() const noexcept { return failed_; }

private:
    int exit_code_;
    nlohmann::json failed_;
};

/// State shared by an experiment and the checks that inspect it.
struct RunContext {
    nlohmann::json config;
    std::filesystem::path out_dir;
    HorizonModel model;
    OperatorSpec op;
    std::optional<AsymptoticSolution> jet;
    std::optional<Trajectory> traj;
    nlohmann::json results = nlohmann::json::object();
    nlohmann::json checks = nlohmann::json::array();
    std::vector<std::string> artifacts;

    /// Records a check; `obstruction` marks checks whose failure means an
    /// expected obstruction went undetected (exit 4 instead of 3).
    void check(const std::string& name, bool passed, nlohmann::json detail = {}, bool obstruction = false);
    /// value <= limit.
    void check_at_most(const std::string& name, double value, double limit);
    std::filesystem::path artifact(const std::string& file);
};

HorizonModel build_model(const nlohmann::json& table);
OperatorSpec build_operator(const nlohmann::json& table, const HorizonModel& model);
/// Field from `{key}` (expression) or `{key}_file` (coefficient dump).
Field build_field(const nlohmann::json& data, const std::string& key, const SpatialTorus& torus,
                  const std::filesystem::path& base_dir, int components = 1);
Nonlinearity build_nonlinearity(const nlohmann::json& table);

/// Parses the config, runs its experiment into `ctx`, applies `[expect]`.
/// Does not throw CheckFailure; see finish_run.
RunContext run_experiment(const nlohmann::json& config, const std::filesystem::path& base_dir,
                          const std::filesystem::path& out_dir);

/// Writes report.json and throws CheckFailure if any check failed.
nlohmann::json finish_run(RunContext& ctx);

/// Report for a failed run, written to stderr and `<out_dir>/error.json`.
nlohmann::json error_report(int exit_code, const std::string& type, const std::string& message,
                            const nlohmann::json& extra = {});

}  // namespace horizonwave::cli
