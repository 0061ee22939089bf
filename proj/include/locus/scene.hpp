#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace locus {

enum ExitCode { kExitOk = 0, kExitCheckFailed = 1, kExitParse = 2, kExitValidation = 3, kExitBudget = 4 };

struct SceneResult {
    nlohmann::json report;
    int exit_code = kExitOk;
    /// (task name, DOT text) for every dot task that ran.
    std::vector<std::pair<std::string, std::string>> dots;
};

/// Resolves every definition of the scene, then runs its tasks in order (or
/// only the named one). Errors end the run and are recorded in the report.
SceneResult run_scene(const nlohmann::json& scene, const std::optional<std::string>& only_task = std::nullopt);
/// As run_scene, but parses the text first (exit 2 on malformed JSON).
SceneResult run_scene_text(const std::string& text, const std::optional<std::string>& only_task = std::nullopt);

/// Canonical text of a report: sorted keys, two-space indent, trailing newline.
std::string dump_report(const nlohmann::json& report);

}  // namespace locus
