#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "locus/dot.hpp"
#include "locus/scene.hpp"
#include "locus/serialize.hpp"

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::string join_dots(const std::vector<std::pair<std::string, std::string>>& dots) {
    std::string out;
    for (const auto& d : dots) out += d.second;
    return out;
}

// The single-construction subcommands wrap their input in a one-task scene so
// they share the scene runner's validation and exit codes.
int run_single(const json& scene, const std::string& dot_path, const std::string& out_path) {
    locus::SceneResult r = locus::run_scene(scene);
    if (r.exit_code != locus::kExitOk && r.exit_code != locus::kExitCheckFailed) {
        std::cerr << locus::dump_report(r.report);
        return r.exit_code;
    }
    const json& result = r.report.at("tasks").at(0).at("result");
    if (result.contains("space")) {
        spill(out_path, locus::dump_report(result.at("space")));
        if (!dot_path.empty()) spill(dot_path, locus::emit_dot(*locus::space_from_json(result.at("space"))));
    } else {
        spill(out_path, locus::dump_report(result));
    }
    return r.exit_code;
}

json parse_or_exit(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        std::cerr << "locus: input is not valid JSON\n";
        std::exit(locus::kExitParse);
    }
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"locus: localization of ringed spaces over finite spaces"};
    app.require_subcommand(1);

    std::string input, task, dot_path, report_path, sheaf_name;

    auto* run = app.add_subcommand("run", "Run a scene file and print its report");
    run->add_option("scene", input, "Scene JSON file, or - for stdin")->required();
    run->add_option("--task", task, "Run only the named task");
    run->add_option("--dot", dot_path, "Write DOT output of dot tasks here");
    run->add_option("--report", report_path, "Write the report here instead of stdout");

    auto* spec = app.add_subcommand("spec", "Spec of an algebra given as JSON");
    spec->add_option("algebra", input, "Algebra JSON file, or -")->required();
    spec->add_option("--dot", dot_path, "Also write the space as DOT");
    spec->add_option("--out", report_path, "Write the space JSON here");

    auto* gamma = app.add_subcommand("gamma", "Global sections of a space given as JSON");
    gamma->add_option("space", input, "Space JSON file, or -")->required();
    gamma->add_option("--out", report_path, "Write the algebra JSON here");

    auto* relspec = app.add_subcommand("relspec", "Relative Spec of a sheaf defined in a scene");
    relspec->add_option("scene", input, "Scene JSON file, or -")->required();
    relspec->add_option("--sheaf", sheaf_name, "Sheaf name in the scene")->required();
    relspec->add_option("--dot", dot_path, "Also write the space as DOT");
    relspec->add_option("--out", report_path, "Write the space JSON here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            locus::SceneResult r =
                locus::run_scene_text(slurp(input), task.empty() ? std::nullopt : std::optional<std::string>(task));
            spill(report_path, locus::dump_report(r.report));
            if (!dot_path.empty()) spill(dot_path, join_dots(r.dots));
            return r.exit_code;
        }
        if (*spec) {
            json scene = {{"algebras", {{"A", parse_or_exit(slurp(input))}}},
                          {"tasks", json::array({{{"op", "spec"}, {"algebra", "A"}}})}};
            return run_single(scene, dot_path, report_path);
        }
        if (*gamma) {
            json scene = {{"spaces", {{"X", parse_or_exit(slurp(input))}}},
                          {"tasks", json::array({{{"op", "gamma"}, {"space", "X"}}})}};
            return run_single(scene, "", report_path);
        }
        if (*relspec) {
            json scene = parse_or_exit(slurp(input));
            if (!scene.is_object()) {
                std::cerr << "locus: a scene is a JSON object\n";
                return locus::kExitParse;
            }
            scene["tasks"] = json::array({{{"op", "relspec"}, {"sheaf", sheaf_name}}});
            return run_single(scene, dot_path, report_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "locus: " << e.what() << "\n";
        return locus::kExitParse;
    }
    return 0;
}
