#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "spintex/scenario.hpp"
#include "spintex/threading.hpp"

namespace fs = std::filesystem;
using spintex::Json;

namespace {

constexpr const char* version_string = "spintex 0.1.0";

// exit codes: 0 ok, 2 config error, 3 engine error, 4 comparison failure
constexpr int exit_config_error = 2;
constexpr int exit_engine_error = 3;
constexpr int exit_compare_failure = 4;

fs::path resolve_out_dir(const std::string& out_flag, const Json& config) {
    fs::path dir;
    if (!out_flag.empty()) {
        dir = out_flag;
    } else {
        std::string name = config.at("scenario").get<std::string>() + "-out";
        if (const char* root = std::getenv("SPINTEX_OUT_ROOT"))
            dir = fs::path(root) / name;
        else
            dir = name;
    }
    return dir;
}

int cmd_run(const std::string& config_path, const std::string& out_flag, long long seed_override,
            int threads) {
    Json config;
    try {
        config = Json::parse(spintex::read_text_file(config_path));
    } catch (const std::exception& e) {
        std::cerr << "config parse error: " << e.what() << "\n";
        return exit_config_error;
    }
    if (seed_override >= 0) config["seed"] = static_cast<std::uint64_t>(seed_override);
    spintex::set_thread_budget(threads);

    spintex::ValidationReport report = spintex::validate_config(config);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    if (!report.ok()) {
        for (const auto& e : report.errors) std::cerr << "error: " << e << "\n";
        return exit_config_error;
    }

    const auto t0 = std::chrono::steady_clock::now();
    spintex::ScenarioResult result;
    try {
        result = spintex::run_scenario(config);
    } catch (const std::exception& e) {
        std::cerr << "engine error: " << e.what() << "\n";
        return exit_engine_error;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    try {
        fs::path dir = resolve_out_dir(out_flag, config);
        fs::create_directories(dir);
        Json manifest;
        manifest["version"] = version_string;
        manifest["config"] = config;
        manifest["seed"] = config.contains("seed") ? config.at("seed").get<std::uint64_t>() : 0;
        manifest["wall_time_s"] = wall;
        manifest["csv_schema"] = "v1: t,observable,index,value (17 significant digits)";
        Json files = Json::array();
        for (const auto& [name, content] : result.files) {
            spintex::write_text_file((dir / name).string(), content);
            files.push_back(name);
        }
        manifest["files"] = files;
        spintex::write_text_file((dir / "manifest.json").string(), manifest.dump(2));
        std::cout << dir.string() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return exit_engine_error;
    }
    return 0;
}

int cmd_validate(const std::string& config_path) {
    Json config;
    try {
        config = Json::parse(spintex::read_text_file(config_path));
    } catch (const std::exception& e) {
        std::cerr << "config parse error: " << e.what() << "\n";
        return exit_config_error;
    }
    spintex::ValidationReport report = spintex::validate_config(config);
    for (const auto& w : report.warnings) std::cout << "warning: " << w << "\n";
    for (const auto& e : report.errors) std::cout << "error: " << e << "\n";
    if (!report.ok()) return exit_config_error;
    std::cout << "ok\n";
    return 0;
}

struct SeriesDiff {
    double max_dev = 0.0;
    double mean_dev = 0.0;
    std::size_t n = 0;
};

int cmd_compare(const std::string& dir_a, const std::string& dir_b, double tol_max,
                double tol_tzc) {
    using spintex::TimeSeriesRecord;
    TimeSeriesRecord a, b;
    Json sum_a, sum_b;
    try {
        a = spintex::record_from_csv(spintex::read_text_file((fs::path(dir_a) / "series.csv").string()));
        b = spintex::record_from_csv(spintex::read_text_file((fs::path(dir_b) / "series.csv").string()));
        const fs::path sa = fs::path(dir_a) / "summary.json";
        const fs::path sb = fs::path(dir_b) / "summary.json";
        if (fs::exists(sa)) sum_a = Json::parse(spintex::read_text_file(sa.string()));
        if (fs::exists(sb)) sum_b = Json::parse(spintex::read_text_file(sb.string()));
    } catch (const std::exception& e) {
        std::cerr << "compare: " << e.what() << "\n";
        return exit_config_error;
    }

    if (a.times.size() != b.times.size() || a.channels.size() != b.channels.size()) {
        std::cerr << "compare: schema mismatch (" << a.times.size() << " vs " << b.times.size()
                  << " samples, " << a.channels.size() << " vs " << b.channels.size()
                  << " channels)\n";
        return exit_config_error;
    }

    bool fail = false;
    Json channels = Json::array();
    for (const auto& ca : a.channels) {
        const auto* cb = b.find(ca.id, ca.index);
        if (!cb || cb->values.size() != ca.values.size()) {
            std::cerr << "compare: channel " << ca.id << "[" << ca.index << "] missing or misaligned\n";
            return exit_config_error;
        }
        SeriesDiff d;
        for (std::size_t i = 0; i < ca.values.size(); ++i) {
            const double dev = std::abs(ca.values[i] - cb->values[i]);
            d.max_dev = std::max(d.max_dev, dev);
            d.mean_dev += dev;
            ++d.n;
        }
        if (d.n) d.mean_dev /= d.n;
        Json c;
        c["id"] = ca.id;
        c["index"] = ca.index;
        c["max_dev"] = d.max_dev;
        c["mean_dev"] = d.mean_dev;
        channels.push_back(c);
        std::cout << ca.id << "[" << ca.index << "]: max " << d.max_dev << " mean " << d.mean_dev
                  << "\n";
        if (tol_max >= 0.0 && d.max_dev > tol_max) fail = true;
    }
    if (sum_a.contains("t_zc") && sum_b.contains("t_zc") && sum_a["t_zc"].is_number() &&
        sum_b["t_zc"].is_number()) {
        const double dzc = std::abs(sum_a["t_zc"].get<double>() - sum_b["t_zc"].get<double>());
        std::cout << "t_zc delta: " << dzc << "\n";
        if (tol_tzc >= 0.0 && dzc > tol_tzc) fail = true;
    }
    if (fail) {
        std::cout << "comparison FAILED against tolerances\n";
        return exit_compare_failure;
    }
    std::cout << "comparison ok\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Floquet-engineered spin texture simulations"};
    app.set_version_flag("--version", version_string);
    app.require_subcommand(1);

    std::string config_path, out_dir;
    long long seed_override = -1;
    int threads = 1;

    auto* run = app.add_subcommand("run", "run a scenario config and write a result bundle");
    run->add_option("--config", config_path, "scenario config (JSON)")->required();
    run->add_option("--out", out_dir, "output directory (default: <scenario>-out)");
    run->add_option("--seed-override", seed_override, "override the config seed");
    run->add_option("--threads", threads, "worker thread budget");

    auto* validate = app.add_subcommand("validate", "check a config without running");
    validate->add_option("--config", config_path, "scenario config (JSON)")->required();

    std::string dir_a, dir_b;
    double tol_max = -1.0, tol_tzc = -1.0;
    auto* compare = app.add_subcommand("compare", "diff two result bundles");
    compare->add_option("a", dir_a, "bundle A directory")->required();
    compare->add_option("b", dir_b, "bundle B directory")->required();
    compare->add_option("--tol-max", tol_max, "fail when any channel max deviation exceeds this");
    compare->add_option("--tol-tzc", tol_tzc, "fail when |t_zc(A) - t_zc(B)| exceeds this");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path, out_dir, seed_override, threads);
    if (validate->parsed()) return cmd_validate(config_path);
    if (compare->parsed()) return cmd_compare(dir_a, dir_b, tol_max, tol_tzc);
    return 0;
}
