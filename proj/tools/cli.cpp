// berezin-cli: run numerical checks, parameter sweeps and calibrations.
//
// Exit codes: 0 all rows pass, 1 some row fails, 2 usage error,
// 3 an integration ran out of accuracy or budget.

#include "experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace berezin;
using namespace berezin::experiments;

namespace {

enum Exit { ok = 0, failed = 1, usage = 2, accuracy = 3 };

// key=value lines; blank lines and lines starting with '#' are skipped.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path);
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

// Remaining "--key value" or "--key=value" tokens become parameters.
std::map<std::string, std::string> parse_overrides(const std::vector<std::string>& args) {
    std::map<std::string, std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0) throw UsageError("unexpected argument '" + a + "'");
        std::string key = a.substr(2);
        auto eq = key.find('=');
        if (eq != std::string::npos) {
            out[key.substr(0, eq)] = key.substr(eq + 1);
        } else {
            if (i + 1 >= args.size()) throw UsageError("missing value for --" + key);
            out[key] = args[++i];
        }
    }
    return out;
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

std::string render(const json& reports, const std::string& format) {
    if (format == "json") return reports.dump(2) + "\n";
    std::string s = csv_header() + "\n";
    for (auto& r : reports) s += to_csv_rows(r);
    return s;
}

bool all_pass(const json& reports) {
    for (auto& r : reports)
        if (!r["pass"].get<bool>()) return false;
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for Berezin quantization of the upper half-plane"};
    app.require_subcommand(1);

    std::string format = "json", output, config, profile = "smoke", input, over;
    std::string exp_name;

    auto* check = app.add_subcommand("check", "run one experiment, or 'all'");
    check->add_option("experiment", exp_name, "experiment name or 'all'")->required();
    check->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    check->add_option("--output", output, "write to a file instead of stdout");
    check->add_option("--config", config, "key=value parameter file");
    check->add_option("--profile", profile)->check(CLI::IsMember({"smoke", "full"}));
    check->allow_extras();

    auto* sweep = app.add_subcommand("sweep", "run an experiment over a list of values");
    sweep->add_option("experiment", exp_name)->required();
    sweep->add_option("--over", over, "key=v1,v2,...")->required();
    sweep->add_option("--output", output);
    sweep->add_option("--config", config);
    sweep->add_option("--profile", profile)->check(CLI::IsMember({"smoke", "full"}));
    sweep->allow_extras();

    auto* calibrate = app.add_subcommand("calibrate", "calibrate a normalization constant");
    std::string target;
    calibrate->add_option("target", target)->required()->check(CLI::IsMember({"haar"}));
    calibrate->add_option("--output", output);

    auto* report = app.add_subcommand("report", "convert a saved report");
    report->add_option("--input", input)->required();
    report->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    report->add_option("--output", output);

    auto* list = app.add_subcommand("list", "list experiments and their parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        auto build_params = [&](const Experiment& e, const std::vector<std::string>& extras) {
            Params p = make_params(e);
            if (!config.empty())
                for (auto& [k, v] : read_config(config)) p.set(k, v);
            for (auto& [k, v] : parse_overrides(extras)) p.set(k, v);
            p.set("profile", profile);
            return p;
        };

        if (*list) {
            for (auto& e : registry()) {
                std::cout << e.name << "  " << e.summary << "\n";
                for (auto& [k, v] : make_params(e).values()) std::cout << "    --" << k << " " << v << "\n";
            }
            return ok;
        }

        if (*check) {
            json reports = json::array();
            if (exp_name == "all") {
                if (!check->remaining().empty()) throw UsageError("'check all' takes no experiment parameters");
                for (auto& e : registry()) {
                    std::cerr << "running " << e.name << "...\n";
                    reports.push_back(to_json(run(e, build_params(e, {}))));
                }
            } else {
                const Experiment& e = find_experiment(exp_name);
                reports.push_back(to_json(run(e, build_params(e, check->remaining()))));
            }
            write_output(render(reports, format), output);
            return all_pass(reports) ? ok : failed;
        }

        if (*sweep) {
            auto eq = over.find('=');
            if (eq == std::string::npos) throw UsageError("--over expects key=v1,v2,...");
            std::string key = over.substr(0, eq);
            std::vector<std::string> values;
            std::stringstream ss(over.substr(eq + 1));
            for (std::string v; std::getline(ss, v, ',');) values.push_back(v);
            if (values.empty()) throw UsageError("--over needs at least one value");
            const Experiment& e = find_experiment(exp_name);
            std::string csv = key + "," + csv_header() + "\n";
            bool pass = true;
            for (auto& v : values) {
                Params p = build_params(e, sweep->remaining());
                p.set(key, v);
                json r = to_json(run(e, p));
                pass = pass && r["pass"].get<bool>();
                std::stringstream rows(to_csv_rows(r));
                for (std::string line; std::getline(rows, line);) csv += csv_escape(v) + "," + line + "\n";
            }
            write_output(csv, output);
            return pass ? ok : failed;
        }

        if (*calibrate) {
            HaarChart chart = calibrate_haar_kappa(1e-6);
            json j = {{"schema_version", 1},
                      {"target", "haar"},
                      {"kappa", chart.kappa},
                      {"frozen_kappa", HaarChart::frozen_kappa},
                      {"relative_difference",
                       std::abs(chart.kappa - HaarChart::frozen_kappa) / HaarChart::frozen_kappa}};
            write_output(j.dump(2) + "\n", output);
            return ok;
        }

        if (*report) {
            std::ifstream in(input);
            if (!in) throw UsageError("cannot open " + input);
            json j = json::parse(in);
            if (!j.is_array()) j = json::array({j});
            for (auto& r : j)
                if (!r.contains("schema_version") || r["schema_version"].get<int>() != 1)
                    throw UsageError("unsupported report schema");
            write_output(render(j, format), output);
            return all_pass(j) ? ok : failed;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed report: " << e.what() << "\n";
        return usage;
    } catch (const AccuracyError& e) {
        std::cerr << "accuracy error: " << e.what() << " (estimate " << e.error_estimate << " after " << e.evaluations
                  << " evaluations)\n";
        return accuracy;
    } catch (const BudgetError& e) {
        std::cerr << "budget exhausted: " << e.what() << " after " << e.evaluations << " evaluations\n";
        return accuracy;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return accuracy;
    }
    return usage;
}
