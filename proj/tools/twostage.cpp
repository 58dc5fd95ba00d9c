// twostage: generate datasets, run one experiment, run a method x dataset
// matrix, or print a bundle's tables.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage/config error.
// TWOSTAGE_OUT_DIR sets the default output directory.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "twostage/bundle.hpp"
#include "twostage/config.hpp"
#include "twostage/json_io.hpp"

namespace fs = std::filesystem;
using namespace twostage;

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;

fs::path out_dir() {
    const char* env = std::getenv("TWOSTAGE_OUT_DIR");
    return env && *env ? fs::path(env) : fs::path(".");
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

// Flags that map one-to-one onto config keys; given flags override the file.
struct Override {
    const char* flag;
    const char* section;
    const char* key;
    const char* help;
};

constexpr Override kOverrides[] = {
    {"--seed", "run", "seed", "master seed"},
    {"--runs", "run", "runs", "independent runs"},
    {"--folds", "run", "folds", "cross-validation folds"},
    {"--nc", "run", "nc", "final cluster count (default: class count / SOINN groups)"},
    {"--kmeans-restarts", "kmeans", "restarts", "best-of-R K-means"},
    {"--kmeans-seeding", "kmeans", "seeding", "plusplus | random"},
    {"--som-rows", "som", "rows", "SOM grid rows"},
    {"--som-cols", "som", "cols", "SOM grid columns"},
    {"--som-alpha", "som", "alpha", "initial learning rate"},
    {"--som-radius", "som", "radius", "initial neighbourhood radius"},
    {"--som-epochs-rough", "som", "epochs_rough", "rough-phase epochs"},
    {"--som-epochs-fine", "som", "epochs_fine", "fine-phase epochs"},
    {"--soinn-lambda", "soinn", "lambda", "insertion/pruning period"},
    {"--soinn-age-dead", "soinn", "age_dead", "maximum edge age"},
    {"--soinn-lt", "soinn", "lt", "presentations per layer (default: lt_passes * N)"},
    {"--ak-iterations", "ak", "iterations", "Ant K-means iterations"},
    {"--ak-ants", "ak", "ants", "ants per iteration"},
    {"--asca-theta", "asca", "theta", "ASCA outlier scale"},
};

struct ConfigFlags {
    std::string config_path;
    std::map<std::string, std::string> values;  // flag -> value

    void attach(CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "INI config file");
        for (const auto& o : kOverrides) cmd->add_option(o.flag, values[o.flag], o.help);
    }

    ExperimentConfig resolve(CLI::App* cmd) const {
        ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        for (const auto& o : kOverrides) {
            if (cmd->count(o.flag)) set_config_value(c, o.section, o.key, values.at(o.flag));
        }
        return c;
    }
};

void print_summary(const EvalReport& r) {
    std::cout << std::left << std::setw(22) << r.dataset << std::setw(8) << r.method << std::right
              << std::fixed << std::setprecision(4) << " min " << r.min << "  max " << r.max
              << "  mean " << r.mean << "  std " << r.std << "  ci [" << r.ci_low << ", "
              << r.ci_high << "]\n";
    std::cout.unsetf(std::ios::floatfield);
}

int cmd_generate(const std::string& name, const std::map<std::string, std::string>& params,
                 const std::string& out) {
    Dataset ds = generate_dataset(name, params, RngSeed{1});
    const fs::path path = out.empty() ? out_dir() / (name + ".csv") : fs::path(out);
    write_file(path, to_csv(ds));
    std::cout << "N=" << ds.size() << " A=" << ds.dim() << " L=" << ds.n_classes() << " -> "
              << path.string() << "\n";
    return kOk;
}

int cmd_run(const ExperimentConfig& c, const std::string& out, const std::string& csv_out) {
    ExperimentConfig single = c;
    single.methods.resize(1);
    single.datasets.resize(1);
    Bundle b = run_matrix(single);
    const auto& cell = b.cells.front();
    if (!cell.report) {
        std::cerr << "error: " << cell.dataset << "/" << to_string(cell.method) << ": "
                  << cell.error << "\n";
        return kRuntime;
    }
    const fs::path path =
        out.empty() ? out_dir() / (sanitize_name(cell.dataset) + "_" +
                                   std::string(to_string(cell.method)) + ".json")
                    : fs::path(out);
    json j = *cell.report;
    j["config"] = config_to_ini(single);
    write_file(path, j.dump(2) + "\n");
    if (!csv_out.empty()) write_file(csv_out, table_to_csv(std::span(&*cell.report, 1)));
    print_summary(*cell.report);
    std::cout << "report -> " << path.string() << "\n";
    return kOk;
}

int cmd_matrix(const ExperimentConfig& c, const std::string& out) {
    if (c.methods.size() * c.datasets.size() < 2) {
        throw ConfigError("run.methods/run.datasets: a matrix needs at least two cells");
    }
    Bundle b = run_matrix(c);
    const fs::path dir = out.empty() ? out_dir() / "bundle" : fs::path(out);
    write_bundle(b, dir);
    for (const auto& cell : b.cells) {
        if (cell.report) {
            print_summary(*cell.report);
        } else {
            std::cerr << "cell failed: " << cell.dataset << "/" << to_string(cell.method) << ": "
                      << cell.error << "\n";
        }
    }
    std::cout << "bundle -> " << dir.string() << "\n";
    return b.all_ok() ? kOk : kRuntime;
}

int cmd_report(const std::string& in) {
    fs::path path(in);
    if (fs::is_directory(path)) path /= "reports.json";
    if (!fs::exists(path)) throw ConfigError("report: no such file " + path.string());
    std::vector<EvalReport> reports;
    if (path.extension() == ".csv") {
        reports = table_from_csv(read_file(path));
    } else {
        const json j = json::parse(read_file(path));
        if (j.is_array()) {
            reports = j.get<std::vector<EvalReport>>();
        } else {
            reports.push_back(j.get<EvalReport>());
        }
    }
    for (const auto& r : reports) print_summary(r);
    // table.csv carries summaries only; tests need the raw run vectors.
    const bool have_runs = std::all_of(reports.begin(), reports.end(),
                                       [](const EvalReport& r) { return r.entropies.size() >= 2; });
    if (reports.size() >= 2 && have_runs) {
        std::cout << "\npairwise Welch t-tests (alpha 0.05)\n" << ttest_csv(reports);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-stage clustering experiments"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "write a synthetic dataset as CSV");
    std::string gen_name, gen_out;
    std::map<std::string, std::string> gen_params;
    gen->add_option("name", gen_name, "lines | banana | highleyman | spherical | simple")->required();
    for (const char* key : {"n", "segments", "s", "u", "d", "seed"}) {
        gen->add_option(std::string("--") + key, gen_params[key]);
    }
    gen->add_option("-o,--out", gen_out, "output CSV (default $TWOSTAGE_OUT_DIR/<name>.csv)");

    auto* run = app.add_subcommand("run", "cross-validated experiment for one method and dataset");
    ConfigFlags run_flags;
    std::string run_method, run_dataset, run_out, run_csv;
    run_flags.attach(run);
    run->add_option("-m,--method", run_method,
                    "kmeans|som|asca|soinn|somk|somak|ascak|soinak");
    run->add_option("-d,--dataset", run_dataset, "generator spec or CSV path");
    run->add_option("-o,--out", run_out, "JSON report path");
    run->add_option("--csv", run_csv, "also write the table row as CSV");

    auto* mat = app.add_subcommand("matrix", "every method on every dataset, as a report bundle");
    ConfigFlags mat_flags;
    std::string mat_methods, mat_datasets, mat_out;
    mat_flags.attach(mat);
    mat->add_option("--methods", mat_methods, "comma-separated methods");
    mat->add_option("--datasets", mat_datasets, "comma-separated dataset specs");
    mat->add_option("-o,--out", mat_out, "bundle directory (default $TWOSTAGE_OUT_DIR/bundle)");

    auto* rep = app.add_subcommand("report", "print tables from a bundle, reports.json or table.csv");
    std::string rep_in;
    rep->add_option("input", rep_in)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (gen->parsed()) {
            std::map<std::string, std::string> given;
            for (const auto& [k, v] : gen_params)
                if (gen->count("--" + k)) given[k] = v;
            return cmd_generate(gen_name, given, gen_out);
        }
        if (run->parsed()) {
            ExperimentConfig c = run_flags.resolve(run);
            if (run->count("--method")) set_config_value(c, "run", "methods", run_method);
            if (run->count("--dataset")) set_config_value(c, "run", "datasets", run_dataset);
            c.validate();
            return cmd_run(c, run_out, run_csv);
        }
        if (mat->parsed()) {
            ExperimentConfig c = mat_flags.resolve(mat);
            if (mat->count("--methods")) set_config_value(c, "run", "methods", mat_methods);
            if (mat->count("--datasets")) set_config_value(c, "run", "datasets", mat_datasets);
            c.validate();
            return cmd_matrix(c, mat_out);
        }
        return cmd_report(rep_in);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const CsvError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
}
