#include "twostage/bundle.hpp"

#include <fstream>

#include "twostage/json_io.hpp"

namespace twostage {

bool Bundle::all_ok() const {
    for (const auto& c : cells)
        if (!c.report) return false;
    return true;
}

RngSeed cell_seed(RngSeed master, std::size_t dataset_index, Method m) {
    return derive(master, {dataset_index, static_cast<std::uint64_t>(m)});
}

std::string sanitize_name(std::string_view name) {
    std::string out;
    for (char ch : name) {
        const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                          (ch >= '0' && ch <= '9') || ch == '-' || ch == '.';
        out += keep ? ch : '_';
    }
    return out;
}

std::string ttest_csv(std::span<const EvalReport> reports) {
    std::string out = "dataset,method_a,method_b,t,df,p_value,significant\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        for (std::size_t j = i + 1; j < reports.size(); ++j) {
            const auto& a = reports[i];
            const auto& b = reports[j];
            if (a.dataset != b.dataset) continue;
            const auto t = t_test(a.entropies, b.entropies);
            out += a.dataset + ',' + a.method + ',' + b.method + ',' + format_double(t.t_statistic) +
                   ',' + format_double(t.degrees_of_freedom) + ',' + format_double(t.p_value) +
                   ',' + (t.significant ? "1" : "0") + '\n';
        }
    }
    return out;
}

std::string ci_csv(std::span<const EvalReport> reports) {
    std::string out = "method,mean,lo,hi\n";
    for (const auto& r : reports) {
        out += r.method + ',' + format_double(r.mean) + ',' + format_double(r.ci_low) + ',' +
               format_double(r.ci_high) + '\n';
    }
    return out;
}

Bundle run_matrix(const ExperimentConfig& config) {
    config.validate();
    const RngSeed master{config.seed};
    Bundle bundle;

    std::vector<Dataset> datasets;
    for (std::size_t d = 0; d < config.datasets.size(); ++d) {
        datasets.push_back(resolve_dataset(config.datasets[d], derive(master, {0xda7aULL, d})));
        if (!datasets.back().has_labels()) {
            throw ConfigError("run.datasets: '" + config.datasets[d] + "' has no labels");
        }
    }

    ExperimentOptions opt;
    opt.runs = config.runs;
    opt.k_folds = config.k_folds;
    opt.nc = config.nc;
    opt.config = config.pipeline;

    for (std::size_t d = 0; d < datasets.size(); ++d) {
        for (Method m : config.methods) {
            CellResult cell;
            cell.dataset = config.datasets[d];
            cell.method = m;
            try {
                EvalReport r = run_experiment(m, datasets[d], opt, cell_seed(master, d, m));
                r.dataset = cell.dataset;
                cell.report = std::move(r);
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            bundle.cells.push_back(std::move(cell));
        }
    }

    std::vector<EvalReport> ok;
    json reports = json::array();
    std::string failures = "dataset,method,error\n";
    bundle.timing_csv = "dataset,method,run,seconds\n";
    for (const auto& cell : bundle.cells) {
        if (!cell.report) {
            std::string msg = cell.error;
            for (char& ch : msg)
                if (ch == ',' || ch == '\n') ch = ';';
            failures += cell.dataset + ',' + std::string(to_string(cell.method)) + ',' + msg + '\n';
            continue;
        }
        ok.push_back(*cell.report);
        json j = *cell.report;
        j.erase("times_seconds");
        reports.push_back(std::move(j));
        const auto& times = cell.report->times_seconds;
        for (std::size_t i = 0; i < times.size(); ++i) {
            bundle.timing_csv += cell.dataset + ',' + cell.report->method + ',' +
                                 std::to_string(i) + ',' + format_double(times[i]) + '\n';
        }
    }

    bundle.files["config.ini"] = config_to_ini(config);
    bundle.files["table.csv"] = table_to_csv(ok);
    bundle.files["ttest.csv"] = ttest_csv(ok);
    bundle.files["failures.csv"] = failures;
    bundle.files["reports.json"] = reports.dump(2) + "\n";
    for (const auto& name : config.datasets) {
        std::vector<EvalReport> rows;
        for (const auto& r : ok)
            if (r.dataset == name) rows.push_back(r);
        bundle.files["ci_" + sanitize_name(name) + ".csv"] = ci_csv(rows);
    }
    return bundle;
}

void write_bundle(const Bundle& bundle, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto put = [&](const std::string& name, const std::string& text) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        out << text;
    };
    for (const auto& [name, text] : bundle.files) put(name, text);
    put("timing.csv", bundle.timing_csv);
}

}  // namespace twostage
