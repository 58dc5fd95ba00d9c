#include "twostage/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "twostage/generators.hpp"

namespace twostage {

namespace {

std::string trimmed(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        out.push_back(trimmed(s.substr(pos, next == std::string_view::npos ? next : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

std::uint64_t to_u64(const std::string& field, std::string_view v) {
    const std::string s = trimmed(v);
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError(field + ": expected a non-negative integer, got '" + s + "'");
    }
    return out;
}

double to_double(const std::string& field, std::string_view v) {
    const std::string s = trimmed(v);
    double out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError(field + ": expected a number, got '" + s + "'");
    }
    return out;
}

struct Field {
    std::string section;
    std::string key;
    std::function<void(ExperimentConfig&, const std::string& path, std::string_view)> set;
    // Empty optional: the key is omitted from the canonical form.
    std::function<std::optional<std::string>(const ExperimentConfig&)> get;
};

template <class Member>
Field size_field(std::string section, std::string key, Member member) {
    return {section, key,
            [member](ExperimentConfig& c, const std::string& path, std::string_view v) {
                member(c) = static_cast<std::size_t>(to_u64(path, v));
            },
            [member](const ExperimentConfig& c) -> std::optional<std::string> {
                return std::to_string(member(c));
            }};
}

template <class Member>
Field real_field(std::string section, std::string key, Member member) {
    return {section, key,
            [member](ExperimentConfig& c, const std::string& path, std::string_view v) {
                member(c) = to_double(path, v);
            },
            [member](const ExperimentConfig& c) -> std::optional<std::string> {
                return format_double(member(c));
            }};
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
    return out;
}

const std::vector<Field>& fields() {
    using C = ExperimentConfig;
    static const std::vector<Field> table = {
        {"run", "seed",
         [](C& c, const std::string& p, std::string_view v) { c.seed = to_u64(p, v); },
         [](const C& c) -> std::optional<std::string> { return std::to_string(c.seed); }},
        size_field("run", "runs", [](auto& c) -> auto& { return c.runs; }),
        size_field("run", "folds", [](auto& c) -> auto& { return c.k_folds; }),
        {"run", "nc",
         [](C& c, const std::string& p, std::string_view v) {
             if (trimmed(v).empty() || trimmed(v) == "auto") {
                 c.nc.reset();
             } else {
                 c.nc = static_cast<std::size_t>(to_u64(p, v));
             }
         },
         [](const C& c) -> std::optional<std::string> {
             return c.nc ? std::to_string(*c.nc) : std::string("auto");
         }},
        {"run", "methods",
         [](C& c, const std::string& p, std::string_view v) {
             c.methods.clear();
             for (const auto& name : split(v, ',')) {
                 try {
                     c.methods.push_back(parse_method(name));
                 } catch (const std::invalid_argument& e) {
                     throw ConfigError(p + ": " + e.what());
                 }
             }
         },
         [](const C& c) -> std::optional<std::string> {
             std::vector<std::string> names;
             for (auto m : c.methods) names.emplace_back(to_string(m));
             return join(names);
         }},
        {"run", "datasets",
         [](C& c, const std::string&, std::string_view v) { c.datasets = split(v, ','); },
         [](const C& c) -> std::optional<std::string> { return join(c.datasets); }},

        size_field("kmeans", "restarts", [](auto& c) -> auto& { return c.pipeline.kmeans_restarts; }),
        size_field("kmeans", "max_iter", [](auto& c) -> auto& { return c.pipeline.kmeans_max_iter; }),
        {"kmeans", "seeding",
         [](C& c, const std::string& p, std::string_view v) {
             const auto s = trimmed(v);
             if (s == "plusplus") {
                 c.pipeline.kmeans_seeding = KMeansSeeding::plusplus;
             } else if (s == "random") {
                 c.pipeline.kmeans_seeding = KMeansSeeding::random;
             } else {
                 throw ConfigError(p + ": expected plusplus or random, got '" + s + "'");
             }
         },
         [](const C& c) -> std::optional<std::string> {
             return c.pipeline.kmeans_seeding == KMeansSeeding::plusplus ? "plusplus" : "random";
         }},

        size_field("som", "rows", [](auto& c) -> auto& { return c.pipeline.som.rows; }),
        size_field("som", "cols", [](auto& c) -> auto& { return c.pipeline.som.cols; }),
        real_field("som", "alpha", [](auto& c) -> auto& { return c.pipeline.som.alpha; }),
        real_field("som", "alpha_decay", [](auto& c) -> auto& { return c.pipeline.som.alpha_decay; }),
        real_field("som", "radius", [](auto& c) -> auto& { return c.pipeline.som.sigma_start; }),
        real_field("som", "radius_end", [](auto& c) -> auto& { return c.pipeline.som.sigma_end; }),
        size_field("som", "epochs_rough", [](auto& c) -> auto& { return c.pipeline.som.epochs_rough; }),
        size_field("som", "epochs_fine", [](auto& c) -> auto& { return c.pipeline.som.epochs_fine; }),

        size_field("soinn", "lambda", [](auto& c) -> auto& { return c.pipeline.soinn.lambda; }),
        size_field("soinn", "age_dead", [](auto& c) -> auto& { return c.pipeline.soinn.age_dead; }),
        size_field("soinn", "lt_passes", [](auto& c) -> auto& { return c.pipeline.soinn.lt_passes; }),
        {"soinn", "lt",
         [](C& c, const std::string& p, std::string_view v) {
             if (trimmed(v).empty() || trimmed(v) == "auto") {
                 c.pipeline.soinn.lt.reset();
             } else {
                 c.pipeline.soinn.lt = static_cast<std::size_t>(to_u64(p, v));
             }
         },
         [](const C& c) -> std::optional<std::string> {
             return c.pipeline.soinn.lt ? std::to_string(*c.pipeline.soinn.lt) : std::string("auto");
         }},
        {"soinn", "threshold",
         [](C& c, const std::string& p, std::string_view v) {
             if (trimmed(v).empty() || trimmed(v) == "auto") {
                 c.pipeline.soinn.second_layer_threshold.reset();
             } else {
                 c.pipeline.soinn.second_layer_threshold = to_double(p, v);
             }
         },
         [](const C& c) -> std::optional<std::string> {
             const auto& t = c.pipeline.soinn.second_layer_threshold;
             return t ? format_double(*t) : std::string("auto");
         }},
        real_field("soinn", "bridge_fence", [](auto& c) -> auto& { return c.pipeline.soinn.bridge_fence; }),

        real_field("ak", "alpha", [](auto& c) -> auto& { return c.pipeline.ak.alpha; }),
        real_field("ak", "beta", [](auto& c) -> auto& { return c.pipeline.ak.beta; }),
        real_field("ak", "rho", [](auto& c) -> auto& { return c.pipeline.ak.rho; }),
        real_field("ak", "q", [](auto& c) -> auto& { return c.pipeline.ak.q; }),
        size_field("ak", "iterations", [](auto& c) -> auto& { return c.pipeline.ak.n_iter; }),
        size_field("ak", "ants", [](auto& c) -> auto& { return c.pipeline.ak.n_ants; }),
        real_field("ak", "perturb", [](auto& c) -> auto& { return c.pipeline.ak.perturb_strength; }),
        real_field("ak", "tau0", [](auto& c) -> auto& { return c.pipeline.ak.tau0; }),

        {"asca", "epsilon",
         [](C& c, const std::string& p, std::string_view v) {
             const auto s = trimmed(v);
             if (s == "per_decision") {
                 c.pipeline.asca.epsilon_mode = EpsilonMode::per_decision;
             } else if (s == "per_run") {
                 c.pipeline.asca.epsilon_mode = EpsilonMode::per_run;
             } else {
                 throw ConfigError(p + ": expected per_decision or per_run, got '" + s + "'");
             }
         },
         [](const C& c) -> std::optional<std::string> {
             return c.pipeline.asca.epsilon_mode == EpsilonMode::per_decision ? "per_decision"
                                                                              : "per_run";
         }},
        real_field("asca", "theta", [](auto& c) -> auto& { return c.pipeline.asca.theta; }),
        size_field("asca", "max_rounds", [](auto& c) -> auto& { return c.pipeline.asca.max_rounds; }),
    };
    return table;
}

const Field* find_field(std::string_view section, std::string_view key) {
    for (const auto& f : fields())
        if (f.section == section && f.key == key) return &f;
    return nullptr;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (methods.empty()) throw ConfigError("run.methods: at least one method required");
    if (datasets.empty()) throw ConfigError("run.datasets: at least one dataset required");
    for (const auto& d : datasets)
        if (d.empty()) throw ConfigError("run.datasets: empty dataset entry");
    if (runs < 2) throw ConfigError("run.runs: must be >= 2");
    if (k_folds < 2) throw ConfigError("run.folds: must be >= 2");
    if (nc && *nc == 0) throw ConfigError("run.nc: must be >= 1");
    const auto check = [](const char* section, auto&& fn) {
        try {
            fn();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string(section) + ": " + e.what());
        }
    };
    if (pipeline.kmeans_restarts == 0) throw ConfigError("kmeans.restarts: must be >= 1");
    if (pipeline.kmeans_max_iter == 0) throw ConfigError("kmeans.max_iter: must be >= 1");
    if (pipeline.som.rows == 0 || pipeline.som.cols == 0) {
        throw ConfigError("som.rows/som.cols: grid must be non-empty");
    }
    check("som", [&] {
        for (const auto& s : default_schedules(pipeline.som)) s.validate();
    });
    check("soinn", [&] { pipeline.soinn.validate(); });
    check("ak", [&] { pipeline.ak.validate(); });
    check("asca", [&] { pipeline.asca.validate(); });
}

void set_config_value(ExperimentConfig& c, std::string_view section, std::string_view key,
                      std::string_view value) {
    const std::string path = std::string(section) + "." + std::string(key);
    const Field* f = find_field(section, key);
    if (!f) throw ConfigError(path + ": unknown key");
    f->set(c, path, value);
}

ExperimentConfig parse_config(std::string_view text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
    }
    ExperimentConfig c;
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigError(section + ": key outside of a section");
        for (const auto& [key, node] : body) {
            set_config_value(c, section, key, node.get_value<std::string>());
        }
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_ini(const ExperimentConfig& c) {
    std::string out;
    std::string current;
    for (const auto& f : fields()) {
        auto v = f.get(c);
        if (!v) continue;
        if (f.section != current) {
            if (!current.empty()) out += '\n';
            out += "[" + f.section + "]\n";
            current = f.section;
        }
        out += f.key + " = " + *v + "\n";
    }
    return out;
}

const std::vector<std::string>& generator_names() {
    static const std::vector<std::string> names = {"lines", "banana", "highleyman", "spherical",
                                                   "simple"};
    return names;
}

Dataset generate_dataset(std::string_view name, const std::map<std::string, std::string>& params,
                         RngSeed seed) {
    const std::string gen(name);
    std::map<std::string, std::string> left = params;
    const auto take_size = [&](const std::string& key, std::size_t fallback) {
        auto it = left.find(key);
        if (it == left.end()) return fallback;
        const auto v = static_cast<std::size_t>(to_u64(gen + "." + key, it->second));
        left.erase(it);
        return v;
    };
    const auto take_real = [&](const std::string& key, double fallback) {
        auto it = left.find(key);
        if (it == left.end()) return fallback;
        const auto v = to_double(gen + "." + key, it->second);
        left.erase(it);
        return v;
    };
    if (left.count("seed")) {
        seed = RngSeed{to_u64(gen + ".seed", left["seed"])};
        left.erase("seed");
    }

    Dataset ds;
    if (gen == "lines") {
        const auto n = take_size("n", 1000);
        const auto segments = take_size("segments", 10);
        if (segments == 0 || n < segments) throw ConfigError("lines: need n >= segments >= 1");
        ds = gen_lines(n, segments, seed);
    } else if (gen == "banana") {
        const auto n = take_size("n", 500);
        const auto s = take_real("s", 1.0);
        if (n == 0 || !(s > 0)) throw ConfigError("banana: need n >= 1 and s > 0");
        ds = gen_banana(n, s, seed);
    } else if (gen == "highleyman") {
        const auto n = take_size("n", 500);
        if (n == 0) throw ConfigError("highleyman: need n >= 1");
        ds = gen_highleyman(n, seed);
    } else if (gen == "spherical") {
        const auto n = take_size("n", 500);
        const auto u = take_real("u", 2.0);
        if (n == 0) throw ConfigError("spherical: need n >= 1");
        ds = gen_spherical(n, u, seed);
    } else if (gen == "simple") {
        const auto n = take_size("n", 500);
        const auto d = take_real("d", 2.0);
        if (n == 0 || d < 0) throw ConfigError("simple: need n >= 1 and d >= 0");
        ds = gen_simple(n, d, seed);
    } else {
        throw ConfigError("unknown generator '" + gen + "'; valid generators: " +
                          join(generator_names()));
    }
    if (!left.empty()) {
        throw ConfigError(gen + "." + left.begin()->first + ": unknown generator parameter");
    }
    return ds;
}

namespace {

bool numeric(std::string_view cell) {
    const std::string s = trimmed(cell);
    double v;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Dataset resolve_dataset(std::string_view spec, RngSeed seed) {
    const std::string s = trimmed(spec);
    if (s.size() >= 4 && s.compare(s.size() - 4, 4, ".csv") == 0) {
        std::ifstream in(s, std::ios::binary);
        if (!in) throw ConfigError("dataset file not found: " + s);
        std::ostringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();
        const auto first_line = text.substr(0, text.find('\n'));
        const auto cells = split(first_line, ',');
        CsvOptions opt;
        opt.has_header = !numeric(cells.front());
        opt.label_column = cells.size() - 1;
        Dataset ds = parse_csv(text, opt);
        ds.name = std::filesystem::path(s).stem().string();
        return ds;
    }
    auto parts = split(s, ':');
    std::map<std::string, std::string> params;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto eq = parts[i].find('=');
        if (eq == std::string::npos) {
            throw ConfigError("dataset '" + s + "': expected key=value, got '" + parts[i] + "'");
        }
        params[trimmed(parts[i].substr(0, eq))] = trimmed(parts[i].substr(eq + 1));
    }
    Dataset ds = generate_dataset(parts.front(), params, seed);
    ds.name = s;
    return ds;
}

}  // namespace twostage
