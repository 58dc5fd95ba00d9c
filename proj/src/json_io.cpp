#include "twostage/json_io.hpp"

#include <stdexcept>
#include <string>

namespace twostage {

void to_json(json& j, const Matrix& m) {
    j = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        j.push_back(std::vector<double>(row.begin(), row.end()));
    }
}

void from_json(const json& j, Matrix& m) {
    if (!j.is_array()) throw std::invalid_argument("matrix: expected an array of rows");
    std::vector<std::vector<double>> rows = j.get<std::vector<std::vector<double>>>();
    if (rows.empty()) {
        m = Matrix();
        return;
    }
    m = Matrix::from_rows(rows);
}

void to_json(json& j, const KMeansModel& m) {
    j = {{"centroids", m.centroids},
         {"assignment", m.assignment},
         {"sse_history", m.sse_history},
         {"iterations", m.iterations}};
}

void from_json(const json& j, KMeansModel& m) {
    j.at("centroids").get_to(m.centroids);
    j.at("assignment").get_to(m.assignment);
    j.at("sse_history").get_to(m.sse_history);
    j.at("iterations").get_to(m.iterations);
}

void to_json(json& j, const SomGrid& g) {
    j = {{"rows", g.rows},       {"cols", g.cols},           {"hexagonal", g.hexagonal},
         {"weights", g.weights}, {"positions", g.positions}};
}

void from_json(const json& j, SomGrid& g) {
    j.at("rows").get_to(g.rows);
    j.at("cols").get_to(g.cols);
    j.at("hexagonal").get_to(g.hexagonal);
    j.at("weights").get_to(g.weights);
    j.at("positions").get_to(g.positions);
}

void to_json(json& j, const SoinnGraph& g) {
    json nodes = json::array();
    for (const auto& n : g.nodes) {
        json jn = {{"W", n.weight}, {"E", n.local_error}, {"M", n.density}, {"R", n.error_radius}};
        jn["G"] = n.group_label ? json(*n.group_label) : json(nullptr);
        nodes.push_back(std::move(jn));
    }
    json edges = json::array();
    for (const auto& e : g.edges()) edges.push_back({{"a", e.a}, {"b", e.b}, {"age", e.age}});
    j = {{"layer", g.layer}, {"group_count", g.group_count}, {"nodes", nodes}, {"edges", edges}};
    j["constant_threshold"] =
        g.constant_threshold ? json(*g.constant_threshold) : json(nullptr);
}

void from_json(const json& j, SoinnGraph& g) {
    g = SoinnGraph();
    j.at("layer").get_to(g.layer);
    j.at("group_count").get_to(g.group_count);
    if (!j.at("constant_threshold").is_null()) g.constant_threshold = j["constant_threshold"].get<double>();
    for (const auto& jn : j.at("nodes")) {
        const auto w = jn.at("W").get<std::vector<double>>();
        const std::size_t id = g.add_node(w);
        auto& n = g.nodes[id];
        jn.at("E").get_to(n.local_error);
        jn.at("M").get_to(n.density);
        jn.at("R").get_to(n.error_radius);
        if (!jn.at("G").is_null()) n.group_label = jn["G"].get<std::size_t>();
    }
    for (const auto& je : j.at("edges")) {
        const auto a = je.at("a").get<std::size_t>();
        const auto b = je.at("b").get<std::size_t>();
        if (a >= g.node_count() || b >= g.node_count()) {
            throw std::invalid_argument("soinn graph: edge references a missing node");
        }
        g.connect(a, b);
        g.set_edge_age(a, b, je.at("age").get<std::size_t>());
    }
}

void to_json(json& j, const AkState& s) {
    j = {{"centroids", s.centroids},
         {"pheromone", s.pheromone},
         {"tau0", s.tau0},
         {"assignment", s.assignment},
         {"twcv", s.twcv},
         {"best_twcv", s.best_twcv},
         {"best_centroids", s.best_centroids},
         {"best_assignment", s.best_assignment},
         {"best_history", s.best_history},
         {"iterations", s.iterations},
         {"perturbations", s.perturbations}};
}

void from_json(const json& j, AkState& s) {
    j.at("centroids").get_to(s.centroids);
    j.at("pheromone").get_to(s.pheromone);
    j.at("tau0").get_to(s.tau0);
    j.at("assignment").get_to(s.assignment);
    j.at("twcv").get_to(s.twcv);
    j.at("best_twcv").get_to(s.best_twcv);
    j.at("best_centroids").get_to(s.best_centroids);
    j.at("best_assignment").get_to(s.best_assignment);
    j.at("best_history").get_to(s.best_history);
    j.at("iterations").get_to(s.iterations);
    j.at("perturbations").get_to(s.perturbations);
}

void to_json(json& j, const AscaClustering& c) {
    // Removed objects are written as -1.
    json assignment = json::array();
    for (auto a : c.assignment) assignment.push_back(a == kRemoved ? json(-1) : json(a));
    json trace = json::array();
    for (auto s : c.trace) trace.push_back(std::string(to_string(s)));
    j = {{"assignment", assignment},
         {"centers", c.centers},
         {"twcv_history", c.twcv_history},
         {"trace", trace}};
}

void from_json(const json& j, AscaClustering& c) {
    c.assignment.clear();
    for (const auto& a : j.at("assignment")) {
        c.assignment.push_back(a.get<long long>() < 0 ? kRemoved : a.get<std::size_t>());
    }
    j.at("centers").get_to(c.centers);
    j.at("twcv_history").get_to(c.twcv_history);
    c.trace.clear();
    for (const auto& s : j.at("trace")) {
        const auto name = s.get<std::string>();
        bool found = false;
        for (auto step : {AscaStep::divide, AscaStep::agglomerate_objects, AscaStep::agglomerate,
                          AscaStep::remove}) {
            if (to_string(step) == name) {
                c.trace.push_back(step);
                found = true;
            }
        }
        if (!found) throw std::invalid_argument("asca: unknown step '" + name + "'");
    }
}

void to_json(json& j, const PrototypeSet& p) {
    j = {{"source", std::string(to_string(p.source))}, {"prototypes", p.prototypes}};
    j["majority_labels"] = p.majority_labels ? json(*p.majority_labels) : json(nullptr);
    j["suggested_k"] = p.suggested_k ? json(*p.suggested_k) : json(nullptr);
}

void from_json(const json& j, PrototypeSet& p) {
    const auto src = j.at("source").get<std::string>();
    bool found = false;
    for (auto s : {PrototypeSource::raw, PrototypeSource::som, PrototypeSource::asca,
                   PrototypeSource::soinn}) {
        if (to_string(s) == src) {
            p.source = s;
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("prototype set: unknown source '" + src + "'");
    j.at("prototypes").get_to(p.prototypes);
    p.majority_labels.reset();
    p.suggested_k.reset();
    if (!j.at("majority_labels").is_null()) {
        p.majority_labels = j["majority_labels"].get<std::vector<std::size_t>>();
    }
    if (!j.at("suggested_k").is_null()) p.suggested_k = j["suggested_k"].get<std::size_t>();
}

void to_json(json& j, const PipelineModel& m) {
    j = {{"method", std::string(to_string(m.method))},
         {"nc", m.nc},
         {"stage1", m.stage1},
         {"final_centroids", m.final_centroids},
         {"proto_to_cluster", m.proto_to_cluster}};
}

void from_json(const json& j, PipelineModel& m) {
    m.method = parse_method(j.at("method").get<std::string>());
    j.at("nc").get_to(m.nc);
    j.at("stage1").get_to(m.stage1);
    j.at("final_centroids").get_to(m.final_centroids);
    j.at("proto_to_cluster").get_to(m.proto_to_cluster);
    for (auto c : m.proto_to_cluster)
        if (c >= m.nc) throw std::invalid_argument("pipeline model: cluster id out of range");
}

void to_json(json& j, const EvalReport& r) {
    j = {{"method", r.method}, {"dataset", r.dataset},  {"entropies", r.entropies},
         {"min", r.min},       {"max", r.max},          {"mean", r.mean},
         {"std", r.std},       {"ci_low", r.ci_low},    {"ci_high", r.ci_high},
         {"times_seconds", r.times_seconds}};
}

void from_json(const json& j, EvalReport& r) {
    j.at("method").get_to(r.method);
    j.at("dataset").get_to(r.dataset);
    j.at("entropies").get_to(r.entropies);
    j.at("min").get_to(r.min);
    j.at("max").get_to(r.max);
    j.at("mean").get_to(r.mean);
    j.at("std").get_to(r.std);
    j.at("ci_low").get_to(r.ci_low);
    j.at("ci_high").get_to(r.ci_high);
    r.times_seconds = j.value("times_seconds", std::vector<double>{});
}

void to_json(json& j, const TTestResult& t) {
    j = {{"t", t.t_statistic},
         {"df", t.degrees_of_freedom},
         {"p_value", t.p_value},
         {"significant", t.significant}};
}

}  // namespace twostage
