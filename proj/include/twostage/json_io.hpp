#pragma once
// JSON forms of the fitted models and reports (nlohmann ADL hooks).

#include <json.hpp>

#include "twostage/ant_kmeans.hpp"
#include "twostage/asca.hpp"
#include "twostage/eval.hpp"
#include "twostage/kmeans.hpp"
#include "twostage/matrix.hpp"
#include "twostage/pipeline.hpp"
#include "twostage/prototypes.hpp"
#include "twostage/soinn.hpp"
#include "twostage/som.hpp"

namespace twostage {

using json = nlohmann::json;

// Matrices are arrays of rows.
void to_json(json& j, const Matrix& m);
void from_json(const json& j, Matrix& m);

void to_json(json& j, const KMeansModel& m);
void from_json(const json& j, KMeansModel& m);

void to_json(json& j, const SomGrid& g);
void from_json(const json& j, SomGrid& g);

void to_json(json& j, const SoinnGraph& g);
void from_json(const json& j, SoinnGraph& g);

void to_json(json& j, const AkState& s);
void from_json(const json& j, AkState& s);

void to_json(json& j, const AscaClustering& c);
void from_json(const json& j, AscaClustering& c);

void to_json(json& j, const PrototypeSet& p);
void from_json(const json& j, PrototypeSet& p);

void to_json(json& j, const PipelineModel& m);
void from_json(const json& j, PipelineModel& m);

void to_json(json& j, const EvalReport& r);
void from_json(const json& j, EvalReport& r);

void to_json(json& j, const TTestResult& t);

}  // namespace twostage
