#pragma once

// JSON encodings shared by the CLI and the HTTP service. Objects use
// nlohmann::json's sorted keys, so dumps are canonical.

#include "stumpscope/analysis.hpp"
#include "stumpscope/boosting.hpp"
#include "stumpscope/dataset.hpp"
#include "stumpscope/editing.hpp"
#include "stumpscope/explain.hpp"
#include "stumpscope/projection.hpp"
#include "stumpscope/sweep.hpp"
#include "stumpscope/target.hpp"

#include <nlohmann/json.hpp>

#include <vector>

namespace stumpscope {

using json = nlohmann::json;

inline constexpr int kSweepSchemaVersion = 1;

json to_json(Precision p);
Precision precision_from_json(const json& j);

json to_json(const DecisionStump& stump);
DecisionStump stump_from_json(const json& j);

json to_json(const SurrogateModel& model);
SurrogateModel model_from_json(const json& j);

json to_json(const EditRecord& record);
EditRecord edit_record_from_json(const json& j);

json to_json(const LeafState& leaves);
json to_json(const EditImpact& impact);
json to_json(const FeatureSummary& summary);
json to_json(const FeatureScore& score);
json to_json(const StumpRank& rank);
json to_json(const SampleGrid& grid);
json to_json(const std::vector<HistogramBin>& bins);
json to_json(const TestExplanation& row);
json to_json(const FlipResult& flip);

/// Array of [x, y, side, changed] per sample.
json layout_to_json(const Layout& layout, const std::vector<Side>& sides,
                    const std::vector<Trajectory>& trajectories);
json to_json(const LayoutUpdate& update);

json dataset_summary(const Dataset& ds, const Split& split);
json target_summary(const TargetPredictions& preds, const Labels& gt_train,
                    const Labels& gt_test);

/// The `sweep.json` document.
json sweep_document(const SweepResult& sweep);

/// One model of a sweep with its fidelity row and stump annotations.
json sweep_model_document(const SweepResult& sweep, int complexity_index);

/// Feature importance, per-feature segments (importance order), stump
/// ranking and sample grids of a model.
json summary_document(const SurrogateModel& model, const TrainingData& data,
                      const std::vector<std::string>& feature_names);

json tests_document(const std::vector<TestExplanation>& rows,
                    const Dataset& ds);

}  // namespace stumpscope
