#include "stumpscope/pipeline.hpp"

#include <sstream>

namespace stumpscope {

LoadedDataset load_dataset(const std::string& csv, const DatasetSpec& spec) {
  std::istringstream in(csv);
  LoadedDataset out;
  out.dataset = load_csv(in, spec.label_column, spec.positive_label);
  out.split = stratified_split(out.dataset, spec.split_ratio, spec.split_seed);
  return out;
}

TargetPredictions build_target(const Dataset& ds, const Split& split, const TargetSpec& spec) {
  if (spec.source == TargetSource::ExternalFile) {
    std::istringstream in(spec.predictions_csv);
    return load_external_predictions(in, split);
  }
  return predictions_for_split(fit_builtin_target(ds, split, spec.seed), ds, split);
}

std::shared_ptr<const TrainingData> training_data(const Dataset& ds, const Split& split,
                                                  const TargetPredictions& target) {
  auto data = std::make_shared<TrainingData>();
  data->X = select_rows(ds.X, split.train_idx);
  data->gt = select_rows(ds.y, split.train_idx);
  data->target = target.train_pred;
  return data;
}

std::shared_ptr<const Workspace> make_workspace(Dataset ds, Split split,
                                                TargetPredictions target) {
  auto ws = std::make_shared<Workspace>();
  ws->training = training_data(ds, split, target);
  ws->dataset = std::move(ds);
  ws->split = std::move(split);
  ws->target = std::move(target);
  return ws;
}

SweepResult sweep_workspace(const Workspace& ws, const SweepConfig& config) {
  return run_sweep(ws.training->X, ws.training->target, ws.training->gt, config);
}

}  // namespace stumpscope
