#pragma once

// Shared steps of the batch and service front ends.

#include "stumpscope/dataset.hpp"
#include "stumpscope/editing.hpp"
#include "stumpscope/sweep.hpp"
#include "stumpscope/target.hpp"

#include <cstdint>
#include <memory>
#include <string>

namespace stumpscope {

struct DatasetSpec {
  std::string label_column = "class";
  std::string positive_label;
  double split_ratio = 0.8;
  std::uint64_t split_seed = 0;
};

struct TargetSpec {
  TargetSource source = TargetSource::Builtin;
  std::uint64_t seed = 0;
  std::string predictions_csv;  // ExternalFile only
};

/// A dataset, its split and the target labels a sweep is fit against.
struct Workspace {
  Dataset dataset;
  Split split;
  TargetPredictions target;
  std::shared_ptr<const TrainingData> training;
};

struct LoadedDataset {
  Dataset dataset;
  Split split;
};

LoadedDataset load_dataset(const std::string& csv, const DatasetSpec& spec);

TargetPredictions build_target(const Dataset& ds, const Split& split,
                               const TargetSpec& spec);

std::shared_ptr<const TrainingData> training_data(const Dataset& ds,
                                                  const Split& split,
                                                  const TargetPredictions& target);

std::shared_ptr<const Workspace> make_workspace(Dataset ds, Split split,
                                                TargetPredictions target);

SweepResult sweep_workspace(const Workspace& ws, const SweepConfig& config);

}  // namespace stumpscope
