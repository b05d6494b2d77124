#include "stumpscope/json_io.hpp"

#include "stumpscope/error.hpp"

#include <algorithm>

namespace stumpscope {
namespace {

json pair_json(const ClassPair& p) { return json::array({p(0), p(1)}); }
json pair_json(const ClassCounts& c) { return json::array({c(0), c(1)}); }

ClassPair class_pair(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }
ClassCounts class_counts(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

json fidelity_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  json out = json::object();
  for (const auto p : kPrecisionGrid) out[to_string(p)] = row(precision_slot(p));
  return out;
}

json side_json(Side s) { return std::string(to_string(s)); }

json grid_rows(const std::vector<SampleGridRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"sample", r.sample}, {"side", side_json(r.side)}, {"p_gt", r.p_gt}, {"gt", r.gt}});
  }
  return out;
}

}  // namespace

json to_json(Precision p) {
  if (p == Precision::Full) return "full";
  return static_cast<int>(p);
}

Precision precision_from_json(const json& j) {
  if (j.is_string()) return parse_precision(j.get<std::string>());
  if (j.is_number_integer()) {
    const int d = j.get<int>();
    if (d >= 1 && d <= 4) return static_cast<Precision>(d);
  }
  throw Error(ErrorCode::InvalidPrecision, "precision must be 1, 2, 3, 4 or \"full\"");
}

json to_json(const DecisionStump& s) {
  return {{"feature", s.feature},
          {"threshold", s.threshold},
          {"p_left", pair_json(s.p_left)},
          {"p_right", pair_json(s.p_right)},
          {"weight", s.weight},
          {"counts_left", pair_json(s.counts_left)},
          {"counts_right", pair_json(s.counts_right)},
          {"degenerate", s.degenerate}};
}

DecisionStump stump_from_json(const json& j) {
  DecisionStump s;
  s.feature = j.at("feature").get<Index>();
  s.threshold = j.at("threshold").get<double>();
  s.p_left = class_pair(j.at("p_left"));
  s.p_right = class_pair(j.at("p_right"));
  s.weight = j.at("weight").get<double>();
  s.counts_left = class_counts(j.at("counts_left"));
  s.counts_right = class_counts(j.at("counts_right"));
  s.degenerate = j.value("degenerate", false);
  return s;
}

json to_json(const SurrogateModel& m) {
  json stumps = json::array();
  for (const auto& s : m.stumps) stumps.push_back(to_json(s));
  return {{"n_estimators", m.n_estimators},
          {"complexity_index", m.complexity_index},
          {"precision", to_json(m.precision)},
          {"stumps", std::move(stumps)}};
}

SurrogateModel model_from_json(const json& j) {
  SurrogateModel m;
  m.n_estimators = j.at("n_estimators").get<int>();
  m.complexity_index = j.at("complexity_index").get<int>();
  m.precision = precision_from_json(j.at("precision"));
  for (const auto& s : j.at("stumps")) m.stumps.push_back(stump_from_json(s));
  return m;
}

json to_json(const EditRecord& r) {
  return {{"stump", r.stump},
          {"old_threshold", r.old_threshold},
          {"new_threshold", r.new_threshold},
          {"leaves", std::string(to_string(r.leaves))},
          {"timestamp", r.timestamp}};
}

EditRecord edit_record_from_json(const json& j) {
  EditRecord r;
  r.stump = j.at("stump").get<Index>();
  r.old_threshold = j.at("old_threshold").get<double>();
  r.new_threshold = j.at("new_threshold").get<double>();
  const auto leaves = j.value("leaves", std::string("refit"));
  if (leaves != "refit" && leaves != "frozen") {
    throw Error(ErrorCode::InvalidDocument, "edit leaves must be 'refit' or 'frozen'");
  }
  r.leaves = leaves == "refit" ? LeafMode::Refit : LeafMode::Frozen;
  r.timestamp = j.at("timestamp").get<std::uint64_t>();
  return r;
}

json to_json(const LeafState& l) {
  return {{"p_left", pair_json(l.p_left)},
          {"p_right", pair_json(l.p_right)},
          {"counts_left", pair_json(l.counts_left)},
          {"counts_right", pair_json(l.counts_right)},
          {"degenerate", l.degenerate}};
}

json to_json(const EditImpact& impact) {
  json moved = json::array();
  for (const auto& m : impact.moved) {
    moved.push_back({{"sample", m.sample}, {"from", side_json(m.from)}, {"to", side_json(m.to)}});
  }
  return {{"stump", impact.stump},
          {"old_threshold", impact.old_threshold},
          {"new_threshold", impact.new_threshold},
          {"moved_samples", std::move(moved)},
          {"fidelity_before", impact.fidelity_before},
          {"fidelity_after", impact.fidelity_after},
          {"leaves_before", to_json(impact.leaves_before)},
          {"leaves_after", to_json(impact.leaves_after)},
          {"gini_before", impact.gini_before},
          {"gini_after", impact.gini_after}};
}

json to_json(const FeatureSummary& summary) {
  json segments = json::array();
  for (const auto& s : summary.segments) {
    segments.push_back({{"lo", s.lo},
                        {"hi", s.hi},
                        {"top_class", s.top_class},
                        {"top_value", s.top_value},
                        {"bottom_value", s.bottom_value}});
  }
  return {{"feature", summary.feature},
          {"stumps", summary.stumps},
          {"boundaries", summary.boundaries},
          {"segments", std::move(segments)}};
}

json to_json(const FeatureScore& score) {
  return {{"feature", score.feature}, {"score", score.score}};
}

json to_json(const StumpRank& rank) {
  return {{"stump", rank.stump}, {"gini", rank.gini}, {"performance", rank.performance}};
}

json to_json(const SampleGrid& grid) {
  return {{"left", grid_rows(grid.left)}, {"right", grid_rows(grid.right)}};
}

json to_json(const std::vector<HistogramBin>& bins) {
  json out = json::array();
  for (const auto& b : bins) {
    out.push_back({{"lo", b.lo}, {"hi", b.hi}, {"counts", pair_json(b.counts)}});
  }
  return out;
}

json to_json(const TestExplanation& row) {
  json contributions = json::array();
  for (const auto& c : row.contributions) {
    contributions.push_back(
        {{"feature", c.feature}, {"value", c.value}, {"percent", c.percent}, {"toward", c.toward}});
  }
  return {{"index", row.sample},
          {"gt", row.gt},
          {"pred", row.surrogate_pred},
          {"target_pred", row.target_pred ? json(*row.target_pred) : json(nullptr)},
          {"scores", pair_json(row.scores)},
          {"margin", row.margin},
          {"contributions", std::move(contributions)}};
}

json to_json(const FlipResult& flip) {
  return {{"old_threshold", flip.old_threshold},
          {"threshold", flip.threshold},
          {"new_side", side_json(flip.new_side)},
          {"new_scores", pair_json(flip.new_scores)},
          {"new_pred", flip.new_pred}};
}

json layout_to_json(const Layout& layout, const std::vector<Side>& sides,
                    const std::vector<Trajectory>& trajectories) {
  json points = json::array();
  for (Index i = 0; i < layout.coords.rows(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    points.push_back(json::array({layout.coords(i, 0), layout.coords(i, 1),
                                  k < sides.size() ? side_json(sides[k]) : json(nullptr),
                                  k < trajectories.size() && trajectories[k].changed}));
  }
  return points;
}

json to_json(const LayoutUpdate& update) {
  json segments = json::array();
  for (const auto& t : update.trajectories) {
    segments.push_back(json::array({t.from(0), t.from(1), t.to(0), t.to(1), t.changed}));
  }
  return {{"method", std::string(to_string(update.layout.method))},
          {"id", update.layout.id},
          {"reference", update.layout.reference},
          {"points", layout_to_json(update.layout, update.sides, update.trajectories)},
          {"trajectories", std::move(segments)}};
}

json dataset_summary(const Dataset& ds, const Split& split) {
  const auto positives = static_cast<int>((ds.y.array() == 1).count());
  return {{"n_samples", ds.n_samples()},
          {"n_features", ds.n_features()},
          {"feature_names", ds.feature_names},
          {"class_names", ds.class_names},
          {"class_counts", json::array({ds.n_samples() - positives, positives})},
          {"split", {{"seed", split.seed},
                     {"ratio", split.ratio},
                     {"n_train", split.train_idx.size()},
                     {"n_test", split.test_idx.size()}}}};
}

json target_summary(const TargetPredictions& preds, const Labels& gt_train,
                    const Labels& gt_test) {
  const auto accuracy = [](const Labels& a, const Labels& b) {
    if (a.size() == 0) return 0.0;
    return static_cast<double>((a.array() == b.array()).count()) / static_cast<double>(a.size());
  };
  return {{"source", std::string(to_string(preds.source))},
          {"train_accuracy", accuracy(preds.train_pred, gt_train)},
          {"test_accuracy", accuracy(preds.test_pred, gt_test)},
          {"train_positive", (preds.train_pred.array() == 1).count()},
          {"test_positive", (preds.test_pred.array() == 1).count()}};
}

json sweep_model_document(const SweepResult& sweep, int complexity_index) {
  if (complexity_index < 1 || complexity_index > static_cast<int>(sweep.models.size())) {
    throw Error(ErrorCode::IndexOutOfRange, "complexity index out of range");
  }
  const auto m = static_cast<std::size_t>(complexity_index - 1);
  json uniqueness = json::array();
  for (const auto u : sweep.uniqueness[m]) uniqueness.push_back(std::string(to_string(u)));
  return {{"complexity_index", complexity_index},
          {"model", to_json(sweep.models[m])},
          {"fidelity", fidelity_row(sweep.fidelity.row(static_cast<Index>(m)))},
          {"best_precision", to_json(sweep.best_precision[m])},
          {"uniqueness", std::move(uniqueness)},
          {"performance", sweep.performance[m]}};
}

json sweep_document(const SweepResult& sweep) {
  json models = json::array();
  for (std::size_t m = 0; m < sweep.models.size(); ++m) {
    models.push_back(sweep_model_document(sweep, static_cast<int>(m) + 1));
  }
  return {{"schema_version", kSweepSchemaVersion},
          {"config", {{"iterations", sweep.config.iterations},
                      {"max_estimators", sweep.config.max_estimators},
                      {"seed", sweep.config.seed}}},
          {"default", {{"complexity_index", sweep.default_choice.complexity_index},
                       {"precision", to_json(sweep.default_choice.precision)}}},
          {"models", std::move(models)}};
}

json summary_document(const SurrogateModel& model, const TrainingData& data,
                      const std::vector<std::string>& feature_names) {
  const auto importance = feature_importance(model, data.X, data.gt);
  json importance_json = json::array();
  json features = json::array();
  for (const auto& score : importance) {
    json entry = to_json(score);
    const auto f = static_cast<std::size_t>(score.feature);
    entry["name"] = f < feature_names.size() ? feature_names[f] : std::to_string(f);
    importance_json.push_back(std::move(entry));
    const auto summary = summarize_feature(model, score.feature);
    if (!summary.stumps.empty()) features.push_back(to_json(summary));
  }
  const auto ranking = rank_stumps(model, data.X, data.gt);
  json ranking_json = json::array();
  for (const auto& r : ranking) ranking_json.push_back(to_json(r));
  json grids = json::array();
  for (std::size_t t = 0; t < model.stumps.size(); ++t) {
    json g = to_json(sample_grid(model.stumps[t], data.X, data.gt));
    g["stump"] = t;
    grids.push_back(std::move(g));
  }
  return {{"model", to_json(model)},
          {"importance", std::move(importance_json)},
          {"features", std::move(features)},
          {"ranking", std::move(ranking_json)},
          {"default_stump", ranking.empty() ? json(nullptr) : json(ranking.front().stump)},
          {"grids", std::move(grids)}};
}

json tests_document(const std::vector<TestExplanation>& rows, const Dataset& ds) {
  json out = json::array();
  for (const auto& r : rows) out.push_back(to_json(r));
  return {{"class_names", ds.class_names},
          {"feature_names", ds.feature_names},
          {"rows", std::move(out)}};
}

}  // namespace stumpscope
