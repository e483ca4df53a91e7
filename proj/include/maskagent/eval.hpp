#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "maskagent/mask.hpp"
#include "maskagent/policy.hpp"
#include "maskagent/segmenter.hpp"

namespace maskagent {

struct MaskPair {
    BitMask pred;
    BitMask gt;
};

// Cumulative IoU: summed intersections over summed unions.
double ciou(std::span<const MaskPair> pairs);
// Mean of per-pair IoU.
double miou(std::span<const MaskPair> pairs);

struct NocResult {
    int clicks = 0;
    bool reached = false;
    bool operator==(const NocResult&) const = default;
};

// Clicks the simulator needs (no discard rule) to reach target_iou, capped.
NocResult noc(const Task& task, const Segmenter& segmenter, double target_iou, int cap = 20);

// NoC per task, in order, spread over OpenMP threads.
std::vector<NocResult> noc_batch(const std::vector<Task>& tasks, const Segmenter& segmenter,
                                 double target_iou, int cap = 20);
std::vector<NocResult> noc_batch_serial(const std::vector<Task>& tasks, const Segmenter& segmenter,
                                        double target_iou, int cap = 20);

// click count -> number of tasks; unreached tasks are counted at the cap.
std::map<int, int> noc_histogram(const std::vector<NocResult>& results);

struct RegressionMetrics {
    double mae = 0.0;
    double mse = 0.0;
    double pearson = 0.0;
    double spearman = 0.0;
};

// Standard definitions over the values as given; Spearman uses average ranks
// for ties. Throws on length mismatch, fewer than two values, or zero variance.
RegressionMetrics regression_metrics(std::span<const double> pred, std::span<const double> truth);

struct FilterResult {
    std::vector<std::size_t> kept;
    std::vector<std::size_t> rejected;
};

struct ScoredMask {
    const Task* task;
    BitMask mask;
};

// Partitions (task, mask) pairs by PRM score >= threshold.
FilterResult filter_masks(const Prm& prm, std::span<const ScoredMask> items, double threshold);

}  // namespace maskagent
