#include "maskagent/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "maskagent/env.hpp"
#include "maskagent/error.hpp"
#include "maskagent/expert.hpp"

namespace maskagent {

double ciou(std::span<const MaskPair> pairs) {
    if (pairs.empty()) throw InvalidArgument("ciou of an empty list");
    std::size_t inter = 0;
    std::size_t uni = 0;
    for (const auto& p : pairs) {
        if (!p.pred.same_shape(p.gt)) throw DimensionMismatch("ciou: prediction and ground truth differ in size");
        inter += (p.pred & p.gt).count();
        uni += (p.pred | p.gt).count();
    }
    if (uni == 0) throw InvalidArgument("ciou undefined: every prediction and ground truth is empty");
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double miou(std::span<const MaskPair> pairs) {
    if (pairs.empty()) throw InvalidArgument("miou of an empty list");
    double sum = 0.0;
    for (const auto& p : pairs) sum += iou(p.pred, p.gt);
    return sum / static_cast<double>(pairs.size());
}

NocResult noc(const Task& task, const Segmenter& segmenter, double target_iou, int cap) {
    if (!(target_iou > 0.0 && target_iou <= 1.0)) throw InvalidArgument("target IoU must be in (0,1]");
    if (cap < 1) throw InvalidArgument("click cap must be >= 1");
    EnvConfig config{cap, 1.0, 0.0};
    EpisodeState state = reset(task, InitEmpty{}, segmenter);
    int clicks = 0;
    while (clicks < cap) {
        const auto click = next_click(state.mask, task.target);
        if (!click) break;
        state = step(state, *click, task, segmenter, config).state;
        state.finished = false;
        ++clicks;
        if (reward(state.mask, task.target) >= target_iou) return {clicks, true};
    }
    const bool reached = reward(state.mask, task.target) >= target_iou;
    return {reached ? clicks : cap, reached};
}

std::vector<NocResult> noc_batch_serial(const std::vector<Task>& tasks, const Segmenter& segmenter,
                                        double target_iou, int cap) {
    std::vector<NocResult> out;
    out.reserve(tasks.size());
    for (const auto& t : tasks) out.push_back(noc(t, segmenter, target_iou, cap));
    return out;
}

std::vector<NocResult> noc_batch(const std::vector<Task>& tasks, const Segmenter& segmenter,
                                 double target_iou, int cap) {
    std::vector<NocResult> out(tasks.size());
    std::vector<std::string> errors(tasks.size());
    const long n = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic) if (segmenter.shareable())
    for (long i = 0; i < n; ++i) {
        try {
            out[i] = noc(tasks[i], segmenter, target_iou, cap);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty()) throw Error("noc for " + tasks[i].id + ": " + errors[i]);
    return out;
}

std::map<int, int> noc_histogram(const std::vector<NocResult>& results) {
    std::map<int, int> hist;
    for (const auto& r : results) ++hist[r.clicks];
    return hist;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) throw InvalidArgument("correlation undefined for zero-variance input");
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

RegressionMetrics regression_metrics(std::span<const double> pred, std::span<const double> truth) {
    if (pred.size() != truth.size()) throw DimensionMismatch("prediction and truth lengths differ");
    if (pred.size() < 2) throw InvalidArgument("regression metrics need at least two values");
    RegressionMetrics m;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - truth[i];
        m.mae += std::abs(d);
        m.mse += d * d;
    }
    m.mae /= static_cast<double>(pred.size());
    m.mse /= static_cast<double>(pred.size());
    m.pearson = pearson(pred, truth);
    const auto rp = average_ranks(pred);
    const auto rt = average_ranks(truth);
    m.spearman = pearson(rp, rt);
    return m;
}

FilterResult filter_masks(const Prm& prm, std::span<const ScoredMask> items, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw InvalidArgument("filter threshold must be in [0,1]");
    FilterResult out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const double s = prm.score(*items[i].task, items[i].mask);
        (s >= threshold ? out.kept : out.rejected).push_back(i);
    }
    return out;
}

}  // namespace maskagent
