#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cmdseer/lstm.hpp"

namespace cmdseer::eval {

// Chronological split: the first floor(ratio * N) examples train, the rest
// test. No shuffling.
struct HoldoutSplit {
    std::size_t train_end = 0;  // train = [0, train_end), test = [train_end, n)
    std::size_t n = 0;
};
HoldoutSplit holdout_split(std::size_t n, double ratio = 0.9);

// Contiguous folds covering [0, n), sizes differing by at most one.
struct FoldSpec {
    int k = 0;
    std::vector<std::pair<std::size_t, std::size_t>> val_ranges;  // [begin, end)
};
FoldSpec kfold_split(std::size_t n, int k);

// 1-based index of the validation-loss minimum; ties take the earliest epoch.
int select_optimal_epoch(const model::TrainHistory& history);

// Baselines over a stream of command-name ids (line-initial tokens only).
// Scored positions are t in [max(1, begin), end); accuracy = correct/scored.
double baseline_mrc(const std::vector<int>& stream);
double baseline_mfc(const std::vector<int>& stream, const norm::Vocab& vocab);
double baseline_mrc_range(const std::vector<int>& stream, std::size_t begin, std::size_t end);
double baseline_mfc_range(const std::vector<int>& stream, const norm::Vocab& vocab,
                          std::size_t begin, std::size_t end);

struct EvalRow {
    int batch_size = 0;  // 0 marks a baseline row
    int optimal_epoch = 1;
    double test_acc = 0.0;  // percent
    double cv10 = 0.0;
    double cv5 = 0.0;
    std::string error;  // set when this grid row failed
};

struct EvalReport {
    std::string method;
    std::vector<EvalRow> rows;
    EvalRow maxima() const;  // column maxima over rows without errors
};

struct GridConfig {
    std::vector<int> batch_sizes{300, 500, 1000, 2000, 3000, 4000, 5000};
    std::vector<int> folds{10, 5};
    int epoch_cap = 30;
    double holdout_ratio = 0.9;
    bool score_line_starts_only = false;
};

struct CvResult {
    std::vector<double> fold_accuracy;
    double mean_accuracy = 0.0;
};

// Trains one model per fold for `epochs` epochs and averages validation
// accuracy; accuracy unit follows line_starts_only.
CvResult kfold_cv(const emb::EmbeddingMatrix& embeddings, const model::PairSet& pairs, int k,
                  int epochs, const model::ModelConfig& cfg, bool line_starts_only = false);

// For each batch size: train under the epoch cap validating on the held-out
// test block, pick the optimal epoch, report test accuracy at that epoch and
// k-fold CV retrained to that epoch. Failures land in the row, the grid
// continues.
EvalReport run_grid(const std::string& method, const emb::EmbeddingMatrix& embeddings,
                    const model::PairSet& pairs, const model::ModelConfig& base,
                    const GridConfig& grid);

std::string format_report(const EvalReport& report);  // human-readable table
void write_reports_tsv(const std::vector<EvalReport>& reports, const std::filesystem::path& file);
void write_reports_json(const std::vector<EvalReport>& reports, const std::filesystem::path& file);

}  // namespace cmdseer::eval
