#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace cmdseer::cli {

// One flat key=value namespace shared by every subcommand; flags override
// these values, which override the built-in defaults. '#' starts a comment.
// Unknown keys are rejected.
struct PipelineConfig {
    // paths
    std::string traces_dir;
    std::string man_dir;
    std::string artifact_dir = "artifacts";
    std::string aliases_file;

    // embedding training
    std::string method = "joint";
    int dim = 50;
    int window = 15;
    double lambda = 1.0;
    bool weight_kb_by_score = false;
    int negatives = 5;
    int embed_epochs = 25;
    double embed_lr = 0.05;
    double x_max = 100.0;
    double alpha = 0.75;
    int kb_k = 5;

    // sequence model
    int context_len = 5;
    int hidden1 = 100;
    int hidden2 = 100;
    double dropout = 0.1;
    double lr = 0.1;
    int batch_size = 512;
    int epochs = 20;

    // evaluation
    std::string grid = "300,500,1000,2000,3000,4000,5000";
    std::string folds = "10,5";
    int epoch_cap = 30;
    double holdout_ratio = 0.9;
    bool score_commands_only = false;

    // repl
    int suggestions = 5;

    std::uint64_t seed = 42;

    // derived artifact locations (overridable per flag)
    std::filesystem::path corpus_dir() const { return std::filesystem::path(artifact_dir) / "corpus"; }
    std::filesystem::path vocab_file() const { return std::filesystem::path(artifact_dir) / "vocab.txt"; }
    std::filesystem::path commands_file() const { return std::filesystem::path(artifact_dir) / "commands.txt"; }
    std::filesystem::path kb_file() const { return std::filesystem::path(artifact_dir) / "kb.txt"; }
};

// Throws on unknown keys, bad values, or an unreadable file.
PipelineConfig load_pipeline_config(const std::filesystem::path& file);

// Parses a "k1,k2,..." list of positive integers.
std::vector<int> parse_int_list(const std::string& csv);

}  // namespace cmdseer::cli
