#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cmdseer/embedding.hpp"
#include "cmdseer/normalize.hpp"

namespace cmdseer::model {

struct ModelConfig {
    int context_len = 5;
    int hidden1 = 100;
    int hidden2 = 100;
    double dropout = 0.1;
    double learning_rate = 0.1;  // as reported; 1e-3 is the conventional stable Adam rate
    int batch_size = 32;
    int max_epochs = 20;
    std::uint64_t seed = 42;
    bool embedding_trainable = true;
};

// Input and recurrent weights with bias, the four gates stacked [i; f; o; g].
struct LstmLayerParams {
    Eigen::MatrixXd Wx;  // 4h x in
    Eigen::MatrixXd Wh;  // 4h x h
    Eigen::VectorXd b;   // 4h

    int hidden() const { return static_cast<int>(Wh.cols()); }
    int input() const { return static_cast<int>(Wx.cols()); }
};

// Embedding -> LSTM (sequences) -> LSTM (sequences) -> flatten -> dense -> softmax
struct Model {
    Eigen::MatrixXd E;       // V x d
    LstmLayerParams layer1;  // d -> h1
    LstmLayerParams layer2;  // h1 -> h2
    Eigen::MatrixXd W_out;   // (L*h2) x V
    Eigen::VectorXd b_out;   // V
    ModelConfig config;

    int vocab_size() const { return static_cast<int>(E.rows()); }
    int embed_dim() const { return static_cast<int>(E.cols()); }
};

enum class Mode { Train, Infer };

struct TrainHistory {
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    std::vector<double> val_accuracy;
};

// Sliding windows of length L with stride 1, never crossing user streams.
struct PairSet {
    Eigen::MatrixXi contexts;              // L x N, one column per example
    std::vector<int> targets;              // N
    std::vector<std::uint8_t> line_start;  // 1 when the target begins a command line
    std::size_t skipped_streams = 0;       // streams shorter than L+1

    std::size_t size() const { return targets.size(); }
    int context_len() const { return static_cast<int>(contexts.rows()); }
    PairSet slice(std::size_t begin, std::size_t end) const;
    PairSet gather(std::span<const std::size_t> indices) const;
};

PairSet make_training_pairs(const std::vector<norm::TokenStream>& streams, int context_len);

// Parameters drawn deterministically from cfg.seed; embedding rows copied
// from the trained embedding matrix.
Model init_model(const emb::EmbeddingMatrix& embeddings, const ModelConfig& cfg);

struct Gradients {
    Eigen::MatrixXd E;
    LstmLayerParams layer1, layer2;
    Eigen::MatrixXd W_out;
    Eigen::VectorXd b_out;
};
Gradients zero_gradients(const Model& m);

// Mean cross-entropy over the batch; fills grads when non-null. In train
// mode with dropout > 0, inverted-scaling masks are drawn from rng.
double batch_loss(const Model& m, const Eigen::MatrixXi& contexts, std::span<const int> targets,
                  Mode mode, Gradients* grads = nullptr, std::mt19937_64* rng = nullptr);

// Probability vector over the vocabulary for one context of exactly L ids.
Eigen::VectorXd forward(const Model& m, std::span<const int> context, Mode mode = Mode::Infer,
                        std::mt19937_64* rng = nullptr);

// Adam over seeded shuffled mini-batches; per-epoch validation in infer mode.
TrainHistory train(Model& m, const PairSet& train_set, const PairSet& val_set,
                   const ModelConfig& cfg, bool val_line_starts_only = false);

struct EvalResult {
    double loss = 0.0;
    double accuracy = 0.0;
    std::size_t scored = 0;
};
EvalResult evaluate(const Model& m, const PairSet& pairs, bool line_starts_only = false);

struct Prediction {
    std::vector<std::pair<std::string, double>> items;  // probability desc, ties lexicographic
    bool padded = false;  // context was shorter than L and left-padded
};
Prediction predict_top_k(const Model& m, const norm::Vocab& vocab, std::span<const int> context,
                         int k, bool restrict_to_commands);

// Versioned little-endian binary container.
void save_model(const Model& m, const std::filesystem::path& file);
Model load_model(const std::filesystem::path& file, const norm::Vocab* vocab = nullptr);

}  // namespace cmdseer::model
