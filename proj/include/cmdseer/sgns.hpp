#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cmdseer/embedding.hpp"

namespace cmdseer::emb {

struct SgnsConfig {
    int dim = 50;
    int window = 15;   // matches the co-occurrence window
    int negatives = 5;
    int epochs = 5;
    double learning_rate = 0.025;
    std::uint64_t seed = 42;
};

// Minimized loss of one (center, context, negatives) term:
//   -ln sigma(w . c) - sum_n ln sigma(-(w . n))
double sgns_term_loss(std::span<const double> center, std::span<const double> context,
                      const std::vector<std::vector<double>>& negatives);

struct SgnsTermGrad {
    std::vector<double> center, context;
    std::vector<std::vector<double>> negatives;
};
SgnsTermGrad sgns_term_gradient(std::span<const double> center, std::span<const double> context,
                                const std::vector<std::vector<double>>& negatives);

// Skip-gram with negative sampling over per-user id streams; negatives are
// drawn from the unigram^(3/4) distribution of the streams themselves.
// Final vector = center matrix w.
EmbeddingMatrix train_sgns(const std::vector<std::vector<int>>& streams, int vocab_size,
                           const SgnsConfig& cfg, std::vector<double>* epoch_loss = nullptr);

}  // namespace cmdseer::emb
