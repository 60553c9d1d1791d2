#pragma once

#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

#include "cmdseer/cooccurrence.hpp"
#include "cmdseer/embedding.hpp"
#include "cmdseer/kb.hpp"
#include "cmdseer/normalize.hpp"

namespace cmdseer::emb {

struct GloveConfig {
    int dim = 50;
    int epochs = 50;
    double learning_rate = 0.05;
    double x_max = 100.0;
    double alpha = 0.75;
    std::uint64_t seed = 42;
};

struct JointConfig {
    double lambda = 1.0;        // attraction weight on knowledge-base pairs
    bool weight_by_score = false;
};

// Knowledge-base pairs resolved to vocab ids; unresolvable pairs are dropped
// and counted.
struct KbPairs {
    std::vector<std::tuple<int, int, double>> pairs;  // (p, q, score), p < q, sorted
    std::size_t dropped = 0;
};

KbPairs resolve_kb(const kb::KnowledgeBase& kb, const norm::Vocab& vocab);

// Dense center/context vectors and biases; also the parameter vector the
// finite-difference tests perturb.
struct GloveParams {
    int vocab_size = 0;
    int dim = 0;
    std::vector<double> w, wt;  // row-major V x d
    std::vector<double> b, bt;  // V

    static GloveParams random(int vocab_size, int dim, std::uint64_t seed);
    std::span<double> row_w(int i) { return {w.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)}; }
    std::span<double> row_wt(int i) { return {wt.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)}; }
    std::span<const double> row_w(int i) const { return {w.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)}; }
    std::span<const double> row_wt(int i) const { return {wt.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)}; }
};

// f(x) = min(1, (x / x_max)^alpha)
double glove_weight(double x, double x_max, double alpha);

// J = sum_{X_ij > 0} f(X_ij) (w_i . wt_j + b_i + bt_j - ln X_ij)^2
double glove_objective(const GloveParams& p, const CoocMatrix& cooc, double x_max, double alpha);
GloveParams glove_objective_gradient(const GloveParams& p, const CoocMatrix& cooc, double x_max,
                                     double alpha);

// lambda * sum_{(p,q)} s_pq ||w_p - w_q||^2 over center vectors
double kb_penalty(const GloveParams& p, const KbPairs& kb, const JointConfig& cfg);
GloveParams kb_penalty_gradient(const GloveParams& p, const KbPairs& kb, const JointConfig& cfg);

// AdaGrad over shuffled nonzero entries; final vector_i = w_i + wt_i.
// Per-epoch loss (the objective incl. penalty) goes to epoch_loss when given.
EmbeddingMatrix train_glove(const CoocMatrix& cooc, const GloveConfig& cfg,
                            std::vector<double>* epoch_loss = nullptr);

// One pass over co-occurrence entries then one pass over KB pairs per epoch,
// under shared AdaGrad state. With lambda = 0 this follows exactly the same
// trajectory as train_glove for the same seed.
EmbeddingMatrix train_joint(const CoocMatrix& cooc, const KbPairs& kb, const JointConfig& joint,
                            const GloveConfig& cfg, std::vector<double>* epoch_loss = nullptr);

}  // namespace cmdseer::emb
