#include "cmdseer/sgns.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace cmdseer::emb {
namespace {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

// ln sigma(x) = -softplus(-x), computed without overflow
double log_sigmoid(double x) {
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

}  // namespace

double sgns_term_loss(std::span<const double> center, std::span<const double> context,
                      const std::vector<std::vector<double>>& negatives) {
    double loss = -log_sigmoid(dot(center, context));
    for (const auto& n : negatives) loss -= log_sigmoid(-dot(center, n));
    return loss;
}

SgnsTermGrad sgns_term_gradient(std::span<const double> center, std::span<const double> context,
                                const std::vector<std::vector<double>>& negatives) {
    const std::size_t d = center.size();
    SgnsTermGrad g;
    g.center.assign(d, 0.0);
    g.context.assign(d, 0.0);

    // d(-ln sigma(x))/dx = sigma(x) - 1 for the positive term,
    // d(-ln sigma(-x))/dx = sigma(x) for each negative term
    double pos = sigmoid(dot(center, context)) - 1.0;
    for (std::size_t k = 0; k < d; ++k) {
        g.center[k] += pos * context[k];
        g.context[k] += pos * center[k];
    }
    for (const auto& n : negatives) {
        double neg = sigmoid(dot(center, n));
        std::vector<double> gn(d);
        for (std::size_t k = 0; k < d; ++k) {
            g.center[k] += neg * n[k];
            gn[k] = neg * center[k];
        }
        g.negatives.push_back(std::move(gn));
    }
    return g;
}

EmbeddingMatrix train_sgns(const std::vector<std::vector<int>>& streams, int vocab_size,
                           const SgnsConfig& cfg, std::vector<double>* epoch_loss) {
    bool any = std::any_of(streams.begin(), streams.end(),
                           [](const auto& s) { return !s.empty(); });
    if (!any) throw std::runtime_error("sgns training requires a non-empty stream");
    if (cfg.dim < 1 || cfg.window < 1 || cfg.negatives < 0)
        throw std::runtime_error("bad sgns config");

    const int d = cfg.dim;
    std::vector<double> w(static_cast<std::size_t>(vocab_size) * d);
    std::vector<double> wt(static_cast<std::size_t>(vocab_size) * d, 0.0);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> init(-0.5 / d, 0.5 / d);
    for (double& v : w) v = init(rng);

    // unigram^(3/4) cumulative table for noise draws
    std::vector<double> counts(vocab_size, 0.0);
    for (const auto& s : streams)
        for (int id : s) {
            if (id < 0 || id >= vocab_size) throw std::out_of_range("sgns stream id out of range");
            counts[id] += 1.0;
        }
    std::vector<double> cum(vocab_size, 0.0);
    double total = 0.0;
    for (int i = 0; i < vocab_size; ++i) {
        if (counts[i] > 0.0) total += std::pow(counts[i], 0.75);
        cum[i] = total;
    }
    std::uniform_real_distribution<double> unif(0.0, total);
    auto draw_noise = [&] {
        double u = unif(rng);
        auto it = std::upper_bound(cum.begin(), cum.end(), u);
        return static_cast<int>(std::min<std::ptrdiff_t>(it - cum.begin(), vocab_size - 1));
    };

    auto row = [d](std::vector<double>& m, int i) {
        return std::span<double>(m.data() + static_cast<std::size_t>(i) * d, d);
    };

    const double lr = cfg.learning_rate;
    std::vector<double> center_accum(d);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double loss = 0.0;
        for (const auto& stream : streams) {
            const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(stream.size());
            for (std::ptrdiff_t t = 0; t < n; ++t) {
                auto wc = row(w, stream[t]);
                std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, t - cfg.window);
                std::ptrdiff_t hi = std::min(n - 1, t + cfg.window);
                for (std::ptrdiff_t u = lo; u <= hi; ++u) {
                    if (u == t) continue;
                    int o = stream[u];
                    std::fill(center_accum.begin(), center_accum.end(), 0.0);

                    auto wo = row(wt, o);
                    double dp = dot(wc, wo);
                    loss -= log_sigmoid(dp);
                    double gpos = sigmoid(dp) - 1.0;
                    for (int k = 0; k < d; ++k) {
                        center_accum[k] += gpos * wo[k];
                        wo[k] -= lr * gpos * wc[k];
                    }
                    for (int neg = 0; neg < cfg.negatives; ++neg) {
                        int nid = draw_noise();
                        if (nid == o) continue;
                        auto wn = row(wt, nid);
                        double dn = dot(wc, wn);
                        loss -= log_sigmoid(-dn);
                        double gneg = sigmoid(dn);
                        for (int k = 0; k < d; ++k) {
                            center_accum[k] += gneg * wn[k];
                            wn[k] -= lr * gneg * wc[k];
                        }
                    }
                    for (int k = 0; k < d; ++k) wc[k] -= lr * center_accum[k];
                }
            }
        }
        if (!std::isfinite(loss))
            throw std::runtime_error("sgns training diverged: non-finite loss at epoch " +
                                     std::to_string(epoch + 1));
        if (epoch_loss) epoch_loss->push_back(loss);
    }

    EmbeddingMatrix emb;
    emb.vocab_size = vocab_size;
    emb.dim = d;
    emb.method = Method::Sgns;
    emb.data = std::move(w);
    return emb;
}

}  // namespace cmdseer::emb
