#include "cmdseer/glove.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace cmdseer::emb {

KbPairs resolve_kb(const kb::KnowledgeBase& kb, const norm::Vocab& vocab) {
    KbPairs out;
    for (const auto& pair : kb.pairs) {
        int a = vocab.id_of(pair.a);
        int b = vocab.id_of(pair.b);
        if (a < 0 || b < 0) {
            ++out.dropped;
            continue;
        }
        if (a > b) std::swap(a, b);
        out.pairs.emplace_back(a, b, pair.score);
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

GloveParams GloveParams::random(int vocab_size, int dim, std::uint64_t seed) {
    GloveParams p;
    p.vocab_size = vocab_size;
    p.dim = dim;
    const std::size_t vd = static_cast<std::size_t>(vocab_size) * dim;
    p.w.resize(vd);
    p.wt.resize(vd);
    p.b.resize(vocab_size);
    p.bt.resize(vocab_size);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-0.5 / dim, 0.5 / dim);
    for (double& v : p.w) v = dist(rng);
    for (double& v : p.wt) v = dist(rng);
    for (double& v : p.b) v = dist(rng);
    for (double& v : p.bt) v = dist(rng);
    return p;
}

double glove_weight(double x, double x_max, double alpha) {
    return x >= x_max ? 1.0 : std::pow(x / x_max, alpha);
}

namespace {

GloveParams zeros_like(const GloveParams& p) {
    GloveParams g;
    g.vocab_size = p.vocab_size;
    g.dim = p.dim;
    g.w.assign(p.w.size(), 0.0);
    g.wt.assign(p.wt.size(), 0.0);
    g.b.assign(p.b.size(), 0.0);
    g.bt.assign(p.bt.size(), 0.0);
    return g;
}

double entry_diff(const GloveParams& p, int i, int j, double x) {
    auto wi = p.row_w(i);
    auto wj = p.row_wt(j);
    double dot = 0.0;
    for (int k = 0; k < p.dim; ++k) dot += wi[k] * wj[k];
    return dot + p.b[i] + p.bt[j] - std::log(x);
}

}  // namespace

double glove_objective(const GloveParams& p, const CoocMatrix& cooc, double x_max, double alpha) {
    double loss = 0.0;
    for (const auto& [i, j, x] : cooc.sorted_entries()) {
        double diff = entry_diff(p, i, j, x);
        loss += glove_weight(x, x_max, alpha) * diff * diff;
    }
    return loss;
}

GloveParams glove_objective_gradient(const GloveParams& p, const CoocMatrix& cooc, double x_max,
                                     double alpha) {
    GloveParams g = zeros_like(p);
    for (const auto& [i, j, x] : cooc.sorted_entries()) {
        double diff = entry_diff(p, i, j, x);
        double scale = 2.0 * glove_weight(x, x_max, alpha) * diff;
        auto wi = p.row_w(i);
        auto wj = p.row_wt(j);
        auto gi = g.row_w(i);
        auto gj = g.row_wt(j);
        for (int k = 0; k < p.dim; ++k) {
            gi[k] += scale * wj[k];
            gj[k] += scale * wi[k];
        }
        g.b[i] += scale;
        g.bt[j] += scale;
    }
    return g;
}

double kb_penalty(const GloveParams& p, const KbPairs& kb, const JointConfig& cfg) {
    double loss = 0.0;
    for (const auto& [a, b, score] : kb.pairs) {
        double coeff = cfg.lambda * (cfg.weight_by_score ? score : 1.0);
        auto wa = p.row_w(a);
        auto wb = p.row_w(b);
        double sq = 0.0;
        for (int k = 0; k < p.dim; ++k) {
            double d = wa[k] - wb[k];
            sq += d * d;
        }
        loss += coeff * sq;
    }
    return loss;
}

GloveParams kb_penalty_gradient(const GloveParams& p, const KbPairs& kb, const JointConfig& cfg) {
    GloveParams g = zeros_like(p);
    for (const auto& [a, b, score] : kb.pairs) {
        double coeff = cfg.lambda * (cfg.weight_by_score ? score : 1.0);
        auto wa = p.row_w(a);
        auto wb = p.row_w(b);
        auto ga = g.row_w(a);
        auto gb = g.row_w(b);
        for (int k = 0; k < p.dim; ++k) {
            double d = 2.0 * coeff * (wa[k] - wb[k]);
            ga[k] += d;
            gb[k] -= d;
        }
    }
    return g;
}

EmbeddingMatrix train_joint(const CoocMatrix& cooc, const KbPairs& kb, const JointConfig& joint,
                            const GloveConfig& cfg, std::vector<double>* epoch_loss) {
    if (cooc.empty()) throw std::runtime_error("glove training requires a non-empty co-occurrence matrix");
    if (cfg.dim < 1) throw std::runtime_error("embedding dimension must be >= 1");
    if (joint.lambda < 0.0) throw std::runtime_error("joint lambda must be >= 0");

    const int V = cooc.vocab_size();
    const int d = cfg.dim;
    GloveParams p = GloveParams::random(V, d, cfg.seed);
    GloveParams gsq = zeros_like(p);
    std::fill(gsq.w.begin(), gsq.w.end(), 1.0);
    std::fill(gsq.wt.begin(), gsq.wt.end(), 1.0);
    std::fill(gsq.b.begin(), gsq.b.end(), 1.0);
    std::fill(gsq.bt.begin(), gsq.bt.end(), 1.0);

    auto entries = cooc.sorted_entries();
    std::mt19937_64 rng(cfg.seed);
    const double lr = cfg.learning_rate;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(entries.begin(), entries.end(), rng);
        double loss = 0.0;

        std::size_t step = 0;
        for (const auto& [i, j, x] : entries) {
            double diff = entry_diff(p, i, j, x);
            if (!std::isfinite(diff))
                throw std::runtime_error(
                    "glove training diverged: non-finite update for entry (" + std::to_string(i) +
                    ", " + std::to_string(j) + ", X=" + std::to_string(x) + ") at epoch " +
                    std::to_string(epoch + 1) + ", step " + std::to_string(step));
            double fx = glove_weight(x, cfg.x_max, cfg.alpha);
            loss += fx * diff * diff;
            double scale = 2.0 * fx * diff;

            auto wi = p.row_w(i);
            auto wj = p.row_wt(j);
            auto si = gsq.row_w(i);
            auto sj = gsq.row_wt(j);
            for (int k = 0; k < d; ++k) {
                double gw = scale * wj[k];
                double gwt = scale * wi[k];
                double uw = lr * gw / std::sqrt(si[k]);
                double uwt = lr * gwt / std::sqrt(sj[k]);
                si[k] += gw * gw;
                sj[k] += gwt * gwt;
                wi[k] -= uw;
                wj[k] -= uwt;
            }
            double ub = lr * scale / std::sqrt(gsq.b[i]);
            double ubt = lr * scale / std::sqrt(gsq.bt[j]);
            gsq.b[i] += scale * scale;
            gsq.bt[j] += scale * scale;
            p.b[i] -= ub;
            p.bt[j] -= ubt;
            ++step;
        }

        // knowledge-base attraction pass, fixed pair order, shared AdaGrad state
        for (const auto& [a, c, score] : kb.pairs) {
            double coeff = joint.lambda * (joint.weight_by_score ? score : 1.0);
            auto wa = p.row_w(a);
            auto wc = p.row_w(c);
            auto sa = gsq.row_w(a);
            auto sc = gsq.row_w(c);
            for (int k = 0; k < d; ++k) {
                double dk = wa[k] - wc[k];
                loss += coeff * dk * dk;
                double ga = 2.0 * coeff * dk;
                double ua = lr * ga / std::sqrt(sa[k]);
                double uc = lr * (-ga) / std::sqrt(sc[k]);
                sa[k] += ga * ga;
                sc[k] += ga * ga;
                wa[k] -= ua;
                wc[k] -= uc;
            }
        }

        if (!std::isfinite(loss))
            throw std::runtime_error("glove training diverged: non-finite loss at epoch " +
                                     std::to_string(epoch + 1));
        if (epoch_loss) epoch_loss->push_back(loss);
    }

    EmbeddingMatrix emb;
    emb.vocab_size = V;
    emb.dim = d;
    emb.method = kb.pairs.empty() && joint.lambda == 0.0 ? Method::Glove : Method::Joint;
    emb.data.resize(static_cast<std::size_t>(V) * d);
    for (int i = 0; i < V; ++i) {
        auto wi = p.row_w(i);
        auto wti = p.row_wt(i);
        auto out = emb.row(i);
        for (int k = 0; k < d; ++k) out[k] = wi[k] + wti[k];
    }
    return emb;
}

EmbeddingMatrix train_glove(const CoocMatrix& cooc, const GloveConfig& cfg,
                            std::vector<double>* epoch_loss) {
    KbPairs none;
    EmbeddingMatrix emb = train_joint(cooc, none, JointConfig{0.0, false}, cfg, epoch_loss);
    emb.method = Method::Glove;
    return emb;
}

}  // namespace cmdseer::emb
