#include "cmdseer/lstm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace cmdseer::model {
namespace {

Eigen::ArrayXXd logistic(const Eigen::ArrayXXd& x) {
    return 1.0 / (1.0 + (-x).exp());
}

struct LayerCache {
    // per step, each h x B
    std::vector<Eigen::ArrayXXd> i, f, o, g, c, tanh_c, h;
    std::vector<Eigen::MatrixXd> x;       // inputs, in x B
    std::vector<Eigen::ArrayXXd> mask;    // dropout masks (empty when unused)
    std::vector<Eigen::MatrixXd> out;     // h after dropout, what the next stage sees
};

void run_layer(const LstmLayerParams& p, const std::vector<Eigen::MatrixXd>& inputs,
               LayerCache& cache, double dropout, std::mt19937_64* rng) {
    const int h = p.hidden();
    const int L = static_cast<int>(inputs.size());
    const int B = static_cast<int>(inputs[0].cols());

    cache.x = inputs;
    cache.i.resize(L);
    cache.f.resize(L);
    cache.o.resize(L);
    cache.g.resize(L);
    cache.c.resize(L);
    cache.tanh_c.resize(L);
    cache.h.resize(L);
    cache.mask.resize(L);
    cache.out.resize(L);

    Eigen::MatrixXd h_prev = Eigen::MatrixXd::Zero(h, B);
    Eigen::ArrayXXd c_prev = Eigen::ArrayXXd::Zero(h, B);
    for (int t = 0; t < L; ++t) {
        Eigen::MatrixXd pre = p.Wx * inputs[t] + p.Wh * h_prev;
        pre.colwise() += p.b;
        Eigen::ArrayXXd a = pre.array();
        cache.i[t] = logistic(a.topRows(h));
        cache.f[t] = logistic(a.middleRows(h, h));
        cache.o[t] = logistic(a.middleRows(2 * h, h));
        cache.g[t] = a.bottomRows(h).tanh();
        cache.c[t] = cache.f[t] * c_prev + cache.i[t] * cache.g[t];
        cache.tanh_c[t] = cache.c[t].tanh();
        cache.h[t] = cache.o[t] * cache.tanh_c[t];

        if (dropout > 0.0) {
            Eigen::ArrayXXd mask(h, B);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            double* ptr = mask.data();
            const double keep = 1.0 - dropout;
            for (Eigen::Index k = 0; k < mask.size(); ++k)
                ptr[k] = unif(*rng) >= dropout ? 1.0 / keep : 0.0;
            cache.mask[t] = std::move(mask);
            cache.out[t] = (cache.h[t] * cache.mask[t]).matrix();
        } else {
            cache.out[t] = cache.h[t].matrix();
        }
        h_prev = cache.h[t].matrix();
        c_prev = cache.c[t];
    }
}

// dout = gradient w.r.t. the layer's (post-dropout) outputs; returns the
// gradient w.r.t. the layer inputs and accumulates parameter gradients.
std::vector<Eigen::MatrixXd> backprop_layer(const LstmLayerParams& p, const LayerCache& cache,
                                            std::vector<Eigen::ArrayXXd>& dout,
                                            LstmLayerParams& grad) {
    const int h = p.hidden();
    const int L = static_cast<int>(cache.x.size());
    const int B = static_cast<int>(cache.x[0].cols());

    std::vector<Eigen::MatrixXd> dx(L);
    Eigen::ArrayXXd dh_next = Eigen::ArrayXXd::Zero(h, B);
    Eigen::ArrayXXd dc_next = Eigen::ArrayXXd::Zero(h, B);
    Eigen::MatrixXd dpre(4 * h, B);

    for (int t = L - 1; t >= 0; --t) {
        Eigen::ArrayXXd dh = dout[t];
        if (cache.mask[t].size() > 0) dh *= cache.mask[t];
        dh += dh_next;

        const auto& i = cache.i[t];
        const auto& f = cache.f[t];
        const auto& o = cache.o[t];
        const auto& g = cache.g[t];
        const auto& tc = cache.tanh_c[t];

        Eigen::ArrayXXd do_ = dh * tc;
        Eigen::ArrayXXd dc = dh * o * (1.0 - tc.square()) + dc_next;
        Eigen::ArrayXXd di = dc * g;
        Eigen::ArrayXXd dg = dc * i;
        Eigen::ArrayXXd df(h, B);
        if (t > 0)
            df = dc * cache.c[t - 1];
        else
            df.setZero();

        dpre.topRows(h) = (di * i * (1.0 - i)).matrix();
        dpre.middleRows(h, h) = (df * f * (1.0 - f)).matrix();
        dpre.middleRows(2 * h, h) = (do_ * o * (1.0 - o)).matrix();
        dpre.bottomRows(h) = (dg * (1.0 - g.square())).matrix();

        grad.Wx.noalias() += dpre * cache.x[t].transpose();
        if (t > 0) grad.Wh.noalias() += dpre * cache.h[t - 1].matrix().transpose();
        grad.b += dpre.rowwise().sum();

        dx[t] = p.Wx.transpose() * dpre;
        dh_next = (p.Wh.transpose() * dpre).array();
        dc_next = dc * f;
    }
    return dx;
}

void fill_uniform(Eigen::MatrixXd& m, double limit, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-limit, limit);
    double* p = m.data();
    for (Eigen::Index k = 0; k < m.size(); ++k) p[k] = dist(rng);
}

LstmLayerParams init_layer(int input, int hidden, std::mt19937_64& rng) {
    LstmLayerParams p;
    p.Wx.resize(4 * hidden, input);
    p.Wh.resize(4 * hidden, hidden);
    fill_uniform(p.Wx, 1.0 / std::sqrt(static_cast<double>(input)), rng);
    fill_uniform(p.Wh, 1.0 / std::sqrt(static_cast<double>(hidden)), rng);
    p.b = Eigen::VectorXd::Zero(4 * hidden);
    p.b.segment(hidden, hidden).setOnes();  // forget gate starts open
    return p;
}

struct AdamState {
    Gradients m, v;
    long step = 0;
};

template <typename T>
void adam_update(T& param, const T& grad, T& m, T& v, double lr, long step) {
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    m.array() = beta1 * m.array() + (1.0 - beta1) * grad.array();
    v.array() = beta2 * v.array() + (1.0 - beta2) * grad.array().square();
    double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    param.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps);
}

}  // namespace

PairSet PairSet::slice(std::size_t begin, std::size_t end) const {
    PairSet out;
    out.contexts = contexts.middleCols(static_cast<Eigen::Index>(begin),
                                       static_cast<Eigen::Index>(end - begin));
    out.targets.assign(targets.begin() + begin, targets.begin() + end);
    out.line_start.assign(line_start.begin() + begin, line_start.begin() + end);
    return out;
}

PairSet PairSet::gather(std::span<const std::size_t> indices) const {
    PairSet out;
    out.contexts.resize(contexts.rows(), static_cast<Eigen::Index>(indices.size()));
    out.targets.resize(indices.size());
    out.line_start.resize(indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k) {
        out.contexts.col(static_cast<Eigen::Index>(k)) =
            contexts.col(static_cast<Eigen::Index>(indices[k]));
        out.targets[k] = targets[indices[k]];
        out.line_start[k] = line_start[indices[k]];
    }
    return out;
}

PairSet make_training_pairs(const std::vector<norm::TokenStream>& streams, int context_len) {
    if (context_len < 1) throw std::runtime_error("context length must be >= 1");
    const std::size_t L = static_cast<std::size_t>(context_len);

    std::size_t total = 0;
    std::size_t skipped = 0;
    for (const auto& s : streams) {
        if (s.ids.size() > L)
            total += s.ids.size() - L;
        else
            ++skipped;
    }

    PairSet out;
    out.skipped_streams = skipped;
    out.contexts.resize(context_len, static_cast<Eigen::Index>(total));
    out.targets.resize(total);
    out.line_start.resize(total);

    std::size_t col = 0;
    for (const auto& s : streams) {
        if (s.ids.size() <= L) continue;
        std::size_t next_line = 0;
        for (std::size_t t = L; t < s.ids.size(); ++t, ++col) {
            for (std::size_t j = 0; j < L; ++j)
                out.contexts(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(col)) =
                    s.ids[t - L + j];
            out.targets[col] = s.ids[t];
            while (next_line < s.line_starts.size() && s.line_starts[next_line] < t) ++next_line;
            out.line_start[col] =
                next_line < s.line_starts.size() && s.line_starts[next_line] == t ? 1 : 0;
        }
    }
    return out;
}

Model init_model(const emb::EmbeddingMatrix& embeddings, const ModelConfig& cfg) {
    if (!embeddings.all_finite()) throw std::runtime_error("embedding matrix contains non-finite values");
    Model m;
    m.config = cfg;
    const int V = embeddings.vocab_size;
    const int d = embeddings.dim;
    m.E.resize(V, d);
    for (int i = 0; i < V; ++i) {
        auto r = embeddings.row(i);
        for (int j = 0; j < d; ++j) m.E(i, j) = r[j];
    }
    std::mt19937_64 rng(cfg.seed);
    m.layer1 = init_layer(d, cfg.hidden1, rng);
    m.layer2 = init_layer(cfg.hidden1, cfg.hidden2, rng);
    const int flat = cfg.context_len * cfg.hidden2;
    m.W_out.resize(flat, V);
    fill_uniform(m.W_out, 1.0 / std::sqrt(static_cast<double>(flat)), rng);
    m.b_out = Eigen::VectorXd::Zero(V);
    return m;
}

Gradients zero_gradients(const Model& m) {
    Gradients g;
    g.E = Eigen::MatrixXd::Zero(m.E.rows(), m.E.cols());
    g.layer1.Wx = Eigen::MatrixXd::Zero(m.layer1.Wx.rows(), m.layer1.Wx.cols());
    g.layer1.Wh = Eigen::MatrixXd::Zero(m.layer1.Wh.rows(), m.layer1.Wh.cols());
    g.layer1.b = Eigen::VectorXd::Zero(m.layer1.b.size());
    g.layer2.Wx = Eigen::MatrixXd::Zero(m.layer2.Wx.rows(), m.layer2.Wx.cols());
    g.layer2.Wh = Eigen::MatrixXd::Zero(m.layer2.Wh.rows(), m.layer2.Wh.cols());
    g.layer2.b = Eigen::VectorXd::Zero(m.layer2.b.size());
    g.W_out = Eigen::MatrixXd::Zero(m.W_out.rows(), m.W_out.cols());
    g.b_out = Eigen::VectorXd::Zero(m.b_out.size());
    return g;
}

double batch_loss(const Model& m, const Eigen::MatrixXi& contexts, std::span<const int> targets,
                  Mode mode, Gradients* grads, std::mt19937_64* rng) {
    const int L = static_cast<int>(contexts.rows());
    const int B = static_cast<int>(contexts.cols());
    const int V = m.vocab_size();
    const int d = m.embed_dim();
    const int h2 = m.layer2.hidden();
    if (B == 0) throw std::runtime_error("empty batch");
    if (static_cast<int>(targets.size()) != B) throw std::runtime_error("targets/contexts size mismatch");
    if (m.W_out.rows() != static_cast<Eigen::Index>(L) * h2)
        throw std::runtime_error("context length does not match the model's dense layer");
    if (m.layer2.input() != m.layer1.hidden() || m.layer1.input() != d)
        throw std::runtime_error("inconsistent layer dimensions");

    const double dropout = mode == Mode::Train ? m.config.dropout : 0.0;
    if (dropout > 0.0 && rng == nullptr)
        throw std::runtime_error("train-mode dropout requires an rng");

    // embedding lookup
    std::vector<Eigen::MatrixXd> x1(L, Eigen::MatrixXd(d, B));
    for (int t = 0; t < L; ++t)
        for (int b = 0; b < B; ++b) {
            int id = contexts(t, b);
            if (id < 0 || id >= V) throw std::out_of_range("context token id out of range");
            x1[t].col(b) = m.E.row(id).transpose();
        }

    LayerCache c1, c2;
    run_layer(m.layer1, x1, c1, dropout, rng);
    run_layer(m.layer2, c1.out, c2, dropout, rng);

    Eigen::MatrixXd z(static_cast<Eigen::Index>(L) * h2, B);
    for (int t = 0; t < L; ++t) z.middleRows(static_cast<Eigen::Index>(t) * h2, h2) = c2.out[t];

    Eigen::MatrixXd logits = m.W_out.transpose() * z;
    logits.colwise() += m.b_out;

    Eigen::MatrixXd probs(V, B);
    double loss = 0.0;
    for (int b = 0; b < B; ++b) {
        Eigen::VectorXd col = logits.col(b);
        double mx = col.maxCoeff();
        Eigen::ArrayXd e = (col.array() - mx).exp();
        double sum = e.sum();
        probs.col(b) = (e / sum).matrix();
        int target = targets[b];
        if (target < 0 || target >= V) throw std::out_of_range("target token id out of range");
        loss -= std::log(std::max(probs(target, b), 1e-300));
    }
    loss /= B;

    if (!grads) return loss;

    Eigen::MatrixXd dlogits = probs;
    for (int b = 0; b < B; ++b) dlogits(targets[b], b) -= 1.0;
    dlogits /= static_cast<double>(B);

    grads->W_out.noalias() += z * dlogits.transpose();
    grads->b_out += dlogits.rowwise().sum();
    Eigen::MatrixXd dz = m.W_out * dlogits;

    std::vector<Eigen::ArrayXXd> dout2(L);
    for (int t = 0; t < L; ++t)
        dout2[t] = dz.middleRows(static_cast<Eigen::Index>(t) * h2, h2).array();

    std::vector<Eigen::MatrixXd> dx2 = backprop_layer(m.layer2, c2, dout2, grads->layer2);
    std::vector<Eigen::ArrayXXd> dout1(L);
    for (int t = 0; t < L; ++t) dout1[t] = dx2[t].array();
    std::vector<Eigen::MatrixXd> dx1 = backprop_layer(m.layer1, c1, dout1, grads->layer1);

    for (int t = 0; t < L; ++t)
        for (int b = 0; b < B; ++b)
            grads->E.row(contexts(t, b)) += dx1[t].col(b).transpose();

    return loss;
}

Eigen::VectorXd forward(const Model& m, std::span<const int> context, Mode mode,
                        std::mt19937_64* rng) {
    if (static_cast<Eigen::Index>(context.size()) * m.layer2.hidden() != m.W_out.rows())
        throw std::runtime_error("context length does not match the model's dense layer");
    const int L = static_cast<int>(context.size());
    const int d = m.embed_dim();
    const int h2 = m.layer2.hidden();
    const double dropout = mode == Mode::Train ? m.config.dropout : 0.0;
    if (dropout > 0.0 && rng == nullptr)
        throw std::runtime_error("train-mode dropout requires an rng");

    std::vector<Eigen::MatrixXd> x1(L, Eigen::MatrixXd(d, 1));
    for (int t = 0; t < L; ++t) {
        int id = context[t];
        if (id < 0 || id >= m.vocab_size()) throw std::out_of_range("context token id out of range");
        x1[t].col(0) = m.E.row(id).transpose();
    }
    LayerCache c1, c2;
    run_layer(m.layer1, x1, c1, dropout, rng);
    run_layer(m.layer2, c1.out, c2, dropout, rng);

    Eigen::VectorXd z(static_cast<Eigen::Index>(L) * h2);
    for (int t = 0; t < L; ++t) z.segment(static_cast<Eigen::Index>(t) * h2, h2) = c2.out[t].col(0);
    Eigen::VectorXd logits = m.W_out.transpose() * z + m.b_out;
    double mx = logits.maxCoeff();
    Eigen::ArrayXd e = (logits.array() - mx).exp();
    return (e / e.sum()).matrix();
}

EvalResult evaluate(const Model& m, const PairSet& pairs, bool line_starts_only) {
    EvalResult r;
    if (pairs.size() == 0) return r;
    const int V = m.vocab_size();
    const std::size_t n = pairs.size();
    const std::size_t chunk = 1024;
    double loss_sum = 0.0;
    std::size_t correct = 0, scored = 0, loss_count = 0;

    for (std::size_t begin = 0; begin < n; begin += chunk) {
        std::size_t end = std::min(n, begin + chunk);
        Eigen::MatrixXi ctx = pairs.contexts.middleCols(static_cast<Eigen::Index>(begin),
                                                        static_cast<Eigen::Index>(end - begin));
        const int B = static_cast<int>(end - begin);

        // forward only, on the whole chunk
        const int L = static_cast<int>(ctx.rows());
        const int d = m.embed_dim();
        const int h2 = m.layer2.hidden();
        std::vector<Eigen::MatrixXd> x1(L, Eigen::MatrixXd(d, B));
        for (int t = 0; t < L; ++t)
            for (int b = 0; b < B; ++b) x1[t].col(b) = m.E.row(ctx(t, b)).transpose();
        LayerCache c1, c2;
        run_layer(m.layer1, x1, c1, 0.0, nullptr);
        run_layer(m.layer2, c1.out, c2, 0.0, nullptr);
        Eigen::MatrixXd z(static_cast<Eigen::Index>(L) * h2, B);
        for (int t = 0; t < L; ++t) z.middleRows(static_cast<Eigen::Index>(t) * h2, h2) = c2.out[t];
        Eigen::MatrixXd logits = m.W_out.transpose() * z;
        logits.colwise() += m.b_out;

        for (int b = 0; b < B; ++b) {
            std::size_t idx = begin + b;
            if (line_starts_only && !pairs.line_start[idx]) continue;
            Eigen::VectorXd col = logits.col(b);
            double mx = col.maxCoeff();
            Eigen::ArrayXd e = (col.array() - mx).exp();
            double sum = e.sum();
            int target = pairs.targets[idx];
            loss_sum -= std::log(std::max(e[target] / sum, 1e-300));
            ++loss_count;
            int best = 0;
            double bestv = col[0];
            for (int vv = 1; vv < V; ++vv)
                if (col[vv] > bestv) {
                    bestv = col[vv];
                    best = vv;
                }
            if (best == target) ++correct;
            ++scored;
        }
    }
    r.scored = scored;
    r.loss = loss_count ? loss_sum / static_cast<double>(loss_count) : 0.0;
    r.accuracy = scored ? static_cast<double>(correct) / static_cast<double>(scored) : 0.0;
    return r;
}

TrainHistory train(Model& m, const PairSet& train_set, const PairSet& val_set,
                   const ModelConfig& cfg, bool val_line_starts_only) {
    if (train_set.size() == 0) throw std::runtime_error("training set is empty");
    m.config = cfg;

    AdamState adam;
    adam.m = zero_gradients(m);
    adam.v = zero_gradients(m);

    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    const std::size_t batch = std::max(1, cfg.batch_size);
    TrainHistory history;

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0.0;

        for (std::size_t begin = 0; begin < order.size(); begin += batch) {
            std::size_t end = std::min(order.size(), begin + batch);
            PairSet mb = train_set.gather(
                std::span<const std::size_t>(order.data() + begin, end - begin));

            Gradients g = zero_gradients(m);
            double loss = batch_loss(m, mb.contexts, mb.targets, Mode::Train, &g, &rng);
            if (!std::isfinite(loss))
                throw std::runtime_error("training diverged: non-finite loss in epoch " +
                                         std::to_string(epoch + 1));
            loss_sum += loss * static_cast<double>(end - begin);

            ++adam.step;
            const double lr = cfg.learning_rate;
            if (cfg.embedding_trainable)
                adam_update(m.E, g.E, adam.m.E, adam.v.E, lr, adam.step);
            adam_update(m.layer1.Wx, g.layer1.Wx, adam.m.layer1.Wx, adam.v.layer1.Wx, lr, adam.step);
            adam_update(m.layer1.Wh, g.layer1.Wh, adam.m.layer1.Wh, adam.v.layer1.Wh, lr, adam.step);
            adam_update(m.layer1.b, g.layer1.b, adam.m.layer1.b, adam.v.layer1.b, lr, adam.step);
            adam_update(m.layer2.Wx, g.layer2.Wx, adam.m.layer2.Wx, adam.v.layer2.Wx, lr, adam.step);
            adam_update(m.layer2.Wh, g.layer2.Wh, adam.m.layer2.Wh, adam.v.layer2.Wh, lr, adam.step);
            adam_update(m.layer2.b, g.layer2.b, adam.m.layer2.b, adam.v.layer2.b, lr, adam.step);
            adam_update(m.W_out, g.W_out, adam.m.W_out, adam.v.W_out, lr, adam.step);
            adam_update(m.b_out, g.b_out, adam.m.b_out, adam.v.b_out, lr, adam.step);
        }

        history.train_loss.push_back(loss_sum / static_cast<double>(train_set.size()));
        if (val_set.size() > 0) {
            EvalResult v = evaluate(m, val_set, val_line_starts_only);
            history.val_loss.push_back(v.loss);
            history.val_accuracy.push_back(v.accuracy);
        } else {
            history.val_loss.push_back(history.train_loss.back());
            history.val_accuracy.push_back(0.0);
        }
    }
    return history;
}

namespace {

constexpr char kMagic[8] = {'C', 'M', 'D', 'S', 'E', 'E', 'R', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    out.write(b, 8);
}

double get_f64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

void put_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) put_f64(out, m(r, c));
}

void get_matrix(std::istream& in, Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = get_f64(in);
}

void put_vector(std::ostream& out, const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) put_f64(out, v[i]);
}

void get_vector(std::istream& in, Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = get_f64(in);
}

}  // namespace

void save_model(const Model& m, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model file: " + file.string());
    out.write(kMagic, sizeof kMagic);
    put_u32(out, kFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(m.vocab_size()));
    put_u32(out, static_cast<std::uint32_t>(m.embed_dim()));
    put_u32(out, static_cast<std::uint32_t>(m.W_out.rows() / m.layer2.hidden()));
    put_u32(out, static_cast<std::uint32_t>(m.layer1.hidden()));
    put_u32(out, static_cast<std::uint32_t>(m.layer2.hidden()));
    put_matrix(out, m.E);
    put_matrix(out, m.layer1.Wx);
    put_matrix(out, m.layer1.Wh);
    put_vector(out, m.layer1.b);
    put_matrix(out, m.layer2.Wx);
    put_matrix(out, m.layer2.Wh);
    put_vector(out, m.layer2.b);
    put_matrix(out, m.W_out);
    put_vector(out, m.b_out);
    if (!out) throw std::runtime_error("write failure on model file: " + file.string());
}

Model load_model(const std::filesystem::path& file, const norm::Vocab* vocab) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + file.string());
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw std::runtime_error("not a model file: " + file.string());
    std::uint32_t version = get_u32(in);
    if (version != kFormatVersion)
        throw std::runtime_error("unsupported model format version " + std::to_string(version));

    const int V = static_cast<int>(get_u32(in));
    const int d = static_cast<int>(get_u32(in));
    const int L = static_cast<int>(get_u32(in));
    const int h1 = static_cast<int>(get_u32(in));
    const int h2 = static_cast<int>(get_u32(in));
    if (!in || V <= 0 || d <= 0 || L <= 0 || h1 <= 0 || h2 <= 0)
        throw std::runtime_error("corrupt model header: " + file.string());
    if (vocab && vocab->size() != V)
        throw std::runtime_error("model vocabulary size " + std::to_string(V) +
                                 " does not match loaded vocab (" + std::to_string(vocab->size()) +
                                 ")");

    Model m;
    m.config.context_len = L;
    m.config.hidden1 = h1;
    m.config.hidden2 = h2;
    m.E.resize(V, d);
    m.layer1.Wx.resize(4 * h1, d);
    m.layer1.Wh.resize(4 * h1, h1);
    m.layer1.b.resize(4 * h1);
    m.layer2.Wx.resize(4 * h2, h1);
    m.layer2.Wh.resize(4 * h2, h2);
    m.layer2.b.resize(4 * h2);
    m.W_out.resize(static_cast<Eigen::Index>(L) * h2, V);
    m.b_out.resize(V);
    get_matrix(in, m.E);
    get_matrix(in, m.layer1.Wx);
    get_matrix(in, m.layer1.Wh);
    get_vector(in, m.layer1.b);
    get_matrix(in, m.layer2.Wx);
    get_matrix(in, m.layer2.Wh);
    get_vector(in, m.layer2.b);
    get_matrix(in, m.W_out);
    get_vector(in, m.b_out);
    if (!in) throw std::runtime_error("truncated model file: " + file.string());
    return m;
}

Prediction predict_top_k(const Model& m, const norm::Vocab& vocab, std::span<const int> context,
                         int k, bool restrict_to_commands) {
    if (k < 0) throw std::runtime_error("predict_top_k requires k >= 0");
    const std::size_t L = static_cast<std::size_t>(m.W_out.rows() / m.layer2.hidden());

    Prediction pred;
    std::vector<int> ctx;
    if (context.size() < L) {
        pred.padded = true;
        int pad = vocab.most_frequent_id();
        ctx.assign(L - context.size(), pad);
        ctx.insert(ctx.end(), context.begin(), context.end());
    } else {
        ctx.assign(context.end() - L, context.end());
    }

    Eigen::VectorXd probs = forward(m, ctx, Mode::Infer, nullptr);

    std::vector<int> ids;
    if (restrict_to_commands) {
        ids = vocab.command_ids;
    } else {
        ids.resize(m.vocab_size());
        std::iota(ids.begin(), ids.end(), 0);
    }
    double mass = 0.0;
    for (int id : ids) mass += probs[id];

    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        if (probs[a] != probs[b]) return probs[a] > probs[b];
        return vocab.id_to_token[a] < vocab.id_to_token[b];
    });
    if (ids.size() > static_cast<std::size_t>(k)) ids.resize(k);

    for (int id : ids)
        pred.items.emplace_back(vocab.id_to_token[id], mass > 0.0 ? probs[id] / mass : 0.0);
    return pred;
}

}  // namespace cmdseer::model
