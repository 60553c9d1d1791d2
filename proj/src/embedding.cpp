#include "cmdseer/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cmdseer::emb {

const char* method_name(Method m) {
    switch (m) {
        case Method::Sgns: return "sgns";
        case Method::Glove: return "glove";
        default: return "joint";
    }
}

Method method_from_name(const std::string& name) {
    if (name == "sgns") return Method::Sgns;
    if (name == "glove") return Method::Glove;
    if (name == "joint") return Method::Joint;
    throw std::runtime_error("unknown embedding method '" + name + "' (expected sgns|glove|joint)");
}

bool EmbeddingMatrix::all_finite() const {
    return std::all_of(data.begin(), data.end(), [](double v) { return std::isfinite(v); });
}

double cosine(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::pair<std::string, double>> nearest_neighbors(const EmbeddingMatrix& emb,
                                                              const norm::Vocab& vocab,
                                                              const std::string& token, int k) {
    int q = vocab.id_of(token);
    if (q < 0) throw std::runtime_error("unknown token '" + token + "'");
    if (k < 0) throw std::runtime_error("nearest_neighbors requires k >= 0");

    std::vector<int> ids;
    ids.reserve(emb.vocab_size - 1);
    for (int i = 0; i < emb.vocab_size; ++i)
        if (i != q) ids.push_back(i);

    std::vector<double> sims(emb.vocab_size, 0.0);
    for (int i : ids) sims[i] = cosine(emb.row(q), emb.row(i));

    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        if (sims[a] != sims[b]) return sims[a] > sims[b];
        return vocab.id_to_token[a] < vocab.id_to_token[b];
    });
    if (ids.size() > static_cast<std::size_t>(k)) ids.resize(k);

    std::vector<std::pair<std::string, double>> out;
    out.reserve(ids.size());
    for (int i : ids) out.emplace_back(vocab.id_to_token[i], sims[i]);
    return out;
}

void save_embeddings(const EmbeddingMatrix& emb, const norm::Vocab& vocab,
                     const std::filesystem::path& file) {
    if (emb.vocab_size != vocab.size())
        throw std::runtime_error("embedding/vocab size mismatch");
    std::ofstream f(file);
    if (!f) throw std::runtime_error("cannot write embedding file: " + file.string());
    f << emb.vocab_size << ' ' << emb.dim << '\n';
    char buf[64];
    for (int i = 0; i < emb.vocab_size; ++i) {
        f << vocab.id_to_token[i];
        for (double v : emb.row(i)) {
            std::snprintf(buf, sizeof buf, " %.17g", v);
            f << buf;
        }
        f << '\n';
    }
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& file, const norm::Vocab& vocab,
                                Method method) {
    std::ifstream f(file);
    if (!f) throw std::runtime_error("cannot open embedding file: " + file.string());

    int v = 0, d = 0;
    std::string header;
    if (!std::getline(f, header) || !(std::istringstream(header) >> v >> d) || v <= 0 || d <= 0)
        throw std::runtime_error("embedding file " + file.string() + ": bad header");
    if (v != vocab.size())
        throw std::runtime_error("embedding file " + file.string() + ": vocab size " +
                                 std::to_string(v) + " does not match loaded vocab (" +
                                 std::to_string(vocab.size()) + ")");

    EmbeddingMatrix emb;
    emb.vocab_size = v;
    emb.dim = d;
    emb.method = method;
    emb.data.assign(static_cast<std::size_t>(v) * d, 0.0);
    std::vector<bool> seen(v, false);

    std::string line;
    std::size_t line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        int id = vocab.id_of(tok);
        if (id < 0)
            throw std::runtime_error("embedding file " + file.string() + ": token '" + tok +
                                     "' not in vocab (line " + std::to_string(line_no) + ")");
        auto row = emb.row(id);
        for (int j = 0; j < d; ++j)
            if (!(ls >> row[j]))
                throw std::runtime_error("embedding file " + file.string() +
                                         ": dimension mismatch at line " + std::to_string(line_no));
        double extra;
        if (ls >> extra)
            throw std::runtime_error("embedding file " + file.string() +
                                     ": dimension mismatch at line " + std::to_string(line_no));
        seen[id] = true;
    }
    for (int i = 0; i < v; ++i)
        if (!seen[i])
            throw std::runtime_error("embedding file " + file.string() + ": missing vector for '" +
                                     vocab.id_to_token[i] + "'");
    return emb;
}

}  // namespace cmdseer::emb
