#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cmdseer/normalize.hpp"

namespace cmdseer::emb {

enum class Method { Sgns, Glove, Joint };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct EmbeddingMatrix {
    int vocab_size = 0;
    int dim = 0;
    Method method = Method::Glove;
    std::vector<double> data;  // row-major, vocab_size x dim

    std::span<double> row(int i) { return {data.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)}; }
    std::span<const double> row(int i) const { return {data.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)}; }

    bool all_finite() const;
};

double cosine(std::span<const double> a, std::span<const double> b);

// k most similar tokens by cosine, query excluded, ties lexicographic.
std::vector<std::pair<std::string, double>> nearest_neighbors(const EmbeddingMatrix& emb,
                                                              const norm::Vocab& vocab,
                                                              const std::string& token, int k);

// Artifact: first line "V d", then one "<token> <v_0> ... <v_{d-1}>" line per
// vocab id, values formatted so that reading them back is bit-exact.
void save_embeddings(const EmbeddingMatrix& emb, const norm::Vocab& vocab,
                     const std::filesystem::path& file);
EmbeddingMatrix load_embeddings(const std::filesystem::path& file, const norm::Vocab& vocab,
                                Method method = Method::Glove);

}  // namespace cmdseer::emb
