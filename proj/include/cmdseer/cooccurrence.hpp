#pragma once

#include <cstdint>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace cmdseer::emb {

// Sparse symmetric co-occurrence counts. Each ordered pair of tokens at
// distance d (1 <= d <= window) inside one user stream contributes 1/d to
// both X[i][j] and X[j][i]; streams never mix across users.
class CoocMatrix {
public:
    explicit CoocMatrix(int vocab_size = 0) : vocab_size_(vocab_size) {}

    int vocab_size() const { return vocab_size_; }
    std::size_t nnz() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    void add(int center, int context, double weight);
    double at(int center, int context) const;

    // (center, context, weight) sorted by (center, context); the canonical
    // deterministic view used by training and serialization
    std::vector<std::tuple<int, int, double>> sorted_entries() const;

private:
    int vocab_size_;
    std::unordered_map<std::uint64_t, double> entries_;
};

CoocMatrix build_cooccurrence(const std::vector<std::vector<int>>& streams, int vocab_size,
                              int window = 15);

}  // namespace cmdseer::emb
