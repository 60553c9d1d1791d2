#include "cmdseer/cooccurrence.hpp"

#include <algorithm>
#include <stdexcept>

namespace cmdseer::emb {
namespace {

std::uint64_t key(int i, int j) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
           static_cast<std::uint32_t>(j);
}

}  // namespace

void CoocMatrix::add(int center, int context, double weight) {
    if (center < 0 || center >= vocab_size_ || context < 0 || context >= vocab_size_)
        throw std::out_of_range("co-occurrence index out of range");
    entries_[key(center, context)] += weight;
}

double CoocMatrix::at(int center, int context) const {
    auto it = entries_.find(key(center, context));
    return it == entries_.end() ? 0.0 : it->second;
}

std::vector<std::tuple<int, int, double>> CoocMatrix::sorted_entries() const {
    std::vector<std::tuple<int, int, double>> out;
    out.reserve(entries_.size());
    for (const auto& [k, w] : entries_)
        out.emplace_back(static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu), w);
    std::sort(out.begin(), out.end());
    return out;
}

CoocMatrix build_cooccurrence(const std::vector<std::vector<int>>& streams, int vocab_size,
                              int window) {
    if (window < 1) throw std::runtime_error("co-occurrence window must be >= 1");
    CoocMatrix m(vocab_size);
    for (const auto& stream : streams) {
        const std::size_t n = stream.size();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t hi = std::min(n, i + 1 + static_cast<std::size_t>(window));
            for (std::size_t j = i + 1; j < hi; ++j) {
                double w = 1.0 / static_cast<double>(j - i);
                m.add(stream[i], stream[j], w);
                m.add(stream[j], stream[i], w);
            }
        }
    }
    return m;
}

}  // namespace cmdseer::emb
