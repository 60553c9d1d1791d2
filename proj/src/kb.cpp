#include "cmdseer/kb.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cmdseer/porter.hpp"

namespace cmdseer::kb {

TermBag clean_doc(const ManDoc& doc) {
    TermBag bag;
    std::string word;
    auto flush = [&] {
        if (word.size() > 3) ++bag[porter_stem(word)];
        word.clear();
    };
    for (char c : doc.body) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            word.push_back(static_cast<char>(std::tolower(u)));
        } else {
            flush();
        }
    }
    flush();
    return bag;
}

std::vector<DocVector> vectorize(const std::vector<std::pair<std::string, TermBag>>& bags) {
    const std::size_t n = bags.size();
    if (n < 2) throw std::runtime_error("vectorize requires at least 2 documents");

    std::map<std::string, int> df;
    for (const auto& [cmd, bag] : bags)
        for (const auto& [term, tf] : bag) ++df[term];

    std::vector<DocVector> out;
    out.reserve(n);
    for (const auto& [cmd, bag] : bags) {
        DocVector v;
        v.command = cmd;
        double sq = 0.0;
        for (const auto& [term, tf] : bag) {
            double w = tf * std::log(static_cast<double>(n) / df.at(term));
            if (w > 0.0) {
                v.weights.emplace(term, w);
                sq += w * w;
            }
        }
        v.norm = std::sqrt(sq);
        out.push_back(std::move(v));
    }
    return out;
}

double cosine(const DocVector& u, const DocVector& v) {
    if (u.norm == 0.0 || v.norm == 0.0) return 0.0;
    // iterate the smaller map; term order inside it is sorted, and the
    // products commute, so cosine(u,v) == cosine(v,u) bit for bit
    const DocVector& small = u.weights.size() <= v.weights.size() ? u : v;
    const DocVector& large = u.weights.size() <= v.weights.size() ? v : u;
    double dot = 0.0;
    for (const auto& [term, w] : small.weights) {
        auto it = large.weights.find(term);
        if (it != large.weights.end()) dot += w * it->second;
    }
    return dot / (u.norm * v.norm);
}

KnowledgeBase top_k_synonyms(const std::vector<DocVector>& vectors, int k) {
    if (k < 1) throw std::runtime_error("top_k_synonyms requires k >= 1");
    const std::size_t n = vectors.size();

    // order commands by name so candidate scans are input-order independent
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return vectors[a].command < vectors[b].command;
    });

    // pairwise similarities, computed once per unordered pair
    std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            double s = cosine(vectors[order[a]], vectors[order[b]]);
            sim[a][b] = sim[b][a] = s;
        }

    KnowledgeBase kb;
    std::map<std::pair<std::string, std::string>, double> pair_scores;
    for (std::size_t a = 0; a < n; ++a) {
        const DocVector& center = vectors[order[a]];
        if (center.weights.empty()) continue;

        std::vector<std::size_t> cand;
        cand.reserve(n - 1);
        for (std::size_t b = 0; b < n; ++b)
            if (b != a) cand.push_back(b);
        std::sort(cand.begin(), cand.end(), [&](std::size_t x, std::size_t y) {
            if (sim[a][x] != sim[a][y]) return sim[a][x] > sim[a][y];
            return vectors[order[x]].command < vectors[order[y]].command;
        });
        if (cand.size() > static_cast<std::size_t>(k)) cand.resize(k);

        auto& lst = kb.neighbors[center.command];
        for (std::size_t b : cand) {
            const std::string& other = vectors[order[b]].command;
            double s = sim[a][b];
            lst.emplace_back(other, s);
            auto key = center.command < other ? std::make_pair(center.command, other)
                                              : std::make_pair(other, center.command);
            auto [it, inserted] = pair_scores.emplace(key, s);
            if (!inserted) it->second = std::max(it->second, s);
        }
    }
    for (const auto& [key, score] : pair_scores)
        kb.pairs.push_back({key.first, key.second, score});
    return kb;
}

std::vector<ManDoc> load_man_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("man-page directory does not exist: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<ManDoc> docs;
    for (const auto& f : files) {
        std::ifstream in(f);
        std::ostringstream body;
        body << in.rdbuf();
        docs.push_back({f.stem().string(), body.str()});
    }
    return docs;
}

KnowledgeBase build_kb(const std::vector<ManDoc>& docs, const std::set<std::string>* commands,
                       int k) {
    std::vector<std::pair<std::string, TermBag>> bags;
    for (const ManDoc& d : docs) {
        if (commands && !commands->count(d.command)) continue;
        bags.emplace_back(d.command, clean_doc(d));
    }
    if (bags.size() < 2)
        throw std::runtime_error("knowledge base needs at least 2 commands after the vocabulary "
                                 "intersection, got " + std::to_string(bags.size()));
    return top_k_synonyms(vectorize(bags), k);
}

void save_kb(const KnowledgeBase& kb, const std::filesystem::path& file) {
    std::ofstream f(file);
    if (!f) throw std::runtime_error("cannot write kb file: " + file.string());
    char buf[64];
    for (const auto& [cmd, lst] : kb.neighbors)
        for (const auto& [other, score] : lst) {
            std::snprintf(buf, sizeof buf, "%.17g", score);
            f << cmd << ' ' << other << ' ' << buf << '\n';
        }
}

KnowledgeBase load_kb(const std::filesystem::path& file, int k) {
    std::ifstream f(file);
    if (!f) throw std::runtime_error("cannot open kb file: " + file.string());

    KnowledgeBase kb;
    std::map<std::pair<std::string, std::string>, double> pair_scores;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b;
        double score;
        if (!(ls >> a >> b >> score))
            throw std::runtime_error("kb file " + file.string() + ": bad line " +
                                     std::to_string(line_no));
        if (a == b)
            throw std::runtime_error("kb file " + file.string() + ": self pair '" + a +
                                     "' at line " + std::to_string(line_no));
        if (!(score >= 0.0 && score <= 1.0 + 1e-12))
            throw std::runtime_error("kb file " + file.string() + ": score out of [0,1] at line " +
                                     std::to_string(line_no));
        kb.neighbors[a].emplace_back(b, score);
        if (kb.neighbors[a].size() > static_cast<std::size_t>(k))
            throw std::runtime_error("kb file " + file.string() + ": command '" + a +
                                     "' has more than " + std::to_string(k) + " neighbors");
        auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
        auto [it, inserted] = pair_scores.emplace(key, score);
        if (!inserted) it->second = std::max(it->second, score);
    }
    for (const auto& [key, score] : pair_scores)
        kb.pairs.push_back({key.first, key.second, score});
    return kb;
}

}  // namespace cmdseer::kb
