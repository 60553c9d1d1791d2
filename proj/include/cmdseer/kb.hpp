#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace cmdseer::kb {

struct ManDoc {
    std::string command;
    std::string body;  // may be empty for a documented-missing command
};

// Bag of stemmed-term counts after cleaning.
using TermBag = std::map<std::string, int>;

struct DocVector {
    std::string command;
    std::map<std::string, double> weights;  // tf-idf, positive entries only
    double norm = 0.0;                      // cached L2 norm
};

struct SynonymPair {
    std::string a, b;  // a < b
    double score;      // cosine similarity, in [0, 1]
};

struct KnowledgeBase {
    std::vector<SynonymPair> pairs;  // unordered pairs, deduplicated
    // command -> up to k (neighbor, score), best first
    std::map<std::string, std::vector<std::pair<std::string, double>>> neighbors;
};

// Lowercases, replaces every non-alphanumeric character with a space, drops
// surface words of length <= 3, stems the survivors.
TermBag clean_doc(const ManDoc& doc);

// weight(term, doc) = tf * ln(N / df); terms present in every doc get
// weight 0 and are omitted. Requires at least two documents.
std::vector<DocVector> vectorize(const std::vector<std::pair<std::string, TermBag>>& bags);

double cosine(const DocVector& u, const DocVector& v);

// For each command, the k most similar other commands (ties broken
// lexicographically). Commands with empty vectors get no neighbors.
KnowledgeBase top_k_synonyms(const std::vector<DocVector>& vectors, int k = 5);

// Reads "<command>.txt" files from a directory.
std::vector<ManDoc> load_man_dir(const std::filesystem::path& dir);

// Full build with the explicit vocabulary intersection: only docs whose
// command is in `commands` participate (pass nullptr to keep all docs).
KnowledgeBase build_kb(const std::vector<ManDoc>& docs, const std::set<std::string>* commands,
                       int k = 5);

// Artifact: one "<cmd_a> <cmd_b> <score>" line per directed neighbor edge.
void save_kb(const KnowledgeBase& kb, const std::filesystem::path& file);
KnowledgeBase load_kb(const std::filesystem::path& file, int k = 5);

}  // namespace cmdseer::kb
