#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "cmdseer/trace.hpp"

namespace cmdseer::norm {

inline constexpr const char* kFilenameToken = "filename";
inline constexpr const char* kParameterToken = "parameter";

struct Vocab {
    std::vector<std::string> id_to_token;            // ids dense in [0, V)
    std::unordered_map<std::string, int> token_to_id;
    std::vector<std::int64_t> counts;                // per-id corpus frequency
    std::vector<int> command_ids;                    // sorted; tokens seen line-initial

    int size() const { return static_cast<int>(id_to_token.size()); }
    int id_of(const std::string& token) const;       // -1 when absent
    // id of the globally most frequent token (ties: lexicographically first)
    int most_frequent_id() const;
    bool is_command(int id) const;
};

struct TokenStream {
    std::string user_id;
    std::vector<int> ids;
    std::vector<std::size_t> line_starts;  // index of each command line's first token
};

// One user's corpus after preprocessing: command lines as token surfaces.
struct TokenizedTrace {
    std::string user_id;
    std::vector<std::vector<std::string>> lines;
};

// If the line's first whitespace-token names an alias, substitute its
// expansion (a single level, no re-expansion); otherwise return unchanged.
std::string expand_aliases(const std::string& line, const std::map<std::string, std::string>& aliases);

struct FilterResult {
    std::vector<trace::RawRecord> records;
    std::size_t removed_commands = 0;  // commands dropped with their mark
    std::size_t dangling_marks = 0;    // marks with no preceding command
};

// Drops every Command record immediately followed by an ErrorMark (and the
// mark itself); dangling marks are dropped with a warning count.
FilterResult filter_errors(const std::vector<trace::RawRecord>& records);

// First token kept verbatim as the command name; later tokens become
// "parameter" when they start with '-' and "filename" otherwise.
std::vector<std::string> normalize_tokens(const std::string& line);

// Full per-user pipeline: filter errors, then walk records applying alias
// definitions to subsequent commands, then substitute placeholders.
TokenizedTrace tokenize_trace(const trace::UserTrace& t);

// Ids assigned by descending frequency, ties lexicographic. Throws on an
// empty corpus.
Vocab build_vocab(const std::vector<TokenizedTrace>& corpus);

// Maps every token to its id; throws naming the first out-of-vocabulary
// token encountered.
std::vector<TokenStream> encode(const std::vector<TokenizedTrace>& corpus, const Vocab& vocab);

// --- artifacts --------------------------------------------------------------
// Corpus: one file per user under `dir`, one command line per text line,
// tokens space-separated. Vocab: lines "<token> <id> <count>". Command
// tokens: one per line (needed to restrict REPL suggestions).

void save_corpus(const std::vector<TokenizedTrace>& corpus, const std::filesystem::path& dir);
std::vector<TokenizedTrace> load_corpus(const std::filesystem::path& dir);

void save_vocab(const Vocab& vocab, const std::filesystem::path& file);
void save_command_tokens(const Vocab& vocab, const std::filesystem::path& file);
Vocab load_vocab(const std::filesystem::path& vocab_file,
                 const std::filesystem::path& commands_file = {});

}  // namespace cmdseer::norm
