#pragma once

#include <deque>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cmdseer/lstm.hpp"
#include "cmdseer/normalize.hpp"

namespace cmdseer::cli {

struct ReplOptions {
    int suggestions = 5;
    bool restrict_to_commands = true;
};

// Rolling context of the last L normalized token ids over a read-only model.
struct ReplState {
    const model::Model* model = nullptr;
    const norm::Vocab* vocab = nullptr;
    std::map<std::string, std::string> aliases;
    std::deque<int> context;
    ReplOptions options;
};

struct ReplResult {
    std::vector<std::pair<std::string, double>> suggestions;
    std::vector<std::string> oov;  // entered tokens mapped to the most frequent id
    bool padded = false;
};

// Normalizes the entered line exactly like the training preprocessing
// (alias expansion, placeholder substitution), appends its ids to the
// rolling context, and ranks the next command. An empty line leaves the
// state unchanged and recomputes suggestions.
ReplResult repl_step(ReplState& state, const std::string& line);

// Alias file: "name=expansion" lines, '#' comments.
std::map<std::string, std::string> load_alias_file(const std::filesystem::path& file);

}  // namespace cmdseer::cli
