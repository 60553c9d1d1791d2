#include "cmdseer/repl.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

namespace cmdseer::cli {

ReplResult repl_step(ReplState& state, const std::string& line) {
    if (!state.model || !state.vocab) throw std::runtime_error("repl state has no model loaded");
    const norm::Vocab& vocab = *state.vocab;
    const std::size_t L =
        static_cast<std::size_t>(state.model->W_out.rows() / state.model->layer2.hidden());

    ReplResult result;
    std::vector<std::string> tokens =
        norm::normalize_tokens(norm::expand_aliases(line, state.aliases));
    for (const std::string& tok : tokens) {
        int id = vocab.id_of(tok);
        if (id < 0) {
            result.oov.push_back(tok);
            id = vocab.most_frequent_id();
        }
        state.context.push_back(id);
    }
    while (state.context.size() > L) state.context.pop_front();

    std::vector<int> ctx(state.context.begin(), state.context.end());
    model::Prediction pred = model::predict_top_k(*state.model, vocab, ctx,
                                                  state.options.suggestions,
                                                  state.options.restrict_to_commands);
    result.suggestions = std::move(pred.items);
    result.padded = pred.padded;
    return result;
}

std::map<std::string, std::string> load_alias_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open alias file: " + file.string());
    std::map<std::string, std::string> aliases;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t b = 0, e = line.size();
        while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
        if (b == e) continue;
        std::string entry = line.substr(b, e - b);
        auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::runtime_error("alias file " + file.string() + ": line " +
                                     std::to_string(line_no) + " is not name=expansion");
        aliases[entry.substr(0, eq)] = entry.substr(eq + 1);
    }
    return aliases;
}

}  // namespace cmdseer::cli
