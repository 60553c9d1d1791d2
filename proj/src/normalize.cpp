#include "cmdseer/normalize.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cmdseer::norm {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        std::size_t j = i;
        while (j < line.size() && !is_space(line[j])) ++j;
        if (j > i) out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

int Vocab::id_of(const std::string& token) const {
    auto it = token_to_id.find(token);
    return it == token_to_id.end() ? -1 : it->second;
}

int Vocab::most_frequent_id() const {
    // ids are ordered by (count desc, token asc), so id 0 qualifies
    return id_to_token.empty() ? -1 : 0;
}

bool Vocab::is_command(int id) const {
    return std::binary_search(command_ids.begin(), command_ids.end(), id);
}

std::string expand_aliases(const std::string& line,
                           const std::map<std::string, std::string>& aliases) {
    std::size_t start = 0;
    while (start < line.size() && is_space(line[start])) ++start;
    std::size_t end = start;
    while (end < line.size() && !is_space(line[end])) ++end;
    if (end == start) return line;

    auto it = aliases.find(line.substr(start, end - start));
    if (it == aliases.end()) return line;
    return line.substr(0, start) + it->second + line.substr(end);
}

FilterResult filter_errors(const std::vector<trace::RawRecord>& records) {
    FilterResult out;
    out.records.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.tag == trace::Tag::Command && i + 1 < records.size() &&
            records[i + 1].tag == trace::Tag::ErrorMark) {
            ++i;  // skip the command and its mark
            ++out.removed_commands;
            continue;
        }
        if (r.tag == trace::Tag::ErrorMark) {
            ++out.dangling_marks;
            continue;
        }
        out.records.push_back(r);
    }
    return out;
}

std::vector<std::string> normalize_tokens(const std::string& line) {
    std::vector<std::string> toks = split_ws(line);
    for (std::size_t i = 1; i < toks.size(); ++i)
        toks[i] = toks[i][0] == '-' ? kParameterToken : kFilenameToken;
    return toks;
}

TokenizedTrace tokenize_trace(const trace::UserTrace& t) {
    TokenizedTrace out;
    out.user_id = t.user_id;
    FilterResult filtered = filter_errors(t.records);
    std::map<std::string, std::string> aliases;  // definitions seen so far
    for (const auto& r : filtered.records) {
        if (r.tag == trace::Tag::AliasDef) {
            auto eq = r.payload.find('=');
            std::string name = r.payload.substr(0, eq);
            while (!name.empty() && is_space(name.back())) name.pop_back();
            std::string expansion = r.payload.substr(eq + 1);
            while (!expansion.empty() && is_space(expansion.front())) expansion.erase(0, 1);
            while (!expansion.empty() && is_space(expansion.back())) expansion.pop_back();
            aliases[name] = expansion;
        } else if (r.tag == trace::Tag::Command) {
            auto toks = normalize_tokens(expand_aliases(r.payload, aliases));
            if (!toks.empty()) out.lines.push_back(std::move(toks));
        }
    }
    return out;
}

Vocab build_vocab(const std::vector<TokenizedTrace>& corpus) {
    std::map<std::string, std::int64_t> counts;
    std::set<std::string> command_tokens;
    for (const auto& trace : corpus) {
        for (const auto& line : trace.lines) {
            if (!line.empty()) command_tokens.insert(line.front());
            for (const auto& tok : line) ++counts[tok];
        }
    }
    if (counts.empty()) throw std::runtime_error("empty corpus: no tokens to build a vocabulary from");

    std::vector<std::pair<std::string, std::int64_t>> order(counts.begin(), counts.end());
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocab v;
    v.id_to_token.reserve(order.size());
    v.counts.reserve(order.size());
    for (const auto& [tok, count] : order) {
        v.token_to_id.emplace(tok, static_cast<int>(v.id_to_token.size()));
        v.id_to_token.push_back(tok);
        v.counts.push_back(count);
    }
    for (const auto& tok : command_tokens) v.command_ids.push_back(v.token_to_id.at(tok));
    std::sort(v.command_ids.begin(), v.command_ids.end());
    return v;
}

std::vector<TokenStream> encode(const std::vector<TokenizedTrace>& corpus, const Vocab& vocab) {
    std::vector<TokenStream> out;
    out.reserve(corpus.size());
    for (const auto& trace : corpus) {
        TokenStream s;
        s.user_id = trace.user_id;
        for (const auto& line : trace.lines) {
            s.line_starts.push_back(s.ids.size());
            for (const auto& tok : line) {
                int id = vocab.id_of(tok);
                if (id < 0)
                    throw std::runtime_error("out-of-vocabulary token '" + tok + "' in user '" +
                                             trace.user_id + "'");
                s.ids.push_back(id);
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

void save_corpus(const std::vector<TokenizedTrace>& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& trace : corpus) {
        std::ofstream f(dir / (trace.user_id + ".txt"));
        if (!f) throw std::runtime_error("cannot write corpus file for user " + trace.user_id);
        for (const auto& line : trace.lines) {
            for (std::size_t i = 0; i < line.size(); ++i) {
                if (i) f << ' ';
                f << line[i];
            }
            f << '\n';
        }
    }
}

std::vector<TokenizedTrace> load_corpus(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("corpus directory does not exist: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("empty corpus: no .txt files in " + dir.string());

    std::vector<TokenizedTrace> out;
    for (const auto& f : files) {
        TokenizedTrace t;
        t.user_id = f.stem().string();
        std::ifstream in(f);
        std::string line;
        while (std::getline(in, line)) {
            auto toks = split_ws(line);
            if (!toks.empty()) t.lines.push_back(std::move(toks));
        }
        out.push_back(std::move(t));
    }
    return out;
}

void save_vocab(const Vocab& vocab, const std::filesystem::path& file) {
    std::ofstream f(file);
    if (!f) throw std::runtime_error("cannot write vocab file: " + file.string());
    for (int id = 0; id < vocab.size(); ++id)
        f << vocab.id_to_token[id] << ' ' << id << ' ' << vocab.counts[id] << '\n';
}

void save_command_tokens(const Vocab& vocab, const std::filesystem::path& file) {
    std::ofstream f(file);
    if (!f) throw std::runtime_error("cannot write command-token file: " + file.string());
    for (int id : vocab.command_ids) f << vocab.id_to_token[id] << '\n';
}

Vocab load_vocab(const std::filesystem::path& vocab_file,
                 const std::filesystem::path& commands_file) {
    std::ifstream f(vocab_file);
    if (!f) throw std::runtime_error("cannot open vocab file: " + vocab_file.string());

    Vocab v;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        int id;
        std::int64_t count;
        if (!(ls >> tok >> id >> count))
            throw std::runtime_error("vocab file " + vocab_file.string() + ": bad line " +
                                     std::to_string(line_no));
        if (id != static_cast<int>(v.id_to_token.size()))
            throw std::runtime_error("vocab file " + vocab_file.string() +
                                     ": ids not dense/ordered at line " + std::to_string(line_no));
        if (!v.token_to_id.emplace(tok, id).second)
            throw std::runtime_error("vocab file " + vocab_file.string() + ": duplicate token '" +
                                     tok + "'");
        v.id_to_token.push_back(tok);
        v.counts.push_back(count);
    }
    if (v.id_to_token.empty())
        throw std::runtime_error("vocab file " + vocab_file.string() + " is empty");

    if (!commands_file.empty()) {
        std::ifstream cf(commands_file);
        if (!cf) throw std::runtime_error("cannot open command-token file: " + commands_file.string());
        while (std::getline(cf, line)) {
            if (line.empty()) continue;
            int id = v.id_of(line);
            if (id < 0)
                throw std::runtime_error("command token '" + line + "' is not in the vocabulary");
            v.command_ids.push_back(id);
        }
        std::sort(v.command_ids.begin(), v.command_ids.end());
        v.command_ids.erase(std::unique(v.command_ids.begin(), v.command_ids.end()),
                            v.command_ids.end());
    }
    return v;
}

}  // namespace cmdseer::norm
