#include "cmdseer/config.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cmdseer::cli {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T v;
    if (!(in >> v) || !(in >> std::ws).eof())
        throw std::runtime_error("config key '" + key + "': bad value '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw std::runtime_error("config key '" + key + "': bad boolean '" + value + "'");
}

}  // namespace

PipelineConfig load_pipeline_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open config file: " + file.string());

    PipelineConfig cfg;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"traces_dir", [&](const std::string&, const std::string& v) { cfg.traces_dir = v; }},
        {"man_dir", [&](const std::string&, const std::string& v) { cfg.man_dir = v; }},
        {"artifact_dir", [&](const std::string&, const std::string& v) { cfg.artifact_dir = v; }},
        {"aliases_file", [&](const std::string&, const std::string& v) { cfg.aliases_file = v; }},
        {"method", [&](const std::string&, const std::string& v) { cfg.method = v; }},
        {"dim", [&](const std::string& k, const std::string& v) { cfg.dim = parse_number<int>(k, v); }},
        {"window", [&](const std::string& k, const std::string& v) { cfg.window = parse_number<int>(k, v); }},
        {"lambda", [&](const std::string& k, const std::string& v) { cfg.lambda = parse_number<double>(k, v); }},
        {"weight_kb_by_score", [&](const std::string& k, const std::string& v) { cfg.weight_kb_by_score = parse_bool(k, v); }},
        {"negatives", [&](const std::string& k, const std::string& v) { cfg.negatives = parse_number<int>(k, v); }},
        {"embed_epochs", [&](const std::string& k, const std::string& v) { cfg.embed_epochs = parse_number<int>(k, v); }},
        {"embed_lr", [&](const std::string& k, const std::string& v) { cfg.embed_lr = parse_number<double>(k, v); }},
        {"x_max", [&](const std::string& k, const std::string& v) { cfg.x_max = parse_number<double>(k, v); }},
        {"alpha", [&](const std::string& k, const std::string& v) { cfg.alpha = parse_number<double>(k, v); }},
        {"kb_k", [&](const std::string& k, const std::string& v) { cfg.kb_k = parse_number<int>(k, v); }},
        {"context_len", [&](const std::string& k, const std::string& v) { cfg.context_len = parse_number<int>(k, v); }},
        {"hidden1", [&](const std::string& k, const std::string& v) { cfg.hidden1 = parse_number<int>(k, v); }},
        {"hidden2", [&](const std::string& k, const std::string& v) { cfg.hidden2 = parse_number<int>(k, v); }},
        {"dropout", [&](const std::string& k, const std::string& v) { cfg.dropout = parse_number<double>(k, v); }},
        {"lr", [&](const std::string& k, const std::string& v) { cfg.lr = parse_number<double>(k, v); }},
        {"batch_size", [&](const std::string& k, const std::string& v) { cfg.batch_size = parse_number<int>(k, v); }},
        {"epochs", [&](const std::string& k, const std::string& v) { cfg.epochs = parse_number<int>(k, v); }},
        {"grid", [&](const std::string&, const std::string& v) { cfg.grid = v; }},
        {"folds", [&](const std::string&, const std::string& v) { cfg.folds = v; }},
        {"epoch_cap", [&](const std::string& k, const std::string& v) { cfg.epoch_cap = parse_number<int>(k, v); }},
        {"holdout_ratio", [&](const std::string& k, const std::string& v) { cfg.holdout_ratio = parse_number<double>(k, v); }},
        {"score_commands_only", [&](const std::string& k, const std::string& v) { cfg.score_commands_only = parse_bool(k, v); }},
        {"suggestions", [&](const std::string& k, const std::string& v) { cfg.suggestions = parse_number<int>(k, v); }},
        {"seed", [&](const std::string& k, const std::string& v) { cfg.seed = parse_number<std::uint64_t>(k, v); }},
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string entry = trim(line);
        if (entry.empty()) continue;
        auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config file " + file.string() + ": line " +
                                     std::to_string(line_no) + " is not key=value");
        std::string key = trim(entry.substr(0, eq));
        std::string value = trim(entry.substr(eq + 1));
        auto it = setters.find(key);
        if (it == setters.end())
            throw std::runtime_error("config file " + file.string() + ": unknown key '" + key +
                                     "' at line " + std::to_string(line_no));
        it->second(key, value);
    }
    return cfg;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_number<int>("list", item));
    }
    if (out.empty()) throw std::runtime_error("empty integer list '" + csv + "'");
    return out;
}

}  // namespace cmdseer::cli
