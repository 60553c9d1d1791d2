#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef __unix__
#include <unistd.h>
#endif

#include "cmdseer/config.hpp"
#include "cmdseer/cooccurrence.hpp"
#include "cmdseer/embedding.hpp"
#include "cmdseer/eval.hpp"
#include "cmdseer/glove.hpp"
#include "cmdseer/kb.hpp"
#include "cmdseer/lstm.hpp"
#include "cmdseer/normalize.hpp"
#include "cmdseer/repl.hpp"
#include "cmdseer/sgns.hpp"
#include "cmdseer/trace.hpp"

namespace fs = std::filesystem;
using namespace cmdseer;

namespace {

void require_exists(const fs::path& p, const char* what) {
    if (!fs::exists(p))
        throw std::runtime_error(std::string(what) + " does not exist: " + p.string());
}

std::vector<std::vector<int>> id_streams(const std::vector<norm::TokenStream>& streams) {
    std::vector<std::vector<int>> out;
    out.reserve(streams.size());
    for (const auto& s : streams) out.push_back(s.ids);
    return out;
}

// line-initial token ids, concatenated in stream order
std::vector<int> command_stream(const std::vector<norm::TokenStream>& streams) {
    std::vector<int> out;
    for (const auto& s : streams)
        for (std::size_t start : s.line_starts) out.push_back(s.ids[start]);
    return out;
}

struct CorpusData {
    std::vector<norm::TokenizedTrace> corpus;
    norm::Vocab vocab;
    std::vector<norm::TokenStream> streams;
};

CorpusData load_corpus_artifacts(const fs::path& corpus_dir, const fs::path& vocab_file,
                                 const fs::path& commands_file) {
    require_exists(corpus_dir, "corpus directory");
    require_exists(vocab_file, "vocab file");
    CorpusData data;
    data.corpus = norm::load_corpus(corpus_dir);
    data.vocab = norm::load_vocab(vocab_file, fs::exists(commands_file) ? commands_file : fs::path{});
    data.streams = norm::encode(data.corpus, data.vocab);
    return data;
}

emb::EmbeddingMatrix train_embedding(const std::string& method, const CorpusData& data,
                                     const cli::PipelineConfig& cfg, const fs::path& kb_file) {
    auto streams = id_streams(data.streams);
    if (method == "sgns") {
        emb::SgnsConfig sc;
        sc.dim = cfg.dim;
        sc.window = cfg.window;
        sc.negatives = cfg.negatives;
        sc.epochs = cfg.embed_epochs;
        sc.seed = cfg.seed;
        return emb::train_sgns(streams, data.vocab.size(), sc);
    }

    emb::CoocMatrix cooc = emb::build_cooccurrence(streams, data.vocab.size(), cfg.window);
    emb::GloveConfig gc;
    gc.dim = cfg.dim;
    gc.epochs = cfg.embed_epochs;
    gc.learning_rate = cfg.embed_lr;
    gc.x_max = cfg.x_max;
    gc.alpha = cfg.alpha;
    gc.seed = cfg.seed;
    if (method == "glove") return emb::train_glove(cooc, gc);

    require_exists(kb_file, "knowledge base file");
    kb::KnowledgeBase base = kb::load_kb(kb_file, cfg.kb_k);
    emb::KbPairs pairs = emb::resolve_kb(base, data.vocab);
    if (pairs.dropped > 0)
        std::cout << "note: dropped " << pairs.dropped << " kb pairs not resolvable in the vocab\n";
    emb::JointConfig jc{cfg.lambda, cfg.weight_kb_by_score};
    return emb::train_joint(cooc, pairs, jc, gc);
}

model::ModelConfig model_config(const cli::PipelineConfig& cfg) {
    model::ModelConfig mc;
    mc.context_len = cfg.context_len;
    mc.hidden1 = cfg.hidden1;
    mc.hidden2 = cfg.hidden2;
    mc.dropout = cfg.dropout;
    mc.learning_rate = cfg.lr;
    mc.batch_size = cfg.batch_size;
    mc.max_epochs = cfg.epochs;
    mc.seed = cfg.seed;
    return mc;
}

int run_ingest(const cli::PipelineConfig& cfg, const std::string& input,
               const std::string& format, const std::string& filter, const std::string& out_dir) {
    require_exists(input, "input directory");
    fs::create_directories(out_dir);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(input))
        if (entry.is_regular_file() && trace::glob_match(filter, entry.path().filename().string()))
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw std::runtime_error("empty corpus: no files in " + input + " match '" + filter + "'");

    std::size_t records = 0, unrecognized = 0, failures = 0;
    for (const auto& f : files) {
        try {
            trace::UserTrace t;
            if (format == "greenberg") {
                std::ifstream in(f);
                if (!in) throw std::runtime_error("cannot open " + f.string());
                std::istringstream normalized(trace::greenberg_to_normalized(in));
                t = trace::parse_trace(normalized, f.stem().string());
            } else {
                t = trace::parse_trace_file(f);
            }
            std::ofstream out(fs::path(out_dir) / (t.user_id + ".txt"));
            out << trace::serialize_trace(t);
            records += t.records.size();
            unrecognized += t.unrecognized;
        } catch (const std::exception& e) {
            ++failures;
            std::cerr << "warning: " << f.filename().string() << ": " << e.what() << '\n';
        }
    }
    std::cout << "ingested " << files.size() - failures << "/" << files.size() << " trace files, "
              << records << " records (" << unrecognized << " kept as Other)\n";
    (void)cfg;
    return 0;
}

int run_preprocess(const cli::PipelineConfig& cfg, const std::string& traces,
                   const std::string& filter, const std::string& out_dir) {
    require_exists(traces, "trace directory");
    trace::LoadReport report = trace::load_user_group(traces, filter);
    for (const auto& fail : report.failures) std::cerr << "warning: " << fail << '\n';

    std::vector<norm::TokenizedTrace> corpus;
    corpus.reserve(report.traces.size());
    std::size_t total_tokens = 0, total_lines = 0;
    for (const auto& t : report.traces) {
        norm::TokenizedTrace tt = norm::tokenize_trace(t);
        total_lines += tt.lines.size();
        for (const auto& l : tt.lines) total_tokens += l.size();
        corpus.push_back(std::move(tt));
    }

    norm::Vocab vocab = norm::build_vocab(corpus);
    fs::create_directories(out_dir);
    norm::save_corpus(corpus, fs::path(out_dir) / "corpus");
    norm::save_vocab(vocab, fs::path(out_dir) / "vocab.txt");
    norm::save_command_tokens(vocab, fs::path(out_dir) / "commands.txt");

    std::cout << "users: " << corpus.size() << "\ncommand lines: " << total_lines
              << "\ntokens: " << total_tokens << "\nvocabulary: " << vocab.size()
              << "\ncommand tokens: " << vocab.command_ids.size() << '\n';
    (void)cfg;
    return 0;
}

int run_kb_build(const cli::PipelineConfig& cfg, const std::string& man_dir,
                 const std::string& vocab_file, const std::string& commands_file, int k,
                 const std::string& out_file) {
    require_exists(man_dir, "man-page directory");
    std::vector<kb::ManDoc> docs = kb::load_man_dir(man_dir);

    std::set<std::string> allowed;
    const std::set<std::string>* allowed_ptr = nullptr;
    if (!vocab_file.empty()) {
        require_exists(vocab_file, "vocab file");
        norm::Vocab vocab = norm::load_vocab(
            vocab_file, !commands_file.empty() && fs::exists(commands_file)
                            ? fs::path(commands_file)
                            : fs::path{});
        if (!vocab.command_ids.empty())
            for (int id : vocab.command_ids) allowed.insert(vocab.id_to_token[id]);
        else
            allowed.insert(vocab.id_to_token.begin(), vocab.id_to_token.end());
        allowed_ptr = &allowed;
    }

    kb::KnowledgeBase base = kb::build_kb(docs, allowed_ptr, k);
    kb::save_kb(base, out_file);
    std::cout << "knowledge base: " << base.neighbors.size() << " commands, " << base.pairs.size()
              << " synonym pairs -> " << out_file << '\n';
    (void)cfg;
    return 0;
}

int run_embed(const cli::PipelineConfig& cfg, const std::string& corpus_dir,
              const std::string& vocab_file, const std::string& commands_file,
              const std::string& kb_file, const std::string& out_file) {
    CorpusData data = load_corpus_artifacts(corpus_dir, vocab_file, commands_file);
    emb::EmbeddingMatrix matrix = train_embedding(cfg.method, data, cfg, kb_file);
    emb::save_embeddings(matrix, data.vocab, out_file);
    std::cout << "embeddings: " << matrix.vocab_size << " x " << matrix.dim << " ("
              << emb::method_name(matrix.method) << ") -> " << out_file << '\n';
    return 0;
}

int run_train(const cli::PipelineConfig& cfg, const std::string& corpus_dir,
              const std::string& vocab_file, const std::string& commands_file,
              const std::string& embedding_file, const std::string& out_file) {
    CorpusData data = load_corpus_artifacts(corpus_dir, vocab_file, commands_file);
    require_exists(embedding_file, "embedding file");
    emb::EmbeddingMatrix matrix =
        emb::load_embeddings(embedding_file, data.vocab, emb::method_from_name(cfg.method));

    model::ModelConfig mc = model_config(cfg);
    model::PairSet pairs = model::make_training_pairs(data.streams, mc.context_len);
    if (pairs.size() < 2) throw std::runtime_error("not enough training pairs (need >= 2)");
    if (pairs.skipped_streams > 0)
        std::cout << "note: skipped " << pairs.skipped_streams << " streams shorter than L+1\n";

    eval::HoldoutSplit split = eval::holdout_split(pairs.size(), cfg.holdout_ratio);
    model::PairSet train_set = pairs.slice(0, split.train_end);
    model::PairSet val_set = pairs.slice(split.train_end, split.n);

    model::Model m = model::init_model(matrix, mc);
    model::TrainHistory history = model::train(m, train_set, val_set, mc);
    for (std::size_t e = 0; e < history.train_loss.size(); ++e)
        std::printf("epoch %3zu  train_loss %.5f  val_loss %.5f  val_acc %.4f\n", e + 1,
                    history.train_loss[e], history.val_loss[e], history.val_accuracy[e]);
    std::cout << "optimal epoch (val-loss minimum): " << eval::select_optimal_epoch(history)
              << '\n';

    model::save_model(m, out_file);
    std::cout << "model -> " << out_file << '\n';
    return 0;
}

int run_eval(const cli::PipelineConfig& cfg, const std::string& corpus_dir,
             const std::string& vocab_file, const std::string& commands_file,
             const std::string& embedding_file, const std::string& out_prefix) {
    CorpusData data = load_corpus_artifacts(corpus_dir, vocab_file, commands_file);
    require_exists(embedding_file, "embedding file");
    emb::EmbeddingMatrix matrix =
        emb::load_embeddings(embedding_file, data.vocab, emb::method_from_name(cfg.method));

    model::ModelConfig mc = model_config(cfg);
    model::PairSet pairs = model::make_training_pairs(data.streams, mc.context_len);

    eval::GridConfig grid;
    grid.batch_sizes = cli::parse_int_list(cfg.grid);
    grid.folds = cli::parse_int_list(cfg.folds);
    grid.epoch_cap = cfg.epoch_cap;
    grid.holdout_ratio = cfg.holdout_ratio;
    grid.score_line_starts_only = cfg.score_commands_only;

    std::vector<eval::EvalReport> reports;
    reports.push_back(eval::run_grid(cfg.method, matrix, pairs, mc, grid));

    // MRC/MFC baselines over the command-name stream
    std::vector<int> cmds = command_stream(data.streams);
    if (cmds.size() >= 2) {
        eval::HoldoutSplit split = eval::holdout_split(cmds.size(), grid.holdout_ratio);
        auto baseline_report = [&](const std::string& name, auto&& range) {
            eval::EvalRow row;
            row.batch_size = 0;
            row.optimal_epoch = 1;
            row.test_acc = range(split.train_end, cmds.size()) * 100.0;
            for (int k : grid.folds) {
                double mean = 0.0;
                eval::FoldSpec spec = eval::kfold_split(cmds.size(), k);
                for (const auto& [b, e] : spec.val_ranges) mean += range(b, e);
                mean /= static_cast<double>(k);
                if (k == 10) row.cv10 = mean * 100.0;
                if (k == 5) row.cv5 = mean * 100.0;
            }
            eval::EvalReport rep;
            rep.method = name;
            rep.rows.push_back(row);
            return rep;
        };
        reports.push_back(baseline_report("mrc", [&](std::size_t b, std::size_t e) {
            return eval::baseline_mrc_range(cmds, b, e);
        }));
        reports.push_back(baseline_report("mfc", [&](std::size_t b, std::size_t e) {
            return eval::baseline_mfc_range(cmds, data.vocab, b, e);
        }));
    }

    for (const auto& r : reports) std::cout << eval::format_report(r) << '\n';
    eval::write_reports_tsv(reports, out_prefix + ".tsv");
    eval::write_reports_json(reports, out_prefix + ".json");
    std::cout << "reports -> " << out_prefix << ".tsv, " << out_prefix << ".json\n";
    return 0;
}

std::vector<int> context_from_lines(const std::vector<std::string>& lines,
                                    const norm::Vocab& vocab,
                                    const std::map<std::string, std::string>& aliases,
                                    std::vector<std::string>* oov) {
    std::vector<int> ids;
    for (const std::string& line : lines) {
        for (const std::string& tok : norm::normalize_tokens(norm::expand_aliases(line, aliases))) {
            int id = vocab.id_of(tok);
            if (id < 0) {
                if (oov) oov->push_back(tok);
                id = vocab.most_frequent_id();
            }
            ids.push_back(id);
        }
    }
    return ids;
}

void print_suggestions(const std::vector<std::pair<std::string, double>>& items,
                       const std::vector<std::string>& oov, bool padded, bool as_json) {
    if (as_json) {
        nlohmann::json doc;
        doc["suggestions"] = nlohmann::json::array();
        for (const auto& [tok, p] : items)
            doc["suggestions"].push_back({{"token", tok}, {"probability", p}});
        doc["oov"] = oov;
        doc["padded"] = padded;
        std::cout << doc.dump() << '\n';
        return;
    }
    if (!oov.empty()) {
        std::cout << "note: unknown tokens mapped to the most frequent token:";
        for (const auto& t : oov) std::cout << ' ' << t;
        std::cout << '\n';
    }
    if (padded) std::cout << "note: context padded to full length\n";
    for (std::size_t i = 0; i < items.size(); ++i)
        std::printf("%zu. %s (%.4f)\n", i + 1, items[i].first.c_str(), items[i].second);
}

int run_predict(const cli::PipelineConfig& cfg, const std::string& model_file,
                const std::string& vocab_file, const std::string& commands_file,
                const std::string& aliases_file, const std::vector<std::string>& lines, int k,
                bool all_tokens, bool as_json) {
    require_exists(model_file, "model file");
    require_exists(vocab_file, "vocab file");
    norm::Vocab vocab = norm::load_vocab(
        vocab_file, fs::exists(commands_file) ? fs::path(commands_file) : fs::path{});
    model::Model m = model::load_model(model_file, &vocab);
    std::map<std::string, std::string> aliases;
    if (!aliases_file.empty()) aliases = cli::load_alias_file(aliases_file);

    std::vector<std::string> oov;
    std::vector<int> ids = context_from_lines(lines, vocab, aliases, &oov);
    model::Prediction pred = model::predict_top_k(m, vocab, ids, k, !all_tokens);
    print_suggestions(pred.items, oov, pred.padded, as_json);
    (void)cfg;
    return 0;
}

int run_repl(const cli::PipelineConfig& cfg, const std::string& model_file,
             const std::string& vocab_file, const std::string& commands_file,
             const std::string& aliases_file, int k, bool all_tokens, bool as_json,
             const std::string& record_file) {
    require_exists(model_file, "model file");
    require_exists(vocab_file, "vocab file");
    norm::Vocab vocab = norm::load_vocab(
        vocab_file, fs::exists(commands_file) ? fs::path(commands_file) : fs::path{});
    model::Model m = model::load_model(model_file, &vocab);

    cli::ReplState state;
    state.model = &m;
    state.vocab = &vocab;
    state.options.suggestions = k;
    state.options.restrict_to_commands = !all_tokens;
    if (!aliases_file.empty()) state.aliases = cli::load_alias_file(aliases_file);

    std::ofstream record;
    if (!record_file.empty()) {
        record.open(record_file, std::ios::app);
        if (!record) throw std::runtime_error("cannot open record file: " + record_file);
    }

#ifdef __unix__
    const bool interactive = isatty(fileno(stdin));
#else
    const bool interactive = true;
#endif
    if (interactive && !as_json)
        std::cout << "enter command lines; suggestions follow each line (ctrl-d to quit)\n";

    std::string line;
    while (true) {
        if (interactive && !as_json) std::cout << "> " << std::flush;
        if (!std::getline(std::cin, line)) break;
        cli::ReplResult r = cli::repl_step(state, line);
        if (record.is_open() && !line.empty()) record << line << '\n';
        print_suggestions(r.suggestions, r.oov, r.padded, as_json);
    }
    (void)cfg;
    return 0;
}

std::string find_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) return argv[i + 1];
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    if (const char* env = std::getenv("CMDSEER_CONFIG")) return env;
    return {};
}

}  // namespace

int main(int argc, char** argv) {
    cli::PipelineConfig cfg;
    try {
        std::string config_path = find_config_path(argc, argv);
        if (!config_path.empty()) cfg = cli::load_pipeline_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    CLI::App app{"next-command prediction toolkit: trace preprocessing, man-page synonym "
                 "knowledge base, command embeddings, LSTM next-token model, evaluation, REPL"};
    app.set_version_flag("--version", "cmdseer 0.1.0");
    app.require_subcommand(1);
    std::string config_dummy;
    app.add_option("--config", config_dummy,
                   "key=value config file (or set CMDSEER_CONFIG); flags take precedence");

    const std::string artifact_dir = cfg.artifact_dir;
    std::string def_corpus = cfg.corpus_dir().string();
    std::string def_vocab = cfg.vocab_file().string();
    std::string def_commands = cfg.commands_file().string();
    std::string def_kb = cfg.kb_file().string();
    std::string def_model = (fs::path(artifact_dir) / "model.bin").string();

    // ingest
    auto* ingest = app.add_subcommand("ingest", "parse raw traces into the normalized line format");
    std::string in_input = cfg.traces_dir, in_format = "normalized", in_filter = "*";
    std::string in_out = (fs::path(artifact_dir) / "traces").string();
    ingest->add_option("--input", in_input, "directory of per-user trace files")->required();
    ingest->add_option("--format", in_format, "input markup")
        ->check(CLI::IsMember({"normalized", "greenberg"}))
        ->capture_default_str();
    ingest->add_option("--filter", in_filter, "filename glob")->capture_default_str();
    ingest->add_option("--out", in_out, "output directory")->capture_default_str();

    // preprocess
    auto* preprocess = app.add_subcommand(
        "preprocess", "drop erroneous lines, expand aliases, substitute placeholders, build vocab");
    std::string pp_traces = (fs::path(artifact_dir) / "traces").string();
    std::string pp_filter = "*", pp_out = artifact_dir;
    preprocess->add_option("--traces", pp_traces, "normalized trace directory")->capture_default_str();
    preprocess->add_option("--filter", pp_filter, "filename glob")->capture_default_str();
    preprocess->add_option("--out", pp_out, "artifact directory")->capture_default_str();

    // kb-build
    auto* kb_cmd = app.add_subcommand("kb-build", "build the command synonym knowledge base");
    std::string kb_man = cfg.man_dir, kb_vocab = def_vocab, kb_commands = def_commands;
    std::string kb_out = def_kb;
    int kb_k = cfg.kb_k;
    kb_cmd->add_option("--man", kb_man, "directory of <command>.txt man-page text")->required();
    kb_cmd->add_option("--vocab", kb_vocab, "vocab file for the intersection step")->capture_default_str();
    kb_cmd->add_option("--commands", kb_commands, "command-token file")->capture_default_str();
    kb_cmd->add_option("--k", kb_k, "neighbors per command")->capture_default_str();
    kb_cmd->add_option("--out", kb_out, "output kb file")->capture_default_str();

    // embed
    auto* embed = app.add_subcommand("embed", "train command embeddings (sgns|glove|joint)");
    std::string em_corpus = def_corpus, em_vocab = def_vocab, em_commands = def_commands;
    std::string em_kb = def_kb, em_out;
    embed->add_option("--corpus", em_corpus, "corpus directory")->capture_default_str();
    embed->add_option("--vocab", em_vocab, "vocab file")->capture_default_str();
    embed->add_option("--commands", em_commands, "command-token file")->capture_default_str();
    embed->add_option("--method", cfg.method, "sgns|glove|joint")
        ->check(CLI::IsMember({"sgns", "glove", "joint"}))
        ->capture_default_str();
    embed->add_option("--dim", cfg.dim, "embedding dimensionality")->capture_default_str();
    embed->add_option("--window", cfg.window, "context window")->capture_default_str();
    embed->add_option("--lambda", cfg.lambda, "kb attraction weight (joint)")->capture_default_str();
    embed->add_flag("--weight-by-score", cfg.weight_kb_by_score,
                    "weight kb pairs by their similarity score");
    embed->add_option("--negatives", cfg.negatives, "negative samples (sgns)")->capture_default_str();
    embed->add_option("--epochs", cfg.embed_epochs, "training epochs")->capture_default_str();
    embed->add_option("--lr", cfg.embed_lr, "learning rate (glove/joint)")->capture_default_str();
    embed->add_option("--x-max", cfg.x_max, "glove weighting x_max")->capture_default_str();
    embed->add_option("--alpha", cfg.alpha, "glove weighting exponent")->capture_default_str();
    embed->add_option("--kb", em_kb, "knowledge base file (joint)")->capture_default_str();
    embed->add_option("--seed", cfg.seed, "rng seed")->capture_default_str();
    embed->add_option("--out", em_out, "output embedding file (default <artifacts>/<method>.emb.txt)");

    // train
    auto* train_cmd = app.add_subcommand("train", "train the LSTM next-token model");
    std::string tr_corpus = def_corpus, tr_vocab = def_vocab, tr_commands = def_commands;
    std::string tr_embedding, tr_out = def_model;
    train_cmd->add_option("--corpus", tr_corpus, "corpus directory")->capture_default_str();
    train_cmd->add_option("--vocab", tr_vocab, "vocab file")->capture_default_str();
    train_cmd->add_option("--commands", tr_commands, "command-token file")->capture_default_str();
    train_cmd->add_option("--embedding", tr_embedding, "embedding file")->required();
    train_cmd->add_option("--method", cfg.method, "method tag of the embedding")->capture_default_str();
    train_cmd->add_option("--batch-size", cfg.batch_size, "mini-batch size")->capture_default_str();
    train_cmd->add_option("--epochs", cfg.epochs, "training epochs")->capture_default_str();
    train_cmd->add_option("--lr", cfg.lr, "Adam learning rate")->capture_default_str();
    train_cmd->add_option("--dropout", cfg.dropout, "dropout rate")->capture_default_str();
    train_cmd->add_option("--context-len", cfg.context_len, "context window L")->capture_default_str();
    train_cmd->add_option("--hidden1", cfg.hidden1, "first LSTM hidden size")->capture_default_str();
    train_cmd->add_option("--hidden2", cfg.hidden2, "second LSTM hidden size")->capture_default_str();
    train_cmd->add_option("--holdout", cfg.holdout_ratio, "train fraction")->capture_default_str();
    train_cmd->add_option("--seed", cfg.seed, "rng seed")->capture_default_str();
    train_cmd->add_option("--out", tr_out, "output model file")->capture_default_str();

    // eval
    auto* eval_cmd = app.add_subcommand(
        "eval", "batch-size grid with optimal-epoch selection, k-fold CV, and MRC/MFC baselines");
    std::string ev_corpus = def_corpus, ev_vocab = def_vocab, ev_commands = def_commands;
    std::string ev_embedding, ev_out = (fs::path(artifact_dir) / "report").string();
    eval_cmd->add_option("--corpus", ev_corpus, "corpus directory")->capture_default_str();
    eval_cmd->add_option("--vocab", ev_vocab, "vocab file")->capture_default_str();
    eval_cmd->add_option("--commands", ev_commands, "command-token file")->capture_default_str();
    eval_cmd->add_option("--embedding", ev_embedding, "embedding file")->required();
    eval_cmd->add_option("--method", cfg.method, "method tag for the report")->capture_default_str();
    eval_cmd->add_option("--folds", cfg.folds, "fold counts, comma-separated")->capture_default_str();
    eval_cmd->add_option("--grid", cfg.grid, "batch sizes, comma-separated")->capture_default_str();
    eval_cmd->add_option("--epoch-cap", cfg.epoch_cap, "epoch cap per grid row")->capture_default_str();
    eval_cmd->add_option("--holdout", cfg.holdout_ratio, "train fraction")->capture_default_str();
    eval_cmd->add_flag("--score-commands-only", cfg.score_commands_only,
                       "score only command-name positions");
    eval_cmd->add_option("--lr", cfg.lr, "Adam learning rate")->capture_default_str();
    eval_cmd->add_option("--dropout", cfg.dropout, "dropout rate")->capture_default_str();
    eval_cmd->add_option("--context-len", cfg.context_len, "context window L")->capture_default_str();
    eval_cmd->add_option("--hidden1", cfg.hidden1, "first LSTM hidden size")->capture_default_str();
    eval_cmd->add_option("--hidden2", cfg.hidden2, "second LSTM hidden size")->capture_default_str();
    eval_cmd->add_option("--seed", cfg.seed, "rng seed")->capture_default_str();
    eval_cmd->add_option("--out", ev_out, "report path prefix")->capture_default_str();

    // predict
    auto* predict = app.add_subcommand("predict", "one-shot ranked suggestions for a context");
    std::string pr_model = def_model, pr_vocab = def_vocab, pr_commands = def_commands;
    std::string pr_aliases = cfg.aliases_file;
    std::vector<std::string> pr_lines;
    bool pr_all = false, pr_json = false;
    int pr_k = cfg.suggestions;
    predict->add_option("--model", pr_model, "model file")->capture_default_str();
    predict->add_option("--vocab", pr_vocab, "vocab file")->capture_default_str();
    predict->add_option("--commands", pr_commands, "command-token file")->capture_default_str();
    predict->add_option("--aliases", pr_aliases, "alias file (name=expansion lines)");
    predict->add_option("-k,--suggestions", pr_k, "suggestion count")->capture_default_str();
    predict->add_flag("--all-tokens", pr_all, "rank over the whole vocabulary, not just commands");
    predict->add_flag("--json", pr_json, "structured output");
    predict->add_option("lines", pr_lines, "context command lines, oldest first")->required();

    // repl
    auto* repl = app.add_subcommand("repl", "interactive next-command suggestions");
    std::string rp_model = def_model, rp_vocab = def_vocab, rp_commands = def_commands;
    std::string rp_aliases = cfg.aliases_file, rp_record;
    bool rp_all = false, rp_json = false;
    int rp_k = cfg.suggestions;
    repl->add_option("--model", rp_model, "model file")->capture_default_str();
    repl->add_option("--vocab", rp_vocab, "vocab file")->capture_default_str();
    repl->add_option("--commands", rp_commands, "command-token file")->capture_default_str();
    repl->add_option("--aliases", rp_aliases, "alias file (name=expansion lines)");
    repl->add_option("-k,--suggestions", rp_k, "suggestion count")->capture_default_str();
    repl->add_flag("--all-tokens", rp_all, "rank over the whole vocabulary, not just commands");
    repl->add_flag("--json", rp_json, "one JSON object per entered line");
    repl->add_option("--record", rp_record, "append entered lines to this history file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        std::cerr << app.help() << '\n';
        return 2;
    }

    try {
        if (ingest->parsed()) return run_ingest(cfg, in_input, in_format, in_filter, in_out);
        if (preprocess->parsed()) return run_preprocess(cfg, pp_traces, pp_filter, pp_out);
        if (kb_cmd->parsed()) return run_kb_build(cfg, kb_man, kb_vocab, kb_commands, kb_k, kb_out);
        if (embed->parsed()) {
            if (em_out.empty())
                em_out = (fs::path(artifact_dir) / (cfg.method + ".emb.txt")).string();
            return run_embed(cfg, em_corpus, em_vocab, em_commands, em_kb, em_out);
        }
        if (train_cmd->parsed())
            return run_train(cfg, tr_corpus, tr_vocab, tr_commands, tr_embedding, tr_out);
        if (eval_cmd->parsed())
            return run_eval(cfg, ev_corpus, ev_vocab, ev_commands, ev_embedding, ev_out);
        if (predict->parsed())
            return run_predict(cfg, pr_model, pr_vocab, pr_commands, pr_aliases, pr_lines, pr_k,
                               pr_all, pr_json);
        if (repl->parsed())
            return run_repl(cfg, rp_model, rp_vocab, rp_commands, rp_aliases, rp_k, rp_all, rp_json,
                            rp_record);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
