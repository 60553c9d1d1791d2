#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "cmdseer/cooccurrence.hpp"
#include "cmdseer/embedding.hpp"
#include "cmdseer/eval.hpp"
#include "cmdseer/glove.hpp"
#include "cmdseer/kb.hpp"
#include "cmdseer/lstm.hpp"
#include "cmdseer/normalize.hpp"
#include "cmdseer/porter.hpp"
#include "cmdseer/repl.hpp"
#include "cmdseer/sgns.hpp"
#include "cmdseer/trace.hpp"

namespace py = pybind11;
using namespace cmdseer;

namespace {

std::vector<norm::TokenizedTrace> to_corpus(
    const std::vector<std::pair<std::string, std::vector<std::vector<std::string>>>>& users) {
    std::vector<norm::TokenizedTrace> corpus;
    corpus.reserve(users.size());
    for (const auto& [user, lines] : users) corpus.push_back({user, lines});
    return corpus;
}

py::dict history_to_dict(const model::TrainHistory& h) {
    py::dict d;
    d["train_loss"] = h.train_loss;
    d["val_loss"] = h.val_loss;
    d["val_accuracy"] = h.val_accuracy;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "next-command prediction toolkit: preprocessing, synonym knowledge base, "
              "command embeddings, LSTM next-token model, evaluation";

    // --- traces -------------------------------------------------------------
    py::enum_<trace::Tag>(m, "Tag")
        .value("SessionStart", trace::Tag::SessionStart)
        .value("Command", trace::Tag::Command)
        .value("Directory", trace::Tag::Directory)
        .value("AliasDef", trace::Tag::AliasDef)
        .value("ErrorMark", trace::Tag::ErrorMark)
        .value("Other", trace::Tag::Other);

    py::class_<trace::RawRecord>(m, "RawRecord")
        .def_readonly("tag", &trace::RawRecord::tag)
        .def_readonly("payload", &trace::RawRecord::payload)
        .def_readonly("line_no", &trace::RawRecord::line_no)
        .def("__repr__", [](const trace::RawRecord& r) {
            return std::string("RawRecord(") + trace::tag_name(r.tag) + ", '" + r.payload + "')";
        });

    py::class_<trace::UserTrace>(m, "UserTrace")
        .def_readonly("user_id", &trace::UserTrace::user_id)
        .def_readonly("records", &trace::UserTrace::records)
        .def_readonly("aliases", &trace::UserTrace::aliases)
        .def_readonly("unrecognized", &trace::UserTrace::unrecognized);

    m.def("parse_trace", [](const std::string& text, const std::string& user_id) {
        std::istringstream in(text);
        return trace::parse_trace(in, user_id);
    }, py::arg("text"), py::arg("user_id"));
    m.def("serialize_trace", &trace::serialize_trace);
    m.def("greenberg_to_normalized", [](const std::string& text) {
        std::istringstream in(text);
        return trace::greenberg_to_normalized(in);
    });

    // --- normalization ------------------------------------------------------
    m.def("expand_aliases", &norm::expand_aliases, py::arg("line"), py::arg("aliases"));
    m.def("normalize_tokens", &norm::normalize_tokens, py::arg("line"));
    m.def("tokenize_trace", [](const trace::UserTrace& t) { return norm::tokenize_trace(t).lines; });

    py::class_<norm::Vocab>(m, "Vocab")
        .def_property_readonly("size", &norm::Vocab::size)
        .def_readonly("tokens", &norm::Vocab::id_to_token)
        .def_readonly("counts", &norm::Vocab::counts)
        .def_readonly("command_ids", &norm::Vocab::command_ids)
        .def("id_of", &norm::Vocab::id_of)
        .def("is_command", &norm::Vocab::is_command);

    py::class_<norm::TokenStream>(m, "TokenStream")
        .def_readonly("user_id", &norm::TokenStream::user_id)
        .def_readonly("ids", &norm::TokenStream::ids)
        .def_readonly("line_starts", &norm::TokenStream::line_starts);

    m.def("build_vocab",
          [](const std::vector<std::pair<std::string, std::vector<std::vector<std::string>>>>& u) {
              return norm::build_vocab(to_corpus(u));
          },
          py::arg("corpus"), "corpus: list of (user_id, token lines)");
    m.def("encode",
          [](const std::vector<std::pair<std::string, std::vector<std::vector<std::string>>>>& u,
             const norm::Vocab& v) { return norm::encode(to_corpus(u), v); },
          py::arg("corpus"), py::arg("vocab"));
    m.def("save_vocab", &norm::save_vocab);
    m.def("load_vocab", &norm::load_vocab, py::arg("vocab_file"),
          py::arg("commands_file") = std::filesystem::path{});

    // --- knowledge base -----------------------------------------------------
    m.def("porter_stem", [](const std::string& w) { return kb::porter_stem(w); });
    m.def("clean_doc", [](const std::string& command, const std::string& body) {
        return kb::clean_doc({command, body});
    }, py::arg("command"), py::arg("body"));

    py::class_<kb::SynonymPair>(m, "SynonymPair")
        .def_readonly("a", &kb::SynonymPair::a)
        .def_readonly("b", &kb::SynonymPair::b)
        .def_readonly("score", &kb::SynonymPair::score);

    py::class_<kb::KnowledgeBase>(m, "KnowledgeBase")
        .def_readonly("pairs", &kb::KnowledgeBase::pairs)
        .def_readonly("neighbors", &kb::KnowledgeBase::neighbors);

    m.def("build_kb",
          [](const std::map<std::string, std::string>& docs,
             const std::optional<std::set<std::string>>& commands, int k) {
              std::vector<kb::ManDoc> v;
              for (const auto& [cmd, body] : docs) v.push_back({cmd, body});
              return kb::build_kb(v, commands ? &*commands : nullptr, k);
          },
          py::arg("docs"), py::arg("commands") = std::nullopt, py::arg("k") = 5);
    m.def("save_kb", &kb::save_kb);
    m.def("load_kb", &kb::load_kb, py::arg("file"), py::arg("k") = 5);

    // --- embeddings -----------------------------------------------------------
    py::enum_<emb::Method>(m, "Method")
        .value("Sgns", emb::Method::Sgns)
        .value("Glove", emb::Method::Glove)
        .value("Joint", emb::Method::Joint);

    py::class_<emb::CoocMatrix>(m, "CoocMatrix")
        .def_property_readonly("vocab_size", &emb::CoocMatrix::vocab_size)
        .def_property_readonly("nnz", &emb::CoocMatrix::nnz)
        .def("at", &emb::CoocMatrix::at)
        .def("entries", &emb::CoocMatrix::sorted_entries);

    m.def("build_cooccurrence", &emb::build_cooccurrence, py::arg("streams"),
          py::arg("vocab_size"), py::arg("window") = 15);

    py::class_<emb::EmbeddingMatrix>(m, "EmbeddingMatrix")
        .def_readonly("vocab_size", &emb::EmbeddingMatrix::vocab_size)
        .def_readonly("dim", &emb::EmbeddingMatrix::dim)
        .def_readonly("method", &emb::EmbeddingMatrix::method)
        .def("row", [](const emb::EmbeddingMatrix& e, int i) {
            auto r = e.row(i);
            return std::vector<double>(r.begin(), r.end());
        })
        .def("rows", [](const emb::EmbeddingMatrix& e) {
            std::vector<std::vector<double>> out;
            out.reserve(e.vocab_size);
            for (int i = 0; i < e.vocab_size; ++i) {
                auto r = e.row(i);
                out.emplace_back(r.begin(), r.end());
            }
            return out;
        });

    m.def("train_glove",
          [](const emb::CoocMatrix& cooc, int dim, int epochs, double lr, double x_max,
             double alpha, std::uint64_t seed, bool with_loss) {
              emb::GloveConfig cfg{dim, epochs, lr, x_max, alpha, seed};
              std::vector<double> loss;
              auto e = emb::train_glove(cooc, cfg, with_loss ? &loss : nullptr);
              return py::make_tuple(e, loss);
          },
          py::arg("cooc"), py::arg("dim") = 50, py::arg("epochs") = 50, py::arg("lr") = 0.05,
          py::arg("x_max") = 100.0, py::arg("alpha") = 0.75, py::arg("seed") = 42,
          py::arg("with_loss") = false);
    m.def("train_joint",
          [](const emb::CoocMatrix& cooc, const kb::KnowledgeBase& base, const norm::Vocab& vocab,
             double lam, bool weight_by_score, int dim, int epochs, double lr, double x_max,
             double alpha, std::uint64_t seed, bool with_loss) {
              emb::GloveConfig cfg{dim, epochs, lr, x_max, alpha, seed};
              emb::KbPairs pairs = emb::resolve_kb(base, vocab);
              std::vector<double> loss;
              auto e = emb::train_joint(cooc, pairs, emb::JointConfig{lam, weight_by_score}, cfg,
                                        with_loss ? &loss : nullptr);
              return py::make_tuple(e, loss);
          },
          py::arg("cooc"), py::arg("kb"), py::arg("vocab"), py::arg("lambda_") = 1.0,
          py::arg("weight_by_score") = false, py::arg("dim") = 50, py::arg("epochs") = 50,
          py::arg("lr") = 0.05, py::arg("x_max") = 100.0, py::arg("alpha") = 0.75,
          py::arg("seed") = 42, py::arg("with_loss") = false);
    m.def("train_sgns",
          [](const std::vector<std::vector<int>>& streams, int vocab_size, int dim, int window,
             int negatives, int epochs, double lr, std::uint64_t seed, bool with_loss) {
              emb::SgnsConfig cfg{dim, window, negatives, epochs, lr, seed};
              std::vector<double> loss;
              auto e = emb::train_sgns(streams, vocab_size, cfg, with_loss ? &loss : nullptr);
              return py::make_tuple(e, loss);
          },
          py::arg("streams"), py::arg("vocab_size"), py::arg("dim") = 50, py::arg("window") = 15,
          py::arg("negatives") = 5, py::arg("epochs") = 5, py::arg("lr") = 0.025,
          py::arg("seed") = 42, py::arg("with_loss") = false);
    m.def("nearest_neighbors", &emb::nearest_neighbors, py::arg("embeddings"), py::arg("vocab"),
          py::arg("token"), py::arg("k"));
    m.def("save_embeddings", &emb::save_embeddings);
    m.def("load_embeddings", &emb::load_embeddings, py::arg("file"), py::arg("vocab"),
          py::arg("method") = emb::Method::Glove);

    // --- sequence model -------------------------------------------------------
    py::class_<model::ModelConfig>(m, "ModelConfig")
        .def(py::init<>())
        .def_readwrite("context_len", &model::ModelConfig::context_len)
        .def_readwrite("hidden1", &model::ModelConfig::hidden1)
        .def_readwrite("hidden2", &model::ModelConfig::hidden2)
        .def_readwrite("dropout", &model::ModelConfig::dropout)
        .def_readwrite("learning_rate", &model::ModelConfig::learning_rate)
        .def_readwrite("batch_size", &model::ModelConfig::batch_size)
        .def_readwrite("max_epochs", &model::ModelConfig::max_epochs)
        .def_readwrite("seed", &model::ModelConfig::seed)
        .def_readwrite("embedding_trainable", &model::ModelConfig::embedding_trainable);

    py::class_<model::PairSet>(m, "PairSet")
        .def_property_readonly("size", &model::PairSet::size)
        .def_property_readonly("context_len", &model::PairSet::context_len)
        .def_readonly("targets", &model::PairSet::targets)
        .def_readonly("skipped_streams", &model::PairSet::skipped_streams)
        .def("context", [](const model::PairSet& p, std::size_t i) {
            std::vector<int> out(p.context_len());
            for (int t = 0; t < p.context_len(); ++t)
                out[t] = p.contexts(t, static_cast<Eigen::Index>(i));
            return out;
        })
        .def("slice", &model::PairSet::slice);

    m.def("make_training_pairs", &model::make_training_pairs, py::arg("streams"),
          py::arg("context_len"));

    py::class_<model::Model>(m, "Model")
        .def_property_readonly("vocab_size", &model::Model::vocab_size)
        .def_property_readonly("embed_dim", &model::Model::embed_dim);

    m.def("init_model", &model::init_model, py::arg("embeddings"), py::arg("config"));
    m.def("train",
          [](model::Model& m_, const model::PairSet& train_set, const model::PairSet& val_set,
             const model::ModelConfig& cfg) {
              return history_to_dict(model::train(m_, train_set, val_set, cfg));
          },
          py::arg("model"), py::arg("train_set"), py::arg("val_set"), py::arg("config"));
    m.def("evaluate",
          [](const model::Model& m_, const model::PairSet& pairs, bool line_starts_only) {
              auto r = model::evaluate(m_, pairs, line_starts_only);
              return py::make_tuple(r.loss, r.accuracy, r.scored);
          },
          py::arg("model"), py::arg("pairs"), py::arg("line_starts_only") = false);
    m.def("forward", [](const model::Model& m_, const std::vector<int>& context) {
        Eigen::VectorXd p = model::forward(m_, context);
        return std::vector<double>(p.data(), p.data() + p.size());
    }, py::arg("model"), py::arg("context"));
    m.def("predict_top_k",
          [](const model::Model& m_, const norm::Vocab& vocab, const std::vector<int>& context,
             int k, bool restrict_to_commands) {
              auto pred = model::predict_top_k(m_, vocab, context, k, restrict_to_commands);
              return py::make_tuple(pred.items, pred.padded);
          },
          py::arg("model"), py::arg("vocab"), py::arg("context"), py::arg("k") = 5,
          py::arg("restrict_to_commands") = true);
    m.def("save_model", &model::save_model);
    m.def("load_model", [](const std::filesystem::path& p) { return model::load_model(p); });

    // --- evaluation -------------------------------------------------------------
    m.def("holdout_split", [](std::size_t n, double ratio) {
        auto s = eval::holdout_split(n, ratio);
        return py::make_tuple(s.train_end, s.n);
    }, py::arg("n"), py::arg("ratio") = 0.9);
    m.def("kfold_split", [](std::size_t n, int k) { return eval::kfold_split(n, k).val_ranges; },
          py::arg("n"), py::arg("k"));
    m.def("select_optimal_epoch", [](const std::vector<double>& val_loss) {
        model::TrainHistory h;
        h.val_loss = val_loss;
        return eval::select_optimal_epoch(h);
    }, py::arg("val_loss"));
    m.def("baseline_mrc", &eval::baseline_mrc, py::arg("stream"));
    m.def("baseline_mfc", &eval::baseline_mfc, py::arg("stream"), py::arg("vocab"));

    m.attr("__version__") = "0.1.0";
}
