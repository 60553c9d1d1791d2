#include "cmdseer/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cmdseer::eval {

HoldoutSplit holdout_split(std::size_t n, double ratio) {
    if (n < 2) throw std::runtime_error("holdout split needs at least 2 examples");
    if (!(ratio > 0.0 && ratio < 1.0)) throw std::runtime_error("holdout ratio must be in (0,1)");
    HoldoutSplit s;
    s.n = n;
    s.train_end = static_cast<std::size_t>(ratio * static_cast<double>(n));
    s.train_end = std::min(std::max<std::size_t>(s.train_end, 1), n - 1);
    return s;
}

FoldSpec kfold_split(std::size_t n, int k) {
    if (k < 2) throw std::runtime_error("k-fold split needs k >= 2");
    if (n < static_cast<std::size_t>(k))
        throw std::runtime_error("k-fold split needs at least k examples (n=" + std::to_string(n) +
                                 ", k=" + std::to_string(k) + ")");
    FoldSpec spec;
    spec.k = k;
    const std::size_t base = n / static_cast<std::size_t>(k);
    const std::size_t extra = n % static_cast<std::size_t>(k);
    std::size_t begin = 0;
    for (int f = 0; f < k; ++f) {
        std::size_t size = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
        spec.val_ranges.emplace_back(begin, begin + size);
        begin += size;
    }
    return spec;
}

int select_optimal_epoch(const model::TrainHistory& history) {
    if (history.val_loss.empty()) throw std::runtime_error("empty training history");
    std::size_t best = 0;
    for (std::size_t i = 1; i < history.val_loss.size(); ++i)
        if (history.val_loss[i] < history.val_loss[best]) best = i;
    return static_cast<int>(best) + 1;
}

double baseline_mrc_range(const std::vector<int>& stream, std::size_t begin, std::size_t end) {
    if (stream.size() < 2) throw std::runtime_error("baseline needs a stream of length >= 2");
    end = std::min(end, stream.size());
    std::size_t scored = 0, correct = 0;
    for (std::size_t t = std::max<std::size_t>(begin, 1); t < end; ++t) {
        ++scored;
        if (stream[t] == stream[t - 1]) ++correct;
    }
    return scored ? static_cast<double>(correct) / static_cast<double>(scored) : 0.0;
}

double baseline_mfc_range(const std::vector<int>& stream, const norm::Vocab& vocab,
                          std::size_t begin, std::size_t end) {
    if (stream.size() < 2) throw std::runtime_error("baseline needs a stream of length >= 2");
    end = std::min(end, stream.size());
    std::vector<std::int64_t> counts(vocab.size(), 0);
    int best = -1;  // most frequent so far, count ties by token text
    std::size_t scored = 0, correct = 0;

    auto account = [&](int id) {
        ++counts[id];
        if (best < 0 || counts[id] > counts[best] ||
            (counts[id] == counts[best] && vocab.id_to_token[id] < vocab.id_to_token[best]))
            best = id;
    };

    for (std::size_t t = 0; t < end; ++t) {
        if (t >= std::max<std::size_t>(begin, 1)) {
            ++scored;
            if (stream[t] == best) ++correct;
        }
        account(stream[t]);
    }
    return scored ? static_cast<double>(correct) / static_cast<double>(scored) : 0.0;
}

double baseline_mrc(const std::vector<int>& stream) {
    return baseline_mrc_range(stream, 1, stream.size());
}

double baseline_mfc(const std::vector<int>& stream, const norm::Vocab& vocab) {
    return baseline_mfc_range(stream, vocab, 1, stream.size());
}

EvalRow EvalReport::maxima() const {
    EvalRow m;
    bool any = false;
    for (const EvalRow& r : rows) {
        if (!r.error.empty()) continue;
        if (!any) {
            m = r;
            m.error.clear();
            any = true;
            continue;
        }
        m.batch_size = std::max(m.batch_size, r.batch_size);
        m.optimal_epoch = std::max(m.optimal_epoch, r.optimal_epoch);
        m.test_acc = std::max(m.test_acc, r.test_acc);
        m.cv10 = std::max(m.cv10, r.cv10);
        m.cv5 = std::max(m.cv5, r.cv5);
    }
    return m;
}

CvResult kfold_cv(const emb::EmbeddingMatrix& embeddings, const model::PairSet& pairs, int k,
                  int epochs, const model::ModelConfig& cfg, bool line_starts_only) {
    FoldSpec spec = kfold_split(pairs.size(), k);
    CvResult result;
    for (const auto& [vb, ve] : spec.val_ranges) {
        std::vector<std::size_t> train_idx;
        train_idx.reserve(pairs.size() - (ve - vb));
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if (i < vb || i >= ve) train_idx.push_back(i);

        model::PairSet train_part = pairs.gather(train_idx);
        model::PairSet val_part = pairs.slice(vb, ve);

        model::ModelConfig fold_cfg = cfg;
        fold_cfg.max_epochs = epochs;
        model::Model fold_model = model::init_model(embeddings, fold_cfg);
        model::train(fold_model, train_part, val_part, fold_cfg, line_starts_only);
        model::EvalResult r = model::evaluate(fold_model, val_part, line_starts_only);
        result.fold_accuracy.push_back(r.accuracy);
    }
    double sum = std::accumulate(result.fold_accuracy.begin(), result.fold_accuracy.end(), 0.0);
    result.mean_accuracy = sum / static_cast<double>(result.fold_accuracy.size());
    return result;
}

EvalReport run_grid(const std::string& method, const emb::EmbeddingMatrix& embeddings,
                    const model::PairSet& pairs, const model::ModelConfig& base,
                    const GridConfig& grid) {
    if (grid.batch_sizes.empty()) throw std::runtime_error("empty batch-size grid");
    EvalReport report;
    report.method = method;

    HoldoutSplit split = holdout_split(pairs.size(), grid.holdout_ratio);
    model::PairSet train_set = pairs.slice(0, split.train_end);
    model::PairSet test_set = pairs.slice(split.train_end, split.n);

    for (int batch : grid.batch_sizes) {
        EvalRow row;
        row.batch_size = batch;
        try {
            model::ModelConfig cfg = base;
            cfg.batch_size = batch;
            cfg.max_epochs = grid.epoch_cap;

            model::Model m = model::init_model(embeddings, cfg);
            model::TrainHistory history =
                model::train(m, train_set, test_set, cfg, grid.score_line_starts_only);

            // the trainer is seed-deterministic, so the recorded accuracy at
            // the optimal epoch equals a fresh run stopped there
            row.optimal_epoch = select_optimal_epoch(history);
            row.test_acc = history.val_accuracy[row.optimal_epoch - 1] * 100.0;

            for (int k : grid.folds) {
                CvResult cv = kfold_cv(embeddings, pairs, k, row.optimal_epoch, cfg,
                                       grid.score_line_starts_only);
                if (k == 10)
                    row.cv10 = cv.mean_accuracy * 100.0;
                else if (k == 5)
                    row.cv5 = cv.mean_accuracy * 100.0;
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

namespace {

std::string fmt_pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

bool is_baseline(const EvalReport& r) {
    return r.method == "mrc" || r.method == "mfc";
}

}  // namespace

std::string format_report(const EvalReport& report) {
    std::ostringstream out;
    out << "method: " << report.method << '\n';
    out << "batch_size\toptimal_epoch\ttest_acc\tcv10\tcv5\n";
    for (const EvalRow& r : report.rows) {
        if (!r.error.empty()) {
            out << r.batch_size << "\t-\t-\t-\t-\terror: " << r.error << '\n';
            continue;
        }
        if (is_baseline(report))
            out << '-' << '\t' << '-';
        else
            out << r.batch_size << '\t' << r.optimal_epoch;
        out << '\t' << fmt_pct(r.test_acc) << '\t' << fmt_pct(r.cv10) << '\t' << fmt_pct(r.cv5)
            << '\n';
    }
    EvalRow m = report.maxima();
    out << "Max\t\t" << fmt_pct(m.test_acc) << '\t' << fmt_pct(m.cv10) << '\t' << fmt_pct(m.cv5)
        << '\n';
    return out.str();
}

void write_reports_tsv(const std::vector<EvalReport>& reports, const std::filesystem::path& file) {
    std::ofstream f(file);
    if (!f) throw std::runtime_error("cannot write report file: " + file.string());
    f << "method\tbatch_size\toptimal_epoch\ttest_acc\tcv10\tcv5\terror\n";
    for (const auto& report : reports) {
        for (const EvalRow& r : report.rows) {
            f << report.method << '\t';
            if (is_baseline(report))
                f << "-\t-";
            else
                f << r.batch_size << '\t' << r.optimal_epoch;
            f << '\t' << fmt_pct(r.test_acc) << '\t' << fmt_pct(r.cv10) << '\t' << fmt_pct(r.cv5)
              << '\t' << r.error << '\n';
        }
        EvalRow m = report.maxima();
        f << report.method << "\tmax\t\t" << fmt_pct(m.test_acc) << '\t' << fmt_pct(m.cv10) << '\t'
          << fmt_pct(m.cv5) << "\t\n";
    }
}

void write_reports_json(const std::vector<EvalReport>& reports, const std::filesystem::path& file) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& report : reports) {
        nlohmann::json rows = nlohmann::json::array();
        for (const EvalRow& r : report.rows) {
            nlohmann::json row{{"batch_size", r.batch_size},
                               {"optimal_epoch", r.optimal_epoch},
                               {"test_acc", r.test_acc},
                               {"cv10", r.cv10},
                               {"cv5", r.cv5}};
            if (!r.error.empty()) row["error"] = r.error;
            rows.push_back(std::move(row));
        }
        EvalRow m = report.maxima();
        doc.push_back({{"method", report.method},
                       {"rows", std::move(rows)},
                       {"max", {{"test_acc", m.test_acc}, {"cv10", m.cv10}, {"cv5", m.cv5}}}});
    }
    std::ofstream f(file);
    if (!f) throw std::runtime_error("cannot write report file: " + file.string());
    f << doc.dump(2) << '\n';
}

}  // namespace cmdseer::eval
