#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sentord/attribution.hpp"
#include "sentord/corpus.hpp"
#include "sentord/errors.hpp"
#include "sentord/fetch.hpp"
#include "sentord/metrics.hpp"
#include "sentord/model_io.hpp"
#include "sentord/oracles.hpp"
#include "sentord/ordering.hpp"
#include "sentord/ranker.hpp"
#include "sentord/synthetic.hpp"

namespace {

using sentord::DataError;

/// Values for a subcommand from an optional JSON config file. Flags passed on
/// the command line still win: the file is applied before parsing.
class ConfigSection {
public:
    ConfigSection() = default;
    explicit ConfigSection(nlohmann::json j) : data_(std::move(j)) {}

    template <typename T>
    void get(const std::string& key, T& target) const {
        if (!data_.is_object()) return;
        const auto it = data_.find(key);
        if (it == data_.end()) return;
        try {
            target = it->get<T>();
        } catch (const nlohmann::json::exception&) {
            throw DataError("config key '" + key + "' has the wrong type");
        }
    }

private:
    nlohmann::json data_;
};

std::string find_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return argv[i + 1];
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    return {};
}

ConfigSection config_section(const std::string& path, const std::string& command) {
    if (path.empty()) return {};
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw DataError("config file " + path + " must hold a JSON object");
    if (j.contains(command) && j[command].is_object()) return ConfigSection(j[command]);
    return ConfigSection(j);
}

std::ofstream open_out(const std::string& path, bool append = false) {
    std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
    if (!out) throw DataError("cannot write " + path);
    return out;
}

void append_raw_jsonl(const std::string& path, const std::vector<sentord::RawRecord>& recs) {
    auto out = open_out(path, /*append=*/true);
    for (const auto& r : recs) {
        nlohmann::json j{{"id", r.id}, {"category", r.category}, {"abstract", r.abstract}};
        out << j.dump() << "\n";
    }
}

sentord::Vocabulary load_vocab_for(const sentord::ModelBundle& m, const std::string& path) {
    auto vocab = sentord::Vocabulary::load(path);
    if (vocab.size() != m.config.vocab_size) {
        throw DataError("vocabulary has " + std::to_string(vocab.size()) +
                        " entries but the model was trained with " +
                        std::to_string(m.config.vocab_size));
    }
    return vocab;
}

// --- fetch ---------------------------------------------------------------

struct FetchArgs {
    std::string category = "cs";
    std::size_t max_records = 100;
    std::string endpoint = "http://export.arxiv.org/api/query";
    std::size_t page_size = 100;
    double pause = 3.0;
    std::size_t retries = 3;
    double backoff = 1.0;
    std::string cursor;
    std::string out = "raw.jsonl";
};

void run_fetch(const FetchArgs& a) {
    sentord::FetchOptions opts;
    opts.category = a.category;
    opts.max_records = a.max_records;
    opts.endpoint = a.endpoint;
    opts.page_size = a.page_size;
    opts.page_pause_seconds = a.pause;
    opts.max_retries = a.retries;
    opts.backoff_seconds = a.backoff;
    opts.cursor_path = a.cursor;
    opts.log = [](const std::string& msg) { std::cerr << "fetch: " << msg << "\n"; };
    const auto records = sentord::fetch_arxiv(opts);
    if (a.cursor.empty())
        sentord::write_raw_jsonl(a.out, records);
    else
        append_raw_jsonl(a.out, records);
    std::cout << "fetched " << records.size() << " records -> " << a.out << "\n";
}

// --- prepare -------------------------------------------------------------

struct PrepareArgs {
    std::string in;
    std::string out_dir = "prepared";
    std::size_t min_freq = 3;
    double dev_frac = 0.1;
    double test_frac = 0.1;
    std::uint64_t seed = 1;
};

void run_prepare(const PrepareArgs& a) {
    const auto raw = sentord::read_raw(a.in);
    std::vector<sentord::Document> docs;
    docs.reserve(raw.size());
    std::size_t skipped = 0;
    for (const auto& r : raw) {
        try {
            docs.push_back(sentord::make_document(r.id, r.category, r.abstract));
        } catch (const sentord::EmptyText&) {
            ++skipped;
            std::cerr << "prepare: skipping empty record " << r.id << "\n";
        }
    }
    auto split = sentord::split_dataset(std::move(docs), a.dev_frac, a.test_frac, a.seed);
    const auto vocab = sentord::build_vocabulary(split.train, a.min_freq);

    std::filesystem::create_directories(a.out_dir);
    const auto path = [&](const char* name) { return a.out_dir + "/" + name; };
    sentord::write_prepared_jsonl(path("train.jsonl"), split.train);
    sentord::write_prepared_jsonl(path("dev.jsonl"), split.dev);
    sentord::write_prepared_jsonl(path("test.jsonl"), split.test);
    vocab.save(path("vocab.tsv"));

    nlohmann::json manifest;
    manifest["seed"] = a.seed;
    manifest["min_freq"] = a.min_freq;
    manifest["train"] = split.train.size();
    manifest["dev"] = split.dev.size();
    manifest["test"] = split.test.size();
    manifest["skipped"] = skipped;
    manifest["vocab_size"] = vocab.size();
    open_out(path("manifest.json")) << manifest.dump(2) << "\n";

    std::cout << "prepared " << split.train.size() << "/" << split.dev.size() << "/"
              << split.test.size() << " train/dev/test texts, vocabulary " << vocab.size()
              << " -> " << a.out_dir << "\n";
}

// --- train ---------------------------------------------------------------

struct TrainArgs {
    std::string train_path;
    std::string dev_path;
    std::string vocab_path;
    std::string out = "model.bin";
    std::string log_path;
    std::string encoder = "cbow";
    std::size_t dim = 25;
    std::size_t hidden = 100;
    std::size_t filter_len = 3;
    std::size_t batch = 128;
    double lr = 0.2;
    double l2 = 1e-4;
    double rho = 0.95;
    double eps = 1e-6;
    std::size_t epochs = 20;
    std::size_t patience = 3;
    std::uint64_t seed = 1;
    bool sgd = false;
    bool adjacent_only = false;
};

void run_train(const TrainArgs& a) {
    const auto vocab = sentord::Vocabulary::load(a.vocab_path);
    auto train_docs = sentord::read_documents_jsonl(a.train_path);
    auto dev_docs = sentord::read_documents_jsonl(a.dev_path);
    sentord::encode_corpus(train_docs, vocab);
    sentord::encode_corpus(dev_docs, vocab);

    sentord::TrainConfig cfg;
    cfg.encoder = sentord::parse_encoder(a.encoder);
    cfg.dim = a.dim;
    cfg.hidden = a.hidden;
    cfg.filter_len = a.filter_len;
    cfg.batch = a.batch;
    cfg.alpha = a.lr;
    cfg.lambda = a.l2;
    cfg.rho = a.rho;
    cfg.eps = a.eps;
    cfg.epochs = a.epochs;
    cfg.patience = a.patience;
    cfg.seed = a.seed;
    cfg.adadelta = !a.sgd;
    cfg.adjacent_only = a.adjacent_only;

    std::ofstream log_file;
    std::ostream* log_stream = &std::cerr;
    if (!a.log_path.empty()) {
        log_file = open_out(a.log_path);
        log_stream = &log_file;
    }
    const auto result = sentord::train_model(cfg, train_docs, dev_docs, vocab, log_stream);
    sentord::save_model(a.out, result.model);
    std::cout << "best dev pairwise accuracy " << result.best_dev_acc << " at epoch "
              << result.best_epoch << "; model -> " << a.out << "\n";
}

// --- predict ---------------------------------------------------------------

struct PredictArgs {
    std::string model;
    std::string in;
    std::string vocab_path;
    std::string out = "predictions.jsonl";
    std::size_t beam = 128;
    std::uint64_t shuffle_seed = 0;
    std::size_t threads = 1;
};

void run_predict(const PredictArgs& a) {
    auto loaded = sentord::load_model(a.model);
    const auto vocab = load_vocab_for(loaded.model, a.vocab_path);
    auto docs = sentord::read_documents_jsonl(a.in);
    sentord::encode_corpus(docs, vocab);

    sentord::PredictOptions opts;
    opts.beam_size = a.beam;
    opts.shuffle_seed = a.shuffle_seed;
    opts.threads = a.threads;
    const auto recs = sentord::predict_corpus(docs, loaded.model, opts);
    sentord::write_predictions_jsonl(a.out, recs);
    std::cout << recs.size() << " texts decoded (beam " << a.beam << ") -> " << a.out << "\n";
}

// --- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
    std::string pred;
    std::string corpus;
    std::string out_json;
    std::string out_tsv;
    std::size_t random_trials = 0;
    std::uint64_t seed = 1;
};

void run_evaluate(const EvaluateArgs& a) {
    const auto recs = sentord::read_predictions_jsonl(a.pred);
    std::map<std::string, std::string> categories;
    const std::map<std::string, std::string>* cat_ptr = nullptr;
    if (!a.corpus.empty()) {
        for (const auto& d : sentord::read_documents_jsonl(a.corpus)) categories[d.id] = d.category;
        cat_ptr = &categories;
    }
    const auto report = sentord::compute_report(recs, cat_ptr);
    std::cout << sentord::format_metrics_line(report.overall) << "\n";
    if (!a.out_json.empty()) sentord::write_report_json(a.out_json, report);
    if (!a.out_tsv.empty()) sentord::write_report_tsv(a.out_tsv, report);

    if (a.random_trials > 0) {
        std::vector<std::size_t> lengths;
        lengths.reserve(recs.size());
        for (const auto& r : recs) lengths.push_back(r.gold_order.size());
        const auto rb = sentord::random_baseline(lengths, a.random_trials, a.seed);
        std::cout << "random baseline (" << rb.trials << " trials): "
                  << sentord::format_metrics_line(rb.mc) << "\n";
        std::cout << "analytic: Rouge-S " << rb.analytic_rouge_s << " | Rouge-2 "
                  << rb.analytic_rouge_2 << " | Rouge-3 " << rb.analytic_rouge_3 << " | P-all "
                  << rb.analytic_p_all << " | P-begin " << rb.analytic_p_begin << "\n";
    }
}

// --- visualize ---------------------------------------------------------------

struct VisualizeArgs {
    std::string model;
    std::string in;
    std::string vocab_path;
    std::string out_dir = "heatmaps";
    std::string format = "html";
    bool use_predicted = false;
    std::size_t beam = 128;
};

void run_visualize(const VisualizeArgs& a) {
    auto loaded = sentord::load_model(a.model);
    const auto vocab = load_vocab_for(loaded.model, a.vocab_path);
    auto docs = sentord::read_documents_jsonl(a.in);
    sentord::encode_corpus(docs, vocab);
    std::filesystem::create_directories(a.out_dir);

    for (const auto& doc : docs) {
        std::vector<int> predicted;
        const std::vector<int>* order = nullptr;
        if (a.use_predicted) {
            const auto pm = sentord::build_pair_matrix(loaded.model, doc);
            predicted = sentord::beam_search_decode(pm, a.beam);
            order = &predicted;
        }
        const auto ti = sentord::word_importance_text(loaded.model, doc, order);
        sentord::emit_heatmap(a.out_dir, doc, ti, a.format);
    }
    std::cout << docs.size() << " heatmaps (" << a.format << ") -> " << a.out_dir << "\n";
}

// --- oracle-check ------------------------------------------------------------

struct OracleArgs {
    std::uint64_t seed = 1;
};

void run_oracle_check(const OracleArgs& a) {
    const auto failures = sentord::run_oracle_suite(a.seed);
    for (const auto& f : failures) std::cerr << "oracle: " << f << "\n";
    if (!failures.empty()) {
        throw sentord::OracleViolation(std::to_string(failures.size()) +
                                       " oracle checks failed");
    }
    std::cout << "all oracle checks passed (seed " << a.seed << ")\n";
}

// --- synth -------------------------------------------------------------------

struct SynthArgs {
    std::size_t texts = 1000;
    std::uint64_t seed = 7;
    std::string out = "synthetic.jsonl";
};

void run_synth(const SynthArgs& a) {
    const auto records = sentord::make_ordinal_corpus(a.texts, a.seed);
    sentord::write_raw_jsonl(a.out, records);
    std::cout << records.size() << " synthetic texts -> " << a.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sentence ordering toolkit: fetch, prepare, train, decode, evaluate"};
    app.require_subcommand(1);

    std::string config_path;
    try {
        config_path = find_config_path(argc, argv);

        FetchArgs fa;
        {
            const auto sec = config_section(config_path, "fetch");
            sec.get("category", fa.category);
            sec.get("max-records", fa.max_records);
            sec.get("endpoint", fa.endpoint);
            sec.get("page-size", fa.page_size);
            sec.get("pause", fa.pause);
            sec.get("retries", fa.retries);
            sec.get("backoff", fa.backoff);
            sec.get("cursor", fa.cursor);
            sec.get("out", fa.out);
        }
        auto* cmd_fetch = app.add_subcommand("fetch", "harvest abstracts from an Atom feed");
        cmd_fetch->add_option("--category", fa.category, "arXiv category prefix");
        cmd_fetch->add_option("--max-records", fa.max_records, "total records to fetch");
        cmd_fetch->add_option("--endpoint", fa.endpoint, "query endpoint URL");
        cmd_fetch->add_option("--page-size", fa.page_size, "records per request");
        cmd_fetch->add_option("--pause", fa.pause, "seconds between page requests");
        cmd_fetch->add_option("--retries", fa.retries, "attempts per page");
        cmd_fetch->add_option("--backoff", fa.backoff, "initial retry backoff seconds");
        cmd_fetch->add_option("--cursor", fa.cursor, "resume-offset file (enables append)");
        cmd_fetch->add_option("--out", fa.out, "output raw JSONL path");
        cmd_fetch->add_option("--config", config_path, "JSON config file");

        PrepareArgs pa;
        {
            const auto sec = config_section(config_path, "prepare");
            sec.get("in", pa.in);
            sec.get("out-dir", pa.out_dir);
            sec.get("min-freq", pa.min_freq);
            sec.get("dev-frac", pa.dev_frac);
            sec.get("test-frac", pa.test_frac);
            sec.get("seed", pa.seed);
        }
        auto* cmd_prepare = app.add_subcommand("prepare", "split sentences, build vocabulary, cut splits");
        auto* prep_in = cmd_prepare->add_option("--in", pa.in, "raw JSONL or plain-text input");
        cmd_prepare->add_option("--out-dir", pa.out_dir, "output directory");
        cmd_prepare->add_option("--min-freq", pa.min_freq, "vocabulary frequency cutoff");
        cmd_prepare->add_option("--dev-frac", pa.dev_frac, "dev fraction");
        cmd_prepare->add_option("--test-frac", pa.test_frac, "test fraction");
        cmd_prepare->add_option("--seed", pa.seed, "split shuffle seed");
        cmd_prepare->add_option("--config", config_path, "JSON config file");
        if (pa.in.empty()) prep_in->required();

        TrainArgs ta;
        {
            const auto sec = config_section(config_path, "train");
            sec.get("train", ta.train_path);
            sec.get("dev", ta.dev_path);
            sec.get("vocab", ta.vocab_path);
            sec.get("out", ta.out);
            sec.get("log", ta.log_path);
            sec.get("encoder", ta.encoder);
            sec.get("dim", ta.dim);
            sec.get("hidden", ta.hidden);
            sec.get("filter-len", ta.filter_len);
            sec.get("batch", ta.batch);
            sec.get("lr", ta.lr);
            sec.get("l2", ta.l2);
            sec.get("rho", ta.rho);
            sec.get("eps", ta.eps);
            sec.get("epochs", ta.epochs);
            sec.get("patience", ta.patience);
            sec.get("seed", ta.seed);
            sec.get("sgd", ta.sgd);
            sec.get("adjacent-only", ta.adjacent_only);
        }
        auto* cmd_train = app.add_subcommand("train", "fit the pairwise ordering model");
        auto* tr_train = cmd_train->add_option("--train", ta.train_path, "prepared train JSONL");
        auto* tr_dev = cmd_train->add_option("--dev", ta.dev_path, "prepared dev JSONL");
        auto* tr_vocab = cmd_train->add_option("--vocab", ta.vocab_path, "vocabulary TSV");
        cmd_train->add_option("--out", ta.out, "model output path");
        cmd_train->add_option("--log", ta.log_path, "epoch JSONL log path (default stderr)");
        cmd_train->add_option("--encoder", ta.encoder, "cbow, cnn or lstm");
        cmd_train->add_option("--dim", ta.dim, "embedding and sentence dimension");
        cmd_train->add_option("--hidden", ta.hidden, "head hidden units");
        cmd_train->add_option("--filter-len", ta.filter_len, "cnn window length");
        cmd_train->add_option("--batch", ta.batch, "mini-batch size");
        cmd_train->add_option("--lr", ta.lr, "update scale");
        cmd_train->add_option("--l2", ta.l2, "L2 penalty");
        cmd_train->add_option("--rho", ta.rho, "Adadelta decay");
        cmd_train->add_option("--eps", ta.eps, "Adadelta epsilon");
        cmd_train->add_option("--epochs", ta.epochs, "max epochs");
        cmd_train->add_option("--patience", ta.patience, "early-stop patience");
        cmd_train->add_option("--seed", ta.seed, "init and shuffle seed");
        cmd_train->add_flag("--sgd", ta.sgd, "plain SGD instead of Adadelta");
        cmd_train->add_flag("--adjacent-only", ta.adjacent_only, "train on adjacent pairs only");
        cmd_train->add_option("--config", config_path, "JSON config file");
        if (ta.train_path.empty()) tr_train->required();
        if (ta.dev_path.empty()) tr_dev->required();
        if (ta.vocab_path.empty()) tr_vocab->required();

        PredictArgs pra;
        {
            const auto sec = config_section(config_path, "predict");
            sec.get("model", pra.model);
            sec.get("in", pra.in);
            sec.get("vocab", pra.vocab_path);
            sec.get("out", pra.out);
            sec.get("beam", pra.beam);
            sec.get("shuffle-seed", pra.shuffle_seed);
            sec.get("threads", pra.threads);
        }
        auto* cmd_predict = app.add_subcommand("predict", "order texts with a trained model");
        auto* pr_model = cmd_predict->add_option("--model", pra.model, "model file");
        auto* pr_in = cmd_predict->add_option("--in", pra.in, "prepared JSONL");
        auto* pr_vocab = cmd_predict->add_option("--vocab", pra.vocab_path, "vocabulary TSV");
        cmd_predict->add_option("--out", pra.out, "predictions JSONL path");
        cmd_predict->add_option("--beam", pra.beam, "beam width");
        cmd_predict->add_option("--shuffle-seed", pra.shuffle_seed, "input shuffle seed");
        cmd_predict->add_option("--threads", pra.threads, "worker threads");
        cmd_predict->add_option("--config", config_path, "JSON config file");
        if (pra.model.empty()) pr_model->required();
        if (pra.in.empty()) pr_in->required();
        if (pra.vocab_path.empty()) pr_vocab->required();

        EvaluateArgs ea;
        {
            const auto sec = config_section(config_path, "evaluate");
            sec.get("pred", ea.pred);
            sec.get("corpus", ea.corpus);
            sec.get("out-json", ea.out_json);
            sec.get("out-tsv", ea.out_tsv);
            sec.get("random-trials", ea.random_trials);
            sec.get("seed", ea.seed);
        }
        auto* cmd_evaluate = app.add_subcommand("evaluate", "score predictions");
        auto* ev_pred = cmd_evaluate->add_option("--pred", ea.pred, "predictions JSONL");
        cmd_evaluate->add_option("--corpus", ea.corpus, "prepared JSONL for category breakdowns");
        cmd_evaluate->add_option("--out-json", ea.out_json, "full report JSON path");
        cmd_evaluate->add_option("--out-tsv", ea.out_tsv, "report TSV path");
        cmd_evaluate->add_option("--random-trials", ea.random_trials,
                                 "also print a random baseline over N trials");
        cmd_evaluate->add_option("--seed", ea.seed, "baseline RNG seed");
        cmd_evaluate->add_option("--config", config_path, "JSON config file");
        if (ea.pred.empty()) ev_pred->required();

        VisualizeArgs va;
        {
            const auto sec = config_section(config_path, "visualize");
            sec.get("model", va.model);
            sec.get("in", va.in);
            sec.get("vocab", va.vocab_path);
            sec.get("out-dir", va.out_dir);
            sec.get("format", va.format);
            sec.get("use-predicted", va.use_predicted);
            sec.get("beam", va.beam);
        }
        auto* cmd_visualize = app.add_subcommand("visualize", "word-importance heatmaps");
        auto* vi_model = cmd_visualize->add_option("--model", va.model, "model file");
        auto* vi_in = cmd_visualize->add_option("--in", va.in, "prepared JSONL");
        auto* vi_vocab = cmd_visualize->add_option("--vocab", va.vocab_path, "vocabulary TSV");
        cmd_visualize->add_option("--out-dir", va.out_dir, "output directory");
        cmd_visualize->add_option("--format", va.format, "json or html");
        cmd_visualize->add_flag("--use-predicted", va.use_predicted,
                                "attribute over the decoded order instead of gold");
        cmd_visualize->add_option("--beam", va.beam, "beam width for --use-predicted");
        cmd_visualize->add_option("--config", config_path, "JSON config file");
        if (va.model.empty()) vi_model->required();
        if (va.in.empty()) vi_in->required();
        if (va.vocab_path.empty()) vi_vocab->required();

        OracleArgs oa;
        {
            const auto sec = config_section(config_path, "oracle-check");
            sec.get("seed", oa.seed);
        }
        auto* cmd_oracle = app.add_subcommand("oracle-check", "run the independent reference checks");
        cmd_oracle->add_option("--seed", oa.seed, "oracle RNG seed");
        cmd_oracle->add_option("--config", config_path, "JSON config file");

        SynthArgs sa;
        {
            const auto sec = config_section(config_path, "synth");
            sec.get("texts", sa.texts);
            sec.get("seed", sa.seed);
            sec.get("out", sa.out);
        }
        auto* cmd_synth = app.add_subcommand("synth", "generate an ordinal-marker corpus");
        cmd_synth->add_option("--texts", sa.texts, "number of texts");
        cmd_synth->add_option("--seed", sa.seed, "generator seed");
        cmd_synth->add_option("--out", sa.out, "output raw JSONL path");
        cmd_synth->add_option("--config", config_path, "JSON config file");

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int rc = app.exit(e);
            return rc == 0 ? 0 : 1;
        }

        if (*cmd_fetch) run_fetch(fa);
        if (*cmd_prepare) run_prepare(pa);
        if (*cmd_train) run_train(ta);
        if (*cmd_predict) run_predict(pra);
        if (*cmd_evaluate) run_evaluate(ea);
        if (*cmd_visualize) run_visualize(va);
        if (*cmd_oracle) run_oracle_check(oa);
        if (*cmd_synth) run_synth(sa);
    } catch (const sentord::OracleViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const sentord::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sentord::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
