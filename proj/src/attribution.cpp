#include "sentord/attribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "sentord/encoders.hpp"
#include "sentord/errors.hpp"
#include "sentord/ranker.hpp"

using nlohmann::json;

namespace sentord {

PairAttribution word_importance_pair(ModelBundle& m, const std::vector<int>& ids_i,
                                     const std::vector<int>& ids_j) {
    Tape t;
    EncodedSentence enc_i = encode_sentence(t, m, ids_i);
    EncodedSentence enc_j = encode_sentence(t, m, ids_j);
    Var p = t.sigmoid(pair_logit(t, m, enc_i.sentence, enc_j.sentence));
    t.backward(p);

    PairAttribution out;
    out.p = t.value(p).item();
    const Tensor& g = t.grad(enc_i.rows);
    const std::size_t d = m.config.dim;
    out.gradients.reserve(enc_i.n_words);
    out.norms.reserve(enc_i.n_words);
    for (std::size_t k = 0; k < enc_i.n_words; ++k) {
        std::vector<double> row(d);
        double sq = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            row[c] = g.at(k, c);
            sq += row[c] * row[c];
        }
        out.gradients.push_back(std::move(row));
        out.norms.push_back(std::sqrt(sq));
    }
    m.zero_grads();
    return out;
}

TextImportance word_importance_text(ModelBundle& m, const Document& doc,
                                    const std::vector<int>* predicted_order) {
    const std::size_t n = doc.size();
    std::vector<int> arrangement;
    TextImportance out;
    if (predicted_order) {
        if (!is_permutation_0n(*predicted_order, n)) {
            throw InvalidOrder("predicted order is not a permutation of the document");
        }
        arrangement = *predicted_order;
        out.arrangement = "predicted";
    } else {
        arrangement = doc.gold_arrangement();
        out.arrangement = "gold";
    }

    out.scores.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
        if (doc.sentences[s].ids.empty()) throw DataError("document " + doc.id + " is not encoded");
        out.scores[s].assign(doc.sentences[s].ids.size(), 0.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto si = static_cast<std::size_t>(arrangement[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto sj = static_cast<std::size_t>(arrangement[j]);
            PairAttribution pa =
                word_importance_pair(m, doc.sentences[si].ids, doc.sentences[sj].ids);
            for (std::size_t k = 0; k < pa.norms.size(); ++k) {
                out.scores[si][k] += pa.p * pa.norms[k];
            }
        }
    }
    return out;
}

namespace {

std::string html_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&#39;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

double max_score(const TextImportance& ti) {
    double m = 0.0;
    for (const auto& sent : ti.scores)
        for (double v : sent) m = std::max(m, v);
    return m;
}

}  // namespace

void write_heatmap_json(const std::string& path, const Document& doc, const TextImportance& ti) {
    json sentences = json::array();
    for (std::size_t s = 0; s < doc.size(); ++s) {
        json words = json::array();
        const auto& toks = doc.sentences[s].tokens;
        for (std::size_t k = 0; k < ti.scores[s].size(); ++k) {
            words.push_back(json{{"w", toks[k]}, {"score", ti.scores[s][k]}});
        }
        sentences.push_back(json{{"words", std::move(words)}});
    }
    json out{{"id", doc.id}, {"arrangement", ti.arrangement}, {"sentences", std::move(sentences)}};
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path + " for writing");
    f << out.dump() << '\n';
    if (!f) throw DataError("failed writing " + path);
}

void write_heatmap_html(const std::string& path, const Document& doc, const TextImportance& ti) {
    const double max = max_score(ti);
    std::string body;
    body += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>";
    body += html_escape(doc.id);
    body += "</title>\n<style>\nbody { font-family: sans-serif; margin: 2em; }\n"
            ".sent { margin: 0.3em 0; }\n"
            ".w { padding: 0 0.15em; border-radius: 2px; }\n"
            ".meta { color: #666; }\n</style>\n</head>\n<body>\n<p class=\"meta\">";
    body += html_escape(doc.id) + " (arrangement: " + html_escape(ti.arrangement) + ")</p>\n";
    char buf[32];
    for (std::size_t s = 0; s < doc.size(); ++s) {
        body += "<div class=\"sent\">";
        const auto& toks = doc.sentences[s].tokens;
        for (std::size_t k = 0; k < ti.scores[s].size(); ++k) {
            const double alpha = max > 0.0 ? ti.scores[s][k] / max : 0.0;
            std::snprintf(buf, sizeof(buf), "%.6f", alpha);
            body += "<span class=\"w\" style=\"background: rgba(255,96,0,";
            body += buf;
            body += ")\">" + html_escape(toks[k]) + "</span> ";
        }
        body += "</div>\n";
    }
    body += "</body>\n</html>\n";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path + " for writing");
    f << body;
    if (!f) throw DataError("failed writing " + path);
}

std::string emit_heatmap(const std::string& dir, const Document& doc, const TextImportance& ti,
                         const std::string& format) {
    const std::string path = dir + "/" + doc.id + ".heatmap." + format;
    if (format == "json") {
        write_heatmap_json(path, doc, ti);
    } else if (format == "html") {
        write_heatmap_html(path, doc, ti);
    } else {
        throw UnsupportedFormat("unknown heatmap format \"" + format + "\"");
    }
    return path;
}

}  // namespace sentord
