#pragma once

#include <string>
#include <vector>

#include "sentord/corpus.hpp"
#include "sentord/model.hpp"

namespace sentord {

struct PairAttribution {
    std::vector<std::vector<double>> gradients;  // d p_ij / d e_k per word k of s_i
    std::vector<double> norms;                   // L2 norm per word
    double p = 0.0;                              // p_ij
};

PairAttribution word_importance_pair(ModelBundle& m, const std::vector<int>& ids_i,
                                     const std::vector<int>& ids_j);

struct TextImportance {
    std::vector<std::vector<double>> scores;  // [sentence][word], aligned with doc.sentences
    std::string arrangement;                  // "gold" or "predicted"
};

/// A(w) = sum over later sentences j of p_ij * ||d p_ij / d e_w||_2. The sum
/// runs over the gold arrangement unless a predicted order is supplied.
TextImportance word_importance_text(ModelBundle& m, const Document& doc,
                                    const std::vector<int>* predicted_order = nullptr);

void write_heatmap_json(const std::string& path, const Document& doc, const TextImportance& ti);
void write_heatmap_html(const std::string& path, const Document& doc, const TextImportance& ti);

/// format is "json" or "html"; writes <dir>/<id>.heatmap.<format>.
std::string emit_heatmap(const std::string& dir, const Document& doc, const TextImportance& ti,
                         const std::string& format);

}  // namespace sentord
