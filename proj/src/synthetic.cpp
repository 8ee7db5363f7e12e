#include "sentord/synthetic.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>

namespace sentord {

const std::vector<std::string> kOrdinalMarkers = {
    "first", "second", "third", "fourth", "fifth", "sixth",
};

namespace {

const std::array<const char*, 6> kMarkersCap = {
    "First", "Second", "Third", "Fourth", "Fifth", "Sixth",
};

const std::array<const char*, 40> kFiller = {
    "the",    "model",  "signal", "field",  "result", "method", "value",
    "graph",  "sample", "state",  "system", "matrix", "bound",  "error",
    "phase",  "energy", "space",  "group",  "kernel", "layer",  "node",
    "input",  "output", "weight", "score",  "index",  "vector", "scalar",
    "curve",  "ratio",  "limit",  "domain", "range",  "sum",    "product",
    "prior",  "noise",  "trace",  "rank",   "norm",
};

const std::array<const char*, 7> kCategories = {
    "physics", "math", "cs", "q-bio", "q-fin", "stat", "nlin",
};

}  // namespace

std::vector<RawRecord> make_ordinal_corpus(std::size_t texts, std::uint64_t seed) {
  std::vector<RawRecord> out;
  out.reserve(texts);
  for (std::size_t t = 0; t < texts; ++t) {
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (t + 1)));
    std::uniform_int_distribution<std::size_t> n_dist(3, 6);
    std::uniform_int_distribution<std::size_t> len_dist(4, 7);
    std::uniform_int_distribution<std::size_t> word_dist(0, kFiller.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = n_dist(rng);

    // Position 1 always opens with "First,". A tenth of the texts swap two
    // interior markers for the uninformative "Next,", so no model can fully
    // order them; a further slice uses a two-word phrase whose meaning lives
    // in the word order ("Alpha omega," = second slot, "Omega alpha," =
    // fourth), invisible to a bag-of-words encoder.
    std::vector<std::string> phrase(n);
    for (std::size_t s = 0; s < n; ++s) phrase[s] = std::string(kMarkersCap[s]) + ",";
    const double u = unit(rng);
    if (u < 0.10) {
      std::uniform_int_distribution<std::size_t> pos_dist(1, n - 1);
      const std::size_t a = pos_dist(rng);
      std::size_t b = pos_dist(rng);
      while (b == a) b = pos_dist(rng);
      phrase[a] = "Next,";
      phrase[b] = "Next,";
    } else if (u < 0.24 && n >= 4) {
      if (unit(rng) < 0.5)
        phrase[1] = "Alpha omega,";
      else
        phrase[3] = "Omega alpha,";
    }

    std::string text;
    for (std::size_t s = 0; s < n; ++s) {
      if (s > 0) text += ' ';
      text += phrase[s];
      const std::size_t len = len_dist(rng);
      for (std::size_t w = 0; w < len; ++w) {
        text += ' ';
        text += kFiller[word_dist(rng)];
      }
      text += '.';
    }
    RawRecord rec;
    rec.id = "ord-" + std::to_string(t);
    rec.category = kCategories[t % kCategories.size()];
    rec.abstract = std::move(text);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<Document> make_ordinal_documents(std::size_t texts, std::uint64_t seed) {
  auto raw = make_ordinal_corpus(texts, seed);
  std::vector<Document> docs;
  docs.reserve(raw.size());
  for (const auto& r : raw) docs.push_back(make_document(r.id, r.category, r.abstract));
  return docs;
}

std::vector<std::size_t> baseline_length_sample(std::size_t texts) {
  // Probabilities over lengths 2..10; they sum to 1 with mean 5.38.
  static const std::array<double, 9> probs = {
      0.11, 0.12, 0.15, 0.16, 0.15, 0.12, 0.09, 0.06, 0.04,
  };
  std::array<std::size_t, 9> counts{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    counts[k] = static_cast<std::size_t>(
        std::llround(probs[k] * static_cast<double>(texts)));
    assigned += counts[k];
  }
  // Rounding drift lands on the modal length.
  if (assigned > texts) {
    counts[3] -= assigned - texts;
  } else {
    counts[3] += texts - assigned;
  }
  std::vector<std::size_t> lengths;
  lengths.reserve(texts);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    for (std::size_t c = 0; c < counts[k]; ++c) lengths.push_back(k + 2);
  }
  return lengths;
}

}  // namespace sentord
