#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "confkern/sparse_vector.hpp"

namespace confkern {

struct Document {
    std::string id;
    std::string raw_text;
    std::vector<std::string> tokens;
    std::string label;                 // assigned topic ("" if none)
    std::vector<std::string> topics;   // all selected topics on the document
};

using StopwordSet = std::unordered_set<std::string>;

/// The pinned English stopword list shipped with the repo
/// (data/stopwords_english.txt); 179 terms.
const StopwordSet& builtin_stopwords();

/// One term per line, UTF-8; '#' starts a comment line. Throws DataError if
/// unreadable.
StopwordSet load_stopwords(const std::filesystem::path& path);

/// lowercase -> split on non-letters -> drop stopwords -> drop tokens shorter
/// than 3 letters -> Porter stem. Stemmed tokens shorter than 3 letters are
/// kept (filtering precedes stemming). Only ASCII letters form tokens.
std::vector<std::string> preprocess(std::string_view raw, const StopwordSet& stopwords);

/// Term dictionary with document frequencies. Terms are indexed in
/// lexicographic order so vocabularies are deterministic.
struct Vocabulary {
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<std::string> terms;  // index -> term
    std::vector<std::uint32_t> df;
    std::size_t n_docs = 0;

    std::size_t size() const { return terms.size(); }

    /// idf_w = ln((N + 1) / (df_w + 1)) + 1; always >= 1.
    double idf(std::uint32_t term_index) const;

    static Vocabulary build(std::span<const Document> docs);

    /// "term <TAB> index <TAB> df" rows for auditing.
    void dump_tsv(std::ostream& os) const;
};

enum class Norm { L1, L2 };

/// TF or TFIDF document vectors, normalized to unit L1 or L2 norm.
/// Out-of-vocabulary terms are dropped; a document left with no
/// in-vocabulary terms raises DataError naming its id. L1 vectors are
/// flagged as simplex-embedded.
std::vector<SparseVector> embed(std::span<const Document> docs, const Vocabulary& vocab,
                                bool use_idf, Norm norm);

/// Single-document variant used by fold-strict pipelines; nullopt when the
/// document has no in-vocabulary terms.
std::optional<SparseVector> embed_one(const Document& doc, const Vocabulary& vocab,
                                      bool use_idf, Norm norm);

}  // namespace confkern
