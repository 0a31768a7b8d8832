#include "confkern/textprep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "confkern/errors.hpp"
#include "confkern/porter.hpp"

namespace confkern {

StopwordSet load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open stopword list: " + path.string());
    StopwordSet out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        out.insert(line);
    }
    return out;
}

std::vector<std::string> preprocess(std::string_view raw, const StopwordSet& stopwords) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (current.empty()) return;
        if (current.size() >= 3 && !stopwords.contains(current)) {
            tokens.push_back(porter_stem(current));
        }
        current.clear();
    };
    for (unsigned char c : raw) {
        if (c >= 'A' && c <= 'Z') {
            current.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if (c >= 'a' && c <= 'z') {
            current.push_back(static_cast<char>(c));
        } else {
            // Everything else, including non-ASCII bytes, is a delimiter.
            flush();
        }
    }
    flush();
    // Stopwords are removed before stemming; the length filter also sees the
    // unstemmed token, so stems shorter than 3 letters survive.
    return tokens;
}

double Vocabulary::idf(std::uint32_t term_index) const {
    const double smoothed = (static_cast<double>(n_docs) + 1.0) /
                            (static_cast<double>(df[term_index]) + 1.0);
    return std::log(smoothed) + 1.0;
}

Vocabulary Vocabulary::build(std::span<const Document> docs) {
    std::map<std::string, std::uint32_t> counts;  // ordered -> deterministic indices
    for (const Document& d : docs) {
        std::set<std::string> seen(d.tokens.begin(), d.tokens.end());
        for (const std::string& t : seen) ++counts[t];
    }
    Vocabulary v;
    v.n_docs = docs.size();
    v.terms.reserve(counts.size());
    v.df.reserve(counts.size());
    for (const auto& [term, df] : counts) {
        v.index.emplace(term, static_cast<std::uint32_t>(v.terms.size()));
        v.terms.push_back(term);
        v.df.push_back(df);
    }
    return v;
}

void Vocabulary::dump_tsv(std::ostream& os) const {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        os << terms[i] << '\t' << i << '\t' << df[i] << '\n';
    }
}

std::optional<SparseVector> embed_one(const Document& doc, const Vocabulary& vocab,
                                      bool use_idf, Norm norm) {
    std::map<std::uint32_t, double> weights;
    for (const std::string& t : doc.tokens) {
        auto it = vocab.index.find(t);
        if (it != vocab.index.end()) weights[it->second] += 1.0;
    }
    if (weights.empty()) return std::nullopt;
    if (use_idf) {
        for (auto& [idx, w] : weights) w *= vocab.idf(idx);
    }
    double scale = 0.0;
    if (norm == Norm::L1) {
        for (const auto& [idx, w] : weights) scale += w;
    } else {
        for (const auto& [idx, w] : weights) scale += w * w;
        scale = std::sqrt(scale);
    }
    std::vector<SparseVector::Entry> entries;
    entries.reserve(weights.size());
    for (const auto& [idx, w] : weights) entries.push_back({idx, w / scale});
    return SparseVector(vocab.size(), std::move(entries), /*simplex=*/norm == Norm::L1);
}

std::vector<SparseVector> embed(std::span<const Document> docs, const Vocabulary& vocab,
                                bool use_idf, Norm norm) {
    std::vector<SparseVector> out;
    out.reserve(docs.size());
    for (const Document& d : docs) {
        auto v = embed_one(d, vocab, use_idf, norm);
        if (!v) {
            throw DataError("embed: document '" + d.id + "' has no in-vocabulary terms");
        }
        out.push_back(std::move(*v));
    }
    return out;
}

}  // namespace confkern
