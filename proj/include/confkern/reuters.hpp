#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "confkern/textprep.hpp"

namespace confkern {

enum class CorpusLayout { Auto, Categorized, Sgml };

/// Reuters-21578 ingestion. Two on-disk layouts are supported:
///
///   Categorized  the NLTK distribution: a cats.txt mapping relative file
///                paths to topic lists, one document per file
///   Sgml         the original distribution: reut2-*.sgm files with
///                <REUTERS> elements
///
/// Auto picks Categorized when cats.txt exists under source_path.
/// This loader does not download anything; see scripts/fetch_reuters.sh.
struct CorpusSpec {
    std::filesystem::path source_path;
    std::vector<std::string> topics = {"earn", "acq", "money-fx", "grain", "crude"};
    int min_docs = 500;
    CorpusLayout layout = CorpusLayout::Auto;
};

/// Documents carrying at least one selected topic. Each document's label is
/// the first of its own topic list that is selected; the intersection with
/// the selected topics is kept for one-vs-one exclusion. raw_text is the
/// title plus body; tokens are left empty (preprocessing is a separate step).
std::vector<Document> load_reuters(const CorpusSpec& spec);

/// Documents per selected topic (by assigned label), for reporting.
std::map<std::string, std::size_t> topic_counts(std::span<const Document> docs);

}  // namespace confkern
