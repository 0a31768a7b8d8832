#include "confkern/reuters.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "confkern/errors.hpp"

namespace confkern {

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw DataError("cannot read " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bool selected(const std::vector<std::string>& topics, const std::string& t) {
    return std::find(topics.begin(), topics.end(), t) != topics.end();
}

/// Keeps a document iff it carries a selected topic; label = first topic in
/// the document's own list that is selected.
bool finalize(Document& doc, const std::vector<std::string>& doc_topics,
              const CorpusSpec& spec) {
    doc.topics.clear();
    doc.label.clear();
    for (const std::string& t : doc_topics) {
        if (selected(spec.topics, t)) {
            if (doc.label.empty()) doc.label = t;
            if (!selected(doc.topics, t)) doc.topics.push_back(t);
        }
    }
    return !doc.label.empty();
}

std::vector<Document> load_categorized(const CorpusSpec& spec) {
    const auto cats = spec.source_path / "cats.txt";
    std::ifstream in(cats);
    if (!in) throw DataError("categorized layout: missing " + cats.string());
    std::vector<Document> docs;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string rel;
        ls >> rel;
        std::vector<std::string> doc_topics;
        std::string topic;
        while (ls >> topic) doc_topics.push_back(topic);
        Document doc;
        doc.id = rel;
        if (!finalize(doc, doc_topics, spec)) continue;
        doc.raw_text = read_file(spec.source_path / rel);
        docs.push_back(std::move(doc));
    }
    if (docs.empty()) throw DataError("categorized layout: no documents matched the topics");
    return docs;
}

/// Minimal scanner for the Reuters SGML: enough structure awareness for
/// <REUTERS>, <TOPICS><D>, <TITLE> and <BODY>. Entities &lt; &gt; &amp; are
/// decoded; everything else passes through.
class SgmlScanner {
public:
    explicit SgmlScanner(std::string text) : text_(std::move(text)) {}

    void parse_into(std::vector<Document>& docs, const CorpusSpec& spec) {
        std::size_t pos = 0;
        while (true) {
            const std::size_t open = text_.find("<REUTERS", pos);
            if (open == std::string::npos) break;
            const std::size_t close = text_.find("</REUTERS>", open);
            if (close == std::string::npos) {
                throw DataError("sgml: unterminated <REUTERS> element");
            }
            const std::string_view element(text_.data() + open, close - open);
            Document doc;
            doc.id = attr(element, "NEWID");
            std::vector<std::string> doc_topics = topic_list(element);
            if (finalize(doc, doc_topics, spec)) {
                doc.raw_text = tag_text(element, "TITLE");
                const std::string body = tag_text(element, "BODY");
                if (!doc.raw_text.empty() && !body.empty()) doc.raw_text += "\n";
                doc.raw_text += body;
                docs.push_back(std::move(doc));
            }
            pos = close + 10;
        }
    }

private:
    std::string text_;

    static std::string attr(std::string_view element, std::string_view name) {
        const std::size_t tag_end = element.find('>');
        const std::string_view tag = element.substr(0, tag_end);
        const std::string needle = std::string(name) + "=\"";
        const std::size_t at = tag.find(needle);
        if (at == std::string_view::npos) return "";
        const std::size_t start = at + needle.size();
        const std::size_t end = tag.find('"', start);
        return std::string(tag.substr(start, end - start));
    }

    static std::vector<std::string> topic_list(std::string_view element) {
        std::vector<std::string> out;
        const std::size_t open = element.find("<TOPICS>");
        if (open == std::string_view::npos) return out;
        const std::size_t close = element.find("</TOPICS>", open);
        std::string_view block = element.substr(open, close - open);
        std::size_t pos = 0;
        while (true) {
            const std::size_t d = block.find("<D>", pos);
            if (d == std::string_view::npos) break;
            const std::size_t e = block.find("</D>", d);
            if (e == std::string_view::npos) break;
            out.emplace_back(block.substr(d + 3, e - d - 3));
            pos = e + 4;
        }
        return out;
    }

    static std::string tag_text(std::string_view element, std::string_view tag) {
        const std::string open = "<" + std::string(tag) + ">";
        const std::string close = "</" + std::string(tag) + ">";
        const std::size_t at = element.find(open);
        if (at == std::string_view::npos) return "";
        const std::size_t start = at + open.size();
        const std::size_t end = element.find(close, start);
        if (end == std::string_view::npos) return "";
        return decode_entities(element.substr(start, end - start));
    }

    static std::string decode_entities(std::string_view s) {
        std::string out;
        out.reserve(s.size());
        for (std::size_t i = 0; i < s.size();) {
            if (s[i] == '&') {
                if (s.substr(i, 4) == "&lt;") { out += '<'; i += 4; continue; }
                if (s.substr(i, 4) == "&gt;") { out += '>'; i += 4; continue; }
                if (s.substr(i, 5) == "&amp;") { out += '&'; i += 5; continue; }
                if (s.substr(i, 4) == "&#3;") { i += 4; continue; }
            }
            out += s[i++];
        }
        return out;
    }
};

std::vector<Document> load_sgml(const CorpusSpec& spec) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(spec.source_path)) {
        if (entry.path().extension() == ".sgm") files.push_back(entry.path());
    }
    if (files.empty()) throw DataError("sgml layout: no .sgm files in " +
                                       spec.source_path.string());
    std::sort(files.begin(), files.end());
    std::vector<Document> docs;
    for (const auto& f : files) {
        SgmlScanner scanner(read_file(f));
        scanner.parse_into(docs, spec);
    }
    if (docs.empty()) throw DataError("sgml layout: no documents matched the topics");
    return docs;
}

}  // namespace

std::vector<Document> load_reuters(const CorpusSpec& spec) {
    if (!std::filesystem::exists(spec.source_path)) {
        throw DataError("corpus path does not exist: " + spec.source_path.string());
    }
    CorpusLayout layout = spec.layout;
    if (layout == CorpusLayout::Auto) {
        layout = std::filesystem::exists(spec.source_path / "cats.txt")
                     ? CorpusLayout::Categorized
                     : CorpusLayout::Sgml;
    }
    return layout == CorpusLayout::Categorized ? load_categorized(spec) : load_sgml(spec);
}

std::map<std::string, std::size_t> topic_counts(std::span<const Document> docs) {
    std::map<std::string, std::size_t> counts;
    for (const Document& d : docs) ++counts[d.label];
    return counts;
}

}  // namespace confkern
