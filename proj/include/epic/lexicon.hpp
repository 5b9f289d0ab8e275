#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "epic/errors.hpp"
#include "epic/strings.hpp"

namespace epic {

inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw LexiconError("cosine_similarity: dimension mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) throw LexiconError("cosine_similarity: undefined for a zero vector");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Word vectors in the plain-text format: first line "<count> <dimension>",
// then one "word f1 f2 ... fd" row per line. Vectors are L2-normalized at
// load so cosine similarity reduces to a dot product.
class EmbeddingIndex {
public:
    EmbeddingIndex() = default;

    static EmbeddingIndex load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw LexiconError("cannot open embeddings file: " + path);
        EmbeddingIndex idx;
        std::string header;
        if (!std::getline(in, header)) throw LexiconError("empty embeddings file: " + path);
        std::istringstream hs{header};
        size_t count = 0;
        if (!(hs >> count >> idx.dimension_) || idx.dimension_ == 0)
            throw LexiconError("bad embeddings header (want \"<count> <dim>\"): " + path);
        idx.rows_.reserve(count * idx.dimension_);
        std::string line;
        size_t row = 0;
        while (std::getline(in, line)) {
            if (strings::trim(line).empty()) continue;
            std::istringstream ls{line};
            std::string word;
            ls >> word;
            double norm2 = 0.0;
            size_t base = idx.rows_.size();
            idx.rows_.resize(base + idx.dimension_);
            for (size_t d = 0; d < idx.dimension_; ++d) {
                if (!(ls >> idx.rows_[base + d]))
                    throw LexiconError("embeddings row for '" + word + "' has fewer than " +
                                       std::to_string(idx.dimension_) + " values");
                norm2 += idx.rows_[base + d] * idx.rows_[base + d];
            }
            if (norm2 == 0.0) throw LexiconError("embeddings row for '" + word + "' is the zero vector");
            double inv = 1.0 / std::sqrt(norm2);
            for (size_t d = 0; d < idx.dimension_; ++d) idx.rows_[base + d] *= inv;
            idx.index_.emplace(strings::lowercase(word), row++);
        }
        return idx;
    }

    size_t dimension() const { return dimension_; }
    size_t size() const { return index_.size(); }
    bool contains(const std::string& word) const { return index_.count(word) > 0; }

    std::vector<std::string> vocabulary() const {
        std::vector<std::string> words;
        words.reserve(index_.size());
        for (const auto& [w, row] : index_) words.push_back(w);
        return words;
    }

    std::span<const double> vector_of(const std::string& word) const {
        auto it = index_.find(word);
        if (it == index_.end()) throw LexiconError("word not in embedding index: " + word);
        return {rows_.data() + it->second * dimension_, dimension_};
    }

    // All words (excluding `word` itself) with dot(v_word, v_other) >= sim_t,
    // sorted by similarity descending; ties broken lexicographically so the
    // ranking is stable across runs. Linear scan: the index is small.
    std::vector<std::pair<std::string, double>> neighbors(const std::string& word, double sim_t) const {
        auto it = index_.find(word);
        if (it == index_.end()) return {};
        std::span<const double> v{rows_.data() + it->second * dimension_, dimension_};
        std::vector<std::pair<std::string, double>> out;
        for (const auto& [other, row] : index_) {
            if (other == word) continue;
            const double* u = rows_.data() + row * dimension_;
            double dot = 0.0;
            for (size_t d = 0; d < dimension_; ++d) dot += v[d] * u[d];
            if (dot >= sim_t) out.emplace_back(other, dot);
        }
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        return out;
    }

    // Similarity between two indexed words (vectors are unit length).
    double similarity(const std::string& a, const std::string& b) const {
        auto va = vector_of(a);
        auto vb = vector_of(b);
        double dot = 0.0;
        for (size_t d = 0; d < dimension_; ++d) dot += va[d] * vb[d];
        return dot;
    }

    void insert(const std::string& word, std::vector<double> vec) {
        if (dimension_ == 0) dimension_ = vec.size();
        if (vec.size() != dimension_) throw LexiconError("insert: dimension mismatch");
        double norm2 = 0.0;
        for (double x : vec) norm2 += x * x;
        if (norm2 == 0.0) throw LexiconError("insert: zero vector");
        double inv = 1.0 / std::sqrt(norm2);
        size_t row = index_.size();
        for (double x : vec) rows_.push_back(x * inv);
        index_.emplace(strings::lowercase(word), row);
    }

private:
    size_t dimension_ = 0;
    std::vector<double> rows_;
    std::unordered_map<std::string, size_t> index_;
};

// Lemma -> synonym lemmas, loaded from a UTF-8 TSV: "lemma<TAB>syn1,syn2,...".
// Entries are lowercased; self-references are dropped.
class SynonymTable {
public:
    SynonymTable() = default;

    static SynonymTable load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw LexiconError("cannot open synonyms file: " + path);
        SynonymTable t;
        std::string line;
        while (std::getline(in, line)) {
            auto trimmed = strings::trim(line);
            if (trimmed.empty() || trimmed.front() == '#') continue;
            size_t tab = line.find('\t');
            if (tab == std::string::npos) throw LexiconError("synonyms line missing TAB: " + line);
            std::string lemma = strings::lowercase(strings::trim(line.substr(0, tab)));
            std::vector<std::string> syns;
            for (auto& s : strings::split(line.substr(tab + 1), ',')) {
                std::string w = strings::lowercase(strings::trim(s));
                if (!w.empty() && w != lemma) syns.push_back(std::move(w));
            }
            t.entries_[lemma] = std::move(syns);
        }
        return t;
    }

    void add(const std::string& lemma, std::vector<std::string> syns) {
        std::erase_if(syns, [&](const std::string& s) { return s == lemma; });
        entries_[strings::lowercase(lemma)] = std::move(syns);
    }

    bool contains(const std::string& lemma) const { return entries_.count(lemma) > 0; }
    size_t size() const { return entries_.size(); }

    const std::vector<std::string>& synonyms_of(const std::string& lemma) const {
        static const std::vector<std::string> kEmpty;
        auto it = entries_.find(lemma);
        return it == entries_.end() ? kEmpty : it->second;
    }

    const std::unordered_map<std::string, std::vector<std::string>>& entries() const { return entries_; }

private:
    std::unordered_map<std::string, std::vector<std::string>> entries_;
};

namespace detail {
// The bundled stop-word list: 179 English function words (the classic NLTK
// list). Overridable via StopWordSet::load.
inline const char* kDefaultStopWords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're", "you've", "you'll",
    "you'd", "your", "yours", "yourself", "yourselves", "he", "him", "his", "himself", "she", "she's",
    "her", "hers", "herself", "it", "it's", "its", "itself", "they", "them", "their", "theirs",
    "themselves", "what", "which", "who", "whom", "this", "that", "that'll", "these", "those", "am",
    "is", "are", "was", "were", "be", "been", "being", "have", "has", "had", "having", "do", "does",
    "did", "doing", "a", "an", "the", "and", "but", "if", "or", "because", "as", "until", "while",
    "of", "at", "by", "for", "with", "about", "against", "between", "into", "through", "during",
    "before", "after", "above", "below", "to", "from", "up", "down", "in", "out", "on", "off", "over",
    "under", "again", "further", "then", "once", "here", "there", "when", "where", "why", "how", "all",
    "any", "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not", "only",
    "own", "same", "so", "than", "too", "very", "s", "t", "can", "will", "just", "don", "don't",
    "should", "should've", "now", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "aren't",
    "couldn", "couldn't", "didn", "didn't", "doesn", "doesn't", "hadn", "hadn't", "hasn", "hasn't",
    "haven", "haven't", "isn", "isn't", "ma", "mightn", "mightn't", "mustn", "mustn't", "needn",
    "needn't", "shan", "shan't", "shouldn", "shouldn't", "wasn", "wasn't", "weren", "weren't", "won",
    "won't", "wouldn", "wouldn't"};

// Irregular forms the suffix rules cannot reach. A larger table can be
// loaded from file; these cover common prose and doubled-consonant forms.
inline const std::pair<const char*, const char*> kDefaultLemmaExceptions[] = {
    {"went", "go"},         {"gone", "go"},        {"goes", "go"},       {"made", "make"},
    {"took", "take"},       {"taken", "take"},     {"given", "give"},    {"gave", "give"},
    {"ran", "run"},         {"running", "run"},    {"was", "be"},        {"were", "be"},
    {"is", "be"},           {"are", "be"},         {"been", "be"},       {"being", "be"},
    {"has", "have"},        {"had", "have"},       {"did", "do"},        {"done", "do"},
    {"said", "say"},        {"got", "get"},        {"gotten", "get"},    {"getting", "get"},
    {"came", "come"},       {"wrote", "write"},    {"written", "write"}, {"found", "find"},
    {"held", "hold"},       {"kept", "keep"},      {"left", "leave"},    {"lost", "lose"},
    {"meant", "mean"},      {"met", "meet"},       {"paid", "pay"},      {"saw", "see"},
    {"seen", "see"},        {"sent", "send"},      {"built", "build"},   {"bought", "buy"},
    {"brought", "bring"},   {"caught", "catch"},   {"chose", "choose"},  {"chosen", "choose"},
    {"drew", "draw"},       {"drawn", "draw"},     {"ate", "eat"},       {"eaten", "eat"},
    {"fell", "fall"},       {"fallen", "fall"},    {"felt", "feel"},     {"spoke", "speak"},
    {"spoken", "speak"},    {"stood", "stand"},    {"thought", "think"}, {"told", "tell"},
    {"understood", "understand"},                  {"knew", "know"},     {"known", "know"},
    {"grew", "grow"},       {"grown", "grow"},     {"threw", "throw"},   {"thrown", "throw"},
    {"began", "begin"},     {"begun", "begin"},    {"beginning", "begin"},
    {"broke", "break"},     {"broken", "break"},   {"better", "good"},   {"best", "good"},
    {"worse", "bad"},       {"worst", "bad"},      {"children", "child"},{"men", "man"},
    {"women", "woman"},     {"feet", "foot"},      {"teeth", "tooth"},   {"mice", "mouse"},
    {"lives", "life"},      {"leaves", "leaf"},    {"indices", "index"}, {"matrices", "matrix"},
    {"vertices", "vertex"}, {"splitting", "split"},{"putting", "put"},   {"setting", "set"},
    {"mapping", "map"},     {"summing", "sum"},    {"stopping", "stop"}, {"dropping", "drop"},
    {"swapping", "swap"},   {"stopped", "stop"},   {"dropped", "drop"},  {"swapped", "swap"},
    {"mapped", "map"},      {"fitting", "fit"},    {"slicing", "slice"}, {"sorting", "sort"}};

// Suffix detachment rules tried in order: (suffix, replacement).
inline const std::pair<const char*, const char*> kSuffixRules[] = {
    {"sses", "ss"}, {"ches", "ch"}, {"shes", "sh"}, {"xes", "x"}, {"zes", "z"}, {"ies", "y"},
    {"ves", "f"},   {"ses", "s"},   {"es", "e"},    {"es", ""},   {"s", ""},    {"ied", "y"},
    {"ed", "e"},    {"ed", ""},     {"ing", "e"},   {"ing", ""},  {"er", ""},   {"er", "e"},
    {"est", ""},    {"est", "e"},   {"men", "man"}};
}  // namespace detail

class StopWordSet {
public:
    StopWordSet() {
        for (const char* w : detail::kDefaultStopWords) words_.insert(w);
    }

    // One word per line; replaces the bundled list.
    static StopWordSet load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw LexiconError("cannot open stop-word file: " + path);
        StopWordSet s;
        s.words_.clear();
        std::string line;
        while (std::getline(in, line)) {
            auto w = strings::trim(line);
            if (!w.empty() && w.front() != '#') s.words_.insert(strings::lowercase(w));
        }
        return s;
    }

    bool contains(const std::string& word) const { return words_.count(strings::lowercase(word)) > 0; }
    size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

// Dictionary-validated suffix-rule lemmatizer. Lookup order: exceptions
// table, the word itself if it is a known lemma, then each suffix rule whose
// result is a known lemma. With no dictionary loaded the first applicable
// rule wins; with one, unvalidated candidates are rejected and the word
// comes back unchanged (lowercased). Total: never fails.
class Lemmatizer {
public:
    Lemmatizer() {
        for (auto [from, to] : detail::kDefaultLemmaExceptions) exceptions_.emplace(from, to);
    }

    // TSV "inflected<TAB>lemma"; extends (and can override) the defaults.
    void load_exceptions(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw LexiconError("cannot open lemma-exceptions file: " + path);
        std::string line;
        while (std::getline(in, line)) {
            auto trimmed = strings::trim(line);
            if (trimmed.empty() || trimmed.front() == '#') continue;
            size_t tab = line.find('\t');
            if (tab == std::string::npos) throw LexiconError("lemma-exceptions line missing TAB: " + line);
            exceptions_[strings::lowercase(strings::trim(line.substr(0, tab)))] =
                strings::lowercase(strings::trim(line.substr(tab + 1)));
        }
    }

    void set_dictionary(std::unordered_set<std::string> lemmas) { dictionary_ = std::move(lemmas); }

    std::string lemmatize(std::string_view word) const {
        std::string w = strings::lowercase(word);
        if (auto it = exceptions_.find(w); it != exceptions_.end()) return it->second;
        if (!dictionary_.empty() && dictionary_.count(w)) return w;
        for (auto [suffix, repl] : detail::kSuffixRules) {
            std::string_view suf{suffix};
            if (w.size() <= suf.size() || !w.ends_with(suf)) continue;
            std::string candidate = w.substr(0, w.size() - suf.size()) + repl;
            if (candidate.size() < 2) continue;
            if (dictionary_.empty()) return candidate;
            if (dictionary_.count(candidate)) return candidate;
        }
        return w;
    }

private:
    std::unordered_map<std::string, std::string> exceptions_;
    std::unordered_set<std::string> dictionary_;
};

struct RelatedWordsQuery {
    std::string lemma;
    double sim_t = 0.5;   // minimum cosine similarity for embedded candidates
    size_t num_t = 10;    // maximum candidates after position 0

    RelatedWordsQuery(std::string lemma_, double sim_t_, size_t num_t_)
        : lemma(std::move(lemma_)), sim_t(sim_t_), num_t(num_t_) {
        if (sim_t < 0.0 || sim_t > 1.0) throw LexiconError("sim_t must be in [0,1]");
    }
};

enum class TokenPosition { sentence_initial, interior };

struct LexiconPaths {
    std::string embeddings;
    std::string synonyms;
    std::string stopwords;         // optional; bundled list when empty
    std::string lemma_exceptions;  // optional
};

// The offline related-words machinery: lemmatization, stop-word and
// proper-noun gating, and ranked neighbor lookup merging the synonym table
// with embedding cosine similarity. Immutable after load; concurrent
// read-only queries are safe.
class Lexicon {
public:
    Lexicon() = default;

    Lexicon(EmbeddingIndex index, SynonymTable table, StopWordSet stops = {}, Lemmatizer lemmatizer = {})
        : index_(std::move(index)),
          table_(std::move(table)),
          stops_(std::move(stops)),
          lemmatizer_(std::move(lemmatizer)) {
        rebuild_dictionary();
    }

    static Lexicon load(const LexiconPaths& paths) {
        Lexicon lx;
        if (!paths.embeddings.empty()) lx.index_ = EmbeddingIndex::load(paths.embeddings);
        if (!paths.synonyms.empty()) lx.table_ = SynonymTable::load(paths.synonyms);
        if (!paths.stopwords.empty()) lx.stops_ = StopWordSet::load(paths.stopwords);
        if (!paths.lemma_exceptions.empty()) lx.lemmatizer_.load_exceptions(paths.lemma_exceptions);
        lx.rebuild_dictionary();
        return lx;
    }

    const EmbeddingIndex& embeddings() const { return index_; }
    const SynonymTable& synonyms() const { return table_; }
    const StopWordSet& stop_words() const { return stops_; }

    std::string lemmatize(std::string_view word) const { return lemmatizer_.lemmatize(word); }

    // A token is off limits for mutation when it is a stop word, a proper
    // noun (capitalized away from sentence start), a code identifier
    // (underscore, digit, or internal capital), or pure punctuation.
    bool is_mutable_token(std::string_view token, TokenPosition position) const {
        if (token.empty()) return false;
        bool any_alpha = false;
        for (size_t i = 0; i < token.size(); ++i) {
            char c = token[i];
            if (strings::is_alpha(c)) any_alpha = true;
            if (c == '_' || strings::is_digit(c)) return false;
            if (i > 0 && strings::is_upper(c)) return false;
        }
        if (!any_alpha) return false;  // pure punctuation
        if (strings::is_upper(token.front()) && position != TokenPosition::sentence_initial) return false;
        if (stops_.contains(std::string(token))) return false;
        return true;
    }

    // Ranked related-words lookup. Position 0 is always the queried lemma.
    // Candidates come from the union of the synonym table entry and the
    // embedding neighbors; embedded candidates are ranked by similarity
    // descending (>= sim_t), candidates without a vector follow in table
    // order, and the list after position 0 is truncated to num_t.
    std::vector<std::string> get_related_words(const RelatedWordsQuery& query) const {
        std::vector<std::string> out{query.lemma};
        const auto& syns = table_.synonyms_of(query.lemma);
        std::vector<std::string> ranked;
        std::unordered_set<std::string> seen;
        if (index_.contains(query.lemma)) {
            auto nbrs = index_.neighbors(query.lemma, query.sim_t);
            for (auto& [w, sim] : nbrs)
                if (seen.insert(w).second) ranked.push_back(w);
            for (const auto& s : syns) {
                if (s == query.lemma || index_.contains(s)) continue;  // embedded ones already ranked/filtered
                if (seen.insert(s).second) ranked.push_back(s);
            }
        } else {
            for (const auto& s : syns)
                if (s != query.lemma && seen.insert(s).second) ranked.push_back(s);
        }
        if (ranked.size() > query.num_t) ranked.resize(query.num_t);
        out.insert(out.end(), ranked.begin(), ranked.end());
        return out;
    }

private:
    void rebuild_dictionary() {
        std::unordered_set<std::string> lemmas;
        for (const auto& [lemma, syns] : table_.entries()) {
            lemmas.insert(lemma);
            for (const auto& s : syns) lemmas.insert(s);
        }
        for (auto& w : index_.vocabulary()) lemmas.insert(std::move(w));
        lemmatizer_.set_dictionary(std::move(lemmas));
    }

    EmbeddingIndex index_;
    SynonymTable table_;
    StopWordSet stops_;
    Lemmatizer lemmatizer_;
};

}  // namespace epic
