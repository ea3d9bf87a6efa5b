#include "ibir/tokenize.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "ibir/porter.hpp"
#include "minij/lexer.hpp"

namespace ibir {

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Splits an identifier-like word into alphabetic fragments: underscores and
// digits separate; a lower->Upper boundary splits ("parseDate"); an acronym
// run keeps its last capital with the following word ("XMLParser" -> xml,
// parser).
std::vector<std::string> split_word(const std::string& word) {
    std::vector<std::string> frags;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            frags.push_back(lower(cur));
            cur.clear();
        }
    };
    for (std::size_t i = 0; i < word.size(); ++i) {
        char c = word[i];
        if (!std::isalpha(static_cast<unsigned char>(c))) {
            flush();
            continue;
        }
        if (!cur.empty()) {
            bool prev_lower = std::islower(static_cast<unsigned char>(word[i - 1]));
            bool prev_upper = std::isupper(static_cast<unsigned char>(word[i - 1]));
            bool cur_upper = std::isupper(static_cast<unsigned char>(c));
            bool next_lower = i + 1 < word.size() &&
                              std::islower(static_cast<unsigned char>(word[i + 1]));
            if ((prev_lower && cur_upper) || (prev_upper && cur_upper && next_lower)) flush();
        }
        cur += c;
    }
    flush();
    return frags;
}

const std::set<std::string>& stopword_set() {
    static const std::set<std::string> set(stopword_list().begin(), stopword_list().end());
    return set;
}

bool dropped(const std::string& lower_term) {
    return lower_term.empty() || stopword_set().count(lower_term) > 0 ||
           minij::is_minij_keyword(lower_term);
}

}  // namespace

TermCounts tokenize(const std::string& text, TokenizeMode mode) {
    (void)mode;  // shared pipeline; see header
    TermCounts counts;
    auto add = [&](const std::string& lower_term) {
        if (!dropped(lower_term)) ++counts[porter_stem(lower_term)];
    };
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_word_char(text[i])) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < text.size() && is_word_char(text[i])) ++i;
        std::string word = text.substr(start, i - start);
        std::vector<std::string> frags = split_word(word);
        for (const std::string& f : frags) add(f);
        if (frags.size() >= 2) {
            std::string compound;
            for (const std::string& f : frags) compound += f;
            add(compound);
        }
    }
    return counts;
}

const std::vector<std::string>& stopword_list() {
    static const std::vector<std::string> words = {
        "a",     "about",  "above",   "after", "again",  "all",     "an",    "and",
        "any",   "are",    "as",      "at",    "be",     "because", "been",  "before",
        "being", "between", "both",   "but",   "by",     "can",     "could", "did",
        "do",    "does",   "down",    "during", "each",  "few",     "for",   "from",
        "had",   "has",    "have",    "he",    "her",    "him",     "his",   "how",
        "i",     "if",     "in",      "into",  "is",     "it",      "its",   "me",
        "more",  "most",   "my",      "no",    "nor",    "not",     "of",    "off",
        "on",    "only",   "or",      "other", "our",    "out",     "over",  "she",
        "should", "so",    "some",    "such",  "than",   "that",    "the",   "their",
        "them",  "then",   "there",   "these", "they",   "this",    "those", "through",
        "to",    "too",    "under",   "until", "up",     "was",     "we",    "were",
        "what",  "when",   "where",   "which", "while",  "who",     "why",   "will",
        "with",  "would",  "you",     "your",
    };
    return words;
}

}  // namespace ibir
