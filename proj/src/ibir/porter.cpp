#include "ibir/porter.hpp"

#include <array>
#include <cstring>

namespace ibir {

namespace {

// The word being stemmed lives in `b[0..k]` (inclusive end), like the
// reference implementation; j marks the stem end during condition checks.
struct Stemmer {
    std::string b;
    int k = 0;  // last valid index
    int j = 0;  // stem end for the suffix under consideration

    bool is_consonant(int i) const {
        char c = b[static_cast<std::size_t>(i)];
        switch (c) {
            case 'a': case 'e': case 'i': case 'o': case 'u':
                return false;
            case 'y':
                return i == 0 ? true : !is_consonant(i - 1);
            default:
                return true;
        }
    }

    // Number of consonant-vowel sequences in b[0..j]:  [C](VC)^m[V].
    int measure() const {
        int n = 0;
        int i = 0;
        while (true) {
            if (i > j) return n;
            if (!is_consonant(i)) break;
            ++i;
        }
        ++i;
        while (true) {
            while (true) {
                if (i > j) return n;
                if (is_consonant(i)) break;
                ++i;
            }
            ++i;
            ++n;
            while (true) {
                if (i > j) return n;
                if (!is_consonant(i)) break;
                ++i;
            }
            ++i;
        }
    }

    bool vowel_in_stem() const {
        for (int i = 0; i <= j; ++i)
            if (!is_consonant(i)) return true;
        return false;
    }

    bool double_consonant(int i) const {
        if (i < 1) return false;
        if (b[static_cast<std::size_t>(i)] != b[static_cast<std::size_t>(i - 1)]) return false;
        return is_consonant(i);
    }

    // consonant-vowel-consonant ending where the final consonant is not w/x/y;
    // restarting the E (e.g. "hop" -> "hope").
    bool cvc(int i) const {
        if (i < 2 || !is_consonant(i) || is_consonant(i - 1) || !is_consonant(i - 2))
            return false;
        char c = b[static_cast<std::size_t>(i)];
        return c != 'w' && c != 'x' && c != 'y';
    }

    bool ends(const char* s) {
        int len = static_cast<int>(std::strlen(s));
        if (len > k + 1) return false;
        if (b.compare(static_cast<std::size_t>(k - len + 1), static_cast<std::size_t>(len), s) != 0)
            return false;
        j = k - len;
        return true;
    }

    void set_to(const char* s) {
        int len = static_cast<int>(std::strlen(s));
        b.replace(static_cast<std::size_t>(j + 1), std::string::npos, s);
        k = j + len;
    }

    void replace_if_m_positive(const char* s) {
        if (measure() > 0) set_to(s);
    }

    // step1a: plurals.  caresses->caress, ponies->poni, caress->caress, cats->cat
    void step1a() {
        if (b[static_cast<std::size_t>(k)] != 's') return;
        if (ends("sses")) {
            k -= 2;
        } else if (ends("ies")) {
            set_to("i");
        } else if (b[static_cast<std::size_t>(k - 1)] != 's') {
            --k;
        }
    }

    // step1b: -ed / -ing.  agreed->agree, plastered->plaster, motoring->motor
    void step1b() {
        if (ends("eed")) {
            if (measure() > 0) --k;
            return;
        }
        if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
            k = j;
            if (ends("at")) {
                set_to("ate");
            } else if (ends("bl")) {
                set_to("ble");
            } else if (ends("iz")) {
                set_to("ize");
            } else if (double_consonant(k)) {
                char c = b[static_cast<std::size_t>(k)];
                if (c != 'l' && c != 's' && c != 'z') --k;
            } else {
                j = k;
                if (measure() == 1 && cvc(k)) set_to("e");
            }
        }
    }

    // step1c: y -> i when there is another vowel in the stem.
    void step1c() {
        if (ends("y") && vowel_in_stem()) b[static_cast<std::size_t>(k)] = 'i';
    }

    struct Rule {
        const char* suffix;
        const char* replacement;
    };

    // Applies the longest matching suffix rule whose stem has m > 0.
    // Rules within a step are tried longest-suffix-first; once a suffix
    // matches, only that rule's condition decides (no fallback).
    template <std::size_t N>
    void apply_rules(const std::array<Rule, N>& rules) {
        for (const Rule& r : rules) {
            if (ends(r.suffix)) {
                if (measure() > 0) set_to(r.replacement);
                return;
            }
        }
    }

    void step2() {
        static const std::array<Rule, 20> rules = {{
            {"ational", "ate"}, {"ization", "ize"}, {"iveness", "ive"}, {"fulness", "ful"},
            {"ousness", "ous"}, {"tional", "tion"}, {"biliti", "ble"},  {"entli", "ent"},
            {"ousli", "ous"},   {"ation", "ate"},  {"alism", "al"},    {"aliti", "al"},
            {"iviti", "ive"},   {"enci", "ence"},  {"anci", "ance"},   {"izer", "ize"},
            {"abli", "able"},   {"alli", "al"},    {"ator", "ate"},    {"eli", "e"},
        }};
        apply_rules(rules);
    }

    void step3() {
        static const std::array<Rule, 7> rules = {{
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
            {"ical", "ic"},  {"ful", ""},   {"ness", ""},
        }};
        apply_rules(rules);
    }

    // step4: strip residual suffixes when m > 1.
    void step4() {
        static const std::array<Rule, 18> rules = {{
            {"ement", ""}, {"ance", ""}, {"ence", ""}, {"able", ""}, {"ible", ""},
            {"ment", ""},  {"ant", ""},  {"ent", ""},  {"ism", ""},  {"ate", ""},
            {"iti", ""},   {"ous", ""},  {"ive", ""},  {"ize", ""},  {"ion", ""},
            {"al", ""},    {"er", ""},   {"ic", ""},
        }};
        for (const Rule& r : rules) {
            if (!ends(r.suffix)) continue;
            if (std::strcmp(r.suffix, "ion") == 0) {
                char c = j >= 0 ? b[static_cast<std::size_t>(j)] : '\0';
                if (c != 's' && c != 't') return;
            }
            if (measure() > 1) k = j;
            return;
        }
        if (ends("ou")) {
            if (measure() > 1) k = j;
        }
    }

    // step5: final -e removal ("probate"->"probat", "rate"->"rate") and
    // -ll reduction ("controll"->"control").
    void step5() {
        j = k;
        if (b[static_cast<std::size_t>(k)] == 'e') {
            int m = measure();
            if (m > 1 || (m == 1 && !cvc(k - 1))) --k;
        }
        if (b[static_cast<std::size_t>(k)] == 'l' && double_consonant(k)) {
            j = k;
            if (measure() > 1) --k;
        }
    }
};

}  // namespace

std::string porter_stem(const std::string& word) {
    if (word.size() <= 2) return word;
    Stemmer s;
    s.b = word;
    s.k = static_cast<int>(word.size()) - 1;
    s.step1a();
    s.step1b();
    s.step1c();
    s.step2();
    s.step3();
    s.step4();
    s.step5();
    return s.b.substr(0, static_cast<std::size_t>(s.k + 1));
}

}  // namespace ibir
